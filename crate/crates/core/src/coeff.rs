//! The coefficient interface shared by the function algebra and the
//! supermatrix code.

use std::fmt::{Debug, Display};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::scalars::{sqrt_rational, GaussRational, Scalar};

pub trait Coefficient:
    Clone + Debug + Display + Ord + Send + Sync + Zero + One + 'static
{
    fn add_ref(&self, o: &Self) -> Self;
    fn sub_ref(&self, o: &Self) -> Self;
    fn mul_ref(&self, o: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn from_i64(n: i64) -> Self;
    fn from_rational(r: BigRational) -> Self;
    /// The value as a real rational, when it is one.
    fn as_rational(&self) -> Option<BigRational>;
    /// An exact square root, when one exists in the field.
    fn sqrt_exact(&self) -> Option<Self>;
    /// `i`, when the field contains it.
    fn imaginary_unit() -> Option<Self>;

    fn div_ref(&self, o: &Self) -> Option<Self> {
        o.inv().map(|i| self.mul_ref(&i))
    }
}

impl Coefficient for Scalar {
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        Scalar::inv(self)
    }
    fn from_i64(n: i64) -> Self {
        Scalar::from_i64(n)
    }
    fn from_rational(r: BigRational) -> Self {
        Scalar::from_rational(r)
    }
    fn as_rational(&self) -> Option<BigRational> {
        Scalar::as_rational(self)
    }
    fn sqrt_exact(&self) -> Option<Self> {
        self.sqrt_monomial().ok()
    }
    fn imaginary_unit() -> Option<Self> {
        Some(Scalar::i())
    }
}

impl Coefficient for GaussRational {
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        GaussRational::inv(self)
    }
    fn from_i64(n: i64) -> Self {
        GaussRational::from_i64(n)
    }
    fn from_rational(r: BigRational) -> Self {
        GaussRational::real(r)
    }
    fn as_rational(&self) -> Option<BigRational> {
        self.is_real().then(|| self.re.clone())
    }
    fn sqrt_exact(&self) -> Option<Self> {
        self.sqrt()
    }
    fn imaginary_unit() -> Option<Self> {
        Some(GaussRational::i())
    }
}

impl Coefficient for BigRational {
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(n.into())
    }
    fn from_rational(r: BigRational) -> Self {
        r
    }
    fn as_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }
    fn sqrt_exact(&self) -> Option<Self> {
        if self.is_negative() {
            None
        } else {
            sqrt_rational(self)
        }
    }
    fn imaginary_unit() -> Option<Self> {
        None
    }
}

/// `n!` as a coefficient.
pub fn factorial<S: Coefficient>(n: u32) -> S {
    let mut acc = S::one();
    for k in 2..=n {
        acc = acc.mul_ref(&S::from_i64(k as i64));
    }
    acc
}

