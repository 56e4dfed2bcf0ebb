//! Gaussian rationals `a + b i` with `a, b ∈ ℚ`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct GaussRational {
    pub re: BigRational,
    pub im: BigRational,
}

pub(crate) fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// Exact square root of a non-negative rational, if it is a perfect square.
pub fn sqrt_rational(r: &BigRational) -> Option<BigRational> {
    rational_sqrt(r)
}

impl GaussRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRational { re, im }
    }

    pub fn from_i64(n: i64) -> Self {
        GaussRational::new(BigRational::from_integer(n.into()), BigRational::zero())
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        GaussRational::new(rat(n, d), BigRational::zero())
    }

    pub fn real(r: BigRational) -> Self {
        GaussRational::new(r, BigRational::zero())
    }

    pub fn i() -> Self {
        GaussRational::new(BigRational::zero(), BigRational::one())
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRational::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(GaussRational::new(&self.re / &n, -&self.im / &n))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = GaussRational::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Square root inside ℚ(i), choosing the root with positive real part
    /// (or positive imaginary part when the real part vanishes).
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        let modulus = rational_sqrt(&self.norm_sqr())?;
        let two = rat(2, 1);
        let x2 = (&modulus + &self.re) / &two;
        let y2 = (&modulus - &self.re) / &two;
        let x = rational_sqrt(&x2)?;
        let mut y = rational_sqrt(&y2)?;
        if self.im.is_negative() {
            y = -y;
        }
        let root = if x.is_zero() {
            GaussRational::new(x, y.abs())
        } else {
            GaussRational::new(x, y)
        };
        debug_assert_eq!(&(&root * &root), self);
        Some(root)
    }

    /// Splits `self = u·r` with `u ∈ {1, i, -1, -i}` and `r` a positive
    /// rational, when possible. Returns the exponent `k` with `u = i^k`.
    pub fn unit_split(&self) -> Option<(u8, BigRational)> {
        if self.im.is_zero() && self.re.is_positive() {
            Some((0, self.re.clone()))
        } else if self.re.is_zero() && self.im.is_positive() {
            Some((1, self.im.clone()))
        } else if self.im.is_zero() && self.re.is_negative() {
            Some((2, -self.re.clone()))
        } else if self.re.is_zero() && self.im.is_negative() {
            Some((3, -self.im.clone()))
        } else {
            None
        }
    }
}

impl Zero for GaussRational {
    fn zero() -> Self {
        GaussRational::new(BigRational::zero(), BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussRational {
    fn one() -> Self {
        GaussRational::new(BigRational::one(), BigRational::zero())
    }
}

impl<'a> Add<&'a GaussRational> for &'a GaussRational {
    type Output = GaussRational;
    fn add(self, o: &GaussRational) -> GaussRational {
        GaussRational::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl<'a> Sub<&'a GaussRational> for &'a GaussRational {
    type Output = GaussRational;
    fn sub(self, o: &GaussRational) -> GaussRational {
        GaussRational::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl<'a> Mul<&'a GaussRational> for &'a GaussRational {
    type Output = GaussRational;
    fn mul(self, o: &GaussRational) -> GaussRational {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussRational::real(&self.re * &o.re);
        }
        GaussRational::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl<'a> Div<&'a GaussRational> for &'a GaussRational {
    type Output = GaussRational;
    fn div(self, o: &GaussRational) -> GaussRational {
        self * &o.inv().expect("division by zero Gaussian rational")
    }
}

impl Neg for &GaussRational {
    type Output = GaussRational;
    fn neg(self) -> GaussRational {
        GaussRational::new(-self.re.clone(), -self.im.clone())
    }
}

macro_rules! by_value {
    ($tr:ident, $m:ident) => {
        impl $tr for GaussRational {
            type Output = GaussRational;
            fn $m(self, o: GaussRational) -> GaussRational {
                (&self).$m(&o)
            }
        }
    };
}
by_value!(Add, add);
by_value!(Sub, sub);
by_value!(Mul, mul);
by_value!(Div, div);

impl Neg for GaussRational {
    type Output = GaussRational;
    fn neg(self) -> GaussRational {
        -&self
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl GaussRational {
    /// Renders as a factor that can be followed by `*`, without a leading
    /// sign; the boolean is true when the value must be negated.
    pub(crate) fn render_factor(&self) -> (bool, String) {
        if self.im.is_zero() {
            return (self.re.is_negative(), fmt_rational(&self.re.abs()));
        }
        if self.re.is_zero() {
            let neg = self.im.is_negative();
            let m = self.im.abs();
            let s = if m.is_one() {
                "i".to_string()
            } else {
                format!("{}*i", fmt_rational(&m))
            };
            return (neg, s);
        }
        (false, format!("({})", self))
    }
}

impl fmt::Display for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", fmt_rational(&self.re));
        }
        let (neg_i, im) = {
            let m = self.im.abs();
            let s = if m.is_one() {
                "i".to_string()
            } else {
                format!("{}*i", fmt_rational(&m))
            };
            (self.im.is_negative(), s)
        };
        if self.re.is_zero() {
            if neg_i {
                write!(f, "-{}", im)
            } else {
                write!(f, "{}", im)
            }
        } else {
            write!(f, "{} {} {}", fmt_rational(&self.re), if neg_i { "-" } else { "+" }, im)
        }
    }
}
