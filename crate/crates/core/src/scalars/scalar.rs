use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::display::render_scalar;
use super::gauss::{sqrt_rational, GaussRational};
use super::poly::{gcd, Mono, Poly, Sym};
use super::ScalarError;

/// An element of ℚ(i)(q₁,…,q_r, τ): a reduced fraction of polynomials with
/// monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scalar {
    num: Poly,
    den: Poly,
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Scalar {
    pub fn from_parts(num: Poly, den: Poly) -> Result<Scalar, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Scalar::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> Scalar {
        if num.is_zero() {
            return Scalar { num, den: Poly::one() };
        }
        if let Some(c) = den.as_constant() {
            let k = c.inv().expect("nonzero denominator");
            return Scalar { num: num.scale(&k), den: Poly::one() };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        let (den, lc) = den.monic();
        let num = num.scale(&lc.inv().unwrap());
        Scalar { num, den }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn from_i64(n: i64) -> Scalar {
        Scalar::from_gauss(GaussRational::from_i64(n))
    }

    pub fn from_ratio(n: i64, d: i64) -> Scalar {
        Scalar::from_gauss(GaussRational::from_ratio(n, d))
    }

    pub fn from_rational(r: BigRational) -> Scalar {
        Scalar::from_gauss(GaussRational::real(r))
    }

    pub fn from_gauss(c: GaussRational) -> Scalar {
        Scalar { num: Poly::constant(c), den: Poly::one() }
    }

    pub fn i() -> Scalar {
        Scalar::from_gauss(GaussRational::i())
    }

    /// The parameter `p`, stored as `q_p²`.
    pub fn param(name: &str) -> Scalar {
        Scalar::monomial(GaussRational::one(), Mono::var(Sym::root(name), 2))
    }

    /// The formal root `q_p = p^{1/2}`.
    pub fn param_root(name: &str) -> Scalar {
        Scalar::monomial(GaussRational::one(), Mono::var(Sym::root(name), 1))
    }

    /// `τ = (2π)^{1/2}`.
    pub fn tau() -> Scalar {
        Scalar::monomial(GaussRational::one(), Mono::var(Sym::Tau, 1))
    }

    pub fn two_pi() -> Scalar {
        Scalar::monomial(GaussRational::one(), Mono::var(Sym::Tau, 2))
    }

    /// `(2π)^{e/2}` for any integer `e`.
    pub fn two_pi_half_power(e: i64) -> Scalar {
        Scalar::tau().powi(e)
    }

    pub fn monomial(c: GaussRational, m: Mono) -> Scalar {
        Scalar { num: Poly::term(c, m), den: Poly::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn as_gauss(&self) -> Option<GaussRational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.as_gauss().filter(|g| g.is_real()).map(|g| g.re)
    }

    pub fn is_constant(&self) -> bool {
        self.as_gauss().is_some()
    }

    /// Names of the parameters this value depends on (`τ` excluded).
    pub fn params(&self) -> Vec<String> {
        let mut v: Vec<String> = self
            .num
            .syms()
            .into_iter()
            .chain(self.den.syms())
            .filter_map(|s| match s {
                Sym::Root(n) => Some(n.to_string()),
                Sym::Tau => None,
            })
            .collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn mentions_tau(&self) -> bool {
        self.num.syms().contains(&Sym::Tau) || self.den.syms().contains(&Sym::Tau)
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(Scalar::reduce(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, o: &Scalar) -> Result<Scalar, ScalarError> {
        let inv = o.inv().ok_or(ScalarError::DivisionByZero)?;
        Ok(self * &inv)
    }

    pub fn powi(&self, e: i64) -> Scalar {
        if e < 0 {
            let inv = self.inv().expect("negative power of zero");
            return inv.powi(-e);
        }
        let e = e as u32;
        Scalar { num: self.num.pow(e), den: self.den.pow(e) }
    }

    /// Exact square root of a monomial `c·Π q^e` (negative exponents
    /// allowed). Requires even exponents and `c` a square in ℚ(i).
    pub fn sqrt_monomial(&self) -> Result<Scalar, ScalarError> {
        if self.is_zero() {
            return Ok(Scalar::zero());
        }
        let (c, factors) = self.monomial_parts().ok_or(ScalarError::NotAMonomial)?;
        let root_c = c.sqrt().ok_or(ScalarError::NoFormalRoot)?;
        let mut halves = Vec::with_capacity(factors.len());
        for (s, e) in factors {
            if e % 2 != 0 {
                return Err(ScalarError::NoFormalRoot);
            }
            halves.push((s, e / 2));
        }
        Ok(Scalar::from_monomial_parts(root_c, &halves))
    }

    /// Decomposes a monomial value as coefficient and signed exponents.
    pub fn monomial_parts(&self) -> Option<(GaussRational, Vec<(Sym, i64)>)> {
        let (nc, nm) = self.num.as_monomial()?;
        let (dc, dm) = self.den.as_monomial()?;
        let c = nc / dc;
        let mut exps: BTreeMap<Sym, i64> = BTreeMap::new();
        for (s, e) in nm.factors() {
            *exps.entry(s.clone()).or_insert(0) += *e as i64;
        }
        for (s, e) in dm.factors() {
            *exps.entry(s.clone()).or_insert(0) -= *e as i64;
        }
        Some((c, exps.into_iter().filter(|(_, e)| *e != 0).collect()))
    }

    pub fn from_monomial_parts(c: GaussRational, factors: &[(Sym, i64)]) -> Scalar {
        let mut num = Vec::new();
        let mut den = Vec::new();
        for (s, e) in factors {
            if *e > 0 {
                num.push((s.clone(), *e as u32));
            } else if *e < 0 {
                den.push((s.clone(), (-*e) as u32));
            }
        }
        num.sort();
        den.sort();
        Scalar::reduce(Poly::term(c, Mono(num)), Poly::term(GaussRational::one(), Mono(den)))
    }

    /// Exact evaluation at positive rational parameter values, with a
    /// rational surrogate for π.
    pub fn eval_numeric(
        &self,
        assignment: &BTreeMap<String, BigRational>,
        pi_value: &BigRational,
    ) -> Result<(BigRational, BigRational), ScalarError> {
        let n = eval_poly(&self.num, assignment, pi_value)?;
        let d = eval_poly(&self.den, assignment, pi_value)?;
        if d.is_zero() {
            return Err(ScalarError::PoleAtPoint);
        }
        let v = &n / &d;
        Ok((v.re, v.im))
    }

    /// Substitutes a rational value for a parameter.
    pub fn substitute_param(&self, name: &str, value: &Scalar) -> Result<Scalar, ScalarError> {
        let s = Sym::root(name);
        let max_odd = self.num.terms().chain(self.den.terms()).any(|(m, _)| m.exp(&s) % 2 == 1);
        let root = if max_odd { value.sqrt_monomial()? } else { Scalar::zero() };
        let sub = |p: &Poly| -> Scalar {
            let mut acc = Scalar::zero();
            for (e, coeff) in p.coeffs_in(&s) {
                let pow = if e % 2 == 0 { value.powi((e / 2) as i64) } else { root.powi(e as i64) };
                acc = &acc + &(&Scalar { num: coeff, den: Poly::one() } * &pow);
            }
            acc
        };
        sub(&self.num).checked_div(&sub(&self.den)).map_err(|_| ScalarError::PoleAtPoint)
    }
}

fn eval_poly(
    p: &Poly,
    assignment: &BTreeMap<String, BigRational>,
    pi_value: &BigRational,
) -> Result<GaussRational, ScalarError> {
    let mut acc = GaussRational::zero();
    for (m, c) in p.terms() {
        let mut t = c.clone();
        for (s, e) in m.factors() {
            let (name, square) = match s {
                Sym::Root(n) => (
                    n.to_string(),
                    assignment
                        .get(n.as_ref())
                        .cloned()
                        .ok_or_else(|| ScalarError::UnassignedParameter(n.to_string()))?,
                ),
                Sym::Tau => ("2pi".to_string(), pi_value * BigRational::from_integer(2.into())),
            };
            let v = if e % 2 == 0 {
                num_traits::pow(square, (e / 2) as usize)
            } else {
                let r = sqrt_rational(&square).ok_or(ScalarError::IrrationalRoot(name))?;
                num_traits::pow(r, *e as usize)
            };
            t = &t * &GaussRational::real(v);
        }
        acc = &acc + &t;
    }
    Ok(acc)
}

impl Zero for Scalar {
    fn zero() -> Scalar {
        Scalar { num: Poly::zero(), den: Poly::one() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for Scalar {
    fn one() -> Scalar {
        Scalar { num: Poly::one(), den: Poly::one() }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        if self.den == o.den {
            return Scalar::reduce(self.num.add(&o.num), self.den.clone());
        }
        Scalar::reduce(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self + &(-o)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        if self.is_zero() || o.is_zero() {
            return Scalar::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return Scalar { num: self.num.mul(&o.num), den: Poly::one() };
        }
        Scalar::reduce(self.num.mul(&o.num), self.den.mul(&o.den))
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { num: self.num.neg(), den: self.den.clone() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! by_value {
    ($tr:ident, $m:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
    };
}
by_value!(Add, add);
by_value!(Sub, sub);
by_value!(Mul, mul);

impl std::ops::Div for Scalar {
    type Output = Scalar;
    fn div(self, o: Scalar) -> Scalar {
        self.checked_div(&o).expect("division by zero scalar")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_scalar(&self.num, &self.den))
    }
}

impl std::str::FromStr for Scalar {
    type Err = ScalarError;
    fn from_str(s: &str) -> Result<Scalar, ScalarError> {
        super::parse::parse_scalar(s)
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Scalar, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
