//! Exact scalars: rational functions over ℚ(i) in formal square roots of
//! named parameters and of 2π.

mod display;
mod gauss;
mod parse;
mod poly;
mod scalar;

pub use gauss::{sqrt_rational, GaussRational};
pub use parse::parse_scalar;
pub use poly::{gcd, Mono, Poly, Sym};
pub use scalar::Scalar;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("not a monomial")]
    NotAMonomial,
    #[error("no formal square root in the scalar field")]
    NoFormalRoot,
    #[error("parameter '{0}' has no assigned value")]
    UnassignedParameter(String),
    #[error("denominator vanishes at the evaluation point")]
    PoleAtPoint,
    #[error("square root of '{0}' is irrational at the evaluation point")]
    IrrationalRoot(String),
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::{One, Zero};
    use std::collections::BTreeMap;

    fn s(src: &str) -> Scalar {
        src.parse().unwrap()
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn field_examples() {
        assert_eq!(&Scalar::from_ratio(1, 2) + &Scalar::from_ratio(1, 3), Scalar::from_ratio(5, 6));
        let t2 = Scalar::two_pi();
        assert_eq!((&t2 * &t2).to_string(), "(2pi)^2");
        let qz = Scalar::param_root("z");
        assert_eq!((&Scalar::i() * &qz).checked_div(&qz).unwrap(), Scalar::i());
        assert_eq!(Scalar::one().checked_div(&Scalar::zero()), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(Scalar::two_pi().sqrt_monomial().unwrap(), Scalar::tau());
        let z = Scalar::param("z");
        assert_eq!((&z * &z).sqrt_monomial().unwrap(), z);
        let four_z = &Scalar::from_i64(4) * &z;
        assert_eq!(four_z.sqrt_monomial().unwrap(), &Scalar::from_i64(2) * &Scalar::param_root("z"));
        assert_eq!(Scalar::i().sqrt_monomial(), Err(ScalarError::NoFormalRoot));
        assert_eq!((&z + &Scalar::one()).sqrt_monomial(), Err(ScalarError::NotAMonomial));
        let inv = (&Scalar::i() * &z).inv().unwrap();
        assert_eq!(inv.sqrt_monomial(), Err(ScalarError::NoFormalRoot));
    }

    #[test]
    fn numeric_examples() {
        let mut a = BTreeMap::new();
        a.insert("z".to_string(), r(2, 1));
        let pi = r(355, 113);
        assert_eq!(s("1/z").eval_numeric(&a, &pi).unwrap(), (r(1, 2), r(0, 1)));
        a.insert("z".to_string(), r(3, 1));
        assert_eq!(s("i*z").eval_numeric(&a, &pi).unwrap(), (r(0, 1), r(3, 1)));
        assert_eq!(s("(2pi)^2").eval_numeric(&a, &pi).unwrap(), (r(710, 113) * r(710, 113), r(0, 1)));
        assert_eq!(Scalar::two_pi().eval_numeric(&a, &pi).unwrap(), (r(710, 113), r(0, 1)));
        assert_eq!(
            s("w").eval_numeric(&a, &pi),
            Err(ScalarError::UnassignedParameter("w".into()))
        );
        assert_eq!(s("1/(z-3)").eval_numeric(&a, &pi), Err(ScalarError::PoleAtPoint));
    }

    #[test]
    fn display_round_trip() {
        let cases = [
            "3/2*i*(2pi)^(1/2)*z^(-1)",
            "-i*z^(1/2)",
            "(2pi)",
            "z^2 + 2*w - 1/3",
            "(z + 1)/(w - i)",
            "(1 + i)*z",
            "0",
        ];
        for c in cases {
            let v = s(c);
            let shown = v.to_string();
            assert_eq!(s(&shown), v, "{} -> {}", c, shown);
        }
        assert_eq!(s("3/2*i*(2pi)^(1/2)*z^(-1)").to_string(), "3/2*i*(2pi)^(1/2)*z^(-1)");
    }

    #[test]
    fn cancellation_and_canonical_form() {
        let a = s("(z^2 - w^2)/(z + w)");
        assert_eq!(a, s("z - w"));
        let b = s("(2*z + 2)/(4*z*w + 4*w)");
        assert_eq!(b, s("1/(2*w)"));
        assert_eq!(s("(z+1)/(z+1)"), Scalar::one());
    }
}
