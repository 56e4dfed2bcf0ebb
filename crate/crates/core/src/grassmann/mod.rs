//! Supercommutative function algebras on affine models: odd generators,
//! even variables with Gaussian-polynomial coefficients, derivations,
//! exponentials and point evaluation.

mod function;
mod json;
mod poly;
mod table;

pub use function::{odd_product_sign, OddMono, ParityClass, SuperFunction};
pub use poly::{EvenMono, EvenPoly, Kernel};
pub use table::{Generator, Parity, Role, VariableTable};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrassmannError {
    #[error("operands live over different variable tables")]
    TableMismatch,
    #[error("unknown generator '{0}'")]
    UnknownGenerator(String),
    #[error("duplicate generator name '{0}'")]
    DuplicateName(String),
    #[error("differential '{0}' must have the opposite parity of its coordinate")]
    DifferentialParity(String),
    #[error("{0} odd generators exceed the limit of 64")]
    TooManyOdd(usize),
    #[error("function is not even")]
    NotEven,
    #[error("even part has degree above two")]
    DegreeTooHigh,
    #[error("function carries a Gaussian kernel")]
    HasKernel,
    #[error("body is not invertible with an exact square root")]
    NonInvertibleBody,
    #[error("exponent has a nonzero body at the point")]
    NonNilpotentExponentBody,
    #[error("parity mismatch for '{0}'")]
    ParityMismatch(String),
    #[error("generator outside the target table still occurs")]
    ResidualGenerator,
    #[error("malformed JSON: {0}")]
    Json(String),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Scalar;
    use std::sync::Arc;

    type F = SuperFunction<Scalar>;

    fn table() -> Arc<VariableTable> {
        VariableTable::coordinates(&[
            ("x", Parity::Even),
            ("u", Parity::Even),
            ("v", Parity::Even),
            ("xi", Parity::Odd),
            ("eta", Parity::Odd),
            ("zeta", Parity::Odd),
        ])
        .unwrap()
    }

    fn v(t: &Arc<VariableTable>, n: &str) -> F {
        F::var(t, n).unwrap()
    }

    fn c(t: &Arc<VariableTable>, s: &str) -> F {
        F::constant(t, s.parse().unwrap())
    }

    #[test]
    fn multiply_examples() {
        let t = table();
        let (xi, eta) = (v(&t, "xi"), v(&t, "eta"));
        assert_eq!(eta.mul(&xi), xi.mul(&eta).neg());
        let one = F::one(&t);
        let a = one.add(&xi.mul(&eta));
        assert_eq!(a.mul(&a), one.add(&xi.mul(&eta).scale(&Scalar::from_i64(2))));
        let x = v(&t, "x");
        let ka = x.mul(&x).scale(&"-a/2".parse().unwrap()).exp_even().unwrap();
        let kb = x.mul(&x).scale(&"-b/2".parse().unwrap()).exp_even().unwrap();
        let kab = x.mul(&x).scale(&"-(a+b)/2".parse().unwrap()).exp_even().unwrap();
        assert_eq!(ka.mul(&kb), kab);
    }

    #[test]
    fn table_mismatch() {
        let t1 = table();
        let t2 = VariableTable::coordinates(&[("y", Parity::Even)]).unwrap();
        assert_eq!(F::one(&t1).try_mul(&F::one(&t2)), Err(GrassmannError::TableMismatch));
    }

    #[test]
    fn derive_examples() {
        let t = table();
        let (xi, eta, x) = (v(&t, "xi"), v(&t, "eta"), v(&t, "x"));
        let xe = xi.mul(&eta);
        assert_eq!(xe.derive_by_name("xi").unwrap(), eta);
        assert_eq!(xe.derive_by_name("eta").unwrap(), xi.neg());
        let g = x.mul(&x).scale(&Scalar::from_ratio(-1, 2)).exp_even().unwrap();
        assert_eq!(g.derive_by_name("x").unwrap(), x.mul(&g).neg());
        assert!(F::one(&t).derive(99).is_err());
    }

    #[test]
    fn exp_examples() {
        let t = table();
        let (xi, eta, x, u, vv) = (v(&t, "xi"), v(&t, "eta"), v(&t, "x"), v(&t, "u"), v(&t, "v"));
        let xe = xi.mul(&eta);
        assert_eq!(xe.exp_even().unwrap(), F::one(&t).add(&xe));
        let q = u.mul(&u).add(&vv.mul(&vv)).scale(&"-i/(2*z)".parse().unwrap());
        let e = q.exp_even().unwrap();
        let (_, k, _) = e.iter().next().unwrap();
        let iz: Scalar = "i/z".parse().unwrap();
        assert_eq!(k.a(0, 0), Scalar::zero());
        assert_eq!(k.a(1, 1), iz);
        assert_eq!(k.a(2, 2), iz);
        let lin = x.add(&xe).exp_even().unwrap();
        let (_, k, _) = lin.iter().next().unwrap();
        assert_eq!(k.b(0), Scalar::one());
        assert_eq!(lin, x.exp_even().unwrap().mul(&F::one(&t).add(&xe)));
        assert_eq!(x.mul(&x).mul(&x).exp_even(), Err(GrassmannError::DegreeTooHigh));
        assert_eq!(xi.exp_even(), Err(GrassmannError::NotEven));
    }

    #[test]
    fn sqrt_examples() {
        let t = table();
        let xe = v(&t, "xi").mul(&v(&t, "eta"));
        let one = F::one(&t);
        assert_eq!(one.add(&xe).sqrt_even().unwrap(), one.add(&xe.scale(&Scalar::from_ratio(1, 2))));
        assert_eq!(c(&t, "4").sqrt_even().unwrap(), c(&t, "2"));
        let f = c(&t, "9").add(&xe);
        let r = f.sqrt_even().unwrap();
        assert_eq!(r.mul(&r), f);
        assert_eq!(c(&t, "0").sqrt_even(), Err(GrassmannError::NonInvertibleBody));
        let g = v(&t, "x").mul(&v(&t, "x")).scale(&Scalar::from_ratio(-1, 2)).exp_even().unwrap();
        assert_eq!(g.sqrt_even(), Err(GrassmannError::HasKernel));
    }

    #[test]
    fn parity_examples() {
        let t = table();
        let (xi, eta, zeta) = (v(&t, "xi"), v(&t, "eta"), v(&t, "zeta"));
        assert_eq!(xi.mul(&eta).parity_of(), ParityClass::Even);
        assert_eq!(xi.add(&xi.mul(&eta).mul(&zeta)).parity_of(), ParityClass::Odd);
        assert_eq!(F::one(&t).add(&xi).parity_of(), ParityClass::Mixed);
        assert_eq!(F::zero(&t).parity_of(), ParityClass::Even);
    }

    #[test]
    fn point_evaluation() {
        let t = table();
        let env = VariableTable::coordinates(&[("t1", Parity::Odd), ("t2", Parity::Odd)]).unwrap();
        let t1 = F::var(&env, "t1").unwrap();
        let t2 = F::var(&env, "t2").unwrap();
        let soul = t1.mul(&t2);
        let mut point: Vec<F> = vec![F::zero(&env); t.len()];
        point[t.require("x").unwrap()] = F::constant(&env, Scalar::from_i64(2)).add(&soul);
        point[t.require("xi").unwrap()] = t1.clone();
        let x = v(&t, "x");
        let got = x.mul(&x).evaluate_at_point(&env, &point).unwrap();
        assert_eq!(got, F::constant(&env, Scalar::from_i64(4)).add(&soul.scale(&Scalar::from_i64(4))));
        assert_eq!(v(&t, "xi").evaluate_at_point(&env, &point).unwrap(), t1);
        point[t.require("x").unwrap()] = soul.clone();
        let g = x.mul(&x).scale(&Scalar::from_ratio(-1, 2)).exp_even().unwrap();
        assert_eq!(g.evaluate_at_point(&env, &point).unwrap(), F::one(&env));
        point[t.require("x").unwrap()] = F::one(&env);
        assert_eq!(g.evaluate_at_point(&env, &point), Err(GrassmannError::NonNilpotentExponentBody));
        point[t.require("x").unwrap()] = t2;
        assert!(matches!(x.evaluate_at_point(&env, &point), Err(GrassmannError::ParityMismatch(_))));
    }

    #[test]
    fn json_round_trip() {
        let t = table();
        let (xi, eta, x) = (v(&t, "xi"), v(&t, "eta"), v(&t, "x"));
        let g = x.mul(&x).scale(&"-i/z".parse().unwrap()).add(&x).exp_even().unwrap();
        let f = g.mul(&xi.mul(&eta)).add(&x.scale(&"3/2".parse().unwrap())).add(&eta);
        let j = f.to_json();
        assert_eq!(F::from_json(&t, &j).unwrap(), f);
    }

    #[test]
    fn embed_and_project() {
        let t = table();
        let big = t
            .extend(vec![Generator { name: "w".into(), parity: Parity::Odd, role: Role::Auxiliary }])
            .unwrap();
        let f = v(&t, "xi").mul(&v(&t, "x"));
        let e = f.embed(&big).unwrap();
        assert_eq!(e.project(&t).unwrap(), f);
        let w = F::var(&big, "w").unwrap();
        assert_eq!(e.mul(&w).project(&t), Err(GrassmannError::ResidualGenerator));
    }

    #[test]
    fn rehome_reorders_by_name() {
        let t = table();
        let other = VariableTable::coordinates(&[
            ("zeta", Parity::Odd),
            ("eta", Parity::Odd),
            ("v", Parity::Even),
            ("x", Parity::Even),
        ])
        .unwrap();
        let f = v(&t, "eta").mul(&v(&t, "zeta")).mul(&v(&t, "x")).add(&v(&t, "v"));
        let g = f.rehome(&other).unwrap();
        let expect = v(&other, "eta").mul(&v(&other, "zeta")).mul(&v(&other, "x")).add(&v(&other, "v"));
        assert_eq!(g, expect);
        assert_eq!(g.rehome(&t).unwrap(), f);
        assert_eq!(v(&t, "u").rehome(&other), Err(GrassmannError::ResidualGenerator));
    }

    #[test]
    fn display_is_readable() {
        let t = table();
        let f = v(&t, "xi").mul(&v(&t, "eta")).sub(&v(&t, "x").scale(&Scalar::i()));
        assert_eq!(f.to_string(), "-i*x + xi*eta");
    }

    use num_traits::{One, Zero};
}
