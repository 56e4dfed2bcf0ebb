//! Supermatrices and even bilinear forms: supertrace, Berezinians,
//! orthosymplectic membership, parity flip, symplectic bases, the moment
//! map and the Poisson bracket.

mod form;
mod matrix;

pub use form::{
    check_osp_spo, congruence, dual_coordinates, moment_map, nullspace, pi_flip_form, pi_flip_operator,
    poisson_bracket, spo_basis, symplectic_basis, BilinearFormMatrix, Orientation, SymplecticBasis,
};
pub(crate) use form::scalar_det;
pub use matrix::{determinant, even_inverse, inverse, BerVariant, SuperMatrix};

use thiserror::Error;

use crate::grassmann::GrassmannError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SuperLinalgError {
    #[error("dimension mismatch")]
    DimensionMismatch,
    #[error("the odd-odd block D is not invertible")]
    SingularD,
    #[error("matrix is not invertible")]
    Singular,
    #[error("operand is not even")]
    NotEven,
    #[error("operand is not homogeneous")]
    NotHomogeneous,
    #[error("operator does not preserve the form")]
    NotInSpo,
    #[error("form is degenerate")]
    Degenerate,
    #[error("odd block admits no exact orthonormal basis")]
    OddDiagonalizationFailure,
    #[error("Gaussian kernels are not supported here")]
    KernelNotSupported,
    #[error("determinant body is not a nonzero rational")]
    NonRationalBody,
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error("entries must be plain scalars")]
    NonScalarEntries,
    #[error(transparent)]
    Grassmann(#[from] GrassmannError),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::{Parity, SuperFunction, VariableTable};
    use crate::scalars::Scalar;
    use num_traits::{One, Zero};
    use std::sync::Arc;

    type F = SuperFunction<Scalar>;

    fn s(x: &str) -> Scalar {
        x.parse().unwrap()
    }

    fn smat(k: usize, l: usize, rows: &[&[&str]]) -> SuperMatrix<Scalar> {
        let rows: Vec<Vec<Scalar>> = rows.iter().map(|r| r.iter().map(|x| s(x)).collect()).collect();
        SuperMatrix::from_scalars(k, l, &rows).unwrap()
    }

    fn form(k: usize, l: usize, rows: &[&[&str]]) -> BilinearFormMatrix<Scalar> {
        let rows: Vec<Vec<Scalar>> = rows.iter().map(|r| r.iter().map(|x| s(x)).collect()).collect();
        BilinearFormMatrix::new(k, l, &rows).unwrap()
    }

    fn params(n: usize) -> Arc<VariableTable> {
        let names: Vec<String> = (1..=n).map(|i| format!("t{}", i)).collect();
        let spec: Vec<(&str, Parity)> = names.iter().map(|n| (n.as_str(), Parity::Odd)).collect();
        VariableTable::coordinates(&spec).unwrap()
    }

    #[test]
    fn supertrace_examples() {
        let id = SuperMatrix::<Scalar>::identity(2, 2, &matrix::empty_table());
        assert!(id.supertrace().is_zero());
        let m = smat(1, 1, &[&["a", "0"], &["0", "d"]]);
        assert_eq!(m.supertrace().as_constant().unwrap(), s("a - d"));
    }

    #[test]
    fn berezinian_examples() {
        let m = smat(1, 1, &[&["a", "0"], &["0", "d"]]);
        let b = m.berezinian(BerVariant::Standard).unwrap();
        assert_eq!(b.as_constant().unwrap(), s("a/d"));
        let id = SuperMatrix::<Scalar>::identity(2, 2, &matrix::empty_table());
        assert!(id.berezinian(BerVariant::Standard).unwrap().as_constant().unwrap().is_one());
        let z = smat(1, 1, &[&["1", "0"], &["0", "0"]]);
        assert_eq!(z.berezinian(BerVariant::Standard), Err(SuperLinalgError::SingularD));
        let neg = smat(1, 1, &[&["-3", "0"], &["0", "1"]]);
        assert_eq!(neg.berezinian(BerVariant::OneZero).unwrap().as_constant().unwrap(), s("3"));
    }

    #[test]
    fn berezinian_with_odd_entries() {
        let t = params(2);
        let (t1, t2) = (F::var(&t, "t1").unwrap(), F::var(&t, "t2").unwrap());
        let one = F::one(&t);
        let m = SuperMatrix::new(1, 1, &t, vec![vec![one.clone(), t1.clone()], vec![t2.clone(), one.clone()]])
            .unwrap();
        // det(1 − t1 t2) / 1
        let b = m.berezinian(BerVariant::Standard).unwrap();
        assert_eq!(b, one.sub(&t1.mul(&t2)));
    }

    #[test]
    fn determinant_without_invertible_pivot() {
        let t = params(4);
        let g: Vec<F> = (1..=4).map(|i| F::var(&t, &format!("t{}", i)).unwrap()).collect();
        let m = vec![vec![g[0].mul(&g[1]), F::one(&t)], vec![F::one(&t), g[2].mul(&g[3])]];
        let d = determinant(&t, &m).unwrap();
        assert_eq!(d, g[0].mul(&g[1]).mul(&g[2]).mul(&g[3]).sub(&F::one(&t)));
        let m = vec![vec![g[0].mul(&g[1])]];
        assert_eq!(determinant(&t, &m).unwrap(), g[0].mul(&g[1]));
    }

    #[test]
    fn osp_examples() {
        let x = smat(0, 2, &[&["0", "1"], &["-1", "0"]]);
        let b = form(0, 2, &[&["1", "0"], &["0", "1"]]);
        assert!(check_osp_spo(&x, &b).unwrap());
        let sp = form(2, 0, &[&["0", "1"], &["-1", "0"]]);
        let id = smat(2, 0, &[&["1", "0"], &["0", "1"]]);
        assert!(!check_osp_spo(&id, &sp).unwrap());
        let wrong = smat(1, 1, &[&["1", "0"], &["0", "1"]]);
        assert_eq!(check_osp_spo(&wrong, &b), Err(SuperLinalgError::DimensionMismatch));
    }

    #[test]
    fn pi_flip_examples() {
        let q = form(0, 2, &[&["0", "1"], &["-1", "0"]]);
        assert!(q.is_symmetric());
        let pq = pi_flip_form(&q).unwrap();
        assert_eq!((pq.k(), pq.l()), (2, 0));
        assert_eq!(*pq.get(0, 1), s("-1"));
        assert!(pq.is_antisymmetric());
        assert_eq!(pi_flip_form(&pi_flip_form(&q).unwrap()).unwrap(), q.neg());
        let z = BilinearFormMatrix::<Scalar>::zero(1, 2);
        assert_eq!(pi_flip_form(&z).unwrap(), BilinearFormMatrix::zero(2, 1));
        let cross = form(1, 1, &[&["1", "1"], &["1", "1"]]);
        assert_eq!(pi_flip_form(&cross), Err(SuperLinalgError::NotEven));
    }

    #[test]
    fn symplectic_basis_examples() {
        let sp = form(2, 0, &[&["0", "1"], &["-1", "0"]]);
        let r = symplectic_basis(&sp, Orientation::Positive).unwrap();
        assert_eq!(r.t, vec![vec![Scalar::one(), Scalar::zero()], vec![Scalar::zero(), Scalar::one()]]);
        let m1 = form(0, 1, &[&["-1"]]);
        let r = symplectic_basis(&m1, Orientation::Positive).unwrap();
        assert_eq!(r.t, vec![vec![Scalar::i()]]);
        assert_eq!(r.certificate, -Scalar::i());
        let d = form(0, 2, &[&["4", "0"], &["0", "1"]]);
        let r = symplectic_basis(&d, Orientation::Positive).unwrap();
        assert_eq!(r.t, vec![vec![s("1/2"), Scalar::zero()], vec![Scalar::zero(), Scalar::one()]]);
        let g = form(4, 2, &[
            &["0", "2", "1", "0", "0", "0"],
            &["-2", "0", "3", "1", "0", "0"],
            &["-1", "-3", "0", "5", "0", "0"],
            &["0", "-1", "-5", "0", "0", "0"],
            &["0", "0", "0", "0", "0", "2"],
            &["0", "0", "0", "0", "2", "0"],
        ]);
        let r = symplectic_basis(&g, Orientation::Negative).unwrap();
        assert_eq!(congruence(&g, &r.t), BilinearFormMatrix::standard_symplectic(4, 2).unwrap());
        let two = form(0, 1, &[&["2"]]);
        assert_eq!(symplectic_basis(&two, Orientation::Positive), Err(SuperLinalgError::OddDiagonalizationFailure));
        let deg = form(2, 0, &[&["0", "0"], &["0", "0"]]);
        assert_eq!(symplectic_basis(&deg, Orientation::Positive), Err(SuperLinalgError::Degenerate));
    }

    #[test]
    fn moment_map_examples() {
        let sp = form(2, 0, &[&["0", "1"], &["-1", "0"]]);
        let coords = dual_coordinates(2, 0);
        let x = smat(2, 0, &[&["1", "0"], &["0", "-1"]]);
        let mu = moment_map(&x, &sp, &coords).unwrap();
        let (x1, x2) = (F::var(&coords, "x1").unwrap(), F::var(&coords, "x2").unwrap());
        assert_eq!(mu, x1.mul(&x2));
        let zero = smat(2, 0, &[&["0", "0"], &["0", "0"]]);
        assert!(moment_map(&zero, &sp, &coords).unwrap().is_zero());
        let id = smat(2, 0, &[&["1", "0"], &["0", "1"]]);
        assert_eq!(moment_map(&id, &sp, &coords), Err(SuperLinalgError::NotInSpo));
    }

    #[test]
    fn moment_map_on_flipped_space() {
        let q = form(0, 2, &[&["0", "1"], &["-1", "0"]]);
        let rot = smat(0, 2, &[&["0", "z"], &["-z", "0"]]);
        let pq = pi_flip_form(&q).unwrap();
        let prot = pi_flip_operator(&rot).unwrap();
        let coords = dual_coordinates(2, 0);
        let mu = moment_map(&prot, &pq, &coords).unwrap();
        let (u1, u2) = (F::var(&coords, "x1").unwrap(), F::var(&coords, "x2").unwrap());
        assert_eq!(mu, u1.mul(&u1).add(&u2.mul(&u2)).scale(&s("-z/2")));
    }

    #[test]
    fn poisson_examples() {
        let sp = form(2, 0, &[&["0", "1"], &["-1", "0"]]);
        let coords = dual_coordinates(2, 0);
        let (x1, x2) = (F::var(&coords, "x1").unwrap(), F::var(&coords, "x2").unwrap());
        assert!(poisson_bracket(&x1, &x2, &sp).unwrap().as_constant().unwrap().is_one());
        let f = x1.mul(&x1).add(&x1.mul(&x2));
        assert!(poisson_bracket(&f, &f, &sp).unwrap().is_zero());
    }

    #[test]
    fn moment_map_is_poisson() {
        let b = BilinearFormMatrix::<Scalar>::standard_symplectic(2, 2).unwrap();
        let coords = dual_coordinates(2, 2);
        let mut basis = spo_basis(&b, Parity::Even);
        let odd = spo_basis(&b, Parity::Odd);
        assert_eq!((basis.len(), odd.len()), (4, 4));
        basis.extend(odd);
        for x in &basis {
            assert!(check_osp_spo(x, &b).unwrap());
        }
        for x in &basis {
            for y in &basis {
                let lhs = poisson_bracket(
                    &moment_map(x, &b, &coords).unwrap(),
                    &moment_map(y, &b, &coords).unwrap(),
                    &b,
                )
                .unwrap();
                let rhs = moment_map(&x.supercommutator(y).unwrap(), &b, &coords).unwrap();
                assert_eq!(lhs, rhs, "x = {}, y = {}", x, y);
            }
        }
    }

    #[test]
    fn spo_exponential_has_unit_berezinian() {
        let b = BilinearFormMatrix::<Scalar>::standard_symplectic(2, 2).unwrap();
        let t = params(4);
        let g: Vec<F> = (1..=4).map(|i| F::var(&t, &format!("t{}", i)).unwrap()).collect();
        let even = spo_basis(&b, Parity::Even);
        let odd = spo_basis(&b, Parity::Odd);
        let mut x = even[0].tensor(&g[0].mul(&g[1])).unwrap();
        x = x.add(&odd[1].tensor(&g[2]).unwrap()).unwrap();
        x = x.add(&odd[3].tensor(&g[3]).unwrap()).unwrap();
        assert!(x.is_even());
        assert!(check_osp_spo(&x, &b).unwrap());
        let e = x.exp_nilpotent().unwrap();
        assert!(e.berezinian(BerVariant::Standard).unwrap().as_constant().unwrap().is_one());
    }
}
