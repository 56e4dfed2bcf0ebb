//! Berezin integration over odd generators, Gaussian integration over even
//! ones, and what is built from the two: superspace and Liouville
//! integrals, change of variables, direct images and Fourier transforms.

mod fourier;
mod gauss;

pub use fourier::{fourier_transform, Distribution, FourierDirection, FourierSpace};
pub use gauss::{gaussian_integral_even, MAX_DEGREE};

use serde::Serialize;
use thiserror::Error;

use crate::grassmann::{GrassmannError, Parity};
use crate::scalars::Scalar;
use crate::superlinalg::{BerVariant, SuperLinalgError, SuperMatrix, SymplecticBasis};
use crate::SuperFn;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BerezinError {
    #[error("'{0}' is not an odd generator")]
    NotOdd(String),
    #[error("'{0}' is not an even generator")]
    NotEven(String),
    #[error("unknown variable '{0}'")]
    UnknownVariable(String),
    #[error("variable '{0}' is listed twice")]
    RepeatedVariable(String),
    #[error("kernel is singular in '{0}'")]
    SingularKernel(String),
    #[error("polynomial degree {0} exceeds the limit")]
    UnboundedPolynomialDegree(u32),
    #[error("no formal square root of the pivot product {0}")]
    NoFormalRoot(String),
    #[error("variables do not match the block structure")]
    DimensionMismatch,
    #[error("matrix entries must be scalars")]
    NonScalarMatrix,
    #[error("measure of the distribution does not match the integration variables")]
    MeasureMismatch,
    #[error(transparent)]
    Grassmann(#[from] GrassmannError),
    #[error(transparent)]
    Linalg(#[from] SuperLinalgError),
}

/// One branch choice made while evaluating a Gaussian: the pivot met
/// when eliminating `variable`, and the square root taken for it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AssumptionRecord {
    pub variable: String,
    pub pivot: String,
    pub root: String,
}

/// Append-only record of formal branch choices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct AssumptionLog(Vec<AssumptionRecord>);

impl AssumptionLog {
    pub fn push(&mut self, r: AssumptionRecord) {
        self.0.push(r);
    }

    pub fn extend(&mut self, o: AssumptionLog) {
        self.0.extend(o.0);
    }

    pub fn records(&self) -> &[AssumptionRecord] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    Raw,
    /// The listed variables are oriented symplectic coordinates; the
    /// result is divided by `(2π)^{m/2}`, `m` the number of even ones.
    Liouville,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegrationSpec {
    pub vars: Vec<String>,
    pub normalization: Normalization,
}

impl IntegrationSpec {
    pub fn raw<T: AsRef<str>>(vars: &[T]) -> Self {
        IntegrationSpec { vars: vars.iter().map(|v| v.as_ref().to_string()).collect(), normalization: Normalization::Raw }
    }

    pub fn liouville<T: AsRef<str>>(vars: &[T]) -> Self {
        IntegrationSpec { normalization: Normalization::Liouville, ..IntegrationSpec::raw(vars) }
    }
}

/// An integral together with the branch choices it depended on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Integrated {
    pub value: SuperFn,
    pub log: AssumptionLog,
}

fn parity_of(f: &SuperFn, name: &str) -> Result<Parity, BerezinError> {
    let t = f.table();
    let k = t.index(name).ok_or_else(|| BerezinError::UnknownVariable(name.to_string()))?;
    Ok(t.parity(k))
}

/// `∫ d_(ξ¹…ξⁿ) f = ∂_{ξ¹}…∂_{ξⁿ} f`, the innermost derivative taken
/// with respect to the last listed variable.
pub fn berezin_integral<T: AsRef<str>>(f: &SuperFn, vars: &[T]) -> Result<SuperFn, BerezinError> {
    let t = f.table().clone();
    let mut idx = Vec::with_capacity(vars.len());
    for v in vars {
        let v = v.as_ref();
        if parity_of(f, v)? != Parity::Odd {
            return Err(BerezinError::NotOdd(v.to_string()));
        }
        let k = t.require(v)?;
        if idx.contains(&k) {
            return Err(BerezinError::RepeatedVariable(v.to_string()));
        }
        idx.push(k);
    }
    let mut r = f.clone();
    for k in idx.iter().rev() {
        r = r.derive(*k)?;
    }
    Ok(r)
}

/// Gaussian integration over the listed even variables followed by
/// Berezin integration over the listed odd ones, in list order.
pub fn integrate_superspace(f: &SuperFn, spec: &IntegrationSpec) -> Result<Integrated, BerezinError> {
    let mut even = Vec::new();
    let mut odd = Vec::new();
    for v in &spec.vars {
        match parity_of(f, v)? {
            Parity::Even => even.push(v.clone()),
            Parity::Odd => odd.push(v.clone()),
        }
    }
    let (g, log) = gaussian_integral_even(f, &even)?;
    let mut value = berezin_integral(&g, &odd)?;
    if spec.normalization == Normalization::Liouville {
        value = value.scale(&Scalar::tau().powi(-(even.len() as i64)));
    }
    Ok(Integrated { value, log })
}

/// Images `z^i ↦ Σ_j H_ij z^j` for the listed variables, identity on the
/// other generators.
fn linear_images(f: &SuperFn, vars: &[String], h: &[Vec<Scalar>]) -> Result<Vec<SuperFn>, BerezinError> {
    let t = f.table();
    let idx: Vec<usize> = vars.iter().map(|v| t.require(v)).collect::<Result<_, _>>()?;
    let mut images: Vec<SuperFn> = (0..t.len()).map(|k| SuperFn::gen(t, k)).collect();
    for (i, ki) in idx.iter().enumerate() {
        let mut img = SuperFn::zero(t);
        for (j, kj) in idx.iter().enumerate() {
            if !h[i][j].is_zero() {
                img = img.add(&SuperFn::gen(t, *kj).scale(&h[i][j]));
            }
        }
        images[*ki] = img;
    }
    Ok(images)
}

fn check_block_order(f: &SuperFn, vars: &[String], k: usize, l: usize) -> Result<(), BerezinError> {
    if vars.len() != k + l {
        return Err(BerezinError::DimensionMismatch);
    }
    for (i, v) in vars.iter().enumerate() {
        let want = if i < k { Parity::Even } else { Parity::Odd };
        if parity_of(f, v)? != want {
            return Err(BerezinError::DimensionMismatch);
        }
    }
    Ok(())
}

/// Liouville integral in the coordinates of a symplectic basis: with
/// `T` the basis matrix, `z = T z'`, so the integrand is `f(T z')`
/// integrated in `z'` and divided by `(2π)^{m/2}`. `vars` lists the even
/// coordinates first, matching the rows of `T`.
pub fn liouville_integral(
    f: &SuperFn,
    vars: &[String],
    k: usize,
    basis: &SymplecticBasis<Scalar>,
) -> Result<Integrated, BerezinError> {
    let l = vars.len().saturating_sub(k);
    check_block_order(f, vars, k, l)?;
    if basis.t.len() != k + l {
        return Err(BerezinError::DimensionMismatch);
    }
    let images = linear_images(f, vars, &basis.t)?;
    let g = f.substitute(f.table(), &images)?;
    integrate_superspace(&g, &IntegrationSpec::liouville(vars))
}

/// Both sides of the change-of-variables identity for a linear map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChangeOfVariables {
    pub holds: bool,
    pub ber: Scalar,
    pub lhs: Integrated,
    pub rhs: Integrated,
}

/// Checks `∫ Ber₍₁,₀₎(J(h))·(f∘h) = ∫ f` for `h*(z^i) = Σ_j H_ij z^j`
/// on the variables of `spec` (even ones first).
pub fn change_of_variables_verify(
    f: &SuperFn,
    h: &SuperMatrix<Scalar>,
    spec: &IntegrationSpec,
) -> Result<ChangeOfVariables, BerezinError> {
    check_block_order(f, &spec.vars, h.k(), h.l())?;
    let n = h.size();
    let mut rows = vec![vec![Scalar::zero(); n]; n];
    for (i, row) in rows.iter_mut().enumerate() {
        for (j, e) in row.iter_mut().enumerate() {
            *e = h.scalar(i, j).ok_or(BerezinError::NonScalarMatrix)?;
        }
    }
    let ber = h.berezinian(BerVariant::OneZero)?.as_constant().ok_or(BerezinError::NonScalarMatrix)?;
    let images = linear_images(f, &spec.vars, &rows)?;
    let pulled = f.substitute(f.table(), &images)?.scale(&ber);
    let lhs = integrate_superspace(&pulled, spec)?;
    let rhs = integrate_superspace(f, spec)?;
    Ok(ChangeOfVariables { holds: lhs.value == rhs.value, ber, lhs, rhs })
}

/// Integration order for forms along a fibre with coordinates `coords`:
/// even coordinates, differentials of odd ones, differentials of even
/// ones, odd coordinates.
pub fn fibre_order(f: &SuperFn, coords: &[String]) -> Result<(Vec<String>, usize, usize), BerezinError> {
    let t = f.table();
    let mut groups: [Vec<String>; 4] = Default::default();
    for c in coords {
        let k = t.require(c)?;
        let d = t.differential_of(k).ok_or_else(|| BerezinError::UnknownVariable(format!("d{}", c)))?;
        let dn = t.name(d).to_string();
        match t.parity(k) {
            Parity::Even => {
                groups[0].push(c.clone());
                groups[2].push(dn);
            }
            Parity::Odd => {
                groups[1].push(dn);
                groups[3].push(c.clone());
            }
        }
    }
    let (k, l) = (groups[0].len(), groups[3].len());
    Ok((groups.concat(), k, l))
}

/// `π_* f = (2π)^{−(k+l)/2} · orientation · ∫ d_(x,dξ,dx,ξ) f` along a
/// fibre of rank `(k, l)` with coordinates `coords`.
pub fn direct_image(f: &SuperFn, coords: &[String], orientation: &Scalar) -> Result<Integrated, BerezinError> {
    let (vars, k, l) = fibre_order(f, coords)?;
    let mut r = integrate_superspace(f, &IntegrationSpec::raw(&vars))?;
    r.value = r.value.scale(&(orientation * &Scalar::tau().powi(-((k + l) as i64))));
    Ok(r)
}

use num_traits::Zero;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::VariableTable;
    use crate::superlinalg::{symplectic_basis, BilinearFormMatrix, Orientation};
    use num_traits::One;
    use std::sync::Arc;

    fn s(src: &str) -> Scalar {
        src.parse().unwrap()
    }

    fn v(t: &Arc<VariableTable>, n: &str) -> SuperFn {
        SuperFn::var(t, n).unwrap()
    }

    fn gauss(t: &Arc<VariableTable>, names: &[&str], a: &str) -> SuperFn {
        let mut q = SuperFn::zero(t);
        for n in names {
            q = q.add(&v(t, n).mul(&v(t, n)));
        }
        q.scale(&-(&s(a) * &Scalar::from_ratio(1, 2))).exp_even().unwrap()
    }

    fn table() -> Arc<VariableTable> {
        VariableTable::coordinates(&[
            ("x", Parity::Even),
            ("y", Parity::Even),
            ("xi", Parity::Odd),
            ("eta", Parity::Odd),
        ])
        .unwrap()
    }

    #[test]
    fn berezin_examples() {
        let t = table();
        let (a, b) = (v(&t, "x"), v(&t, "y"));
        let f = a.add(&v(&t, "xi").mul(&b));
        assert_eq!(berezin_integral(&f, &["xi"]).unwrap(), b);
        let xe = v(&t, "xi").mul(&v(&t, "eta"));
        assert_eq!(berezin_integral(&xe, &["xi", "eta"]).unwrap(), SuperFn::one(&t).neg());
        assert_eq!(berezin_integral(&xe, &["x"]), Err(BerezinError::NotOdd("x".into())));
        let g = v(&t, "eta").mul(&v(&t, "x")).add(&xe).add(&SuperFn::one(&t));
        let dg = g.derive_by_name("xi").unwrap();
        assert!(berezin_integral(&dg, &["xi"]).unwrap().is_zero());
    }

    #[test]
    fn gaussian_examples() {
        let t = table();
        let (r, log) = gaussian_integral_even(&gauss(&t, &["x"], "1"), &["x".into()]).unwrap();
        assert_eq!(r, SuperFn::constant(&t, Scalar::tau()));
        assert!(log.is_empty());
        let x = v(&t, "x");
        let (r, log) = gaussian_integral_even(&x.mul(&x).mul(&gauss(&t, &["x"], "a")), &["x".into()]).unwrap();
        let root_a = s("a").sqrt_monomial().unwrap();
        assert_eq!(r.as_constant().unwrap(), &Scalar::tau() * &(&root_a * &s("a")).inv().unwrap());
        assert_eq!(log.len(), 1);
        let (r, _) = gaussian_integral_even(&x.mul(&gauss(&t, &["x"], "a")), &["x".into()]).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn fresnel_pair_squares_to_radial_value() {
        let t = table();
        let f = gauss(&t, &["x", "y"], "i/z");
        let (r, log) = gaussian_integral_even(&f, &["x".into(), "y".into()]).unwrap();
        assert_eq!(r.as_constant().unwrap(), &Scalar::two_pi() * &s("z/i"));
        assert_eq!(log.len(), 2);
        let single = gaussian_integral_even(&gauss(&t, &["x"], "i/z"), &["x".into()]);
        assert!(matches!(single, Err(BerezinError::NoFormalRoot(_))));
    }

    #[test]
    fn shifted_gaussian_keeps_the_completed_square() {
        let t = table();
        // exp(−x²/2 + b x) integrates to τ·exp(b²/2) with b = y.
        let f = gauss(&t, &["x"], "1").mul(&v(&t, "x").mul(&v(&t, "y")).exp_even().unwrap());
        let (r, _) = gaussian_integral_even(&f, &["x".into()]).unwrap();
        let y = v(&t, "y");
        let expect = y.mul(&y).scale(&Scalar::from_ratio(1, 2)).exp_even().unwrap().scale(&Scalar::tau());
        assert_eq!(r, expect);
    }

    #[test]
    fn superspace_and_liouville() {
        let t = table();
        let (a, b) = (Scalar::from_i64(3), Scalar::from_i64(5));
        let f = gauss(&t, &["x"], "1")
            .mul(&SuperFn::constant(&t, a).add(&v(&t, "xi").scale(&b)));
        let r = integrate_superspace(&f, &IntegrationSpec::raw(&["x", "xi"])).unwrap();
        assert_eq!(r.value.as_constant().unwrap(), &Scalar::tau() * &b);
        let g = gauss(&t, &["x", "y"], "1");
        let r = integrate_superspace(&g, &IntegrationSpec::liouville(&["x", "y"])).unwrap();
        assert_eq!(r.value, SuperFn::one(&t));
    }

    #[test]
    fn fubini_on_mixed_integrand() {
        let t = table();
        let (x, y, xi, eta) = (v(&t, "x"), v(&t, "y"), v(&t, "xi"), v(&t, "eta"));
        let f = gauss(&t, &["x", "y"], "1")
            .mul(&x.mul(&x).mul(&xi).add(&y.mul(&eta)).add(&xi.mul(&eta).mul(&y).mul(&y)).add(&x));
        let all = integrate_superspace(&f, &IntegrationSpec::raw(&["x", "y", "xi", "eta"])).unwrap().value;
        let inner = integrate_superspace(&f, &IntegrationSpec::raw(&["y", "eta"])).unwrap().value;
        let outer = integrate_superspace(&inner, &IntegrationSpec::raw(&["x", "xi"])).unwrap().value;
        assert_eq!(all, outer);
        assert_eq!(all.as_constant().unwrap(), -(&Scalar::two_pi()));
    }

    #[test]
    fn liouville_does_not_depend_on_the_basis() {
        let t = VariableTable::coordinates(&[
            ("p", Parity::Even),
            ("q", Parity::Even),
            ("xi", Parity::Odd),
            ("eta", Parity::Odd),
        ])
        .unwrap();
        let rows: Vec<Vec<Scalar>> = [[0, 2, 0, 0], [-2, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
            .iter()
            .map(|r| r.iter().map(|e| Scalar::from_i64(*e)).collect())
            .collect();
        let b = BilinearFormMatrix::new(2, 2, &rows).unwrap();
        let basis = symplectic_basis(&b, Orientation::Positive).unwrap();
        let (p, q, xi, eta) = (v(&t, "p"), v(&t, "q"), v(&t, "xi"), v(&t, "eta"));
        let quad = p.mul(&p).add(&q.mul(&q)).scale(&Scalar::from_i64(5)).add(&p.mul(&q).scale(&Scalar::from_i64(8)));
        let quad = quad.scale(&Scalar::from_ratio(-1, 2));
        let f = quad.exp_even().unwrap().mul(&SuperFn::one(&t).add(&xi.mul(&eta)).add(&p.mul(&p)));
        let vars: Vec<String> = ["p", "q", "xi", "eta"].iter().map(|s| s.to_string()).collect();
        let one = liouville_integral(&f, &vars, 2, &basis).unwrap();
        // Compose with a symplectic shear on the even block and an
        // orthogonal rotation of determinant one on the odd block.
        let shear = [["1", "0", "0", "0"], ["3", "1", "0", "0"], ["0", "0", "3/5", "-4/5"], ["0", "0", "4/5", "3/5"]];
        let n = 4;
        let mut t2 = vec![vec![Scalar::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                for m in 0..n {
                    t2[i][j] = &t2[i][j] + &(&basis.t[i][m] * &s(shear[m][j]));
                }
            }
        }
        let other = SymplecticBasis { t: t2, certificate: basis.certificate.clone() };
        let two = liouville_integral(&f, &vars, 2, &other).unwrap();
        assert_eq!(one.value, two.value);
        assert!(!one.value.is_zero());
    }

    #[test]
    fn change_of_variables_examples() {
        let t = table();
        let (xi, eta) = (v(&t, "xi"), v(&t, "eta"));
        let f = xi.mul(&eta).mul(&gauss(&t, &["x"], "1"));
        let spec = IntegrationSpec::raw(&["x", "xi", "eta"]);
        let id = SuperMatrix::from_scalars(1, 2, &identity(3)).unwrap();
        assert!(change_of_variables_verify(&f, &id, &spec).unwrap().holds);
        let swap = SuperMatrix::from_scalars(
            1,
            2,
            &[
                vec![Scalar::one(), Scalar::zero(), Scalar::zero()],
                vec![Scalar::zero(), Scalar::zero(), Scalar::one()],
                vec![Scalar::zero(), Scalar::one(), Scalar::zero()],
            ],
        )
        .unwrap();
        let r = change_of_variables_verify(&f, &swap, &spec).unwrap();
        assert!(r.holds);
        assert_eq!(r.ber, -Scalar::one());
        let g = gauss(&t, &["x"], "1");
        let scale = SuperMatrix::from_scalars(1, 0, &[vec![Scalar::from_i64(2)]]).unwrap();
        let r = change_of_variables_verify(&g, &scale, &IntegrationSpec::raw(&["x"])).unwrap();
        assert!(r.holds);
        assert_eq!(r.ber, Scalar::from_i64(2));
    }

    fn identity(n: usize) -> Vec<Vec<Scalar>> {
        (0..n).map(|i| (0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect()).collect()
    }

    #[test]
    fn direct_image_module_property() {
        let t = VariableTable::with_differentials(&[("b", Parity::Even), ("y", Parity::Even)]).unwrap();
        let (b, db, y, dy) = (v(&t, "b"), v(&t, "db"), v(&t, "y"), v(&t, "dy"));
        let beta = b.mul(&db).add(&b.mul(&b));
        let gamma = gauss(&t, &["y"], "1").mul(&dy).mul(&SuperFn::one(&t).add(&y.mul(&y)));
        let fibre = vec!["y".to_string()];
        let lhs = direct_image(&gamma.mul(&beta), &fibre, &Scalar::one()).unwrap().value;
        let rhs = direct_image(&gamma, &fibre, &Scalar::one()).unwrap().value.mul(&beta);
        assert_eq!(lhs, rhs);
        // Fibre (0,0) is the identity.
        assert_eq!(direct_image(&beta, &[], &Scalar::one()).unwrap().value, beta);
        // ∫ d_(y, dy) of e^{−y²/2} dy is τ, so the image is one.
        let unit = direct_image(&gauss(&t, &["y"], "1").mul(&dy), &fibre, &Scalar::one()).unwrap().value;
        assert_eq!(unit, SuperFn::one(&t));
    }
}
