use std::sync::Arc;

use num_traits::{One, Zero};

use super::EquivariantError;
use crate::grassmann::{Parity, VariableTable};
use crate::scalars::Scalar;
use crate::superlinalg::{check_osp_spo, scalar_det, BilinearFormMatrix, SuperMatrix};

/// A point `X = Σ cₐ Gₐ` of the Lie algebra, by its coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element(pub Vec<Scalar>);

impl Element {
    pub fn is_numeric(&self) -> bool {
        self.0.iter().all(|c| c.is_constant())
    }
}

/// Commuting even generators acting linearly on `ℝ^{(k,l)}` and
/// preserving a Euclidean form `Q` (symmetric on the even block,
/// antisymmetric on the odd block). Coordinates are listed even first.
#[derive(Debug, Clone)]
pub struct LinearAction {
    coords: Vec<(String, Parity)>,
    table: Arc<VariableTable>,
    q: BilinearFormMatrix<Scalar>,
    generators: Vec<(String, Vec<Vec<Scalar>>)>,
    params: Vec<String>,
}

fn scalars(rows: &[&[i64]]) -> Vec<Vec<Scalar>> {
    rows.iter().map(|r| r.iter().map(|x| Scalar::from_i64(*x)).collect()).collect()
}

fn block_diag(a: &[Vec<Scalar>], d: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let (k, l) = (a.len(), d.len());
    let mut m = vec![vec![Scalar::zero(); k + l]; k + l];
    for i in 0..k {
        m[i][..k].clone_from_slice(&a[i]);
    }
    for i in 0..l {
        m[k + i][k..].clone_from_slice(&d[i]);
    }
    m
}

impl LinearAction {
    pub fn new(
        even: &[&str],
        odd: &[&str],
        q: BilinearFormMatrix<Scalar>,
        generators: Vec<(String, Vec<Vec<Scalar>>)>,
        params: Vec<String>,
    ) -> Result<Self, EquivariantError> {
        let (k, l) = (even.len(), odd.len());
        if q.k() != k || q.l() != l || !q.is_even() || !q.is_symmetric() {
            return Err(EquivariantError::BadForm);
        }
        let full: Vec<Vec<Scalar>> = (0..k + l).map(|i| (0..k + l).map(|j| q.get(i, j).clone()).collect()).collect();
        if scalar_det(&full).is_zero() {
            return Err(EquivariantError::BadForm);
        }
        if params.len() != generators.len() {
            return Err(EquivariantError::UnknownGenerator(format!("{} parameters", params.len())));
        }
        let coords: Vec<(String, Parity)> = even
            .iter()
            .map(|n| (n.to_string(), Parity::Even))
            .chain(odd.iter().map(|n| (n.to_string(), Parity::Odd)))
            .collect();
        let spec: Vec<(&str, Parity)> = coords.iter().map(|(n, p)| (n.as_str(), *p)).collect();
        let table = VariableTable::with_differentials(&spec)?;
        let action = LinearAction { coords, table, q, generators, params };
        let mats: Vec<SuperMatrix<Scalar>> =
            (0..action.generators.len()).map(|a| action.generator_matrix(a)).collect::<Result<_, _>>()?;
        for (a, m) in mats.iter().enumerate() {
            if !m.is_even() || !check_osp_spo(m, &action.q)? {
                return Err(EquivariantError::NotInSpo(action.generators[a].0.clone()));
            }
            for other in &mats[a + 1..] {
                if !m.supercommutator(other)?.entries_zero() {
                    return Err(EquivariantError::NotAbelian);
                }
            }
        }
        Ok(action)
    }

    /// `[[0,−1],[1,0]]` on `ℝ^{(0,2)}` with `Q(f₁,f₂) = 1`, parameter `z`.
    pub fn rotation_odd() -> Self {
        let q = BilinearFormMatrix::new(0, 2, &scalars(&[&[0, 1], &[-1, 0]])).expect("form");
        LinearAction::new(&[], &["xi", "eta"], q, vec![("G".into(), scalars(&[&[0, -1], &[1, 0]]))], vec!["z".into()])
            .expect("preset")
    }

    /// `so(2)` on the Euclidean plane `ℝ^{(2,0)}`, parameter `z`.
    pub fn rotation_even() -> Self {
        let q = BilinearFormMatrix::new(2, 0, &scalars(&[&[1, 0], &[0, 1]])).expect("form");
        LinearAction::new(&["x", "y"], &[], q, vec![("G".into(), scalars(&[&[0, -1], &[1, 0]]))], vec!["z".into()])
            .expect("preset")
    }

    /// Independent rotations of the even and odd planes of `ℝ^{(2,2)}`,
    /// parameters `z1`, `z2`.
    pub fn rotation_mixed() -> Self {
        let q = BilinearFormMatrix::new(
            2,
            2,
            &scalars(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 0, 1], &[0, 0, -1, 0]]),
        )
        .expect("form");
        let rot = scalars(&[&[0, -1], &[1, 0]]);
        let zero = scalars(&[&[0, 0], &[0, 0]]);
        LinearAction::new(
            &["x1", "x2"],
            &["xi1", "xi2"],
            q,
            vec![("G1".into(), block_diag(&rot, &zero)), ("G2".into(), block_diag(&zero, &rot))],
            vec!["z1".into(), "z2".into()],
        )
        .expect("preset")
    }

    /// Boosts `diag(1,−1)` on both planes of `ℝ^{(2,2)}`, preserving the
    /// split form `[[0,1],[1,0]] ⊕ [[0,1],[−1,0]]`. The form is not
    /// positive, so this preset only serves the Cartan calculus.
    pub fn hyperbolic() -> Self {
        let q = BilinearFormMatrix::new(
            2,
            2,
            &scalars(&[&[0, 1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, -1, 0]]),
        )
        .expect("form");
        let h = scalars(&[&[1, 0], &[0, -1]]);
        LinearAction::new(&["x1", "x2"], &["xi1", "xi2"], q, vec![("H".into(), block_diag(&h, &h))], vec!["z".into()])
            .expect("preset")
    }

    /// `ℝ^{(2,2)}` with a non-diagonal form `[[1,1],[1,5]] ⊕ [[0,3],[−3,0]]`
    /// and one generator mixing both planes, parameter `z`.
    pub fn skewed() -> Self {
        let q = BilinearFormMatrix::new(
            2,
            2,
            &scalars(&[&[1, 1, 0, 0], &[1, 5, 0, 0], &[0, 0, 0, 3], &[0, 0, -3, 0]]),
        )
        .expect("form");
        // Q₀⁻¹·[[0,1],[−1,0]] and Q₁⁻¹·1.
        let r = |n: i64, d: i64| Scalar::from_ratio(n, d);
        let a = vec![vec![r(1, 4), r(5, 4)], vec![r(-1, 4), r(-1, 4)]];
        let d = vec![vec![r(0, 1), r(-1, 3)], vec![r(1, 3), r(0, 1)]];
        LinearAction::new(&["x1", "x2"], &["xi1", "xi2"], q, vec![("G".into(), block_diag(&a, &d))], vec!["z".into()])
            .expect("preset")
    }

    pub fn preset(name: &str) -> Option<Self> {
        Some(match name {
            "rot02" => LinearAction::rotation_odd(),
            "rot20" => LinearAction::rotation_even(),
            "rot22" => LinearAction::rotation_mixed(),
            "hyp22" => LinearAction::hyperbolic(),
            "skew22" => LinearAction::skewed(),
            _ => return None,
        })
    }

    pub const PRESETS: [&'static str; 5] = ["rot02", "rot20", "rot22", "hyp22", "skew22"];

    pub fn k(&self) -> usize {
        self.q.k()
    }

    pub fn l(&self) -> usize {
        self.q.l()
    }

    /// Coordinates followed by their differentials.
    pub fn table(&self) -> &Arc<VariableTable> {
        &self.table
    }

    pub fn coordinates(&self) -> &[(String, Parity)] {
        &self.coords
    }

    pub fn coordinate_names(&self) -> Vec<String> {
        self.coords.iter().map(|(n, _)| n.clone()).collect()
    }

    pub fn form(&self) -> &BilinearFormMatrix<Scalar> {
        &self.q
    }

    pub fn generator_names(&self) -> Vec<String> {
        self.generators.iter().map(|(n, _)| n.clone()).collect()
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn generator_matrix(&self, a: usize) -> Result<SuperMatrix<Scalar>, EquivariantError> {
        Ok(SuperMatrix::from_scalars(self.k(), self.l(), &self.generators[a].1)?)
    }

    /// `X = Σ zₐ Gₐ` with the dual coordinates as parameters.
    pub fn generic(&self) -> Element {
        Element(self.params.iter().map(|p| Scalar::param(p)).collect())
    }

    pub fn basis_element(&self, a: usize) -> Element {
        Element((0..self.generators.len()).map(|b| if a == b { Scalar::one() } else { Scalar::zero() }).collect())
    }

    /// An element from `(generator, coefficient)` pairs; missing
    /// generators get coefficient zero.
    pub fn element(&self, coeffs: &[(&str, Scalar)]) -> Result<Element, EquivariantError> {
        let mut c = vec![Scalar::zero(); self.generators.len()];
        for (name, v) in coeffs {
            let a = self
                .generators
                .iter()
                .position(|(n, _)| n == name)
                .ok_or_else(|| EquivariantError::UnknownGenerator(name.to_string()))?;
            c[a] = &c[a] + v;
        }
        Ok(Element(c))
    }

    /// Substitutes numeric values for the dual coordinates of `x`.
    pub fn at(&self, x: &Element, values: &[(&str, Scalar)]) -> Result<Element, EquivariantError> {
        let mut out = x.0.clone();
        for c in out.iter_mut() {
            for (name, v) in values {
                if !self.params.iter().any(|p| p == name) {
                    return Err(EquivariantError::UnknownGenerator(name.to_string()));
                }
                *c = c.substitute_param(name, v).map_err(|_| EquivariantError::NotScalar)?;
            }
        }
        Ok(Element(out))
    }

    fn check_len(&self, x: &Element) -> Result<(), EquivariantError> {
        if x.0.len() != self.generators.len() {
            return Err(EquivariantError::UnknownGenerator(format!("element of length {}", x.0.len())));
        }
        Ok(())
    }

    /// Matrix of `ρ(X)` as scalars.
    pub fn rho_rows(&self, x: &Element) -> Result<Vec<Vec<Scalar>>, EquivariantError> {
        self.check_len(x)?;
        let n = self.k() + self.l();
        let mut m = vec![vec![Scalar::zero(); n]; n];
        for (c, (_, g)) in x.0.iter().zip(&self.generators) {
            if c.is_zero() {
                continue;
            }
            for i in 0..n {
                for j in 0..n {
                    if !g[i][j].is_zero() {
                        m[i][j] = &m[i][j] + &(c * &g[i][j]);
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn rho(&self, x: &Element) -> Result<SuperMatrix<Scalar>, EquivariantError> {
        Ok(SuperMatrix::from_scalars(self.k(), self.l(), &self.rho_rows(x)?)?)
    }

    /// The even and odd diagonal blocks of a full matrix.
    pub(crate) fn blocks(&self, m: &[Vec<Scalar>]) -> (Vec<Vec<Scalar>>, Vec<Vec<Scalar>>) {
        let k = self.k();
        let a = m[..k].iter().map(|r| r[..k].to_vec()).collect();
        let d = m[k..].iter().map(|r| r[k..].to_vec()).collect();
        (a, d)
    }

    pub(crate) fn form_rows(&self) -> Vec<Vec<Scalar>> {
        let n = self.k() + self.l();
        (0..n).map(|i| (0..n).map(|j| self.q.get(i, j).clone()).collect()).collect()
    }
}

trait EntriesZero {
    fn entries_zero(&self) -> bool;
}

impl EntriesZero for SuperMatrix<Scalar> {
    fn entries_zero(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| (0..n).all(|j| self.get(i, j).is_zero()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_validate() {
        for name in LinearAction::PRESETS {
            let a = LinearAction::preset(name).unwrap();
            assert_eq!(a.table().len(), 2 * (a.k() + a.l()), "{}", name);
        }
    }

    #[test]
    fn non_commuting_generators_rejected() {
        let q = BilinearFormMatrix::new(3, 0, &scalars(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap();
        let g1 = scalars(&[&[0, -1, 0], &[1, 0, 0], &[0, 0, 0]]);
        let g2 = scalars(&[&[0, 0, -1], &[0, 0, 0], &[1, 0, 0]]);
        let r = LinearAction::new(&["a", "b", "c"], &[], q, vec![("A".into(), g1), ("B".into(), g2)], vec![
            "s".into(),
            "t".into(),
        ]);
        assert_eq!(r.unwrap_err(), EquivariantError::NotAbelian);
    }

    #[test]
    fn generator_outside_the_orthosymplectic_algebra_rejected() {
        let q = BilinearFormMatrix::new(2, 0, &scalars(&[&[1, 0], &[0, 1]])).unwrap();
        let g = scalars(&[&[1, 0], &[0, 0]]);
        let r = LinearAction::new(&["x", "y"], &[], q, vec![("G".into(), g)], vec!["z".into()]);
        assert!(matches!(r, Err(EquivariantError::NotInSpo(_))));
    }

    #[test]
    fn elements_by_name() {
        let a = LinearAction::rotation_mixed();
        let x = a.element(&[("G2", Scalar::from_i64(3))]).unwrap();
        assert_eq!(x.0, vec![Scalar::zero(), Scalar::from_i64(3)]);
        assert!(matches!(a.element(&[("G9", Scalar::one())]), Err(EquivariantError::UnknownGenerator(_))));
        let rho = a.rho_rows(&x).unwrap();
        assert_eq!(rho[3][2], Scalar::from_i64(3));
    }
}
