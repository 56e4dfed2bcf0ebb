use std::sync::Arc;

use serde_json::{json, Value};

use super::matrix::{empty_table, SuperMatrix};
use super::SuperLinalgError;
use crate::coeff::Coefficient;
use crate::grassmann::{Generator, Parity, Role, SuperFunction, VariableTable};

type F<S> = SuperFunction<S>;

/// Matrix `B_ij = B(g_i, g_j)` of a bilinear form on a free `(k|l)` module
/// with basis `e_1..e_k` (even) then `f_1..f_l` (odd).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearFormMatrix<S> {
    k: usize,
    l: usize,
    m: Vec<S>,
}

impl<S: Coefficient> BilinearFormMatrix<S> {
    pub fn new(k: usize, l: usize, rows: &[Vec<S>]) -> Result<Self, SuperLinalgError> {
        let n = k + l;
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(SuperLinalgError::DimensionMismatch);
        }
        Ok(BilinearFormMatrix { k, l, m: rows.iter().flatten().cloned().collect() })
    }

    pub fn zero(k: usize, l: usize) -> Self {
        BilinearFormMatrix { k, l, m: vec![S::zero(); (k + l) * (k + l)] }
    }

    /// Even block `[[0,1],[−1,0]]⊕…`, odd block identity.
    pub fn standard_symplectic(k: usize, l: usize) -> Result<Self, SuperLinalgError> {
        if !k.is_multiple_of(2) {
            return Err(SuperLinalgError::Degenerate);
        }
        let mut b = BilinearFormMatrix::zero(k, l);
        for p in 0..k / 2 {
            b.set(2 * p, 2 * p + 1, S::one());
            b.set(2 * p + 1, 2 * p, S::one().neg_ref());
        }
        for j in k..k + l {
            b.set(j, j, S::one());
        }
        Ok(b)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn size(&self) -> usize {
        self.k + self.l
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.m[i * self.size() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        let n = self.size();
        self.m[i * n + j] = v;
    }

    pub fn basis_parity(&self, i: usize) -> Parity {
        Parity::from_odd(i >= self.k)
    }

    pub fn neg(&self) -> Self {
        BilinearFormMatrix { m: self.m.iter().map(|x| x.neg_ref()).collect(), ..self.clone() }
    }

    /// True when the even/odd cross blocks vanish.
    pub fn is_even(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| (0..n).all(|j| self.basis_parity(i) == self.basis_parity(j) || self.get(i, j).is_zero()))
    }

    /// `B(v,w) = (−1)^{p(v)p(w)} B(w,v)` on basis pairs.
    pub fn is_symmetric(&self) -> bool {
        self.sym_check(false)
    }

    /// `B(v,w) = −(−1)^{p(v)p(w)} B(w,v)` on basis pairs.
    pub fn is_antisymmetric(&self) -> bool {
        self.sym_check(true)
    }

    fn sym_check(&self, anti: bool) -> bool {
        let n = self.size();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let mut s = self.get(j, i).clone();
                if self.basis_parity(i).sign_negates(self.basis_parity(j)) ^ anti {
                    s = s.neg_ref();
                }
                *self.get(i, j) == s
            })
        })
    }

    /// `B(Σ g_i a_i, Σ g_j b_j) = Σ (−1)^{p(a_i)p(g_j)} B_ij a_i b_j` for
    /// homogeneous components.
    pub fn evaluate(&self, v: &[F<S>], w: &[F<S>]) -> Result<F<S>, SuperLinalgError> {
        let n = self.size();
        if v.len() != n || w.len() != n {
            return Err(SuperLinalgError::DimensionMismatch);
        }
        let t = v.first().map(|f| f.table().clone()).unwrap_or_else(empty_table);
        let mut acc = F::zero(&t);
        for i in 0..n {
            if v[i].is_zero() {
                continue;
            }
            let pa = v[i].parity().ok_or(SuperLinalgError::NotHomogeneous)?;
            for j in 0..n {
                let b = self.get(i, j);
                if b.is_zero() || w[j].is_zero() {
                    continue;
                }
                let mut term = v[i].mul(&w[j]).scale(b);
                if pa.sign_negates(self.basis_parity(j)) {
                    term = term.neg();
                }
                acc = acc.add(&term);
            }
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> Value {
        let n = self.size();
        let rows: Vec<Vec<String>> =
            (0..n).map(|i| (0..n).map(|j| self.get(i, j).to_string()).collect()).collect();
        json!({ "k": self.k, "l": self.l, "entries": rows })
    }
}

/// Checks `B(Xv,w) + (−1)^{p(X)p(v)} B(v,Xw) = 0` on all basis pairs.
pub fn check_osp_spo<S: Coefficient>(
    x: &SuperMatrix<S>,
    b: &BilinearFormMatrix<S>,
) -> Result<bool, SuperLinalgError> {
    if x.k() != b.k() || x.l() != b.l() {
        return Err(SuperLinalgError::DimensionMismatch);
    }
    let px = x.parity().ok_or(SuperLinalgError::NotHomogeneous)?;
    let n = x.size();
    let t = x.table();
    for i in 0..n {
        for j in 0..n {
            let mut acc = F::zero(t);
            for m in 0..n {
                let e = x.get(m, i);
                if !e.is_zero() && !b.get(m, j).is_zero() {
                    let pe = e.parity().ok_or(SuperLinalgError::NotHomogeneous)?;
                    let mut term = e.scale(b.get(m, j));
                    if pe.sign_negates(b.basis_parity(j)) {
                        term = term.neg();
                    }
                    acc = acc.add(&term);
                }
                let e = x.get(m, j);
                if !e.is_zero() && !b.get(i, m).is_zero() {
                    let mut term = e.scale(b.get(i, m));
                    if px.sign_negates(b.basis_parity(i)) {
                        term = term.neg();
                    }
                    acc = acc.add(&term);
                }
            }
            if !acc.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The form `ΠB(Πv, Πw) = (−1)^{p(v)} B(v, w)` on `ΠV`, with basis
/// `Πf_1..Πf_l` (even) then `Πe_1..Πe_k` (odd).
pub fn pi_flip_form<S: Coefficient>(b: &BilinearFormMatrix<S>) -> Result<BilinearFormMatrix<S>, SuperLinalgError> {
    if !b.is_even() {
        return Err(SuperLinalgError::NotEven);
    }
    let (k, l) = (b.k(), b.l());
    let old = |a: usize| if a < l { k + a } else { a - l };
    let mut r = BilinearFormMatrix::zero(l, k);
    for a in 0..k + l {
        for c in 0..k + l {
            let (oa, oc) = (old(a), old(c));
            let v = b.get(oa, oc).clone();
            r.set(a, c, if b.basis_parity(oa).is_odd() { v.neg_ref() } else { v });
        }
    }
    Ok(r)
}

/// The operator on `ΠV` given by `φ(Πv) = (−1)^{p(φ)} Πφ(v)`, in the basis
/// order of [`pi_flip_form`].
pub fn pi_flip_operator<S: Coefficient>(x: &SuperMatrix<S>) -> Result<SuperMatrix<S>, SuperLinalgError> {
    let odd = x.parity().ok_or(SuperLinalgError::NotHomogeneous)?.is_odd();
    let (k, l) = (x.k(), x.l());
    let old = |a: usize| if a < l { k + a } else { a - l };
    let mut r = SuperMatrix::zero(l, k, x.table());
    for a in 0..k + l {
        for c in 0..k + l {
            let e = x.get(old(a), old(c));
            r.set(a, c, if odd { e.neg() } else { e.clone() });
        }
    }
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Positive,
    Negative,
}

/// A symplectic basis: the columns of `t` are the new basis vectors, and
/// the new odd coordinates satisfy `ξ'^1…ξ'^l = certificate · ξ^1…ξ^l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticBasis<S> {
    pub t: Vec<Vec<S>>,
    pub certificate: S,
}

/// Brings an even antisymmetric form to the standard shape of
/// [`BilinearFormMatrix::standard_symplectic`] by a block-diagonal change
/// of basis.
pub fn symplectic_basis<S: Coefficient>(
    b: &BilinearFormMatrix<S>,
    orientation: Orientation,
) -> Result<SymplecticBasis<S>, SuperLinalgError> {
    if !b.is_even() {
        return Err(SuperLinalgError::NotEven);
    }
    let (k, l) = (b.k(), b.l());
    let n = k + l;
    let even: Vec<Vec<S>> = (0..k).map(|i| (0..k).map(|j| b.get(i, j).clone()).collect()).collect();
    let odd: Vec<Vec<S>> = (k..n).map(|i| (k..n).map(|j| b.get(i, j).clone()).collect()).collect();
    let te = symplectic_even(&even)?;
    let mut to = orthonormal_odd(&odd)?;
    if orientation == Orientation::Negative && l > 0 {
        for row in to.iter_mut() {
            row[0] = row[0].neg_ref();
        }
    }
    let det = scalar_det(&to);
    let certificate = det.inv().ok_or(SuperLinalgError::Degenerate)?;
    let mut t = vec![vec![S::zero(); n]; n];
    for i in 0..k {
        for j in 0..k {
            t[i][j] = te[i][j].clone();
        }
    }
    for i in 0..l {
        for j in 0..l {
            t[k + i][k + j] = to[i][j].clone();
        }
    }
    Ok(SymplecticBasis { t, certificate })
}

fn form_on<S: Coefficient>(m: &[Vec<S>], u: &[S], v: &[S]) -> S {
    let mut acc = S::zero();
    for (i, ui) in u.iter().enumerate() {
        if ui.is_zero() {
            continue;
        }
        for (j, vj) in v.iter().enumerate() {
            if !vj.is_zero() && !m[i][j].is_zero() {
                acc = acc.add_ref(&ui.mul_ref(&m[i][j]).mul_ref(vj));
            }
        }
    }
    acc
}

fn axpy<S: Coefficient>(y: &[S], a: &S, x: &[S]) -> Vec<S> {
    y.iter().zip(x).map(|(yi, xi)| yi.add_ref(&a.mul_ref(xi))).collect()
}

fn columns_to_matrix<S: Coefficient>(cols: &[Vec<S>], n: usize) -> Vec<Vec<S>> {
    (0..n).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect()
}

fn symplectic_even<S: Coefficient>(m: &[Vec<S>]) -> Result<Vec<Vec<S>>, SuperLinalgError> {
    let n = m.len();
    let mut pool: Vec<Vec<S>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { S::one() } else { S::zero() }).collect()).collect();
    let mut out: Vec<Vec<S>> = Vec::new();
    while !pool.is_empty() {
        let e = pool.remove(0);
        let pos = pool
            .iter()
            .position(|f| !form_on(m, &e, f).is_zero())
            .ok_or(SuperLinalgError::Degenerate)?;
        let f = pool.remove(pos);
        let s = form_on(m, &e, &f).inv().unwrap();
        let f: Vec<S> = f.iter().map(|x| x.mul_ref(&s)).collect();
        pool = pool
            .into_iter()
            .map(|v| {
                let a = form_on(m, &v, &f);
                let c = form_on(m, &e, &v);
                let v = axpy(&v, &a.neg_ref(), &e);
                axpy(&v, &c.neg_ref(), &f)
            })
            .collect();
        out.push(e);
        out.push(f);
    }
    Ok(columns_to_matrix(&out, n))
}

fn orthonormal_odd<S: Coefficient>(m: &[Vec<S>]) -> Result<Vec<Vec<S>>, SuperLinalgError> {
    let n = m.len();
    let mut pool: Vec<Vec<S>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { S::one() } else { S::zero() }).collect()).collect();
    let mut out: Vec<Vec<S>> = Vec::new();
    while !pool.is_empty() {
        let pos = match pool.iter().position(|v| !form_on(m, v, v).is_zero()) {
            Some(p) => p,
            None => {
                let (a, c) = (0..pool.len())
                    .flat_map(|a| (a + 1..pool.len()).map(move |c| (a, c)))
                    .find(|(a, c)| !form_on(m, &pool[*a], &pool[*c]).is_zero())
                    .ok_or(SuperLinalgError::Degenerate)?;
                pool[a] = axpy(&pool[a], &S::one(), &pool[c].clone());
                a
            }
        };
        let v = pool.remove(pos);
        let d = form_on(m, &v, &v);
        let dinv = d.inv().unwrap();
        pool = pool
            .into_iter()
            .map(|w| {
                let c = form_on(m, &v, &w).mul_ref(&dinv);
                axpy(&w, &c.neg_ref(), &v)
            })
            .collect();
        let negative = d.as_rational().is_some_and(|r| num_traits::Signed::is_negative(&r));
        let scale = if negative {
            let root = d.neg_ref().sqrt_exact().ok_or(SuperLinalgError::OddDiagonalizationFailure)?;
            let i = S::imaginary_unit().ok_or(SuperLinalgError::OddDiagonalizationFailure)?;
            i.mul_ref(&root.inv().unwrap())
        } else {
            d.sqrt_exact().ok_or(SuperLinalgError::OddDiagonalizationFailure)?.inv().unwrap()
        };
        out.push(v.iter().map(|x| x.mul_ref(&scale)).collect());
    }
    Ok(columns_to_matrix(&out, n))
}

pub(crate) fn scalar_det<S: Coefficient>(m: &[Vec<S>]) -> S {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = S::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|r| !a[*r][c].is_zero()) else { return S::zero() };
        if p != c {
            a.swap(p, c);
            det = det.neg_ref();
        }
        det = det.mul_ref(&a[c][c]);
        let inv = a[c][c].inv().unwrap();
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].mul_ref(&inv);
            for j in c..n {
                let v = a[r][j].sub_ref(&f.mul_ref(&a[c][j]));
                a[r][j] = v;
            }
        }
    }
    det
}

/// `TᵀBT` for a scalar change of basis.
pub fn congruence<S: Coefficient>(b: &BilinearFormMatrix<S>, t: &[Vec<S>]) -> BilinearFormMatrix<S> {
    let n = b.size();
    let rows: Vec<Vec<S>> = (0..n).map(|i| (0..n).map(|j| b.get(i, j).clone()).collect()).collect();
    let mut r = BilinearFormMatrix::zero(b.k(), b.l());
    for i in 0..n {
        let ci: Vec<S> = (0..n).map(|a| t[a][i].clone()).collect();
        for j in 0..n {
            let cj: Vec<S> = (0..n).map(|a| t[a][j].clone()).collect();
            r.set(i, j, form_on(&rows, &ci, &cj));
        }
    }
    r
}

/// A table of dual coordinates `x1..xk` (even) and `xi1..xil` (odd).
pub fn dual_coordinates(k: usize, l: usize) -> Arc<VariableTable> {
    let gens = (1..=k)
        .map(|i| (format!("x{}", i), Parity::Even))
        .chain((1..=l).map(|j| (format!("xi{}", j), Parity::Odd)))
        .map(|(name, parity)| Generator { name, parity, role: Role::ParameterDual })
        .collect();
    VariableTable::new(gens).expect("fresh names")
}

fn check_coordinates<S: Coefficient>(
    b: &BilinearFormMatrix<S>,
    coords: &Arc<VariableTable>,
) -> Result<(), SuperLinalgError> {
    if coords.len() < b.size() {
        return Err(SuperLinalgError::DimensionMismatch);
    }
    for i in 0..b.size() {
        if coords.parity(i) != b.basis_parity(i) {
            return Err(SuperLinalgError::DimensionMismatch);
        }
    }
    Ok(())
}

/// `μ(X)(v) = −½ B(v, Xv)` at the generic point `v = Σ g_i z^i`, with
/// `z^i` the first generators of `coords`.
pub fn moment_map<S: Coefficient>(
    x: &SuperMatrix<S>,
    b: &BilinearFormMatrix<S>,
    coords: &Arc<VariableTable>,
) -> Result<F<S>, SuperLinalgError> {
    check_coordinates(b, coords)?;
    if !b.is_antisymmetric() || !check_osp_spo(x, b)? {
        return Err(SuperLinalgError::NotInSpo);
    }
    let n = b.size();
    let v: Vec<F<S>> = (0..n).map(|i| F::gen(coords, i)).collect();
    let mut xv = Vec::with_capacity(n);
    for r in 0..n {
        let mut acc = F::zero(coords);
        for (i, vi) in v.iter().enumerate() {
            let c = x.scalar(r, i).ok_or(SuperLinalgError::NonScalarEntries)?;
            acc = acc.add(&vi.scale(&c));
        }
        xv.push(acc);
    }
    let half = S::from_i64(-2).inv().unwrap();
    Ok(b.evaluate(&v, &xv)?.scale(&half))
}

/// Right derivative `f ∂⃖_k` through the left one.
fn right_derive<S: Coefficient>(f: &F<S>, k: usize) -> Result<F<S>, SuperLinalgError> {
    let t = f.table().clone();
    if t.parity(k) == Parity::Even {
        return Ok(f.derive(k)?);
    }
    let mut acc = F::zero(&t);
    for p in [Parity::Even, Parity::Odd] {
        let part = f.part(p).derive(k)?;
        acc = if p == Parity::Even { acc.sub(&part) } else { acc.add(&part) };
    }
    Ok(acc)
}

/// `{f, g} = Σ f∂⃖_i P^{ij} ∂_j g` with `P = B^{-T}`.
pub fn poisson_bracket<S: Coefficient>(
    f: &F<S>,
    g: &F<S>,
    b: &BilinearFormMatrix<S>,
) -> Result<F<S>, SuperLinalgError> {
    if f.has_kernels() || g.has_kernels() {
        return Err(SuperLinalgError::KernelNotSupported);
    }
    if !f.same_table(g) {
        return Err(SuperLinalgError::Grassmann(crate::grassmann::GrassmannError::TableMismatch));
    }
    let t = f.table().clone();
    check_coordinates(b, &t)?;
    let n = b.size();
    let rows: Vec<Vec<S>> = (0..n).map(|i| (0..n).map(|j| b.get(j, i).clone()).collect()).collect();
    let p = scalar_inverse(&rows).ok_or(SuperLinalgError::Degenerate)?;
    let left: Vec<F<S>> = (0..n).map(|i| right_derive(f, i)).collect::<Result<_, _>>()?;
    let right: Vec<F<S>> = (0..n).map(|j| g.derive(j).map_err(Into::into)).collect::<Result<_, SuperLinalgError>>()?;
    let mut acc = F::zero(&t);
    for i in 0..n {
        if left[i].is_zero() {
            continue;
        }
        for j in 0..n {
            if p[i][j].is_zero() || right[j].is_zero() {
                continue;
            }
            acc = acc.add(&left[i].mul(&right[j]).scale(&p[i][j]));
        }
    }
    Ok(acc)
}

pub(crate) fn scalar_inverse<S: Coefficient>(m: &[Vec<S>]) -> Option<Vec<Vec<S>>> {
    let n = m.len();
    let mut a = m.to_vec();
    let mut inv: Vec<Vec<S>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { S::one() } else { S::zero() }).collect()).collect();
    for c in 0..n {
        let p = (c..n).find(|r| !a[*r][c].is_zero())?;
        a.swap(p, c);
        inv.swap(p, c);
        let pinv = a[c][c].inv()?;
        for j in 0..n {
            a[c][j] = a[c][j].mul_ref(&pinv);
            inv[c][j] = inv[c][j].mul_ref(&pinv);
        }
        for r in 0..n {
            if r == c || a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].clone();
            for j in 0..n {
                a[r][j] = a[r][j].sub_ref(&f.mul_ref(&a[c][j]));
                inv[r][j] = inv[r][j].sub_ref(&f.mul_ref(&inv[c][j]));
            }
        }
    }
    Some(inv)
}

/// Basis of the solution space of `rows · x = 0`.
pub fn nullspace<S: Coefficient>(rows: &[Vec<S>], ncols: usize) -> Vec<Vec<S>> {
    let mut a: Vec<Vec<S>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..a.len()).find(|i| !a[*i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].inv().unwrap();
        for j in 0..ncols {
            a[r][j] = a[r][j].mul_ref(&inv);
        }
        for i in 0..a.len() {
            if i == r || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for j in 0..ncols {
                a[i][j] = a[i][j].sub_ref(&f.mul_ref(&a[r][j]));
            }
        }
        pivots.push(c);
        r += 1;
    }
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![S::zero(); ncols];
        v[free] = S::one();
        for (row, pc) in pivots.iter().enumerate() {
            v[*pc] = a[row][free].neg_ref();
        }
        out.push(v);
    }
    out
}

/// A basis of the homogeneous part of parity `p` of the Lie superalgebra
/// preserving `b`, as scalar matrices.
pub fn spo_basis<S: Coefficient>(b: &BilinearFormMatrix<S>, p: Parity) -> Vec<SuperMatrix<S>> {
    let n = b.size();
    let cells: Vec<(usize, usize)> = (0..n)
        .flat_map(|r| (0..n).map(move |c| (r, c)))
        .filter(|(r, c)| b.basis_parity(*r).add(b.basis_parity(*c)) == p)
        .collect();
    let col = |r: usize, c: usize| cells.iter().position(|x| *x == (r, c));
    let mut rows = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let mut eq = vec![S::zero(); cells.len()];
            for m in 0..n {
                if let Some(u) = col(m, i) {
                    eq[u] = eq[u].add_ref(b.get(m, j));
                }
                if let Some(u) = col(m, j) {
                    let mut v = b.get(i, m).clone();
                    if p.sign_negates(b.basis_parity(i)) {
                        v = v.neg_ref();
                    }
                    eq[u] = eq[u].add_ref(&v);
                }
            }
            rows.push(eq);
        }
    }
    let t = empty_table();
    nullspace(&rows, cells.len())
        .into_iter()
        .map(|sol| {
            let mut x = SuperMatrix::zero(b.k(), b.l(), &t);
            for (u, (r, c)) in cells.iter().enumerate() {
                x.set(*r, *c, F::constant(&t, sol[u].clone()));
            }
            x
        })
        .collect()
}
