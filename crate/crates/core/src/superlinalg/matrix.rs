use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use super::SuperLinalgError;
use crate::coeff::Coefficient;
use crate::grassmann::{Parity, ParityClass, SuperFunction, VariableTable};

type F<S> = SuperFunction<S>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BerVariant {
    Standard,
    /// `|det|` on the even block, via `(|b|/b)·det` with `b` the body.
    OneZero,
}

/// A `(k|l)` block matrix over a Grassmann coefficient algebra. Rows and
/// columns `0..k` are even, `k..k+l` odd.
#[derive(Clone, Debug)]
pub struct SuperMatrix<S> {
    k: usize,
    l: usize,
    table: Arc<VariableTable>,
    entries: Vec<F<S>>,
}

impl<S: Coefficient> PartialEq for SuperMatrix<S> {
    fn eq(&self, o: &Self) -> bool {
        self.k == o.k && self.l == o.l && self.entries == o.entries
    }
}

impl<S: Coefficient> Eq for SuperMatrix<S> {}

pub(crate) fn empty_table() -> Arc<VariableTable> {
    VariableTable::new(Vec::new()).expect("empty table")
}

impl<S: Coefficient> SuperMatrix<S> {
    pub fn new(
        k: usize,
        l: usize,
        table: &Arc<VariableTable>,
        rows: Vec<Vec<F<S>>>,
    ) -> Result<Self, SuperLinalgError> {
        let n = k + l;
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(SuperLinalgError::DimensionMismatch);
        }
        let entries: Vec<F<S>> = rows.into_iter().flatten().collect();
        for e in &entries {
            if !e.same_table(&F::zero(table)) {
                return Err(SuperLinalgError::Grassmann(crate::grassmann::GrassmannError::TableMismatch));
            }
            if e.has_kernels() {
                return Err(SuperLinalgError::KernelNotSupported);
            }
        }
        Ok(SuperMatrix { k, l, table: table.clone(), entries })
    }

    /// A matrix of plain scalars over the empty coefficient algebra.
    pub fn from_scalars(k: usize, l: usize, rows: &[Vec<S>]) -> Result<Self, SuperLinalgError> {
        SuperMatrix::from_scalars_in(k, l, &empty_table(), rows)
    }

    pub fn from_scalars_in(
        k: usize,
        l: usize,
        table: &Arc<VariableTable>,
        rows: &[Vec<S>],
    ) -> Result<Self, SuperLinalgError> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|c| F::constant(table, c.clone())).collect())
            .collect();
        SuperMatrix::new(k, l, table, rows)
    }

    pub fn zero(k: usize, l: usize, table: &Arc<VariableTable>) -> Self {
        SuperMatrix { k, l, table: table.clone(), entries: vec![F::zero(table); (k + l) * (k + l)] }
    }

    pub fn identity(k: usize, l: usize, table: &Arc<VariableTable>) -> Self {
        let mut m = SuperMatrix::zero(k, l, table);
        for i in 0..k + l {
            m.set(i, i, F::one(table));
        }
        m
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

    pub fn table(&self) -> &Arc<VariableTable> {
        &self.table
    }

    pub fn get(&self, i: usize, j: usize) -> &F<S> {
        &self.entries[i * self.size() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F<S>) {
        let n = self.size();
        self.entries[i * n + j] = v;
    }

    /// Parity of basis vector `i`.
    pub fn basis_parity(&self, i: usize) -> Parity {
        Parity::from_odd(i >= self.k)
    }

    /// The entry as a plain scalar, if it is one.
    pub fn scalar(&self, i: usize, j: usize) -> Option<S> {
        self.get(i, j).as_constant()
    }

    /// Homogeneous parity of the operator; `None` if the entries mix.
    pub fn parity(&self) -> Option<Parity> {
        let mut seen: Option<Parity> = None;
        let n = self.size();
        for i in 0..n {
            for j in 0..n {
                let e = self.get(i, j);
                if e.is_zero() {
                    continue;
                }
                let ep = match e.parity_of() {
                    ParityClass::Even => Parity::Even,
                    ParityClass::Odd => Parity::Odd,
                    ParityClass::Mixed => return None,
                };
                let p = ep.add(self.basis_parity(i)).add(self.basis_parity(j));
                match seen {
                    None => seen = Some(p),
                    Some(q) if q != p => return None,
                    _ => {}
                }
            }
        }
        Some(seen.unwrap_or(Parity::Even))
    }

    pub fn is_even(&self) -> bool {
        self.parity() == Some(Parity::Even)
    }

    fn same_shape(&self, o: &Self) -> Result<(), SuperLinalgError> {
        if self.k != o.k || self.l != o.l {
            return Err(SuperLinalgError::DimensionMismatch);
        }
        if *self.table != *o.table {
            return Err(SuperLinalgError::Grassmann(crate::grassmann::GrassmannError::TableMismatch));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self, SuperLinalgError> {
        self.same_shape(o)?;
        let entries = self.entries.iter().zip(&o.entries).map(|(a, b)| a.add(b)).collect();
        Ok(SuperMatrix { entries, ..self.clone() })
    }

    pub fn sub(&self, o: &Self) -> Result<Self, SuperLinalgError> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        SuperMatrix { entries: self.entries.iter().map(|e| e.neg()).collect(), ..self.clone() }
    }

    pub fn scale(&self, c: &S) -> Self {
        SuperMatrix { entries: self.entries.iter().map(|e| e.scale(c)).collect(), ..self.clone() }
    }

    /// Entry-wise product with a coefficient on the right.
    pub fn mul_elem(&self, a: &F<S>) -> Self {
        SuperMatrix { entries: self.entries.iter().map(|e| e.mul(a)).collect(), ..self.clone() }
    }

    pub fn mul(&self, o: &Self) -> Result<Self, SuperLinalgError> {
        self.same_shape(o)?;
        let n = self.size();
        let mut r = SuperMatrix::zero(self.k, self.l, &self.table);
        for i in 0..n {
            for j in 0..n {
                let mut acc = F::zero(&self.table);
                for m in 0..n {
                    let (a, b) = (self.get(i, m), o.get(m, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b));
                    }
                }
                r.set(i, j, acc);
            }
        }
        Ok(r)
    }

    /// `[X, Y] = XY − (−1)^{p(X)p(Y)} YX` for homogeneous operands.
    pub fn supercommutator(&self, o: &Self) -> Result<Self, SuperLinalgError> {
        let p = self.parity().ok_or(SuperLinalgError::NotHomogeneous)?;
        let q = o.parity().ok_or(SuperLinalgError::NotHomogeneous)?;
        let xy = self.mul(o)?;
        let yx = o.mul(self)?;
        if p.sign_negates(q) {
            xy.add(&yx)
        } else {
            xy.sub(&yx)
        }
    }

    /// `tr(A) − (−1)^{|M|} tr(D)`, extended linearly over the homogeneous
    /// parts of the diagonal entries.
    pub fn supertrace(&self) -> F<S> {
        let mut acc = F::zero(&self.table);
        for i in 0..self.size() {
            let e = self.get(i, i);
            acc = if i < self.k {
                acc.add(e)
            } else {
                acc.sub(&e.part(Parity::Even)).add(&e.part(Parity::Odd))
            };
        }
        acc
    }

    /// `exp(X)` by the finite series; entries must make `X` nilpotent.
    pub fn exp_nilpotent(&self) -> Result<Self, SuperLinalgError> {
        let mut acc = SuperMatrix::identity(self.k, self.l, &self.table);
        let mut pw = acc.clone();
        for j in 1..=64i64 {
            pw = pw.mul(self)?.scale(&S::from_i64(j).inv().unwrap());
            if pw.entries.iter().all(|e| e.is_zero()) {
                return Ok(acc);
            }
            acc = acc.add(&pw)?;
        }
        Err(SuperLinalgError::NotNilpotent)
    }

    /// `X ⊗ a` for a scalar matrix `X` and a homogeneous coefficient `a`:
    /// the entry `(i, j)` is `(−1)^{p(a)p(g_j)} X_ij a`.
    pub fn tensor(&self, a: &F<S>) -> Result<Self, SuperLinalgError> {
        let pa = a.parity().ok_or(SuperLinalgError::NotHomogeneous)?;
        let n = self.size();
        let mut r = SuperMatrix::zero(self.k, self.l, a.table());
        for i in 0..n {
            for j in 0..n {
                let x = self.scalar(i, j).ok_or(SuperLinalgError::NonScalarEntries)?;
                let mut e = a.scale(&x);
                if pa.sign_negates(self.basis_parity(j)) {
                    e = e.neg();
                }
                r.set(i, j, e);
            }
        }
        Ok(r)
    }

    fn block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Vec<Vec<F<S>>> {
        rows.map(|i| cols.clone().map(|j| self.get(i, j).clone()).collect()).collect()
    }

    /// The Berezinian `det(A − BD⁻¹C)·det(D)⁻¹` of an even matrix.
    pub fn berezinian(&self, variant: BerVariant) -> Result<F<S>, SuperLinalgError> {
        if !self.is_even() {
            return Err(SuperLinalgError::NotEven);
        }
        let (k, n) = (self.k, self.size());
        let a = self.block(0..k, 0..k);
        let b = self.block(0..k, k..n);
        let c = self.block(k..n, 0..k);
        let d = self.block(k..n, k..n);
        let dinv = inverse(&self.table, &d).map_err(|_| SuperLinalgError::SingularD)?;
        let schur: Vec<Vec<F<S>>> = if k == n {
            a
        } else {
            let bdc = mat_mul(&self.table, &mat_mul(&self.table, &b, &dinv), &c);
            a.iter().zip(&bdc).map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x.sub(y)).collect()).collect()
        };
        let mut top = determinant(&self.table, &schur)?;
        if variant == BerVariant::OneZero {
            let body = top.body().as_rational().filter(|r| !num_traits::Zero::is_zero(r));
            let body = body.ok_or(SuperLinalgError::NonRationalBody)?;
            if num_traits::Signed::is_negative(&body) {
                top = top.neg();
            }
        }
        let dd = determinant(&self.table, &d)?;
        Ok(top.mul(&even_inverse(&dd).ok_or(SuperLinalgError::SingularD)?))
    }

    pub fn to_json(&self) -> Value {
        let n = self.size();
        let rows: Vec<Vec<String>> =
            (0..n).map(|i| (0..n).map(|j| self.get(i, j).to_string()).collect()).collect();
        json!({ "k": self.k, "l": self.l, "entries": rows })
    }
}

impl<S: Coefficient> fmt::Display for SuperMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.size();
        write!(f, "({}|{}) [", self.k, self.l)?;
        for i in 0..n {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for j in 0..n {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

/// Inverse of an even element with invertible body, by the Neumann series
/// on its nilpotent part.
pub fn even_inverse<S: Coefficient>(f: &F<S>) -> Option<F<S>> {
    if f.has_kernels() {
        return None;
    }
    let b = f.body();
    let binv = b.inv()?;
    let soul = f.sub(&F::constant(f.table(), b));
    if !soul.odd_coefficient(0).is_zero() {
        return None;
    }
    let m = soul.scale(&binv).neg();
    let mut acc = F::one(f.table());
    let mut pw = F::one(f.table());
    loop {
        pw = pw.mul(&m);
        if pw.is_zero() {
            break;
        }
        acc = acc.add(&pw);
    }
    Some(acc.scale(&binv))
}

fn mat_mul<S: Coefficient>(t: &Arc<VariableTable>, a: &[Vec<F<S>>], b: &[Vec<F<S>>]) -> Vec<Vec<F<S>>> {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = F::zero(t);
                    for (m, x) in row.iter().enumerate() {
                        if !x.is_zero() && !b[m][j].is_zero() {
                            acc = acc.add(&x.mul(&b[m][j]));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Gauss–Jordan inverse of a square matrix with even entries, pivoting on
/// entries with invertible body.
pub fn inverse<S: Coefficient>(t: &Arc<VariableTable>, m: &[Vec<F<S>>]) -> Result<Vec<Vec<F<S>>>, SuperLinalgError> {
    let n = m.len();
    let mut a: Vec<Vec<F<S>>> = m.to_vec();
    let mut inv: Vec<Vec<F<S>>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { F::one(t) } else { F::zero(t) }).collect()).collect();
    for col in 0..n {
        let (piv, pinv) = (col..n)
            .find_map(|r| even_inverse(&a[r][col]).map(|v| (r, v)))
            .ok_or(SuperLinalgError::Singular)?;
        a.swap(col, piv);
        inv.swap(col, piv);
        for j in 0..n {
            a[col][j] = a[col][j].mul(&pinv);
            inv[col][j] = inv[col][j].mul(&pinv);
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                let (x, y) = (a[col][j].mul(&f), inv[col][j].mul(&f));
                a[r][j] = a[r][j].sub(&x);
                inv[r][j] = inv[r][j].sub(&y);
            }
        }
    }
    Ok(inv)
}

/// Determinant over the even subalgebra: fraction-free Bareiss elimination
/// while invertible pivots exist, cofactor expansion of the remainder.
pub fn determinant<S: Coefficient>(t: &Arc<VariableTable>, m: &[Vec<F<S>>]) -> Result<F<S>, SuperLinalgError> {
    let n = m.len();
    if n == 0 {
        return Ok(F::one(t));
    }
    let mut a = m.to_vec();
    let mut negate = false;
    let mut prev = F::one(t);
    let mut prev_inv = F::one(t);
    for kk in 0..n {
        let Some(piv) = (kk..n).find(|r| even_inverse(&a[*r][kk]).is_some()) else {
            let rest: Vec<Vec<F<S>>> = a[kk..].iter().map(|r| r[kk..].to_vec()).collect();
            if rest.len() > 8 {
                return Err(SuperLinalgError::Singular);
            }
            let mut d = cofactor_det(t, &rest);
            for _ in 0..(n - kk).saturating_sub(1) {
                d = d.mul(&prev_inv);
            }
            return Ok(if negate { d.neg() } else { d });
        };
        if piv != kk {
            a.swap(kk, piv);
            negate = !negate;
        }
        for i in kk + 1..n {
            for j in kk + 1..n {
                let v = a[kk][kk].mul(&a[i][j]).sub(&a[i][kk].mul(&a[kk][j]));
                a[i][j] = v.mul(&prev_inv);
            }
        }
        prev = a[kk][kk].clone();
        prev_inv = even_inverse(&prev).expect("pivot is invertible");
    }
    Ok(if negate { prev.neg() } else { prev })
}

fn cofactor_det<S: Coefficient>(t: &Arc<VariableTable>, m: &[Vec<F<S>>]) -> F<S> {
    let n = m.len();
    if n == 0 {
        return F::one(t);
    }
    let mut acc = F::zero(t);
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<F<S>>> = m[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = m[0][j].mul(&cofactor_det(t, &minor));
        acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}
