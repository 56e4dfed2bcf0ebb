use std::sync::Arc;

use super::{Element, EquivariantError, LinearAction};
use crate::grassmann::VariableTable;
use crate::scalars::Scalar;
use crate::SuperFn;

/// The linear field `X_M = −Σᵢ (ρ(X)v)ⁱ ∂ᵢ`, with coefficients living in
/// a table that contains the coordinates of the action.
#[derive(Debug, Clone)]
pub struct VectorField {
    table: Arc<VariableTable>,
    /// `(table index of the coordinate, coefficient)`.
    components: Vec<(usize, SuperFn)>,
}

impl VectorField {
    pub fn table(&self) -> &Arc<VariableTable> {
        &self.table
    }

    pub fn components(&self) -> impl Iterator<Item = (&str, &SuperFn)> {
        self.components.iter().map(|(k, c)| (self.table.name(*k), c))
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|(_, c)| c.is_zero())
    }

    /// `X_M f = Σ cᵢ ∂ᵢ f`.
    pub fn apply(&self, f: &SuperFn) -> Result<SuperFn, EquivariantError> {
        let t = f.table();
        let mut acc = SuperFn::zero(t);
        for (k, c) in &self.components {
            if !c.is_zero() {
                let kk = t.require(self.table.name(*k))?;
                acc = acc.add(&c.rehome(t)?.mul(&f.derive(kk)?));
            }
        }
        Ok(acc)
    }
}

pub fn vector_field_of(
    action: &LinearAction,
    x: &Element,
    table: &Arc<VariableTable>,
) -> Result<VectorField, EquivariantError> {
    let rho = action.rho_rows(x)?;
    let idx: Vec<usize> = action
        .coordinate_names()
        .iter()
        .map(|n| table.require(n))
        .collect::<Result<_, _>>()?;
    let mut components = Vec::with_capacity(idx.len());
    for (i, ki) in idx.iter().enumerate() {
        let mut c = SuperFn::zero(table);
        for (j, kj) in idx.iter().enumerate() {
            if !rho[i][j].is_zero() {
                c = c.sub(&SuperFn::gen(table, *kj).scale(&rho[i][j]));
            }
        }
        components.push((*ki, c));
    }
    Ok(VectorField { table: table.clone(), components })
}

/// De Rham differential `Σ dzⁱ ∂ᵢ` over every generator that has a
/// differential in the table.
pub fn d(f: &SuperFn) -> Result<SuperFn, EquivariantError> {
    let t = f.table();
    let mut acc = SuperFn::zero(t);
    for k in 0..t.len() {
        if let Some(dk) = t.differential_of(k) {
            let part = f.derive(k)?;
            if !part.is_zero() {
                acc = acc.add(&SuperFn::gen(t, dk).mul(&part));
            }
        }
    }
    Ok(acc)
}

/// Contraction `ι(X) = Σ cᵢ ∂/∂(dzⁱ)`; for an even field the sign in
/// front of each term is `+1`.
pub fn iota(f: &SuperFn, v: &VectorField) -> Result<SuperFn, EquivariantError> {
    let t = f.table();
    let mut acc = SuperFn::zero(t);
    for (k, c) in &v.components {
        let name = v.table.name(*k);
        let kk = t.require(name)?;
        let dk = t.differential_of(kk).ok_or_else(|| EquivariantError::MissingDifferential(name.to_string()))?;
        if c.is_zero() {
            continue;
        }
        let part = f.derive(dk)?;
        if !part.is_zero() {
            acc = acc.add(&c.rehome(t)?.mul(&part));
        }
    }
    Ok(acc)
}

/// `ℒ(X) = dι(X) + ι(X)d`.
pub fn lie(f: &SuperFn, v: &VectorField) -> Result<SuperFn, EquivariantError> {
    Ok(d(&iota(f, v)?)?.add(&iota(&d(f)?, v)?))
}

/// `d_𝔤(X) = d − i·ι(X)`.
pub fn d_g(f: &SuperFn, v: &VectorField) -> Result<SuperFn, EquivariantError> {
    Ok(d(f)?.sub(&iota(f, v)?.scale(&Scalar::i())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CartanOp {
    D,
    Iota,
    Lie,
    DG,
    /// `d_𝔤` at the generic point `Σ zₐ Gₐ`.
    DGGeneric,
}

pub fn cartan_operator(
    f: &SuperFn,
    op: CartanOp,
    action: &LinearAction,
    x: &Element,
) -> Result<SuperFn, EquivariantError> {
    let field = |x: &Element| vector_field_of(action, x, f.table());
    match op {
        CartanOp::D => d(f),
        CartanOp::Iota => iota(f, &field(x)?),
        CartanOp::Lie => lie(f, &field(x)?),
        CartanOp::DG => d_g(f, &field(x)?),
        CartanOp::DGGeneric => d_g(f, &field(&action.generic())?),
    }
}

/// A form with coefficients rational in the dual coordinates, optionally
/// certified invariant under every generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivariantForm {
    pub form: SuperFn,
    pub invariant: bool,
}

impl EquivariantForm {
    pub fn plain(form: SuperFn) -> Self {
        EquivariantForm { form, invariant: false }
    }

    /// Checks `ℒ(Gₐ) f = 0` for every generator.
    pub fn invariant(form: SuperFn, action: &LinearAction) -> Result<Self, EquivariantError> {
        for (a, name) in action.generator_names().iter().enumerate() {
            let v = vector_field_of(action, &action.basis_element(a), form.table())?;
            if !lie(&form, &v)?.is_zero() {
                return Err(EquivariantError::NotInvariant(name.clone()));
            }
        }
        Ok(EquivariantForm { form, invariant: true })
    }
}
