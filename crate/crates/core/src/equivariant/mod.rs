//! Cartan calculus for linear actions of an even abelian Lie algebra on
//! a super vector space `V = ℝ^{(k,l)}` carrying a Euclidean form, and the
//! constructions built on it: the β-form, the Mathai–Quillen Thom form,
//! `Spf`, the Euler form and the linear localization formula.

mod action;
mod cartan;
mod thom;

pub use action::{Element, LinearAction};
pub use cartan::{cartan_operator, d, d_g, iota, lie, vector_field_of, CartanOp, EquivariantForm, VectorField};
pub use thom::{
    beta_form, euler_form, localize_linear, mathai_quillen_thom, orientation_factor, spf, u_membership,
    zero_locus_linear, BetaForm, EulerForm, Localization, Membership, ThomForm, ZeroLocus, NORMALIZATION_CAVEAT,
};

use thiserror::Error;

use crate::berezin::BerezinError;
use crate::grassmann::GrassmannError;
use crate::superlinalg::SuperLinalgError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquivariantError {
    #[error("unknown generator '{0}'")]
    UnknownGenerator(String),
    #[error("no differential for coordinate '{0}'")]
    MissingDifferential(String),
    #[error("ρ(X) is not invertible on the odd part")]
    NotInvertibleOnOdd,
    #[error("form is not invariant under '{0}'")]
    NotInvariant(String),
    #[error("form is not equivariantly closed")]
    NotClosed,
    #[error("positivity needs a point without parameters")]
    ParameterizedPoint,
    #[error("generators do not commute")]
    NotAbelian,
    #[error("generator '{0}' does not preserve the form")]
    NotInSpo(String),
    #[error("the form must be symmetric and nondegenerate")]
    BadForm,
    #[error("auxiliary name '{0}' clashes with an existing generator")]
    NameClash(String),
    #[error("expected a scalar, found a function of the coordinates")]
    NotScalar,
    #[error(transparent)]
    Grassmann(#[from] GrassmannError),
    #[error(transparent)]
    Linalg(#[from] SuperLinalgError),
    #[error(transparent)]
    Berezin(#[from] BerezinError),
}
