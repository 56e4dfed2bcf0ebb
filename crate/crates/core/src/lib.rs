//! Exact symbolic engine for finite-dimensional supergeometric calculus.

pub mod coeff;
pub mod grassmann;
pub mod scalars;

pub use coeff::Coefficient;
pub use grassmann::{Parity, SuperFunction, VariableTable};
pub use scalars::Scalar;

/// Functions over the exact scalar field.
pub type SuperFn = SuperFunction<Scalar>;
pub mod superlinalg;
pub mod berezin;
pub mod equivariant;
pub mod suites;
