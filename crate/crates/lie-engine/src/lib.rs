//! The Lie-transform machinery.
//!
//! A truncated τ-series of time-dependent fields plays three roles here:
//! generator of the forward near-identity transform, generator of the
//! inverse transform, and carrier of the recursive triangle that solves the
//! order-by-order linear equations tying a periodic field to its averaged
//! forms.
//!
//! Everything is numeric: derived fields are composition trees over
//! cumulative-integral caches on the period grid, spatial derivatives come
//! from the field Jacobian contract, and time derivatives of derived fields
//! are exact (the stored integrand), never finite-differenced.

mod corrector;
mod error;
mod generator;
mod inverse;
mod series;
mod triangle;

pub use corrector::CorrectorSeries;
pub use error::{EngineError, EngineResult};
pub use generator::{solve_generator, solve_generator_order1, solve_generator_order2, GeneratorSolve};
pub use inverse::{inverse_generator, inverse_transform};
pub use series::TauSeries;
pub use triangle::{binomial, lie_triangle, suspend_source, LieTriangle, Suspended};
