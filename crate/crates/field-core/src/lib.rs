//! Vector-field abstractions on which the averaging machinery is built.
//!
//! The central object is the [`TimeField`] trait: a time-dependent vector
//! field on an open domain of `R^N`, evaluated numerically. Fields compose
//! into expression DAGs (linear combinations, directional derivatives,
//! period-grid antiderivatives, time means), and every composite node keeps
//! three contracts alive:
//!
//! * `eval` — the field value at `(t, x)`,
//! * `jacobian` — the spatial Jacobian, analytic where the representation
//!   allows it (integrals differentiate under the integral sign) and central
//!   finite differences otherwise,
//! * `time_derivative` — the exact `∂/∂t` as another field; antiderivatives
//!   return their stored integrand, never a finite difference in `t`.
//!
//! All periodic evaluations reduce `t` modulo the period before table
//! lookup, so long-horizon evaluation stays bit-stable.

mod combinators;
mod diff;
mod error;
mod field;
mod integral;
mod ops;
mod quad;

pub use combinators::{
    bracket, dir, lincomb, scale, sum, ConstField, DirField, LinCombField, MeanField,
};
pub use diff::fd_jacobian;
pub use error::{FieldError, FieldResult};
pub use field::{AutonomousField, DynField, PeriodicField, TimeField};
pub use integral::{ConstantRule, PeriodicIntegralField};
pub use ops::{antiderivative, double_mean, lie_derivative, time_mean};
pub use quad::{cumulative_trapezoid_uniform, reduce_mod, trapezoid_uniform, QuadratureConfig};
