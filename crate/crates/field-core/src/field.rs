use std::sync::Arc;

use nalgebra::DMatrix;

use crate::diff::fd_jacobian;
use crate::error::{FieldError, FieldResult};
use crate::quad::reduce_mod;

/// A time-dependent vector field on an open domain of `R^N`.
///
/// Autonomous fields implement the same trait with `period() == None` and
/// ignore the time argument. Implementations must be pure: concurrent
/// evaluation over shared references is safe, results depend only on the
/// arguments.
pub trait TimeField: Send + Sync {
    fn dim(&self) -> usize;

    /// Period of the explicit time dependence. `None` means autonomous.
    fn period(&self) -> Option<f64>;

    fn eval(&self, t: f64, x: &[f64]) -> FieldResult<Vec<f64>>;

    /// Spatial Jacobian at `(t, x)`. Defaults to central finite differences
    /// with step `max(1, |x_i|)·eps^(1/3)` per coordinate.
    fn jacobian(&self, t: f64, x: &[f64]) -> FieldResult<DMatrix<f64>> {
        fd_jacobian(&|xx| self.eval(t, xx), self.dim(), x)
    }

    /// Exact `∂F/∂t` as another field, when the representation provides one.
    fn time_derivative(&self) -> Option<DynField> {
        None
    }

    /// Domain guard: whether `x` lies in the open domain of the field.
    fn in_domain(&self, _x: &[f64]) -> bool {
        true
    }
}

pub type DynField = Arc<dyn TimeField>;

pub(crate) fn check_input(f: &dyn TimeField, t: f64, x: &[f64]) -> FieldResult<()> {
    if x.len() != f.dim() {
        return Err(FieldError::DimensionMismatch {
            expected: f.dim(),
            got: x.len(),
        });
    }
    if !f.in_domain(x) {
        return Err(FieldError::OutsideDomain { t });
    }
    Ok(())
}

type EvalFn = dyn Fn(f64, &[f64]) -> Vec<f64> + Send + Sync;
type JacFn = dyn Fn(f64, &[f64]) -> DMatrix<f64> + Send + Sync;
type GuardFn = dyn Fn(&[f64]) -> bool + Send + Sync;

/// A `T`-periodic user-supplied field built from closures.
///
/// `eval` sees time already reduced modulo the period.
pub struct PeriodicField {
    dim: usize,
    period: f64,
    eval_fn: Box<EvalFn>,
    jac_fn: Option<Box<JacFn>>,
    dt_field: Option<DynField>,
    guard: Option<Box<GuardFn>>,
}

impl PeriodicField {
    pub fn new<F>(dim: usize, period: f64, eval_fn: F) -> Self
    where
        F: Fn(f64, &[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        assert!(period > 0.0, "period must be positive");
        assert!(dim > 0, "dimension must be positive");
        Self {
            dim,
            period,
            eval_fn: Box::new(eval_fn),
            jac_fn: None,
            dt_field: None,
            guard: None,
        }
    }

    pub fn with_jacobian<J>(mut self, jac: J) -> Self
    where
        J: Fn(f64, &[f64]) -> DMatrix<f64> + Send + Sync + 'static,
    {
        self.jac_fn = Some(Box::new(jac));
        self
    }

    pub fn with_time_derivative(mut self, dt: DynField) -> Self {
        self.dt_field = Some(dt);
        self
    }

    pub fn with_domain_guard<G>(mut self, guard: G) -> Self
    where
        G: Fn(&[f64]) -> bool + Send + Sync + 'static,
    {
        self.guard = Some(Box::new(guard));
        self
    }
}

impl TimeField for PeriodicField {
    fn dim(&self) -> usize {
        self.dim
    }

    fn period(&self) -> Option<f64> {
        Some(self.period)
    }

    fn eval(&self, t: f64, x: &[f64]) -> FieldResult<Vec<f64>> {
        check_input(self, t, x)?;
        let tr = reduce_mod(t, self.period);
        let v = (self.eval_fn)(tr, x);
        debug_assert_eq!(v.len(), self.dim);
        if v.iter().any(|c| !c.is_finite()) {
            return Err(FieldError::NonFinite { t });
        }
        Ok(v)
    }

    fn jacobian(&self, t: f64, x: &[f64]) -> FieldResult<DMatrix<f64>> {
        check_input(self, t, x)?;
        let tr = reduce_mod(t, self.period);
        match &self.jac_fn {
            Some(j) => Ok(j(tr, x)),
            None => fd_jacobian(&|xx| self.eval(t, xx), self.dim, x),
        }
    }

    fn time_derivative(&self) -> Option<DynField> {
        self.dt_field.clone()
    }

    fn in_domain(&self, x: &[f64]) -> bool {
        self.guard.as_ref().map_or(true, |g| g(x))
    }
}

/// An autonomous field built from closures; the time argument is ignored.
pub struct AutonomousField {
    dim: usize,
    eval_fn: Box<EvalFn>,
    jac_fn: Option<Box<JacFn>>,
    guard: Option<Box<GuardFn>>,
}

impl AutonomousField {
    pub fn new<F>(dim: usize, eval_fn: F) -> Self
    where
        F: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        Self {
            dim,
            eval_fn: Box::new(move |_t, x| eval_fn(x)),
            jac_fn: None,
            guard: None,
        }
    }

    pub fn with_jacobian<J>(mut self, jac: J) -> Self
    where
        J: Fn(&[f64]) -> DMatrix<f64> + Send + Sync + 'static,
    {
        self.jac_fn = Some(Box::new(move |_t, x| jac(x)));
        self
    }

    pub fn with_domain_guard<G>(mut self, guard: G) -> Self
    where
        G: Fn(&[f64]) -> bool + Send + Sync + 'static,
    {
        self.guard = Some(Box::new(guard));
        self
    }
}

impl TimeField for AutonomousField {
    fn dim(&self) -> usize {
        self.dim
    }

    fn period(&self) -> Option<f64> {
        None
    }

    fn eval(&self, t: f64, x: &[f64]) -> FieldResult<Vec<f64>> {
        check_input(self, t, x)?;
        let v = (self.eval_fn)(t, x);
        if v.iter().any(|c| !c.is_finite()) {
            return Err(FieldError::NonFinite { t });
        }
        Ok(v)
    }

    fn jacobian(&self, t: f64, x: &[f64]) -> FieldResult<DMatrix<f64>> {
        check_input(self, t, x)?;
        match &self.jac_fn {
            Some(j) => Ok(j(t, x)),
            None => fd_jacobian(&|xx| self.eval(t, xx), self.dim, x),
        }
    }

    fn in_domain(&self, x: &[f64]) -> bool {
        self.guard.as_ref().map_or(true, |g| g(x))
    }
}

/// Merge the periods of two subfields of one expression.
pub(crate) fn merge_periods(a: Option<f64>, b: Option<f64>) -> FieldResult<Option<f64>> {
    match (a, b) {
        (None, p) | (p, None) => Ok(p),
        (Some(pa), Some(pb)) => {
            if (pa - pb).abs() <= 1e-12 * pa.abs().max(pb.abs()) {
                Ok(Some(pa))
            } else {
                Err(FieldError::PeriodMismatch { a: pa, b: pb })
            }
        }
    }
}
