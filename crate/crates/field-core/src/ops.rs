//! The free-standing quadrature and bracket operations.
//!
//! These are the primitive forms: they evaluate directly from the field
//! contracts without building cached nodes. The cached counterparts live in
//! [`crate::PeriodicIntegralField`] and [`crate::MeanField`].

use crate::error::{FieldError, FieldResult};
use crate::field::TimeField;
use crate::quad::{
    cumulative_trapezoid_uniform, interp_linear, reduce_mod, trapezoid_uniform, QuadratureConfig,
};

/// The Lie bracket `L_G F = DF·G − DG·F` evaluated at `(t, x)`.
///
/// For autonomous fields the time argument is ignored by the fields
/// themselves.
pub fn lie_derivative(
    g: &dyn TimeField,
    f: &dyn TimeField,
    t: f64,
    x: &[f64],
) -> FieldResult<Vec<f64>> {
    if g.dim() != f.dim() {
        return Err(FieldError::DimensionMismatch {
            expected: g.dim(),
            got: f.dim(),
        });
    }
    let jf = f.jacobian(t, x)?;
    let jg = g.jacobian(t, x)?;
    let gv = g.eval(t, x)?;
    let fv = f.eval(t, x)?;
    let dim = f.dim();
    let mut out = vec![0.0; dim];
    for i in 0..dim {
        let mut acc = 0.0;
        for j in 0..dim {
            acc += jf[(i, j)] * gv[j] - jg[(i, j)] * fv[j];
        }
        out[i] = acc;
    }
    Ok(out)
}

fn sample_columns(
    f: &dyn TimeField,
    x: &[f64],
    period: f64,
    quad: &QuadratureConfig,
) -> FieldResult<Vec<Vec<f64>>> {
    let nodes = quad.nodes(period);
    let mut cols = vec![Vec::with_capacity(nodes.len()); f.dim()];
    for s in &nodes {
        let v = f.eval(*s, x)?;
        for (c, vi) in cols.iter_mut().zip(v.iter()) {
            c.push(*vi);
        }
    }
    Ok(cols)
}

/// `(1/T)∫_0^T F(s, x) ds`. Autonomous fields return their value.
pub fn time_mean(f: &dyn TimeField, x: &[f64], quad: &QuadratureConfig) -> FieldResult<Vec<f64>> {
    let period = match f.period() {
        Some(p) => p,
        None => return f.eval(0.0, x),
    };
    let h = quad.spacing(period);
    let cols = sample_columns(f, x, period, quad)?;
    Ok(cols
        .iter()
        .map(|c| trapezoid_uniform(c, h) / period)
        .collect())
}

/// `∫_0^t F(s, x) ds` by cumulative trapezoid on the period grid, linearly
/// interpolated between nodes. Time is reduced modulo the period first, and
/// full periods contribute their exact integral.
pub fn antiderivative(
    f: &dyn TimeField,
    t: f64,
    x: &[f64],
    quad: &QuadratureConfig,
) -> FieldResult<Vec<f64>> {
    let period = f
        .period()
        .ok_or(FieldError::BadQuadrature {
            reason: "antiderivative needs a periodic field".into(),
        })?;
    let h = quad.spacing(period);
    let cols = sample_columns(f, x, period, quad)?;
    let tr = reduce_mod(t, period);
    let wraps = ((t - tr) / period).round();
    let mut out = Vec::with_capacity(cols.len());
    for c in &cols {
        let cum = cumulative_trapezoid_uniform(c, h);
        let full = *cum.last().unwrap();
        out.push(interp_linear(&cum, h, tr) + wraps * full);
    }
    Ok(out)
}

/// `∫_0^T ∫_0^t F(s, x) ds dt` on the shared grid.
pub fn double_mean(f: &dyn TimeField, x: &[f64], quad: &QuadratureConfig) -> FieldResult<Vec<f64>> {
    let period = f
        .period()
        .ok_or(FieldError::BadQuadrature {
            reason: "double mean needs a periodic field".into(),
        })?;
    let h = quad.spacing(period);
    let cols = sample_columns(f, x, period, quad)?;
    let mut out = Vec::with_capacity(cols.len());
    for c in &cols {
        let cum = cumulative_trapezoid_uniform(c, h);
        out.push(trapezoid_uniform(&cum, h));
    }
    Ok(out)
}
