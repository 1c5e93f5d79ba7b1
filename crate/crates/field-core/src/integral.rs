//! The period-grid antiderivative node.
//!
//! `PeriodicIntegralField` represents `F(t,x) = ∫_0^t f(s,x) ds + C(x)` on
//! top of cumulative trapezoid caches built per state. Integrands produced
//! by the generator recursions are zero-mean by construction; when they are
//! not, the nonzero mean shows up as a linear ramp, which this node carries
//! exactly: `F = P(t mod T, x) + slope(x)·t + C(x)` with `P` the periodic
//! part of the cumulative table. The time derivative is the stored
//! integrand, never a finite difference.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use nalgebra::DMatrix;

use crate::error::FieldResult;
use crate::field::{DynField, TimeField};
use crate::quad::{trapezoid_uniform, QuadratureConfig};

/// How the `modulo a constant vector` freedom is fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstantRule {
    /// `C(x) = 0`: plain `∫_0^t`.
    Zero,
    /// `C(x)` chosen so the term has zero time mean over one period. This is
    /// the secular condition used for all generator terms.
    ZeroMean,
}

struct ColumnSet {
    /// Periodic part of the cumulative integral, per node, flattened
    /// node-major: `values[k * dim + i]`.
    values: Vec<f64>,
    /// Ramp slope per component (the integrand mean).
    slope: Vec<f64>,
    /// The additive constant per component.
    constant: Vec<f64>,
}

pub struct PeriodicIntegralField {
    integrand: DynField,
    quad: QuadratureConfig,
    period: f64,
    rule: ConstantRule,
    values: Mutex<HashMap<Vec<u64>, Arc<ColumnSet>>>,
    jacobians: Mutex<HashMap<Vec<u64>, Arc<ColumnSet>>>,
}

const COLUMN_CACHE_CAP: usize = 128;

impl PeriodicIntegralField {
    /// Builds `∫_0^t integrand ds (+ C)`. The integrand must be periodic.
    pub fn new(integrand: DynField, quad: QuadratureConfig, rule: ConstantRule) -> Self {
        let period = integrand
            .period()
            .expect("antiderivative cache needs a periodic integrand; wrap constants explicitly");
        Self {
            integrand,
            quad,
            period,
            rule,
            values: Mutex::new(HashMap::new()),
            jacobians: Mutex::new(HashMap::new()),
        }
    }

    /// Builds the antiderivative of an autonomous integrand with an explicit
    /// period (the cumulative of a constant is a pure ramp).
    pub fn with_period(
        integrand: DynField,
        period: f64,
        quad: QuadratureConfig,
        rule: ConstantRule,
    ) -> Self {
        Self {
            integrand,
            quad,
            period,
            rule,
            values: Mutex::new(HashMap::new()),
            jacobians: Mutex::new(HashMap::new()),
        }
    }

    pub fn integrand(&self) -> &DynField {
        &self.integrand
    }

    /// Magnitude of the secular ramp at `x` (sup over components). A value
    /// materially above quadrature tolerance means the integrand had a
    /// nonzero time mean and the term is not `T`-periodic.
    pub fn ramp_magnitude(&self, x: &[f64]) -> FieldResult<f64> {
        let cols = self.value_columns(x)?;
        Ok(cols.slope.iter().fold(0.0f64, |m, s| m.max(s.abs())))
    }

    fn key(x: &[f64]) -> Vec<u64> {
        x.iter().map(|v| v.to_bits()).collect()
    }

    fn build_columns(&self, raw: &[Vec<f64>]) -> ColumnSet {
        let dim = raw[0].len();
        let n = raw.len() - 1;
        let h = self.quad.spacing(self.period);
        let mut values = vec![0.0; raw.len() * dim];
        let mut slope = vec![0.0; dim];
        let mut constant = vec![0.0; dim];
        let nodes: Vec<f64> = (0..=n).map(|k| k as f64 * h).collect();
        let mut cum = vec![0.0; raw.len()];
        for i in 0..dim {
            cum[0] = 0.0;
            let mut acc = 0.0;
            for k in 0..n {
                acc += 0.5 * h * (raw[k][i] + raw[k + 1][i]);
                cum[k + 1] = acc;
            }
            // Split off the secular ramp so the stored table is periodic.
            let s = cum[n] / self.period;
            slope[i] = s;
            for k in 0..=n {
                values[k * dim + i] = cum[k] - s * nodes[k];
            }
            if self.rule == ConstantRule::ZeroMean {
                let periodic_part: Vec<f64> = (0..=n).map(|k| values[k * dim + i]).collect();
                let mean_p = trapezoid_uniform(&periodic_part, h) / self.period;
                constant[i] = -mean_p - 0.5 * s * self.period;
            }
        }
        ColumnSet {
            values,
            slope,
            constant,
        }
    }

    fn value_columns(&self, x: &[f64]) -> FieldResult<Arc<ColumnSet>> {
        let key = Self::key(x);
        {
            let cache = self.values.lock().unwrap();
            if let Some(c) = cache.get(&key) {
                return Ok(c.clone());
            }
        }
        let nodes = self.quad.nodes(self.period);
        let mut raw = Vec::with_capacity(nodes.len());
        for s in &nodes {
            raw.push(self.integrand.eval(*s, x)?);
        }
        let cols = Arc::new(self.build_columns(&raw));
        let mut cache = self.values.lock().unwrap();
        if cache.len() >= COLUMN_CACHE_CAP {
            cache.clear();
        }
        cache.entry(key).or_insert_with(|| cols.clone());
        Ok(cols)
    }

    fn jacobian_columns(&self, x: &[f64]) -> FieldResult<Arc<ColumnSet>> {
        let key = Self::key(x);
        {
            let cache = self.jacobians.lock().unwrap();
            if let Some(c) = cache.get(&key) {
                return Ok(c.clone());
            }
        }
        let nodes = self.quad.nodes(self.period);
        let dim = self.dim();
        let mut raw = Vec::with_capacity(nodes.len());
        for s in &nodes {
            let jac = self.integrand.jacobian(*s, x)?;
            let mut row = Vec::with_capacity(dim * dim);
            for i in 0..dim {
                for j in 0..dim {
                    row.push(jac[(i, j)]);
                }
            }
            raw.push(row);
        }
        let cols = Arc::new(self.build_columns(&raw));
        let mut cache = self.jacobians.lock().unwrap();
        if cache.len() >= COLUMN_CACHE_CAP {
            cache.clear();
        }
        cache.entry(key).or_insert_with(|| cols.clone());
        Ok(cols)
    }

    fn sample(&self, cols: &ColumnSet, width: usize, t: f64) -> Vec<f64> {
        let h = self.quad.spacing(self.period);
        let tr = crate::quad::reduce_mod(t, self.period);
        let n = self.quad.samples_per_period;
        let pos = tr / h;
        let k = (pos.floor() as usize).min(n - 1);
        let frac = pos - k as f64;
        let mut out = vec![0.0; width];
        for i in 0..width {
            let a = cols.values[k * width + i];
            let b = cols.values[(k + 1) * width + i];
            out[i] = a + frac * (b - a) + cols.slope[i] * t + cols.constant[i];
        }
        out
    }

    /// `∫_0^T ∫_0^t integrand ds dt` per component, on the shared grid.
    pub fn double_integral(&self, x: &[f64]) -> FieldResult<Vec<f64>> {
        let cols = self.value_columns(x)?;
        let dim = self.dim();
        let h = self.quad.spacing(self.period);
        let n = self.quad.samples_per_period;
        let mut out = vec![0.0; dim];
        for i in 0..dim {
            let full: Vec<f64> = (0..=n)
                .map(|k| cols.values[k * dim + i] + cols.slope[i] * (k as f64 * h))
                .collect();
            out[i] = trapezoid_uniform(&full, h);
        }
        Ok(out)
    }
}

impl TimeField for PeriodicIntegralField {
    fn dim(&self) -> usize {
        self.integrand.dim()
    }

    fn period(&self) -> Option<f64> {
        Some(self.period)
    }

    fn eval(&self, t: f64, x: &[f64]) -> FieldResult<Vec<f64>> {
        let cols = self.value_columns(x)?;
        Ok(self.sample(&cols, self.dim(), t))
    }

    fn jacobian(&self, t: f64, x: &[f64]) -> FieldResult<DMatrix<f64>> {
        let cols = self.jacobian_columns(x)?;
        let dim = self.dim();
        let flat = self.sample(&cols, dim * dim, t);
        // The constant rule applies to values only; Jacobian columns carry
        // the differentiated constant, which the ZeroMean rule makes the
        // derivative of the value constant automatically (same construction
        // applied to the integrand Jacobian).
        Ok(DMatrix::from_fn(dim, dim, |i, j| flat[i * dim + j]))
    }

    fn time_derivative(&self) -> Option<DynField> {
        Some(self.integrand.clone())
    }

    fn in_domain(&self, x: &[f64]) -> bool {
        self.integrand.in_domain(x)
    }
}
