use crate::error::{FieldError, FieldResult};

/// Composite-trapezoid quadrature on the uniform period grid.
///
/// The grid has `samples_per_period` intervals, i.e. `samples_per_period + 1`
/// nodes with the endpoints `0` and `T` both present. The forcing of the
/// target problems is only piecewise smooth, so higher-order rules buy
/// nothing; the trapezoid rule is exact on the piecewise-linear waveforms
/// used for the benchmarks and second-order on everything smooth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub samples_per_period: usize,
}

impl QuadratureConfig {
    pub const DEFAULT_SAMPLES: usize = 2048;

    pub fn new(samples_per_period: usize) -> FieldResult<Self> {
        if samples_per_period < 2 {
            return Err(FieldError::BadQuadrature {
                reason: format!("need at least 2 samples per period, got {samples_per_period}"),
            });
        }
        Ok(Self { samples_per_period })
    }

    /// Grid spacing for a field of period `t_period`.
    pub fn spacing(&self, t_period: f64) -> f64 {
        t_period / self.samples_per_period as f64
    }

    /// Grid nodes `0, h, 2h, ..., T` (inclusive of both endpoints).
    pub fn nodes(&self, t_period: f64) -> Vec<f64> {
        let h = self.spacing(t_period);
        (0..=self.samples_per_period).map(|k| k as f64 * h).collect()
    }

    /// Characteristic absolute error of the cumulative trapezoid caches on
    /// this grid, for integrands with O(1) second derivatives over one unit
    /// of time. Tolerances in the test suites are stated in multiples of
    /// this scale.
    pub fn tolerance(&self, t_period: f64) -> f64 {
        let h = self.spacing(t_period);
        h * h
    }
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            samples_per_period: Self::DEFAULT_SAMPLES,
        }
    }
}

/// Reduce `t` into `[0, period)`.
pub fn reduce_mod(t: f64, period: f64) -> f64 {
    let r = t.rem_euclid(period);
    // rem_euclid can return `period` itself when t is a tiny negative number.
    if r >= period {
        r - period
    } else {
        r
    }
}

/// Composite trapezoid over uniformly spaced samples (inclusive endpoints).
///
/// Accumulates interval by interval in the same order as
/// [`cumulative_trapezoid_uniform`], so the total integral and the last
/// cumulative entry are bit-identical.
pub fn trapezoid_uniform(samples: &[f64], h: f64) -> f64 {
    let mut acc = 0.0;
    for w in samples.windows(2) {
        acc += 0.5 * h * (w[0] + w[1]);
    }
    acc
}

/// Cumulative trapezoid over uniformly spaced samples; `out[k] = ∫_0^{kh}`.
pub fn cumulative_trapezoid_uniform(samples: &[f64], h: f64) -> Vec<f64> {
    let mut cum = Vec::with_capacity(samples.len());
    let mut acc = 0.0;
    cum.push(0.0);
    for w in samples.windows(2) {
        acc += 0.5 * h * (w[0] + w[1]);
        cum.push(acc);
    }
    cum
}

/// Linear interpolation into a cumulative table built on the period grid.
pub fn interp_linear(table: &[f64], h: f64, t: f64) -> f64 {
    let n = table.len() - 1;
    let pos = t / h;
    let k = pos.floor() as usize;
    if k >= n {
        return table[n];
    }
    let frac = pos - k as f64;
    table[k] + frac * (table[k + 1] - table[k])
}
