//! Fixed-step explicit integrators and grid resampling.
//!
//! Fixed steps only: the wall-clock comparisons elsewhere in the workspace
//! are defined in terms of the coarse-to-fine step ratio, which adaptive
//! stepping would confound.

use field_core::{DynField, FieldError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IntegrateError {
    #[error("step size must be positive, got {0}")]
    BadStep(f64),

    #[error("integration span [{t0}, {t_end}] does not contain a full step")]
    EmptySpan { t0: f64, t_end: f64 },

    #[error("trajectory left the domain at t = {t} (last valid index {last_valid})")]
    DomainExit { t: f64, last_valid: usize },

    #[error("non-finite state at t = {t} (last valid index {last_valid})")]
    NonFiniteState { t: f64, last_valid: usize },

    #[error("coarse step {coarse_dt} is not an integer multiple of fine step {fine_dt}")]
    NonDivisibleSteps { coarse_dt: f64, fine_dt: f64 },

    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Explicit one-step methods.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Euler,
    Rk4,
}

impl Method {
    pub fn parse(name: &str) -> Option<Method> {
        match name.to_ascii_lowercase().as_str() {
            "euler" => Some(Method::Euler),
            "rk4" => Some(Method::Rk4),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Method::Euler => "euler",
            Method::Rk4 => "rk4",
        }
    }
}

/// A uniformly sampled solution path.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub t0: f64,
    pub dt: f64,
    pub states: Vec<Vec<f64>>,
    pub dim: usize,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn time(&self, index: usize) -> f64 {
        self.t0 + index as f64 * self.dt
    }

    pub fn t_end(&self) -> f64 {
        self.time(self.states.len() - 1)
    }

    pub fn last(&self) -> &[f64] {
        self.states.last().expect("trajectory is nonempty")
    }

    /// Piecewise-linear resampling onto a finer grid; coarse nodes are
    /// preserved exactly. Requires `dt = k · fine_dt` for integer `k ≥ 1`.
    pub fn resample_linear(&self, fine_dt: f64) -> Result<Trajectory, IntegrateError> {
        if fine_dt <= 0.0 || !fine_dt.is_finite() {
            return Err(IntegrateError::BadStep(fine_dt));
        }
        let ratio = self.dt / fine_dt;
        let k = ratio.round();
        if k < 1.0 || (ratio - k).abs() > 1e-9 * ratio.max(1.0) {
            return Err(IntegrateError::NonDivisibleSteps {
                coarse_dt: self.dt,
                fine_dt,
            });
        }
        let k = k as usize;
        if k == 1 {
            return Ok(self.clone());
        }
        let n_coarse = self.states.len() - 1;
        let mut states = Vec::with_capacity(n_coarse * k + 1);
        for seg in 0..n_coarse {
            let a = &self.states[seg];
            let b = &self.states[seg + 1];
            states.push(a.clone());
            for j in 1..k {
                let w = j as f64 / k as f64;
                states.push(
                    a.iter()
                        .zip(b.iter())
                        .map(|(ai, bi)| ai + w * (bi - ai))
                        .collect(),
                );
            }
        }
        states.push(self.states[n_coarse].clone());
        Ok(Trajectory {
            t0: self.t0,
            dt: self.dt / k as f64,
            states,
            dim: self.dim,
        })
    }
}

fn step_euler(field: &DynField, t: f64, x: &[f64], dt: f64) -> Result<Vec<f64>, FieldError> {
    let k1 = field.eval(t, x)?;
    Ok(x.iter().zip(k1.iter()).map(|(xi, ki)| xi + dt * ki).collect())
}

fn step_rk4(field: &DynField, t: f64, x: &[f64], dt: f64) -> Result<Vec<f64>, FieldError> {
    let half = 0.5 * dt;
    let k1 = field.eval(t, x)?;
    let x2: Vec<f64> = x.iter().zip(&k1).map(|(xi, ki)| xi + half * ki).collect();
    let k2 = field.eval(t + half, &x2)?;
    let x3: Vec<f64> = x.iter().zip(&k2).map(|(xi, ki)| xi + half * ki).collect();
    let k3 = field.eval(t + half, &x3)?;
    let x4: Vec<f64> = x.iter().zip(&k3).map(|(xi, ki)| xi + dt * ki).collect();
    let k4 = field.eval(t + dt, &x4)?;
    Ok((0..x.len())
        .map(|i| x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect())
}

/// Integrate `field` from `(t0, x0)` to `t_end` with a fixed step.
///
/// `t_end` is snapped to the nearest grid node `t0 + n·dt`; works for
/// autonomous and time-dependent fields alike.
pub fn integrate(
    field: &DynField,
    x0: &[f64],
    t0: f64,
    t_end: f64,
    dt: f64,
    method: Method,
) -> Result<Trajectory, IntegrateError> {
    if dt <= 0.0 || !dt.is_finite() {
        return Err(IntegrateError::BadStep(dt));
    }
    let n = ((t_end - t0) / dt).round();
    if n < 1.0 || !n.is_finite() {
        return Err(IntegrateError::EmptySpan { t0, t_end });
    }
    let n = n as usize;

    let mut states = Vec::with_capacity(n + 1);
    if !field.in_domain(x0) {
        return Err(IntegrateError::DomainExit {
            t: t0,
            last_valid: 0,
        });
    }
    states.push(x0.to_vec());
    let mut x = x0.to_vec();
    for step in 0..n {
        let t = t0 + step as f64 * dt;
        let next = match method {
            Method::Euler => step_euler(field, t, &x, dt),
            Method::Rk4 => step_rk4(field, t, &x, dt),
        };
        let next = match next {
            Ok(v) => v,
            Err(FieldError::OutsideDomain { t }) => {
                return Err(IntegrateError::DomainExit {
                    t,
                    last_valid: step,
                })
            }
            Err(e) => return Err(e.into()),
        };
        let t_next = t0 + (step + 1) as f64 * dt;
        if next.iter().any(|c| !c.is_finite()) {
            return Err(IntegrateError::NonFiniteState {
                t: t_next,
                last_valid: step,
            });
        }
        if !field.in_domain(&next) {
            return Err(IntegrateError::DomainExit {
                t: t_next,
                last_valid: step,
            });
        }
        states.push(next.clone());
        x = next;
    }
    Ok(Trajectory {
        t0,
        dt,
        states,
        dim: x0.len(),
    })
}
