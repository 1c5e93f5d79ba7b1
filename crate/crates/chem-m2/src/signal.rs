//! Scalar forcing signals: waveform descriptions and per-signal caches.

use field_core::{
    cumulative_trapezoid_uniform, reduce_mod, trapezoid_uniform, QuadratureConfig,
};

use crate::ForcingError;

/// One additive component of a signal. All analytic components have zero
/// mean by construction; the signal's mean is carried separately.
#[derive(Debug, Clone, PartialEq)]
pub enum Waveform {
    /// `amplitude · cos(2π·cycles·t/T + phase)`.
    Harmonic {
        amplitude: f64,
        cycles: u32,
        phase: f64,
    },
    /// A day/night profile: `+amplitude` over the day plateau, `−amplitude`
    /// at night, joined by linear ramps of width `ramp_fraction·T` centered
    /// at dawn (`t = 0`) and dusk (`t = day_fraction·T`).
    Trapezoid {
        amplitude: f64,
        ramp_fraction: f64,
        day_fraction: f64,
    },
    /// Uniform samples over one period (open grid: `t = 0, Δ, …, T−Δ`),
    /// linearly interpolated with wraparound.
    Samples(Vec<f64>),
}

impl Waveform {
    /// Component value at phase `u = t/T ∈ [0, 1)`.
    fn value(&self, u: f64) -> f64 {
        match self {
            Waveform::Harmonic {
                amplitude,
                cycles,
                phase,
            } => amplitude * (2.0 * std::f64::consts::PI * *cycles as f64 * u + phase).cos(),
            Waveform::Trapezoid {
                amplitude,
                ramp_fraction,
                day_fraction,
            } => {
                let half = 0.5 * ramp_fraction;
                let d = *day_fraction;
                // Wrap u into [-half, 1-half) so the dawn ramp is contiguous.
                let u = if u >= 1.0 - half { u - 1.0 } else { u };
                if u.abs() <= half {
                    amplitude * (u / half)
                } else if u < d - half {
                    *amplitude
                } else if u <= d + half {
                    -amplitude * ((u - d) / half)
                } else {
                    -*amplitude
                }
            }
            Waveform::Samples(v) => {
                let n = v.len();
                let pos = u * n as f64;
                let k = (pos.floor() as usize).min(n - 1);
                let frac = pos - k as f64;
                let next = v[(k + 1) % n];
                v[k] + frac * (next - v[k])
            }
        }
    }

    /// Analytic mean of the component over one period.
    fn mean(&self) -> f64 {
        match self {
            Waveform::Harmonic { .. } => 0.0,
            Waveform::Trapezoid {
                amplitude,
                day_fraction,
                ..
            } => amplitude * (2.0 * day_fraction - 1.0),
            Waveform::Samples(v) => {
                // Wraparound trapezoid equals the plain average on a
                // uniform open grid.
                v.iter().sum::<f64>() / v.len() as f64
            }
        }
    }

    fn validate(&self) -> Result<(), ForcingError> {
        match self {
            Waveform::Harmonic { cycles, .. } => {
                if *cycles == 0 {
                    return Err(ForcingError::BadWaveform(
                        "harmonic needs at least one cycle per period".into(),
                    ));
                }
            }
            Waveform::Trapezoid {
                ramp_fraction,
                day_fraction,
                ..
            } => {
                let half = 0.5 * ramp_fraction;
                if !(*ramp_fraction > 0.0 && *ramp_fraction < 0.5) {
                    return Err(ForcingError::BadWaveform(format!(
                        "ramp fraction {ramp_fraction} outside (0, 0.5)"
                    )));
                }
                if !(*day_fraction > half && *day_fraction < 1.0 - half) {
                    return Err(ForcingError::BadWaveform(format!(
                        "day fraction {day_fraction} incompatible with ramp {ramp_fraction}"
                    )));
                }
            }
            Waveform::Samples(v) => {
                if v.len() < 2 {
                    return Err(ForcingError::BadWaveform(
                        "sampled waveform needs at least 2 samples".into(),
                    ));
                }
                if v.iter().any(|s| !s.is_finite()) {
                    return Err(ForcingError::BadWaveform(
                        "sampled waveform has non-finite entries".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// A signal description: mean level plus zero-or-more components.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalSpec {
    pub mean: f64,
    pub components: Vec<Waveform>,
}

impl SignalSpec {
    pub fn constant(mean: f64) -> Self {
        Self {
            mean,
            components: Vec::new(),
        }
    }

    pub fn harmonic(mean: f64, amplitude: f64, phase: f64) -> Self {
        Self {
            mean,
            components: vec![Waveform::Harmonic {
                amplitude,
                cycles: 1,
                phase,
            }],
        }
    }
}

/// A `T`-periodic scalar signal with its quadrature caches: the grid values,
/// the cumulative integral of the zero-mean part `δf = f − f̄`, and the
/// scalar double integral `∫_0^T ∫_0^t δf`.
#[derive(Debug, Clone)]
pub struct Signal {
    spec: SignalSpec,
    period: f64,
    h: f64,
    mean: f64,
    values: Vec<f64>,
    delta_cum: Vec<f64>,
    delta_cum_mean: f64,
    double_integral: f64,
}

impl Signal {
    pub fn build(
        spec: SignalSpec,
        period: f64,
        quad: &QuadratureConfig,
    ) -> Result<Self, ForcingError> {
        for c in &spec.components {
            c.validate()?;
            if let Waveform::Samples(v) = c {
                if quad.samples_per_period % v.len() != 0 {
                    return Err(ForcingError::GridIncompatible {
                        samples: v.len(),
                        grid: quad.samples_per_period,
                    });
                }
            }
        }
        let n = quad.samples_per_period;
        let h = quad.spacing(period);
        let raw_value = |u: f64| -> f64 {
            spec.mean + spec.components.iter().map(|c| c.value(u)).sum::<f64>()
        };
        let values: Vec<f64> = (0..=n).map(|k| raw_value(k as f64 / n as f64)).collect();
        // Analytic component means keep constant signals exactly
        // cache-free; the residual grid mean of δf is at rounding level.
        let mean = spec.mean + spec.components.iter().map(|c| c.mean()).sum::<f64>();
        let delta: Vec<f64> = values.iter().map(|v| v - mean).collect();
        let delta_cum = cumulative_trapezoid_uniform(&delta, h);
        let delta_cum_mean = trapezoid_uniform(&delta_cum, h) / period;
        let double_integral = trapezoid_uniform(&delta_cum, h);
        if values.iter().any(|v| *v <= 0.0) && values.iter().any(|v| *v > 0.0) {
            log::warn!(
                "forcing signal changes sign over the period (min {:.4}); \
                 physically this forcing is a nonnegative rate",
                values.iter().cloned().fold(f64::INFINITY, f64::min)
            );
        }
        Ok(Self {
            spec,
            period,
            h,
            mean,
            values,
            delta_cum,
            delta_cum_mean,
            double_integral,
        })
    }

    pub fn spec(&self) -> &SignalSpec {
        &self.spec
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// `∫_0^T ∫_0^t δf ds dt`.
    pub fn double_integral(&self) -> f64 {
        self.double_integral
    }

    /// Signal value `f(t)`.
    pub fn value(&self, t: f64) -> f64 {
        let u = reduce_mod(t, self.period) / self.period;
        self.spec.mean + self.spec.components.iter().map(|c| c.value(u)).sum::<f64>()
    }

    /// `δf(t) = f(t) − f̄`.
    pub fn delta(&self, t: f64) -> f64 {
        self.value(t) - self.mean
    }

    /// `σf(t) = f(t) + f̄`.
    pub fn sigma(&self, t: f64) -> f64 {
        self.value(t) + self.mean
    }

    /// The zero-mean cumulative `P_f(t) = ∫_0^t δf ds − (1/T)∫_0^T∫_0^t δf`.
    pub fn p(&self, t: f64) -> f64 {
        self.cum_delta(t) - self.delta_cum_mean
    }

    /// `∫_0^t δf ds` (periodic: `δf` has zero grid mean).
    pub fn cum_delta(&self, t: f64) -> f64 {
        let tr = reduce_mod(t, self.period);
        let pos = tr / self.h;
        let n = self.values.len() - 1;
        let k = (pos.floor() as usize).min(n - 1);
        let frac = pos - k as f64;
        self.delta_cum[k] + frac * (self.delta_cum[k + 1] - self.delta_cum[k])
    }

    /// Node values of `P_f` on the shared grid.
    pub(crate) fn p_nodes(&self) -> Vec<f64> {
        self.delta_cum
            .iter()
            .map(|c| c - self.delta_cum_mean)
            .collect()
    }

    /// Node values of `σf` on the shared grid.
    pub(crate) fn sigma_nodes(&self) -> Vec<f64> {
        self.values.iter().map(|v| v + self.mean).collect()
    }

    pub(crate) fn grid_spacing(&self) -> f64 {
        self.h
    }

    pub(crate) fn period(&self) -> f64 {
        self.period
    }
}

/// Loads a sampled signal from CSV with header `t,value`: a uniform open
/// grid `t = 0, Δ, …, T−Δ` spanning exactly one period; the period is
/// inferred as `len·Δ`.
pub fn load_samples_csv(path: &str) -> Result<(f64, Vec<f64>), ForcingError> {
    let text = std::fs::read_to_string(path).map_err(|_| ForcingError::MissingFile {
        path: path.to_string(),
    })?;
    let mut times = Vec::new();
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if i == 0 {
            if line.to_ascii_lowercase().replace(' ', "") != "t,value" {
                return Err(ForcingError::MalformedCsv {
                    path: path.to_string(),
                    reason: format!("expected header 't,value', got '{line}'"),
                });
            }
            continue;
        }
        let mut parts = line.split(',');
        let (t, v) = match (parts.next(), parts.next(), parts.next()) {
            (Some(t), Some(v), None) => (t, v),
            _ => {
                return Err(ForcingError::MalformedCsv {
                    path: path.to_string(),
                    reason: format!("line {}: expected two fields", i + 1),
                })
            }
        };
        let t: f64 = t.trim().parse().map_err(|_| ForcingError::MalformedCsv {
            path: path.to_string(),
            reason: format!("line {}: bad time '{t}'", i + 1),
        })?;
        let v: f64 = v.trim().parse().map_err(|_| ForcingError::MalformedCsv {
            path: path.to_string(),
            reason: format!("line {}: bad value '{v}'", i + 1),
        })?;
        times.push(t);
        values.push(v);
    }
    if values.len() < 2 {
        return Err(ForcingError::MalformedCsv {
            path: path.to_string(),
            reason: "need at least 2 samples".into(),
        });
    }
    if times[0] != 0.0 {
        return Err(ForcingError::MalformedCsv {
            path: path.to_string(),
            reason: format!("grid must start at t = 0, got {}", times[0]),
        });
    }
    let dt = times[1] - times[0];
    for (k, w) in times.windows(2).enumerate() {
        let step = w[1] - w[0];
        if (step - dt).abs() > 1e-9 * dt.abs().max(1.0) {
            return Err(ForcingError::MalformedCsv {
                path: path.to_string(),
                reason: format!("non-uniform grid at row {} ({step} vs {dt})", k + 2),
            });
        }
    }
    let period = dt * values.len() as f64;
    Ok((period, values))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn constant_signal_has_empty_caches() {
        let s = Signal::build(SignalSpec::constant(0.12), 1.0, &quad()).unwrap();
        assert_eq!(s.mean(), 0.12);
        assert_eq!(s.delta(0.3), 0.0);
        assert_eq!(s.p(0.4), 0.0);
        assert_eq!(s.double_integral(), 0.0);
    }

    #[test]
    fn harmonic_mean_recovered_exactly() {
        let s = Signal::build(SignalSpec::harmonic(0.3, 0.1, 0.0), 1.0, &quad()).unwrap();
        assert!((s.mean() - 0.3).abs() < 1e-12);
        // δ has zero grid mean by construction.
        let h = s.grid_spacing();
        let deltas: Vec<f64> = (0..=2048).map(|k| s.delta(k as f64 * h)).collect();
        let m = trapezoid_uniform(&deltas, h);
        assert!(m.abs() < 1e-12);
    }

    #[test]
    fn trapezoid_mean_matches_area_oracle() {
        // 12h day (day_fraction 0.5): area of day and night cancel; with an
        // asymmetric split the mean is amplitude·(2d − 1).
        for (d, amp) in [(0.5, 0.2), (0.625, 0.4)] {
            let spec = SignalSpec {
                mean: 1.0,
                components: vec![Waveform::Trapezoid {
                    amplitude: amp,
                    ramp_fraction: 0.0625,
                    day_fraction: d,
                }],
            };
            let s = Signal::build(spec, 1.0, &quad()).unwrap();
            let oracle = 1.0 + amp * (2.0 * d - 1.0);
            assert!(
                (s.mean() - oracle).abs() < 1e-12,
                "d={d}: {} vs {oracle}",
                s.mean()
            );
        }
    }

    #[test]
    fn cached_double_integral_matches_direct_quadrature() {
        let spec = SignalSpec {
            mean: 0.4,
            components: vec![
                Waveform::Trapezoid {
                    amplitude: 0.2,
                    ramp_fraction: 0.0625,
                    day_fraction: 0.5,
                },
                Waveform::Harmonic {
                    amplitude: 0.05,
                    cycles: 2,
                    phase: -std::f64::consts::FRAC_PI_2,
                },
            ],
        };
        let q = quad();
        let s = Signal::build(spec, 1.0, &q).unwrap();
        // Direct: trapezoid over the cumulative sampled independently.
        let n = 2048;
        let h = 1.0 / n as f64;
        let deltas: Vec<f64> = (0..=n).map(|k| s.delta(k as f64 * h)).collect();
        let cum = cumulative_trapezoid_uniform(&deltas, h);
        let direct = trapezoid_uniform(&cum, h);
        assert!(
            (s.double_integral() - direct).abs() < 1e-12,
            "{} vs {direct}",
            s.double_integral()
        );
    }

    #[test]
    fn sampled_waveform_requires_compatible_grid() {
        let spec = SignalSpec {
            mean: 0.0,
            components: vec![Waveform::Samples(vec![0.0; 100])],
        };
        let err = Signal::build(spec, 1.0, &quad()).unwrap_err();
        assert!(matches!(err, ForcingError::GridIncompatible { .. }));

        let spec = SignalSpec {
            mean: 0.0,
            components: vec![Waveform::Samples(vec![1.0, 2.0, 3.0, 2.0].repeat(64))],
        };
        assert!(Signal::build(spec, 1.0, &quad()).is_ok());
    }

    #[test]
    fn csv_loader_validates_shape() {
        let dir = std::env::temp_dir().join("m2_sig_tests");
        std::fs::create_dir_all(&dir).unwrap();
        let good = dir.join("good.csv");
        let mut text = String::from("t,value\n");
        for k in 0..8 {
            text.push_str(&format!("{},{}\n", k as f64 * 0.125, (k % 3) as f64));
        }
        std::fs::write(&good, text).unwrap();
        let (period, vals) = load_samples_csv(good.to_str().unwrap()).unwrap();
        assert!((period - 1.0).abs() < 1e-12);
        assert_eq!(vals.len(), 8);

        let bad = dir.join("bad.csv");
        std::fs::write(&bad, "t,value\n0.0,1.0\n0.2,2.0\n0.5,3.0\n").unwrap();
        assert!(matches!(
            load_samples_csv(bad.to_str().unwrap()),
            Err(ForcingError::MalformedCsv { .. })
        ));

        assert!(matches!(
            load_samples_csv("/nonexistent/forcing.csv"),
            Err(ForcingError::MissingFile { .. })
        ));
    }
}
