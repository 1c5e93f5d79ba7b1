//! The four-signal forcing profile and its shared caches.

use std::sync::OnceLock;

use field_core::{trapezoid_uniform, QuadratureConfig};

use crate::signal::{Signal, SignalSpec, Waveform};
use crate::ForcingError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignalName {
    S1,
    S2,
    Z1,
    Z2,
}

pub const SIGNALS: [SignalName; 4] = [
    SignalName::S1,
    SignalName::S2,
    SignalName::Z1,
    SignalName::Z2,
];

/// The benchmark's raw data: four `T`-periodic scalar signals with their
/// cumulative caches, plus the cross-integral table used by the closed-form
/// second-order correction.
pub struct ForcingProfile {
    period: f64,
    quad: QuadratureConfig,
    s1: Signal,
    s2: Signal,
    z1: Signal,
    z2: Signal,
    /// `J[f][g] = (1/T)∫_0^T P_f(t)·σ_g(t) dt` and `M[f] = (1/T)∫_0^T P_f`.
    cross: OnceLock<([[f64; 4]; 4], [f64; 4])>,
}

impl ForcingProfile {
    pub fn build(
        period: f64,
        s1: SignalSpec,
        s2: SignalSpec,
        z1: SignalSpec,
        z2: SignalSpec,
        quad: QuadratureConfig,
    ) -> Result<Self, ForcingError> {
        Ok(Self {
            period,
            quad,
            s1: Signal::build(s1, period, &quad)?,
            s2: Signal::build(s2, period, &quad)?,
            z1: Signal::build(z1, period, &quad)?,
            z2: Signal::build(z2, period, &quad)?,
            cross: OnceLock::new(),
        })
    }

    /// Constant forcing at the given levels.
    pub fn constant(
        period: f64,
        s1: f64,
        s2: f64,
        z1: f64,
        z2: f64,
        quad: QuadratureConfig,
    ) -> Result<Self, ForcingError> {
        Self::build(
            period,
            SignalSpec::constant(s1),
            SignalSpec::constant(s2),
            SignalSpec::constant(z1),
            SignalSpec::constant(z2),
            quad,
        )
    }

    /// The canonical benchmark reconstruction: day/night trapezoids with an
    /// in-phase second harmonic on `S₁` and `Z₁`, constants `S₂ = 0.12` and
    /// `Z₂ = 0.05`, and mean levels back-solved so the first averaged system
    /// keeps its hyperbolic rest point near `(1.584, 0.431)`. Amplitudes are
    /// tuned so the full solution oscillates with magnitude about `1e−1`
    /// (see the `tune_benchmark` example).
    pub fn benchmark(quad: QuadratureConfig) -> Result<Self, ForcingError> {
        let shape = |amp: f64| -> Vec<Waveform> {
            vec![
                Waveform::Trapezoid {
                    amplitude: amp,
                    ramp_fraction: 0.0625,
                    day_fraction: 0.5,
                },
                Waveform::Harmonic {
                    amplitude: 0.25 * amp,
                    cycles: 2,
                    phase: -std::f64::consts::FRAC_PI_2,
                },
            ]
        };
        Self::build(
            1.0,
            SignalSpec {
                mean: 0.42470,
                components: shape(0.26),
            },
            SignalSpec::constant(0.12),
            SignalSpec {
                mean: 0.62204,
                components: shape(0.32),
            },
            SignalSpec::constant(0.05),
            quad,
        )
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn quad(&self) -> QuadratureConfig {
        self.quad
    }

    pub fn signal(&self, name: SignalName) -> &Signal {
        match name {
            SignalName::S1 => &self.s1,
            SignalName::S2 => &self.s2,
            SignalName::Z1 => &self.z1,
            SignalName::Z2 => &self.z2,
        }
    }

    pub fn means(&self) -> [f64; 4] {
        [
            self.s1.mean(),
            self.s2.mean(),
            self.z1.mean(),
            self.z2.mean(),
        ]
    }

    /// A constant profile at this profile's mean levels.
    pub fn averaged_levels(&self) -> Result<ForcingProfile, ForcingError> {
        let [s1, s2, z1, z2] = self.means();
        ForcingProfile::constant(self.period, s1, s2, z1, z2, self.quad)
    }

    fn cross_tables(&self) -> &([[f64; 4]; 4], [f64; 4]) {
        self.cross.get_or_init(|| {
            let sigs = [&self.s1, &self.s2, &self.z1, &self.z2];
            let h = self.s1.grid_spacing();
            let mut j = [[0.0; 4]; 4];
            let mut m = [0.0; 4];
            let p_nodes: Vec<Vec<f64>> = sigs.iter().map(|s| s.p_nodes()).collect();
            let sig_nodes: Vec<Vec<f64>> = sigs.iter().map(|s| s.sigma_nodes()).collect();
            for (fi, pf) in p_nodes.iter().enumerate() {
                m[fi] = trapezoid_uniform(pf, h) / self.period;
                for (gi, sg) in sig_nodes.iter().enumerate() {
                    let prod: Vec<f64> = pf.iter().zip(sg.iter()).map(|(a, b)| a * b).collect();
                    j[fi][gi] = trapezoid_uniform(&prod, h) / self.period;
                }
            }
            (j, m)
        })
    }

    /// `(1/T)∫_0^T P_f·σ_g dt`.
    pub fn cross_integral(&self, f: SignalName, g: SignalName) -> f64 {
        let (j, _) = self.cross_tables();
        j[index(f)][index(g)]
    }

    /// `(1/T)∫_0^T P_f dt` (zero up to rounding, by construction).
    pub fn p_mean(&self, f: SignalName) -> f64 {
        let (_, m) = self.cross_tables();
        m[index(f)]
    }
}

fn index(name: SignalName) -> usize {
    match name {
        SignalName::S1 => 0,
        SignalName::S2 => 1,
        SignalName::Z1 => 2,
        SignalName::Z2 => 3,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_profile_has_zero_caches() {
        let p = ForcingProfile::constant(
            1.0,
            0.2,
            0.12,
            0.3,
            0.05,
            QuadratureConfig::default(),
        )
        .unwrap();
        for name in SIGNALS {
            assert_eq!(p.signal(name).p(0.37), 0.0);
            assert_eq!(p.p_mean(name), 0.0);
            for other in SIGNALS {
                assert_eq!(p.cross_integral(name, other), 0.0);
            }
        }
    }

    #[test]
    fn benchmark_profile_builds_and_stays_positive() {
        let p = ForcingProfile::benchmark(QuadratureConfig::default()).unwrap();
        for t in 0..100 {
            let t = t as f64 / 100.0;
            assert!(p.signal(SignalName::S1).value(t) > 0.0);
            assert!(p.signal(SignalName::Z1).value(t) > 0.0);
        }
        let [s1, s2, _z1, z2] = p.means();
        assert!((s2 - 0.12).abs() < 1e-12);
        assert!((z2 - 0.05).abs() < 1e-12);
        assert!((s1 - 0.42470).abs() < 1e-9);
    }
}
