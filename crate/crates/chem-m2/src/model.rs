//! The model field and its closed-form averaging data.

use std::sync::Arc;

use field_core::{AutonomousField, DynField, PeriodicField};
use nalgebra::DMatrix;

use crate::forcing::{ForcingProfile, SignalName};

/// The time-dependent model field with its analytic Jacobian and the
/// `x₂ ≠ 0` domain guard.
pub fn m2_field(profile: &Arc<ForcingProfile>) -> DynField {
    let p_eval = profile.clone();
    let p_jac = profile.clone();
    Arc::new(
        PeriodicField::new(2, profile.period(), move |t, x| {
            let s1 = p_eval.signal(SignalName::S1).value(t);
            let s2 = p_eval.signal(SignalName::S2).value(t);
            let z1 = p_eval.signal(SignalName::Z1).value(t);
            let z2 = p_eval.signal(SignalName::Z2).value(t);
            rhs(s1, s2, z1, z2, x)
        })
        .with_jacobian(move |t, x| {
            let s2 = p_jac.signal(SignalName::S2).value(t);
            let z1 = p_jac.signal(SignalName::Z1).value(t);
            let z2 = p_jac.signal(SignalName::Z2).value(t);
            jac(s2, z1, z2, x)
        })
        .with_domain_guard(|x| x[1] != 0.0),
    )
}

fn rhs(s1: f64, s2: f64, z1: f64, z2: f64, x: &[f64]) -> Vec<f64> {
    vec![
        s1 - z1 * x[0] * x[1],
        -s2 + z1 * x[0] * x[1] - (1.0 + z1) * x[1] + (z2 + s2) / x[1],
    ]
}

fn jac(s2: f64, z1: f64, z2: f64, x: &[f64]) -> DMatrix<f64> {
    DMatrix::from_row_slice(
        2,
        2,
        &[
            -z1 * x[1],
            -z1 * x[0],
            z1 * x[1],
            z1 * x[0] - (1.0 + z1) - (z2 + s2) / (x[1] * x[1]),
        ],
    )
}

/// Closed-form leading generator term `G₀(t, ξ)`, built from the cached
/// zero-mean cumulative integrals (the integration constants are already
/// folded into `P_f`).
pub fn m2_g0(profile: &ForcingProfile, t: f64, xi: &[f64]) -> [f64; 2] {
    let p_s1 = profile.signal(SignalName::S1).p(t);
    let p_s2 = profile.signal(SignalName::S2).p(t);
    let p_z1 = profile.signal(SignalName::Z1).p(t);
    let p_z2 = profile.signal(SignalName::Z2).p(t);
    let (x1, x2) = (xi[0], xi[1]);
    [
        p_s1 - x1 * x2 * p_z1,
        (1.0 / x2 - 1.0) * p_s2 + (x1 - 1.0) * x2 * p_z1 + p_z2 / x2,
    ]
}

/// Closed-form second-order averaged correction `Y₀^{(2)}(ξ)`.
///
/// Every time integral collapses onto the precomputed cross table
/// `J[f][g] = (1/T)∫ P_f σ_g` (plus the `P_f` means, zero by construction),
/// so evaluation is O(1) in the grid size.
pub fn m2_y02(profile: &ForcingProfile, xi: &[f64]) -> [f64; 2] {
    use SignalName::*;
    let (x1, x2) = (xi[0], xi[1]);
    let j = |f, g| profile.cross_integral(f, g);
    let m = |f| profile.p_mean(f);

    let row1 = j(S1, Z1) * (-x2)
        + j(S2, Z1) * (x1 * (1.0 - 1.0 / x2))
        + j(Z1, S1) * x2
        + j(Z1, S2) * (x1 * (1.0 / x2 - 1.0))
        + j(Z1, Z2) * (x1 / x2)
        + m(Z1) * (-2.0 * x1 * x2)
        + j(Z2, Z1) * (-x1 / x2);

    // α = (x1 − 1)(2/x2 − 1); the coefficient of σS₂ in the P_{Z₁} group is
    // its negative. The σS₂ cross term inside the P_{S₂} group cancels
    // identically (the two coefficient fields are collinear).
    let alpha = (x1 - 1.0) * (2.0 / x2 - 1.0);
    let row2 = j(S1, Z1) * x2
        + j(S2, Z1) * alpha
        + j(S2, Z2) * (1.0 / (x2 * x2))
        + m(S2) * (2.0 * (1.0 - 2.0 / x2))
        + j(Z1, S1) * (-x2)
        + j(Z1, S2) * (-alpha)
        + j(Z1, Z2) * (-2.0 * (x1 - 1.0) / x2)
        + j(Z2, S2) * (-1.0 / (x2 * x2))
        + j(Z2, Z1) * (2.0 * (x1 - 1.0) / x2)
        + m(Z2) * (-4.0 / x2);

    [row1, row2]
}

/// The closed-form averaged field of the given order (1 or 2) as an
/// autonomous field with analytic Jacobian for the order-1 part.
pub fn m2_averaged(profile: &Arc<ForcingProfile>, order: usize) -> DynField {
    let [s1, s2, z1, z2] = profile.means();
    match order {
        1 => Arc::new(
            AutonomousField::new(2, move |x: &[f64]| rhs(s1, s2, z1, z2, x))
                .with_jacobian(move |x: &[f64]| jac(s2, z1, z2, x))
                .with_domain_guard(|x| x[1] != 0.0),
        ),
        2 => {
            let p = profile.clone();
            Arc::new(
                AutonomousField::new(2, move |x: &[f64]| {
                    let base = rhs(s1, s2, z1, z2, x);
                    let y02 = m2_y02(&p, x);
                    vec![base[0] + 0.5 * y02[0], base[1] + 0.5 * y02[1]]
                })
                .with_domain_guard(|x| x[1] != 0.0),
            )
        }
        other => panic!("closed-form averaged field exists for orders 1 and 2, not {other}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use field_core::QuadratureConfig;

    fn constant_profile() -> Arc<ForcingProfile> {
        Arc::new(
            ForcingProfile::constant(1.0, 0.2, 0.12, 0.3, 0.05, QuadratureConfig::default())
                .unwrap(),
        )
    }

    #[test]
    fn field_value_by_hand_substitution() {
        // Constants S1=0.2, S2=0.12, Z1=0.3, Z2=0.05 at x=(1,1):
        // ẋ1 = 0.2 − 0.3 = −0.1
        // ẋ2 = −0.12 + 0.3 − 1.3 + 0.17 = −0.95
        let f = m2_field(&constant_profile());
        let v = f.eval(0.0, &[1.0, 1.0]).unwrap();
        assert!((v[0] + 0.1).abs() < 1e-15, "{v:?}");
        assert!((v[1] + 0.95).abs() < 1e-15, "{v:?}");
    }

    #[test]
    fn domain_guard_rejects_zero_ozone() {
        let f = m2_field(&constant_profile());
        assert!(f.eval(0.0, &[1.0, 0.0]).is_err());
        assert!(!f.in_domain(&[0.5, 0.0]));
    }

    #[test]
    fn analytic_jacobian_matches_finite_differences() {
        use rand::Rng;
        use rand::SeedableRng;
        let profile = Arc::new(
            ForcingProfile::benchmark(QuadratureConfig::default()).unwrap(),
        );
        let f = m2_field(&profile);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..20 {
            let x = [rng.gen_range(0.5..2.5), rng.gen_range(0.2..1.2)];
            let t = rng.gen_range(0.0..1.0);
            let analytic = f.jacobian(t, &x).unwrap();
            let fd = field_core::fd_jacobian(&|xx: &[f64]| f.eval(t, xx), 2, &x).unwrap();
            for i in 0..2 {
                for j in 0..2 {
                    assert!(
                        (analytic[(i, j)] - fd[(i, j)]).abs() < 1e-6,
                        "({i},{j}): {} vs {}",
                        analytic[(i, j)],
                        fd[(i, j)]
                    );
                }
            }
        }
    }

    #[test]
    fn constant_forcing_zeroes_the_correctors() {
        let p = constant_profile();
        for t in [0.0, 0.35, 0.8] {
            for xi in [[1.0, 1.0], [1.6, 0.4]] {
                assert_eq!(m2_g0(&p, t, &xi), [0.0, 0.0]);
            }
        }
        assert_eq!(m2_y02(&p, &[1.3, 0.5]), [0.0, 0.0]);
    }

    #[test]
    fn harmonic_z1_leading_term_closed_form() {
        // δZ1 = ε·cos(2πt), others constant: G0,1(t, ξ) = −ξ1ξ2·ε·sin(2πt)/2π
        // with zero integration constant.
        let eps = 0.05;
        let p = ForcingProfile::build(
            1.0,
            crate::SignalSpec::constant(0.2),
            crate::SignalSpec::constant(0.12),
            crate::SignalSpec::harmonic(0.3, eps, 0.0),
            crate::SignalSpec::constant(0.05),
            QuadratureConfig::default(),
        )
        .unwrap();
        let tol = 50.0 * QuadratureConfig::default().tolerance(1.0);
        let xi = [1.0, 1.0];
        let g = m2_g0(&p, 0.25, &xi);
        let exact = -eps / (2.0 * std::f64::consts::PI);
        assert!((g[0] - exact).abs() < tol, "{} vs {exact}", g[0]);
        // Constant part: G0,1(0, ·) = 0 for a pure cosine.
        let g0 = m2_g0(&p, 0.0, &xi);
        assert!(g0[0].abs() < tol);
    }

    #[test]
    fn y02_scales_quadratically_with_forcing_amplitude() {
        // A single oscillatory signal alone gives an identically vanishing
        // second-order term (the diagonal cross-integral is the mean of a
        // perfect derivative); the quadratic scaling shows on a pair of
        // phase-shifted signals.
        let make = |eps: f64| {
            ForcingProfile::build(
                1.0,
                crate::SignalSpec::harmonic(0.2, eps, -std::f64::consts::FRAC_PI_2),
                crate::SignalSpec::constant(0.12),
                crate::SignalSpec::harmonic(0.3, eps, 0.0),
                crate::SignalSpec::constant(0.05),
                QuadratureConfig::default(),
            )
            .unwrap()
        };
        let xi = [1.4, 0.6];
        let norms: Vec<f64> = [0.1, 0.05, 0.025]
            .iter()
            .map(|&e| {
                let v = m2_y02(&make(e), &xi);
                v[0].abs().max(v[1].abs())
            })
            .collect();
        let s1 = (norms[0] / norms[1]).log2();
        let s2 = (norms[1] / norms[2]).log2();
        for s in [s1, s2] {
            assert!((s - 2.0).abs() < 0.1, "slope {s}, norms {norms:?}");
        }
    }
}
