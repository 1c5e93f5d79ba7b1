use integrators::Trajectory;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Linear interpolation reproduces affine-in-t data exactly, for any
    /// refinement factor.
    #[test]
    fn resample_exact_on_affine_data(
        slope in -5.0..5.0f64,
        offset in -5.0..5.0f64,
        k in 1usize..9,
        n in 2usize..12,
    ) {
        let dt = 0.5;
        let states: Vec<Vec<f64>> = (0..n)
            .map(|i| vec![offset + slope * (i as f64 * dt)])
            .collect();
        let traj = Trajectory { t0: 0.0, dt, states, dim: 1 };
        let fine = traj.resample_linear(dt / k as f64).unwrap();
        prop_assert_eq!(fine.states.len(), (n - 1) * k + 1);
        for (i, s) in fine.states.iter().enumerate() {
            let t = fine.t0 + i as f64 * fine.dt;
            let exact = offset + slope * t;
            prop_assert!((s[0] - exact).abs() < 1e-10);
        }
        // Coarse nodes are preserved bit-exactly.
        for (i, s) in traj.states.iter().enumerate() {
            prop_assert_eq!(s[0], fine.states[i * k][0]);
        }
    }
}
