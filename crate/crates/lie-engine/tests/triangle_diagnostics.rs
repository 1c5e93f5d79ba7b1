//! Zero-structure of the solved triangles.
//!
//! Once the generator of an order-`n` averaged system is solved, running the
//! raw triangle recursion over the suspended source must annihilate every
//! entry `Y_j^{(k)}` with `k > n` wherever the solve reached. These checks
//! exercise the same entries the acceptance suite samples on the benchmark
//! system, on a scalar field with genuine state dependence.

use std::f64::consts::PI;
use std::sync::Arc;

use field_core::{DynField, PeriodicField, QuadratureConfig};
use lie_engine::{lie_triangle, solve_generator, suspend_source};

fn forced_decay(a: f64) -> DynField {
    Arc::new(PeriodicField::new(1, 1.0, move |t, x| {
        vec![-x[0] + a * (2.0 * PI * t).cos()]
    }))
}

#[test]
fn order1_triangle_vanishes_above_first_superscript() {
    let y = forced_decay(0.3);
    let quad = QuadratureConfig::default();
    let solve = solve_generator(&y, 1, 3, quad).unwrap();
    let tri = lie_triangle(&suspend_source(&y), &solve.series, 3).unwrap();

    let samples = [(0.1, 0.4), (0.37, 1.2), (0.8, -0.5), (0.55, 2.0)];
    // Entries A_n^{(i)} with i ≥ 2 are the M(j, j−l) zeros.
    for (n, i) in [(0usize, 2usize), (1, 2), (0, 3)] {
        for (t, x) in samples {
            let v = tri.eval(n, i, t, &[x]).unwrap()[0];
            assert!(v.abs() < 1e-6, "entry ({n},{i}) at (t={t}, x={x}): {v}");
        }
    }
}

#[test]
fn order2_triangle_vanishes_above_second_superscript() {
    let y = forced_decay(0.3);
    let quad = QuadratureConfig::default();
    let solve = solve_generator(&y, 2, 3, quad).unwrap();
    let tri = lie_triangle(&suspend_source(&y), &solve.series, 3).unwrap();

    let samples = [(0.1, 0.4), (0.37, 1.2), (0.8, -0.5), (0.55, 2.0)];
    for (n, i) in [(0usize, 3usize)] {
        for (t, x) in samples {
            let v = tri.eval(n, i, t, &[x]).unwrap()[0];
            assert!(v.abs() < 1e-6, "entry ({n},{i}) at (t={t}, x={x}): {v}");
        }
    }

    // The second column head reproduces the averaged correction term, not
    // zero: A_0^{(2)} = Y_0^{(2)}.
    let y02 = &solve.averaged_terms[0];
    for (t, x) in samples {
        let a = tri.eval(0, 2, t, &[x]).unwrap()[0];
        let b = y02.eval(t, &[x]).unwrap()[0];
        assert!((a - b).abs() < 1e-8, "A_0^(2)={a} vs Y02={b}");
    }
}

#[test]
fn first_column_reproduces_the_mean() {
    let y = forced_decay(0.25);
    let quad = QuadratureConfig::default();
    let solve = solve_generator(&y, 1, 2, quad).unwrap();
    let tri = lie_triangle(&suspend_source(&y), &solve.series, 2).unwrap();
    for (t, x) in [(0.0, 0.5), (0.6, 1.4)] {
        let a = tri.eval(0, 1, t, &[x]).unwrap()[0];
        let b = solve.mean.eval(t, &[x]).unwrap()[0];
        assert!((a - b).abs() < 1e-9, "A_0^(1)={a} vs mean={b}");
    }
}
