//! Property tests for Lie-bracket algebra at sampled points.

use std::sync::Arc;

use field_core::{lie_derivative, AutonomousField, DynField};
use proptest::prelude::*;

fn quadratic_field(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> DynField {
    Arc::new(
        AutonomousField::new(2, move |x: &[f64]| {
            vec![
                a[0] * x[0] * x[0] + b[0] * x[1] + c[0],
                a[1] * x[0] * x[1] + b[1] * x[0] + c[1],
            ]
        })
        .with_jacobian(move |x: &[f64]| {
            nalgebra::DMatrix::from_row_slice(
                2,
                2,
                &[2.0 * a[0] * x[0], b[0], a[1] * x[1], a[1] * x[0] + b[1]],
            )
        }),
    )
}

fn small() -> impl Strategy<Value = f64> {
    -2.0..2.0f64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bracket_is_antisymmetric(
        a0 in small(), a1 in small(), b0 in small(), b1 in small(),
        c0 in small(), c1 in small(),
        d0 in small(), d1 in small(), e0 in small(), e1 in small(),
        x0 in -1.5..1.5f64, x1 in -1.5..1.5f64,
    ) {
        let g = quadratic_field([a0, a1], [b0, b1], [c0, c1]);
        let f = quadratic_field([d0, d1], [e0, e1], [0.3, -0.7]);
        let x = [x0, x1];
        let gf = lie_derivative(g.as_ref(), f.as_ref(), 0.0, &x).unwrap();
        let fg = lie_derivative(f.as_ref(), g.as_ref(), 0.0, &x).unwrap();
        for i in 0..2 {
            prop_assert!((gf[i] + fg[i]).abs() < 1e-8, "{gf:?} vs {fg:?}");
        }
    }

    #[test]
    fn bracket_is_linear_in_the_argument(
        a0 in small(), a1 in small(),
        lam in -3.0..3.0f64,
        x0 in -1.5..1.5f64, x1 in -1.5..1.5f64,
    ) {
        let g = quadratic_field([a0, a1], [0.4, -0.2], [0.1, 0.9]);
        let f1 = quadratic_field([0.5, -0.25], [1.0, 0.0], [0.0, 0.2]);
        let f2 = quadratic_field([-0.3, 0.8], [0.0, 1.0], [0.5, 0.0]);
        let x = [x0, x1];
        let v1 = lie_derivative(g.as_ref(), f1.as_ref(), 0.0, &x).unwrap();
        let v2 = lie_derivative(g.as_ref(), f2.as_ref(), 0.0, &x).unwrap();

        // f1 + lam·f2 as one field.
        let combo = field_core::lincomb(vec![(1.0, f1), (lam, f2)]).unwrap();
        let vc = lie_derivative(g.as_ref(), combo.as_ref(), 0.0, &x).unwrap();
        for i in 0..2 {
            let lin = v1[i] + lam * v2[i];
            prop_assert!((vc[i] - lin).abs() < 1e-6, "{} vs {}", vc[i], lin);
        }
    }
}
