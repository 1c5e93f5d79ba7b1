//! Inverse transforms.
//!
//! The generator of the inverse family is the pushforward of the forward
//! generator along its own flow, negated: run the triangle of the series
//! over itself (the τ-suspended picture, where every entry is flat) and
//! negate the first column at τ = 1.

use field_core::scale;

use crate::error::EngineResult;
use crate::series::TauSeries;
use crate::triangle::{lie_triangle, Suspended};

/// The τ-series of the inverse generator `K`, truncated at order `m`;
/// `K_0 = −H_0` exactly.
pub fn inverse_generator(series: &TauSeries, m: usize) -> EngineResult<TauSeries> {
    let column: Vec<Suspended> = series
        .terms()
        .iter()
        .map(|f| Suspended::flat(f.clone()))
        .collect();
    let tri = lie_triangle(&column, series, m)?;
    let mut k_terms = Vec::with_capacity(m + 1);
    for n in 0..=m {
        let entry = tri.entry(0, n).expect("triangle depth covers 0..=m");
        k_terms.push(scale(-1.0, entry.space.clone())?);
    }
    Ok(TauSeries::new(k_terms))
}

/// Convenience composition: the inverse transform truncated at order `m`,
/// i.e. the `K`-transform at `τ = 1`.
pub fn inverse_transform(
    series: &TauSeries,
    m: usize,
    t: f64,
    x: &[f64],
) -> EngineResult<Vec<f64>> {
    let k = inverse_generator(series, m)?;
    k.h_transform(1.0, m, t, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use field_core::{AutonomousField, ConstField, DynField};
    use std::sync::Arc;

    fn smooth_generator(amp: f64) -> TauSeries {
        let h0: DynField = Arc::new(AutonomousField::new(2, move |x: &[f64]| {
            vec![
                amp * (0.4 * x[1] + 0.3 * x[0] * x[0]),
                amp * (-0.5 * x[0] + 0.2 * x[0] * x[1]),
            ]
        }));
        let h1: DynField = Arc::new(AutonomousField::new(2, move |x: &[f64]| {
            vec![amp * 0.2 * x[1] * x[1], amp * (0.1 - 0.3 * x[0])]
        }));
        let h2: DynField = Arc::new(ConstField::zero(2));
        TauSeries::new(vec![h0, h1, h2])
    }

    #[test]
    fn zero_generator_inverts_to_zero() {
        let z: DynField = Arc::new(ConstField::zero(2));
        let series = TauSeries::new(vec![z.clone(), z]);
        let k = inverse_generator(&series, 1).unwrap();
        let v = k.term(0).unwrap().eval(0.0, &[1.0, 2.0]).unwrap();
        assert_eq!(v, vec![0.0, 0.0]);
        let x = inverse_transform(&series, 1, 0.0, &[1.0, 2.0]).unwrap();
        assert_eq!(x, vec![1.0, 2.0]);
    }

    #[test]
    fn leading_inverse_term_is_negated() {
        let series = smooth_generator(0.2);
        let k = inverse_generator(&series, 0).unwrap();
        let x = [0.7, -0.4];
        let h0 = series.term(0).unwrap().eval(0.0, &x).unwrap();
        let k0 = k.term(0).unwrap().eval(0.0, &x).unwrap();
        for i in 0..2 {
            assert!((k0[i] + h0[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn composition_residual_shrinks_with_order() {
        let series = smooth_generator(0.1);
        let points = [[0.3, 0.5], [-0.2, 0.8], [0.6, -0.1]];
        let mut resid = [0.0f64; 2];
        for (slot, m) in [(0usize, 1usize), (1, 2)] {
            let k = inverse_generator(&series, m).unwrap();
            let mut worst = 0.0f64;
            for p in points {
                let fwd = series.h_transform(1.0, m, 0.0, &p).unwrap();
                let back = k.h_transform(1.0, m, 0.0, &fwd).unwrap();
                for i in 0..2 {
                    worst = worst.max((back[i] - p[i]).abs());
                }
            }
            resid[slot] = worst;
        }
        assert!(
            resid[1] < resid[0],
            "m=2 residual {} not below m=1 residual {}",
            resid[1],
            resid[0]
        );
    }
}
