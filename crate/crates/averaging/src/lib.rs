//! Averaged autonomous systems and the end-to-end approximation pipeline:
//! map the initial datum through the truncated inverse transform, integrate
//! the averaged system on a coarse grid, resample linearly to the fine grid,
//! and restore the oscillatory structure pointwise with the corrector
//! series.

use std::sync::Arc;

use field_core::{DynField, FieldError, QuadratureConfig};
use integrators::{integrate, IntegrateError, Method, Trajectory};
use lie_engine::{inverse_generator, solve_generator, EngineError, GeneratorSolve};
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AveragingError {
    #[error("averaging order {0} is experimental; enable non-strict mode to use it")]
    ExperimentalOrder(usize),

    #[error("averaging order must be at least 1")]
    BadOrder,

    #[error("coarse step {coarse_dt} is not an integer multiple of fine step {fine_dt}")]
    GridMismatch { coarse_dt: f64, fine_dt: f64 },

    #[error(transparent)]
    Engine(#[from] EngineError),

    #[error(transparent)]
    Integrate(#[from] IntegrateError),

    #[error(transparent)]
    Field(#[from] FieldError),
}

pub type AveragingResult<T> = Result<T, AveragingError>;

#[derive(Debug, Clone, Copy)]
pub struct AveragingOptions {
    pub quad: QuadratureConfig,
    /// Orders above 2 ride on the generic triangle without explicit
    /// solvability backing; strict mode rejects them.
    pub strict: bool,
}

impl Default for AveragingOptions {
    fn default() -> Self {
        Self {
            quad: QuadratureConfig::default(),
            strict: true,
        }
    }
}

/// An order-`n` averaged autonomous system together with its source and the
/// generator series that produced it.
pub struct AveragedSystem {
    pub order: usize,
    pub field: DynField,
    pub source: DynField,
    pub generator: Arc<GeneratorSolve>,
}

/// Builds the order-`n` averaged field. Order 1 is the plain time mean;
/// order 2 adds `Y_0^{(2)}/2`; higher orders follow the generic recursion
/// and are gated behind non-strict mode.
pub fn averaged_field(
    y: &DynField,
    n: usize,
    opts: &AveragingOptions,
) -> AveragingResult<AveragedSystem> {
    if n == 0 {
        return Err(AveragingError::BadOrder);
    }
    if n > 2 && opts.strict {
        return Err(AveragingError::ExperimentalOrder(n));
    }
    let solve = solve_generator(y, n, n.saturating_sub(2), opts.quad)?;
    Ok(AveragedSystem {
        order: n,
        field: solve.averaged.clone(),
        source: y.clone(),
        generator: Arc::new(solve),
    })
}

/// Maps the initial datum of the source system onto the averaged system:
/// `z_0 = x_0 + truncated inverse transform`, which at `m = 1` is
/// `x_0 − W_0(0, x_0)` for every averaging order.
pub fn map_initial_data(
    y: &DynField,
    x0: &[f64],
    m: usize,
    n: usize,
    opts: &AveragingOptions,
) -> AveragingResult<Vec<f64>> {
    if n == 0 || m == 0 {
        return Err(AveragingError::BadOrder);
    }
    if n > 2 && opts.strict {
        return Err(AveragingError::ExperimentalOrder(n));
    }
    let solve = solve_generator(y, n, m, opts.quad)?;
    map_initial_data_from(&solve, x0, m)
}

/// Same map, reusing an existing generator solve.
pub fn map_initial_data_from(
    solve: &GeneratorSolve,
    x0: &[f64],
    m: usize,
) -> AveragingResult<Vec<f64>> {
    let k = inverse_generator(&solve.series, m)?;
    Ok(k.h_transform(1.0, m, 0.0, x0)?)
}

/// The two trajectories of one averaged-and-corrected run.
#[derive(Debug, Clone)]
pub struct ApproximationResult {
    /// Coarse-grid trajectory of the averaged system.
    pub averaged: Trajectory,
    /// Fine-grid trajectory after the pointwise correction.
    pub pullback: Trajectory,
    /// The mapped initial datum fed to the averaged system.
    pub initial_map: Vec<f64>,
    /// `(m, n)`: corrector truncation and averaging order.
    pub orders: (usize, usize),
}

fn check_grids(coarse_dt: f64, fine_dt: f64) -> AveragingResult<()> {
    let ratio = coarse_dt / fine_dt;
    let k = ratio.round();
    if !(k >= 1.0 && (ratio - k).abs() <= 1e-9 * ratio.max(1.0)) {
        return Err(AveragingError::GridMismatch {
            coarse_dt,
            fine_dt,
        });
    }
    Ok(())
}

/// Runs the coarse-integrate / resample / correct pipeline with an arbitrary
/// pointwise corrector `(t, z) -> displacement`. The correction stage is
/// embarrassingly parallel over grid nodes; results are independent of
/// execution order.
pub fn pullback_pipeline<C>(
    averaged: &DynField,
    z0: &[f64],
    t_end: f64,
    coarse_dt: f64,
    fine_dt: f64,
    method: Method,
    orders: (usize, usize),
    corrector: C,
) -> AveragingResult<ApproximationResult>
where
    C: Fn(f64, &[f64]) -> AveragingResult<Vec<f64>> + Sync,
{
    check_grids(coarse_dt, fine_dt)?;
    let coarse = integrate(averaged, z0, 0.0, t_end, coarse_dt, method)?;
    let fine = coarse.resample_linear(fine_dt)?;
    let corrected: AveragingResult<Vec<Vec<f64>>> = fine
        .states
        .par_iter()
        .enumerate()
        .map(|(i, z)| {
            let t = fine.time(i);
            let d = corrector(t, z)?;
            Ok(z.iter().zip(d.iter()).map(|(zi, di)| zi + di).collect())
        })
        .collect();
    let pullback = Trajectory {
        t0: fine.t0,
        dt: fine.dt,
        states: corrected?,
        dim: fine.dim,
    };
    Ok(ApproximationResult {
        averaged: coarse,
        pullback,
        initial_map: z0.to_vec(),
        orders,
    })
}

/// The `m`-th approximation of the `n`-th type: averaged system of order
/// `n`, initial datum mapped through the order-`m` inverse transform, and
/// the order-`m` corrector applied on the fine grid.
#[allow(clippy::too_many_arguments)]
pub fn approximate_solution(
    y: &DynField,
    x0: &[f64],
    m: usize,
    n: usize,
    t_end: f64,
    coarse_dt: f64,
    fine_dt: f64,
    method: Method,
    opts: &AveragingOptions,
) -> AveragingResult<ApproximationResult> {
    if n == 0 || m == 0 {
        return Err(AveragingError::BadOrder);
    }
    if n > 2 && opts.strict {
        return Err(AveragingError::ExperimentalOrder(n));
    }
    check_grids(coarse_dt, fine_dt)?;
    let terms = m.max(n.saturating_sub(2));
    let solve = solve_generator(y, n, terms, opts.quad)?;
    let z0 = map_initial_data_from(&solve, x0, m)?;
    let correctors = solve.series.correctors(m)?;
    pullback_pipeline(
        &solve.averaged,
        &z0,
        t_end,
        coarse_dt,
        fine_dt,
        method,
        (m, n),
        move |t, z| Ok(correctors.displacement(1.0, t, z)?),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use field_core::{AutonomousField, PeriodicField};
    use std::f64::consts::PI;

    fn opts() -> AveragingOptions {
        AveragingOptions::default()
    }

    #[test]
    fn autonomous_source_passes_through_any_order() {
        let y: DynField = Arc::new(AutonomousField::new(2, |x: &[f64]| {
            vec![-x[0] + 0.2 * x[1], x[0] * x[1]]
        }));
        for n in [1, 2] {
            let sys = averaged_field(&y, n, &opts()).unwrap();
            for x in [[0.3, -0.8], [1.5, 2.0]] {
                let a = sys.field.eval(0.0, &x).unwrap();
                let b = y.eval(0.0, &x).unwrap();
                assert_eq!(a, b, "order {n}");
            }
        }
    }

    #[test]
    fn first_order_average_drops_zero_mean_forcing() {
        // Y = Ax + cos(2πt)·b averages to Ax.
        let y: DynField = Arc::new(PeriodicField::new(2, 1.0, |t, x| {
            let c = (2.0 * PI * t).cos();
            vec![0.5 * x[1] + 0.3 * c, -0.25 * x[0] + 1.1 * c]
        }));
        let sys = averaged_field(&y, 1, &opts()).unwrap();
        let x = [0.9, -1.2];
        let v = sys.field.eval(0.0, &x).unwrap();
        assert!((v[0] - 0.5 * x[1]).abs() < 1e-12);
        assert!((v[1] + 0.25 * x[0]).abs() < 1e-12);
    }

    #[test]
    fn strict_mode_gates_high_orders() {
        let y: DynField = Arc::new(PeriodicField::new(1, 1.0, |t, x| {
            vec![-x[0] + (2.0 * PI * t).cos()]
        }));
        assert!(matches!(
            averaged_field(&y, 3, &opts()),
            Err(AveragingError::ExperimentalOrder(3))
        ));
        let loose = AveragingOptions {
            strict: false,
            ..opts()
        };
        assert!(averaged_field(&y, 3, &loose).is_ok());
    }

    #[test]
    fn constant_forcing_maps_initial_data_identically() {
        let y: DynField = Arc::new(AutonomousField::new(2, |x: &[f64]| {
            vec![-x[0], -2.0 * x[1]]
        }));
        let x0 = [1.25, -0.5];
        let z0 = map_initial_data(&y, &x0, 1, 1, &opts()).unwrap();
        assert_eq!(z0, x0.to_vec());
    }

    #[test]
    fn first_order_initial_map_subtracts_the_leading_term() {
        let y: DynField = Arc::new(PeriodicField::new(1, 1.0, |t, x| {
            vec![-x[0] + 0.4 * (2.0 * PI * t).sin() * (1.0 + 0.3 * x[0] * x[0])]
        }));
        let o = opts();
        let x0 = [0.8];
        for n in [1, 2] {
            let solve = solve_generator(&y, n, 1, o.quad).unwrap();
            let z0 = map_initial_data_from(&solve, &x0, 1).unwrap();
            let g0 = solve.series.term(0).unwrap().eval(0.0, &x0).unwrap();
            assert!(
                (z0[0] - (x0[0] - g0[0])).abs() < 1e-13,
                "order {n}: {z0:?}"
            );
        }
    }

    #[test]
    fn initial_map_round_trip_residual_is_second_order() {
        let o = opts();
        let make = |a: f64| -> DynField {
            Arc::new(PeriodicField::new(1, 1.0, move |t, x| {
                vec![-x[0] + a * (2.0 * PI * t).sin() * (1.0 + x[0] * x[0])]
            }))
        };
        let x0 = [0.7];
        let mut residuals = Vec::new();
        for a in [0.2, 0.1] {
            let y = make(a);
            let solve = solve_generator(&y, 1, 1, o.quad).unwrap();
            let z0 = map_initial_data_from(&solve, &x0, 1).unwrap();
            let back = solve.series.h_transform(1.0, 1, 0.0, &z0).unwrap();
            residuals.push((back[0] - x0[0]).abs());
        }
        let ratio = residuals[0] / residuals[1];
        assert!(ratio >= 3.5, "ratio {ratio}, residuals {residuals:?}");
    }

    #[test]
    fn autonomous_pipeline_is_a_noop_wrapper() {
        let y: DynField = Arc::new(AutonomousField::new(1, |x: &[f64]| vec![-0.7 * x[0]]));
        let res = approximate_solution(&y, &[2.0], 1, 1, 4.0, 0.1, 0.1, Method::Rk4, &opts())
            .unwrap();
        let direct = integrate(&y, &[2.0], 0.0, 4.0, 0.1, Method::Rk4).unwrap();
        assert_eq!(res.pullback.states, direct.states);
        assert_eq!(res.averaged.states, direct.states);
    }

    #[test]
    fn grid_mismatch_rejected() {
        let y: DynField = Arc::new(AutonomousField::new(1, |x: &[f64]| vec![-x[0]]));
        let err =
            approximate_solution(&y, &[1.0], 1, 1, 1.0, 0.1, 0.03, Method::Euler, &opts())
                .unwrap_err();
        assert!(matches!(err, AveragingError::GridMismatch { .. }));
    }

    #[test]
    fn resampled_nodes_preserve_coarse_values() {
        let y: DynField = Arc::new(PeriodicField::new(1, 1.0, |t, x| {
            vec![-x[0] + 0.2 * (2.0 * PI * t).cos()]
        }));
        let res =
            approximate_solution(&y, &[0.5], 1, 1, 3.0, 0.1, 0.02, Method::Euler, &opts())
                .unwrap();
        assert_eq!(res.pullback.dt * 5.0, res.averaged.dt);
        assert_eq!(res.pullback.states.len(), (res.averaged.states.len() - 1) * 5 + 1);
    }
}
