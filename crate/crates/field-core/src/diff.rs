use nalgebra::DMatrix;

use crate::error::FieldResult;

/// Step factor for central first differences: eps^(1/3).
fn fd_step(xi: f64) -> f64 {
    const CBRT_EPS: f64 = 6.055454452393343e-6;
    xi.abs().max(1.0) * CBRT_EPS
}

/// Central finite-difference Jacobian of `f` at `x`.
///
/// `f` maps `R^dim -> R^dim`; the step is `max(1, |x_i|)·eps^(1/3)` per
/// coordinate.
pub fn fd_jacobian<F>(f: &F, dim: usize, x: &[f64]) -> FieldResult<DMatrix<f64>>
where
    F: Fn(&[f64]) -> FieldResult<Vec<f64>> + ?Sized,
{
    let mut jac = DMatrix::zeros(dim, dim);
    let mut xp = x.to_vec();
    for j in 0..x.len() {
        let h = fd_step(x[j]);
        let xj = x[j];
        xp[j] = xj + h;
        let fp = f(&xp)?;
        xp[j] = xj - h;
        let fm = f(&xp)?;
        xp[j] = xj;
        // Use the actually-representable step width.
        let denom = (xj + h) - (xj - h);
        for i in 0..dim {
            jac[(i, j)] = (fp[i] - fm[i]) / denom;
        }
    }
    Ok(jac)
}
