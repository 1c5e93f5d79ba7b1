//! Order-by-order generator solves.
//!
//! For a `T`-periodic field `Y` and a target averaging order `n`, the solve
//! produces the generator series `W = (W_0, …, W_m)` and the autonomous
//! correction terms `Y_0^{(2)}, …, Y_0^{(n)}` of the averaged field
//!
//! ```text
//! \bar Y^{(n)} = \bar Y + Σ_{k=2}^{n} Y_0^{(k)} / k!
//! ```
//!
//! The leading term is always `W_0(t,x) = ∫_0^t (Y − \bar Y) ds + C_0(x)`;
//! deeper terms follow `W_j = ∫_0^t (j·L_{W_{j−1}} Y − Y_j^{(1)}) ds + C_j`
//! with the `Y_j^{(k)}` table filled by the triangle recursion run backwards
//! from its known zero diagonal. Every integration constant is fixed by the
//! zero-mean secular condition. Terms whose integrand keeps a nonzero mean
//! (this starts at index `n` of an order-`n` solve) carry their secular ramp
//! exactly and are flagged.

use std::collections::HashMap;
use std::sync::Arc;

use field_core::{
    bracket, lincomb, scale, ConstField, DynField, MeanField, PeriodicIntegralField,
    QuadratureConfig,
};
use field_core::PeriodicIntegralField as Integral;

use crate::error::{EngineError, EngineResult};
use crate::series::TauSeries;
use crate::triangle::binomial;

/// Result of a generator solve at a fixed averaging order.
pub struct GeneratorSolve {
    /// The generator series `(W_0, …, W_m)`.
    pub series: TauSeries,
    /// The averaged autonomous field at the solve's order.
    pub averaged: DynField,
    /// The plain time mean of the source.
    pub mean: DynField,
    /// `Y_0^{(k)}` for `k = 2..=order` (empty at order 1).
    pub averaged_terms: Vec<DynField>,
    /// Target averaging order `n`.
    pub order: usize,
    /// Raw integral nodes of the series terms, for secular diagnostics.
    integrals: Vec<Arc<Integral>>,
}

impl GeneratorSolve {
    /// Sup over components of the secular ramp slope of term `j` at `x`.
    /// Zero for a term that is exactly `T`-periodic.
    pub fn secular_ramp(&self, j: usize, x: &[f64]) -> EngineResult<f64> {
        let node = self
            .integrals
            .get(j)
            .ok_or(EngineError::TruncationExceeded {
                requested: j,
                available: self.integrals.len(),
            })?;
        Ok(node.ramp_magnitude(x)?)
    }

    /// `∫_0^T ∫_0^t ∂_s W_j ds dt` per component: the double integral of the
    /// term's integrand, the quantity the secular condition cancels against
    /// the integration constant.
    pub fn integrand_double_integral(&self, j: usize, x: &[f64]) -> EngineResult<Vec<f64>> {
        let node = self
            .integrals
            .get(j)
            .ok_or(EngineError::TruncationExceeded {
                requested: j,
                available: self.integrals.len(),
            })?;
        Ok(node.double_integral(x)?)
    }
}

/// Solves for the generator of the order-`order` averaged system, producing
/// series terms `W_0..W_terms`.
pub fn solve_generator(
    y: &DynField,
    order: usize,
    terms: usize,
    quad: QuadratureConfig,
) -> EngineResult<GeneratorSolve> {
    if order == 0 {
        return Err(EngineError::BadOrder(order));
    }
    let dim = y.dim();
    let period = y.period().unwrap_or(1.0);
    let mean: DynField = Arc::new(MeanField::new(y.clone(), quad));
    let zero: DynField = Arc::new(ConstField::zero(dim));

    let make_integral = |integrand: DynField| -> Arc<Integral> {
        Arc::new(PeriodicIntegralField::with_period(
            integrand,
            period,
            quad,
            field_core::ConstantRule::ZeroMean,
        ))
    };

    // W_0 = ∫_0^t (Y − \bar Y) ds + C_0.
    let delta = lincomb(vec![(1.0, y.clone()), (-1.0, mean.clone())])?;
    let w0_node = make_integral(delta);
    let mut w: Vec<DynField> = vec![w0_node.clone() as DynField];
    let mut integrals: Vec<Arc<Integral>> = vec![w0_node];

    // table[(k, j)] = Y_j^{(k)}, the spatial parts; k = 1..=order.
    let mut table: HashMap<(usize, usize), DynField> = HashMap::new();
    table.insert((1, 0), mean.clone());
    let mut averaged_terms: Vec<DynField> = Vec::new();

    // Y_j^{(k)} = Y_{j−1}^{(k+1)} − Σ_{i=0}^{j−1} C(j−1,i) L_{W_i} Y_{j−1−i}^{(k)},
    // with the column k = order + 1 identically zero.
    fn entry(
        table: &mut HashMap<(usize, usize), DynField>,
        w: &[DynField],
        order: usize,
        zero: &DynField,
        k: usize,
        j: usize,
    ) -> EngineResult<DynField> {
        if k > order {
            return Ok(zero.clone());
        }
        if let Some(e) = table.get(&(k, j)) {
            return Ok(e.clone());
        }
        assert!(
            j > 0,
            "averaged term Y_0^({k}) requested before it was computed"
        );
        let up = entry(table, w, order, zero, k + 1, j - 1)?;
        let mut parts = vec![(1.0, up)];
        for i in 0..j {
            let lower = entry(table, w, order, zero, k, j - 1 - i)?;
            parts.push((-binomial(j - 1, i), bracket(w[i].clone(), lower)?));
        }
        let e = lincomb(parts)?;
        table.insert((k, j), e.clone());
        Ok(e)
    }

    for j in 1..=terms {
        // The averaged term Y_0^{(j+1)} enters the table before W_j is
        // formed, whenever the target order reaches that far.
        let m = j + 1;
        if m <= order {
            let mut parts = Vec::new();
            for l in 0..=m - 2 {
                for k in 0..=l {
                    let arg = entry(&mut table, &w, order, &zero, m - 1 - l, k)?;
                    parts.push((binomial(l, k), bracket(w[l - k].clone(), arg)?));
                }
            }
            parts.push(((m - 1) as f64, bracket(w[m - 2].clone(), y.clone())?));
            let integrand = lincomb(parts)?;
            let term: DynField = Arc::new(MeanField::new(integrand, quad));
            table.insert((m, 0), term.clone());
            averaged_terms.push(term);
        }

        let yj1 = entry(&mut table, &w, order, &zero, 1, j)?;
        let integrand = lincomb(vec![
            (j as f64, bracket(w[j - 1].clone(), y.clone())?),
            (-1.0, yj1),
        ])?;
        let node = make_integral(integrand);
        integrals.push(node.clone());
        w.push(node as DynField);
    }

    // Fill in remaining averaged terms when the order exceeds the series
    // length (they only need W up to order − 2).
    for m in (terms + 2)..=order {
        if m - 2 < w.len() {
            let mut parts = Vec::new();
            for l in 0..=m - 2 {
                for k in 0..=l {
                    let arg = entry(&mut table, &w, order, &zero, m - 1 - l, k)?;
                    parts.push((binomial(l, k), bracket(w[l - k].clone(), arg)?));
                }
            }
            parts.push(((m - 1) as f64, bracket(w[m - 2].clone(), y.clone())?));
            let integrand = lincomb(parts)?;
            let term: DynField = Arc::new(MeanField::new(integrand, quad));
            table.insert((m, 0), term.clone());
            averaged_terms.push(term);
        } else {
            return Err(EngineError::TruncationExceeded {
                requested: m - 2,
                available: w.len(),
            });
        }
    }

    let mut averaged_parts = vec![(1.0, mean.clone())];
    let mut fact = 1.0;
    for (idx, term) in averaged_terms.iter().enumerate() {
        let m = idx + 2;
        fact *= m as f64;
        averaged_parts.push((1.0 / fact, term.clone()));
    }
    let averaged = lincomb(averaged_parts)?;

    Ok(GeneratorSolve {
        series: TauSeries::new(w),
        averaged,
        mean,
        averaged_terms,
        order,
        integrals,
    })
}

/// The order-1 generator series `(G_0, …, G_m)`.
pub fn solve_generator_order1(
    y: &DynField,
    m: usize,
    quad: QuadratureConfig,
) -> EngineResult<GeneratorSolve> {
    solve_generator(y, 1, m, quad)
}

/// The order-2 generator series `(Γ_0, …, Γ_m)` together with the
/// second-order averaged term `Y_0^{(2)}`.
pub fn solve_generator_order2(
    y: &DynField,
    m: usize,
    quad: QuadratureConfig,
) -> EngineResult<(GeneratorSolve, DynField)> {
    let solve = solve_generator(y, 2, m.max(0), quad)?;
    let y02 = solve.averaged_terms[0].clone();
    Ok((solve, y02))
}

#[allow(unused_imports)]
use scale as _scale_used_by_tests;
