//! Correctors of the near-identity transform.
//!
//! For a generator series `H` the table
//!
//! ```text
//! F_n^{[i+1]} = F_{n+1}^{[i]} + Σ_{k=0}^{n} C(n,k) · D_ξ F_k^{[i]} · H_{n−k}
//! ```
//!
//! initialized with `F_n^{[0]} = H_n` yields the correctors `F_0^{[n]}`, and
//! the transform evaluated at `τ` is
//! `ξ + Σ_{n≥0} τ^{n+1}/(n+1)! · F_0^{[n]}(t, ξ)`.

use std::collections::HashMap;

use field_core::{dir, lincomb, DynField};

use crate::error::{EngineError, EngineResult};
use crate::series::TauSeries;
use crate::triangle::binomial;

/// The corrector fields `(F_0^{[0]}, …, F_0^{[m−1]})` of a generator series.
pub struct CorrectorSeries {
    correctors: Vec<DynField>,
    dim: usize,
}

impl CorrectorSeries {
    /// Builds the first `m` correctors. The leading corrector is the
    /// generator's leading term itself.
    pub fn build(series: &TauSeries, m: usize) -> EngineResult<Self> {
        if m == 0 || m > series.truncation_order() + 1 {
            return Err(EngineError::TruncationExceeded {
                requested: m,
                available: series.truncation_order() + 1,
            });
        }
        let dim = series.dim();
        // table[(n, i)] = F_n^{[i]}, built for n + i ≤ m − 1.
        let mut table: HashMap<(usize, usize), DynField> = HashMap::new();
        for n in 0..m {
            table.insert((n, 0), series.term(n).expect("bounds checked").clone());
        }
        for i in 0..m.saturating_sub(1) {
            for n in 0..m - 1 - i {
                let mut parts = vec![(1.0, table[&(n + 1, i)].clone())];
                for k in 0..=n {
                    let h = series.term(n - k).expect("bounds checked").clone();
                    parts.push((binomial(n, k), dir(table[&(k, i)].clone(), h)?));
                }
                table.insert((n, i + 1), lincomb(parts)?);
            }
        }
        let correctors = (0..m).map(|n| table[&(0, n)].clone()).collect();
        Ok(Self { correctors, dim })
    }

    pub fn len(&self) -> usize {
        self.correctors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.correctors.is_empty()
    }

    pub fn corrector(&self, n: usize) -> &DynField {
        &self.correctors[n]
    }

    /// `ξ + Σ_{n} τ^{n+1}/(n+1)! F_0^{[n]}(t, ξ)` over the built table.
    pub fn apply(&self, tau: f64, t: f64, xi: &[f64]) -> EngineResult<Vec<f64>> {
        let mut out = xi.to_vec();
        if tau == 0.0 {
            return Ok(out);
        }
        let mut weight = 1.0;
        for (n, f) in self.correctors.iter().enumerate() {
            // τ^{n+1}/(n+1)!
            weight *= tau / (n + 1) as f64;
            let v = f.eval(t, xi)?;
            for (o, vi) in out.iter_mut().zip(v.iter()) {
                *o += weight * vi;
            }
        }
        debug_assert_eq!(out.len(), self.dim);
        Ok(out)
    }

    /// The oscillatory displacement alone: `Σ τ^{n+1}/(n+1)! F_0^{[n]}`.
    pub fn displacement(&self, tau: f64, t: f64, xi: &[f64]) -> EngineResult<Vec<f64>> {
        let mut out = vec![0.0; self.dim];
        if tau == 0.0 {
            return Ok(out);
        }
        let mut weight = 1.0;
        for (n, f) in self.correctors.iter().enumerate() {
            weight *= tau / (n + 1) as f64;
            let v = f.eval(t, xi)?;
            for (o, vi) in out.iter_mut().zip(v.iter()) {
                *o += weight * vi;
            }
        }
        Ok(out)
    }
}
