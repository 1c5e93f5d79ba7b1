use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use field_core::DynField;

use crate::corrector::CorrectorSeries;
use crate::error::{EngineError, EngineResult};

/// A truncated τ-series `(H_0, …, H_m)` of time-dependent fields sharing one
/// dimension and period. Terms beyond the truncation order are implicitly
/// zero.
///
/// Corrector tables are built once per truncation order and cached; a solved
/// series is immutable and safe for concurrent evaluation.
pub struct TauSeries {
    terms: Vec<DynField>,
    dim: usize,
    period: Option<f64>,
    correctors: Mutex<HashMap<usize, Arc<CorrectorSeries>>>,
}

impl TauSeries {
    pub fn new(terms: Vec<DynField>) -> Self {
        assert!(!terms.is_empty(), "a tau-series needs at least one term");
        let dim = terms[0].dim();
        let mut period = None;
        for t in &terms {
            assert_eq!(t.dim(), dim, "series terms must share one dimension");
            if let Some(p) = t.period() {
                period.get_or_insert(p);
            }
        }
        Self {
            terms,
            dim,
            period,
            correctors: Mutex::new(HashMap::new()),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn period(&self) -> Option<f64> {
        self.period
    }

    /// Truncation order `m` (the series holds `m + 1` terms).
    pub fn truncation_order(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn terms(&self) -> &[DynField] {
        &self.terms
    }

    pub fn term(&self, n: usize) -> Option<&DynField> {
        self.terms.get(n)
    }

    /// The corrector table for transforms truncated at order `m`.
    pub fn correctors(&self, m: usize) -> EngineResult<Arc<CorrectorSeries>> {
        if m == 0 || m > self.truncation_order() + 1 {
            return Err(EngineError::TruncationExceeded {
                requested: m,
                available: self.truncation_order() + 1,
            });
        }
        let mut cache = self.correctors.lock().unwrap();
        if let Some(c) = cache.get(&m) {
            return Ok(c.clone());
        }
        let built = Arc::new(CorrectorSeries::build(self, m)?);
        cache.insert(m, built.clone());
        Ok(built)
    }

    /// Evaluates the transform `ξ + Σ_{n<m} τ^{n+1}/(n+1)! F_0^[n](t, ξ)`.
    pub fn h_transform(&self, tau: f64, m: usize, t: f64, xi: &[f64]) -> EngineResult<Vec<f64>> {
        let correctors = self.correctors(m)?;
        correctors.apply(tau, t, xi)
    }
}
