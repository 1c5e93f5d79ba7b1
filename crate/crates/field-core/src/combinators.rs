//! Field expression nodes: constants, linear combinations, directional
//! derivatives and time means. Together with the period-grid antiderivative
//! these are the building blocks of every derived field in the engine.

use std::sync::Arc;
use std::sync::Mutex;

use nalgebra::DMatrix;

use crate::error::{FieldError, FieldResult};
use crate::field::{check_input, merge_periods, DynField, TimeField};
use crate::quad::{trapezoid_uniform, QuadratureConfig};

/// A constant vector field.
pub struct ConstField {
    value: Vec<f64>,
}

impl ConstField {
    pub fn new(value: Vec<f64>) -> Self {
        Self { value }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            value: vec![0.0; dim],
        }
    }
}

impl TimeField for ConstField {
    fn dim(&self) -> usize {
        self.value.len()
    }

    fn period(&self) -> Option<f64> {
        None
    }

    fn eval(&self, _t: f64, x: &[f64]) -> FieldResult<Vec<f64>> {
        check_input(self, 0.0, x)?;
        Ok(self.value.clone())
    }

    fn jacobian(&self, _t: f64, _x: &[f64]) -> FieldResult<DMatrix<f64>> {
        Ok(DMatrix::zeros(self.dim(), self.dim()))
    }

    fn time_derivative(&self) -> Option<DynField> {
        Some(Arc::new(ConstField::zero(self.dim())))
    }
}

/// A linear combination `Σ c_i F_i` of fields sharing one dimension.
pub struct LinCombField {
    parts: Vec<(f64, DynField)>,
    dim: usize,
    period: Option<f64>,
}

impl LinCombField {
    pub fn new(parts: Vec<(f64, DynField)>) -> FieldResult<Self> {
        assert!(!parts.is_empty(), "empty linear combination");
        let dim = parts[0].1.dim();
        let mut period = None;
        for (_, f) in &parts {
            if f.dim() != dim {
                return Err(FieldError::DimensionMismatch {
                    expected: dim,
                    got: f.dim(),
                });
            }
            period = merge_periods(period, f.period())?;
        }
        Ok(Self { parts, dim, period })
    }
}

impl TimeField for LinCombField {
    fn dim(&self) -> usize {
        self.dim
    }

    fn period(&self) -> Option<f64> {
        self.period
    }

    fn eval(&self, t: f64, x: &[f64]) -> FieldResult<Vec<f64>> {
        let mut acc = vec![0.0; self.dim];
        for (c, f) in &self.parts {
            let v = f.eval(t, x)?;
            for (a, vi) in acc.iter_mut().zip(v.iter()) {
                *a += c * vi;
            }
        }
        Ok(acc)
    }

    fn jacobian(&self, t: f64, x: &[f64]) -> FieldResult<DMatrix<f64>> {
        let mut acc = DMatrix::zeros(self.dim, self.dim);
        for (c, f) in &self.parts {
            acc += f.jacobian(t, x)? * *c;
        }
        Ok(acc)
    }

    fn time_derivative(&self) -> Option<DynField> {
        let mut parts = Vec::with_capacity(self.parts.len());
        for (c, f) in &self.parts {
            parts.push((*c, f.time_derivative()?));
        }
        Some(Arc::new(LinCombField::new(parts).ok()?))
    }

    fn in_domain(&self, x: &[f64]) -> bool {
        self.parts.iter().all(|(_, f)| f.in_domain(x))
    }
}

/// The directional derivative `DF·G` of one field along another.
///
/// Its own Jacobian would need second derivatives of `F`, so it falls back
/// to the finite-difference contract.
pub struct DirField {
    of: DynField,
    along: DynField,
    period: Option<f64>,
}

impl DirField {
    pub fn new(of: DynField, along: DynField) -> FieldResult<Self> {
        if of.dim() != along.dim() {
            return Err(FieldError::DimensionMismatch {
                expected: of.dim(),
                got: along.dim(),
            });
        }
        let period = merge_periods(of.period(), along.period())?;
        Ok(Self { of, along, period })
    }
}

impl TimeField for DirField {
    fn dim(&self) -> usize {
        self.of.dim()
    }

    fn period(&self) -> Option<f64> {
        self.period
    }

    fn eval(&self, t: f64, x: &[f64]) -> FieldResult<Vec<f64>> {
        let jac = self.of.jacobian(t, x)?;
        let g = self.along.eval(t, x)?;
        let mut out = vec![0.0; self.dim()];
        for i in 0..self.dim() {
            let mut acc = 0.0;
            for (j, gj) in g.iter().enumerate() {
                acc += jac[(i, j)] * gj;
            }
            out[i] = acc;
        }
        Ok(out)
    }

    fn time_derivative(&self) -> Option<DynField> {
        // ∂_t(DF·G) = D(∂_t F)·G + DF·(∂_t G)
        let df = self.of.time_derivative()?;
        let dg = self.along.time_derivative()?;
        let a = DirField::new(df, self.along.clone()).ok()?;
        let b = DirField::new(self.of.clone(), dg).ok()?;
        Some(Arc::new(
            LinCombField::new(vec![(1.0, Arc::new(a) as DynField), (1.0, Arc::new(b))]).ok()?,
        ))
    }

    fn in_domain(&self, x: &[f64]) -> bool {
        self.of.in_domain(x) && self.along.in_domain(x)
    }
}

/// The time mean `(1/T)∫_0^T F(s, ·) ds` of a periodic field, as an
/// autonomous field. Autonomous inputs pass through untouched.
///
/// Values and Jacobians at a given state are memoized; the cache is cleared
/// wholesale when it outgrows its bound.
pub struct MeanField {
    source: DynField,
    quad: QuadratureConfig,
    cache: Mutex<std::collections::HashMap<Vec<u64>, (Vec<f64>, Option<DMatrix<f64>>)>>,
}

const MEAN_CACHE_CAP: usize = 256;

impl MeanField {
    pub fn new(source: DynField, quad: QuadratureConfig) -> Self {
        Self {
            source,
            quad,
            cache: Mutex::new(std::collections::HashMap::new()),
        }
    }

    fn key(x: &[f64]) -> Vec<u64> {
        x.iter().map(|v| v.to_bits()).collect()
    }

    fn compute_value(&self, x: &[f64]) -> FieldResult<Vec<f64>> {
        let period = match self.source.period() {
            Some(p) => p,
            None => return self.source.eval(0.0, x),
        };
        let nodes = self.quad.nodes(period);
        let h = self.quad.spacing(period);
        let dim = self.dim();
        let mut cols = vec![Vec::with_capacity(nodes.len()); dim];
        for s in &nodes {
            let v = self.source.eval(*s, x)?;
            for (c, vi) in cols.iter_mut().zip(v.iter()) {
                c.push(*vi);
            }
        }
        Ok(cols
            .iter()
            .map(|c| trapezoid_uniform(c, h) / period)
            .collect())
    }

    fn compute_jacobian(&self, x: &[f64]) -> FieldResult<DMatrix<f64>> {
        let period = match self.source.period() {
            Some(p) => p,
            None => return self.source.jacobian(0.0, x),
        };
        let nodes = self.quad.nodes(period);
        let h = self.quad.spacing(period);
        let dim = self.dim();
        let mut cols = vec![Vec::with_capacity(nodes.len()); dim * dim];
        for s in &nodes {
            let jac = self.source.jacobian(*s, x)?;
            for i in 0..dim {
                for j in 0..dim {
                    cols[i * dim + j].push(jac[(i, j)]);
                }
            }
        }
        let mut out = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                out[(i, j)] = trapezoid_uniform(&cols[i * dim + j], h) / period;
            }
        }
        Ok(out)
    }
}

impl TimeField for MeanField {
    fn dim(&self) -> usize {
        self.source.dim()
    }

    fn period(&self) -> Option<f64> {
        None
    }

    fn eval(&self, _t: f64, x: &[f64]) -> FieldResult<Vec<f64>> {
        // Autonomous sources short-circuit so that taking the mean of an
        // already-autonomous field is exactly the identity.
        if self.source.period().is_none() {
            return self.source.eval(_t, x);
        }
        let key = Self::key(x);
        {
            let cache = self.cache.lock().unwrap();
            if let Some((v, _)) = cache.get(&key) {
                return Ok(v.clone());
            }
        }
        let v = self.compute_value(x)?;
        let mut cache = self.cache.lock().unwrap();
        if cache.len() >= MEAN_CACHE_CAP {
            cache.clear();
        }
        cache.entry(key).or_insert((v.clone(), None));
        Ok(v)
    }

    fn jacobian(&self, _t: f64, x: &[f64]) -> FieldResult<DMatrix<f64>> {
        if self.source.period().is_none() {
            return self.source.jacobian(_t, x);
        }
        let key = Self::key(x);
        {
            let cache = self.cache.lock().unwrap();
            if let Some((_, Some(j))) = cache.get(&key) {
                return Ok(j.clone());
            }
        }
        let j = self.compute_jacobian(x)?;
        let v = self.eval(0.0, x)?;
        let mut cache = self.cache.lock().unwrap();
        if cache.len() >= MEAN_CACHE_CAP {
            cache.clear();
        }
        cache.insert(key, (v, Some(j.clone())));
        Ok(j)
    }

    fn time_derivative(&self) -> Option<DynField> {
        Some(Arc::new(ConstField::zero(self.dim())))
    }

    fn in_domain(&self, x: &[f64]) -> bool {
        self.source.in_domain(x)
    }
}

/// `Σ c_i F_i` as a shared field.
pub fn lincomb(parts: Vec<(f64, DynField)>) -> FieldResult<DynField> {
    Ok(Arc::new(LinCombField::new(parts)?))
}

/// `F + G`.
pub fn sum(f: DynField, g: DynField) -> FieldResult<DynField> {
    lincomb(vec![(1.0, f), (1.0, g)])
}

/// `c·F`.
pub fn scale(c: f64, f: DynField) -> FieldResult<DynField> {
    lincomb(vec![(c, f)])
}

/// `DF·G`.
pub fn dir(of: DynField, along: DynField) -> FieldResult<DynField> {
    Ok(Arc::new(DirField::new(of, along)?))
}

/// The spatial Lie bracket `L_G F = DF·G − DG·F` as a field.
pub fn bracket(g: DynField, f: DynField) -> FieldResult<DynField> {
    lincomb(vec![
        (1.0, dir(f.clone(), g.clone())?),
        (-1.0, dir(g, f)?),
    ])
}
