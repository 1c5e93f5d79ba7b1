//! The recursive triangle of a Lie transform.
//!
//! Entries `A_n^{(i)}` are fields on the suspended space, represented as a
//! pair of the symbolic time-slot coefficient and the spatial part. The
//! recursion is
//!
//! ```text
//! A_n^{(i+1)} = A_{n+1}^{(i)} + Σ_{k=0}^{n} C(n,k) · L_{H_{n−k}} A_k^{(i)}
//! ```
//!
//! with `L_{H} [α, F] = [0, DF·H − DH·F − α·∂_t H]`: the time slot of an
//! argument differentiates the generator term exactly (its stored
//! integrand), and flat arguments reduce to the plain spatial bracket. The
//! same code runs the τ-suspended (inverse-generator) triangles, whose
//! entries all carry zero slots.

use std::collections::HashMap;
use std::sync::Arc;

use field_core::{bracket, lincomb, ConstField, DynField, FieldError};

use crate::error::{EngineError, EngineResult};
use crate::series::TauSeries;

/// Binomial coefficient as a float (orders stay single digit here).
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// A field on the suspended space: time-slot coefficient plus spatial part.
#[derive(Clone)]
pub struct Suspended {
    pub time_slot: f64,
    pub space: DynField,
}

impl Suspended {
    pub fn flat(space: DynField) -> Self {
        Self {
            time_slot: 0.0,
            space,
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self::flat(Arc::new(ConstField::zero(dim)))
    }
}

/// The suspended column of a periodic source: `[1, 0], [0, Y], 0, 0, …`.
pub fn suspend_source(y: &DynField) -> Vec<Suspended> {
    vec![
        Suspended {
            time_slot: 1.0,
            space: Arc::new(ConstField::zero(y.dim())),
        },
        Suspended::flat(y.clone()),
    ]
}

fn susp_bracket(generator: &DynField, arg: &Suspended) -> EngineResult<Suspended> {
    let mut parts = vec![(1.0, bracket(generator.clone(), arg.space.clone())?)];
    if arg.time_slot != 0.0 {
        let dt = generator
            .time_derivative()
            .ok_or(FieldError::MissingTimeDerivative {
                what: "generator term bracketed against a unit time slot",
            })?;
        parts.push((-arg.time_slot, dt));
    }
    Ok(Suspended::flat(lincomb(parts)?))
}

fn susp_sum(parts: Vec<(f64, Suspended)>) -> EngineResult<Suspended> {
    let time_slot = parts.iter().map(|(c, s)| c * s.time_slot).sum();
    let space = lincomb(parts.into_iter().map(|(c, s)| (c, s.space)).collect())?;
    Ok(Suspended { time_slot, space })
}

/// The doubly indexed table `A_n^{(i)}`, `n + i ≤ depth`.
pub struct LieTriangle {
    depth: usize,
    entries: HashMap<(usize, usize), Suspended>,
}

impl LieTriangle {
    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Entry `A_n^{(i)}`; `None` outside the computed triangle.
    pub fn entry(&self, n: usize, i: usize) -> Option<&Suspended> {
        self.entries.get(&(n, i))
    }

    pub fn eval(&self, n: usize, i: usize, t: f64, x: &[f64]) -> EngineResult<Vec<f64>> {
        let e = self.entry(n, i).ok_or(EngineError::TruncationExceeded {
            requested: n + i,
            available: self.depth,
        })?;
        Ok(e.space.eval(t, x)?)
    }
}

/// Builds the triangle of the series `a` under the generator `h` up to
/// `n + i ≤ depth`. Column `i = 0` is the input column, padded with zeros
/// past its end.
pub fn lie_triangle(
    a_column: &[Suspended],
    generator: &TauSeries,
    depth: usize,
) -> EngineResult<LieTriangle> {
    let available = generator.truncation_order() + 1;
    if depth > available {
        return Err(EngineError::TruncationExceeded {
            requested: depth,
            available,
        });
    }
    let dim = generator.dim();
    let mut entries: HashMap<(usize, usize), Suspended> = HashMap::new();
    for n in 0..=depth {
        let e = a_column
            .get(n)
            .cloned()
            .unwrap_or_else(|| Suspended::zero(dim));
        entries.insert((n, 0), e);
    }
    for i in 0..depth {
        for n in 0..depth - i {
            let mut parts = vec![(1.0, entries[&(n + 1, i)].clone())];
            for k in 0..=n {
                let h = generator.term(n - k).expect("depth checked above");
                let b = susp_bracket(h, &entries[&(k, i)])?;
                parts.push((binomial(n, k), b));
            }
            entries.insert((n, i + 1), susp_sum(parts)?);
        }
    }
    Ok(LieTriangle { depth, entries })
}
