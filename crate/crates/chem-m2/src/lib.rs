//! The two-species CO/O₃ box model under diurnal forcing.
//!
//! The model is
//!
//! ```text
//! ẋ₁ = S₁(t) − Z₁(t)·x₁x₂
//! ẋ₂ = −S₂(t) + Z₁(t)·x₁x₂ − (1 + Z₁(t))·x₂ + (Z₂(t) + S₂(t))/x₂
//! ```
//!
//! on `Ω = R² \ {x₂ = 0}`, with the four `T`-periodic scalar signals held in
//! a [`ForcingProfile`] alongside their cumulative-integral caches. Because
//! the field is linear in the signals, its first generator term and the
//! second-order averaged correction have closed forms in those caches; this
//! crate supplies them together with the benchmark pipeline driver, so the
//! long-horizon runs never touch the generic engine.
//!
//! Sign convention: the `x₂` equation is implemented exactly as displayed
//! above (production `Z₁x₁x₂`, loss `(1+Z₁)x₂`, source `(Z₂+S₂)/x₂`).

mod forcing;
mod model;
mod pullback;
mod signal;

pub use forcing::{ForcingProfile, SignalName};
pub use model::{m2_averaged, m2_field, m2_g0, m2_y02};
pub use pullback::m2_pullback;
pub use signal::{load_samples_csv, Signal, SignalSpec, Waveform};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ForcingError {
    #[error("malformed forcing CSV {path}: {reason}")]
    MalformedCsv { path: String, reason: String },

    #[error("forcing file not found: {path}")]
    MissingFile { path: String },

    #[error("sampled signal length {samples} does not divide the quadrature grid {grid}")]
    GridIncompatible { samples: usize, grid: usize },

    #[error("signal period {signal} disagrees with profile period {profile}")]
    PeriodMismatch { signal: f64, profile: f64 },

    #[error("invalid waveform: {0}")]
    BadWaveform(String),
}
