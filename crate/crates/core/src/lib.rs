//! Dyadic harmonic analysis at finite resolution.
//!
//! Functions on the dyadic (Walsh) group are truncated to `N` binary
//! coordinates and stored as `2^N` cell values. On top of that carrier the
//! crate provides the Walsh-Paley and Walsh-Kaczmarz systems, a fast
//! Walsh-Hadamard transform, Dirichlet/Fejér/T kernels, T and Nörlund means,
//! maximal operators, martingale Hardy norms, and the lacunary atomic
//! martingale whose T means blow up in weak-`L_p` for `p < 1/2`.
//!
//! Every numeric type is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases at the crate root fix the scalar to `f64`, which is what the CLI
//! and the acceptance suite use.

pub mod counterexample;
pub mod dyadic;
mod error;
pub mod hardy;
pub mod io;
mod scalar;
pub mod selfcheck;
pub mod signal;
pub mod summability;
pub mod systems;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use dyadic::{DyadicInterval, DyadicPoint, Resolution};
pub use systems::{Direction, SystemKind};

/// Grid function with `f64` values.
pub type Grid = dyadic::GridFunction<f64>;
/// Fourier coefficients with `f64` values.
pub type Spectrum = systems::SpectralCoeffs<f64>;
/// Weight sequence with `f64` weights.
pub type Weights = summability::WeightSequence<f64>;
/// Mean family with `f64` parameters.
pub type Family = summability::MeanFamily<f64>;
/// Counterexample description with `f64` exponent.
pub type Counterexample = counterexample::CounterexampleSpec<f64>;

/// Single-precision grid function.
pub type Grid32 = dyadic::GridFunction<f32>;
/// Single-precision Fourier coefficients.
pub type Spectrum32 = systems::SpectralCoeffs<f32>;
