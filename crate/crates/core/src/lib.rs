//! Frequency-resolved photon correlations of resonance fluorescence.
//!
//! The crate builds Lindblad models of a driven two-level emitter and of a
//! squeezed driven cavity, attaches weakly coupled frequency sensors, and
//! computes one- and two-photon spectra, delayed coincidences, interference
//! decompositions and nonclassicality quantifiers. Each numerical path has a
//! closed-form counterpart in [`spectra`], [`twophoton`] or [`gaussian`].
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the aliases below fix
//! `f64`, which is what the command-line tool uses.

// `!(x < y)` is used throughout so that NaN fails every check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod cli;
pub mod error;
pub mod gaussian;
pub mod linalg;
pub mod models;
pub mod output;
pub mod scalar;
pub mod spectra;
pub mod steadystate;
pub mod twophoton;

pub use error::{Error, Result};
pub use scalar::{Real, C};

/// Complex `f64`.
pub type Complex64 = C<f64>;
pub type Operator = algebra::Operator<f64>;
pub type Superoperator = algebra::Superoperator<f64>;
pub type DensityMatrix = steadystate::DensityMatrix<f64>;
pub type QuantumModel = models::QuantumModel<f64>;
pub type RFParams = models::RFParams<f64>;
pub type CavityParams = models::CavityParams<f64>;
pub type SensorConfig = models::SensorConfig<f64>;
pub type SpectrumSample = spectra::SpectrumSample<f64>;
pub type Landscape = twophoton::Landscape<f64>;
pub type InterferenceTerms = twophoton::InterferenceTerms<f64>;
pub type SensorMoments = twophoton::SensorMoments<f64>;
pub type Quantifiers = twophoton::Quantifiers<f64>;
pub type GaussianParams = gaussian::GaussianParams<f64>;
pub type MomentSet = gaussian::MomentSet<f64>;
