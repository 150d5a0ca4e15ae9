//! Simulator of a programmable unambiguous discriminator of coherent states.
//!
//! An unknown coherent state `|α?⟩`, promised to equal one of the program
//! states `|α₁⟩, |α₂⟩, …`, is split and interfered with each program state
//! so that detector `D_j` stays dark whenever `α? = α_j`. A click at `D_j`
//! therefore rules out hypothesis `j`, and a pattern that rules out all but
//! one hypothesis identifies the state without error.
//!
//! The analytic layers ([`optics`], [`discriminator`], [`detection`]) are
//! generic over the scalar type; [`discriminator::derive_plan`] also accepts
//! exact rationals. The Monte Carlo engine ([`montecarlo`]), the drift and
//! stabilization loop ([`drift`]) and the sweeps ([`scenarios`]) run in
//! `f64`.

pub mod detection;
pub mod discriminator;
pub mod drift;
mod error;
pub mod montecarlo;
pub mod optics;
pub mod scalar;
pub mod scenarios;

pub use error::{Error, Result};
pub use scalar::{Field, Real};

/// Double-precision coherent amplitude.
pub type Amplitude = optics::ComplexAmplitude<f64>;
/// Single-precision coherent amplitude.
pub type Amplitude32 = optics::ComplexAmplitude<f32>;
pub type BeamSplitter = optics::BeamSplitter<f64>;
pub type SplitterPlan = discriminator::SplitterPlan<f64>;
/// Splitting ratios in exact rational arithmetic.
pub type RationalPlan = discriminator::SplitterPlan<num_rational::Ratio<i64>>;
pub type PortAmplitudes = discriminator::PortAmplitudes<f64>;
pub type DetectorModel = detection::DetectorModel<f64>;
pub type InterferenceModel = detection::InterferenceModel<f64>;

pub use discriminator::{classify, Classification, NStatePlan, Outcome};
pub use montecarlo::{run_experiment, run_experiment_with, Counts, Execution, ExperimentConfig, Fractions};
