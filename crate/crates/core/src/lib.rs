//! Privacy-aware acoustic feature extraction.
//!
//! Audio is decoded and windowed ([`signal`]), reduced to a catalog of
//! features that avoid speech and speaker cues ([`features`]), and a subset of
//! features is chosen for a sound category under a latency budget
//! ([`selector`]). [`leakage`] scores how much speaker or speech information a
//! representation retains and [`profiler`] measures per-feature cost.
//!
//! Numeric code is generic over [`Real`] (`f32` or `f64`); the aliases below
//! name the common instantiations.

pub mod dsp;
pub mod features;
pub mod leakage;
pub mod profiler;
pub mod selector;
pub mod signal;

mod error;
mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type AudioBuffer64 = signal::AudioBuffer<f64>;
pub type AudioBuffer32 = signal::AudioBuffer<f32>;
pub type Frame64 = signal::Frame<f64>;
pub type Frame32 = signal::Frame<f32>;
pub type Spectrum64 = dsp::Spectrum<f64>;
pub type Spectrum32 = dsp::Spectrum<f32>;
pub type Extractor64 = features::Extractor<f64>;
pub type Extractor32 = features::Extractor<f32>;
pub type FeatureVector64 = features::FeatureVector<f64>;
pub type FeatureVector32 = features::FeatureVector<f32>;
pub type ScoreTable64 = selector::ScoreTable<f64>;
pub type ScoreTable32 = selector::ScoreTable<f32>;
pub type SelectionRequest64 = selector::SelectionRequest<f64>;
pub type SelectionResult64 = selector::SelectionResult<f64>;
pub type LabeledFeatureTable64 = leakage::LabeledFeatureTable<f64>;
