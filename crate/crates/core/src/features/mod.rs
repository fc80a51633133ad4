//! Feature catalog and per-window extraction.

mod context;
mod derived;
mod extract;
mod highlevel;
pub mod io;
mod perceptual;
mod registry;
mod spectral;
mod stats;
mod time;
mod voice;

pub use extract::{extract_features, extract_stream, Extractor, ExtractorConfig, FeatureVector};
pub use registry::{
    component_ids, lookup, registry, Feature, FeatureGroup, FeatureSelection, FeatureSpec, PrivacyClass,
    WAVELET_COMPONENTS,
};
