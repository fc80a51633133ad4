//! The catalog of privacy-aware features.
//!
//! Order is frozen: new features may only be appended.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureGroup {
    TimeDomain,
    Spectral,
    Statistical,
    Perceptual,
    VoiceSpecific,
    HighLevel,
    Derived,
}

impl FeatureGroup {
    pub fn as_str(self) -> &'static str {
        match self {
            FeatureGroup::TimeDomain => "time_domain",
            FeatureGroup::Spectral => "spectral",
            FeatureGroup::Statistical => "statistical",
            FeatureGroup::Perceptual => "perceptual",
            FeatureGroup::VoiceSpecific => "voice_specific",
            FeatureGroup::HighLevel => "high_level",
            FeatureGroup::Derived => "derived",
        }
    }
}

/// Whether a feature is considered free of speaker cues or only borderline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PrivacyClass {
    NonInvasive,
    GrayZone,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Feature {
    AmplitudeEnvelope,
    Rms,
    Zcr,
    ShortTermEnergy,
    TemporalCentroid,
    EnvelopeModulationRate,
    SilenceRatio,
    SpectralCentroid,
    SpectralFlatness,
    SpectralContrast,
    SpectralSpread,
    SpectralEntropy,
    SpectralIrregularity,
    SpectralRoughness,
    Mean,
    Variance,
    StdDev,
    Kurtosis,
    Skewness,
    Entropy,
    Sharpness,
    Reverberation,
    TonalityIndex,
    Hnr,
    Jitter,
    Shimmer,
    GroupDelay,
    WaveletFeatures,
    TemporalSpectralSlope,
    TransientToSustained,
    SpectralTexture,
    LowBandEnergy,
    MidBandEnergy,
    HighBandEnergy,
    Lh1000,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FeatureSpec {
    pub id: &'static str,
    pub display_name: &'static str,
    pub group: FeatureGroup,
    pub arity: usize,
    pub privacy_class: PrivacyClass,
    pub unit: &'static str,
    #[serde(skip)]
    pub feature: Feature,
}

impl FeatureSpec {
    /// Output column ids contributed by this feature.
    pub fn component_ids(&self) -> &'static [&'static str] {
        match self.feature {
            Feature::WaveletFeatures => &WAVELET_COMPONENTS,
            _ => {
                let i = REGISTRY.iter().position(|s| s.id == self.id).unwrap();
                std::slice::from_ref(&SCALAR_IDS[i])
            }
        }
    }
}

/// Wavelet energy columns: detail levels 1-5 (finest first), then the approximation.
pub const WAVELET_COMPONENTS: [&str; 6] =
    ["wavelet_e0", "wavelet_e1", "wavelet_e2", "wavelet_e3", "wavelet_e4", "wavelet_e5"];

macro_rules! spec {
    ($feature:ident, $id:literal, $name:literal, $group:ident, $unit:literal) => {
        spec!($feature, $id, $name, $group, $unit, 1, NonInvasive)
    };
    ($feature:ident, $id:literal, $name:literal, $group:ident, $unit:literal, $arity:literal, $class:ident) => {
        FeatureSpec {
            id: $id,
            display_name: $name,
            group: FeatureGroup::$group,
            arity: $arity,
            privacy_class: PrivacyClass::$class,
            unit: $unit,
            feature: Feature::$feature,
        }
    };
}

static REGISTRY: [FeatureSpec; 35] = [
    spec!(AmplitudeEnvelope, "amplitude_envelope", "Amplitude Envelope", TimeDomain, "fs"),
    spec!(Rms, "rms", "RMS", TimeDomain, "fs"),
    spec!(Zcr, "zcr", "Zero Crossing Rate", TimeDomain, "ratio"),
    spec!(ShortTermEnergy, "short_term_energy", "Short-Term Energy", TimeDomain, "fs^2"),
    spec!(TemporalCentroid, "temporal_centroid", "Temporal Centroid", TimeDomain, "ratio"),
    spec!(EnvelopeModulationRate, "envelope_modulation_rate", "Envelope Modulation Rate", TimeDomain, "fs/s"),
    spec!(SilenceRatio, "silence_ratio", "Silence Ratio", TimeDomain, "ratio"),
    spec!(SpectralCentroid, "spectral_centroid", "Spectral Centroid", Spectral, "Hz"),
    spec!(SpectralFlatness, "spectral_flatness", "Spectral Flatness", Spectral, "ratio"),
    spec!(SpectralContrast, "spectral_contrast", "Spectral Contrast", Spectral, "dB"),
    spec!(SpectralSpread, "spectral_spread", "Spectral Spread", Spectral, "Hz"),
    spec!(SpectralEntropy, "spectral_entropy", "Spectral Entropy", Spectral, "ratio"),
    spec!(SpectralIrregularity, "spectral_irregularity", "Spectral Irregularity", Spectral, "ratio"),
    spec!(SpectralRoughness, "spectral_roughness", "Spectral Roughness", Spectral, "fs^2"),
    spec!(Mean, "mean", "Mean", Statistical, "fs"),
    spec!(Variance, "variance", "Variance", Statistical, "fs^2"),
    spec!(StdDev, "std_dev", "Standard Deviation", Statistical, "fs"),
    spec!(Kurtosis, "kurtosis", "Kurtosis", Statistical, "1"),
    spec!(Skewness, "skewness", "Skewness", Statistical, "1"),
    spec!(Entropy, "entropy", "Entropy", Statistical, "ratio"),
    spec!(Sharpness, "sharpness", "Sharpness", Perceptual, "Bark"),
    spec!(Reverberation, "reverberation", "Reverberation", Perceptual, "dB/s"),
    spec!(TonalityIndex, "tonality_index", "Tonality Index", Perceptual, "ratio"),
    spec!(Hnr, "hnr", "HNR", VoiceSpecific, "dB", 1, GrayZone),
    spec!(Jitter, "jitter", "Jitter", VoiceSpecific, "ratio", 1, GrayZone),
    spec!(Shimmer, "shimmer", "Shimmer", VoiceSpecific, "ratio", 1, GrayZone),
    spec!(GroupDelay, "group_delay", "Group Delay", HighLevel, "s"),
    spec!(WaveletFeatures, "wavelet_features", "Wavelet Features", HighLevel, "ratio", 6, NonInvasive),
    spec!(TemporalSpectralSlope, "temporal_spectral_slope", "Temporal Spectral Slope", HighLevel, "Hz/s"),
    spec!(TransientToSustained, "transient_to_sustained", "Transient-to-Sustained Ratio", Derived, "ratio"),
    spec!(SpectralTexture, "spectral_texture", "Spectral Texture", Derived, "1"),
    spec!(LowBandEnergy, "low_band_energy", "Low Band Energy", Derived, "ratio"),
    spec!(MidBandEnergy, "mid_band_energy", "Mid Band Energy", Derived, "ratio"),
    spec!(HighBandEnergy, "high_band_energy", "High Band Energy", Derived, "ratio"),
    spec!(Lh1000, "lh1000", "Low-to-High Ratio (LH1000)", Derived, "ratio"),
];

// Column id for each scalar entry, indexed like REGISTRY.
static SCALAR_IDS: [&str; 35] = {
    let mut ids = [""; 35];
    let mut i = 0;
    while i < 35 {
        ids[i] = REGISTRY[i].id;
        i += 1;
    }
    ids
};

/// All features, in output order.
pub fn registry() -> &'static [FeatureSpec] {
    &REGISTRY
}

pub fn lookup(id: &str) -> Option<&'static FeatureSpec> {
    REGISTRY.iter().find(|s| s.id == id)
}

pub(crate) fn position(id: &str) -> Option<usize> {
    REGISTRY.iter().position(|s| s.id == id)
}

/// Every output column id, in output order.
pub fn component_ids() -> Vec<&'static str> {
    REGISTRY.iter().flat_map(|s| s.component_ids().iter().copied()).collect()
}

/// An ordered, duplicate-free subset of the registry.
///
/// Ids are kept in registry order regardless of the order they were given in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureSelection {
    indices: Vec<usize>,
}

impl FeatureSelection {
    pub fn all() -> Self {
        Self { indices: (0..REGISTRY.len()).collect() }
    }

    pub fn from_ids<S: AsRef<str>>(ids: &[S]) -> Result<Self> {
        if ids.is_empty() {
            return Err(Error::EmptySelection);
        }
        let mut indices = Vec::with_capacity(ids.len());
        for id in ids {
            let id = id.as_ref().trim();
            let i = position(id).ok_or_else(|| Error::UnknownFeatureId(id.to_string()))?;
            if indices.contains(&i) {
                return Err(Error::DuplicateFeatureId(id.to_string()));
            }
            indices.push(i);
        }
        indices.sort_unstable();
        Ok(Self { indices })
    }

    /// Parses `all` or a comma-separated id list.
    pub fn parse(list: &str) -> Result<Self> {
        let list = list.trim();
        if list.eq_ignore_ascii_case("all") {
            return Ok(Self::all());
        }
        let ids: Vec<&str> = list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        Self::from_ids(&ids)
    }

    pub fn specs(&self) -> impl Iterator<Item = &'static FeatureSpec> + '_ {
        self.indices.iter().map(|&i| &REGISTRY[i])
    }

    pub fn ids(&self) -> Vec<&'static str> {
        self.specs().map(|s| s.id).collect()
    }

    pub fn component_ids(&self) -> Vec<&'static str> {
        self.specs().flat_map(|s| s.component_ids().iter().copied()).collect()
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}
