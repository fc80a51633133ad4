use serde::{Deserialize, Serialize};

use crate::dsp::{SpectrumAnalyzer, DEFAULT_DWT_LEVELS, DEFAULT_SMOOTHING_MS, DEFAULT_SUBFRAME_MS};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::signal::{window, AudioBuffer, Frame, Taper, WindowPlan, MIN_WINDOW_SAMPLES};

use super::context::FrameContext;
use super::registry::{Feature, FeatureSelection, FeatureSpec};
use super::{derived, highlevel, perceptual, spectral, stats, time, voice};

/// Tunable constants of the feature formulas.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExtractorConfig {
    /// Taper for whole-frame spectra.
    pub taper: Taper,
    pub envelope_smoothing_ms: f64,
    /// Sub-frame length for flux, transient and centroid-trajectory features.
    pub subframe_ms: f64,
    /// Sub-frame length for silence detection.
    pub silence_subframe_ms: f64,
    /// Absolute RMS below which a silence sub-frame counts as silent.
    pub silence_threshold: f64,
    /// Sub-frame hop for per-period jitter/shimmer analysis.
    pub voice_subframe_ms: f64,
    pub pitch_min_hz: f64,
    pub pitch_max_hz: f64,
    pub voicing_threshold: f64,
    /// Sub-frame RMS gate for voicing, as a fraction of the frame's peak
    /// magnitude so that voicing decisions do not depend on level.
    pub voicing_min_rms: f64,
    pub dwt_levels: usize,
    pub texture_levels: usize,
    pub contrast_quantile: f64,
    pub roughness_peaks: usize,
    pub roughness_prominence_db: f64,
    /// Frames with less energy than this are treated as silent.
    pub degenerate_energy: f64,
}

impl Default for ExtractorConfig {
    fn default() -> Self {
        Self {
            taper: Taper::Hann,
            envelope_smoothing_ms: DEFAULT_SMOOTHING_MS,
            subframe_ms: DEFAULT_SUBFRAME_MS,
            silence_subframe_ms: 10.0,
            silence_threshold: 0.01,
            voice_subframe_ms: 10.0,
            pitch_min_hz: 60.0,
            pitch_max_hz: 400.0,
            voicing_threshold: 0.45,
            voicing_min_rms: 0.005,
            dwt_levels: DEFAULT_DWT_LEVELS,
            texture_levels: 4,
            contrast_quantile: 0.2,
            roughness_peaks: 20,
            roughness_prominence_db: 10.0,
            degenerate_energy: 1e-12,
        }
    }
}

/// One window's feature values, in registry order.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector<T> {
    pub window_index: usize,
    pub start_time_s: f64,
    pub components: Vec<(&'static str, T)>,
}

impl<T: Real> FeatureVector<T> {
    pub fn get(&self, component: &str) -> Option<T> {
        self.components.iter().find(|(id, _)| *id == component).map(|&(_, v)| v)
    }

    pub fn values(&self) -> impl Iterator<Item = T> + '_ {
        self.components.iter().map(|&(_, v)| v)
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

/// Feature extractor for frames of one length and sample rate.
///
/// Holds the planned transforms and lookup tables; reusable across frames and
/// shareable between threads.
#[derive(Debug, Clone)]
pub struct Extractor<T: Real> {
    pub(crate) config: ExtractorConfig,
    pub(crate) sample_rate_hz: u32,
    pub(crate) frame_len: usize,
    pub(crate) main: SpectrumAnalyzer<T>,
    pub(crate) sub: SpectrumAnalyzer<T>,
    /// Bark band (0..24) of every bin of the main spectrum.
    pub(crate) bark_band: Vec<usize>,
}

impl<T: Real> Extractor<T> {
    pub fn new(sample_rate_hz: u32, frame_len: usize) -> Result<Self> {
        Self::with_config(sample_rate_hz, frame_len, ExtractorConfig::default())
    }

    pub fn with_config(sample_rate_hz: u32, frame_len: usize, config: ExtractorConfig) -> Result<Self> {
        if sample_rate_hz == 0 {
            return Err(Error::InvalidArgument("sample rate must be positive".into()));
        }
        if frame_len < MIN_WINDOW_SAMPLES {
            return Err(Error::FrameTooShort { len: frame_len, min: MIN_WINDOW_SAMPLES });
        }
        let main = SpectrumAnalyzer::new(frame_len, config.taper)?;
        let sub_len = ((config.subframe_ms * f64::from(sample_rate_hz) / 1000.0).round() as usize)
            .clamp(2, frame_len / 2);
        let sub = SpectrumAnalyzer::with_min_len(sub_len, Taper::Hann, 2)?;
        let bin_hz = f64::from(sample_rate_hz) / main.fft_size() as f64;
        let bark_band = (0..=main.fft_size() / 2)
            .map(|k| perceptual::bark_band(k as f64 * bin_hz))
            .collect();
        Ok(Self { config, sample_rate_hz, frame_len, main, sub, bark_band })
    }

    /// Extractor sized for the windows of `plan` at `sample_rate_hz`.
    pub fn for_plan(plan: &WindowPlan, sample_rate_hz: u32) -> Result<Self> {
        let (w, _) = plan.lengths(sample_rate_hz)?;
        Self::with_config(sample_rate_hz, w, ExtractorConfig { taper: plan.taper, ..ExtractorConfig::default() })
    }

    pub fn config(&self) -> &ExtractorConfig {
        &self.config
    }

    pub fn frame_len(&self) -> usize {
        self.frame_len
    }

    pub fn sample_rate_hz(&self) -> u32 {
        self.sample_rate_hz
    }

    /// Computes the selected features of one frame. Intermediates shared by
    /// several features are computed once.
    pub fn extract(&self, frame: &Frame<T>, selection: &FeatureSelection) -> Result<FeatureVector<T>> {
        if selection.is_empty() {
            return Err(Error::EmptySelection);
        }
        if frame.len() != self.frame_len || frame.sample_rate_hz != self.sample_rate_hz {
            return Err(Error::InvalidArgument(format!(
                "extractor expects {}-sample frames at {} Hz, got {} samples at {} Hz",
                self.frame_len,
                self.sample_rate_hz,
                frame.len(),
                frame.sample_rate_hz
            )));
        }
        let ctx = FrameContext::new(self, &frame.samples);
        let mut components = Vec::with_capacity(selection.component_ids().len());
        for spec in selection.specs() {
            self.compute(&ctx, spec, &mut components);
        }
        Ok(FeatureVector { window_index: frame.index, start_time_s: frame.start_time_s, components })
    }

    fn compute(&self, ctx: &FrameContext<'_, T>, spec: &'static FeatureSpec, out: &mut Vec<(&'static str, T)>) {
        let value = match spec.feature {
            Feature::AmplitudeEnvelope => time::amplitude_envelope(ctx),
            Feature::Rms => time::rms(ctx),
            Feature::Zcr => time::zcr(ctx),
            Feature::ShortTermEnergy => ctx.energy,
            Feature::TemporalCentroid => time::temporal_centroid(ctx),
            Feature::EnvelopeModulationRate => time::envelope_modulation_rate(ctx),
            Feature::SilenceRatio => time::silence_ratio(ctx),
            Feature::SpectralCentroid => spectral::centroid(ctx),
            Feature::SpectralFlatness => spectral::flatness(ctx),
            Feature::SpectralContrast => spectral::contrast(ctx),
            Feature::SpectralSpread => spectral::spread(ctx),
            Feature::SpectralEntropy => spectral::entropy(ctx),
            Feature::SpectralIrregularity => spectral::irregularity(ctx),
            Feature::SpectralRoughness => spectral::roughness(ctx),
            Feature::Mean => ctx.moments().mean,
            Feature::Variance => ctx.moments().variance,
            Feature::StdDev => ctx.moments().variance.sqrt(),
            Feature::Kurtosis => stats::kurtosis(ctx),
            Feature::Skewness => stats::skewness(ctx),
            Feature::Entropy => stats::amplitude_entropy(ctx),
            Feature::Sharpness => perceptual::sharpness(ctx),
            Feature::Reverberation => perceptual::reverberation(ctx),
            Feature::TonalityIndex => perceptual::tonality_index(ctx),
            Feature::Hnr => voice::hnr(ctx),
            Feature::Jitter => voice::jitter(ctx),
            Feature::Shimmer => voice::shimmer(ctx),
            Feature::GroupDelay => highlevel::group_delay(ctx),
            Feature::WaveletFeatures => {
                let energies = highlevel::wavelet_energies(ctx);
                out.extend(spec.component_ids().iter().copied().zip(energies));
                return;
            }
            Feature::TemporalSpectralSlope => highlevel::temporal_spectral_slope(ctx),
            Feature::TransientToSustained => derived::transient_to_sustained(ctx),
            Feature::SpectralTexture => derived::spectral_texture(ctx),
            Feature::LowBandEnergy => derived::band_fractions(ctx)[0],
            Feature::MidBandEnergy => derived::band_fractions(ctx)[1],
            Feature::HighBandEnergy => derived::band_fractions(ctx)[2],
            Feature::Lh1000 => derived::lh1000(ctx),
        };
        out.push((spec.component_ids()[0], value));
    }
}

/// Extracts `selection` from a single frame with default settings.
pub fn extract_features<T: Real>(frame: &Frame<T>, selection: &FeatureSelection) -> Result<FeatureVector<T>> {
    Extractor::new(frame.sample_rate_hz, frame.len())?.extract(frame, selection)
}

/// Windows `buf` with `plan` and extracts `selection` from every frame.
pub fn extract_stream<T: Real>(
    buf: &AudioBuffer<T>,
    plan: &WindowPlan,
    selection: &FeatureSelection,
) -> Result<Vec<FeatureVector<T>>> {
    let frames = window(buf, plan)?;
    let extractor = Extractor::for_plan(plan, buf.sample_rate_hz())?;
    frames.iter().map(|f| extractor.extract(f, selection)).collect()
}
