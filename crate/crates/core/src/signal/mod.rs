//! Audio ingestion: decoding, resampling and sliding-window framing.

mod resample;
mod wav;

pub use resample::resample;
pub use wav::{decode_wav, encode_wav_f32, encode_wav_pcm16};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Smallest window (in samples) the kernels accept.
pub const MIN_WINDOW_SAMPLES: usize = 32;

/// Decoded mono audio with its sample rate.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioBuffer<T> {
    samples: Vec<T>,
    sample_rate_hz: u32,
}

impl<T: Real> AudioBuffer<T> {
    /// Builds a buffer, rejecting a zero rate and samples outside `[-1, 1]`.
    pub fn new(samples: Vec<T>, sample_rate_hz: u32) -> Result<Self> {
        if sample_rate_hz == 0 {
            return Err(Error::InvalidArgument("sample rate must be positive".into()));
        }
        if let Some(bad) = samples.iter().find(|s| !s.is_finite() || s.abs() > T::one()) {
            return Err(Error::InvalidArgument(format!(
                "sample {bad} outside [-1, 1]"
            )));
        }
        Ok(Self { samples, sample_rate_hz })
    }

    /// Builds a buffer, clamping out-of-range samples to `[-1, 1]` and
    /// replacing non-finite ones with zero.
    pub fn clamped(samples: Vec<T>, sample_rate_hz: u32) -> Result<Self> {
        let samples = samples
            .into_iter()
            .map(|s| if s.is_finite() { s.max(-T::one()).min(T::one()) } else { T::zero() })
            .collect();
        Self::new(samples, sample_rate_hz)
    }

    pub fn samples(&self) -> &[T] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<T> {
        self.samples
    }

    pub fn sample_rate_hz(&self) -> u32 {
        self.sample_rate_hz
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / f64::from(self.sample_rate_hz)
    }
}

/// Taper applied before a spectral transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Taper {
    Rectangular,
    #[default]
    Hann,
}

impl Taper {
    /// Window coefficients of length `n`. Hann is the periodic form.
    pub fn coefficients<T: Real>(self, n: usize) -> Vec<T> {
        match self {
            Taper::Rectangular => vec![T::one(); n],
            Taper::Hann => {
                let two_pi = T::lit(2.0) * T::PI();
                let nn = T::from_count(n.max(1));
                (0..n)
                    .map(|i| T::lit(0.5) - T::lit(0.5) * (two_pi * T::from_count(i) / nn).cos())
                    .collect()
            }
        }
    }
}

/// Sliding-window configuration.
///
/// `taper` is the window used by the spectral features; frames themselves are
/// always emitted untapered.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowPlan {
    pub window_ms: f64,
    pub hop_ms: f64,
    pub taper: Taper,
}

impl Default for WindowPlan {
    fn default() -> Self {
        Self { window_ms: 500.0, hop_ms: 250.0, taper: Taper::Hann }
    }
}

impl WindowPlan {
    /// A plan with hop equal to half the window.
    pub fn with_window_ms(window_ms: f64) -> Self {
        Self { window_ms, hop_ms: window_ms / 2.0, ..Self::default() }
    }

    /// Window and hop lengths in samples at `sample_rate_hz`.
    pub fn lengths(&self, sample_rate_hz: u32) -> Result<(usize, usize)> {
        if !(self.window_ms.is_finite() && self.window_ms > 0.0) {
            return Err(Error::InvalidPlan(format!("window_ms must be positive, got {}", self.window_ms)));
        }
        if !(self.hop_ms.is_finite() && self.hop_ms > 0.0 && self.hop_ms <= self.window_ms) {
            return Err(Error::InvalidPlan(format!(
                "hop_ms must lie in (0, window_ms], got {}",
                self.hop_ms
            )));
        }
        if sample_rate_hz == 0 {
            return Err(Error::InvalidPlan("sample rate must be positive".into()));
        }
        let fs = f64::from(sample_rate_hz);
        let window = (self.window_ms * fs / 1000.0).round() as usize;
        let hop = ((self.hop_ms * fs / 1000.0).round() as usize).max(1);
        if window < MIN_WINDOW_SAMPLES {
            return Err(Error::InvalidPlan(format!(
                "window of {window} samples is below the {MIN_WINDOW_SAMPLES}-sample minimum"
            )));
        }
        Ok((window, hop.min(window)))
    }

    /// Number of full windows that fit in `n_samples`.
    pub fn frame_count(&self, n_samples: usize, sample_rate_hz: u32) -> Result<usize> {
        let (w, h) = self.lengths(sample_rate_hz)?;
        if n_samples < w {
            return Err(Error::BufferTooShort { len: n_samples, window: w });
        }
        Ok((n_samples - w) / h + 1)
    }
}

/// One analysis window.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame<T> {
    pub samples: Vec<T>,
    pub index: usize,
    pub start_time_s: f64,
    pub sample_rate_hz: u32,
}

impl<T: Real> Frame<T> {
    /// A standalone frame with index 0.
    pub fn new(samples: Vec<T>, sample_rate_hz: u32) -> Self {
        Self { samples, index: 0, start_time_s: 0.0, sample_rate_hz }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// The same frame with every sample multiplied by `c`.
    pub fn scaled(&self, c: T) -> Self {
        Self { samples: self.samples.iter().map(|&x| x * c).collect(), ..self.clone() }
    }
}

/// Cuts `buf` into full windows; the trailing partial window is dropped.
pub fn window<T: Real>(buf: &AudioBuffer<T>, plan: &WindowPlan) -> Result<Vec<Frame<T>>> {
    let fs = buf.sample_rate_hz();
    let (w, h) = plan.lengths(fs)?;
    let count = plan.frame_count(buf.len(), fs)?;
    Ok((0..count)
        .map(|index| {
            let start = index * h;
            Frame {
                samples: buf.samples()[start..start + w].to_vec(),
                index,
                start_time_s: index as f64 * plan.hop_ms / 1000.0,
                sample_rate_hz: fs,
            }
        })
        .collect())
}
