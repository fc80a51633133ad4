use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::signal::{Frame, Taper};

use super::SpectrumAnalyzer;

pub const DEFAULT_SUBFRAME_MS: f64 = 50.0;

/// Positive spectral flux between consecutive non-overlapping sub-frames.
///
/// Each sub-frame is Hann-tapered; `flux[j-1] = Σ_k max(0, M_j[k] - M_{j-1}[k])`
/// for `j = 1..J`. Samples after the last whole sub-frame are ignored.
pub fn subframe_flux<T: Real>(frame: &Frame<T>, subframe_ms: f64) -> Result<Vec<T>> {
    if !(subframe_ms.is_finite() && subframe_ms >= 5.0) {
        return Err(Error::InvalidArgument(format!("subframe_ms must be >= 5, got {subframe_ms}")));
    }
    let len = (subframe_ms * f64::from(frame.sample_rate_hz) / 1000.0).round() as usize;
    if len < 2 || frame.len() < 2 * len {
        return Err(Error::FrameTooShort { len: frame.len(), min: 2 * len.max(2) });
    }
    let analyzer = SpectrumAnalyzer::with_min_len(len, Taper::Hann, 2)?;
    let spectra = frame
        .samples
        .chunks_exact(len)
        .map(|chunk| analyzer.magnitudes(chunk))
        .collect::<Result<Vec<_>>>()?;
    Ok(flux_from_spectra(&spectra))
}

/// Positive flux between consecutive magnitude spectra.
pub fn flux_from_spectra<T: Real>(spectra: &[Vec<T>]) -> Vec<T> {
    spectra
        .windows(2)
        .map(|w| w[1].iter().zip(&w[0]).map(|(&b, &a)| (b - a).max(T::zero())).sum())
        .collect()
}
