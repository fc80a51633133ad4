use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::signal::Frame;

pub const DEFAULT_SMOOTHING_MS: f64 = 10.0;

/// Amplitude envelope of a frame, one value per sample.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeSeries<T> {
    pub values: Vec<T>,
    pub smoothing_ms: f64,
}

/// Rectify-and-smooth approximation of the analytic-signal magnitude.
///
/// `|x[n]|` is averaged over a centred moving window of
/// `round(smoothing_ms * fs / 1000)` samples; near the frame edges the window
/// is truncated to the available samples.
pub fn analytic_envelope<T: Real>(frame: &Frame<T>, smoothing_ms: f64) -> Result<EnvelopeSeries<T>> {
    if !(smoothing_ms.is_finite() && smoothing_ms >= 0.0) {
        return Err(Error::InvalidArgument(format!("smoothing_ms must be >= 0, got {smoothing_ms}")));
    }
    let width = (smoothing_ms * f64::from(frame.sample_rate_hz) / 1000.0).round() as usize;
    Ok(EnvelopeSeries { values: smooth_rectified(&frame.samples, width), smoothing_ms })
}

/// Centred moving average of `|x|` over `width` samples.
pub fn smooth_rectified<T: Real>(x: &[T], width: usize) -> Vec<T> {
    let n = x.len();
    if width <= 1 || n == 0 {
        return x.iter().map(|v| v.abs()).collect();
    }
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(T::zero());
    let mut acc = T::zero();
    for v in x {
        acc = acc + v.abs();
        prefix.push(acc);
    }
    let before = (width - 1) / 2;
    let after = width / 2;
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(before);
            let hi = (i + after + 1).min(n);
            // Differences of a monotone prefix sum can dip below zero by an ulp.
            ((prefix[hi] - prefix[lo]) / T::from_count(hi - lo)).max(T::zero())
        })
        .collect()
}
