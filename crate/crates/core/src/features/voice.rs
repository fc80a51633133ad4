//! Periodicity features from autocorrelation over the pitch lag range.

use crate::dsp::{parabolic_offset, segment_autocorrelation, Autocorrelation};
use crate::scalar::Real;

use super::context::FrameContext;

const HNR_FLOOR_DB: f64 = -20.0;
const HNR_CEIL_DB: f64 = 40.0;
/// A local maximum this close to the global one is preferred as the period,
/// which suppresses picking a multiple of the true period.
const PERIOD_PEAK_RATIO: f64 = 0.95;
const MIN_VOICED: usize = 3;

#[derive(Debug, Clone, Copy)]
pub(crate) struct VoicedSub<T> {
    pub period_s: T,
    pub amplitude: T,
}

pub(crate) struct VoiceTrack<T> {
    pub subframes: Vec<Option<VoicedSub<T>>>,
}

fn lag_range<T: Real>(ctx: &FrameContext<'_, T>, span: usize) -> Option<(usize, usize)> {
    let cfg = &ctx.ex.config;
    let fs = f64::from(ctx.ex.sample_rate_hz);
    let min = ((fs / cfg.pitch_max_hz).round() as usize).max(1);
    let max = ((fs / cfg.pitch_min_hz).round() as usize).min(span.saturating_sub(1));
    (min < max).then_some((min, max))
}

fn segment_corr<T: Real>(x: &[T], start: usize, width: usize, lags: (usize, usize)) -> Option<Autocorrelation<T>> {
    segment_autocorrelation(x, start, width, lags.0, lags.1).ok()
}

/// Fractional period in samples: the earliest local maximum that comes within
/// `PERIOD_PEAK_RATIO` of the global maximum.
fn period_lag<T: Real>(ac: &Autocorrelation<T>) -> T {
    let (best_lag, best) = ac.peak();
    let v = &ac.values;
    let threshold = best * T::lit(PERIOD_PEAK_RATIO);
    for i in 1..v.len().saturating_sub(1) {
        if v[i] >= threshold && v[i] >= v[i - 1] && v[i] >= v[i + 1] {
            return T::from_count(ac.min_lag + i) + parabolic_offset(v[i - 1], v[i], v[i + 1]);
        }
    }
    T::from_count(best_lag)
}

pub(crate) fn track<T: Real>(ctx: &FrameContext<'_, T>) -> VoiceTrack<T> {
    let x = ctx.x;
    let n = x.len();
    let cfg = &ctx.ex.config;
    if ctx.degenerate {
        return VoiceTrack { subframes: Vec::new() };
    }

    let width = ((cfg.voice_subframe_ms * f64::from(ctx.ex.sample_rate_hz) / 1000.0).round() as usize).max(2);
    let mut subframes = Vec::new();
    if let Some(lags) = lag_range(ctx, n.saturating_sub(width)) {
        let voicing = T::lit(cfg.voicing_threshold);
        let peak = x.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        let min_rms = T::lit(cfg.voicing_min_rms) * peak;
        let mut start = 0;
        while start + width + lags.1 <= n {
            let seg = &x[start..start + width];
            let rms = (crate::scalar::energy(seg) / T::from_count(width)).sqrt();
            let voiced = if rms > min_rms {
                segment_corr(x, start, width, lags).and_then(|ac| {
                    (ac.peak().1 > voicing).then(|| VoicedSub {
                        period_s: period_lag(&ac) / ctx.fs,
                        amplitude: seg.iter().fold(T::zero(), |m, v| m.max(v.abs())),
                    })
                })
            } else {
                None
            };
            subframes.push(voiced);
            start += width;
        }
    }
    VoiceTrack { subframes }
}

pub(crate) fn hnr<T: Real>(ctx: &FrameContext<'_, T>) -> T {
    let floor = T::lit(HNR_FLOOR_DB);
    if ctx.degenerate {
        return floor;
    }
    let Some(lags) = lag_range(ctx, ctx.x.len()) else { return floor };
    let frame = crate::signal::Frame::new(ctx.x.to_vec(), ctx.ex.sample_rate_hz);
    let Ok(ac) = crate::dsp::autocorrelation(&frame, lags.0, lags.1) else { return floor };
    let r = ac.peak().1;
    if !(r > T::zero()) {
        return floor;
    }
    if r >= T::one() {
        return T::lit(HNR_CEIL_DB);
    }
    (T::lit(10.0) * (r / (T::one() - r)).log10()).max(floor).min(T::lit(HNR_CEIL_DB))
}

/// Mean absolute difference between adjacent voiced values relative to the
/// mean over all voiced sub-frames.
fn perturbation<T: Real>(track: &VoiceTrack<T>, value: impl Fn(&VoicedSub<T>) -> T) -> T {
    let voiced: Vec<T> = track.subframes.iter().flatten().map(&value).collect();
    if voiced.len() < MIN_VOICED {
        return T::zero();
    }
    let diffs: Vec<T> = track
        .subframes
        .windows(2)
        .filter_map(|w| match (&w[0], &w[1]) {
            (Some(a), Some(b)) => Some((value(a) - value(b)).abs()),
            _ => None,
        })
        .collect();
    let mean = crate::scalar::mean(&voiced);
    if diffs.is_empty() || !(mean > T::zero()) {
        return T::zero();
    }
    crate::scalar::mean(&diffs) / mean
}

pub(crate) fn jitter<T: Real>(ctx: &FrameContext<'_, T>) -> T {
    perturbation(ctx.voice(), |v| v.period_s)
}

pub(crate) fn shimmer<T: Real>(ctx: &FrameContext<'_, T>) -> T {
    perturbation(ctx.voice(), |v| v.amplitude)
}
