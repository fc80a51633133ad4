//! Moment and histogram statistics of the raw samples.

use crate::scalar::Real;

use super::context::FrameContext;

const HISTOGRAM_BINS: usize = 64;

/// Fisher excess kurtosis; 0 for a constant frame.
pub(crate) fn kurtosis<T: Real>(ctx: &FrameContext<'_, T>) -> T {
    let m = ctx.moments();
    if !(m.variance > T::zero()) {
        return T::zero();
    }
    m.m4 / (m.variance * m.variance) - T::lit(3.0)
}

pub(crate) fn skewness<T: Real>(ctx: &FrameContext<'_, T>) -> T {
    let m = ctx.moments();
    if !(m.variance > T::zero()) {
        return T::zero();
    }
    m.m3 / m.variance.powf(T::lit(1.5))
}

/// Normalized Shannon entropy of a 64-bin histogram spanning the observed
/// sample range, so the value does not depend on the recording level.
pub(crate) fn amplitude_entropy<T: Real>(ctx: &FrameContext<'_, T>) -> T {
    let (lo, hi) = ctx
        .x
        .iter()
        .fold((T::infinity(), T::neg_infinity()), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let range = hi - lo;
    if !(range > T::zero()) {
        return T::zero();
    }
    let bins = T::from_count(HISTOGRAM_BINS);
    let mut counts = [0usize; HISTOGRAM_BINS];
    for &v in ctx.x {
        let idx = ((v - lo) / range * bins).floor().to_usize().unwrap_or(0).min(HISTOGRAM_BINS - 1);
        counts[idx] += 1;
    }
    let n = ctx.n();
    let h: T = counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = T::from_count(c) / n;
            -p * p.ln()
        })
        .sum();
    h / bins.ln()
}
