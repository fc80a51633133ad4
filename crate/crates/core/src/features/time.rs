//! Time-domain features on the raw (untapered) frame.

use crate::scalar::Real;

use super::context::FrameContext;

pub(crate) fn amplitude_envelope<T: Real>(ctx: &FrameContext<'_, T>) -> T {
    ctx.x.iter().fold(T::zero(), |m, v| m.max(v.abs()))
}

pub(crate) fn rms<T: Real>(ctx: &FrameContext<'_, T>) -> T {
    (ctx.energy / ctx.n()).sqrt()
}

/// Sign changes per sample pair. Zero counts as positive so that a sampled
/// zero crossing is never counted twice.
pub(crate) fn zcr<T: Real>(ctx: &FrameContext<'_, T>) -> T {
    let changes = ctx.x.windows(2).filter(|w| (w[0] >= T::zero()) != (w[1] >= T::zero())).count();
    T::from_count(changes) / T::from_count(ctx.x.len() - 1)
}

pub(crate) fn temporal_centroid<T: Real>(ctx: &FrameContext<'_, T>) -> T {
    if ctx.degenerate {
        return T::zero();
    }
    let weighted: T = ctx.x.iter().enumerate().map(|(i, &v)| T::from_count(i) * v * v).sum();
    weighted / ctx.energy / ctx.n()
}

pub(crate) fn envelope_modulation_rate<T: Real>(ctx: &FrameContext<'_, T>) -> T {
    let env = ctx.envelope();
    if env.len() < 2 {
        return T::zero();
    }
    let total: T = env.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
    ctx.fs * total / T::from_count(env.len() - 1)
}

pub(crate) fn silence_ratio<T: Real>(ctx: &FrameContext<'_, T>) -> T {
    let cfg = &ctx.ex.config;
    let len = ((cfg.silence_subframe_ms * f64::from(ctx.ex.sample_rate_hz) / 1000.0).round() as usize)
        .clamp(1, ctx.x.len());
    let threshold = T::lit(cfg.silence_threshold);
    let mut total = 0usize;
    let mut silent = 0usize;
    for chunk in ctx.x.chunks_exact(len) {
        total += 1;
        let rms = (crate::scalar::energy(chunk) / T::from_count(len)).sqrt();
        if rms < threshold {
            silent += 1;
        }
    }
    T::from_count(silent) / T::from_count(total)
}
