//! Psychoacoustically weighted features.

use crate::scalar::Real;

use super::context::FrameContext;

pub(crate) const BARK_BANDS: usize = 24;

/// Reverberation fit stops once the envelope falls this far below its peak.
const DECAY_FLOOR: f64 = 1e-3;

/// Critical band (0-based) containing frequency `f` Hz.
pub(crate) fn bark_band(f: f64) -> usize {
    let z = 13.0 * (0.00076 * f).atan() + 3.5 * (f / 7500.0).powi(2).atan();
    (z.floor().max(0.0) as usize).min(BARK_BANDS - 1)
}

fn sharpness_weight<T: Real>(z: T) -> T {
    if z <= T::lit(14.0) {
        T::one()
    } else {
        let z2 = z * z;
        T::lit(0.00012) * z2 * z2 - T::lit(0.0056) * z2 * z + T::lit(0.1) * z2 - T::lit(0.81) * z + T::lit(3.5)
    }
}

pub(crate) fn sharpness<T: Real>(ctx: &FrameContext<'_, T>) -> T {
    if ctx.spectrally_degenerate() {
        return T::zero();
    }
    let mut band_power = [T::zero(); BARK_BANDS];
    for (&b, &p) in ctx.ex.bark_band.iter().zip(&ctx.spectral().power) {
        band_power[b] = band_power[b] + p;
    }
    let mut num = T::zero();
    let mut den = T::zero();
    for (b, &p) in band_power.iter().enumerate() {
        let s = p.powf(T::lit(0.23));
        let z = T::from_count(b + 1);
        num = num + s * sharpness_weight(z) * z;
        den = den + s;
    }
    num / den
}

/// Decay rate in dB/s of the envelope after its maximum.
pub(crate) fn reverberation<T: Real>(ctx: &FrameContext<'_, T>) -> T {
    if ctx.degenerate {
        return T::zero();
    }
    let env = ctx.envelope();
    let (peak_at, peak) = env
        .iter()
        .enumerate()
        .fold((0, T::zero()), |best, (i, &v)| if v > best.1 { (i, v) } else { best });
    if !(peak > T::zero()) {
        return T::zero();
    }
    let stop = peak * T::lit(DECAY_FLOOR);
    let end = env[peak_at..].iter().position(|&v| v < stop).map_or(env.len(), |p| peak_at + p);
    if end - peak_at < 2 {
        return T::zero();
    }
    let times: Vec<T> = (peak_at..end).map(|i| T::from_count(i) / ctx.fs).collect();
    let levels: Vec<T> = env[peak_at..end].iter().map(|&v| T::lit(20.0) * (v / peak).log10()).collect();
    -crate::scalar::ls_slope(&times, &levels)
}

pub(crate) fn tonality_index<T: Real>(ctx: &FrameContext<'_, T>) -> T {
    let sfm_db = T::lit(10.0) * ctx.flatness().log10();
    (sfm_db / T::lit(-60.0)).max(T::zero()).min(T::one())
}
