//! Phase, multi-resolution and trajectory features.

use crate::dsp::dwt;
use crate::scalar::Real;

use super::context::FrameContext;

const GROUP_DELAY_LO_HZ: f64 = 100.0;
const GROUP_DELAY_HI_HZ: f64 = 6000.0;

fn wrap_phase<T: Real>(p: T) -> T {
    let two_pi = T::TAU();
    let mut w = p % two_pi;
    if w > T::PI() {
        w = w - two_pi;
    } else if w <= -T::PI() {
        w = w + two_pi;
    }
    w
}

/// Mean of `-dφ/dω` between adjacent bins in 100 Hz to 6 kHz, in seconds.
pub(crate) fn group_delay<T: Real>(ctx: &FrameContext<'_, T>) -> T {
    if ctx.spectrally_degenerate() {
        return T::zero();
    }
    let spec = &ctx.spectral().spectrum;
    let (lo, hi) = (T::lit(GROUP_DELAY_LO_HZ), T::lit(GROUP_DELAY_HI_HZ));
    let dw = T::TAU() * spec.bin_hz;
    let mut sum = T::zero();
    let mut count = 0usize;
    for k in 0..spec.bins().saturating_sub(1) {
        let (f0, f1) = (spec.frequency(k), spec.frequency(k + 1));
        if f0 < lo || f1 > hi {
            continue;
        }
        sum = sum - wrap_phase(spec.phases[k + 1] - spec.phases[k]) / dw;
        count += 1;
    }
    if count == 0 {
        T::zero()
    } else {
        sum / T::from_count(count)
    }
}

pub(crate) fn wavelet_energies<T: Real>(ctx: &FrameContext<'_, T>) -> Vec<T> {
    let levels = ctx.ex.config.dwt_levels;
    let mut out = vec![T::zero(); levels + 1];
    out[levels] = T::one();
    let Ok(bands) = dwt(ctx.x, levels) else { return out };
    let energies: Vec<T> = bands.iter().map(|b| crate::scalar::energy(b)).collect();
    let total: T = energies.iter().copied().sum();
    if total > T::zero() {
        for (o, e) in out.iter_mut().zip(energies) {
            *o = e / total;
        }
    }
    out
}

/// Least-squares slope (Hz/s) of the sub-frame spectral centroid against the
/// sub-frame centre time. Near-silent sub-frames are left out.
pub(crate) fn temporal_spectral_slope<T: Real>(ctx: &FrameContext<'_, T>) -> T {
    if ctx.degenerate {
        return T::zero();
    }
    let subs = ctx.subframes();
    let bin_hz = ctx.fs / T::from_count(ctx.ex.sub.fft_size());
    let floor = ctx.energy * T::lit(1e-12);
    let mut times = Vec::new();
    let mut centroids = Vec::new();
    for (j, (mags, &e)) in subs.magnitudes.iter().zip(&subs.energies).enumerate() {
        if !(e > floor) {
            continue;
        }
        let mut num = T::zero();
        let mut den = T::zero();
        for (k, &m) in mags.iter().enumerate() {
            let p = m * m;
            num = num + T::from_count(k) * bin_hz * p;
            den = den + p;
        }
        if den > T::zero() {
            times.push((T::from_count(j * subs.len) + T::from_count(subs.len) / T::lit(2.0)) / ctx.fs);
            centroids.push(num / den);
        }
    }
    crate::scalar::ls_slope(&times, &centroids)
}
