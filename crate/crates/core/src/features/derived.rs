//! Composite features built from band energies, flux and spectral shape.

use crate::dsp::dwt;
use crate::scalar::{median, Real};

use super::context::FrameContext;
use super::spectral::LOG_FLOOR;

/// Denominator guard for energy ratios.
const EPS: f64 = 1e-12;
const LOW_BAND_HZ: f64 = 500.0;
const MID_BAND_HZ: f64 = 2000.0;
const SPLIT_HZ: f64 = 1000.0;
const TRANSIENT_MADS: f64 = 3.0;

/// Fractions of spectral power at or below 500 Hz, in (500, 2000] Hz and
/// above 2000 Hz.
pub(crate) fn band_fractions<T: Real>(ctx: &FrameContext<'_, T>) -> [T; 3] {
    ctx.band_fractions()
}

pub(crate) fn compute_band_fractions<T: Real>(ctx: &FrameContext<'_, T>) -> [T; 3] {
    let view = ctx.spectral();
    let (lo, mid) = (T::lit(LOW_BAND_HZ), T::lit(MID_BAND_HZ));
    let mut bands = [T::zero(); 3];
    for (k, &p) in view.power.iter().enumerate() {
        let f = view.spectrum.frequency(k);
        let b = if f <= lo {
            0
        } else if f <= mid {
            1
        } else {
            2
        };
        bands[b] = bands[b] + p;
    }
    let total = view.total_power.max(T::lit(EPS));
    bands.map(|b| b / total)
}

pub(crate) fn lh1000<T: Real>(ctx: &FrameContext<'_, T>) -> T {
    let view = ctx.spectral();
    let split = T::lit(SPLIT_HZ);
    let mut below = T::zero();
    let mut above = T::zero();
    for (k, &p) in view.power.iter().enumerate() {
        if view.spectrum.frequency(k) < split {
            below = below + p;
        } else {
            above = above + p;
        }
    }
    below / above.max(T::lit(EPS))
}

/// Energy of sub-frames whose onset flux is an outlier (beyond median plus
/// three MADs) over the energy of the rest.
pub(crate) fn transient_to_sustained<T: Real>(ctx: &FrameContext<'_, T>) -> T {
    let subs = ctx.subframes();
    if subs.flux.is_empty() {
        return T::zero();
    }
    let med = median(&subs.flux);
    let deviations: Vec<T> = subs.flux.iter().map(|&f| (f - med).abs()).collect();
    let threshold = med + T::lit(TRANSIENT_MADS) * median(&deviations);
    let mut transient = T::zero();
    let mut sustained = subs.energies[0];
    for (&f, &e) in subs.flux.iter().zip(&subs.energies[1..]) {
        if f > threshold {
            transient = transient + e;
        } else {
            sustained = sustained + e;
        }
    }
    transient / sustained.max(T::lit(EPS))
}

/// Mean detail-coefficient spread of a wavelet decomposition of the log
/// magnitude spectrum.
pub(crate) fn spectral_texture<T: Real>(ctx: &FrameContext<'_, T>) -> T {
    if ctx.spectrally_degenerate() {
        return T::zero();
    }
    let mags = &ctx.spectral().spectrum.magnitudes;
    let floor = mags.iter().fold(T::zero(), |m, &v| m.max(v)) * T::lit(LOG_FLOOR);
    let log: Vec<T> = mags.iter().map(|&m| m.max(floor).ln()).collect();
    let levels = ctx.ex.config.texture_levels;
    let Ok(bands) = dwt(&log, levels) else { return T::zero() };
    let stds: Vec<T> = bands[..levels]
        .iter()
        .map(|d| {
            let m = crate::scalar::mean(d);
            (d.iter().map(|&v| (v - m) * (v - m)).sum::<T>() / T::from_count(d.len())).sqrt()
        })
        .collect();
    crate::scalar::mean(&stds)
}
