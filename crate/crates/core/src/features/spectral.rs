//! Features of the Hann-tapered whole-frame spectrum.

use crate::dsp::spectral_peaks;
use crate::scalar::Real;

use super::context::FrameContext;

/// Relative floor keeping logarithms of empty bins finite without breaking
/// level invariance.
pub(crate) const LOG_FLOOR: f64 = 1e-10;

const CONTRAST_EDGES_HZ: [f64; 7] = [0.0, 200.0, 400.0, 800.0, 1600.0, 3200.0, 6400.0];

// Dissonance curve constants.
const SETHARES_B1: f64 = 3.5;
const SETHARES_B2: f64 = 5.75;
const SETHARES_S1: f64 = 0.0207;
const SETHARES_S2: f64 = 18.96;
const SETHARES_DSTAR: f64 = 0.24;

pub(crate) fn centroid<T: Real>(ctx: &FrameContext<'_, T>) -> T {
    if ctx.spectrally_degenerate() {
        return T::zero();
    }
    let view = ctx.spectral();
    let weighted: T = view.power.iter().enumerate().map(|(k, &p)| view.spectrum.frequency(k) * p).sum();
    weighted / view.total_power
}

pub(crate) fn flatness<T: Real>(ctx: &FrameContext<'_, T>) -> T {
    ctx.flatness()
}

pub(crate) fn compute_flatness<T: Real>(ctx: &FrameContext<'_, T>) -> T {
    if ctx.spectrally_degenerate() {
        return T::one();
    }
    let power = &ctx.spectral().power;
    let max = power.iter().fold(T::zero(), |m, &p| m.max(p));
    let floor = max * T::lit(1e-20);
    let n = T::from_count(power.len());
    let log_mean = power.iter().map(|&p| p.max(floor).ln()).sum::<T>() / n;
    let mean = power.iter().map(|&p| p.max(floor)).sum::<T>() / n;
    (log_mean.exp() / mean).min(T::one())
}

pub(crate) fn contrast<T: Real>(ctx: &FrameContext<'_, T>) -> T {
    if ctx.spectrally_degenerate() {
        return T::zero();
    }
    let spec = &ctx.spectral().spectrum;
    let max = spec.magnitudes.iter().fold(T::zero(), |m, &v| m.max(v));
    let floor = max * T::lit(LOG_FLOOR);
    let q = ctx.ex.config.contrast_quantile;
    let mut total = T::zero();
    let mut bands = 0usize;
    let mut db = Vec::new();
    for edge in CONTRAST_EDGES_HZ.windows(2) {
        let (lo, hi) = (T::lit(edge[0]), T::lit(edge[1]));
        db.clear();
        db.extend(
            spec.magnitudes
                .iter()
                .enumerate()
                .filter(|&(k, _)| {
                    let f = spec.frequency(k);
                    f >= lo && f < hi
                })
                .map(|(_, &m)| T::lit(20.0) * m.max(floor).log10()),
        );
        if db.is_empty() {
            continue;
        }
        db.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        let take = ((q * db.len() as f64).round() as usize).clamp(1, db.len());
        let count = T::from_count(take);
        let bottom = db[..take].iter().copied().sum::<T>() / count;
        let top = db[db.len() - take..].iter().copied().sum::<T>() / count;
        total = total + (top - bottom);
        bands += 1;
    }
    if bands == 0 {
        T::zero()
    } else {
        total / T::from_count(bands)
    }
}

pub(crate) fn spread<T: Real>(ctx: &FrameContext<'_, T>) -> T {
    if ctx.spectrally_degenerate() {
        return T::zero();
    }
    let c = centroid(ctx);
    let view = ctx.spectral();
    let var: T = view
        .power
        .iter()
        .enumerate()
        .map(|(k, &p)| {
            let d = view.spectrum.frequency(k) - c;
            d * d * p
        })
        .sum();
    (var / view.total_power).sqrt()
}

pub(crate) fn entropy<T: Real>(ctx: &FrameContext<'_, T>) -> T {
    if ctx.spectrally_degenerate() {
        return T::zero();
    }
    let view = ctx.spectral();
    let h: T = view
        .power
        .iter()
        .filter(|&&p| p > T::zero())
        .map(|&p| {
            let q = p / view.total_power;
            -q * q.ln()
        })
        .sum();
    (h / T::from_count(view.power.len()).ln()).max(T::zero()).min(T::one())
}

pub(crate) fn irregularity<T: Real>(ctx: &FrameContext<'_, T>) -> T {
    if ctx.spectrally_degenerate() {
        return T::zero();
    }
    let m = &ctx.spectral().spectrum.magnitudes;
    let num: T = m.windows(2).map(|w| (w[0] - w[1]) * (w[0] - w[1])).sum();
    num / crate::scalar::energy(m)
}

/// Pairwise dissonance of the strongest spectral peaks, with peak magnitudes
/// converted to sinusoid amplitudes.
pub(crate) fn roughness<T: Real>(ctx: &FrameContext<'_, T>) -> T {
    if ctx.spectrally_degenerate() {
        return T::zero();
    }
    let cfg = &ctx.ex.config;
    let spec = &ctx.spectral().spectrum;
    let gain = T::lit(2.0) / ctx.ex.main.taper().iter().copied().sum::<T>();
    let peaks = spectral_peaks(spec, cfg.roughness_peaks, T::lit(cfg.roughness_prominence_db));
    let mut total = T::zero();
    for (i, a) in peaks.iter().enumerate() {
        for b in &peaks[i + 1..] {
            let f_min = a.freq_hz.min(b.freq_hz);
            let df = (a.freq_hz - b.freq_hz).abs();
            let s = T::lit(SETHARES_DSTAR) / (T::lit(SETHARES_S1) * f_min + T::lit(SETHARES_S2));
            let d = (-T::lit(SETHARES_B1) * s * df).exp() - (-T::lit(SETHARES_B2) * s * df).exp();
            total = total + d * a.magnitude * gain * b.magnitude * gain;
        }
    }
    total
}
