//! Rational-ratio windowed-sinc resampler.
//!
//! Each output sample is a 64-tap Kaiser-windowed sinc interpolation of the
//! input around the output instant. For ratios with a manageable numerator
//! the per-phase kernels are tabulated once; each phase is normalized to unit
//! DC gain so constant signals pass through unchanged.

use crate::error::Result;
use crate::scalar::Real;

use super::AudioBuffer;

const TAPS: usize = 64;
const HALF: i64 = (TAPS / 2) as i64;
const KAISER_BETA: f64 = 5.65;
// Stopband attenuation reached with `KAISER_BETA`, in dB.
const STOPBAND_DB: f64 = 60.0;
const MAX_TABULATED_PHASES: u64 = 4096;

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Zeroth-order modified Bessel function of the first kind.
fn bessel_i0(x: f64) -> f64 {
    let q = x * x / 4.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        term *= q / (k as f64 * k as f64);
        sum += term;
        if term < sum * 1e-17 {
            break;
        }
    }
    sum
}

struct Kernel {
    cutoff: f64,
    i0_beta: f64,
}

impl Kernel {
    fn new(ratio: f64) -> Self {
        // Kaiser design rule for the transition width of a TAPS-long filter.
        let transition = (STOPBAND_DB - 7.95) / (2.285 * (TAPS as f64 - 1.0)) / (2.0 * std::f64::consts::PI);
        let nyquist = 0.5 * ratio.min(1.0);
        let cutoff = (nyquist - transition / 2.0).max(nyquist * 0.5);
        Self { cutoff, i0_beta: bessel_i0(KAISER_BETA) }
    }

    /// Impulse response at offset `tau` input samples from the output instant.
    fn at(&self, tau: f64) -> f64 {
        let u = tau / HALF as f64;
        if u.abs() > 1.0 {
            return 0.0;
        }
        let window = bessel_i0(KAISER_BETA * (1.0 - u * u).sqrt()) / self.i0_beta;
        let x = 2.0 * self.cutoff * tau;
        let sinc = if x.abs() < 1e-12 { 1.0 } else { (std::f64::consts::PI * x).sin() / (std::f64::consts::PI * x) };
        2.0 * self.cutoff * sinc * window
    }

    /// Normalized taps for offsets -31..=32 relative to the floor sample.
    fn phase(&self, frac: f64) -> [f64; TAPS] {
        let mut taps = [0.0; TAPS];
        for (slot, j) in taps.iter_mut().zip(-(HALF - 1)..=HALF) {
            *slot = self.at(j as f64 - frac);
        }
        let sum: f64 = taps.iter().sum();
        taps.iter_mut().for_each(|t| *t /= sum);
        taps
    }
}

/// Resamples `buf` to `target_hz`.
///
/// The output holds `ceil(n * target / source)` samples. Edges are handled by
/// replicating the first and last input samples. Identity when the rates
/// already match.
pub fn resample<T: Real>(buf: &AudioBuffer<T>, target_hz: u32) -> Result<AudioBuffer<T>> {
    let source_hz = buf.sample_rate_hz();
    if target_hz == 0 {
        return Err(crate::Error::InvalidArgument("target rate must be positive".into()));
    }
    if target_hz == source_hz || buf.is_empty() {
        return Ok(AudioBuffer { samples: buf.samples().to_vec(), sample_rate_hz: target_hz });
    }
    let g = gcd(u64::from(source_hz), u64::from(target_hz));
    let up = u64::from(target_hz) / g;
    let down = u64::from(source_hz) / g;
    let n_in = buf.len() as u64;
    let n_out = (n_in * up).div_ceil(down) as usize;

    let kernel = Kernel::new(f64::from(target_hz) / f64::from(source_hz));
    let table: Option<Vec<[f64; TAPS]>> = (up <= MAX_TABULATED_PHASES)
        .then(|| (0..up).map(|p| kernel.phase(p as f64 / up as f64)).collect());

    let x: Vec<f64> = buf.samples().iter().map(|s| s.to_f64_lossy()).collect();
    let last = x.len() as i64 - 1;
    let mut out = Vec::with_capacity(n_out);
    for m in 0..n_out as u64 {
        let pos = m * down;
        let base = (pos / up) as i64;
        let phase = pos % up;
        let computed;
        let taps = match &table {
            Some(t) => &t[phase as usize],
            None => {
                computed = kernel.phase(phase as f64 / up as f64);
                &computed
            }
        };
        let start = base - (HALF - 1);
        let mut acc = 0.0;
        if start >= 0 && start + TAPS as i64 - 1 <= last {
            let s = start as usize;
            for (t, v) in taps.iter().zip(&x[s..s + TAPS]) {
                acc += t * v;
            }
        } else {
            for (k, t) in taps.iter().enumerate() {
                let idx = (start + k as i64).clamp(0, last) as usize;
                acc += t * x[idx];
            }
        }
        out.push(T::lit(acc.clamp(-1.0, 1.0)));
    }
    Ok(AudioBuffer { samples: out, sample_rate_hz: target_hz })
}
