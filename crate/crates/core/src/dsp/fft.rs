use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::signal::{Frame, Taper, MIN_WINDOW_SAMPLES};

/// One-sided spectrum of a (tapered, zero-padded) frame.
///
/// Magnitudes are raw DFT magnitudes, not normalized by the FFT size.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T> {
    pub magnitudes: Vec<T>,
    pub phases: Vec<T>,
    pub bin_hz: T,
    pub fft_size: usize,
}

impl<T: Real> Spectrum<T> {
    pub fn bins(&self) -> usize {
        self.magnitudes.len()
    }

    pub fn frequency(&self, bin: usize) -> T {
        T::from_count(bin) * self.bin_hz
    }

    /// Squared magnitudes.
    pub fn power(&self) -> Vec<T> {
        self.magnitudes.iter().map(|&m| m * m).collect()
    }

    /// Time-domain energy implied by the one-sided spectrum (Parseval, with
    /// interior bins counted twice).
    pub fn parseval_energy(&self) -> T {
        let last = self.bins() - 1;
        let sum: T = self
            .magnitudes
            .iter()
            .enumerate()
            .map(|(k, &m)| if k == 0 || k == last { m * m } else { T::lit(2.0) * m * m })
            .sum();
        sum / T::from_count(self.fft_size)
    }
}

/// Planned forward/inverse transforms plus taper for a fixed frame length.
///
/// Plans are immutable after construction and can be shared between threads.
#[derive(Clone)]
pub struct SpectrumAnalyzer<T: Real> {
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
    window: Vec<T>,
    frame_len: usize,
    fft_size: usize,
}

impl<T: Real> std::fmt::Debug for SpectrumAnalyzer<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectrumAnalyzer")
            .field("frame_len", &self.frame_len)
            .field("fft_size", &self.fft_size)
            .finish()
    }
}

impl<T: Real> SpectrumAnalyzer<T> {
    pub fn new(frame_len: usize, taper: Taper) -> Result<Self> {
        Self::with_min_len(frame_len, taper, MIN_WINDOW_SAMPLES)
    }

    /// Like [`SpectrumAnalyzer::new`] with a custom lower bound, for short
    /// sub-frame analysis.
    pub(crate) fn with_min_len(frame_len: usize, taper: Taper, min: usize) -> Result<Self> {
        if frame_len < min.max(2) {
            return Err(Error::FrameTooShort { len: frame_len, min: min.max(2) });
        }
        let fft_size = frame_len.next_power_of_two();
        let mut planner = FftPlanner::new();
        Ok(Self {
            forward: planner.plan_fft_forward(fft_size),
            inverse: planner.plan_fft_inverse(fft_size),
            window: taper.coefficients(frame_len),
            frame_len,
            fft_size,
        })
    }

    pub fn frame_len(&self) -> usize {
        self.frame_len
    }

    pub fn fft_size(&self) -> usize {
        self.fft_size
    }

    pub fn taper(&self) -> &[T] {
        &self.window
    }

    fn transform(&self, samples: &[T]) -> Result<Vec<Complex<T>>> {
        if samples.len() != self.frame_len {
            return Err(Error::InvalidArgument(format!(
                "analyzer planned for {} samples, got {}",
                self.frame_len,
                samples.len()
            )));
        }
        let mut buf = vec![Complex::new(T::zero(), T::zero()); self.fft_size];
        for ((slot, &x), &w) in buf.iter_mut().zip(samples).zip(&self.window) {
            slot.re = x * w;
        }
        self.forward.process(&mut buf);
        Ok(buf)
    }

    /// Magnitude/phase spectrum of `samples` sampled at `sample_rate_hz`.
    pub fn analyze(&self, samples: &[T], sample_rate_hz: u32) -> Result<Spectrum<T>> {
        let buf = self.transform(samples)?;
        let bins = self.fft_size / 2 + 1;
        let mut magnitudes = Vec::with_capacity(bins);
        let mut phases = Vec::with_capacity(bins);
        for (k, c) in buf[..bins].iter().enumerate() {
            magnitudes.push(c.norm());
            // DC and Nyquist are real for real input; drop round-off imaginary parts.
            let phase = if k == 0 || k == bins - 1 {
                if c.re < T::zero() { T::PI() } else { T::zero() }
            } else {
                c.im.atan2(c.re)
            };
            phases.push(if phase <= -T::PI() { T::PI() } else { phase });
        }
        Ok(Spectrum {
            magnitudes,
            phases,
            bin_hz: T::from_u32(sample_rate_hz).unwrap() / T::from_count(self.fft_size),
            fft_size: self.fft_size,
        })
    }

    /// Magnitudes only, skipping the phase computation.
    pub(crate) fn magnitudes(&self, samples: &[T]) -> Result<Vec<T>> {
        let buf = self.transform(samples)?;
        Ok(buf[..self.fft_size / 2 + 1].iter().map(|c| c.norm()).collect())
    }

    /// Rebuilds the tapered frame from a one-sided spectrum produced by this
    /// analyzer.
    pub fn reconstruct(&self, spectrum: &Spectrum<T>) -> Vec<T> {
        let n = self.fft_size;
        let mut buf = vec![Complex::new(T::zero(), T::zero()); n];
        for (k, (&m, &p)) in spectrum.magnitudes.iter().zip(&spectrum.phases).enumerate() {
            let c = Complex::from_polar(m, p);
            buf[k] = c;
            if k != 0 && k != n / 2 {
                buf[n - k] = c.conj();
            }
        }
        self.inverse.process(&mut buf);
        let scale = T::one() / T::from_count(n);
        buf[..self.frame_len].iter().map(|c| c.re * scale).collect()
    }
}

/// Spectrum of a single frame. Plans a transform on every call; use a
/// [`SpectrumAnalyzer`] when processing many frames of the same length.
pub fn fft_spectrum<T: Real>(frame: &Frame<T>, taper: Taper) -> Result<Spectrum<T>> {
    SpectrumAnalyzer::new(frame.len(), taper)?.analyze(&frame.samples, frame.sample_rate_hz)
}
