//! Per-frame cache of intermediates shared between features.

use std::cell::OnceCell;

use crate::dsp::{flux_from_spectra, smooth_rectified, Spectrum};
use crate::scalar::Real;

use super::extract::Extractor;
use super::voice::{self, VoiceTrack};

pub(crate) struct Moments<T> {
    pub mean: T,
    pub variance: T,
    pub m3: T,
    pub m4: T,
}

pub(crate) struct SpectralView<T> {
    pub spectrum: Spectrum<T>,
    pub power: Vec<T>,
    pub total_power: T,
}

pub(crate) struct Subframes<T> {
    pub len: usize,
    pub energies: Vec<T>,
    pub magnitudes: Vec<Vec<T>>,
    /// `flux[j - 1]` is the positive flux into sub-frame `j`.
    pub flux: Vec<T>,
}

pub(crate) struct FrameContext<'a, T: Real> {
    pub ex: &'a Extractor<T>,
    pub x: &'a [T],
    pub fs: T,
    pub energy: T,
    /// Frame energy below the configured floor; features report sentinels.
    pub degenerate: bool,
    spectral: OnceCell<SpectralView<T>>,
    envelope: OnceCell<Vec<T>>,
    subframes: OnceCell<Subframes<T>>,
    voice: OnceCell<VoiceTrack<T>>,
    moments: OnceCell<Moments<T>>,
    flatness: OnceCell<T>,
    bands: OnceCell<[T; 3]>,
}

impl<'a, T: Real> FrameContext<'a, T> {
    pub fn new(ex: &'a Extractor<T>, x: &'a [T]) -> Self {
        let energy = crate::scalar::energy(x);
        Self {
            ex,
            x,
            fs: T::from_u32(ex.sample_rate_hz).unwrap(),
            energy,
            degenerate: !(energy >= T::lit(ex.config.degenerate_energy)),
            spectral: OnceCell::new(),
            envelope: OnceCell::new(),
            subframes: OnceCell::new(),
            voice: OnceCell::new(),
            moments: OnceCell::new(),
            flatness: OnceCell::new(),
            bands: OnceCell::new(),
        }
    }

    pub fn n(&self) -> T {
        T::from_count(self.x.len())
    }

    pub fn spectral(&self) -> &SpectralView<T> {
        self.spectral.get_or_init(|| {
            let spectrum = self
                .ex
                .main
                .analyze(self.x, self.ex.sample_rate_hz)
                .expect("frame length validated by the extractor");
            let power = spectrum.power();
            let total_power = power.iter().copied().sum();
            SpectralView { spectrum, power, total_power }
        })
    }

    /// True when the frame or its spectrum carries no usable power.
    pub fn spectrally_degenerate(&self) -> bool {
        self.degenerate || !(self.spectral().total_power > T::zero())
    }

    pub fn envelope(&self) -> &[T] {
        self.envelope.get_or_init(|| {
            let width = (self.ex.config.envelope_smoothing_ms * f64::from(self.ex.sample_rate_hz) / 1000.0).round() as usize;
            smooth_rectified(self.x, width)
        })
    }

    pub fn subframes(&self) -> &Subframes<T> {
        self.subframes.get_or_init(|| {
            let len = self.ex.sub.frame_len();
            let mut energies = Vec::new();
            let mut magnitudes = Vec::new();
            for chunk in self.x.chunks_exact(len) {
                energies.push(crate::scalar::energy(chunk));
                magnitudes.push(self.ex.sub.magnitudes(chunk).expect("sub-frame length fixed by the extractor"));
            }
            let flux = flux_from_spectra(&magnitudes);
            Subframes { len, energies, magnitudes, flux }
        })
    }

    pub fn voice(&self) -> &VoiceTrack<T> {
        self.voice.get_or_init(|| voice::track(self))
    }

    pub fn moments(&self) -> &Moments<T> {
        self.moments.get_or_init(|| {
            let n = self.n();
            let mean = self.x.iter().copied().sum::<T>() / n;
            let (mut m2, mut m3, mut m4) = (T::zero(), T::zero(), T::zero());
            for &v in self.x {
                let d = v - mean;
                let d2 = d * d;
                m2 = m2 + d2;
                m3 = m3 + d2 * d;
                m4 = m4 + d2 * d2;
            }
            Moments { mean, variance: m2 / n, m3: m3 / n, m4: m4 / n }
        })
    }

    pub fn flatness(&self) -> T {
        *self.flatness.get_or_init(|| super::spectral::compute_flatness(self))
    }

    pub fn band_fractions(&self) -> [T; 3] {
        *self.bands.get_or_init(|| super::derived::compute_band_fractions(self))
    }
}
