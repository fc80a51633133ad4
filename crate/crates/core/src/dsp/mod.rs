//! Numerical kernels shared by the feature catalog.

mod autocorr;
mod envelope;
mod fft;
mod flux;
mod peaks;
mod wavelet;

pub use autocorr::{autocorrelation, segment_autocorrelation, Autocorrelation};
pub use envelope::{analytic_envelope, smooth_rectified, EnvelopeSeries, DEFAULT_SMOOTHING_MS};
pub use fft::{fft_spectrum, Spectrum, SpectrumAnalyzer};
pub use flux::{flux_from_spectra, subframe_flux, DEFAULT_SUBFRAME_MS};
pub use peaks::{spectral_peaks, Peak};
pub use wavelet::{dwt, dwt_energies, DwtEnergies, DB4, DEFAULT_DWT_LEVELS};

/// Parabolic interpolation of a discrete maximum at `i`, returning the
/// fractional offset in `(-0.5, 0.5)`.
pub(crate) fn parabolic_offset<T: crate::Real>(left: T, centre: T, right: T) -> T {
    let denom = left - T::lit(2.0) * centre + right;
    if denom >= T::zero() {
        return T::zero();
    }
    let off = T::lit(0.5) * (left - right) / denom;
    off.max(T::lit(-0.5)).min(T::lit(0.5))
}
