use crate::scalar::Real;

use super::Spectrum;

/// Half-width of the neighbourhood the prominence reference is taken over.
const MEDIAN_HALF_WIDTH: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak<T> {
    pub freq_hz: T,
    pub magnitude: T,
    pub bin: usize,
}

/// Local spectral maxima that exceed both neighbours and stand at least
/// `min_prominence_db` above the median of the surrounding 9 bins.
///
/// Sorted by magnitude, largest first, and truncated to `max_peaks`.
pub fn spectral_peaks<T: Real>(spec: &Spectrum<T>, max_peaks: usize, min_prominence_db: T) -> Vec<Peak<T>> {
    let m = &spec.magnitudes;
    let n = m.len();
    if n < 3 || max_peaks == 0 {
        return Vec::new();
    }
    let ratio = T::lit(10.0).powf(min_prominence_db / T::lit(20.0));
    let mut window = Vec::with_capacity(2 * MEDIAN_HALF_WIDTH + 1);
    let mut peaks = Vec::new();
    for k in 1..n - 1 {
        let v = m[k];
        if !(v > m[k - 1] && v > m[k + 1]) {
            continue;
        }
        window.clear();
        window.extend_from_slice(&m[k.saturating_sub(MEDIAN_HALF_WIDTH)..(k + MEDIAN_HALF_WIDTH + 1).min(n)]);
        window.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        let median = window[window.len() / 2];
        if v >= median * ratio {
            peaks.push(Peak { freq_hz: spec.frequency(k), magnitude: v, bin: k });
        }
    }
    peaks.sort_by(|a, b| b.magnitude.partial_cmp(&a.magnitude).unwrap_or(std::cmp::Ordering::Equal).then(a.bin.cmp(&b.bin)));
    peaks.truncate(max_peaks);
    peaks
}
