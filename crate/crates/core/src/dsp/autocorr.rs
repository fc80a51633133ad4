use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::signal::Frame;

/// Normalized autocorrelation over a lag range.
#[derive(Debug, Clone, PartialEq)]
pub struct Autocorrelation<T> {
    pub min_lag: usize,
    /// `values[i]` is the correlation at lag `min_lag + i`.
    pub values: Vec<T>,
}

impl<T: Real> Autocorrelation<T> {
    pub fn at(&self, lag: usize) -> T {
        self.values[lag - self.min_lag]
    }

    /// Lag of the largest correlation and its value. Earliest lag wins ties.
    pub fn peak(&self) -> (usize, T) {
        let mut best = (self.min_lag, T::neg_infinity());
        for (i, &v) in self.values.iter().enumerate() {
            if v > best.1 {
                best = (self.min_lag + i, v);
            }
        }
        best
    }
}

fn check_lags(min_lag: usize, max_lag: usize, span: usize) -> Result<()> {
    if min_lag == 0 || min_lag >= max_lag || max_lag >= span {
        return Err(Error::InvalidArgument(format!(
            "need 0 < min_lag < max_lag < {span}, got {min_lag}..{max_lag}"
        )));
    }
    Ok(())
}

/// Normalized autocorrelation of a whole frame for lags `min_lag..=max_lag`.
///
/// `r[τ] = Σ x[n]·x[n+τ] / sqrt(Σ x[n]² · Σ x[n+τ]²)` with both energies taken
/// over the overlapping part, so a periodic signal reaches 1 at its period
/// regardless of frame length. Values lie in `[-1, 1]`.
pub fn autocorrelation<T: Real>(frame: &Frame<T>, min_lag: usize, max_lag: usize) -> Result<Autocorrelation<T>> {
    let x = &frame.samples;
    let n = x.len();
    check_lags(min_lag, max_lag, n)?;
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(T::zero());
    let mut acc = T::zero();
    for &v in x {
        acc = acc + v * v;
        prefix.push(acc);
    }
    if acc <= T::zero() {
        return Err(Error::DegenerateFrame);
    }
    let values = (min_lag..=max_lag)
        .map(|lag| {
            let overlap = n - lag;
            let head = prefix[overlap];
            let tail = prefix[n] - prefix[lag];
            let num: T = x[..overlap].iter().zip(&x[lag..]).map(|(&a, &b)| a * b).sum();
            normalize(num, head, tail)
        })
        .collect();
    Ok(Autocorrelation { min_lag, values })
}

/// Correlation of the `width`-sample segment starting at `start` with its
/// lagged copies, normalized like [`autocorrelation`]. The lagged copy may
/// extend past the segment but must stay inside `x`.
pub fn segment_autocorrelation<T: Real>(
    x: &[T],
    start: usize,
    width: usize,
    min_lag: usize,
    max_lag: usize,
) -> Result<Autocorrelation<T>> {
    check_lags(min_lag, max_lag, usize::MAX)?;
    if width == 0 || start + width + max_lag > x.len() {
        return Err(Error::FrameTooShort { len: x.len(), min: start + width + max_lag });
    }
    let seg = &x[start..start + width];
    let head: T = seg.iter().map(|&v| v * v).sum();
    if head <= T::zero() {
        return Err(Error::DegenerateFrame);
    }
    // Running energy of the lagged window.
    let mut tail: T = x[start + min_lag..start + min_lag + width].iter().map(|&v| v * v).sum();
    let mut values = Vec::with_capacity(max_lag - min_lag + 1);
    for lag in min_lag..=max_lag {
        if lag > min_lag {
            let out = x[start + lag - 1];
            let inn = x[start + lag + width - 1];
            tail = (tail - out * out + inn * inn).max(T::zero());
        }
        let other = &x[start + lag..start + lag + width];
        let num: T = seg.iter().zip(other).map(|(&a, &b)| a * b).sum();
        values.push(normalize(num, head, tail));
    }
    Ok(Autocorrelation { min_lag, values })
}

fn normalize<T: Real>(num: T, e1: T, e2: T) -> T {
    let den = (e1 * e2).sqrt();
    if den <= T::zero() {
        T::zero()
    } else {
        (num / den).max(-T::one()).min(T::one())
    }
}
