//! Periodized orthogonal Daubechies-4 (8-tap) wavelet transform.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::signal::Frame;

pub const DEFAULT_DWT_LEVELS: usize = 5;

/// Daubechies scaling filter with four vanishing moments.
pub const DB4: [f64; 8] = [
    0.230_377_813_308_896_5,
    0.714_846_570_552_915_4,
    0.630_880_767_929_858_9,
    -0.027_983_769_416_859_854,
    -0.187_034_811_719_093_1,
    0.030_841_381_835_560_764,
    0.032_883_011_666_885_2,
    -0.010_597_401_785_069_032,
];

/// Relative energy per decomposition band: detail levels 1..=L followed by
/// the level-L approximation.
#[derive(Debug, Clone, PartialEq)]
pub struct DwtEnergies<T> {
    pub relative_energies: Vec<T>,
}

fn filters<T: Real>() -> ([T; 8], [T; 8]) {
    let lo = DB4.map(T::lit);
    let mut hi = [T::zero(); 8];
    for (k, slot) in hi.iter_mut().enumerate() {
        let v = lo[7 - k];
        *slot = if k % 2 == 0 { v } else { -v };
    }
    (lo, hi)
}

/// One analysis step with periodic extension. Odd-length input is extended by
/// repeating its last sample.
fn step<T: Real>(x: &[T], lo: &[T; 8], hi: &[T; 8]) -> (Vec<T>, Vec<T>) {
    let mut ext;
    let x = if x.len() % 2 == 1 {
        ext = x.to_vec();
        ext.push(*x.last().unwrap());
        &ext[..]
    } else {
        x
    };
    let n = x.len();
    let half = n / 2;
    let mut approx = Vec::with_capacity(half);
    let mut detail = Vec::with_capacity(half);
    for i in 0..half {
        let mut a = T::zero();
        let mut d = T::zero();
        for k in 0..8 {
            let v = x[(2 * i + k) % n];
            a = a + lo[k] * v;
            d = d + hi[k] * v;
        }
        approx.push(a);
        detail.push(d);
    }
    (approx, detail)
}

/// Multi-level decomposition. Returns `levels` detail vectors (finest first)
/// followed by the final approximation.
pub fn dwt<T: Real>(x: &[T], levels: usize) -> Result<Vec<Vec<T>>> {
    let min = 1usize.checked_shl(levels as u32).unwrap_or(usize::MAX);
    if levels == 0 || x.len() < min {
        return Err(Error::FrameTooShort { len: x.len(), min });
    }
    let (lo, hi) = filters::<T>();
    let mut bands = Vec::with_capacity(levels + 1);
    let mut approx = x.to_vec();
    for _ in 0..levels {
        let (a, d) = step(&approx, &lo, &hi);
        bands.push(d);
        approx = a;
    }
    bands.push(approx);
    Ok(bands)
}

/// Relative energy of each band of a `levels`-deep decomposition.
///
/// A frame with zero energy reports all of it in the approximation band, the
/// limit of a vanishing constant signal.
pub fn dwt_energies<T: Real>(frame: &Frame<T>, levels: usize) -> Result<DwtEnergies<T>> {
    let bands = dwt(&frame.samples, levels)?;
    let energies: Vec<T> = bands.iter().map(|b| crate::scalar::energy(b)).collect();
    let total: T = energies.iter().copied().sum();
    let relative_energies = if total > T::zero() {
        energies.iter().map(|&e| e / total).collect()
    } else {
        let mut v = vec![T::zero(); levels + 1];
        v[levels] = T::one();
        v
    };
    Ok(DwtEnergies { relative_energies })
}
