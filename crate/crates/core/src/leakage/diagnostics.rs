//! Per-component leakage estimators.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::table::LabeledFeatureTable;

pub const DEFAULT_MI_BINS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Correlation<T> {
    pub value: T,
    /// More than two classes: `value` is the strongest one-vs-rest correlation.
    pub multiclass: bool,
    /// The component is constant and `value` is the defined 0.
    pub zero_variance: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MutualInformation<T> {
    pub bits: T,
    pub zero_variance: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentLeakage<T> {
    pub component: String,
    pub correlation: T,
    pub mi_bits: T,
    pub multiclass: bool,
    pub zero_variance: bool,
}

/// Sum in ascending order so the result does not depend on row order.
fn sorted_sum<T: Real>(mut terms: Vec<T>) -> T {
    terms.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    terms.into_iter().sum()
}

fn has_spread<T: Real>(x: &[T]) -> bool {
    x.iter().any(|&v| v != x[0])
}

/// Pearson correlation of `x` with the 0/1 indicator `y`.
fn point_biserial<T: Real>(x: &[T], y: &[bool]) -> T {
    let n = T::from_count(x.len());
    let mx = sorted_sum(x.to_vec()) / n;
    let my = T::from_count(y.iter().filter(|&&b| b).count()) / n;
    let yv = |b: bool| if b { T::one() } else { T::zero() };
    let sxy = sorted_sum(x.iter().zip(y).map(|(&a, &b)| (a - mx) * (yv(b) - my)).collect());
    let sxx = sorted_sum(x.iter().map(|&a| (a - mx) * (a - mx)).collect());
    let syy = sorted_sum(y.iter().map(|&b| (yv(b) - my) * (yv(b) - my)).collect());
    let den = (sxx * syy).sqrt();
    if !(den > T::zero()) {
        return T::zero();
    }
    (sxy / den).max(-T::one()).min(T::one())
}

/// Point-biserial correlation between a component and the label. Labels are
/// encoded in sorted order, the first class as 0. With more than two classes
/// each class is tested against the rest and the largest magnitude is kept.
pub fn pearson_correlation<T: Real>(table: &LabeledFeatureTable<T>, component_id: &str) -> Result<Correlation<T>> {
    let x = table.column(component_id)?;
    let codes = table.label_codes();
    let classes = table.classes().len();
    let multiclass = classes > 2;
    if !has_spread(&x) {
        return Ok(Correlation { value: T::zero(), multiclass, zero_variance: true });
    }
    let targets: Vec<usize> = if multiclass { (0..classes).collect() } else { vec![1] };
    let mut best = T::zero();
    for k in targets {
        let y: Vec<bool> = codes.iter().map(|&c| c == k).collect();
        let r = point_biserial(&x, &y);
        if r.abs() > best.abs() {
            best = r;
        }
    }
    Ok(Correlation { value: best, multiclass, zero_variance: false })
}

/// Plug-in mutual information in bits between the label and the component
/// binned into `bins` equal-width bins over its observed range.
pub fn mutual_information<T: Real>(
    table: &LabeledFeatureTable<T>,
    component_id: &str,
    bins: usize,
) -> Result<MutualInformation<T>> {
    if bins < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 bins, got {bins}")));
    }
    let x = table.column(component_id)?;
    if !has_spread(&x) {
        return Ok(MutualInformation { bits: T::zero(), zero_variance: true });
    }
    let (lo, hi) = x.iter().fold((x[0], x[0]), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let range = hi - lo;
    let width = T::from_count(bins);
    let classes = table.classes().len();
    let mut joint = vec![0usize; bins * classes];
    for (&v, c) in x.iter().zip(table.label_codes()) {
        let b = ((v - lo) / range * width).floor().to_usize().unwrap_or(0).min(bins - 1);
        joint[b * classes + c] += 1;
    }
    let n = T::from_count(x.len());
    let bin_totals: Vec<usize> = joint.chunks(classes).map(|r| r.iter().sum()).collect();
    let class_totals: Vec<usize> = (0..classes).map(|c| joint.iter().skip(c).step_by(classes).sum()).collect();
    let mut terms = Vec::new();
    for b in 0..bins {
        for c in 0..classes {
            let count = joint[b * classes + c];
            if count == 0 {
                continue;
            }
            let p = T::from_count(count) / n;
            let expected = T::from_count(bin_totals[b]) * T::from_count(class_totals[c]) / (n * n);
            terms.push(p * (p / expected).log2());
        }
    }
    Ok(MutualInformation { bits: sorted_sum(terms).max(T::zero()), zero_variance: false })
}

/// Correlation and mutual information of every component, most informative
/// first. Ties keep column order.
pub fn leakage_report<T: Real>(table: &LabeledFeatureTable<T>, bins: usize) -> Result<Vec<ComponentLeakage<T>>> {
    let mut report = table
        .columns()
        .iter()
        .map(|id| {
            let r = pearson_correlation(table, id)?;
            let mi = mutual_information(table, id, bins)?;
            Ok(ComponentLeakage {
                component: id.clone(),
                correlation: r.value,
                mi_bits: mi.bits,
                multiclass: r.multiclass,
                zero_variance: r.zero_variance,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    report.sort_by(|a, b| b.mi_bits.partial_cmp(&a.mi_bits).unwrap_or(std::cmp::Ordering::Equal));
    Ok(report)
}
