//! Speaker and speech leakage indices.

use std::fs::File;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Rates are raised to at least this value before forming ratios.
pub const CSLI_RATE_FLOOR: f64 = 1e-6;
const WEIGHT_TOLERANCE: f64 = 1e-9;

/// Classification accuracy on one speaker attribute, relative to the
/// accuracy achieved on raw audio.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttributeScore<T> {
    pub name: String,
    pub accuracy: T,
    pub baseline_accuracy: T,
    pub weight: T,
}

/// Validated input of [`sili`]. Weights are normalized to sum to one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SiliInput<T> {
    attributes: Vec<AttributeScore<T>>,
}

/// An index value together with the names of ratios that hit a clamp.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexValue<T> {
    pub value: T,
    pub clamped: Vec<String>,
}

fn check_weights<T: Real>(weights: &[T]) -> Result<T> {
    if weights.iter().any(|w| !(w.is_finite() && *w >= T::zero())) {
        return Err(Error::InvalidWeights("weights must be finite and non-negative".into()));
    }
    let total: T = weights.iter().copied().sum();
    if !(total > T::zero()) {
        return Err(Error::InvalidWeights("weights sum to zero".into()));
    }
    Ok(total)
}

impl<T: Real> SiliInput<T> {
    pub fn new(mut attributes: Vec<AttributeScore<T>>) -> Result<Self> {
        if attributes.is_empty() {
            return Err(Error::EmptyAttributes);
        }
        for a in &attributes {
            if !(a.baseline_accuracy > T::zero()) {
                return Err(Error::NonPositiveBaseline(a.name.clone()));
            }
            if a.baseline_accuracy > T::one() {
                return Err(Error::InvalidArgument(format!("baseline accuracy for `{}` exceeds 1", a.name)));
            }
            if !(a.accuracy >= T::zero() && a.accuracy <= T::one()) {
                return Err(Error::InvalidArgument(format!(
                    "accuracy for `{}` must lie in [0, 1], got {}",
                    a.name, a.accuracy
                )));
            }
        }
        let weights: Vec<T> = attributes.iter().map(|a| a.weight).collect();
        let total = check_weights(&weights)?;
        for a in &mut attributes {
            a.weight = a.weight / total;
        }
        Ok(Self { attributes })
    }

    /// Equal weights over `(name, accuracy, baseline)` triples.
    pub fn equal_weights<S: Into<String>>(scores: impl IntoIterator<Item = (S, T, T)>) -> Result<Self> {
        Self::new(
            scores
                .into_iter()
                .map(|(name, accuracy, baseline_accuracy)| AttributeScore {
                    name: name.into(),
                    accuracy,
                    baseline_accuracy,
                    weight: T::one(),
                })
                .collect(),
        )
    }

    pub fn attributes(&self) -> &[AttributeScore<T>] {
        &self.attributes
    }
}

/// Weighted mean of per-attribute accuracy retention `A_i / A_max,i`, each
/// ratio capped at 1. 1 means the representation leaks as much as raw audio.
pub fn sili<T: Real>(input: &SiliInput<T>) -> IndexValue<T> {
    let mut value = T::zero();
    let mut clamped = Vec::new();
    for a in &input.attributes {
        let ratio = a.accuracy / a.baseline_accuracy;
        if ratio > T::one() {
            clamped.push(a.name.clone());
        }
        value = value + a.weight * ratio.min(T::one());
    }
    IndexValue { value, clamped }
}

/// Word error rate, phoneme error rate and intelligibility measured on raw
/// audio and on the processed representation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CsliInput<T> {
    pub wer_raw: T,
    pub wer_method: T,
    pub per_raw: T,
    pub per_method: T,
    pub estoi_raw: T,
    pub estoi_method: T,
    /// Weights of the WER, PER and eSTOI terms.
    pub weights: [T; 3],
}

impl<T: Real> CsliInput<T> {
    /// Input with equal weights.
    pub fn new(wer: (T, T), per: (T, T), estoi: (T, T)) -> Self {
        let third = T::one() / T::lit(3.0);
        Self {
            wer_raw: wer.0,
            wer_method: wer.1,
            per_raw: per.0,
            per_method: per.1,
            estoi_raw: estoi.0,
            estoi_method: estoi.1,
            weights: [third; 3],
        }
    }
}

/// `w1·WER_raw/WER_method + w2·PER_raw/PER_method + w3·eSTOI_method/eSTOI_raw`
/// with rates floored at [`CSLI_RATE_FLOOR`] and each ratio clamped to
/// `[0, 1]`, so raw audio scores exactly 1.
pub fn csli<T: Real>(input: &CsliInput<T>) -> Result<IndexValue<T>> {
    let total = check_weights(&input.weights)?;
    if (total - T::one()).abs().to_f64_lossy() > WEIGHT_TOLERANCE {
        return Err(Error::InvalidWeights(format!("weights must sum to 1, got {total}")));
    }
    let rates = [
        ("wer_raw", input.wer_raw),
        ("wer_method", input.wer_method),
        ("per_raw", input.per_raw),
        ("per_method", input.per_method),
        ("estoi_raw", input.estoi_raw),
        ("estoi_method", input.estoi_method),
    ];
    for (name, v) in rates {
        if !(v.is_finite() && v >= T::zero()) {
            return Err(Error::InvalidArgument(format!("{name} must be finite and non-negative, got {v}")));
        }
    }
    for (name, v) in &rates[4..] {
        if *v > T::one() {
            return Err(Error::InvalidArgument(format!("{name} must not exceed 1, got {v}")));
        }
    }
    let floor = T::lit(CSLI_RATE_FLOOR);
    let f = |v: T| v.max(floor);
    let terms = [
        ("wer", f(input.wer_raw) / f(input.wer_method)),
        ("per", f(input.per_raw) / f(input.per_method)),
        ("estoi", f(input.estoi_method) / f(input.estoi_raw)),
    ];
    let mut value = T::zero();
    let mut clamped = Vec::new();
    for ((name, ratio), &w) in terms.into_iter().zip(&input.weights) {
        if ratio > T::one() {
            clamped.push(name.to_string());
        }
        value = value + w * ratio.min(T::one());
    }
    Ok(IndexValue { value, clamped })
}

/// One row of an index input file.
#[derive(Debug, Clone, Deserialize)]
struct Record {
    attribute: String,
    accuracy: f64,
    baseline: f64,
    #[serde(default)]
    weight: Option<f64>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum JsonRecords {
    List(Vec<Record>),
    Wrapped { attributes: Vec<Record> },
}

fn read_records(path: &Path) -> Result<Vec<Record>> {
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    if is_json {
        let mut text = String::new();
        File::open(path)?.read_to_string(&mut text)?;
        return Ok(match serde_json::from_str(&text)? {
            JsonRecords::List(r) | JsonRecords::Wrapped { attributes: r } => r,
        });
    }
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).comment(Some(b'#')).from_path(path)?;
    let headers = reader.headers()?.clone();
    for col in ["attribute", "accuracy", "baseline"] {
        if !headers.iter().any(|h| h == col) {
            return Err(Error::InvalidTable(format!("{}: missing column `{col}`", path.display())));
        }
    }
    reader.deserialize().map(|r| r.map_err(Error::from)).collect()
}

/// Weights of the records, equal when none is given.
fn record_weights(records: &[Record]) -> Result<Vec<f64>> {
    match records.iter().filter(|r| r.weight.is_some()).count() {
        0 => Ok(vec![1.0; records.len()]),
        n if n == records.len() => Ok(records.iter().map(|r| r.weight.unwrap_or_default()).collect()),
        _ => Err(Error::InvalidWeights("either every row or no row must carry a weight".into())),
    }
}

/// Reads SILI input from CSV (`attribute,accuracy,baseline,weight`) or JSON
/// (an array of such records, optionally wrapped in `{"attributes": ...}`).
pub fn load_sili<T: Real>(path: impl AsRef<Path>) -> Result<SiliInput<T>> {
    let records = read_records(path.as_ref())?;
    let weights = record_weights(&records)?;
    SiliInput::new(
        records
            .into_iter()
            .zip(weights)
            .map(|(r, w)| AttributeScore {
                name: r.attribute,
                accuracy: T::lit(r.accuracy),
                baseline_accuracy: T::lit(r.baseline),
                weight: T::lit(w),
            })
            .collect(),
    )
}

/// Reads CSLI input in the SILI file layout: rows `wer`, `per` and `estoi`,
/// with the processed value under `accuracy` and the raw value under
/// `baseline`. Missing weights default to equal thirds.
pub fn load_csli<T: Real>(path: impl AsRef<Path>) -> Result<CsliInput<T>> {
    let path = path.as_ref();
    let records = read_records(path)?;
    let weights = record_weights(&records)?;
    let total: f64 = weights.iter().sum();
    let mut slots: [Option<(f64, f64, f64)>; 3] = [None; 3];
    for (r, w) in records.iter().zip(&weights) {
        let idx = match r.attribute.to_ascii_lowercase().as_str() {
            "wer" => 0,
            "per" => 1,
            "estoi" => 2,
            other => {
                return Err(Error::InvalidTable(format!(
                    "{}: unknown attribute `{other}` (expected wer, per, estoi)",
                    path.display()
                )))
            }
        };
        if slots[idx].replace((r.baseline, r.accuracy, *w)).is_some() {
            return Err(Error::InvalidTable(format!("{}: duplicate row `{}`", path.display(), r.attribute)));
        }
    }
    let get = |i: usize, name: &str| {
        slots[i].ok_or_else(|| Error::InvalidTable(format!("{}: missing row `{name}`", path.display())))
    };
    let (wer, per, estoi) = (get(0, "wer")?, get(1, "per")?, get(2, "estoi")?);
    // Equal weights come out of `record_weights` as ones; rescale those.
    let scale = if records.iter().all(|r| r.weight.is_none()) { total } else { 1.0 };
    Ok(CsliInput {
        wer_raw: T::lit(wer.0),
        wer_method: T::lit(wer.1),
        per_raw: T::lit(per.0),
        per_method: T::lit(per.1),
        estoi_raw: T::lit(estoi.0),
        estoi_method: T::lit(estoi.1),
        weights: [T::lit(wer.2 / scale), T::lit(per.2 / scale), T::lit(estoi.2 / scale)],
    })
}
