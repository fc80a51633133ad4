//! Feature table serialization.

use std::io::Write;

use serde_json::{Map, Number, Value};

use crate::error::Result;
use crate::scalar::Real;

use super::FeatureVector;

pub const SIGNIFICANT_DIGITS: usize = 9;

/// Formats `v` as a plain decimal with `digits` significant digits, switching
/// to scientific notation for very large or small magnitudes. Trailing zeros
/// are dropped.
pub fn format_significant(v: f64, digits: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v.is_nan() { "NaN".into() } else if v == 0.0 { "0".into() } else { v.to_string() };
    }
    let digits = digits.max(1);
    let exp = v.abs().log10().floor() as i32;
    if !(-5..15).contains(&exp) {
        let s = format!("{:.*e}", digits - 1, v);
        let (mantissa, e) = s.split_once('e').expect("scientific format has an exponent");
        return format!("{}e{}", trim_zeros(mantissa), e);
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{v:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Writes one CSV row per vector under the header
/// `window_index,start_time_s,<component ids>`.
pub fn write_csv<T: Real, W: Write>(out: W, vectors: &[FeatureVector<T>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let ids: Vec<&str> = vectors.first().map(|v| v.components.iter().map(|(id, _)| *id).collect()).unwrap_or_default();
    let mut header = vec!["window_index", "start_time_s"];
    header.extend(ids);
    w.write_record(&header)?;
    for v in vectors {
        let mut row = vec![v.window_index.to_string(), format_significant(v.start_time_s, SIGNIFICANT_DIGITS)];
        row.extend(v.values().map(|x| format_significant(x.to_f64_lossy(), SIGNIFICANT_DIGITS)));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// JSON array with one object per window, keys in component order.
pub fn to_json<T: Real>(vectors: &[FeatureVector<T>]) -> Value {
    Value::Array(
        vectors
            .iter()
            .map(|v| {
                let mut obj = Map::new();
                obj.insert("window_index".into(), Value::from(v.window_index));
                obj.insert("start_time_s".into(), number(v.start_time_s));
                for &(id, x) in &v.components {
                    obj.insert(id.into(), number(x.to_f64_lossy()));
                }
                Value::Object(obj)
            })
            .collect(),
    )
}

fn number(v: f64) -> Value {
    let rounded: f64 = format_significant(v, SIGNIFICANT_DIGITS).parse().unwrap_or(v);
    Number::from_f64(rounded).map_or(Value::Null, Value::Number)
}

pub fn write_json<T: Real, W: Write>(mut out: W, vectors: &[FeatureVector<T>]) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, &to_json(vectors))?;
    out.write_all(b"\n")?;
    Ok(())
}
