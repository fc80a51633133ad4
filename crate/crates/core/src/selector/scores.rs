use std::collections::HashSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::registry;
use crate::scalar::Real;

/// Attribute columns of the shipped privacy score file.
pub const PRIVACY_ATTRIBUTES: [&str; 3] = ["age", "gender", "ethnicity"];

/// Sound category a utility score refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    Animal,
    Nature,
    HumanNonSpeech,
    #[default]
    Interior,
    Exterior,
}

impl Category {
    pub const ALL: [Category; 5] =
        [Category::Animal, Category::Nature, Category::HumanNonSpeech, Category::Interior, Category::Exterior];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::Animal => "animal",
            Category::Nature => "nature",
            Category::HumanNonSpeech => "human_non_speech",
            Category::Interior => "interior",
            Category::Exterior => "exterior",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Category {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Category::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown category `{s}`")))
    }
}

/// Scores of one feature.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureScores<T> {
    pub id: String,
    /// Leakage score per speaker attribute.
    pub privacy: Vec<(String, T)>,
    /// Utility score per category, indexed by [`Category::index`].
    pub utility: [T; 5],
    pub latency_ms: T,
}

impl<T: Real> FeatureScores<T> {
    pub fn utility_for(&self, category: Category) -> T {
        self.utility[category.index()]
    }
}

/// Privacy, utility and latency scores of a set of features. Row order is
/// the tie-breaking order of the selector.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTable<T> {
    entries: Vec<FeatureScores<T>>,
}

fn non_negative<T: Real>(v: T) -> bool {
    v.is_finite() && v >= T::zero()
}

impl<T: Real> ScoreTable<T> {
    pub fn new(entries: Vec<FeatureScores<T>>) -> Result<Self> {
        let mut seen = HashSet::new();
        for e in &entries {
            if !seen.insert(e.id.as_str()) {
                return Err(Error::InvalidTable(format!("duplicate feature `{}`", e.id)));
            }
            let bad = e.privacy.iter().map(|p| p.1).chain(e.utility).any(|v| !non_negative(v));
            if bad {
                return Err(Error::InvalidTable(format!("scores of `{}` must be finite and non-negative", e.id)));
            }
            if !(e.latency_ms.is_finite() && e.latency_ms > T::zero()) {
                return Err(Error::InvalidTable(format!("latency of `{}` must be positive", e.id)));
            }
        }
        Ok(Self { entries })
    }

    /// Loads `privacy.csv`, `utility.csv` and `latency.csv` from `dir`.
    pub fn load_dir(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        Self::load(dir.join("privacy.csv"), dir.join("utility.csv"), dir.join("latency.csv"))
    }

    /// Loads the three score files. Every registry feature must appear in
    /// each file; rows are reordered to registry order.
    pub fn load(privacy: impl AsRef<Path>, utility: impl AsRef<Path>, latency: impl AsRef<Path>) -> Result<Self> {
        let privacy_rows = read_score_csv::<T>(privacy.as_ref(), None)?;
        let categories: Vec<&str> = Category::ALL.iter().map(|c| c.as_str()).collect();
        let utility_rows = read_score_csv::<T>(utility.as_ref(), Some(&categories))?;
        let latency_rows = read_score_csv::<T>(latency.as_ref(), Some(&["latency_ms"]))?;

        let find = |rows: &ScoreRows<T>, id: &str| {
            rows.rows
                .iter()
                .find(|(k, _)| k == id)
                .map(|(_, v)| v.clone())
                .ok_or_else(|| Error::MissingFeatureScores(id.to_string()))
        };
        let mut entries = Vec::with_capacity(registry().len());
        for spec in registry() {
            let p = find(&privacy_rows, spec.id)?;
            let u = find(&utility_rows, spec.id)?;
            let l = find(&latency_rows, spec.id)?;
            if !(l[0] > T::zero()) {
                return Err(Error::MalformedScores {
                    file: latency.as_ref().display().to_string(),
                    reason: format!("row `{}`: latency must be positive", spec.id),
                });
            }
            let mut utility = [T::zero(); 5];
            for (name, v) in utility_rows.columns.iter().zip(u) {
                let c: Category = name.parse()?;
                utility[c.index()] = v;
            }
            entries.push(FeatureScores {
                id: spec.id.to_string(),
                privacy: privacy_rows.columns.iter().cloned().zip(p).collect(),
                utility,
                latency_ms: l[0],
            });
        }
        Self::new(entries)
    }

    pub fn entries(&self) -> &[FeatureScores<T>] {
        &self.entries
    }

    pub fn get(&self, id: &str) -> Option<&FeatureScores<T>> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Same table with every utility and privacy score multiplied by `k`.
    pub fn scaled(&self, k: T) -> Self {
        let mut t = self.clone();
        for e in &mut t.entries {
            e.privacy.iter_mut().for_each(|p| p.1 = p.1 * k);
            e.utility.iter_mut().for_each(|u| *u = *u * k);
        }
        t
    }
}

struct ScoreRows<T> {
    columns: Vec<String>,
    rows: Vec<(String, Vec<T>)>,
}

/// Reads a `feature,<columns...>` file of non-negative numbers. With
/// `expected`, the value columns must be exactly that set.
fn read_score_csv<T: Real>(path: &Path, expected: Option<&[&str]>) -> Result<ScoreRows<T>> {
    let file = path.display().to_string();
    let malformed = |reason: String| Error::MalformedScores { file: file.clone(), reason };
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| malformed(e.to_string()))?;
    let header = reader.headers().map_err(|e| malformed(e.to_string()))?.clone();
    if header.get(0) != Some("feature") || header.len() < 2 {
        return Err(malformed("header must start with `feature` followed by score columns".into()));
    }
    let columns: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    if let Some(expected) = expected {
        let mut got: Vec<&str> = columns.iter().map(String::as_str).collect();
        let mut want = expected.to_vec();
        got.sort_unstable();
        want.sort_unstable();
        if got != want {
            return Err(malformed(format!("expected columns {}", expected.join(","))));
        }
    }
    let mut rows: Vec<(String, Vec<T>)> = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| malformed(e.to_string()))?;
        let id = rec.get(0).unwrap_or_default().to_string();
        if crate::features::lookup(&id).is_none() {
            return Err(malformed(format!("row `{id}`: unknown feature")));
        }
        if rows.iter().any(|(k, _)| *k == id) {
            return Err(malformed(format!("row `{id}`: duplicate feature")));
        }
        if rec.len() != header.len() {
            return Err(malformed(format!("row `{id}`: expected {} fields, found {}", header.len(), rec.len())));
        }
        let values = rec
            .iter()
            .skip(1)
            .zip(&columns)
            .map(|(v, col)| match v.parse::<f64>() {
                Ok(x) if x.is_finite() && x >= 0.0 => Ok(T::lit(x)),
                _ => Err(malformed(format!("row `{id}`, column `{col}`: `{v}` is not a non-negative number"))),
            })
            .collect::<Result<Vec<T>>>()?;
        rows.push((id, values));
    }
    Ok(ScoreRows { columns, rows })
}

/// Reads a `feature,latency_ms` file, keeping file order.
pub fn load_latency_csv<T: Real>(path: impl AsRef<Path>) -> Result<Vec<(String, T)>> {
    let rows = read_score_csv::<T>(path.as_ref(), Some(&["latency_ms"]))?;
    Ok(rows.rows.into_iter().map(|(id, v)| (id, v[0])).collect())
}
