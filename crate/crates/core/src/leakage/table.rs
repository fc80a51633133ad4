use std::collections::HashMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Estimators refuse tables with fewer rows than this.
pub const MIN_ROWS: usize = 10;

/// Feature columns with one categorical label per row.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledFeatureTable<T> {
    columns: Vec<String>,
    rows: Vec<Vec<T>>,
    labels: Vec<String>,
    classes: Vec<String>,
}

impl<T: Real> LabeledFeatureTable<T> {
    pub fn new(columns: Vec<String>, rows: Vec<Vec<T>>, labels: Vec<String>) -> Result<Self> {
        if rows.len() != labels.len() {
            return Err(Error::InvalidTable(format!("{} rows but {} labels", rows.len(), labels.len())));
        }
        if rows.len() < MIN_ROWS {
            return Err(Error::InvalidTable(format!("need at least {MIN_ROWS} rows, got {}", rows.len())));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != columns.len() {
                return Err(Error::InvalidTable(format!(
                    "row {i} has {} values, expected {}",
                    row.len(),
                    columns.len()
                )));
            }
            if let Some(j) = row.iter().position(|v| !v.is_finite()) {
                return Err(Error::InvalidTable(format!("row {i}, column `{}` is not finite", columns[j])));
            }
        }
        let mut classes = labels.clone();
        classes.sort();
        classes.dedup();
        if classes.len() < 2 {
            return Err(Error::InvalidTable("labels must take at least two distinct values".into()));
        }
        Ok(Self { columns, rows, labels, classes })
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Distinct labels in sorted order.
    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    /// Index of each row's label in [`classes`](Self::classes).
    pub fn label_codes(&self) -> Vec<usize> {
        self.labels
            .iter()
            .map(|l| self.classes.binary_search(l).expect("label present in class list"))
            .collect()
    }

    pub fn column(&self, component_id: &str) -> Result<Vec<T>> {
        let j = self
            .columns
            .iter()
            .position(|c| c == component_id)
            .ok_or_else(|| Error::UnknownFeatureId(component_id.to_string()))?;
        Ok(self.rows.iter().map(|r| r[j]).collect())
    }
}

/// Joins a feature table with a `row_id,label` file.
///
/// The first column of the feature file is the row id (for extractor output
/// this is `window_index`); a `start_time_s` column is ignored; every other
/// column is a numeric component. Every feature row needs a label.
pub fn load_labeled_table<T: Real>(features: impl AsRef<Path>, labels: impl AsRef<Path>) -> Result<LabeledFeatureTable<T>> {
    let (features, labels) = (features.as_ref(), labels.as_ref());
    let mut label_map = HashMap::new();
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).comment(Some(b'#')).from_path(labels)?;
    for rec in reader.records() {
        let rec = rec?;
        let (Some(id), Some(label)) = (rec.get(0), rec.get(1)) else {
            return Err(Error::InvalidTable(format!("{}: rows need `row_id,label`", labels.display())));
        };
        if label_map.insert(id.to_string(), label.to_string()).is_some() {
            return Err(Error::InvalidTable(format!("{}: duplicate row id `{id}`", labels.display())));
        }
    }

    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).comment(Some(b'#')).from_path(features)?;
    let header = reader.headers()?.clone();
    if header.len() < 2 {
        return Err(Error::InvalidTable(format!("{}: no feature columns", features.display())));
    }
    let keep: Vec<usize> = (1..header.len()).filter(|&j| &header[j] != "start_time_s").collect();
    let columns = keep.iter().map(|&j| header[j].to_string()).collect();
    let mut rows = Vec::new();
    let mut row_labels = Vec::new();
    for rec in reader.records() {
        let rec = rec?;
        let id = &rec[0];
        let label = label_map
            .get(id)
            .ok_or_else(|| Error::InvalidTable(format!("{}: no label for row `{id}`", labels.display())))?;
        let row = keep
            .iter()
            .map(|&j| {
                rec.get(j).and_then(|v| v.parse::<f64>().ok()).map(T::lit).ok_or_else(|| {
                    Error::InvalidTable(format!("{}: row `{id}`, column `{}` is not a number", features.display(), &header[j]))
                })
            })
            .collect::<Result<Vec<T>>>()?;
        rows.push(row);
        row_labels.push(label.clone());
    }
    LabeledFeatureTable::new(columns, rows, row_labels)
}
