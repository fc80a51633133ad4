//! Leakage indices from external measurements and feature-level leakage
//! diagnostics over labeled feature tables.

mod diagnostics;
mod index;
mod table;

pub use diagnostics::{
    leakage_report, mutual_information, pearson_correlation, ComponentLeakage, Correlation, MutualInformation,
    DEFAULT_MI_BINS,
};
pub use index::{
    csli, load_csli, load_sili, sili, AttributeScore, CsliInput, IndexValue, SiliInput, CSLI_RATE_FLOOR,
};
pub use table::{load_labeled_table, LabeledFeatureTable, MIN_ROWS};
