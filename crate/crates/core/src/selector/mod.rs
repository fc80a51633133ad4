//! Task-specific feature selection under a latency budget.

mod scores;
mod solver;

pub use scores::{load_latency_csv, Category, FeatureScores, ScoreTable, PRIVACY_ATTRIBUTES};
pub use solver::{coefficients, lp_relaxation, select, sweep_alpha, SelectionRequest, SelectionResult};
