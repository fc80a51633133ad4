//! Exact 0/1 knapsack over the features with negative cost coefficients.

use std::cmp::Ordering;

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::scores::{Category, ScoreTable};

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionRequest<T> {
    pub category: Category,
    /// Weight of utility against privacy, in `[0, 1]`.
    pub alpha: T,
    pub latency_budget_ms: T,
    /// Per-attribute weights for averaging privacy scores; equal when `None`.
    pub attribute_weights: Option<Vec<(String, T)>>,
}

impl<T: Real> Default for SelectionRequest<T> {
    fn default() -> Self {
        Self {
            category: Category::Interior,
            alpha: T::lit(0.5),
            latency_budget_ms: T::lit(100.0),
            attribute_weights: None,
        }
    }
}

impl<T: Real> SelectionRequest<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha >= T::zero() && self.alpha <= T::one()) {
            return Err(Error::InvalidAlpha(self.alpha.to_f64_lossy()));
        }
        if !(self.latency_budget_ms.is_finite() && self.latency_budget_ms > T::zero()) {
            return Err(Error::InvalidBudget(self.latency_budget_ms.to_f64_lossy()));
        }
        Ok(())
    }

    pub fn with_alpha(&self, alpha: T) -> Self {
        Self { alpha, ..self.clone() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionResult<T> {
    /// Selected feature ids in table order.
    pub selected: Vec<String>,
    /// Cost coefficient of every feature, in table order.
    pub coefficients: Vec<(String, T)>,
    /// Sum of `-c` over the selection.
    pub objective_benefit: T,
    pub total_latency_ms: T,
    /// Features with a negative coefficient.
    pub candidate_pool: Vec<String>,
    pub alpha: T,
    pub category: Category,
    pub budget_ms: T,
}

impl<T: Real> SelectionResult<T> {
    pub fn to_json(&self) -> Value {
        let num = |v: T| serde_json::Number::from_f64(v.to_f64_lossy()).map_or(Value::Null, Value::Number);
        let mut coeffs = Map::new();
        for (id, c) in &self.coefficients {
            coeffs.insert(id.clone(), num(*c));
        }
        let mut obj = Map::new();
        obj.insert("selected".into(), Value::from(self.selected.clone()));
        obj.insert("coefficients".into(), Value::Object(coeffs));
        obj.insert("objective_benefit".into(), num(self.objective_benefit));
        obj.insert("total_latency_ms".into(), num(self.total_latency_ms));
        obj.insert("alpha".into(), num(self.alpha));
        obj.insert("category".into(), Value::from(self.category.as_str()));
        obj.insert("budget_ms".into(), num(self.budget_ms));
        Value::Object(obj)
    }
}

fn mean_privacy<T: Real>(privacy: &[(String, T)], weights: Option<&[(String, T)]>) -> Result<T> {
    let Some(weights) = weights else {
        if privacy.is_empty() {
            return Ok(T::zero());
        }
        return Ok(privacy.iter().map(|p| p.1).sum::<T>() / T::from_count(privacy.len()));
    };
    if let Some((name, _)) = weights.iter().find(|(n, _)| !privacy.iter().any(|(p, _)| p == n)) {
        return Err(Error::InvalidWeights(format!("no privacy scores for attribute `{name}`")));
    }
    if weights.iter().any(|(_, w)| !(w.is_finite() && *w >= T::zero())) {
        return Err(Error::InvalidWeights("attribute weights must be finite and non-negative".into()));
    }
    let total: T = weights.iter().map(|w| w.1).sum();
    if !(total > T::zero()) {
        return Err(Error::InvalidWeights("attribute weights sum to zero".into()));
    }
    let weighted: T = privacy
        .iter()
        .map(|(name, p)| *p * weights.iter().find(|(n, _)| n == name).map_or(T::zero(), |w| w.1))
        .sum();
    Ok(weighted / total)
}

/// `c_i = -alpha * u_i + (1 - alpha) * p_i` with `p_i` the (weighted) mean of
/// the attribute leakage scores.
pub fn coefficients<T: Real>(table: &ScoreTable<T>, req: &SelectionRequest<T>) -> Result<Vec<(String, T)>> {
    req.validate()?;
    table
        .entries()
        .iter()
        .map(|e| {
            let p = mean_privacy(&e.privacy, req.attribute_weights.as_deref())?;
            Ok((e.id.clone(), -req.alpha * e.utility_for(req.category) + (T::one() - req.alpha) * p))
        })
        .collect()
}

#[derive(Clone, Copy)]
struct Item<T> {
    index: usize,
    benefit: T,
    latency: T,
}

/// Candidates that fit the budget, sorted by benefit per millisecond.
fn items<T: Real>(table: &ScoreTable<T>, coeffs: &[(String, T)], budget: T) -> Vec<Item<T>> {
    let mut items: Vec<Item<T>> = table
        .entries()
        .iter()
        .zip(coeffs)
        .enumerate()
        .filter(|(_, (e, c))| c.1 < T::zero() && e.latency_ms <= budget)
        .map(|(index, (e, c))| Item { index, benefit: -c.1, latency: e.latency_ms })
        .collect();
    items.sort_by(|a, b| {
        (b.benefit / b.latency)
            .partial_cmp(&(a.benefit / a.latency))
            .unwrap_or(Ordering::Equal)
            .then(a.latency.partial_cmp(&b.latency).unwrap_or(Ordering::Equal))
            .then(a.index.cmp(&b.index))
    });
    items
}

/// Fractional-knapsack value of `items` with `capacity` left.
fn fractional_bound<T: Real>(items: &[Item<T>], mut capacity: T) -> T {
    let mut value = T::zero();
    for it in items {
        if it.latency <= capacity {
            value = value + it.benefit;
            capacity = capacity - it.latency;
        } else {
            value = value + it.benefit * capacity / it.latency;
            break;
        }
    }
    value
}

/// Optimum of the continuous relaxation `0 <= x_i <= 1`.
pub fn lp_relaxation<T: Real>(table: &ScoreTable<T>, req: &SelectionRequest<T>) -> Result<T> {
    let coeffs = coefficients(table, req)?;
    let all: Vec<Item<T>> = items(table, &coeffs, T::infinity());
    Ok(fractional_bound(&all, req.latency_budget_ms))
}

struct Incumbent<T> {
    benefit: T,
    latency: T,
    /// Selected table indices, ascending.
    indices: Vec<usize>,
}

struct Search<'a, T> {
    items: &'a [Item<T>],
    tol: T,
    latency_tol: T,
    best: Incumbent<T>,
    chosen: Vec<usize>,
}

impl<T: Real> Search<'_, T> {
    /// Higher benefit wins; within tolerance, lower latency, then the subset
    /// that comes first in table order.
    fn better(&self, benefit: T, latency: T, indices: &[usize]) -> bool {
        let b = &self.best;
        if benefit > b.benefit + self.tol {
            return true;
        }
        if benefit < b.benefit - self.tol {
            return false;
        }
        if latency < b.latency - self.latency_tol {
            return true;
        }
        if latency > b.latency + self.latency_tol {
            return false;
        }
        indices < b.indices.as_slice()
    }

    fn run(&mut self, k: usize, benefit: T, latency: T, capacity: T) {
        if k == self.items.len() {
            let mut indices = self.chosen.clone();
            indices.sort_unstable();
            if self.better(benefit, latency, &indices) {
                self.best = Incumbent { benefit, latency, indices };
            }
            return;
        }
        if benefit + fractional_bound(&self.items[k..], capacity) < self.best.benefit - self.tol {
            return;
        }
        let it = self.items[k];
        if it.latency <= capacity {
            self.chosen.push(it.index);
            self.run(k + 1, benefit + it.benefit, latency + it.latency, capacity - it.latency);
            self.chosen.pop();
        }
        self.run(k + 1, benefit, latency, capacity);
    }
}

/// Exact 0/1 optimum of `max Σ -c_i x_i` subject to `Σ t_i x_i <= T`, by
/// branch and bound with a fractional-knapsack bound. Features with
/// `c_i >= 0` are never selected.
pub fn select<T: Real>(table: &ScoreTable<T>, req: &SelectionRequest<T>) -> Result<SelectionResult<T>> {
    let coeffs = coefficients(table, req)?;
    let budget = req.latency_budget_ms;
    let items = items(table, &coeffs, budget);
    let total: T = items.iter().map(|i| i.benefit).sum();
    let total_latency: T = items.iter().map(|i| i.latency).sum();
    let mut search = Search {
        items: &items,
        tol: T::lit(1e-12) * total.max(T::one()),
        latency_tol: T::lit(1e-12) * total_latency.max(T::one()),
        best: Incumbent { benefit: T::zero(), latency: T::zero(), indices: Vec::new() },
        chosen: Vec::new(),
    };
    search.run(0, T::zero(), T::zero(), budget);

    let entries = table.entries();
    let indices = search.best.indices;
    let objective_benefit = indices.iter().map(|&i| -coeffs[i].1).sum();
    let total_latency_ms = indices.iter().map(|&i| entries[i].latency_ms).sum();
    Ok(SelectionResult {
        selected: indices.iter().map(|&i| entries[i].id.clone()).collect(),
        candidate_pool: coeffs.iter().filter(|c| c.1 < T::zero()).map(|c| c.0.clone()).collect(),
        coefficients: coeffs,
        objective_benefit,
        total_latency_ms,
        alpha: req.alpha,
        category: req.category,
        budget_ms: budget,
    })
}

/// [`select`] once per `alpha`, other settings taken from `base`.
pub fn sweep_alpha<T: Real>(
    table: &ScoreTable<T>,
    base: &SelectionRequest<T>,
    alphas: &[T],
) -> Result<Vec<SelectionResult<T>>> {
    alphas.iter().map(|&a| select(table, &base.with_alpha(a))).collect()
}
