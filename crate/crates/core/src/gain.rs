//! Entropy and information-gain feature weighting.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{ClassDistribution, InstanceBase};
use crate::symbol::Symbol;

/// Slack used when comparing gains and checking gain bounds.
pub const GAIN_EPSILON: f64 = 1e-9;

/// Class entropy in bits, with `0 * log2 0 = 0`.
pub fn entropy(dist: &ClassDistribution) -> Result<f64> {
    let total = dist.total();
    if total == 0 {
        return Err(Error::EmptyDistribution);
    }
    let total = total as f64;
    let h = dist
        .counts()
        .values()
        .filter(|&&n| n > 0)
        .map(|&n| {
            let p = n as f64 / total;
            -p * p.log2()
        })
        .sum::<f64>();
    Ok(h.max(0.0))
}

/// Weighted average entropy of the base restricted to each value of `feature`.
pub fn feature_entropy(base: &InstanceBase, feature: usize) -> Result<f64> {
    if feature >= base.arity() {
        return Err(Error::FeatureOutOfRange {
            index: feature,
            arity: base.arity(),
        });
    }
    if base.is_empty() {
        return Err(Error::EmptyBase);
    }
    let mut cells: HashMap<Symbol, ClassDistribution> = HashMap::new();
    for inst in base.instances() {
        cells
            .entry(inst.features[feature])
            .or_default()
            .add(inst.class, inst.count);
    }
    // Sum in value order so the floating-point result does not depend on hashing.
    let mut cells: Vec<_> = cells.into_iter().collect();
    cells.sort_by_key(|c| c.0);
    let total = base.total_count() as f64;
    let mut h = 0.0;
    for (_, dist) in &cells {
        h += entropy(dist)? * dist.total() as f64 / total;
    }
    Ok(h)
}

pub fn information_gain(base: &InstanceBase, feature: usize) -> Result<f64> {
    let conditional = feature_entropy(base, feature)?;
    Ok(entropy(&base.class_distribution())? - conditional)
}

/// Global ranking of features by weight, strongest first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureOrder {
    pub order: Vec<usize>,
    pub gains: Vec<f64>,
}

impl FeatureOrder {
    /// Sorts features by descending weight. Weights within `GAIN_EPSILON`
    /// of each other are treated as equal and ordered by ascending index.
    pub fn from_gains(gains: Vec<f64>) -> Self {
        let mut remaining: Vec<usize> = (0..gains.len()).collect();
        let mut order = Vec::with_capacity(gains.len());
        while !remaining.is_empty() {
            let mut best = 0;
            for (pos, &f) in remaining.iter().enumerate().skip(1) {
                if gains[f] > gains[remaining[best]] + GAIN_EPSILON {
                    best = pos;
                }
            }
            order.push(remaining.remove(best));
        }
        FeatureOrder { order, gains }
    }

    pub fn arity(&self) -> usize {
        self.order.len()
    }
}

pub fn compute_feature_order(base: &InstanceBase) -> Result<FeatureOrder> {
    compute_feature_order_with(base, information_gain)
}

/// Ranks features with an arbitrary weighting function (information gain by
/// default; gain ratio or similar could be dropped in here).
pub fn compute_feature_order_with<F>(base: &InstanceBase, weight: F) -> Result<FeatureOrder>
where
    F: Fn(&InstanceBase, usize) -> Result<f64>,
{
    if base.is_empty() {
        return Err(Error::EmptyBase);
    }
    let gains = (0..base.arity())
        .map(|f| weight(base, f))
        .collect::<Result<Vec<_>>>()?;
    Ok(FeatureOrder::from_gains(gains))
}
