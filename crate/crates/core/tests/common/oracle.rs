//! Brute-force reference implementations used to check the tree learner.
//!
//! Nothing here touches the library's instance base, distribution or tree
//! types: rows are plain strings and every quantity is recomputed from
//! scratch.

#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::Rng;

#[derive(Debug, Clone)]
pub struct Row {
    pub features: Vec<String>,
    pub class: String,
    pub count: u64,
}

/// Random rows over `alphabet` values per feature and `classes` labels.
pub fn random_rows<R: Rng>(
    rng: &mut R,
    arity: usize,
    alphabet: usize,
    classes: usize,
    n: usize,
) -> Vec<Row> {
    (0..n)
        .map(|_| Row {
            features: (0..arity)
                .map(|_| format!("v{}", rng.random_range(0..alphabet)))
                .collect(),
            class: format!("c{}", rng.random_range(0..classes)),
            count: rng.random_range(1..=3),
        })
        .collect()
}

/// Multiplicity-weighted majority, ties to the smallest class string.
pub fn majority<'a>(rows: impl IntoIterator<Item = &'a Row>) -> Option<String> {
    let mut counts: BTreeMap<&str, u64> = BTreeMap::new();
    for r in rows {
        *counts.entry(r.class.as_str()).or_default() += r.count;
    }
    let max = *counts.values().max()?;
    counts
        .into_iter()
        .find(|&(_, n)| n == max)
        .map(|(c, _)| c.to_owned())
}

fn is_single_class(rows: &[&Row]) -> bool {
    rows.iter().all(|r| r.class == rows[0].class)
}

/// Sequential-filter reference classifier.
pub fn oracle_classify(rows: &[Row], order: &[usize], x: &[String]) -> String {
    let mut current: Vec<&Row> = rows.iter().collect();
    for &f in order {
        if is_single_class(&current) {
            return current[0].class.clone();
        }
        let next: Vec<&Row> = current
            .iter()
            .copied()
            .filter(|r| r.features[f] == x[f])
            .collect();
        if next.is_empty() {
            return majority(current.iter().copied()).unwrap();
        }
        current = next;
    }
    majority(current.iter().copied()).unwrap()
}

pub fn brute_entropy(rows: &[&Row]) -> f64 {
    let total: f64 = rows.iter().map(|r| r.count as f64).sum();
    let mut per_class: BTreeMap<&str, f64> = BTreeMap::new();
    for r in rows {
        *per_class.entry(&r.class).or_default() += r.count as f64;
    }
    let mut h = 0.0;
    for n in per_class.values() {
        let p = n / total;
        if p > 0.0 {
            h -= p * p.log2();
        }
    }
    h
}

pub fn brute_feature_entropy(rows: &[Row], f: usize) -> f64 {
    let total: f64 = rows.iter().map(|r| r.count as f64).sum();
    let mut values: Vec<&str> = rows.iter().map(|r| r.features[f].as_str()).collect();
    values.sort_unstable();
    values.dedup();
    values
        .into_iter()
        .map(|v| {
            let cell: Vec<&Row> = rows.iter().filter(|r| r.features[f] == v).collect();
            let weight: f64 = cell.iter().map(|r| r.count as f64).sum::<f64>() / total;
            brute_entropy(&cell) * weight
        })
        .sum()
}

pub fn brute_gain(rows: &[Row], f: usize) -> f64 {
    let all: Vec<&Row> = rows.iter().collect();
    brute_entropy(&all) - brute_feature_entropy(rows, f)
}

/// Every vector over the observed values plus one unseen value per feature.
pub fn all_vectors(arity: usize, alphabet: usize) -> Vec<Vec<String>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        let mut next = Vec::new();
        for prefix in &out {
            for v in 0..=alphabet {
                let mut p = prefix.clone();
                p.push(format!("v{v}"));
                next.push(p);
            }
        }
        out = next;
    }
    out
}
