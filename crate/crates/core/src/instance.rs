//! Fixed-arity symbolic instances and the instance base they live in.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::symbol::Symbol;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledInstance {
    pub features: Vec<Symbol>,
    pub class: Symbol,
    /// Multiplicity; duplicate windows are counted, not dropped.
    pub count: u64,
}

/// Multiset of labeled instances sharing one arity.
///
/// Identical (features, class) pairs are merged into a single entry whose
/// `count` carries the multiplicity.
#[derive(Debug, Clone)]
pub struct InstanceBase {
    arity: usize,
    instances: Vec<LabeledInstance>,
    index: HashMap<(Vec<Symbol>, Symbol), usize>,
    class_alphabet: BTreeSet<Symbol>,
    value_alphabets: Vec<BTreeSet<Symbol>>,
    total: u64,
}

impl InstanceBase {
    pub fn new(arity: usize) -> Self {
        InstanceBase {
            arity,
            instances: Vec::new(),
            index: HashMap::new(),
            class_alphabet: BTreeSet::new(),
            value_alphabets: vec![BTreeSet::new(); arity],
            total: 0,
        }
    }

    pub fn from_instances(
        arity: usize,
        instances: impl IntoIterator<Item = LabeledInstance>,
    ) -> Result<Self> {
        let mut base = InstanceBase::new(arity);
        for inst in instances {
            base.add_counted(inst.features, inst.class, inst.count)?;
        }
        Ok(base)
    }

    pub fn add(&mut self, features: Vec<Symbol>, class: Symbol) -> Result<()> {
        self.add_counted(features, class, 1)
    }

    pub fn add_counted(&mut self, features: Vec<Symbol>, class: Symbol, count: u64) -> Result<()> {
        if features.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                actual: features.len(),
            });
        }
        if count == 0 {
            return Err(Error::ZeroCount);
        }
        for (alphabet, &v) in self.value_alphabets.iter_mut().zip(&features) {
            alphabet.insert(v);
        }
        self.class_alphabet.insert(class);
        self.total += count;
        let key = (features, class);
        if let Some(&i) = self.index.get(&key) {
            self.instances[i].count += count;
        } else {
            self.index.insert(key.clone(), self.instances.len());
            self.instances.push(LabeledInstance {
                features: key.0,
                class,
                count,
            });
        }
        Ok(())
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn instances(&self) -> &[LabeledInstance] {
        &self.instances
    }

    /// Total number of instances, multiplicities included.
    pub fn total_count(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn class_alphabet(&self) -> &BTreeSet<Symbol> {
        &self.class_alphabet
    }

    pub fn value_alphabet(&self, feature: usize) -> Option<&BTreeSet<Symbol>> {
        self.value_alphabets.get(feature)
    }

    pub fn class_distribution(&self) -> ClassDistribution {
        ClassDistribution::from_weighted(self.instances.iter().map(|i| (i.class, i.count)))
    }
}

/// Class counts of an instance (sub)set.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClassDistribution {
    counts: BTreeMap<Symbol, u64>,
}

impl ClassDistribution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_weighted(pairs: impl IntoIterator<Item = (Symbol, u64)>) -> Self {
        let mut dist = ClassDistribution::new();
        for (class, n) in pairs {
            dist.add(class, n);
        }
        dist
    }

    pub fn add(&mut self, class: Symbol, n: u64) {
        if n > 0 {
            *self.counts.entry(class).or_insert(0) += n;
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn counts(&self) -> &BTreeMap<Symbol, u64> {
        &self.counts
    }

    pub fn num_classes(&self) -> usize {
        self.counts.len()
    }

    /// Most frequent class; ties go to the lexicographically smallest token.
    pub fn majority(&self) -> Option<Symbol> {
        let mut best: Option<(Symbol, u64)> = None;
        // BTreeMap iterates in token order, so strict `>` keeps the smallest on ties.
        for (&class, &n) in &self.counts {
            match best {
                Some((_, m)) if n <= m => {}
                _ => best = Some((class, n)),
            }
        }
        best.map(|(c, _)| c)
    }
}
