use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::folds::FoldPlan;
use super::metrics::{ErrorCounts, MetricSummary};
use crate::error::{Error, Result};
use crate::instance::InstanceBase;
use crate::lexicon::{derive_class, window_instances, AlignedEntry, StreamSpec, TaskKind, WINDOW};
use crate::pipeline::{learn, train_system, SystemSpec, TrainingRegime};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModuleMetrics {
    pub task: TaskKind,
    pub input: StreamSpec,
    /// Instance-level classification error, percent.
    pub error: MetricSummary,
    pub nodes: MetricSummary,
}

/// Cross-validated scores of one system under one regime.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub system: String,
    pub regime: TrainingRegime,
    pub folds: usize,
    pub seed: u64,
    pub partition: String,
    pub modules: Vec<ModuleMetrics>,
    pub phoneme_error: MetricSummary,
    pub stress_error: MetricSummary,
    pub joint_error: MetricSummary,
    pub word_flawless: MetricSummary,
    /// Training-set joint error per fold, percent.
    pub training_joint_error: MetricSummary,
}

impl MetricsReport {
    pub fn module(&self, task: TaskKind) -> Option<&ModuleMetrics> {
        self.modules.iter().find(|m| m.task == task)
    }

    /// Every (fold, metric, value) triple, metric names qualified by module.
    pub fn fold_rows(&self) -> Vec<(usize, String, String, f64)> {
        let mut rows = Vec::new();
        for fold in 0..self.folds {
            for m in &self.modules {
                rows.push((
                    fold,
                    m.task.name().to_string(),
                    "error".to_string(),
                    m.error.per_fold[fold],
                ));
                rows.push((
                    fold,
                    m.task.name().to_string(),
                    "nodes".to_string(),
                    m.nodes.per_fold[fold],
                ));
            }
            for (name, s) in self.word_metrics() {
                rows.push((
                    fold,
                    "system".to_string(),
                    name.to_string(),
                    s.per_fold[fold],
                ));
            }
        }
        rows
    }

    pub fn word_metrics(&self) -> [(&'static str, &MetricSummary); 5] {
        [
            ("phoneme_error", &self.phoneme_error),
            ("stress_error", &self.stress_error),
            ("joint_error", &self.joint_error),
            ("word_flawless", &self.word_flawless),
            ("training_joint_error", &self.training_joint_error),
        ]
    }
}

struct FoldResult {
    module_errors: Vec<f64>,
    module_nodes: Vec<f64>,
    test: ErrorCounts,
    train: ErrorCounts,
}

fn check_plan(plan: &FoldPlan, entries: &[AlignedEntry]) -> Result<()> {
    if plan.words != entries.len() {
        return Err(Error::InvalidFolds(format!(
            "fold plan covers {} words, lexicon has {}",
            plan.words,
            entries.len()
        )));
    }
    Ok(())
}

fn pick(entries: &[AlignedEntry], idx: &[usize]) -> Vec<AlignedEntry> {
    idx.iter().map(|&i| entries[i].clone()).collect()
}

fn run_fold(
    spec: &SystemSpec,
    entries: &[AlignedEntry],
    regime: TrainingRegime,
    plan: &FoldPlan,
    fold: usize,
) -> Result<FoldResult> {
    let train = pick(entries, &plan.train(fold));
    let test = pick(entries, plan.test(fold));
    let system = train_system(spec, &train, regime)?;
    let mut wrong = vec![0usize; spec.modules.len()];
    let mut positions = 0usize;
    let mut test_counts = ErrorCounts::default();
    for entry in &test {
        let gold_inputs = if regime.cascades_at_test() {
            None
        } else {
            Some(entry)
        };
        let trace = system.trace(entry.letters(), gold_inputs)?;
        positions += entry.len();
        for (k, module) in spec.modules.iter().enumerate() {
            wrong[k] += trace.module_outputs[k]
                .iter()
                .enumerate()
                .filter(|&(i, c)| *c != derive_class(entry, i, module.task))
                .count();
        }
        let predicted: Vec<_> = trace.phonemes.into_iter().zip(trace.stress).collect();
        test_counts.add_word(&predicted, &gold_pairs(entry));
    }
    let mut train_counts = ErrorCounts::default();
    for entry in &train {
        let gold_inputs = if regime.cascades_at_test() {
            None
        } else {
            Some(entry)
        };
        let trace = system.trace(entry.letters(), gold_inputs)?;
        let predicted: Vec<_> = trace.phonemes.into_iter().zip(trace.stress).collect();
        train_counts.add_word(&predicted, &gold_pairs(entry));
    }
    Ok(FoldResult {
        module_errors: wrong.iter().map(|&w| percent(w, positions)).collect(),
        module_nodes: system
            .modules
            .iter()
            .map(|m| m.tree.node_count() as f64)
            .collect(),
        test: test_counts,
        train: train_counts,
    })
}

fn gold_pairs(entry: &AlignedEntry) -> Vec<(crate::symbol::Symbol, u8)> {
    entry
        .phonemes()
        .iter()
        .copied()
        .zip(entry.stress().iter().copied())
        .collect()
}

fn percent(wrong: usize, total: usize) -> f64 {
    if total == 0 {
        0.0
    } else {
        100.0 * wrong as f64 / total as f64
    }
}

/// Runs n-fold cross-validation of one system. Folds run on the current
/// rayon pool; results are identical whatever its size.
pub fn run_cv(
    spec: &SystemSpec,
    entries: &[AlignedEntry],
    regime: TrainingRegime,
    plan: &FoldPlan,
) -> Result<MetricsReport> {
    spec.validate()?;
    check_plan(plan, entries)?;
    let results = (0..plan.n)
        .into_par_iter()
        .map(|fold| {
            run_fold(spec, entries, regime, plan, fold).map_err(|e| Error::InFold {
                fold,
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let column =
        |f: &dyn Fn(&FoldResult) -> f64| MetricSummary::from_folds(results.iter().map(f).collect());
    let modules = spec
        .modules
        .iter()
        .enumerate()
        .map(|(k, m)| ModuleMetrics {
            task: m.task,
            input: if regime == TrainingRegime::Isolated {
                StreamSpec::plain(m.task.isolated_base())
            } else {
                m.input.clone()
            },
            error: column(&|r| r.module_errors[k]),
            nodes: column(&|r| r.module_nodes[k]),
        })
        .collect();
    Ok(MetricsReport {
        system: spec.name.clone(),
        regime,
        folds: plan.n,
        seed: plan.seed,
        partition: "word".to_string(),
        modules,
        phoneme_error: column(&|r| r.test.phoneme_error()),
        stress_error: column(&|r| r.test.stress_error()),
        joint_error: column(&|r| r.test.joint_error()),
        word_flawless: column(&|r| r.test.word_flawless()),
        training_joint_error: column(&|r| r.train.joint_error()),
    })
}

/// Error of a single task learned from its isolated base stream with no
/// annotations, tested on gold windows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsolatedTaskMetrics {
    pub task: TaskKind,
    pub input: StreamSpec,
    pub error: MetricSummary,
    pub nodes: MetricSummary,
}

impl IsolatedTaskMetrics {
    /// (fold, metric, value) triples.
    pub fn fold_rows(&self) -> Vec<(usize, &'static str, f64)> {
        let mut rows = Vec::new();
        for (fold, (e, n)) in self
            .error
            .per_fold
            .iter()
            .zip(&self.nodes.per_fold)
            .enumerate()
        {
            rows.push((fold, "error", *e));
            rows.push((fold, "nodes", *n));
        }
        rows
    }
}

pub fn isolated_task_cv(
    task: TaskKind,
    entries: &[AlignedEntry],
    plan: &FoldPlan,
) -> Result<IsolatedTaskMetrics> {
    check_plan(plan, entries)?;
    let input = StreamSpec::plain(task.isolated_base());
    let per_fold = (0..plan.n)
        .into_par_iter()
        .map(|fold| {
            let mut base = InstanceBase::new(WINDOW.arity());
            for i in plan.train(fold) {
                for inst in window_instances(&entries[i], task, &input) {
                    base.add(inst.features, inst.class)?;
                }
            }
            if base.is_empty() {
                return Err(Error::EmptyTrainingSet);
            }
            let tree = learn(base)?;
            let (mut wrong, mut total) = (0usize, 0usize);
            for &i in plan.test(fold) {
                for inst in window_instances(&entries[i], task, &input) {
                    total += 1;
                    wrong += usize::from(tree.classify(&inst.features)? != inst.class);
                }
            }
            Ok((percent(wrong, total), tree.node_count() as f64))
        })
        .collect::<Result<Vec<_>>>()?;
    let (errors, nodes): (Vec<f64>, Vec<f64>) = per_fold.into_iter().unzip();
    Ok(IsolatedTaskMetrics {
        task,
        input,
        error: MetricSummary::from_folds(errors),
        nodes: MetricSummary::from_folds(nodes),
    })
}
