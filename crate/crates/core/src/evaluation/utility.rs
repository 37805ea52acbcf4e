use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::cv::{isolated_task_cv, run_cv, IsolatedTaskMetrics, MetricsReport};
use super::folds::FoldPlan;
use crate::error::{Error, Result};
use crate::lexicon::{AlignedEntry, TaskKind};
use crate::pipeline::{SystemSpec, TrainingRegime};

/// One subtask of one system: its isolated error next to the error it
/// reaches inside the system, with utility = isolated - contextual.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UtilityRow {
    pub system: String,
    pub subtask: String,
    pub isolated_task: TaskKind,
    pub isolated: f64,
    pub ideal: Option<f64>,
    pub ideal_utility: Option<f64>,
    pub actual: f64,
    pub actual_utility: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct UtilityTable {
    pub rows: Vec<UtilityRow>,
}

/// Tasks whose isolated error is needed to fill the utility rows of `spec`.
pub fn isolated_tasks(spec: &SystemSpec) -> Vec<TaskKind> {
    spec.modules
        .iter()
        .flat_map(|m| match m.task {
            TaskKind::GS => vec![TaskKind::G, TaskKind::SOnLetters],
            t => vec![t],
        })
        .collect()
}

fn find<'a>(
    reports: &'a [MetricsReport],
    system: &str,
    regime: TrainingRegime,
) -> Result<&'a MetricsReport> {
    reports
        .iter()
        .find(|r| r.system == system && r.regime == regime)
        .ok_or_else(|| Error::InvalidSystem(format!("no {regime} report for {system}")))
}

/// Assembles the table from already computed cross-validation results.
pub fn utility_table(
    specs: &[SystemSpec],
    isolated: &BTreeMap<TaskKind, IsolatedTaskMetrics>,
    reports: &[MetricsReport],
) -> Result<UtilityTable> {
    let iso = |t: TaskKind| {
        isolated
            .get(&t)
            .map(|m| m.error.mean)
            .ok_or_else(|| Error::InvalidSystem(format!("no isolated result for {t}")))
    };
    let mut rows = Vec::new();
    for spec in specs {
        let actual = find(reports, &spec.name, TrainingRegime::Adaptive)?;
        let ideal = find(reports, &spec.name, TrainingRegime::Ideal).ok();
        for module in &spec.modules {
            if module.task == TaskKind::GS {
                for (label, task, err) in [
                    ("G", TaskKind::G, actual.phoneme_error.mean),
                    ("S", TaskKind::SOnLetters, actual.stress_error.mean),
                ] {
                    let isolated = iso(task)?;
                    rows.push(UtilityRow {
                        system: spec.name.clone(),
                        subtask: label.to_string(),
                        isolated_task: task,
                        isolated,
                        ideal: None,
                        ideal_utility: None,
                        actual: err,
                        actual_utility: isolated - err,
                    });
                }
                continue;
            }
            let isolated = iso(module.task)?;
            let ideal_err = match ideal {
                Some(r) => r.module(module.task).map(|m| m.error.mean),
                None => None,
            };
            let actual_err = actual
                .module(module.task)
                .map(|m| m.error.mean)
                .ok_or_else(|| {
                    Error::InvalidSystem(format!("{} lacks module {}", spec.name, module.task))
                })?;
            rows.push(UtilityRow {
                system: spec.name.clone(),
                subtask: module.task.label().to_string(),
                isolated_task: module.task,
                isolated,
                ideal: ideal_err,
                ideal_utility: ideal_err.map(|e| isolated - e),
                actual: actual_err,
                actual_utility: isolated - actual_err,
            });
        }
    }
    Ok(UtilityTable { rows })
}

/// Runs every cross-validation the table needs, then assembles it.
pub fn utility_analysis(
    specs: &[SystemSpec],
    entries: &[AlignedEntry],
    plan: &FoldPlan,
) -> Result<UtilityTable> {
    let mut isolated = BTreeMap::new();
    for spec in specs {
        for task in isolated_tasks(spec) {
            if let std::collections::btree_map::Entry::Vacant(slot) = isolated.entry(task) {
                slot.insert(isolated_task_cv(task, entries, plan)?);
            }
        }
    }
    let mut reports = Vec::new();
    for spec in specs {
        for regime in [TrainingRegime::Ideal, TrainingRegime::Adaptive] {
            reports.push(run_cv(spec, entries, regime, plan)?);
        }
    }
    utility_table(specs, &isolated, &reports)
}

impl UtilityTable {
    pub fn to_text(&self) -> String {
        let fmt = |v: Option<f64>| v.map_or("--".to_string(), |x| format!("{x:.2}"));
        let mut out = format!(
            "{:<8} {:<7} {:>9} {:>9} {:>9} {:>9} {:>9}\n",
            "system", "subtask", "isolated", "ideal", "utility", "actual", "utility"
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{:<8} {:<7} {:>9.2} {:>9} {:>9} {:>9.2} {:>9.2}\n",
                r.system,
                r.subtask,
                r.isolated,
                fmt(r.ideal),
                fmt(r.ideal_utility),
                r.actual,
                r.actual_utility
            ));
        }
        out
    }
}
