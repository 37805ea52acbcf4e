use serde::{Deserialize, Serialize};

use super::cv::MetricsReport;
use crate::lexicon::TaskKind;
use crate::pipeline::{TrainedSystem, TrainingRegime};
use crate::tree::BYTES_PER_NODE;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModuleSize {
    pub task: TaskKind,
    pub nodes: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemSize {
    pub system: String,
    pub regime: TrainingRegime,
    pub modules: Vec<ModuleSize>,
    pub total_nodes: f64,
    pub bytes_estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SizeReport {
    pub systems: Vec<SystemSize>,
}

fn system_size(system: String, regime: TrainingRegime, modules: Vec<ModuleSize>) -> SystemSize {
    let total_nodes = modules.iter().map(|m| m.nodes).sum::<f64>();
    SystemSize {
        system,
        regime,
        modules,
        total_nodes,
        bytes_estimate: total_nodes * BYTES_PER_NODE as f64,
    }
}

/// Node counts of trained systems.
pub fn size_report(systems: &[&TrainedSystem]) -> SizeReport {
    SizeReport {
        systems: systems
            .iter()
            .map(|s| {
                let modules = s
                    .modules
                    .iter()
                    .map(|m| ModuleSize {
                        task: m.task,
                        nodes: m.tree.node_count() as f64,
                    })
                    .collect();
                system_size(s.spec.name.clone(), s.regime, modules)
            })
            .collect(),
    }
}

/// Node counts averaged over the folds of each cross-validation run.
pub fn size_report_from_cv(reports: &[MetricsReport]) -> SizeReport {
    SizeReport {
        systems: reports
            .iter()
            .map(|r| {
                let modules = r
                    .modules
                    .iter()
                    .map(|m| ModuleSize {
                        task: m.task,
                        nodes: m.nodes.mean,
                    })
                    .collect();
                system_size(r.system.clone(), r.regime, modules)
            })
            .collect(),
    }
}

impl SizeReport {
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{:<8} {:<9} {:<14} {:>12}\n",
            "system", "regime", "module", "nodes"
        );
        for s in &self.systems {
            for m in &s.modules {
                out.push_str(&format!(
                    "{:<8} {:<9} {:<14} {:>12.1}\n",
                    s.system,
                    s.regime.name(),
                    m.task.name(),
                    m.nodes
                ));
            }
            out.push_str(&format!(
                "{:<8} {:<9} {:<14} {:>12.1}  ({:.0} bytes)\n",
                s.system,
                s.regime.name(),
                "total",
                s.total_nodes,
                s.bytes_estimate
            ));
        }
        out
    }
}
