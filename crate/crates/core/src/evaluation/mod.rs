//! Cross-validation, error metrics, significance tests and size reports.

mod cv;
mod folds;
mod metrics;
mod size;
mod stats;
mod utility;

pub use cv::{isolated_task_cv, run_cv, IsolatedTaskMetrics, MetricsReport, ModuleMetrics};
pub use folds::{make_folds, FoldPlan};
pub use metrics::{joint_ps_error, mean_sd, word_flawless, MetricSummary, PhonemeStress};
pub use size::{size_report, size_report_from_cv, ModuleSize, SizeReport, SystemSize};
pub use stats::{t_test_one_tailed, TTestResult, TTestVariant};
pub use utility::{isolated_tasks, utility_analysis, utility_table, UtilityRow, UtilityTable};

impl MetricsReport {
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} ({}, {} folds, seed {})\n",
            self.system, self.regime, self.folds, self.seed
        );
        out.push_str(&format!("  {:<32} {:>9} {:>9}\n", "metric", "mean", "sd"));
        for m in &self.modules {
            let name = format!("{} [{}]", m.task, m.input);
            out.push_str(&format!(
                "  {:<32} {:>9.2} {:>9.2}\n",
                name, m.error.mean, m.error.sd
            ));
        }
        for (name, s) in self.word_metrics() {
            out.push_str(&format!("  {:<32} {:>9.2} {:>9.2}\n", name, s.mean, s.sd));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::{generate_toy_lexicon, ToyParams, ToyRules};
    use crate::pipeline::{SystemSpec, TrainingRegime};

    fn toy(words: usize) -> Vec<crate::lexicon::AlignedEntry> {
        generate_toy_lexicon(&ToyParams {
            seed: 4,
            words,
            rules: ToyRules::Naturalistic,
        })
    }

    #[test]
    fn cv_is_deterministic_across_pool_sizes() {
        let entries = toy(120);
        let plan = make_folds(entries.len(), 4, 8).unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| {
                    run_cv(
                        &SystemSpec::mgs(),
                        &entries,
                        TrainingRegime::Adaptive,
                        &plan,
                    )
                    .unwrap()
                })
        };
        let (a, b) = (run(1), run(3));
        assert_eq!(a, b);
        assert_eq!(a.fold_rows(), b.fold_rows());
    }

    #[test]
    fn report_shapes() {
        let entries = toy(90);
        let plan = make_folds(entries.len(), 3, 1).unwrap();
        let r = run_cv(&SystemSpec::magys(), &entries, TrainingRegime::Ideal, &plan).unwrap();
        assert_eq!(r.modules.len(), 5);
        assert!(r.modules.iter().all(|m| m.error.per_fold.len() == 3));
        assert!(r.joint_error.mean >= r.phoneme_error.mean.max(r.stress_error.mean) - 1e-9);
        assert_eq!(r.fold_rows().len(), 3 * (5 * 2 + 5));
        assert!(r.to_text().contains("S_on_phonemes"));
    }

    #[test]
    fn mismatched_plan_rejected() {
        let entries = toy(30);
        let plan = make_folds(40, 3, 1).unwrap();
        assert!(run_cv(&SystemSpec::gs(), &entries, TrainingRegime::Ideal, &plan).is_err());
    }
}
