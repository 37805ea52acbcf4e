use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{anyhow, Context};
use serde::Serialize;
use wordpron::evaluation::{
    isolated_task_cv, isolated_tasks, make_folds, run_cv, size_report_from_cv, t_test_one_tailed,
    utility_table, FoldPlan, IsolatedTaskMetrics, MetricsReport, SizeReport, TTestResult,
    TTestVariant, UtilityTable,
};
use wordpron::lexicon::{AlignedEntry, TaskKind};
use wordpron::pipeline::{train_system, SystemSpec, TrainingRegime};

use crate::config::{ReportFormat, RunConfig};
use crate::{write_text, CliResult, ResultExt};

pub const REPORT_FORMAT_VERSION: u32 = 1;

const PARTITION_NOTE: &str = "folds partition whole words, so no word contributes windows to both \
training and test material of the same fold";

#[derive(Debug, Clone, Serialize)]
pub struct Partition {
    pub unit: &'static str,
    pub folds: usize,
    pub seed: u64,
    pub words: usize,
    pub note: &'static str,
}

/// Both t variants for one pair of systems on per-fold joint error.
#[derive(Debug, Clone, Serialize)]
pub struct PairwiseTest {
    pub regime: TrainingRegime,
    pub a: String,
    pub b: String,
    pub metric: &'static str,
    pub paired: TTestResult,
    pub pooled: TTestResult,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub format_version: u32,
    /// Unix seconds; the only field that differs between identical runs.
    pub generated_at: u64,
    pub partition: Partition,
    pub systems: Vec<SystemSpec>,
    pub metrics: Vec<MetricsReport>,
    pub isolated: Vec<IsolatedTaskMetrics>,
    pub utility: Option<UtilityTable>,
    pub sizes: SizeReport,
    pub t_tests: Vec<PairwiseTest>,
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub output_dir: PathBuf,
    pub files: Vec<PathBuf>,
    pub cells: usize,
}

struct Writer<'a> {
    dir: &'a Path,
    files: Vec<PathBuf>,
}

impl Writer<'_> {
    fn text(&mut self, name: &str, text: &str) -> CliResult<()> {
        let path = self.dir.join(name);
        write_text(&path, text)?;
        self.files.push(path);
        Ok(())
    }

    fn csv<R: Serialize>(
        &mut self,
        name: &str,
        header: &[&str],
        rows: impl IntoIterator<Item = R>,
    ) -> CliResult<()> {
        let path = self.dir.join(name);
        let mut w = csv::WriterBuilder::new()
            .has_headers(false)
            .from_path(&path)
            .with_context(|| format!("cannot write {}", path.display()))
            .failed()?;
        w.write_record(header).failed()?;
        for row in rows {
            w.serialize(row).failed()?;
        }
        w.flush().failed()?;
        self.files.push(path);
        Ok(())
    }
}

fn pairwise_tests(metrics: &[MetricsReport], config: &RunConfig) -> CliResult<Vec<PairwiseTest>> {
    let mut tests = Vec::new();
    for &regime in &config.regimes {
        let cells: Vec<&MetricsReport> = metrics.iter().filter(|m| m.regime == regime).collect();
        for (i, a) in cells.iter().enumerate() {
            for b in &cells[i + 1..] {
                let (x, y) = (&a.joint_error.per_fold, &b.joint_error.per_fold);
                let run = |v| {
                    t_test_one_tailed(x, y, v)
                        .with_context(|| format!("{} vs {} ({regime})", a.system, b.system))
                };
                tests.push(PairwiseTest {
                    regime,
                    a: a.system.clone(),
                    b: b.system.clone(),
                    metric: "joint_error",
                    paired: run(TTestVariant::Paired).failed()?,
                    pooled: run(TTestVariant::Pooled).failed()?,
                });
            }
        }
    }
    Ok(tests)
}

fn text_report(report: &RunReport) -> String {
    let mut out = format!(
        "{} words, {} word-level folds, seed {}\n\n",
        report.partition.words, report.partition.folds, report.partition.seed
    );
    for m in &report.metrics {
        out.push_str(&m.to_text());
        out.push('\n');
    }
    if !report.isolated.is_empty() {
        out.push_str("isolated tasks\n");
        for m in &report.isolated {
            out.push_str(&format!(
                "  {:<32} {:>9.2} {:>9.2}\n",
                format!("{} [{}]", m.task, m.input),
                m.error.mean,
                m.error.sd
            ));
        }
        out.push('\n');
    }
    if let Some(u) = &report.utility {
        out.push_str("utility (isolated minus contextual error)\n");
        out.push_str(&u.to_text());
        out.push('\n');
    }
    out.push_str("tree sizes (mean nodes per fold)\n");
    out.push_str(&report.sizes.to_text());
    if !report.t_tests.is_empty() {
        out.push_str("\none-tailed t-tests on joint error\n");
        for t in &report.t_tests {
            for r in [&t.paired, &t.pooled] {
                out.push_str(&format!(
                    "  {:<9} {:<6} vs {:<6} {:<7} t({}) = {:.3}  p = {:.4}\n",
                    t.regime.name(),
                    t.a,
                    t.b,
                    format!("{:?}", r.variant).to_lowercase(),
                    r.df,
                    r.t,
                    r.p
                ));
            }
        }
    }
    out
}

#[derive(Serialize)]
struct FoldRow<'a> {
    fold: usize,
    word_index: usize,
    word: &'a str,
}

#[derive(Serialize)]
struct MetricRow<'a> {
    system: &'a str,
    regime: &'a str,
    fold: usize,
    module: &'a str,
    metric: &'a str,
    value: f64,
}

#[derive(Serialize)]
struct BarRow<'a> {
    system: &'a str,
    regime: &'a str,
    bar: &'a str,
    mean: f64,
    sd: f64,
}

#[derive(Serialize)]
struct SizeRow<'a> {
    system: &'a str,
    regime: &'a str,
    module: &'a str,
    mean_nodes: f64,
    sd_nodes: f64,
}

fn write_outputs(
    config: &RunConfig,
    report: &RunReport,
    entries: &[AlignedEntry],
    plan: &FoldPlan,
    w: &mut Writer,
) -> CliResult<()> {
    w.text(
        "config.toml",
        &toml::to_string(config)
            .context("cannot render config")
            .failed()?,
    )?;
    let words: Vec<String> = entries.iter().map(|e| e.word()).collect();
    let fold_rows = (0..plan.n).flat_map(|f| plan.test(f).iter().map(move |&i| (f, i)));
    w.csv(
        "folds.csv",
        &["fold", "word_index", "word"],
        fold_rows.map(|(fold, i)| FoldRow {
            fold,
            word_index: i,
            word: &words[i],
        }),
    )?;
    if config.wants(ReportFormat::Json) {
        w.text(
            "report.json",
            &serde_json::to_string_pretty(report).failed()?,
        )?;
    }
    if config.wants(ReportFormat::Text) {
        w.text("report.txt", &text_report(report))?;
    }
    if !config.wants(ReportFormat::Csv) {
        return Ok(());
    }
    let mut rows = Vec::new();
    for m in &report.metrics {
        for (fold, module, metric, value) in m.fold_rows() {
            rows.push((
                m.system.clone(),
                m.regime.name(),
                fold,
                module,
                metric.to_string(),
                value,
            ));
        }
    }
    for m in &report.isolated {
        for (fold, metric, value) in m.fold_rows() {
            rows.push((
                "isolated-task".to_string(),
                "isolated",
                fold,
                m.task.name().to_string(),
                metric.to_string(),
                value,
            ));
        }
    }
    w.csv(
        "per_fold.csv",
        &["system", "regime", "fold", "module", "metric", "value"],
        rows.iter().map(|(s, r, f, m, k, v)| MetricRow {
            system: s,
            regime: r,
            fold: *f,
            module: m,
            metric: k,
            value: *v,
        }),
    )?;
    let mut bars = Vec::new();
    for m in &report.metrics {
        for mm in &m.modules {
            bars.push((m, mm.task.label(), &mm.error));
        }
        bars.push((m, "phonemes", &m.phoneme_error));
        bars.push((m, "stress", &m.stress_error));
        bars.push((m, "PS", &m.joint_error));
    }
    w.csv(
        "plot_errors.csv",
        &["system", "regime", "bar", "mean", "sd"],
        bars.iter().map(|(m, bar, s)| BarRow {
            system: &m.system,
            regime: m.regime.name(),
            bar,
            mean: s.mean,
            sd: s.sd,
        }),
    )?;
    let mut sizes = Vec::new();
    for m in &report.metrics {
        for mm in &m.modules {
            sizes.push(SizeRow {
                system: &m.system,
                regime: m.regime.name(),
                module: mm.task.name(),
                mean_nodes: mm.nodes.mean,
                sd_nodes: mm.nodes.sd,
            });
        }
    }
    w.csv(
        "plot_sizes.csv",
        &["system", "regime", "module", "mean_nodes", "sd_nodes"],
        sizes,
    )?;
    Ok(())
}

/// Cross-validates every configured (system, regime) cell over one shared
/// fold plan, then writes reports and one trained artifact per cell.
pub fn cmd_run(config: &RunConfig) -> CliResult<RunSummary> {
    config.validate().invalid()?;
    let systems = config.resolve_systems().invalid()?;
    let entries = config.load_lexicon()?;
    let plan = make_folds(entries.len(), config.folds, config.seed).invalid()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .failed()?;

    let (metrics, isolated) = pool.install(|| -> CliResult<_> {
        let mut metrics = Vec::new();
        for spec in &systems {
            for &regime in &config.regimes {
                let report = run_cv(spec, &entries, regime, &plan)
                    .with_context(|| format!("system {} regime {regime}", spec.name))
                    .failed()?;
                metrics.push(report);
            }
        }
        let mut tasks: Vec<TaskKind> = Vec::new();
        if config.regimes.contains(&TrainingRegime::Adaptive) {
            for spec in &systems {
                for t in isolated_tasks(spec) {
                    if !tasks.contains(&t) {
                        tasks.push(t);
                    }
                }
            }
        }
        let isolated = tasks
            .iter()
            .map(|&t| {
                isolated_task_cv(t, &entries, &plan)
                    .with_context(|| format!("isolated task {t}"))
                    .failed()
            })
            .collect::<CliResult<Vec<_>>>()?;
        Ok((metrics, isolated))
    })?;

    let utility = if isolated.is_empty() {
        None
    } else {
        let by_task = isolated.iter().map(|m| (m.task, m.clone())).collect();
        Some(
            utility_table(&systems, &by_task, &metrics)
                .context("utility table")
                .failed()?,
        )
    };
    let t_tests = pairwise_tests(&metrics, config)?;
    let report = RunReport {
        format_version: REPORT_FORMAT_VERSION,
        generated_at: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        partition: Partition {
            unit: "word",
            folds: plan.n,
            seed: plan.seed,
            words: entries.len(),
            note: PARTITION_NOTE,
        },
        systems: systems.clone(),
        sizes: size_report_from_cv(&metrics),
        metrics,
        isolated,
        utility,
        t_tests,
    };

    let dir = &config.output_dir;
    std::fs::create_dir_all(dir.join("systems"))
        .with_context(|| format!("cannot create {}", dir.display()))
        .failed()?;
    let mut w = Writer {
        dir,
        files: Vec::new(),
    };
    write_outputs(config, &report, &entries, &plan, &mut w)?;
    let trained = pool.install(|| {
        use rayon::prelude::*;
        let cells: Vec<(&SystemSpec, TrainingRegime)> = systems
            .iter()
            .flat_map(|s| config.regimes.iter().map(move |&r| (s, r)))
            .collect();
        cells
            .par_iter()
            .map(|&(spec, regime)| {
                let sys = train_system(spec, &entries, regime).with_context(|| {
                    format!("training {} ({regime}) on the full lexicon", spec.name)
                })?;
                Ok((
                    format!("systems/{}-{regime}.json", spec.name),
                    sys.to_json()?,
                ))
            })
            .collect::<anyhow::Result<Vec<_>>>()
    });
    for (name, json) in trained.failed()? {
        w.text(&name, &json)?;
    }
    if w.files.is_empty() {
        return Err(anyhow!("nothing was written")).failed();
    }
    Ok(RunSummary {
        output_dir: dir.clone(),
        files: w.files,
        cells: report.metrics.len(),
    })
}
