//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

#[path = "../../core/tests/common/oracle.rs"]
mod oracle;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use oracle::Row;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use wordpron::evaluation::{
    isolated_task_cv, isolated_tasks, make_folds, run_cv, size_report_from_cv, t_test_one_tailed,
    utility_table, IsolatedTaskMetrics, MetricsReport, SizeReport, TTestVariant, UtilityTable,
};
use wordpron::lexicon::{
    generate_toy_lexicon, parse_entry_line, window_instances, AlignedEntry, StreamSpec, TaskKind,
    ToyParams, ToyRules,
};
use wordpron::pipeline::{
    train_system, train_system_with, PredecessorOutputs, SystemSpec, TrainingRegime,
};
use wordpron::{
    build_tree, compute_feature_order, entropy, feature_entropy, information_gain, parse_tree,
    serialize_tree, IgTree, InstanceBase, Symbol,
};
use wordpron_cli::{cmd_run, Overrides, ReportFormat, RunConfig, CONFIG_FORMAT_VERSION};

type Verdict = Result<String, String>;

const TIE: f64 = 1e-9;

struct RandomBase {
    arity: usize,
    alphabet: usize,
    rows: Vec<Row>,
    base: InstanceBase,
    tree: IgTree,
}

fn sym(s: &str) -> Symbol {
    Symbol::new(s)
}

fn random_bases(count: usize) -> Vec<RandomBase> {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    (0..count)
        .map(|_| {
            let arity = rng.random_range(1..=4);
            let alphabet = rng.random_range(1..=5);
            let classes = rng.random_range(1..=4);
            let n = rng.random_range(1..=200);
            let rows = oracle::random_rows(&mut rng, arity, alphabet, classes, n);
            let mut base = InstanceBase::new(arity);
            for r in &rows {
                base.add_counted(
                    r.features.iter().map(|f| sym(f)).collect(),
                    sym(&r.class),
                    r.count,
                )
                .unwrap();
            }
            let order = compute_feature_order(&base).unwrap();
            let tree = build_tree(&base, &order).unwrap();
            RandomBase {
                arity,
                alphabet,
                rows,
                base,
                tree,
            }
        })
        .collect()
}

/// Feature order from brute-force gains: descending, near-ties to the
/// lower index.
fn brute_order(rows: &[Row], arity: usize) -> Vec<usize> {
    let gains: Vec<f64> = (0..arity).map(|f| oracle::brute_gain(rows, f)).collect();
    let mut left: Vec<usize> = (0..arity).collect();
    let mut order = Vec::new();
    while !left.is_empty() {
        let mut best = 0;
        for k in 1..left.len() {
            if gains[left[k]] > gains[left[best]] + TIE {
                best = k;
            }
        }
        order.push(left.remove(best));
    }
    order
}

fn criterion_1(bases: &[RandomBase]) -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0usize;
    for (b, rb) in bases.iter().enumerate() {
        let order = brute_order(&rb.rows, rb.arity);
        for _ in 0..10_000 {
            let x: Vec<String> = (0..rb.arity)
                .map(|_| format!("v{}", rng.random_range(0..=rb.alphabet)))
                .collect();
            let expected = oracle::oracle_classify(&rb.rows, &order, &x);
            let got = rb
                .tree
                .classify(&x.iter().map(|s| sym(s)).collect::<Vec<_>>())
                .unwrap();
            if got.as_str() != expected {
                return Err(format!(
                    "base {b}, query {x:?}: tree {got}, oracle {expected}"
                ));
            }
            checked += 1;
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(10) {
        return Err(format!("{checked} queries agree but took {elapsed:.2?}"));
    }
    Ok(format!(
        "{} bases, {checked} queries, 100% agreement in {elapsed:.2?}",
        bases.len()
    ))
}

fn criterion_2(bases: &[RandomBase]) -> Verdict {
    let mut vectors = 0;
    for (b, rb) in bases.iter().enumerate() {
        let mut groups: BTreeMap<&[String], Vec<&Row>> = BTreeMap::new();
        for r in &rb.rows {
            groups.entry(&r.features).or_default().push(r);
        }
        for (x, rows) in groups {
            let expected = oracle::majority(rows.iter().copied()).unwrap();
            let got = rb
                .tree
                .classify(&x.iter().map(|s| sym(s)).collect::<Vec<_>>())
                .unwrap();
            if got.as_str() != expected {
                return Err(format!(
                    "base {b}, vector {x:?}: tree {got}, majority {expected}"
                ));
            }
            vectors += 1;
        }
    }
    Ok(format!("{vectors} distinct training vectors reproduced"))
}

fn criterion_3(bases: &[RandomBase]) -> Verdict {
    let mut worst = 0.0f64;
    for (b, rb) in bases.iter().enumerate() {
        let all: Vec<&Row> = rb.rows.iter().collect();
        let h = entropy(&rb.base.class_distribution()).unwrap();
        worst = worst.max((h - oracle::brute_entropy(&all)).abs());
        for f in 0..rb.arity {
            let fe = feature_entropy(&rb.base, f).unwrap();
            let g = information_gain(&rb.base, f).unwrap();
            worst = worst.max((fe - oracle::brute_feature_entropy(&rb.rows, f)).abs());
            worst = worst.max((g - oracle::brute_gain(&rb.rows, f)).abs());
        }
        if worst > 1e-12 {
            return Err(format!("base {b}: deviation {worst:e}"));
        }
    }
    let mut hand = InstanceBase::new(1);
    for (v, c) in [("x", "a"), ("x", "b"), ("y", "c"), ("y", "c")] {
        hand.add(vec![sym(v)], sym(c)).unwrap();
    }
    let g = information_gain(&hand, 0).unwrap();
    if g != 1.0 {
        return Err(format!("hand-worked base gain {g}, expected exactly 1.0"));
    }
    Ok(format!("max deviation {worst:.1e}; hand-worked gain = {g}"))
}

fn criterion_4() -> Verdict {
    let entry =
        parse_entry_line("booking\tb u - k ɪ ŋ -\t1000100\t1101110\t1001000\t1000000").unwrap();
    let letter_rows = [
        "_ _ _ b o o k",
        "_ _ b o o k i",
        "_ b o o k i n",
        "b o o k i n g",
        "o o k i n g _",
        "o k i n g _ _",
        "k i n g _ _ _",
    ];
    let phoneme_rows = [
        "_ _ _ b u - k",
        "_ _ b u - k ɪ",
        "_ b u - k ɪ ŋ",
        "b u - k ɪ ŋ -",
        "u - k ɪ ŋ - _",
        "- k ɪ ŋ - _ _",
        "k ɪ ŋ - _ _ _",
    ];
    let columns: [(TaskKind, StreamSpec, &[&str]); 7] = [
        (
            TaskKind::M,
            StreamSpec::letters(),
            &["1", "0", "0", "0", "1", "0", "0"],
        ),
        (
            TaskKind::A,
            StreamSpec::letters(),
            &["1", "1", "0", "1", "1", "1", "0"],
        ),
        (
            TaskKind::G,
            StreamSpec::letters(),
            &["b", "u", "-", "k", "ɪ", "ŋ", "-"],
        ),
        (
            TaskKind::SOnLetters,
            StreamSpec::letters(),
            &["1", "0", "0", "0", "0", "0", "0"],
        ),
        (
            TaskKind::GS,
            StreamSpec::letters(),
            &["/b/1", "/u/0", "/-/0", "/k/0", "/ɪ/0", "/ŋ/0", "/-/0"],
        ),
        (
            TaskKind::Y,
            StreamSpec::phonemes(),
            &["1", "0", "0", "1", "0", "0", "0"],
        ),
        (
            TaskKind::SOnPhonemes,
            StreamSpec::phonemes(),
            &["1", "0", "0", "0", "0", "0", "0"],
        ),
    ];
    let mut cells = 0;
    for (task, streams, expected) in columns {
        let rows = if streams == StreamSpec::letters() {
            &letter_rows
        } else {
            &phoneme_rows
        };
        let instances = window_instances(&entry, task, &streams);
        if instances.len() != 7 {
            return Err(format!("{task}: {} instances", instances.len()));
        }
        for (i, inst) in instances.iter().enumerate() {
            let window: Vec<&str> = inst.features.iter().map(|s| s.as_str()).collect();
            if window.join(" ") != rows[i] {
                return Err(format!(
                    "{task} row {}: window {:?}",
                    i + 1,
                    window.join(" ")
                ));
            }
            if inst.class.as_str() != expected[i] {
                return Err(format!(
                    "{task} row {}: class {} expected {}",
                    i + 1,
                    inst.class,
                    expected[i]
                ));
            }
            cells += 1;
        }
    }
    Ok(format!(
        "7 rows x 7 columns, {cells} windows and classes match"
    ))
}

fn criterion_5() -> Verdict {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut config = RunConfig {
        format_version: CONFIG_FORMAT_VERSION,
        seed: 17,
        folds: 5,
        output_dir: dir.path().join("first"),
        workers: 0,
        formats: vec![ReportFormat::Json],
        systems: vec!["MAGYS".into(), "MGS".into(), "GS".into()],
        regimes: TrainingRegime::ALL.to_vec(),
        lexicon: None,
        toy: Some(ToyParams {
            seed: 9,
            words: 400,
            rules: ToyRules::Naturalistic,
        }),
        custom_systems: Vec::new(),
    };
    let read = |c: &RunConfig| -> Result<String, String> {
        cmd_run(c).map_err(|e| e.to_string())?;
        let text =
            std::fs::read_to_string(c.output_dir.join("report.json")).map_err(|e| e.to_string())?;
        let mut v: Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
        v.as_object_mut().unwrap().remove("generated_at");
        Ok(serde_json::to_string_pretty(&v).unwrap())
    };
    let first = read(&config)?;
    config.apply(&Overrides {
        workers: Some(1),
        output_dir: Some(dir.path().join("second")),
        ..Default::default()
    });
    let second = read(&config)?;
    if first != second {
        return Err("aggregate JSON differs between identical runs".into());
    }
    let plan = make_folds(400, 5, 17).unwrap();
    let mut seen = vec![0; 400];
    for f in 0..plan.n {
        let train = plan.train(f);
        for &w in plan.test(f) {
            seen[w] += 1;
            if train.binary_search(&w).is_ok() {
                return Err(format!("word {w} is in both train and test of fold {f}"));
            }
        }
    }
    if seen.iter().any(|&c| c != 1) {
        return Err("test sets do not partition the words".into());
    }
    Ok(format!(
        "{} bytes of JSON identical across runs; 5 folds, zero word overlap",
        first.len()
    ))
}

fn criterion_6(trees: &mut Vec<IgTree>) -> Verdict {
    let entries = generate_toy_lexicon(&ToyParams {
        seed: 1,
        words: 2000,
        rules: ToyRules::WindowDetermined,
    });
    let letters: usize = entries.iter().map(AlignedEntry::len).sum();
    let instances: usize = entries
        .iter()
        .map(|e| window_instances(e, TaskKind::GS, &StreamSpec::letters()).len())
        .sum();
    if instances != letters {
        return Err(format!("{instances} instances for {letters} letters"));
    }
    let system = train_system(&SystemSpec::gs(), &entries, TrainingRegime::Ideal)
        .map_err(|e| e.to_string())?;
    let tree = &system.modules[0].tree;
    let mut wrong = 0;
    for e in &entries {
        for inst in window_instances(e, TaskKind::GS, &StreamSpec::letters()) {
            wrong += usize::from(tree.classify(&inst.features).unwrap() != inst.class);
        }
    }
    trees.push(tree.clone());
    if wrong != 0 {
        return Err(format!("{wrong} training instances misclassified"));
    }
    let plan = make_folds(entries.len(), 10, 1).unwrap();
    let report = run_cv(&SystemSpec::gs(), &entries, TrainingRegime::Ideal, &plan)
        .map_err(|e| e.to_string())?;
    check_algebra(&report)?;
    let test = report.modules[0].error.mean;
    let train_max = report
        .training_joint_error
        .per_fold
        .iter()
        .cloned()
        .fold(0.0, f64::max);
    if train_max != 0.0 || test > 2.0 {
        return Err(format!(
            "training error up to {train_max:.2}%, 10-fold test error {test:.2}%"
        ));
    }
    Ok(format!(
        "training error 0.00% (all 2000 words and every fold), 10-fold test error {test:.2}% (sd {:.2}); {instances} instances = {letters} letters",
        report.modules[0].error.sd
    ))
}

struct Experiment {
    reports: Vec<MetricsReport>,
    isolated: Vec<IsolatedTaskMetrics>,
    utility: UtilityTable,
    sizes: SizeReport,
    text: String,
    elapsed: Duration,
}

fn run_experiment() -> Result<Experiment, String> {
    let start = Instant::now();
    let entries = generate_toy_lexicon(&ToyParams {
        seed: 1,
        words: 2000,
        rules: ToyRules::Naturalistic,
    });
    let plan = make_folds(entries.len(), 10, 1).unwrap();
    let specs = SystemSpec::presets();
    let mut reports = Vec::new();
    for spec in &specs {
        for regime in TrainingRegime::ALL {
            reports.push(
                run_cv(spec, &entries, regime, &plan)
                    .map_err(|e| format!("{} {regime}: {e}", spec.name))?,
            );
        }
    }
    let mut tasks: Vec<TaskKind> = Vec::new();
    for spec in &specs {
        for t in isolated_tasks(spec) {
            if !tasks.contains(&t) {
                tasks.push(t);
            }
        }
    }
    let isolated: Vec<IsolatedTaskMetrics> = tasks
        .iter()
        .map(|&t| isolated_task_cv(t, &entries, &plan))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let by_task = isolated.iter().map(|m| (m.task, m.clone())).collect();
    let utility = utility_table(&specs, &by_task, &reports).map_err(|e| e.to_string())?;
    let sizes = size_report_from_cv(&reports);
    let text = format!("{}\n{}", utility.to_text(), sizes.to_text());
    Ok(Experiment {
        reports,
        isolated,
        utility,
        sizes,
        text,
        elapsed: start.elapsed(),
    })
}

fn check_algebra(r: &MetricsReport) -> Result<(), String> {
    for f in 0..r.folds {
        let (p, s, j) = (
            r.phoneme_error.per_fold[f],
            r.stress_error.per_fold[f],
            r.joint_error.per_fold[f],
        );
        if j < p.max(s) - 1e-12 || j > p + s + 1e-12 {
            return Err(format!(
                "{} {} fold {f}: joint {j} outside [{}, {}]",
                r.system,
                r.regime,
                p.max(s),
                p + s
            ));
        }
    }
    Ok(())
}

fn criterion_7(exp: &Experiment, trees: &mut Vec<IgTree>) -> Verdict {
    let entries = generate_toy_lexicon(&ToyParams {
        seed: 4,
        words: 600,
        rules: ToyRules::Naturalistic,
    });
    let mut nodes = 0;
    for spec in SystemSpec::presets() {
        let ideal =
            train_system(&spec, &entries, TrainingRegime::Ideal).map_err(|e| e.to_string())?;
        let oracle = train_system_with(
            &spec,
            &entries,
            TrainingRegime::Adaptive,
            PredecessorOutputs::Oracle,
        )
        .map_err(|e| e.to_string())?;
        for (a, b) in ideal.modules.iter().zip(&oracle.modules) {
            if a.tree != b.tree
                || a.tree.node_count() != b.tree.node_count()
                || serialize_tree(&a.tree) != serialize_tree(&b.tree)
            {
                return Err(format!("{}: module {} differs", spec.name, a.task));
            }
            nodes += a.tree.node_count();
            trees.push(a.tree.clone());
            trees.push(b.tree.clone());
        }
    }
    let m_rows: Vec<_> = exp
        .utility
        .rows
        .iter()
        .filter(|r| r.isolated_task == TaskKind::M)
        .collect();
    for r in &m_rows {
        if r.ideal != Some(r.isolated)
            || r.actual != r.isolated
            || r.actual_utility != 0.0
            || r.ideal_utility != Some(0.0)
        {
            return Err(format!(
                "{} M: isolated {} ideal {:?} actual {}",
                r.system, r.isolated, r.ideal, r.actual
            ));
        }
    }
    Ok(format!(
        "oracle-adaptive trees identical to ideal for 3 presets ({nodes} nodes); M utility 0.00 in {} systems (error {:.2}%)",
        m_rows.len(),
        m_rows[0].isolated
    ))
}

fn criterion_8(exp: &Experiment) -> Verdict {
    for r in &exp.reports {
        check_algebra(r)?;
    }
    let iso: BTreeMap<TaskKind, &IsolatedTaskMetrics> =
        exp.isolated.iter().map(|m| (m.task, m)).collect();
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let mut worst = 0.0f64;
    for row in &exp.utility.rows {
        worst = worst.max((row.actual_utility - (row.isolated - row.actual)).abs());
        if let (Some(i), Some(u)) = (row.ideal, row.ideal_utility) {
            worst = worst.max((u - (row.isolated - i)).abs());
        }
        // recompute from the raw per-fold vectors
        let raw_iso = mean(&iso[&row.isolated_task].error.per_fold);
        let actual = exp
            .reports
            .iter()
            .find(|r| r.system == row.system && r.regime == TrainingRegime::Adaptive)
            .unwrap();
        let raw_actual = match actual.module(row.isolated_task) {
            Some(m) => mean(&m.error.per_fold),
            None if row.subtask == "G" => mean(&actual.phoneme_error.per_fold),
            None => mean(&actual.stress_error.per_fold),
        };
        worst = worst.max((row.actual_utility - (raw_iso - raw_actual)).abs());
    }
    if worst > 1e-12 {
        return Err(format!("utility deviation {worst:e}"));
    }
    let shape_ok =
        exp.utility.rows.len() == 10 && exp.sizes.systems.len() == 9 && exp.text.contains("--");
    if !shape_ok {
        return Err(format!(
            "{} utility rows, {} size entries",
            exp.utility.rows.len(),
            exp.sizes.systems.len()
        ));
    }
    if exp.elapsed > Duration::from_secs(60) {
        return Err(format!("took {:.2?}", exp.elapsed));
    }
    Ok(format!(
        "{} evaluations within bounds; utility max deviation {worst:.1e}; 10-row utility table and 9-entry size report in {:.2?}",
        exp.reports.len(),
        exp.elapsed
    ))
}

fn criterion_9() -> Verdict {
    let a: Vec<f64> = (0..10).map(|i| 5.0 + 0.3 * i as f64).collect();
    for v in [TTestVariant::Paired, TTestVariant::Pooled] {
        let r = t_test_one_tailed(&a, &a, v).map_err(|e| e.to_string())?;
        if r.t != 0.0 || r.p != 0.5 {
            return Err(format!("{v:?} identical vectors: t {} p {}", r.t, r.p));
        }
    }
    let b: Vec<f64> = (0..10)
        .map(|i| 9.0 + 0.25 * ((i * 7) % 10) as f64)
        .collect();
    let paired = t_test_one_tailed(&a, &b, TTestVariant::Paired).map_err(|e| e.to_string())?;
    let pooled = t_test_one_tailed(&a, &b, TTestVariant::Pooled).map_err(|e| e.to_string())?;
    if paired.df != 9.0 || pooled.df != 18.0 {
        return Err(format!("df paired {} pooled {}", paired.df, pooled.df));
    }
    if !(paired.p < 0.001 && pooled.p < 0.001) || paired.t.signum() != pooled.t.signum() {
        return Err(format!("separated samples: p {} / {}", paired.p, pooled.p));
    }
    Ok(format!(
        "identical: t=0 p=0.5; df 9/18; separated: t={:.2}/{:.2}, p={:.1e}/{:.1e}",
        paired.t, pooled.t, paired.p, pooled.p
    ))
}

fn criterion_10(trees: &[IgTree]) -> Verdict {
    let mut bytes = 0;
    for (i, tree) in trees.iter().enumerate() {
        let text = serialize_tree(tree);
        let parsed = parse_tree(&text).map_err(|e| format!("tree {i}: {e}"))?;
        if serialize_tree(&parsed) != text || &parsed != tree {
            return Err(format!("tree {i} does not round-trip"));
        }
        bytes += text.len();
    }
    Ok(format!(
        "{} trees ({bytes} bytes) round-trip byte-identically",
        trees.len()
    ))
}

fn full_trees(trees: &mut Vec<IgTree>) -> Result<(), String> {
    let entries = generate_toy_lexicon(&ToyParams {
        seed: 1,
        words: 2000,
        rules: ToyRules::Naturalistic,
    });
    for spec in SystemSpec::presets() {
        for regime in TrainingRegime::ALL {
            let sys = train_system(&spec, &entries, regime).map_err(|e| e.to_string())?;
            trees.extend(sys.modules.into_iter().map(|m| m.tree));
        }
    }
    Ok(())
}

fn main() {
    let mut trees: Vec<IgTree> = Vec::new();
    let bases = random_bases(60);
    trees.extend(bases.iter().map(|b| b.tree.clone()));
    let experiment = run_experiment();

    let mut results: Vec<(u32, &str, Verdict)> = vec![
        (1, "oracle equivalence", criterion_1(&bases)),
        (2, "training reproduction", criterion_2(&bases)),
        (3, "information-gain correctness", criterion_3(&bases)),
        (4, "booking golden fixture", criterion_4()),
        (5, "end-to-end determinism", criterion_5()),
        (6, "learnable-toy soundness", criterion_6(&mut trees)),
    ];
    match &experiment {
        Ok(exp) => {
            results.push((7, "regime identities", criterion_7(exp, &mut trees)));
            results.push((8, "metric algebra and tables", criterion_8(exp)));
        }
        Err(e) => {
            results.push((
                7,
                "regime identities",
                Err(format!("experiment failed: {e}")),
            ));
            results.push((
                8,
                "metric algebra and tables",
                Err(format!("experiment failed: {e}")),
            ));
        }
    }
    results.push((9, "statistics", criterion_9()));
    let full = full_trees(&mut trees);
    results.push((
        10,
        "tree serialization round-trip",
        full.and_then(|_| criterion_10(&trees)),
    ));

    let mut failed = 0;
    for (id, name, verdict) in &results {
        match verdict {
            Ok(detail) => println!("criterion {id:>2} PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {id:>2} FAIL  {name}: {why}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
