use std::fmt::Write;
use std::path::Path;

use anyhow::Context;
use wordpron::pipeline::TrainedSystem;
use wordpron::{parse_tree, IgTree};

use crate::{read_text, CliResult, ResultExt};

fn describe(out: &mut String, title: &str, tree: &IgTree) {
    let stats = tree.stats();
    let order = tree.feature_order();
    let _ = writeln!(out, "{title}");
    let _ = writeln!(out, "  arity           {}", tree.arity());
    let _ = writeln!(out, "  feature order   {:?}", order.order);
    let gains: Vec<String> = order.gains.iter().map(|g| format!("{g:.5}")).collect();
    let _ = writeln!(out, "  gains           [{}]", gains.join(", "));
    let _ = writeln!(out, "  nodes           {}", stats.node_count);
    let _ = writeln!(out, "  leaves          {}", stats.leaf_count);
    let _ = writeln!(out, "  nodes by depth  {:?}", stats.depth_histogram);
    let _ = writeln!(
        out,
        "  bytes estimate  {} ({} per node)",
        stats.bytes_estimate, stats.bytes_per_node
    );
}

/// Statistics for a serialized tree or for every tree in a system artifact.
pub fn cmd_inspect(path: &Path) -> CliResult<String> {
    let text = read_text(path)?;
    let mut out = String::new();
    if text.trim_start().starts_with('{') {
        let system = TrainedSystem::from_json(&text)
            .with_context(|| format!("unreadable system artifact {}", path.display()))
            .invalid()?;
        let _ = writeln!(out, "system {} ({})", system.spec, system.regime);
        for m in &system.modules {
            describe(
                &mut out,
                &format!("module {} [{}]", m.task, m.input),
                &m.tree,
            );
        }
    } else {
        let tree = parse_tree(&text)
            .with_context(|| format!("unreadable tree {}", path.display()))
            .invalid()?;
        describe(&mut out, &path.display().to_string(), &tree);
    }
    Ok(out)
}
