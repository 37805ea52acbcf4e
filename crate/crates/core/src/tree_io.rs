//! Line-oriented text format for [`IgTree`]. Fields are tab-separated;
//! the example below shows them with spaces.
//!
//! ```text
//! #igtree 1
//! arity  3
//! order  2 0 1
//! gains  1.0 0.5 0.0
//! nodes  3
//! 0  ^  x  0
//! 1  p  x  1
//! 1  q  y  1
//! ```
//!
//! Node lines are in pre-order: depth, incoming arc value, default class,
//! leaf flag. The root's arc field is a placeholder. Tokens escape `\`,
//! tab and newline.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::gain::FeatureOrder;
use crate::symbol::Symbol;
use crate::tree::{IgTree, IgTreeNode};

pub const TREE_FORMAT_VERSION: u32 = 1;
const HEADER: &str = "#igtree";
const ROOT_ARC: &str = "^";

fn escape(token: &str) -> String {
    if token.is_empty() {
        return "\\e".to_owned();
    }
    let mut out = String::with_capacity(token.len());
    for c in token.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}

fn unescape(field: &str, line: usize) -> Result<String> {
    if field == "\\e" {
        return Ok(String::new());
    }
    let mut out = String::with_capacity(field.len());
    let mut chars = field.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('\\') => out.push('\\'),
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            other => {
                return Err(Error::TreeFormat {
                    line,
                    msg: format!(
                        "bad escape sequence \\{}",
                        other.map(String::from).unwrap_or_default()
                    ),
                })
            }
        }
    }
    Ok(out)
}

pub fn serialize_tree(tree: &IgTree) -> String {
    let order = tree.feature_order();
    let mut out = String::new();
    let join = |items: Vec<String>| items.join(" ");
    let _ = writeln!(out, "{HEADER} {TREE_FORMAT_VERSION}");
    let _ = writeln!(out, "arity\t{}", tree.arity());
    let _ = writeln!(
        out,
        "order\t{}",
        join(order.order.iter().map(|f| f.to_string()).collect())
    );
    let _ = writeln!(
        out,
        "gains\t{}",
        join(order.gains.iter().map(|g| format!("{g:?}")).collect())
    );
    let _ = writeln!(out, "nodes\t{}", tree.node_count());
    let mut stack = vec![(0usize, None::<Symbol>)];
    while let Some((id, arc)) = stack.pop() {
        let node = tree.node(id);
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}",
            node.depth,
            arc.map(|a| escape(a.as_str()))
                .unwrap_or_else(|| ROOT_ARC.to_owned()),
            escape(node.default_class.as_str()),
            u8::from(node.is_leaf()),
        );
        stack.extend(node.arcs.iter().rev().map(|&(v, c)| (c, Some(v))));
    }
    out
}

fn field<'a>(line_no: usize, line: &'a str, key: &str) -> Result<&'a str> {
    line.strip_prefix(key)
        .and_then(|rest| rest.strip_prefix('\t'))
        .ok_or_else(|| Error::TreeFormat {
            line: line_no,
            msg: format!("expected `{key}` line"),
        })
}

fn bad(line: usize, msg: impl Into<String>) -> Error {
    Error::TreeFormat {
        line,
        msg: msg.into(),
    }
}

pub fn parse_tree(text: &str) -> Result<IgTree> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut next = |what: &str| {
        lines
            .next()
            .ok_or_else(|| bad(0, format!("missing {what}")))
    };

    let (n, header) = next("header")?;
    let version = header
        .strip_prefix(HEADER)
        .map(str::trim)
        .ok_or_else(|| bad(n, "missing #igtree header"))?;
    if version != TREE_FORMAT_VERSION.to_string() {
        return Err(bad(n, format!("unsupported format version {version}")));
    }

    let (n, l) = next("arity")?;
    let arity: usize = field(n, l, "arity")?
        .parse()
        .map_err(|_| bad(n, "bad arity"))?;
    let (n, l) = next("order")?;
    let order = field(n, l, "order")?
        .split_whitespace()
        .map(|s| s.parse::<usize>().map_err(|_| bad(n, "bad feature index")))
        .collect::<Result<Vec<_>>>()?;
    let (n, l) = next("gains")?;
    let gains = field(n, l, "gains")?
        .split_whitespace()
        .map(|s| s.parse::<f64>().map_err(|_| bad(n, "bad gain")))
        .collect::<Result<Vec<_>>>()?;
    let mut sorted = order.clone();
    sorted.sort_unstable();
    if order.len() != arity || gains.len() != arity || sorted != (0..arity).collect::<Vec<_>>() {
        return Err(bad(
            n,
            "order/gains do not describe a permutation of the arity",
        ));
    }
    let (n, l) = next("nodes")?;
    let count: usize = field(n, l, "nodes")?
        .parse()
        .map_err(|_| bad(n, "bad node count"))?;

    let mut nodes: Vec<IgTreeNode> = Vec::with_capacity(count);
    let mut leaf_flags = Vec::with_capacity(count);
    // path[d] is the node id currently open at depth d
    let mut path: Vec<usize> = Vec::new();
    for (n, l) in lines {
        let parts: Vec<&str> = l.split('\t').collect();
        if parts.len() != 4 {
            return Err(bad(n, "node line needs 4 tab-separated fields"));
        }
        let depth: usize = parts[0].parse().map_err(|_| bad(n, "bad depth"))?;
        if depth > arity {
            return Err(bad(n, "depth exceeds arity"));
        }
        let default_class = Symbol::new(&unescape(parts[2], n)?);
        let leaf = match parts[3] {
            "0" => false,
            "1" => true,
            _ => return Err(bad(n, "leaf flag must be 0 or 1")),
        };
        let id = nodes.len();
        if depth == 0 {
            if id != 0 {
                return Err(bad(n, "second root"));
            }
        } else {
            if depth > path.len() {
                return Err(bad(n, "depth jumps by more than one"));
            }
            path.truncate(depth);
            let parent = path[depth - 1];
            let value = Symbol::new(&unescape(parts[1], n)?);
            let arcs = &mut nodes[parent].arcs;
            if arcs.last().is_some_and(|&(v, _)| v >= value) {
                return Err(bad(n, "arcs out of order or duplicated"));
            }
            arcs.push((value, id));
        }
        path.truncate(depth);
        path.push(id);
        nodes.push(IgTreeNode {
            default_class,
            arcs: Vec::new(),
            depth,
        });
        leaf_flags.push((n, leaf));
    }
    if nodes.is_empty() {
        return Err(bad(0, "tree has no nodes"));
    }
    if nodes.len() != count {
        return Err(bad(
            0,
            format!(
                "node count {count} does not match {} node lines",
                nodes.len()
            ),
        ));
    }
    for (node, &(n, leaf)) in nodes.iter().zip(&leaf_flags) {
        if node.is_leaf() != leaf {
            return Err(bad(n, "leaf flag disagrees with structure"));
        }
    }
    Ok(IgTree::from_nodes(nodes, FeatureOrder { order, gains }))
}
