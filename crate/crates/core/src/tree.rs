//! IGTREE construction and classification.
//!
//! A tree is grown over one global feature ordering. Each node remembers the
//! majority class of the instances that reached it; expansion stops as soon
//! as a subset is class-unambiguous or every feature has been consumed.
//! Classification follows arcs in feature order and falls back to the
//! default class of the last node visited when no arc matches.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gain::FeatureOrder;
use crate::instance::{ClassDistribution, InstanceBase};
use crate::symbol::Symbol;

/// Fixed storage cost per node used for memory estimates.
pub const BYTES_PER_NODE: usize = 7;

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IgTreeNode {
    pub default_class: Symbol,
    /// Outgoing arcs sorted by value token.
    pub arcs: Vec<(Symbol, NodeId)>,
    pub depth: usize,
}

impl IgTreeNode {
    pub fn is_leaf(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn child(&self, value: Symbol) -> Option<NodeId> {
        self.arcs
            .binary_search_by(|(v, _)| v.cmp(&value))
            .ok()
            .map(|i| self.arcs[i].1)
    }
}

/// Immutable compressed decision tree. Nodes are stored in pre-order; the
/// root is node 0.
#[derive(Debug, Clone, PartialEq)]
pub struct IgTree {
    nodes: Vec<IgTreeNode>,
    feature_order: FeatureOrder,
}

impl IgTree {
    pub(crate) fn from_nodes(nodes: Vec<IgTreeNode>, feature_order: FeatureOrder) -> Self {
        IgTree {
            nodes,
            feature_order,
        }
    }

    pub fn root(&self) -> &IgTreeNode {
        &self.nodes[0]
    }

    pub fn node(&self, id: NodeId) -> &IgTreeNode {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[IgTreeNode] {
        &self.nodes
    }

    pub fn feature_order(&self) -> &FeatureOrder {
        &self.feature_order
    }

    pub fn arity(&self) -> usize {
        self.feature_order.arity()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.is_leaf()).count()
    }

    pub fn classify(&self, x: &[Symbol]) -> Result<Symbol> {
        if x.len() != self.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                actual: x.len(),
            });
        }
        let mut node = self.root();
        for &feature in &self.feature_order.order {
            match node.child(x[feature]) {
                Some(next) => node = &self.nodes[next],
                None => break,
            }
        }
        Ok(node.default_class)
    }

    pub fn stats(&self) -> TreeStats {
        tree_stats(self)
    }
}

pub fn build_tree(base: &InstanceBase, order: &FeatureOrder) -> Result<IgTree> {
    if base.is_empty() {
        return Err(Error::EmptyBase);
    }
    if order.arity() != base.arity() {
        return Err(Error::ArityMismatch {
            expected: base.arity(),
            actual: order.arity(),
        });
    }
    let mut nodes = Vec::new();
    let all: Vec<usize> = (0..base.instances().len()).collect();
    grow(&mut nodes, base, &order.order, &all, 0);
    Ok(IgTree::from_nodes(nodes, order.clone()))
}

fn grow(
    nodes: &mut Vec<IgTreeNode>,
    base: &InstanceBase,
    order: &[usize],
    subset: &[usize],
    depth: usize,
) -> NodeId {
    let instances = base.instances();
    let dist = ClassDistribution::from_weighted(
        subset
            .iter()
            .map(|&i| (instances[i].class, instances[i].count)),
    );
    let id = nodes.len();
    nodes.push(IgTreeNode {
        default_class: dist
            .majority()
            .expect("subsets reaching a node are nonempty"),
        arcs: Vec::new(),
        depth,
    });
    if dist.num_classes() == 1 || depth == order.len() {
        return id;
    }
    let feature = order[depth];
    let mut cells: BTreeMap<Symbol, Vec<usize>> = BTreeMap::new();
    for &i in subset {
        cells
            .entry(instances[i].features[feature])
            .or_default()
            .push(i);
    }
    let mut arcs = Vec::with_capacity(cells.len());
    for (value, cell) in cells {
        let child = grow(nodes, base, order, &cell, depth + 1);
        arcs.push((value, child));
    }
    nodes[id].arcs = arcs;
    id
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeStats {
    pub node_count: usize,
    pub leaf_count: usize,
    /// Number of nodes at each depth, root at index 0.
    pub depth_histogram: Vec<usize>,
    pub bytes_per_node: usize,
    pub bytes_estimate: usize,
}

pub fn tree_stats(tree: &IgTree) -> TreeStats {
    let mut depth_histogram = vec![0; tree.arity() + 1];
    let mut leaf_count = 0;
    // Walk from the root so only reachable nodes are counted.
    let mut stack = vec![0];
    let mut node_count = 0;
    while let Some(id) = stack.pop() {
        let node = tree.node(id);
        node_count += 1;
        depth_histogram[node.depth] += 1;
        if node.is_leaf() {
            leaf_count += 1;
        }
        stack.extend(node.arcs.iter().map(|&(_, c)| c));
    }
    while depth_histogram.len() > 1 && depth_histogram.last() == Some(&0) {
        depth_histogram.pop();
    }
    TreeStats {
        node_count,
        leaf_count,
        depth_histogram,
        bytes_per_node: BYTES_PER_NODE,
        bytes_estimate: node_count * BYTES_PER_NODE,
    }
}
