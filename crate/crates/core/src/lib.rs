//! IGTREE decision-tree induction and a modular word-pronunciation
//! experiment harness.
//!
//! * [`gain`], [`tree`], [`tree_io`]: entropy, information-gain feature
//!   ordering, tree construction, default-class classification and a text
//!   serialization.
//! * [`lexicon`]: aligned pronunciation lexica, letter/phoneme alignment,
//!   windowing and task labelings, plus a synthetic lexicon generator.
//! * [`pipeline`]: declarative multi-module pronunciation systems trained
//!   on gold or predicted intermediate streams.
//! * [`evaluation`]: cross-validation, error metrics, t-tests, utility
//!   effects and tree-size reports.

pub mod error;
pub mod evaluation;
pub mod gain;
pub mod instance;
pub mod lexicon;
pub mod pipeline;
pub mod symbol;
pub mod tree;
pub mod tree_io;

pub use error::{Error, Result};
pub use gain::{
    compute_feature_order, compute_feature_order_with, entropy, feature_entropy, information_gain,
    FeatureOrder,
};
pub use instance::{ClassDistribution, InstanceBase, LabeledInstance};
pub use symbol::Symbol;
pub use tree::{build_tree, tree_stats, IgTree, IgTreeNode, TreeStats};
pub use tree_io::{parse_tree, serialize_tree};
