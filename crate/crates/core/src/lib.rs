//! Path ideals of rooted trees: exact graded Betti numbers through the
//! mapping-cone recursion, closed formulas for regularity, projective
//! dimension and the linear strand, and an independent Hochster-formula
//! oracle to check them against.
//!
//! ```
//! use path_ideals::{resolution::betti, tree::RootedForest};
//!
//! let table = betti(&RootedForest::path_graph(4), 2).unwrap();
//! assert_eq!(table.to_tsv(), "0\t0\t1\n1\t2\t3\n2\t3\t2\n");
//! ```

pub mod cli;
pub mod closed_forms;
pub mod corpus;
pub mod oracle;
pub mod resolution;
pub mod tree;

pub use resolution::{betti, BettiTable, Resolver};
pub use tree::{build_forest, RootedForest, Vertex};
