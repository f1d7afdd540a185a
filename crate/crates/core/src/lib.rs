//! Signed permutations, their breakpoint graphs and signed Hultman numbers,
//! together with exact signed commuting probabilities of finite groups.

pub mod census;
pub mod graph;
pub mod group;
pub mod prob;
pub mod rewrite;
mod serde_big;
pub mod signed;

pub use graph::{build_graph, s_count, s_via_circ};
pub use signed::{HPermutation, HVertex, Sign, SignedPermutation};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
