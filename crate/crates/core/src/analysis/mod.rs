//! Structural predicates on 3-graphs: tripartiteness, exact transversals,
//! collapsible sets and the collapse operation, decompositions along a vertex
//! partition, and forward-colorability.
//!
//! Every search here returns a witness, and [`witness`] holds checkers that
//! re-validate those witnesses straight from the definitions.

mod collapse;
mod decompose;
mod forward;
mod transversal;
mod tripartite;
pub mod witness;

use serde::{Deserialize, Serialize};

use crate::hypergraph::{Hypergraph3, VertexSet};

pub use collapse::{closure, collapse, collapsible_sets, collapsible_sets_with_cap, is_collapsible, strip_isolated, Stripped};
pub use decompose::{closed_partitions, decompose, quotient, Decomposition};
pub(crate) use decompose::for_each_closed_partition as closed_partition_visitor;
pub use forward::{forward_colorable, forward_colorable_with_cap};
pub use transversal::{exact_transversal, exact_transversal_with_cap, has_exact_transversal};
pub use tripartite::{is_tripartite, is_tripartite_with_cap};

/// Size caps for the exhaustive searches. All are overridable.
pub const TRIPARTITE_CAP: usize = 24;
pub const TRANSVERSAL_CAP: usize = 24;
pub const COLLAPSIBLE_CAP: usize = 24;
pub const FORWARD_CAP: usize = 12;

/// Three disjoint (possibly empty) parts covering the vertex set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition3 {
    pub parts: [VertexSet; 3],
}

/// Ordered list of disjoint nonempty blocks covering the vertex set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrderedPartition {
    pub blocks: Vec<VertexSet>,
}

impl OrderedPartition {
    pub fn new(mut blocks: Vec<VertexSet>) -> Self {
        for b in blocks.iter_mut() {
            b.sort_unstable();
        }
        OrderedPartition { blocks }
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// `block_of[v]` is the index of the block holding `v`, or `None` if the
    /// blocks are not a partition of `0..n` into nonempty sets.
    pub fn block_index(&self, n: usize) -> Option<Vec<usize>> {
        let mut block_of = vec![usize::MAX; n];
        for (i, b) in self.blocks.iter().enumerate() {
            if b.is_empty() {
                return None;
            }
            for &v in b {
                let slot = block_of.get_mut(v as usize)?;
                if *slot != usize::MAX {
                    return None;
                }
                *slot = i;
            }
        }
        block_of.iter().all(|&b| b != usize::MAX).then_some(block_of)
    }
}

/// Outcome of collapsing a set `U` to a single new vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollapseResult {
    pub set: VertexSet,
    /// The quotient; the new vertex has index `n - |U|`.
    pub h: Hypergraph3,
    /// `G[U]`.
    pub f: Hypergraph3,
}
