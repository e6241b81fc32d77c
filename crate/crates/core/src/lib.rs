//! Classification of 3-uniform hypergraphs by the growth of their multicolor
//! Ramsey numbers, together with the colorings, constructions and exhaustive
//! searches used to check the structural facts behind it.

pub mod analysis;
pub mod bounds;
pub mod canon;
pub mod classifier;
pub mod colorings;
pub mod constructions;
pub mod embed;
pub mod error;
pub mod experiments;
pub mod hypergraph;

pub use canon::{are_isomorphic, canonical_key, CanonicalKey};
pub use embed::{find_embedding, find_subgraph, Embedding};
pub use error::{Error, Result};
pub use hypergraph::{parse_hypergraph, Hypergraph3, VertexSet};
