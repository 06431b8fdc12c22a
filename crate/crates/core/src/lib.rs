//! Exact computations on small 3-uniform hypergraphs: Turán numbers of
//! several kinds by branch-and-bound search, canonical labeling, and a
//! checkable deduction of small multicolor Ramsey numbers for the loose path.

#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod format;
pub mod hypergraph;
pub mod iso;
pub mod patterns;
pub mod ramsey;
pub mod search;
pub mod turan;

pub use error::{Error, Result};
pub use hypergraph::{rank_triple, unrank_triple, Hypergraph3, Link, TripleId, VertexSet};
pub use patterns::{catalog, construct, ConstructionSpec, Pattern, PatternName};
pub use search::{max_edges, ConstraintSet, Flags, Required, SearchConfig, SearchOutcome, Status};
pub use turan::{CertifiedValue, Source, TableName, TuranQuery};
