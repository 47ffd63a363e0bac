//! Faceted ranking of users in collaborative tagging systems.
//!
//! Users who upload content and users who recommend it form a directed
//! graph whose edges are labeled with tag sets. This crate builds those
//! graphs, computes per-tag PageRank rankings offline, and answers
//! multi-tag ("facet") queries online by merging the precomputed
//! rankings in several ways. It also ships a synthetic graph generator,
//! degree-distribution analysis tools, and an evaluation harness that
//! scores the online algorithms against offline references with the
//! OSim and KSim ranking-similarity measures.
//!
//! The crate is `no_std` (with `alloc`); file formats, parallelism, and
//! the command-line interface live in the companion `facetrank` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

mod intern;

pub mod analysis;
pub mod centrality;
pub mod eval;
pub mod facets;
pub mod graph;
pub mod index;
pub mod similarity;
pub mod store;
pub mod synth;

pub use centrality::{pagerank, prune_dangling, rank_of, CentralityVector, PageRankParams, Ranking};
pub use facets::Algorithm;
pub use graph::{build_graph, BuildOptions, Facet, Recommendation, Tag, TaggedContent, TaggedGraph};
pub use index::TagIndex;
pub use similarity::{ksim, osim};
pub use store::{build_store, RankStore, Truncation};
