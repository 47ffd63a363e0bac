//! Parallel counterparts of the sequential store build and experiment
//! run. Tags and tag pairs are independent work units over the shared
//! immutable graph, so they fan out across a rayon pool; results are
//! collected back in input order, which keeps the output byte-identical
//! to the sequential path whatever the thread count.

use facetrank_core::centrality::prune_dangling;
use facetrank_core::eval::{
    aggregate, evaluate_pair, top_tags, EvalError, ExperimentConfig, ExperimentReport,
    PipelineOutput,
};
use facetrank_core::graph::Facet;
use facetrank_core::store::{assemble_store, build_store_entry, BuildReport};
use facetrank_core::{pagerank, PageRankParams, RankStore, TagIndex, TaggedGraph, Truncation};
use rayon::prelude::*;

/// Name of the environment variable consulted for the worker count when
/// no command-line override is given.
pub const THREADS_ENV: &str = "FACETRANK_THREADS";

/// Resolves the worker count: an explicit value wins, then the
/// environment, then `None` for the library default.
pub fn thread_count(flag: Option<usize>) -> Option<usize> {
    flag.or_else(|| {
        std::env::var(THREADS_ENV)
            .ok()
            .and_then(|v| v.parse().ok())
    })
}

/// [`facetrank_core::build_store`] with the per-tag rankings computed
/// in parallel. Timings are not collected.
pub fn build_store_parallel(
    graph: &TaggedGraph,
    index: &TagIndex,
    params: &PageRankParams,
    truncation: Truncation,
) -> (RankStore, BuildReport) {
    let tags: Vec<&str> = index.tags();
    let parts: Vec<_> = tags
        .par_iter()
        .filter_map(|tag| build_store_entry(index, tag, params, truncation))
        .collect();
    let total: usize = parts.iter().map(|part| part.edge_count()).sum();
    let store = assemble_store(graph, params, truncation, parts);
    assert_eq!(
        total,
        graph.total_tag_assignments(),
        "per-tag subgraph edges must sum to the graph's tag assignments"
    );
    let report = BuildReport {
        tags: store.tag_count(),
        total_subgraph_edges: total,
        tag_timings: Vec::new(),
    };
    (store, report)
}

/// [`facetrank_core::eval::run_experiment`] with pairs evaluated in
/// parallel.
pub fn run_experiment_parallel(
    g: &TaggedGraph,
    store: &RankStore,
    cfg: &ExperimentConfig,
) -> Result<ExperimentReport, EvalError> {
    cfg.validate()?;
    let graph_fp = g.fingerprint();
    if store.graph_fingerprint != graph_fp {
        return Err(EvalError::FingerprintMismatch {
            graph: graph_fp,
            store: store.graph_fingerprint.clone(),
        });
    }
    let tags = top_tags(g, cfg.top_tag_count, &cfg.stop_tags)?;
    let index = TagIndex::build(g);
    let global = pagerank(g, &cfg.params).expect("graphs with tags have nodes");
    let mut facets = Vec::new();
    for i in 0..tags.len() {
        for j in i + 1..tags.len() {
            facets.push(
                Facet::new([tags[i].clone(), tags[j].clone()])
                    .expect("two distinct tags form a facet"),
            );
        }
    }
    let pair_count = facets.len();
    let results: Vec<_> = facets
        .par_iter()
        .map(|facet| evaluate_pair(g, &index, store, &global, facet, cfg))
        .collect();
    let mut outcomes = Vec::new();
    let mut failures = Vec::new();
    for (facet, result) in facets.iter().zip(results) {
        match result {
            Ok(outcome) => outcomes.push(outcome),
            Err(e) => failures.push((facet.to_string(), e.to_string())),
        }
    }
    let (tables, grids) = aggregate(cfg, &outcomes, pair_count);
    Ok(ExperimentReport {
        tags,
        pair_count,
        tables,
        grids,
        failures,
    })
}

/// [`facetrank_core::eval::run_pipeline`] with the store build and the
/// pair evaluations parallelized.
pub fn run_pipeline_parallel(
    g: &TaggedGraph,
    cfg: &ExperimentConfig,
    truncation: Truncation,
) -> Result<PipelineOutput, EvalError> {
    cfg.validate()?;
    let graph = if cfg.prune {
        prune_dangling(g)
    } else {
        g.clone()
    };
    let index = TagIndex::build(&graph);
    let (store, _) = build_store_parallel(&graph, &index, &cfg.params, truncation);
    let report = run_experiment_parallel(&graph, &store, cfg)?;
    Ok(PipelineOutput {
        graph,
        store,
        report,
    })
}
