//! Experiment harness: every tag pair from the most-used tags, ranked
//! by all six algorithms, scored against the two online references with
//! overlap and rank similarity, then averaged into tables and grids.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::centrality::{pagerank, CentralityVector, PageRankParams, Ranking};
use crate::facets::{
    e_intersection_rank, e_union_n_intersection_rank, pr_product_rank, r_sum_rank, single_rank,
    tau_n_intersection_rank, Algorithm,
};
use crate::graph::{Facet, Tag, TaggedGraph};
use crate::index::TagIndex;
use crate::similarity::{ksim, osim};
use crate::store::{build_store, RankStore, StoreError, Truncation};

/// The two online algorithms the others are measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Reference {
    EIntersection,
    EUnionNIntersection,
}

impl Reference {
    pub const ALL: [Reference; 2] = [Reference::EIntersection, Reference::EUnionNIntersection];

    pub fn algorithm(&self) -> Algorithm {
        match self {
            Reference::EIntersection => Algorithm::EIntersection,
            Reference::EUnionNIntersection => Algorithm::EUnionNIntersection,
        }
    }

    pub fn as_str(&self) -> &'static str {
        self.algorithm().as_str()
    }
}

impl fmt::Display for Reference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    /// How many of the most-used tags form the pair pool.
    pub top_tag_count: usize,
    pub stop_tags: BTreeSet<Tag>,
    /// Top-n windows at which similarities are measured.
    pub windows: Vec<usize>,
    /// Store window for τ-N-intersection.
    pub tau_window: usize,
    pub params: PageRankParams,
    /// Drop crawl-frontier leaves before anything else.
    pub prune: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            top_tag_count: 99,
            stop_tags: BTreeSet::new(),
            windows: alloc::vec![8, 16, 32],
            tau_window: 500,
            params: PageRankParams::default(),
            prune: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalError {
    InvalidConfig(String),
    /// Fewer usable tags than requested after stop-tag removal.
    InsufficientVocabulary { available: usize, requested: usize },
    /// The store describes a different graph.
    FingerprintMismatch { graph: String, store: String },
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::InvalidConfig(message) => write!(f, "invalid experiment config: {message}"),
            EvalError::InsufficientVocabulary {
                available,
                requested,
            } => write!(
                f,
                "need {requested} tags but only {available} are usable after exclusions"
            ),
            EvalError::FingerprintMismatch { graph, store } => write!(
                f,
                "store was built for graph {store} but this graph is {graph}"
            ),
        }
    }
}

impl core::error::Error for EvalError {}

impl ExperimentConfig {
    /// Rejects configurations no experiment could run under.
    pub fn validate(&self) -> Result<(), EvalError> {
        if self.top_tag_count < 2 {
            return Err(EvalError::InvalidConfig(String::from(
                "top_tag_count must be at least 2 to form a pair",
            )));
        }
        if self.windows.is_empty() || self.windows.contains(&0) {
            return Err(EvalError::InvalidConfig(String::from(
                "windows must be non-empty and positive",
            )));
        }
        if self.tau_window == 0 {
            return Err(EvalError::InvalidConfig(String::from(
                "tau_window must be positive",
            )));
        }
        Ok(())
    }
}

/// The `k` most-used tags of the graph: usage is the number of edges
/// carrying the tag, ties broken lexicographically, stop tags excluded
/// before counting toward `k`.
pub fn top_tags(g: &TaggedGraph, k: usize, stop_tags: &BTreeSet<Tag>) -> Result<Vec<Tag>, EvalError> {
    let index = TagIndex::build(g);
    let mut usage: Vec<(&str, usize)> = index
        .usage_counts()
        .into_iter()
        .filter(|(name, _)| !stop_tags.iter().any(|t| t.as_str() == *name))
        .collect();
    usage.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    if usage.len() < k {
        return Err(EvalError::InsufficientVocabulary {
            available: usage.len(),
            requested: k,
        });
    }
    Ok(usage
        .into_iter()
        .take(k)
        .map(|(name, _)| Tag::new(name).expect("indexed tags are valid"))
        .collect())
}

/// One candidate-versus-reference score at one window.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    pub algorithm: Algorithm,
    pub window: usize,
    pub osim: f64,
    pub ksim: f64,
}

/// Everything measured against one reference for one tag pair.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceOutcome {
    pub reference: Reference,
    /// Length of the reference ranking.
    pub result_size: usize,
    /// True when the reference ranking was empty and the pair was
    /// skipped for this reference.
    pub skipped_empty: bool,
    /// Windows larger than the reference result, skipped for lack of
    /// data.
    pub skipped_windows: Vec<usize>,
    pub measurements: Vec<Measurement>,
}

/// All measurements for one tag pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PairOutcome {
    pub facet: Facet,
    pub references: Vec<ReferenceOutcome>,
}

/// Ranks one facet with all six algorithms and scores every candidate
/// against both references at each configured window. A window is only
/// measured when the reference ranking reaches it; candidates shorter
/// than the window are padded by the overlap rule and truncated for
/// rank similarity.
pub fn evaluate_pair(
    g: &TaggedGraph,
    index: &TagIndex,
    store: &RankStore,
    global: &CentralityVector,
    facet: &Facet,
    cfg: &ExperimentConfig,
) -> Result<PairOutcome, StoreError> {
    let params = &cfg.params;
    let rankings: Vec<(Algorithm, Ranking)> = alloc::vec![
        (
            Algorithm::EIntersection,
            e_intersection_rank(g, facet, params)
        ),
        (
            Algorithm::EUnionNIntersection,
            e_union_n_intersection_rank(g, facet, params)
        ),
        (Algorithm::Single, single_rank(global, index, facet)),
        (Algorithm::PrProduct, pr_product_rank(store, facet)?),
        (Algorithm::RSum, r_sum_rank(store, facet)?),
        (
            Algorithm::TauNIntersection,
            tau_n_intersection_rank(g, store, facet, cfg.tau_window)?
        ),
    ];
    let id_lists: Vec<Vec<u32>> = rankings
        .iter()
        .map(|(_, r)| r.entries().iter().map(|&(id, _)| id).collect())
        .collect();

    let mut references = Vec::with_capacity(Reference::ALL.len());
    for reference in Reference::ALL {
        let ref_index = rankings
            .iter()
            .position(|(a, _)| *a == reference.algorithm())
            .expect("references are among the algorithms");
        let ref_ids = &id_lists[ref_index];
        let result_size = ref_ids.len();
        if result_size == 0 {
            references.push(ReferenceOutcome {
                reference,
                result_size,
                skipped_empty: true,
                skipped_windows: Vec::new(),
                measurements: Vec::new(),
            });
            continue;
        }
        let mut skipped_windows = Vec::new();
        let mut measurements = Vec::new();
        for &window in &cfg.windows {
            if window > result_size {
                skipped_windows.push(window);
                continue;
            }
            for (list, (algorithm, _)) in id_lists.iter().zip(&rankings) {
                let o = osim(list, ref_ids, window).expect("windows validated positive");
                let cand_top = &list[..list.len().min(window)];
                let k = ksim(cand_top, &ref_ids[..window])
                    .expect("reference side is non-empty");
                measurements.push(Measurement {
                    algorithm: *algorithm,
                    window,
                    osim: o,
                    ksim: k,
                });
            }
        }
        references.push(ReferenceOutcome {
            reference,
            result_size,
            skipped_empty: false,
            skipped_windows,
            measurements,
        });
    }
    Ok(PairOutcome {
        facet: facet.clone(),
        references,
    })
}

/// Mean similarities of one algorithm at one window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanCell {
    pub osim: f64,
    pub ksim: f64,
    /// Pairs contributing to the mean.
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub algorithm: Algorithm,
    /// One cell per configured window, `None` where no pair supplied
    /// data.
    pub cells: Vec<Option<MeanCell>>,
}

/// Mean similarity to one reference, per algorithm and window.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityTable {
    pub reference: Reference,
    pub windows: Vec<usize>,
    pub rows: Vec<TableRow>,
    /// All tag pairs of the experiment.
    pub pair_count: usize,
    /// Pairs with an empty reference ranking.
    pub skipped_empty: usize,
    /// Per window, pairs whose reference ranking was non-empty but
    /// shorter than the window.
    pub window_skips: BTreeMap<usize, usize>,
}

/// Mean similarities bucketed by reference result size (log base 2)
/// and window.
#[derive(Debug, Clone, PartialEq)]
pub struct GridCell {
    pub algorithm: Algorithm,
    pub window: usize,
    /// Inclusive bounds of the size bucket, `[2^b, 2^(b+1) - 1]`.
    pub size_lo: usize,
    pub size_hi: usize,
    pub mean_osim: f64,
    pub mean_ksim: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityGrid {
    pub reference: Reference,
    /// Occupied cells only, sorted by (algorithm, window, size bucket).
    pub cells: Vec<GridCell>,
}

/// Averages per-pair outcomes into one table and one grid per
/// reference. Accumulation order is the outcome order, so equal inputs
/// give bit-equal output.
pub fn aggregate(
    cfg: &ExperimentConfig,
    outcomes: &[PairOutcome],
    pair_count: usize,
) -> (Vec<SimilarityTable>, Vec<SimilarityGrid>) {
    let mut tables = Vec::new();
    let mut grids = Vec::new();
    for reference in Reference::ALL {
        let mut table_sums: BTreeMap<(Algorithm, usize), (f64, f64, usize)> = BTreeMap::new();
        let mut grid_sums: BTreeMap<(Algorithm, usize, u32), (f64, f64, usize)> = BTreeMap::new();
        let mut skipped_empty = 0usize;
        let mut window_skips: BTreeMap<usize, usize> = BTreeMap::new();
        for outcome in outcomes {
            let Some(ro) = outcome.references.iter().find(|r| r.reference == reference) else {
                continue;
            };
            if ro.skipped_empty {
                skipped_empty += 1;
                continue;
            }
            for &w in &ro.skipped_windows {
                *window_skips.entry(w).or_default() += 1;
            }
            let size_bucket = (ro.result_size as u64).ilog2();
            for m in &ro.measurements {
                let slot = table_sums.entry((m.algorithm, m.window)).or_insert((0.0, 0.0, 0));
                slot.0 += m.osim;
                slot.1 += m.ksim;
                slot.2 += 1;
                let slot = grid_sums
                    .entry((m.algorithm, m.window, size_bucket))
                    .or_insert((0.0, 0.0, 0));
                slot.0 += m.osim;
                slot.1 += m.ksim;
                slot.2 += 1;
            }
        }
        let rows = Algorithm::ALL
            .iter()
            .map(|&algorithm| TableRow {
                algorithm,
                cells: cfg
                    .windows
                    .iter()
                    .map(|&w| {
                        table_sums.get(&(algorithm, w)).map(|&(o, k, n)| MeanCell {
                            osim: o / n as f64,
                            ksim: k / n as f64,
                            count: n,
                        })
                    })
                    .collect(),
            })
            .collect();
        tables.push(SimilarityTable {
            reference,
            windows: cfg.windows.clone(),
            rows,
            pair_count,
            skipped_empty,
            window_skips,
        });
        let cells = grid_sums
            .into_iter()
            .map(|((algorithm, window, bucket), (o, k, n))| GridCell {
                algorithm,
                window,
                size_lo: 1usize << bucket,
                size_hi: (1usize << (bucket + 1)) - 1,
                mean_osim: o / n as f64,
                mean_ksim: k / n as f64,
                count: n,
            })
            .collect();
        grids.push(SimilarityGrid { reference, cells });
    }
    (tables, grids)
}

/// The harness output: what was compared and how similar it was.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub tags: Vec<Tag>,
    pub pair_count: usize,
    pub tables: Vec<SimilarityTable>,
    pub grids: Vec<SimilarityGrid>,
    /// Pairs that could not be evaluated, as `(facet, reason)`.
    pub failures: Vec<(String, String)>,
}

/// Runs the whole protocol over a prebuilt store. The store must carry
/// the graph's fingerprint; pruning is the caller's business here,
/// since the store was built for exactly this graph.
pub fn run_experiment(
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
    let mut outcomes = Vec::new();
    let mut failures = Vec::new();
    let mut pair_count = 0usize;
    for i in 0..tags.len() {
        for j in i + 1..tags.len() {
            pair_count += 1;
            let facet = Facet::new([tags[i].clone(), tags[j].clone()])
                .expect("two distinct tags form a facet");
            match evaluate_pair(g, &index, store, &global, &facet, cfg) {
                Ok(outcome) => outcomes.push(outcome),
                Err(e) => failures.push((facet.to_string(), e.to_string())),
            }
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

/// What [`run_pipeline`] produced: the graph as evaluated (pruned when
/// the config says so), the store built for it, and the report.
pub struct PipelineOutput {
    pub graph: TaggedGraph,
    pub store: RankStore,
    pub report: ExperimentReport,
}

/// Prunes (per config), indexes, builds the store, and runs the
/// experiment in one sequential call.
pub fn run_pipeline(
    g: &TaggedGraph,
    cfg: &ExperimentConfig,
    truncation: Truncation,
) -> Result<PipelineOutput, EvalError> {
    cfg.validate()?;
    let graph = if cfg.prune {
        crate::centrality::prune_dangling(g)
    } else {
        g.clone()
    };
    let index = TagIndex::build(&graph);
    let (store, _) = build_store(&graph, &index, &cfg.params, truncation);
    let report = run_experiment(&graph, &store, cfg)?;
    Ok(PipelineOutput {
        graph,
        store,
        report,
    })
}
