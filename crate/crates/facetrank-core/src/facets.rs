//! The six facet ranking algorithms.
//!
//! A facet query asks for the most reputable users among those active
//! in every tag of the facet. Three algorithms run PageRank online over
//! a graph derived for the query (E-intersection, E-union-N-intersection,
//! τ-N-intersection), one filters a global ranking (Single), and two
//! merge precomputed per-tag rankings without touching the graph at all
//! (PR-product, R-sum).

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::centrality::{pagerank, rank_of, CentralityVector, PageRankParams, Ranking};
use crate::graph::{Facet, TaggedGraph};
use crate::index::TagIndex;
use crate::store::{RankStore, StoreError};

/// Number of top entries per tag that `τ-N-intersection` reads from the
/// store when no explicit window is given.
pub const DEFAULT_TAU_WINDOW: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Algorithm {
    EIntersection,
    EUnionNIntersection,
    Single,
    PrProduct,
    RSum,
    TauNIntersection,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::EIntersection,
        Algorithm::EUnionNIntersection,
        Algorithm::Single,
        Algorithm::PrProduct,
        Algorithm::RSum,
        Algorithm::TauNIntersection,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Algorithm::EIntersection => "e-intersection",
            Algorithm::EUnionNIntersection => "e-union-n-intersection",
            Algorithm::Single => "single",
            Algorithm::PrProduct => "pr-product",
            Algorithm::RSum => "r-sum",
            Algorithm::TauNIntersection => "tau-n-intersection",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownAlgorithm(pub String);

impl fmt::Display for UnknownAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unknown algorithm {:?}; expected one of e-intersection, \
             e-union-n-intersection, single, pr-product, r-sum, tau-n-intersection",
            self.0
        )
    }
}

impl core::error::Error for UnknownAlgorithm {}

impl FromStr for Algorithm {
    type Err = UnknownAlgorithm;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .iter()
            .copied()
            .find(|a| a.as_str() == s.trim().to_lowercase())
            .ok_or_else(|| UnknownAlgorithm(String::from(s)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FacetError {
    MissingTag(String),
}

impl fmt::Display for FacetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FacetError::MissingTag(tag) => write!(f, "tag {tag:?} is not in the rank store"),
        }
    }
}

impl core::error::Error for FacetError {}

impl From<StoreError> for FacetError {
    fn from(e: StoreError) -> Self {
        match e {
            StoreError::MissingTag(tag) => FacetError::MissingTag(tag),
        }
    }
}

fn empty_ranking(g: &TaggedGraph) -> Ranking {
    Ranking::from_ordered(g.users_arc().clone(), Vec::new())
}

fn ranked_pagerank(h: &TaggedGraph, params: &PageRankParams, family: &TaggedGraph) -> Ranking {
    if h.is_empty() {
        return empty_ranking(family);
    }
    rank_of(&pagerank(h, params).expect("graph checked non-empty"))
}

/// Per-tag node sets of the facet, intersected. `None` when some tag
/// has no edges in the graph.
fn candidate_ids(g: &TaggedGraph, facet: &Facet) -> Option<BTreeSet<u32>> {
    let mut candidates: Option<BTreeSet<u32>> = None;
    for tag in facet.iter() {
        let sub = g.tag_subgraph(tag);
        if sub.is_empty() {
            return None;
        }
        let nodes: BTreeSet<u32> = sub.node_ids().iter().copied().collect();
        candidates = Some(match candidates {
            None => nodes,
            Some(acc) => acc.intersection(&nodes).copied().collect(),
        });
    }
    candidates
}

/// PageRank over the conjunction graph: only edges carrying every facet
/// tag survive, and only their endpoints are ranked.
pub fn e_intersection_rank(g: &TaggedGraph, facet: &Facet, params: &PageRankParams) -> Ranking {
    ranked_pagerank(&g.conjunction(facet), params, g)
}

/// PageRank over the disjunction graph (edges carrying any facet tag),
/// then restricted to users present in every tag's subgraph. Scores are
/// the disjunction centralities; dropped users leave no holes in the
/// rank numbering.
pub fn e_union_n_intersection_rank(
    g: &TaggedGraph,
    facet: &Facet,
    params: &PageRankParams,
) -> Ranking {
    let candidates = match candidate_ids(g, facet) {
        Some(c) if !c.is_empty() => c,
        _ => return empty_ranking(g),
    };
    let union = g.disjunction(facet);
    let centrality = pagerank(&union, params).expect("disjunction has candidate nodes");
    crate::centrality::rank_filtered(&centrality, |id| candidates.contains(&id))
}

/// Filters a global (all-tags) PageRank down to the users present in
/// every facet tag's subgraph. The index must cover the graph the
/// centrality was computed on; users missing from either side are
/// dropped.
pub fn single_rank(global: &CentralityVector, index: &TagIndex, facet: &Facet) -> Ranking {
    let users = global.users_arc().clone();
    let mut candidates: Option<BTreeSet<u32>> = None;
    for tag in facet.iter() {
        let Some(nodes) = index.node_id_set(tag) else {
            return Ranking::from_ordered(users, Vec::new());
        };
        candidates = Some(match candidates {
            None => nodes.clone(),
            Some(acc) => acc.intersection(nodes).copied().collect(),
        });
    }
    let candidates = candidates.expect("facets are never empty");
    // Candidate ids live in the index's symbol table; translate through
    // names so a centrality from another build still lines up.
    let mut entries: Vec<(u32, f64)> = candidates
        .iter()
        .filter_map(|&cid| {
            let name = index.user_name(cid);
            let gid = users.id(name)?;
            global.get_id(gid).map(|score| (gid, score))
        })
        .collect();
    let table = users.clone();
    entries.sort_unstable_by(|a, b| {
        b.1.total_cmp(&a.1)
            .then_with(|| table.name(a.0).cmp(table.name(b.0)))
    });
    Ranking::from_ordered(users, entries)
}

fn store_candidates(store: &RankStore, facet: &Facet) -> Result<Vec<u32>, StoreError> {
    let mut ids: Option<Vec<u32>> = None;
    for tag in facet.iter() {
        let entry = store.entry(tag)?;
        ids = Some(match ids {
            None => entry.nodes.clone(),
            Some(acc) => intersect_sorted(&acc, &entry.nodes),
        });
    }
    Ok(ids.expect("facets are never empty"))
}

fn intersect_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Scores each candidate by the product of its stored per-tag
/// centralities, using only the rank store. Candidates cut off by a
/// truncated ranking in any tag are dropped rather than guessed at.
pub fn pr_product_rank(store: &RankStore, facet: &Facet) -> Result<Ranking, StoreError> {
    merge_rank(store, facet, MergeScore::Product)
}

/// Scores each candidate by the sum of its per-tag rank positions,
/// lower sums first. Like `pr_product_rank` this reads only the store,
/// and candidates missing from any truncated ranking are dropped.
pub fn r_sum_rank(store: &RankStore, facet: &Facet) -> Result<Ranking, StoreError> {
    merge_rank(store, facet, MergeScore::RankSum)
}

enum MergeScore {
    Product,
    RankSum,
}

fn merge_rank(store: &RankStore, facet: &Facet, mode: MergeScore) -> Result<Ranking, StoreError> {
    use alloc::collections::BTreeMap;
    let candidates = store_candidates(store, facet)?;
    let per_tag: Vec<BTreeMap<u32, (usize, f64)>> = facet
        .iter()
        .map(|tag| {
            store.entry(tag).map(|entry| {
                entry
                    .ranking
                    .iter()
                    .enumerate()
                    .map(|(i, &(id, c))| (id, (i + 1, c)))
                    .collect()
            })
        })
        .collect::<Result<_, _>>()?;
    let users = store.users_arc().clone();
    let mut entries: Vec<(u32, f64)> = Vec::new();
    'candidates: for id in candidates {
        let mut product = 1.0f64;
        let mut rank_sum = 0usize;
        for tag_ranks in &per_tag {
            match tag_ranks.get(&id) {
                Some(&(rank, centrality)) => {
                    product *= centrality;
                    rank_sum += rank;
                }
                None => continue 'candidates,
            }
        }
        let score = match mode {
            MergeScore::Product => product,
            MergeScore::RankSum => rank_sum as f64,
        };
        entries.push((id, score));
    }
    let table = users.clone();
    match mode {
        MergeScore::Product => entries.sort_unstable_by(|a, b| {
            b.1.total_cmp(&a.1)
                .then_with(|| table.name(a.0).cmp(table.name(b.0)))
        }),
        MergeScore::RankSum => entries.sort_unstable_by(|a, b| {
            a.1.total_cmp(&b.1)
                .then_with(|| table.name(a.0).cmp(table.name(b.0)))
        }),
    }
    Ok(Ranking::from_ordered(users, entries))
}

/// Restricts the graph to each tag's stored top `w` users, intersects
/// the per-tag subgraphs edge-wise, and runs PageRank on what is left.
/// With `w` at least each tag's subgraph size this reduces to
/// `e_intersection_rank`.
pub fn tau_n_intersection_rank(
    g: &TaggedGraph,
    store: &RankStore,
    facet: &Facet,
    w: usize,
) -> Result<Ranking, StoreError> {
    let mut acc: Option<TaggedGraph> = None;
    for tag in facet.iter() {
        let top = store.top(tag, w)?;
        let names = top.iter().map(|&(_, name, _)| name);
        let restricted = g.induced_subgraph(names).tag_subgraph(tag);
        acc = Some(match acc {
            None => restricted,
            Some(prev) => prev.edge_intersection(&restricted),
        });
    }
    let merged = acc.expect("facets are never empty");
    Ok(ranked_pagerank(&merged, &store.params, g))
}

/// A facet query: which algorithm to run, and how much of the result to
/// keep.
#[derive(Debug, Clone)]
pub struct FacetRankRequest {
    pub facet: Facet,
    pub algorithm: Algorithm,
    /// Keep only the first `n` entries of the result when set.
    pub top_n: Option<usize>,
    /// Store window for τ-N-intersection; other algorithms ignore it.
    pub tau_window: usize,
}

impl FacetRankRequest {
    pub fn new(facet: Facet, algorithm: Algorithm) -> Self {
        FacetRankRequest {
            facet,
            algorithm,
            top_n: None,
            tau_window: DEFAULT_TAU_WINDOW,
        }
    }
}

/// What produced a ranking, echoed back beside the result.
#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub algorithm: Algorithm,
    pub damping: f64,
    pub epsilon: f64,
    pub tau_window: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct FacetRankResult {
    pub ranking: Ranking,
    /// Size of the candidate set, the intersection of the facet tags'
    /// subgraph node sets in the queried graph.
    pub candidate_set_size: usize,
    pub provenance: Provenance,
}

/// Runs one facet query end to end. The index and store must both
/// describe `g`; PageRank parameters are taken from the store so online
/// and offline results stay comparable.
pub fn execute(
    g: &TaggedGraph,
    index: &TagIndex,
    store: &RankStore,
    request: &FacetRankRequest,
) -> Result<FacetRankResult, FacetError> {
    let params = store.params;
    let facet = &request.facet;
    let ranking = match request.algorithm {
        Algorithm::EIntersection => e_intersection_rank(g, facet, &params),
        Algorithm::EUnionNIntersection => e_union_n_intersection_rank(g, facet, &params),
        Algorithm::Single => {
            if g.is_empty() {
                empty_ranking(g)
            } else {
                let global = pagerank(g, &params).expect("graph checked non-empty");
                single_rank(&global, index, facet)
            }
        }
        Algorithm::PrProduct => pr_product_rank(store, facet)?,
        Algorithm::RSum => r_sum_rank(store, facet)?,
        Algorithm::TauNIntersection => {
            tau_n_intersection_rank(g, store, facet, request.tau_window)?
        }
    };
    let ranking = match request.top_n {
        Some(n) => ranking.truncated(n),
        None => ranking,
    };
    let candidate_set_size = index.candidate_count(facet);
    Ok(FacetRankResult {
        ranking,
        candidate_set_size,
        provenance: Provenance {
            algorithm: request.algorithm,
            damping: params.damping,
            epsilon: params.epsilon,
            tau_window: matches!(request.algorithm, Algorithm::TauNIntersection)
                .then_some(request.tau_window),
        },
    })
}
