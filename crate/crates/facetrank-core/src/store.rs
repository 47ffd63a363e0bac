//! Precomputed per-tag rankings, the offline half of query answering.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::time::Duration;

use crate::centrality::{pagerank, rank_of, PageRankParams, Ranking};
use crate::graph::{Tag, TaggedGraph};
use crate::index::TagIndex;
use crate::intern::SymbolTable;

/// How many ranking entries a store keeps per tag.
///
/// Node membership is always kept in full; truncation only limits the
/// per-tag ranking lists, trading exactness of the merge algorithms
/// for space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    Unlimited,
    Top(usize),
}

impl Truncation {
    fn cap(&self, len: usize) -> usize {
        match *self {
            Truncation::Unlimited => len,
            Truncation::Top(w) => len.min(w),
        }
    }
}

impl fmt::Display for Truncation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Truncation::Unlimited => write!(f, "unlimited"),
            Truncation::Top(w) => write!(f, "{w}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StoreError {
    MissingTag(String),
}

impl fmt::Display for StoreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StoreError::MissingTag(tag) => write!(f, "tag {tag:?} is not in the store"),
        }
    }
}

impl core::error::Error for StoreError {}

#[derive(Debug, Clone)]
pub(crate) struct StoreEntry {
    /// All nodes of the tag's subgraph, sorted by id, never truncated.
    pub nodes: Vec<u32>,
    /// `(user, centrality)` in rank order, truncated to the store's w.
    pub ranking: Vec<(u32, f64)>,
    pub edge_count: usize,
    pub converged: bool,
}

/// Per-tag PageRank rankings for a whole graph, keyed by tag name.
#[derive(Debug, Clone)]
pub struct RankStore {
    users: Arc<SymbolTable>,
    pub params: PageRankParams,
    pub truncation: Truncation,
    pub graph_fingerprint: String,
    entries: BTreeMap<String, StoreEntry>,
}

/// The ranking of one tag, ready to be placed into a store.
#[derive(Debug)]
pub struct TagRanking {
    tag: String,
    users: Arc<SymbolTable>,
    entry: StoreEntry,
}

impl TagRanking {
    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn node_count(&self) -> usize {
        self.entry.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.entry.edge_count
    }
}

/// Counters and timings from one store build.
#[derive(Debug, Clone, Default)]
pub struct BuildReport {
    pub tags: usize,
    /// Sum of per-tag subgraph edge counts.
    pub total_subgraph_edges: usize,
    /// Wall time per tag, in build order. All zero unless a clock was
    /// injected via [`build_store_with_clock`].
    pub tag_timings: Vec<(String, Duration)>,
}

/// Ranks one tag's subgraph. Returns `None` for tags without edges.
pub fn build_store_entry(
    index: &TagIndex,
    tag: &str,
    params: &PageRankParams,
    truncation: Truncation,
) -> Option<TagRanking> {
    let normalized = Tag::new(tag).ok()?;
    let subgraph = index.subgraph(normalized.as_str());
    if subgraph.is_empty() {
        return None;
    }
    let centrality = pagerank(&subgraph, params).expect("tag subgraphs are non-empty");
    let ranking = rank_of(&centrality);
    let keep = truncation.cap(ranking.len());
    let entry = StoreEntry {
        nodes: subgraph.node_ids().iter().copied().collect(),
        ranking: ranking.entries()[..keep].to_vec(),
        edge_count: subgraph.edge_count(),
        converged: centrality.converged,
    };
    Some(TagRanking {
        tag: normalized.as_str().to_string(),
        users: index.users_arc().clone(),
        entry,
    })
}

/// Combines per-tag rankings into a store for `graph`.
///
/// Panics if any part was built from a different graph; parts must come
/// from [`build_store_entry`] over an index of the same graph.
pub fn assemble_store(
    graph: &TaggedGraph,
    params: &PageRankParams,
    truncation: Truncation,
    parts: Vec<TagRanking>,
) -> RankStore {
    let users = graph.users_arc().clone();
    let mut entries = BTreeMap::new();
    for part in parts {
        assert!(
            Arc::ptr_eq(&part.users, &users),
            "store part for tag {:?} was built from a different graph",
            part.tag
        );
        entries.insert(part.tag, part.entry);
    }
    RankStore {
        users,
        params: *params,
        truncation,
        graph_fingerprint: graph.fingerprint(),
        entries,
    }
}

/// Builds the store for every tag in the graph's vocabulary.
///
/// The index must have been built from `graph`. The report's edge total
/// is checked against the graph's tag assignments, which it must equal.
pub fn build_store(
    graph: &TaggedGraph,
    index: &TagIndex,
    params: &PageRankParams,
    truncation: Truncation,
) -> (RankStore, BuildReport) {
    build_store_with_clock(graph, index, params, truncation, &mut || Duration::ZERO)
}

/// [`build_store`] with an injected monotonic clock for per-tag timings.
pub fn build_store_with_clock(
    graph: &TaggedGraph,
    index: &TagIndex,
    params: &PageRankParams,
    truncation: Truncation,
    now: &mut dyn FnMut() -> Duration,
) -> (RankStore, BuildReport) {
    let mut parts = Vec::new();
    let mut timings = Vec::new();
    for tag in index.tags() {
        let started = now();
        if let Some(part) = build_store_entry(index, tag, params, truncation) {
            timings.push((part.tag.clone(), now().saturating_sub(started)));
            parts.push(part);
        }
    }
    let store = assemble_store(graph, params, truncation, parts);
    let total: usize = store.entries.values().map(|e| e.edge_count).sum();
    assert_eq!(
        total,
        graph.total_tag_assignments(),
        "per-tag subgraph edges must sum to the graph's tag assignments"
    );
    let report = BuildReport {
        tags: store.entries.len(),
        total_subgraph_edges: total,
        tag_timings: timings,
    };
    (store, report)
}

/// Everything stored for one tag, in exportable form.
#[derive(Debug, Clone, PartialEq)]
pub struct TagSnapshot<'a> {
    pub tag: &'a str,
    pub node_count: usize,
    pub edge_count: usize,
    pub converged: bool,
    /// `(rank, user, centrality)` for the kept ranking entries.
    pub ranking: Vec<(usize, &'a str, f64)>,
    /// Node-set members beyond the ranking cutoff, sorted by name.
    /// Empty unless the store is truncated.
    pub unranked_nodes: Vec<&'a str>,
}

impl RankStore {
    pub fn tag_count(&self) -> usize {
        self.entries.len()
    }

    pub fn tags(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn contains_tag(&self, tag: &str) -> bool {
        self.lookup(tag).is_some()
    }

    fn lookup(&self, tag: &str) -> Option<&StoreEntry> {
        let normalized = Tag::new(tag).ok()?;
        self.entries.get(normalized.as_str())
    }

    pub(crate) fn entry(&self, tag: &str) -> Result<&StoreEntry, StoreError> {
        self.lookup(tag)
            .ok_or_else(|| StoreError::MissingTag(tag.trim().to_lowercase()))
    }

    /// The first `min(w, stored)` ranking entries of a tag as
    /// `(rank, user, centrality)`.
    pub fn top(&self, tag: &str, w: usize) -> Result<Vec<(usize, &str, f64)>, StoreError> {
        let entry = self.entry(tag)?;
        Ok(entry
            .ranking
            .iter()
            .take(w)
            .enumerate()
            .map(|(i, &(id, c))| (i + 1, self.users.name(id), c))
            .collect())
    }

    /// The full stored ranking of a tag.
    pub fn ranking(&self, tag: &str) -> Result<Ranking, StoreError> {
        let entry = self.entry(tag)?;
        Ok(Ranking::from_ordered(
            self.users.clone(),
            entry.ranking.clone(),
        ))
    }

    /// The untruncated node set of the tag's subgraph, sorted by name.
    pub fn nodes(&self, tag: &str) -> Result<Vec<&str>, StoreError> {
        let entry = self.entry(tag)?;
        let mut names: Vec<&str> = entry.nodes.iter().map(|&id| self.users.name(id)).collect();
        names.sort_unstable();
        Ok(names)
    }

    pub fn node_count(&self, tag: &str) -> Result<usize, StoreError> {
        Ok(self.entry(tag)?.nodes.len())
    }

    pub fn edge_count(&self, tag: &str) -> Result<usize, StoreError> {
        Ok(self.entry(tag)?.edge_count)
    }

    pub fn converged(&self, tag: &str) -> Result<bool, StoreError> {
        Ok(self.entry(tag)?.converged)
    }

    /// Exportable views of every tag, in tag order.
    pub fn snapshots(&self) -> impl Iterator<Item = TagSnapshot<'_>> {
        self.entries.iter().map(|(tag, entry)| {
            let ranked: alloc::collections::BTreeSet<u32> =
                entry.ranking.iter().map(|&(id, _)| id).collect();
            let mut unranked: Vec<&str> = entry
                .nodes
                .iter()
                .filter(|id| !ranked.contains(id))
                .map(|&id| self.users.name(id))
                .collect();
            unranked.sort_unstable();
            TagSnapshot {
                tag,
                node_count: entry.nodes.len(),
                edge_count: entry.edge_count,
                converged: entry.converged,
                ranking: entry
                    .ranking
                    .iter()
                    .enumerate()
                    .map(|(i, &(id, c))| (i + 1, self.users.name(id), c))
                    .collect(),
                unranked_nodes: unranked,
            }
        })
    }

    pub(crate) fn users_arc(&self) -> &Arc<SymbolTable> {
        &self.users
    }
}

/// Centralities are persisted to 12 significant digits; store equality
/// compares them at that same granularity so a saved-and-reloaded store
/// equals its source.
pub fn format_centrality(c: f64) -> String {
    format!("{c:.11e}")
}

impl PartialEq for RankStore {
    fn eq(&self, other: &Self) -> bool {
        self.params == other.params
            && self.truncation == other.truncation
            && self.graph_fingerprint == other.graph_fingerprint
            && self.snapshots().map(snapshot_key).eq(other.snapshots().map(snapshot_key))
    }
}

fn snapshot_key(s: TagSnapshot<'_>) -> (String, usize, usize, bool, Vec<(usize, String, String)>, Vec<String>) {
    (
        s.tag.to_string(),
        s.node_count,
        s.edge_count,
        s.converged,
        s.ranking
            .iter()
            .map(|&(r, u, c)| (r, u.to_string(), format_centrality(c)))
            .collect(),
        s.unranked_nodes.iter().map(|u| u.to_string()).collect(),
    )
}

/// Assembles a store from explicit per-tag data instead of a graph.
#[derive(Debug)]
pub struct RankStoreBuilder {
    users: SymbolTable,
    params: PageRankParams,
    truncation: Truncation,
    fingerprint: String,
    entries: BTreeMap<String, StoreEntry>,
}

impl RankStoreBuilder {
    pub fn new(params: PageRankParams, truncation: Truncation, fingerprint: &str) -> Self {
        RankStoreBuilder {
            users: SymbolTable::new(),
            params,
            truncation,
            fingerprint: fingerprint.to_string(),
            entries: BTreeMap::new(),
        }
    }

    /// Adds a tag from unordered `(user, centrality)` pairs; the ranking
    /// is derived (descending centrality, ties by user id) and truncated
    /// per the builder's setting. The node set is the listed users.
    pub fn add_tag(
        &mut self,
        tag: &str,
        centralities: &[(&str, f64)],
        edge_count: usize,
        converged: bool,
    ) -> Result<&mut Self, crate::graph::InputError> {
        let normalized = Tag::new(tag)?;
        let mut ranked: Vec<(u32, f64)> = centralities
            .iter()
            .map(|&(name, c)| (self.users.intern(name), c))
            .collect();
        let users = &self.users;
        ranked.sort_unstable_by(|a, b| {
            b.1.total_cmp(&a.1)
                .then_with(|| users.name(a.0).cmp(users.name(b.0)))
        });
        let mut nodes: Vec<u32> = ranked.iter().map(|&(id, _)| id).collect();
        nodes.sort_unstable();
        nodes.dedup();
        let keep = self.truncation.cap(ranked.len());
        ranked.truncate(keep);
        self.entries.insert(
            normalized.as_str().to_string(),
            StoreEntry {
                nodes,
                ranking: ranked,
                edge_count,
                converged,
            },
        );
        Ok(self)
    }

    /// Adds a tag whose ranking order is already fixed (for example read
    /// back from a file), plus any node-set members beyond the cutoff.
    /// No truncation is applied.
    pub fn add_tag_ranked(
        &mut self,
        tag: &str,
        ranked: &[(&str, f64)],
        extra_nodes: &[&str],
        edge_count: usize,
        converged: bool,
    ) -> Result<&mut Self, crate::graph::InputError> {
        let normalized = Tag::new(tag)?;
        let ranking: Vec<(u32, f64)> = ranked
            .iter()
            .map(|&(name, c)| (self.users.intern(name), c))
            .collect();
        let mut nodes: Vec<u32> = ranking.iter().map(|&(id, _)| id).collect();
        nodes.extend(extra_nodes.iter().map(|name| self.users.intern(name)));
        nodes.sort_unstable();
        nodes.dedup();
        self.entries.insert(
            normalized.as_str().to_string(),
            StoreEntry {
                nodes,
                ranking,
                edge_count,
                converged,
            },
        );
        Ok(self)
    }

    pub fn build(self) -> RankStore {
        RankStore {
            users: Arc::new(self.users),
            params: self.params,
            truncation: self.truncation,
            graph_fingerprint: self.fingerprint,
            entries: self.entries,
        }
    }
}
