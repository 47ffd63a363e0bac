//! PageRank centrality and the rankings derived from it.

use alloc::collections::BTreeSet;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::TaggedGraph;
use crate::intern::SymbolTable;

/// Power-iteration parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PageRankParams {
    /// Probability of following an out-edge rather than teleporting.
    pub damping: f64,
    /// Convergence threshold on the max-norm change per iteration.
    pub epsilon: f64,
    pub max_iterations: usize,
}

impl Default for PageRankParams {
    fn default() -> Self {
        PageRankParams {
            damping: 0.85,
            epsilon: 1e-6,
            max_iterations: 200,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CentralityError {
    EmptyGraph,
}

impl fmt::Display for CentralityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CentralityError::EmptyGraph => write!(f, "cannot rank an empty graph"),
        }
    }
}

impl core::error::Error for CentralityError {}

/// A probability distribution over a graph's nodes.
#[derive(Debug, Clone)]
pub struct CentralityVector {
    users: Arc<SymbolTable>,
    /// Sorted by user id for binary-search lookup.
    entries: Vec<(u32, f64)>,
    pub iterations: usize,
    pub converged: bool,
}

impl CentralityVector {
    pub(crate) fn from_ids(
        users: Arc<SymbolTable>,
        entries: Vec<(u32, f64)>,
        iterations: usize,
        converged: bool,
    ) -> CentralityVector {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        CentralityVector {
            users,
            entries,
            iterations,
            converged,
        }
    }

    /// Builds a vector from explicit `(user, score)` pairs, for
    /// assembling stores or rankings from precomputed data.
    pub fn from_scores<'a>(scores: impl IntoIterator<Item = (&'a str, f64)>) -> CentralityVector {
        let mut users = SymbolTable::new();
        let mut entries: Vec<(u32, f64)> = scores
            .into_iter()
            .map(|(name, score)| (users.intern(name), score))
            .collect();
        entries.sort_unstable_by_key(|&(id, _)| id);
        entries.dedup_by_key(|&mut (id, _)| id);
        CentralityVector {
            users: Arc::new(users),
            entries,
            iterations: 0,
            converged: true,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, user: &str) -> Option<f64> {
        let id = self.users.id(user)?;
        self.get_id(id)
    }

    pub(crate) fn get_id(&self, id: u32) -> Option<f64> {
        self.entries
            .binary_search_by_key(&id, |&(i, _)| i)
            .ok()
            .map(|pos| self.entries[pos].1)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.entries
            .iter()
            .map(|&(id, score)| (self.users.name(id), score))
    }

    pub fn sum(&self) -> f64 {
        self.entries.iter().map(|&(_, s)| s).sum()
    }

    pub(crate) fn users_arc(&self) -> &Arc<SymbolTable> {
        &self.users
    }

    pub(crate) fn entries(&self) -> &[(u32, f64)] {
        &self.entries
    }
}

/// PageRank of the graph under the damped random-surfer model.
///
/// Per iteration every node receives `(1 - d)/n` teleport mass plus `d`
/// times the mass forwarded along in-edges, where each node splits its
/// mass evenly over its out-edges; nodes without out-edges spread their
/// mass uniformly over all nodes. Iteration stops once the max-norm
/// change drops to `epsilon` or below. If `max_iterations` is exhausted
/// first, the result carries `converged = false` and the last iterate.
/// The returned vector sums to 1.
pub fn pagerank(
    graph: &TaggedGraph,
    params: &PageRankParams,
) -> Result<CentralityVector, CentralityError> {
    assert!(
        params.damping > 0.0 && params.damping < 1.0,
        "damping must lie strictly between 0 and 1, got {}",
        params.damping
    );
    assert!(
        params.epsilon > 0.0,
        "epsilon must be positive, got {}",
        params.epsilon
    );
    assert!(params.max_iterations > 0, "max_iterations must be positive");

    let ids: Vec<u32> = graph.node_ids().iter().copied().collect();
    let n = ids.len();
    if n == 0 {
        return Err(CentralityError::EmptyGraph);
    }
    let pos_of = |id: u32| ids.binary_search(&id).expect("edge endpoint not in node set");

    // In-edge lists in CSR form, plus out-degrees.
    let mut out_degree = vec![0u32; n];
    let mut in_count = vec![0u32; n];
    for &(src, dst) in graph.edge_map().keys() {
        out_degree[pos_of(src)] += 1;
        in_count[pos_of(dst)] += 1;
    }
    let mut offsets = vec![0usize; n + 1];
    for i in 0..n {
        offsets[i + 1] = offsets[i] + in_count[i] as usize;
    }
    let mut in_edges = vec![0u32; offsets[n]];
    let mut cursor = offsets.clone();
    for &(src, dst) in graph.edge_map().keys() {
        let d = pos_of(dst);
        in_edges[cursor[d]] = pos_of(src) as u32;
        cursor[d] += 1;
    }
    let dangling: Vec<usize> = (0..n).filter(|&i| out_degree[i] == 0).collect();

    let d = params.damping;
    let uniform = 1.0 / n as f64;
    let mut v = vec![uniform; n];
    let mut next_v = vec![0.0; n];
    let mut contrib = vec![0.0; n];
    let mut iterations = 0;
    let mut converged = false;

    while iterations < params.max_iterations {
        for i in 0..n {
            contrib[i] = if out_degree[i] > 0 {
                v[i] / out_degree[i] as f64
            } else {
                0.0
            };
        }
        let dangling_mass: f64 = dangling.iter().map(|&i| v[i]).sum();
        let base = (d * dangling_mass + (1.0 - d)) * uniform;
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut acc = 0.0;
            for &j in &in_edges[offsets[i]..offsets[i + 1]] {
                acc += contrib[j as usize];
            }
            let next = base + d * acc;
            let diff = libm::fabs(next - v[i]);
            if diff > delta {
                delta = diff;
            }
            next_v[i] = next;
        }
        core::mem::swap(&mut v, &mut next_v);
        iterations += 1;
        if delta <= params.epsilon {
            converged = true;
            break;
        }
    }

    let total: f64 = v.iter().sum();
    let entries: Vec<(u32, f64)> = ids
        .iter()
        .zip(v.iter())
        .map(|(&id, &score)| (id, score / total))
        .collect();
    Ok(CentralityVector::from_ids(
        graph.users_arc().clone(),
        entries,
        iterations,
        converged,
    ))
}

/// Removes nodes with indegree exactly 1 and outdegree 0, together with
/// their single incoming edge. One pass only; nodes that become
/// dangling through the removal stay.
pub fn prune_dangling(graph: &TaggedGraph) -> TaggedGraph {
    let mut out_degree: alloc::collections::BTreeMap<u32, u32> = alloc::collections::BTreeMap::new();
    let mut in_degree: alloc::collections::BTreeMap<u32, u32> = alloc::collections::BTreeMap::new();
    for &(src, dst) in graph.edge_map().keys() {
        *out_degree.entry(src).or_default() += 1;
        *in_degree.entry(dst).or_default() += 1;
    }
    let removed: BTreeSet<u32> = graph
        .node_ids()
        .iter()
        .copied()
        .filter(|id| {
            in_degree.get(id).copied().unwrap_or(0) == 1
                && out_degree.get(id).copied().unwrap_or(0) == 0
        })
        .collect();
    let nodes: BTreeSet<u32> = graph.node_ids().difference(&removed).copied().collect();
    let edges = graph
        .edge_map()
        .iter()
        .filter(|((_, dst), _)| !removed.contains(dst))
        .map(|(key, tags)| (*key, tags.clone()))
        .collect();
    TaggedGraph::from_parts(
        graph.users_arc().clone(),
        graph.tags_arc().clone(),
        nodes,
        edges,
    )
}

/// One entry of a [`Ranking`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankedUser<'a> {
    /// 1-based, dense, unique.
    pub rank: usize,
    pub user: &'a str,
    pub score: f64,
}

/// A total order over users: positions 1..=n, best first.
#[derive(Debug, Clone)]
pub struct Ranking {
    users: Arc<SymbolTable>,
    /// `(user, score)` in rank order.
    entries: Vec<(u32, f64)>,
}

impl Ranking {
    pub(crate) fn from_ordered(users: Arc<SymbolTable>, entries: Vec<(u32, f64)>) -> Ranking {
        Ranking { users, entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = RankedUser<'_>> {
        self.entries
            .iter()
            .enumerate()
            .map(|(i, &(id, score))| RankedUser {
                rank: i + 1,
                user: self.users.name(id),
                score,
            })
    }

    /// The user at the given 1-based rank.
    pub fn user_at(&self, rank: usize) -> Option<&str> {
        self.entries
            .get(rank.checked_sub(1)?)
            .map(|&(id, _)| self.users.name(id))
    }

    /// The 1-based rank of a user, by linear scan.
    pub fn position(&self, user: &str) -> Option<usize> {
        let id = self.users.id(user)?;
        self.entries.iter().position(|&(i, _)| i == id).map(|p| p + 1)
    }

    /// The first `min(n, len)` user names in rank order.
    pub fn top_names(&self, n: usize) -> Vec<&str> {
        self.entries
            .iter()
            .take(n)
            .map(|&(id, _)| self.users.name(id))
            .collect()
    }

    pub fn truncated(&self, n: usize) -> Ranking {
        Ranking {
            users: self.users.clone(),
            entries: self.entries.iter().take(n).copied().collect(),
        }
    }

    pub(crate) fn entries(&self) -> &[(u32, f64)] {
        &self.entries
    }
}

impl PartialEq for Ranking {
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len()
            && self
                .iter()
                .zip(other.iter())
                .all(|(a, b)| a.user == b.user && a.score == b.score)
    }
}

/// Orders users by descending centrality, ties broken by ascending
/// user id, and assigns dense ranks 1..=n.
pub fn rank_of(centrality: &CentralityVector) -> Ranking {
    let mut entries: Vec<(u32, f64)> = centrality.entries().to_vec();
    let users = centrality.users_arc().clone();
    entries.sort_unstable_by(|a, b| {
        b.1.total_cmp(&a.1)
            .then_with(|| users.name(a.0).cmp(users.name(b.0)))
    });
    Ranking::from_ordered(users, entries)
}

/// Same order as [`rank_of`] but restricted to users for which `keep`
/// returns true, with ranks renumbered densely.
pub(crate) fn rank_filtered(
    centrality: &CentralityVector,
    keep: impl Fn(u32) -> bool,
) -> Ranking {
    let mut entries: Vec<(u32, f64)> = centrality
        .entries()
        .iter()
        .copied()
        .filter(|&(id, _)| keep(id))
        .collect();
    let users = centrality.users_arc().clone();
    entries.sort_unstable_by(|a, b| {
        b.1.total_cmp(&a.1)
            .then_with(|| users.name(a.0).cmp(users.name(b.0)))
    });
    Ranking::from_ordered(users, entries)
}
