//! Deterministic generator for scale-free tagged recommendation graphs.
//!
//! Growth follows shifted preferential attachment: nodes join one at a
//! time and recommend existing nodes with probability proportional to
//! `indegree + A`, where the shift `A = (γ - 2) · mean_outdegree`
//! places the indegree distribution's power-law exponent at γ. Each
//! edge then receives a Zipf-weighted set of tags. Everything is driven
//! by one seeded ChaCha stream, so equal parameters give equal graphs.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson, Zipf};

use crate::graph::TaggedGraph;
use crate::intern::SymbolTable;

/// Rewiring attempts per edge at full assortativity bias.
const REWIRE_SWEEPS: f64 = 3.0;

#[derive(Debug, Clone, PartialEq)]
pub struct GenParams {
    pub node_count: usize,
    /// Mean of the Poisson out-degree draw per joining node.
    pub mean_outdegree: f64,
    /// Target power-law exponent of the indegree distribution,
    /// strictly between 2 and 3.
    pub indegree_exponent: f64,
    pub tag_vocabulary_size: usize,
    /// Mean of the Poisson tag-count draw per edge, floored at 1.
    pub tags_per_edge_mean: f64,
    /// Zipf exponent of tag popularity; higher concentrates usage on
    /// the low-numbered tags.
    pub tag_popularity_exponent: f64,
    /// Degree correlation knob in [-1, 1]. Positive values rewire
    /// toward connecting similar-indegree nodes, negative away from
    /// them, zero leaves the growth process untouched.
    pub assortativity_bias: f64,
    pub seed: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            node_count: 10_000,
            mean_outdegree: 25.0,
            indegree_exponent: 2.5,
            tag_vocabulary_size: 300,
            tags_per_edge_mean: 9.26,
            tag_popularity_exponent: 1.0,
            assortativity_bias: 0.0,
            seed: 42,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenError {
    pub parameter: &'static str,
    pub message: String,
}

impl core::fmt::Display for GenError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "invalid {}: {}", self.parameter, self.message)
    }
}

impl core::error::Error for GenError {}

fn invalid(parameter: &'static str, message: String) -> GenError {
    GenError { parameter, message }
}

impl GenParams {
    fn validate(&self) -> Result<(), GenError> {
        if self.node_count == 0 {
            return Err(invalid("node_count", String::from("must be at least 1")));
        }
        if !(self.mean_outdegree.is_finite() && self.mean_outdegree > 0.0) {
            return Err(invalid(
                "mean_outdegree",
                format!("must be positive, got {}", self.mean_outdegree),
            ));
        }
        if !(self.indegree_exponent > 2.0 && self.indegree_exponent < 3.0) {
            return Err(invalid(
                "indegree_exponent",
                format!(
                    "must lie strictly between 2 and 3, got {}",
                    self.indegree_exponent
                ),
            ));
        }
        if self.tag_vocabulary_size == 0 {
            return Err(invalid(
                "tag_vocabulary_size",
                String::from("must be at least 1; every edge needs a tag"),
            ));
        }
        if !(self.tags_per_edge_mean.is_finite() && self.tags_per_edge_mean > 0.0) {
            return Err(invalid(
                "tags_per_edge_mean",
                format!("must be positive, got {}", self.tags_per_edge_mean),
            ));
        }
        if !(self.tag_popularity_exponent.is_finite() && self.tag_popularity_exponent > 0.0) {
            return Err(invalid(
                "tag_popularity_exponent",
                format!("must be positive, got {}", self.tag_popularity_exponent),
            ));
        }
        if !(self.assortativity_bias.is_finite()
            && (-1.0..=1.0).contains(&self.assortativity_bias))
        {
            return Err(invalid(
                "assortativity_bias",
                format!("must lie in [-1, 1], got {}", self.assortativity_bias),
            ));
        }
        Ok(())
    }
}

/// Generates a tagged graph per `params`. Nodes are named `u0001`-style
/// with enough digits for the node count, tags `t01`-style with tag 1
/// the most popular; isolated nodes are kept. The graph is simple and
/// free of self-loops, and every edge carries at least one tag.
pub fn generate(params: &GenParams) -> Result<TaggedGraph, GenError> {
    params.validate()?;
    let n = params.node_count;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let shift = (params.indegree_exponent - 2.0) * params.mean_outdegree;
    let out_draw = Poisson::new(params.mean_outdegree).expect("validated mean");

    // One urn entry per in-edge makes the preferential part of the draw
    // O(1): with probability proportional to the shift pick uniformly,
    // otherwise pick an urn entry.
    let mut urn: Vec<u32> = Vec::new();
    let mut edge_list: Vec<(u32, u32)> = Vec::new();
    let mut edge_set: BTreeSet<(u32, u32)> = BTreeSet::new();
    for i in 1..n {
        let want = (out_draw.sample(&mut rng) as usize).min(i);
        let mut chosen: BTreeSet<u32> = BTreeSet::new();
        // Collisions re-draw; the budget keeps degenerate cases finite.
        let mut budget = 20 * want + 20;
        while chosen.len() < want && budget > 0 {
            budget -= 1;
            let uniform_weight = shift * i as f64;
            let total = uniform_weight + urn.len() as f64;
            let pick = if urn.is_empty() || rng.gen::<f64>() * total < uniform_weight {
                rng.gen_range(0..i) as u32
            } else {
                urn[rng.gen_range(0..urn.len())]
            };
            chosen.insert(pick);
        }
        for &dst in &chosen {
            edge_list.push((i as u32, dst));
            edge_set.insert((i as u32, dst));
            urn.push(dst);
        }
    }

    if params.assortativity_bias != 0.0 {
        rewire(
            &mut edge_list,
            &mut edge_set,
            n,
            params.assortativity_bias,
            &mut rng,
        );
    }

    let tag_draw = Poisson::new(params.tags_per_edge_mean).expect("validated mean");
    let zipf: Zipf<f64> = Zipf::new(
        params.tag_vocabulary_size as u64,
        params.tag_popularity_exponent,
    )
    .expect("validated vocabulary and exponent");
    let mut edges: BTreeMap<(u32, u32), BTreeSet<u32>> = edge_list
        .into_iter()
        .map(|key| (key, BTreeSet::new()))
        .collect();
    for labels in edges.values_mut() {
        let drawn = tag_draw.sample(&mut rng) as usize;
        let count = drawn.max(1).min(params.tag_vocabulary_size);
        while labels.len() < count {
            let rank = zipf.sample(&mut rng) as u32;
            labels.insert(rank - 1);
        }
    }

    let user_width = format!("{}", n.saturating_sub(1)).len();
    let mut users = SymbolTable::new();
    for i in 0..n {
        users.intern(&format!("u{i:0user_width$}"));
    }
    let tag_width = format!("{}", params.tag_vocabulary_size).len();
    let mut tags = SymbolTable::new();
    for rank in 1..=params.tag_vocabulary_size {
        tags.intern(&format!("t{rank:0tag_width$}"));
    }
    let nodes: BTreeSet<u32> = (0..n as u32).collect();
    Ok(TaggedGraph::from_parts(
        alloc::sync::Arc::new(users),
        alloc::sync::Arc::new(tags),
        nodes,
        edges,
    ))
}

/// Degree-preserving target swaps: two edges `(s1,t1)`, `(s2,t2)`
/// become `(s1,t2)`, `(s2,t1)` when that moves the sum of endpoint
/// indegree products in the requested direction. Swapping targets
/// changes neither in- nor out-degree sequences, so the degree
/// distributions survive unchanged.
fn rewire(
    edge_list: &mut [(u32, u32)],
    edge_set: &mut BTreeSet<(u32, u32)>,
    node_count: usize,
    bias: f64,
    rng: &mut ChaCha8Rng,
) {
    let m = edge_list.len();
    if m < 2 {
        return;
    }
    let mut indegree = alloc::vec![0u32; node_count];
    for &(_, dst) in edge_list.iter() {
        indegree[dst as usize] += 1;
    }
    let deg = |v: u32| indegree[v as usize] as f64;
    let attempts = (bias.abs() * REWIRE_SWEEPS * m as f64) as usize;
    for _ in 0..attempts {
        let x = rng.gen_range(0..m);
        let y = rng.gen_range(0..m);
        if x == y {
            continue;
        }
        let (s1, t1) = edge_list[x];
        let (s2, t2) = edge_list[y];
        if s1 == s2 || t1 == t2 || s1 == t2 || s2 == t1 {
            continue;
        }
        if edge_set.contains(&(s1, t2)) || edge_set.contains(&(s2, t1)) {
            continue;
        }
        let current = deg(s1) * deg(t1) + deg(s2) * deg(t2);
        let swapped = deg(s1) * deg(t2) + deg(s2) * deg(t1);
        let improves = if bias > 0.0 {
            swapped > current
        } else {
            swapped < current
        };
        if improves {
            edge_set.remove(&(s1, t1));
            edge_set.remove(&(s2, t2));
            edge_set.insert((s1, t2));
            edge_set.insert((s2, t1));
            edge_list[x] = (s1, t2);
            edge_list[y] = (s2, t1);
        }
    }
}
