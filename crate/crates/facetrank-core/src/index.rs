//! Inverted index from tags to the edges and nodes carrying them.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::graph::{Tag, TaggedGraph};
use crate::intern::SymbolTable;

#[derive(Debug, Default)]
struct Posting {
    edges: Vec<(u32, u32)>,
    nodes: BTreeSet<u32>,
}

/// Tag-to-edges index over one graph.
///
/// Built once in time linear in the total tag assignments; afterwards a
/// single tag's subgraph is extracted in time proportional to its own
/// edge count rather than the whole graph's.
#[derive(Debug)]
pub struct TagIndex {
    users: Arc<SymbolTable>,
    tags: Arc<SymbolTable>,
    postings: BTreeMap<u32, Posting>,
}

impl TagIndex {
    pub fn build(graph: &TaggedGraph) -> TagIndex {
        let mut postings: BTreeMap<u32, Posting> = BTreeMap::new();
        for (&key, tag_ids) in graph.edge_map() {
            for &tid in tag_ids {
                let posting = postings.entry(tid).or_default();
                posting.edges.push(key);
                posting.nodes.insert(key.0);
                posting.nodes.insert(key.1);
            }
        }
        TagIndex {
            users: graph.users_arc().clone(),
            tags: graph.tags_arc().clone(),
            postings,
        }
    }

    /// Number of distinct tags that appear on at least one edge.
    pub fn tag_count(&self) -> usize {
        self.postings.len()
    }

    /// Indexed tag names, sorted lexicographically.
    pub fn tags(&self) -> Vec<&str> {
        let mut names: Vec<&str> = self.postings.keys().map(|&t| self.tags.name(t)).collect();
        names.sort_unstable();
        names
    }

    fn posting(&self, tag: &str) -> Option<&Posting> {
        let tid = Tag::new(tag).ok().and_then(|t| self.tags.id(t.as_str()))?;
        self.postings.get(&tid)
    }

    /// Edge count of the tag's subgraph, 0 for unknown tags.
    pub fn edge_count(&self, tag: &str) -> usize {
        self.posting(tag).map_or(0, |p| p.edges.len())
    }

    /// Node count of the tag's subgraph, 0 for unknown tags.
    pub fn node_count(&self, tag: &str) -> usize {
        self.posting(tag).map_or(0, |p| p.nodes.len())
    }

    /// Names of the nodes incident to an edge carrying `tag`.
    pub fn nodes(&self, tag: &str) -> Option<impl Iterator<Item = &str>> {
        self.posting(tag)
            .map(|p| p.nodes.iter().map(|&id| self.users.name(id)))
    }

    pub(crate) fn node_id_set(&self, tag: &str) -> Option<&BTreeSet<u32>> {
        self.posting(tag).map(|p| &p.nodes)
    }

    pub(crate) fn user_name(&self, id: u32) -> &str {
        self.users.name(id)
    }

    /// Size of the facet's candidate set: the number of users present
    /// in every facet tag's subgraph. Zero when any tag is unknown.
    pub fn candidate_count(&self, facet: &crate::graph::Facet) -> usize {
        let mut candidates: Option<BTreeSet<u32>> = None;
        for tag in facet.iter() {
            let Some(nodes) = self.node_id_set(tag) else {
                return 0;
            };
            candidates = Some(match candidates {
                None => nodes.clone(),
                Some(acc) => acc.intersection(nodes).copied().collect(),
            });
        }
        candidates.map_or(0, |c| c.len())
    }

    /// The tag's subgraph, identical to [`TaggedGraph::tag_subgraph`]
    /// but built from the posting list.
    pub fn subgraph(&self, tag: &str) -> TaggedGraph {
        let mut edges = BTreeMap::new();
        let mut nodes = BTreeSet::new();
        if let Some(tid) = Tag::new(tag).ok().and_then(|t| self.tags.id(t.as_str())) {
            if let Some(posting) = self.postings.get(&tid) {
                for &key in &posting.edges {
                    edges.insert(key, BTreeSet::from([tid]));
                }
                nodes = posting.nodes.clone();
            }
        }
        TaggedGraph::from_parts(self.users.clone(), self.tags.clone(), nodes, edges)
    }

    /// Per-tag edge counts as `(tag, count)`, sorted by tag name.
    pub fn usage_counts(&self) -> Vec<(&str, usize)> {
        let mut counts: Vec<(&str, usize)> = self
            .postings
            .iter()
            .map(|(&t, p)| (self.tags.name(t), p.edges.len()))
            .collect();
        counts.sort_unstable_by(|a, b| a.0.cmp(b.0));
        counts
    }

    /// Sum of per-tag subgraph edge counts; equals the graph's total
    /// tag assignments.
    pub fn total_postings(&self) -> usize {
        self.postings.values().map(|p| p.edges.len()).sum()
    }

    pub(crate) fn users_arc(&self) -> &Arc<SymbolTable> {
        &self.users
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, BuildOptions, Recommendation, TaggedContent};

    fn sample() -> TaggedGraph {
        let contents = [
            TaggedContent::new("u", "c1", &["blues", "jazz"]).unwrap(),
            TaggedContent::new("w", "c2", &["jazz"]).unwrap(),
        ];
        let recs = [
            Recommendation::new("v", "c1").unwrap(),
            Recommendation::new("v", "c2").unwrap(),
        ];
        build_graph(&contents, &recs, &BuildOptions::default()).0
    }

    #[test]
    fn postings_match_direct_extraction() {
        let g = sample();
        let index = TagIndex::build(&g);
        assert_eq!(index.tag_count(), 2);
        assert_eq!(index.tags(), ["blues", "jazz"]);
        assert_eq!(index.edge_count("jazz"), 2);
        assert_eq!(index.edge_count("blues"), 1);
        assert_eq!(index.edge_count("rock"), 0);
        assert_eq!(index.subgraph("jazz"), g.tag_subgraph("jazz"));
        assert_eq!(index.subgraph("blues"), g.tag_subgraph("blues"));
        assert!(index.subgraph("rock").is_empty());
    }

    #[test]
    fn totals_equal_tag_assignments() {
        let g = sample();
        let index = TagIndex::build(&g);
        assert_eq!(index.total_postings(), g.total_tag_assignments());
        assert_eq!(index.total_postings(), 3);
    }

    #[test]
    fn lookups_normalize_tag_names() {
        let g = sample();
        let index = TagIndex::build(&g);
        assert_eq!(index.edge_count(" Jazz "), 2);
        assert_eq!(index.node_count("JAZZ"), 3);
    }
}
