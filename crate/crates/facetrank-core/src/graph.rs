//! Tagged recommendation graphs and the algebra over their subgraphs.
//!
//! A graph is built from two record sets: tagged contents (who uploaded
//! what, with which tags) and recommendations (who marked which content
//! as a favorite). Each recommendation of a content uploaded by `u` by a
//! user `c` yields a directed edge `c -> u`, labeled with the union of
//! the tag sets of all of `u`'s contents that `c` recommended.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use sha2::{Digest, Sha256};

use crate::intern::SymbolTable;

/// Rejected record fields and facet constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputError {
    EmptyTag,
    EmptyUserId,
    EmptyContentId,
    EmptyFacet,
    /// The named field contains a character the line-oriented file
    /// formats cannot represent.
    IllegalCharacter(&'static str),
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputError::EmptyTag => write!(f, "tag is empty after normalization"),
            InputError::EmptyUserId => write!(f, "user id is empty"),
            InputError::EmptyContentId => write!(f, "content id is empty"),
            InputError::EmptyFacet => write!(f, "facet has no tags"),
            InputError::IllegalCharacter(field) => {
                write!(f, "{field} contains a character reserved by the file formats")
            }
        }
    }
}

fn has_line_breaks(s: &str) -> bool {
    s.contains(['\t', '\n', '\r'])
}

impl core::error::Error for InputError {}

/// A normalized tag: trimmed, lowercased, never empty.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tag(String);

impl Tag {
    pub fn new(raw: &str) -> Result<Tag, InputError> {
        let t = raw.trim().to_lowercase();
        if t.is_empty() {
            return Err(InputError::EmptyTag);
        }
        // Commas separate tags in the file formats.
        if has_line_breaks(&t) || t.contains(',') {
            return Err(InputError::IllegalCharacter("tag"));
        }
        Ok(Tag(t))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Opaque user identifier, used verbatim. Must not be blank.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UserId(String);

impl UserId {
    pub fn new(raw: &str) -> Result<UserId, InputError> {
        if raw.trim().is_empty() {
            return Err(InputError::EmptyUserId);
        }
        // A leading '#' would read back as a comment line.
        if has_line_breaks(raw) || raw.starts_with('#') {
            return Err(InputError::IllegalCharacter("user id"));
        }
        Ok(UserId(raw.to_string()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

/// Opaque content identifier. Must not be blank.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ContentId(String);

impl ContentId {
    pub fn new(raw: &str) -> Result<ContentId, InputError> {
        if raw.trim().is_empty() {
            return Err(InputError::EmptyContentId);
        }
        if has_line_breaks(raw) {
            return Err(InputError::IllegalCharacter("content id"));
        }
        Ok(ContentId(raw.to_string()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

/// One uploaded content with its (possibly empty) tag set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedContent {
    pub uploader: UserId,
    pub content: ContentId,
    pub tags: BTreeSet<Tag>,
}

impl TaggedContent {
    pub fn new(uploader: &str, content: &str, tags: &[&str]) -> Result<TaggedContent, InputError> {
        let tags = tags.iter().map(|t| Tag::new(t)).collect::<Result<_, _>>()?;
        Ok(TaggedContent {
            uploader: UserId::new(uploader)?,
            content: ContentId::new(content)?,
            tags,
        })
    }
}

/// One favorite mark: `recommender` recommended `content`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recommendation {
    pub recommender: UserId,
    pub content: ContentId,
}

impl Recommendation {
    pub fn new(recommender: &str, content: &str) -> Result<Recommendation, InputError> {
        Ok(Recommendation {
            recommender: UserId::new(recommender)?,
            content: ContentId::new(content)?,
        })
    }
}

/// An ordered list of distinct tags, the conjunctive query unit.
///
/// Duplicates are collapsed to their first occurrence; every ranking
/// algorithm is invariant under facet reordering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facet {
    tags: Vec<Tag>,
}

impl Facet {
    pub fn new(tags: impl IntoIterator<Item = Tag>) -> Result<Facet, InputError> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for t in tags {
            if seen.insert(t.clone()) {
                out.push(t);
            }
        }
        if out.is_empty() {
            return Err(InputError::EmptyFacet);
        }
        Ok(Facet { tags: out })
    }

    /// Parses a comma-separated tag list such as `"blues,jazz"`.
    pub fn parse(raw: &str) -> Result<Facet, InputError> {
        let tags = raw
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(Tag::new)
            .collect::<Result<Vec<_>, _>>()?;
        Facet::new(tags)
    }

    pub fn tags(&self) -> &[Tag] {
        &self.tags
    }

    pub fn len(&self) -> usize {
        self.tags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tags.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.tags.iter().map(Tag::as_str)
    }
}

impl fmt::Display for Facet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.tags.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(t.as_str())?;
        }
        Ok(())
    }
}

/// Options for [`build_graph`].
#[derive(Debug, Clone, Default)]
pub struct BuildOptions {
    /// Tags removed from every content's tag set before edges are built.
    pub stop_tags: BTreeSet<Tag>,
}

/// Counters from one [`build_graph`] run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BuildReport {
    pub contents: usize,
    pub recommendations: usize,
    /// Contents whose id was already registered; first occurrence wins.
    pub duplicate_contents: usize,
    /// Recommendations referencing content ids not present in the record set.
    pub unknown_content_recommendations: usize,
    /// Tag occurrences dropped by the stop list.
    pub stop_tags_removed: usize,
    pub nodes: usize,
    pub edges: usize,
}

/// A simple directed graph with per-edge tag sets.
///
/// Nodes and tags are interned; subgraphs produced by the algebra below
/// share the parent's symbol tables, so derived rankings can be compared
/// by id. Self-loops are permitted, parallel edges are not. An edge's
/// tag set may be empty (for example after stop-tag removal, or in a
/// conjunction result); such edges never match any tag lookup but still
/// count for degree statistics and full-graph centrality.
#[derive(Debug, Clone)]
pub struct TaggedGraph {
    users: Arc<SymbolTable>,
    tags: Arc<SymbolTable>,
    nodes: BTreeSet<u32>,
    edges: BTreeMap<(u32, u32), BTreeSet<u32>>,
}

/// Builds the recommendation graph from content and favorite records.
///
/// The node set is every uploader in `contents` plus every recommender
/// of a known content. An edge `(c, u)` exists iff `c` recommended at
/// least one content uploaded by `u`; its tag set is the union of those
/// contents' tag sets. Duplicate content ids keep their first record,
/// and recommendations of unknown content ids are skipped; both are
/// counted in the report. The same input multisets produce identical
/// graphs regardless of record order.
pub fn build_graph(
    contents: &[TaggedContent],
    recs: &[Recommendation],
    opts: &BuildOptions,
) -> (TaggedGraph, BuildReport) {
    let mut users = SymbolTable::new();
    let mut tags = SymbolTable::new();
    let mut nodes = BTreeSet::new();
    let mut report = BuildReport {
        contents: contents.len(),
        recommendations: recs.len(),
        ..BuildReport::default()
    };

    // content id -> (uploader id, tag ids after stop removal)
    let mut registry: BTreeMap<&str, (u32, BTreeSet<u32>)> = BTreeMap::new();
    for c in contents {
        if registry.contains_key(c.content.as_str()) {
            report.duplicate_contents += 1;
            continue;
        }
        let uid = users.intern(c.uploader.as_str());
        nodes.insert(uid);
        let mut tag_ids = BTreeSet::new();
        for t in &c.tags {
            if opts.stop_tags.contains(t) {
                report.stop_tags_removed += 1;
            } else {
                tag_ids.insert(tags.intern(t.as_str()));
            }
        }
        registry.insert(c.content.as_str(), (uid, tag_ids));
    }

    let mut edges: BTreeMap<(u32, u32), BTreeSet<u32>> = BTreeMap::new();
    for r in recs {
        let Some((uploader, tag_ids)) = registry.get(r.content.as_str()) else {
            report.unknown_content_recommendations += 1;
            continue;
        };
        let rid = users.intern(r.recommender.as_str());
        nodes.insert(rid);
        edges
            .entry((rid, *uploader))
            .or_default()
            .extend(tag_ids.iter().copied());
    }

    report.nodes = nodes.len();
    report.edges = edges.len();
    let graph = TaggedGraph {
        users: Arc::new(users),
        tags: Arc::new(tags),
        nodes,
        edges,
    };
    (graph, report)
}

impl TaggedGraph {
    pub(crate) fn from_parts(
        users: Arc<SymbolTable>,
        tags: Arc<SymbolTable>,
        nodes: BTreeSet<u32>,
        edges: BTreeMap<(u32, u32), BTreeSet<u32>>,
    ) -> TaggedGraph {
        TaggedGraph {
            users,
            tags,
            nodes,
            edges,
        }
    }

    pub(crate) fn users_arc(&self) -> &Arc<SymbolTable> {
        &self.users
    }

    pub(crate) fn tags_arc(&self) -> &Arc<SymbolTable> {
        &self.tags
    }

    pub(crate) fn node_ids(&self) -> &BTreeSet<u32> {
        &self.nodes
    }

    pub(crate) fn edge_map(&self) -> &BTreeMap<(u32, u32), BTreeSet<u32>> {
        &self.edges
    }

    /// Builds a graph from explicit edges, for loading exported graphs.
    ///
    /// Edge endpoints become nodes automatically; `isolated` adds nodes
    /// beyond them. Repeated edges merge their tag sets. All names go
    /// through the usual validation and tag normalization.
    pub fn from_edges<'a, N, E, T>(isolated: N, edges: E) -> Result<TaggedGraph, InputError>
    where
        N: IntoIterator<Item = &'a str>,
        E: IntoIterator<Item = (&'a str, &'a str, T)>,
        T: IntoIterator<Item = &'a str>,
    {
        let mut users = SymbolTable::new();
        let mut tags = SymbolTable::new();
        let mut nodes = BTreeSet::new();
        let mut edge_map: BTreeMap<(u32, u32), BTreeSet<u32>> = BTreeMap::new();
        for name in isolated {
            nodes.insert(users.intern(UserId::new(name)?.as_str()));
        }
        for (src, dst, labels) in edges {
            let s = users.intern(UserId::new(src)?.as_str());
            let d = users.intern(UserId::new(dst)?.as_str());
            nodes.insert(s);
            nodes.insert(d);
            let entry = edge_map.entry((s, d)).or_default();
            for label in labels {
                entry.insert(tags.intern(Tag::new(label)?.as_str()));
            }
        }
        Ok(TaggedGraph {
            users: Arc::new(users),
            tags: Arc::new(tags),
            nodes,
            edges: edge_map,
        })
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn has_node(&self, user: &str) -> bool {
        self.users
            .id(user)
            .is_some_and(|id| self.nodes.contains(&id))
    }

    pub fn has_edge(&self, src: &str, dst: &str) -> bool {
        match (self.users.id(src), self.users.id(dst)) {
            (Some(s), Some(d)) => self.edges.contains_key(&(s, d)),
            _ => false,
        }
    }

    /// The tag names on an edge, sorted, or `None` if the edge is absent.
    pub fn edge_tags(&self, src: &str, dst: &str) -> Option<Vec<&str>> {
        let (s, d) = (self.users.id(src)?, self.users.id(dst)?);
        let tag_ids = self.edges.get(&(s, d))?;
        let mut names: Vec<&str> = tag_ids.iter().map(|&t| self.tags.name(t)).collect();
        names.sort_unstable();
        Some(names)
    }

    /// Node names sorted lexicographically.
    pub fn sorted_nodes(&self) -> Vec<&str> {
        let mut names: Vec<&str> = self.nodes.iter().map(|&id| self.users.name(id)).collect();
        names.sort_unstable();
        names
    }

    /// Edges as `(src, dst, tags)`, sorted by source then destination
    /// name, with tags sorted within each edge.
    pub fn sorted_edges(&self) -> Vec<(&str, &str, Vec<&str>)> {
        let mut out: Vec<(&str, &str, Vec<&str>)> = self
            .edges
            .iter()
            .map(|(&(s, d), tag_ids)| {
                let mut names: Vec<&str> = tag_ids.iter().map(|&t| self.tags.name(t)).collect();
                names.sort_unstable();
                (self.users.name(s), self.users.name(d), names)
            })
            .collect();
        out.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        out
    }

    /// Total tag assignments over all edges, i.e. the sum of `|T(e)|`.
    ///
    /// Equals the sum of per-tag subgraph edge counts, which bounds the
    /// total work of building every per-tag ranking.
    pub fn total_tag_assignments(&self) -> usize {
        self.edges.values().map(|t| t.len()).sum()
    }

    /// A short stable digest of the graph's nodes, edges, and labels.
    ///
    /// Identical graphs (by name) produce identical fingerprints, which
    /// rank stores record to detect being queried against the wrong graph.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        for name in self.sorted_nodes() {
            h.update(b"n\t");
            h.update(name.as_bytes());
            h.update(b"\n");
        }
        for (src, dst, tags) in self.sorted_edges() {
            h.update(b"e\t");
            h.update(src.as_bytes());
            h.update(b"\t");
            h.update(dst.as_bytes());
            h.update(b"\t");
            for (i, t) in tags.iter().enumerate() {
                if i > 0 {
                    h.update(b",");
                }
                h.update(t.as_bytes());
            }
            h.update(b"\n");
        }
        let digest = h.finalize();
        let mut out = String::with_capacity(16);
        for byte in &digest[..8] {
            use core::fmt::Write;
            let _ = write!(out, "{byte:02x}");
        }
        out
    }

    fn same_family(&self, other: &TaggedGraph) -> bool {
        Arc::ptr_eq(&self.users, &other.users) && Arc::ptr_eq(&self.tags, &other.tags)
    }

    fn derived(&self, edges: BTreeMap<(u32, u32), BTreeSet<u32>>) -> TaggedGraph {
        let mut nodes = BTreeSet::new();
        for &(s, d) in edges.keys() {
            nodes.insert(s);
            nodes.insert(d);
        }
        TaggedGraph {
            users: self.users.clone(),
            tags: self.tags.clone(),
            nodes,
            edges,
        }
    }

    /// The subgraph of edges carrying `tag`, with each kept edge labeled
    /// `{tag}` and the node set reduced to the kept edges' endpoints.
    ///
    /// Unknown tags yield an empty graph. Retrieval scans all edges; use
    /// [`crate::index::TagIndex::subgraph`] for repeated extraction.
    pub fn tag_subgraph(&self, tag: &str) -> TaggedGraph {
        let mut edges = BTreeMap::new();
        if let Some(tid) = Tag::new(tag).ok().and_then(|t| self.tags.id(t.as_str())) {
            for (key, tag_ids) in &self.edges {
                if tag_ids.contains(&tid) {
                    edges.insert(*key, BTreeSet::from([tid]));
                }
            }
        }
        self.derived(edges)
    }

    /// Keeps edges present in both graphs; each kept edge is labeled
    /// with the intersection of its two tag sets (possibly empty). The
    /// node set is the kept edges' endpoints.
    pub fn edge_intersection(&self, other: &TaggedGraph) -> TaggedGraph {
        let translated;
        let other_edges = if self.same_family(other) {
            &other.edges
        } else {
            translated = other.translate_into(self);
            &translated
        };
        let mut edges = BTreeMap::new();
        for (key, t1) in &self.edges {
            if let Some(t2) = other_edges.get(key) {
                let common: BTreeSet<u32> = t1.intersection(t2).copied().collect();
                edges.insert(*key, common);
            }
        }
        self.derived(edges)
    }

    /// Keeps edges present in either graph, labeled with the union of
    /// their tag sets. The node set is the kept edges' endpoints.
    pub fn edge_union(&self, other: &TaggedGraph) -> TaggedGraph {
        if self.same_family(other) {
            let mut edges = self.edges.clone();
            for (key, t2) in &other.edges {
                edges
                    .entry(*key)
                    .and_modify(|t1| t1.extend(t2.iter().copied()))
                    .or_insert_with(|| t2.clone());
            }
            return self.derived(edges);
        }
        // Unrelated graphs: merge the symbol tables, keeping our ids stable.
        let mut users = (*self.users).clone();
        let mut tags = (*self.tags).clone();
        let mut edges = self.edges.clone();
        for ((s, d), tag_ids) in &other.edges {
            let key = (
                users.intern(other.users.name(*s)),
                users.intern(other.users.name(*d)),
            );
            let remapped: BTreeSet<u32> = tag_ids
                .iter()
                .map(|&t| tags.intern(other.tags.name(t)))
                .collect();
            edges
                .entry(key)
                .and_modify(|t1| t1.extend(remapped.iter().copied()))
                .or_insert(remapped);
        }
        let mut nodes = BTreeSet::new();
        for &(s, d) in edges.keys() {
            nodes.insert(s);
            nodes.insert(d);
        }
        TaggedGraph {
            users: Arc::new(users),
            tags: Arc::new(tags),
            nodes,
            edges,
        }
    }

    /// Edges carrying every tag of the facet: the left fold of
    /// [`Self::edge_intersection`] over the facet's tag subgraphs.
    pub fn conjunction(&self, facet: &Facet) -> TaggedGraph {
        let mut parts = facet.iter();
        let mut acc = self.tag_subgraph(parts.next().expect("facets are never empty"));
        for tag in parts {
            acc = acc.edge_intersection(&self.tag_subgraph(tag));
        }
        acc
    }

    /// Edges carrying at least one tag of the facet: the left fold of
    /// [`Self::edge_union`] over the facet's tag subgraphs.
    pub fn disjunction(&self, facet: &Facet) -> TaggedGraph {
        let mut parts = facet.iter();
        let mut acc = self.tag_subgraph(parts.next().expect("facets are never empty"));
        for tag in parts {
            acc = acc.edge_union(&self.tag_subgraph(tag));
        }
        acc
    }

    /// Restricts the graph to the given users: nodes are the requested
    /// users that exist here (kept even if isolated), edges those with
    /// both endpoints requested, tag sets unchanged.
    pub fn induced_subgraph<'a>(&self, users: impl IntoIterator<Item = &'a str>) -> TaggedGraph {
        let keep: BTreeSet<u32> = users
            .into_iter()
            .filter_map(|name| self.users.id(name))
            .filter(|id| self.nodes.contains(id))
            .collect();
        let edges: BTreeMap<(u32, u32), BTreeSet<u32>> = self
            .edges
            .iter()
            .filter(|((s, d), _)| keep.contains(s) && keep.contains(d))
            .map(|(key, tag_ids)| (*key, tag_ids.clone()))
            .collect();
        TaggedGraph {
            users: self.users.clone(),
            tags: self.tags.clone(),
            nodes: keep,
            edges,
        }
    }

    fn translate_into(&self, target: &TaggedGraph) -> BTreeMap<(u32, u32), BTreeSet<u32>> {
        let mut out = BTreeMap::new();
        for ((s, d), tag_ids) in &self.edges {
            let (Some(s2), Some(d2)) = (
                target.users.id(self.users.name(*s)),
                target.users.id(self.users.name(*d)),
            ) else {
                continue;
            };
            let remapped: BTreeSet<u32> = tag_ids
                .iter()
                .filter_map(|&t| target.tags.id(self.tags.name(t)))
                .collect();
            out.insert((s2, d2), remapped);
        }
        out
    }
}

impl PartialEq for TaggedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.sorted_nodes() == other.sorted_nodes() && self.sorted_edges() == other.sorted_edges()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn content(u: &str, c: &str, tags: &[&str]) -> TaggedContent {
        TaggedContent::new(u, c, tags).unwrap()
    }

    fn rec(r: &str, c: &str) -> Recommendation {
        Recommendation::new(r, c).unwrap()
    }

    #[test]
    fn tags_normalize_and_reject_blank() {
        assert_eq!(Tag::new("  Rock N Roll ").unwrap().as_str(), "rock n roll");
        assert_eq!(Tag::new("\t \n"), Err(InputError::EmptyTag));
    }

    #[test]
    fn format_reserved_characters_are_rejected() {
        assert_eq!(Tag::new("a,b"), Err(InputError::IllegalCharacter("tag")));
        assert_eq!(Tag::new("a\tb"), Err(InputError::IllegalCharacter("tag")));
        assert_eq!(
            UserId::new("#alice"),
            Err(InputError::IllegalCharacter("user id"))
        );
        assert_eq!(
            UserId::new("a\nb"),
            Err(InputError::IllegalCharacter("user id"))
        );
        assert!(UserId::new("a b#c").is_ok());
        assert_eq!(
            ContentId::new("x\ry"),
            Err(InputError::IllegalCharacter("content id"))
        );
    }

    #[test]
    fn facet_deduplicates_preserving_order() {
        let f = Facet::parse("Jazz, blues ,jazz").unwrap();
        assert_eq!(f.iter().collect::<Vec<_>>(), ["jazz", "blues"]);
        assert_eq!(Facet::parse(" , "), Err(InputError::EmptyFacet));
    }

    #[test]
    fn recommendations_of_same_uploader_merge_tags() {
        let contents = [
            content("u", "c1", &["blues"]),
            content("u", "c2", &["jazz"]),
        ];
        let recs = [rec("v", "c1"), rec("v", "c2")];
        let (g, report) = build_graph(&contents, &recs, &BuildOptions::default());
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.edge_tags("v", "u").unwrap(), ["blues", "jazz"]);
        assert_eq!(report.edges, 1);
        assert_eq!(report.nodes, 2);
    }

    #[test]
    fn duplicate_contents_keep_first_record() {
        let contents = [
            content("u", "c1", &["blues"]),
            content("w", "c1", &["rock"]),
        ];
        let recs = [rec("v", "c1")];
        let (g, report) = build_graph(&contents, &recs, &BuildOptions::default());
        assert_eq!(report.duplicate_contents, 1);
        assert!(g.has_edge("v", "u"));
        assert!(!g.has_edge("v", "w"));
        // The whole duplicate record is dropped, uploader included.
        assert!(!g.has_node("w"));
    }

    #[test]
    fn unknown_content_recommendations_are_skipped() {
        let contents = [content("u", "c1", &["blues"])];
        let recs = [rec("v", "c1"), rec("x", "nope")];
        let (g, report) = build_graph(&contents, &recs, &BuildOptions::default());
        assert_eq!(report.unknown_content_recommendations, 1);
        assert!(!g.has_node("x"));
        assert_eq!(g.node_count(), 2);
    }

    #[test]
    fn stop_tags_can_empty_an_edge_label() {
        let contents = [content("u", "c1", &["category music"])];
        let recs = [rec("v", "c1")];
        let opts = BuildOptions {
            stop_tags: BTreeSet::from([Tag::new("category music").unwrap()]),
        };
        let (g, report) = build_graph(&contents, &recs, &opts);
        assert_eq!(report.stop_tags_removed, 1);
        assert!(g.has_edge("v", "u"));
        assert_eq!(g.edge_tags("v", "u").unwrap(), Vec::<&str>::new());
        assert_eq!(g.total_tag_assignments(), 0);
        assert!(g.tag_subgraph("category music").is_empty());
    }

    #[test]
    fn self_recommendation_makes_a_self_loop() {
        let contents = [content("u", "c1", &["meta"])];
        let recs = [rec("u", "c1")];
        let (g, _) = build_graph(&contents, &recs, &BuildOptions::default());
        assert!(g.has_edge("u", "u"));
        assert_eq!(g.node_count(), 1);
    }

    #[test]
    fn build_is_order_insensitive() {
        let contents = [
            content("a", "c1", &["x"]),
            content("b", "c2", &["y"]),
        ];
        let recs = [rec("b", "c1"), rec("a", "c2")];
        let (g1, _) = build_graph(&contents, &recs, &BuildOptions::default());
        let mut contents2 = contents.clone();
        contents2.reverse();
        let mut recs2 = recs.clone();
        recs2.reverse();
        let (g2, _) = build_graph(&contents2, &recs2, &BuildOptions::default());
        assert_eq!(g1, g2);
        assert_eq!(g1.fingerprint(), g2.fingerprint());
    }

    #[test]
    fn fingerprint_distinguishes_labels() {
        let contents = [content("a", "c1", &["x"])];
        let (g1, _) = build_graph(&contents, &[rec("b", "c1")], &BuildOptions::default());
        let contents2 = [content("a", "c1", &["y"])];
        let (g2, _) = build_graph(&contents2, &[rec("b", "c1")], &BuildOptions::default());
        assert_ne!(g1.fingerprint(), g2.fingerprint());
        assert_eq!(g1.fingerprint().len(), 16);
    }

    #[test]
    fn set_operations_work_across_unrelated_graphs() {
        let (g1, _) = build_graph(
            &[content("a", "c1", &["x", "y"])],
            &[rec("b", "c1")],
            &BuildOptions::default(),
        );
        let (g2, _) = build_graph(
            &[content("a", "d1", &["y", "z"]), content("c", "d2", &["w"])],
            &[rec("b", "d1"), rec("a", "d2")],
            &BuildOptions::default(),
        );
        let inter = g1.edge_intersection(&g2);
        assert_eq!(inter.edge_count(), 1);
        assert_eq!(inter.edge_tags("b", "a").unwrap(), ["y"]);

        let uni = g1.edge_union(&g2);
        assert_eq!(uni.edge_count(), 2);
        assert_eq!(uni.edge_tags("b", "a").unwrap(), ["x", "y", "z"]);
        assert!(uni.has_edge("a", "c"));
    }

    #[test]
    fn induced_subgraph_keeps_isolated_requested_nodes() {
        let (g, _) = build_graph(
            &[content("a", "c1", &["x"]), content("d", "c2", &["x"])],
            &[rec("b", "c1"), rec("b", "c2")],
            &BuildOptions::default(),
        );
        let sub = g.induced_subgraph(["a", "b", "zzz"]);
        assert_eq!(sub.node_count(), 2);
        assert!(sub.has_edge("b", "a"));
        assert!(!sub.has_edge("b", "d"));
        let lonely = g.induced_subgraph(["a", "d"]);
        assert_eq!(lonely.node_count(), 2);
        assert_eq!(lonely.edge_count(), 0);
    }
}
