//! Construction and graph algebra checked against a small worked music
//! example, plus randomized property tests of the algebra laws.

use std::collections::BTreeSet;

use facetrank_core::graph::BuildReport;
use facetrank_core::{
    build_graph, BuildOptions, Facet, Recommendation, Tag, TagIndex, TaggedContent, TaggedGraph,
};
use proptest::prelude::*;

/// The music example: four users, six uploads, six recommendations.
/// song1 is never recommended, so it produces no edge.
fn music_records() -> (Vec<TaggedContent>, Vec<Recommendation>) {
    let contents = vec![
        TaggedContent::new("A", "song1", &["blues"]).unwrap(),
        TaggedContent::new("B", "song2", &["blues", "jazz"]).unwrap(),
        TaggedContent::new("C", "song3", &["blues"]).unwrap(),
        TaggedContent::new("C", "song4", &["jazz"]).unwrap(),
        TaggedContent::new("D", "song5", &["blues"]).unwrap(),
        TaggedContent::new("D", "song6", &["rock"]).unwrap(),
    ];
    let recs = vec![
        Recommendation::new("A", "song2").unwrap(),
        Recommendation::new("B", "song4").unwrap(),
        Recommendation::new("B", "song5").unwrap(),
        Recommendation::new("A", "song3").unwrap(),
        Recommendation::new("A", "song4").unwrap(),
        Recommendation::new("C", "song6").unwrap(),
    ];
    (contents, recs)
}

fn music_graph() -> TaggedGraph {
    let (contents, recs) = music_records();
    build_graph(&contents, &recs, &BuildOptions::default()).0
}

fn edge_keys(g: &TaggedGraph) -> Vec<(String, String)> {
    g.sorted_edges()
        .into_iter()
        .map(|(s, d, _)| (s.to_string(), d.to_string()))
        .collect()
}

#[test]
fn music_example_builds_the_documented_graph() {
    let (contents, recs) = music_records();
    let (g, report) = build_graph(&contents, &recs, &BuildOptions::default());
    assert_eq!(g.node_count(), 4);
    assert_eq!(g.edge_count(), 5);
    assert_eq!(g.sorted_nodes(), ["A", "B", "C", "D"]);
    assert_eq!(
        g.sorted_edges(),
        vec![
            ("A", "B", vec!["blues", "jazz"]),
            ("A", "C", vec!["blues", "jazz"]),
            ("B", "C", vec!["jazz"]),
            ("B", "D", vec!["blues"]),
            ("C", "D", vec!["rock"]),
        ]
    );
    assert_eq!(g.total_tag_assignments(), 7);
    assert_eq!(
        report,
        BuildReport {
            contents: 6,
            recommendations: 6,
            duplicate_contents: 0,
            unknown_content_recommendations: 0,
            stop_tags_removed: 0,
            nodes: 4,
            edges: 5,
        }
    );
}

#[test]
fn single_tag_subgraphs_match_the_example() {
    let g = music_graph();
    let blues = g.tag_subgraph("blues");
    assert_eq!(
        edge_keys(&blues),
        [
            ("A".into(), "B".into()),
            ("A".into(), "C".into()),
            ("B".into(), "D".into())
        ]
    );
    assert_eq!(blues.sorted_nodes(), ["A", "B", "C", "D"]);

    let jazz = g.tag_subgraph("jazz");
    assert_eq!(
        edge_keys(&jazz),
        [
            ("A".into(), "B".into()),
            ("A".into(), "C".into()),
            ("B".into(), "C".into())
        ]
    );
    assert_eq!(jazz.sorted_nodes(), ["A", "B", "C"]);

    assert_eq!(edge_keys(&g.tag_subgraph("rock")), [("C".into(), "D".into())]);
    assert!(g.tag_subgraph("tango").is_empty());
}

#[test]
fn conjunction_and_disjunction_match_the_example() {
    let g = music_graph();
    let both = g.conjunction(&Facet::parse("blues,jazz").unwrap());
    assert_eq!(
        edge_keys(&both),
        [("A".into(), "B".into()), ("A".into(), "C".into())]
    );
    assert_eq!(both.sorted_nodes(), ["A", "B", "C"]);

    let either = g.disjunction(&Facet::parse("blues,jazz").unwrap());
    assert_eq!(
        edge_keys(&either),
        [
            ("A".into(), "B".into()),
            ("A".into(), "C".into()),
            ("B".into(), "C".into()),
            ("B".into(), "D".into())
        ]
    );
    assert_eq!(either.sorted_nodes(), ["A", "B", "C", "D"]);
    // The union re-assembles the original labels on shared edges.
    assert_eq!(either.edge_tags("A", "B"), Some(vec!["blues", "jazz"]));
    assert_eq!(either.edge_tags("B", "C"), Some(vec!["jazz"]));

    assert!(g.conjunction(&Facet::parse("blues,rock").unwrap()).is_empty());
    assert!(g
        .conjunction(&Facet::parse("blues,jazz,rock").unwrap())
        .is_empty());
}

#[test]
fn intersection_of_tag_subgraphs_equals_conjunction() {
    let g = music_graph();
    let via_ops = g.tag_subgraph("blues").edge_intersection(&g.tag_subgraph("jazz"));
    let via_facet = g.conjunction(&Facet::parse("blues,jazz").unwrap());
    assert_eq!(via_ops, via_facet);
    // Intersecting disjoint labels leaves an empty tag set, and here no
    // shared edge between blues and rock exists at all.
    assert!(g
        .tag_subgraph("blues")
        .edge_intersection(&g.tag_subgraph("rock"))
        .is_empty());
}

#[test]
fn induced_subgraph_keeps_requested_nodes_and_labels() {
    let g = music_graph();
    let ab = g.induced_subgraph(["A", "B"]);
    assert_eq!(ab.sorted_nodes(), ["A", "B"]);
    assert_eq!(ab.edge_count(), 1);
    assert_eq!(ab.edge_tags("A", "B"), Some(vec!["blues", "jazz"]));

    let all = g.induced_subgraph(["A", "B", "C", "D"]);
    assert_eq!(all, g);

    assert!(g.induced_subgraph([]).is_empty());
    // Unknown names are ignored rather than invented.
    assert_eq!(g.induced_subgraph(["A", "nobody"]).sorted_nodes(), ["A"]);
}

#[test]
fn index_postings_match_the_example() {
    let g = music_graph();
    let index = TagIndex::build(&g);
    assert_eq!(index.tag_count(), 3);
    assert_eq!(index.edge_count("blues"), 3);
    assert_eq!(index.edge_count("jazz"), 3);
    assert_eq!(index.edge_count("rock"), 1);
    assert_eq!(index.total_postings(), 7);
    assert_eq!(index.total_postings(), g.total_tag_assignments());
    assert_eq!(
        index.usage_counts(),
        [("blues", 3), ("jazz", 3), ("rock", 1)]
    );
}

#[test]
fn stop_tags_shrink_the_label_sets() {
    let (contents, recs) = music_records();
    let opts = BuildOptions {
        stop_tags: BTreeSet::from([Tag::new("jazz").unwrap()]),
    };
    let (g, report) = build_graph(&contents, &recs, &opts);
    assert_eq!(report.stop_tags_removed, 2);
    assert_eq!(g.edge_tags("A", "B"), Some(vec!["blues"]));
    // The B->C edge came only from a jazz song; it stays, tagless.
    assert_eq!(g.edge_tags("B", "C"), Some(vec![]));
    assert_eq!(g.edge_count(), 5);
    assert!(g.tag_subgraph("jazz").is_empty());
}

/// Random record sets over a small universe: per content id an optional
/// (uploader, tag bitmask), plus recommendation pairs.
fn arb_records() -> impl Strategy<Value = (Vec<TaggedContent>, Vec<Recommendation>)> {
    let users = ["ann", "bob", "cat", "dan", "eve"];
    let tags = ["t0", "t1", "t2", "t3", "t4"];
    (
        proptest::collection::vec(proptest::option::of((0..5usize, 0u8..32)), 1..10),
        proptest::collection::vec((0..5usize, 0..10usize), 0..30),
    )
        .prop_map(move |(content_slots, rec_pairs)| {
            let mut contents = Vec::new();
            for (cid, slot) in content_slots.iter().enumerate() {
                if let Some((uploader, mask)) = slot {
                    let chosen: Vec<&str> = tags
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask & (1 << i) != 0)
                        .map(|(_, t)| *t)
                        .collect();
                    contents.push(
                        TaggedContent::new(users[*uploader], &format!("c{cid}"), &chosen).unwrap(),
                    );
                }
            }
            let recs = rec_pairs
                .into_iter()
                .map(|(user, cid)| Recommendation::new(users[user], &format!("c{cid}")).unwrap())
                .collect();
            (contents, recs)
        })
}

fn arb_graph() -> impl Strategy<Value = TaggedGraph> {
    arb_records().prop_map(|(contents, recs)| {
        build_graph(&contents, &recs, &BuildOptions::default()).0
    })
}

fn arb_facet() -> impl Strategy<Value = Facet> {
    proptest::collection::btree_set(0..5usize, 1..4).prop_map(|picks| {
        Facet::new(picks.into_iter().map(|i| Tag::new(&format!("t{i}")).unwrap())).unwrap()
    })
}

proptest! {
    #[test]
    fn conjunction_is_the_edge_filter(g in arb_graph(), f in arb_facet()) {
        let result = g.conjunction(&f);
        let wanted: Vec<(String, String)> = g
            .sorted_edges()
            .into_iter()
            .filter(|(_, _, tags)| f.iter().all(|t| tags.contains(&t)))
            .map(|(s, d, _)| (s.to_string(), d.to_string()))
            .collect();
        prop_assert_eq!(edge_keys(&result), wanted);
    }

    #[test]
    fn disjunction_is_the_edge_filter(g in arb_graph(), f in arb_facet()) {
        let result = g.disjunction(&f);
        let wanted: Vec<(String, String)> = g
            .sorted_edges()
            .into_iter()
            .filter(|(_, _, tags)| f.iter().any(|t| tags.contains(&t)))
            .map(|(s, d, _)| (s.to_string(), d.to_string()))
            .collect();
        prop_assert_eq!(edge_keys(&result), wanted);
    }

    #[test]
    fn folds_ignore_tag_order(g in arb_graph(), f in arb_facet()) {
        let mut reversed: Vec<Tag> = f.tags().to_vec();
        reversed.reverse();
        let rf = Facet::new(reversed).unwrap();
        prop_assert_eq!(g.conjunction(&f), g.conjunction(&rf));
        prop_assert_eq!(g.disjunction(&f), g.disjunction(&rf));
    }

    #[test]
    fn growing_a_facet_is_monotone(g in arb_graph(), f in arb_facet()) {
        let mut extended: Vec<Tag> = f.tags().to_vec();
        extended.push(Tag::new("t0").unwrap());
        let bigger = Facet::new(extended).unwrap();
        prop_assert!(g.conjunction(&bigger).edge_count() <= g.conjunction(&f).edge_count());
        prop_assert!(g.disjunction(&bigger).edge_count() >= g.disjunction(&f).edge_count());
    }

    #[test]
    fn tag_usage_totals_match_label_totals(g in arb_graph()) {
        let index = TagIndex::build(&g);
        prop_assert_eq!(index.total_postings(), g.total_tag_assignments());
    }

    #[test]
    fn build_ignores_record_order(
        (contents, recs) in arb_records(),
        seed in proptest::num::u64::ANY,
    ) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let (reference, _) = build_graph(&contents, &recs, &BuildOptions::default());
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let mut contents = contents;
        let mut recs = recs;
        // Shuffling recommendations must not change the result. Content
        // order matters only for duplicate ids, which this universe
        // cannot produce.
        contents.shuffle(&mut rng);
        recs.shuffle(&mut rng);
        let (shuffled, _) = build_graph(&contents, &recs, &BuildOptions::default());
        prop_assert_eq!(&reference, &shuffled);
        prop_assert_eq!(reference.fingerprint(), shuffled.fingerprint());
    }
}
