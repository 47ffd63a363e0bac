//! Round-trips and error reporting for the file formats.

use std::io::Cursor;

use facetrank::formats::{
    parse_contents, parse_graph, parse_recommendations, parse_store, read_graph, read_store,
    render_graph, render_ranking, render_store, FileError,
};
use facetrank::tables::{parse_table, render_manifest, render_table, render_table_full};
use facetrank_core::eval::{run_experiment, ExperimentConfig};
use facetrank_core::graph::{build_graph, BuildOptions};
use facetrank_core::{
    build_store, PageRankParams, Recommendation, TagIndex, TaggedContent, TaggedGraph, Truncation,
};

fn music_graph() -> TaggedGraph {
    let contents = [
        TaggedContent::new("A", "song1", &["blues"]).unwrap(),
        TaggedContent::new("B", "song2", &["blues", "jazz"]).unwrap(),
        TaggedContent::new("C", "song3", &["blues"]).unwrap(),
        TaggedContent::new("C", "song4", &["jazz"]).unwrap(),
        TaggedContent::new("D", "song5", &["blues"]).unwrap(),
        TaggedContent::new("D", "song6", &["rock"]).unwrap(),
    ];
    let recs = [
        Recommendation::new("A", "song2").unwrap(),
        Recommendation::new("B", "song4").unwrap(),
        Recommendation::new("B", "song5").unwrap(),
        Recommendation::new("A", "song3").unwrap(),
        Recommendation::new("A", "song4").unwrap(),
        Recommendation::new("C", "song6").unwrap(),
    ];
    build_graph(&contents, &recs, &BuildOptions::default()).0
}

#[test]
fn content_records_skip_malformed_lines() {
    let input = "# header comment\n\
                 A\tsong1\tblues, Jazz\n\
                 B\tsong2\n\
                 C\tsong3\t\n\
                 only-one-field\n\
                 \t\tmissing-ids\n\
                 \r\n\
                 D\tsong4\trock\r\n";
    let parsed = parse_contents(Cursor::new(input)).unwrap();
    assert_eq!(parsed.records.len(), 4);
    assert_eq!(parsed.skipped, 2);
    // Tag normalization happens during parsing, not graph construction.
    assert_eq!(parsed.records[0].tags.len(), 2);
}

#[test]
fn recommendation_records_skip_malformed_lines() {
    let input = "A\tsong1\nB\n\n# note\nC\tsong2\textra\nD\tsong3\n";
    let parsed = parse_recommendations(Cursor::new(input)).unwrap();
    assert_eq!(parsed.records.len(), 2);
    assert_eq!(parsed.skipped, 2);
}

#[test]
fn graph_round_trips_byte_for_byte() {
    let graph = music_graph();
    let text = render_graph(&graph, &["nodes=4 edges=5".to_string()]);
    let back = parse_graph(Cursor::new(&text), "music").unwrap();
    assert_eq!(back, graph);
    assert_eq!(back.fingerprint(), graph.fingerprint());
    assert_eq!(render_graph(&back, &["nodes=4 edges=5".to_string()]), text);
}

#[test]
fn graph_format_keeps_isolated_nodes_and_empty_tag_sets() {
    let graph = TaggedGraph::from_edges(
        ["loner", "z"],
        [("a", "b", vec!["x"]), ("b", "c", Vec::new())],
    )
    .unwrap();
    let text = render_graph(&graph, &[]);
    assert!(text.contains("node\tloner\n"));
    assert!(text.contains("node\tz\n"));
    assert!(text.contains("b\tc\t\n"));
    let back = parse_graph(Cursor::new(&text), "test").unwrap();
    assert_eq!(back, graph);
    assert_eq!(back.node_count(), 5);
    assert!(back.has_edge("b", "c"));
    assert_eq!(back.edge_tags("b", "c").unwrap().len(), 0);
}

#[test]
fn graph_parser_rejects_junk_with_a_line_number() {
    let err = parse_graph(Cursor::new("a\tb\tx\nnot a line\n"), "bad").unwrap_err();
    match err {
        FileError::Corrupt { path, line, .. } => {
            assert_eq!(path, "bad");
            assert_eq!(line, 2);
        }
        other => panic!("expected Corrupt, got {other:?}"),
    }
}

#[test]
fn missing_files_are_reported_as_missing() {
    let err = read_graph("/nonexistent/path/graph.tsv").unwrap_err();
    assert!(matches!(err, FileError::Missing(_)));
    let err = read_store("/nonexistent/path/store.tsv").unwrap_err();
    assert!(matches!(err, FileError::Missing(_)));
}

#[test]
fn store_round_trips_unlimited_and_truncated() {
    let graph = music_graph();
    let index = TagIndex::build(&graph);
    for truncation in [Truncation::Unlimited, Truncation::Top(2)] {
        let (store, _) = build_store(&graph, &index, &PageRankParams::default(), truncation);
        let text = render_store(&store);
        let back = parse_store(Cursor::new(&text), "music").unwrap();
        assert_eq!(back, store);
        assert_eq!(render_store(&back), text);
    }
}

#[test]
fn truncated_store_lists_cut_nodes() {
    let graph = music_graph();
    let index = TagIndex::build(&graph);
    let (store, _) = build_store(&graph, &index, &PageRankParams::default(), Truncation::Top(2));
    let text = render_store(&store);
    // blues ranks 4 users; two survive the cutoff, two become node lines.
    assert!(text.contains("tag blues 4 3 true\n"));
    assert_eq!(text.matches("node\t").count(), 3);
    let back = parse_store(Cursor::new(&text), "music").unwrap();
    assert_eq!(back.node_count("blues").unwrap(), 4);
    assert_eq!(back.top("blues", 10).unwrap().len(), 2);
}

#[test]
fn store_version_is_checked_before_anything_else() {
    let err = parse_store(Cursor::new("#facetrank-store v9\ngarbage"), "s").unwrap_err();
    match err {
        FileError::Version { found } => assert_eq!(found, "v9"),
        other => panic!("expected Version, got {other:?}"),
    }
}

#[test]
fn store_without_signature_is_corrupt() {
    let err = parse_store(Cursor::new("a\tb\tc\n"), "s").unwrap_err();
    assert!(matches!(err, FileError::Corrupt { line: 1, .. }));
}

#[test]
fn truncated_store_file_is_corrupt() {
    let graph = music_graph();
    let index = TagIndex::build(&graph);
    let (store, _) = build_store(
        &graph,
        &index,
        &PageRankParams::default(),
        Truncation::Unlimited,
    );
    let text = render_store(&store);
    let cut = text.trim_end().rfind('\n').unwrap();
    let err = parse_store(Cursor::new(&text[..cut + 1]), "cut").unwrap_err();
    match err {
        FileError::Corrupt { reason, .. } => {
            assert!(reason.contains("declares"), "unexpected reason: {reason}")
        }
        other => panic!("expected Corrupt, got {other:?}"),
    }
}

#[test]
fn store_with_gapped_ranks_is_corrupt() {
    let graph = music_graph();
    let index = TagIndex::build(&graph);
    let (store, _) = build_store(
        &graph,
        &index,
        &PageRankParams::default(),
        Truncation::Unlimited,
    );
    let tampered = render_store(&store).replacen("2\tB", "5\tB", 1);
    let err = parse_store(Cursor::new(&tampered), "gap").unwrap_err();
    match err {
        FileError::Corrupt { reason, .. } => {
            assert!(reason.contains("expected rank 2"), "unexpected reason: {reason}")
        }
        other => panic!("expected Corrupt, got {other:?}"),
    }
}

#[test]
fn store_params_survive_the_round_trip() {
    let graph = music_graph();
    let index = TagIndex::build(&graph);
    let params = PageRankParams {
        damping: 0.9,
        epsilon: 1e-8,
        max_iterations: 77,
    };
    let (store, _) = build_store(&graph, &index, &params, Truncation::Top(3));
    let back = parse_store(Cursor::new(&render_store(&store)), "p").unwrap();
    assert_eq!(back.params, params);
    assert_eq!(back.truncation, Truncation::Top(3));
    assert_eq!(back.graph_fingerprint, graph.fingerprint());
}

#[test]
fn ranking_lines_use_twelve_significant_digits() {
    let graph = music_graph();
    let ranking = facetrank_core::pagerank(&graph, &PageRankParams::default()).unwrap();
    let text = render_ranking(&facetrank_core::rank_of(&ranking));
    let first = text.lines().next().unwrap();
    let fields: Vec<&str> = first.split('\t').collect();
    assert_eq!(fields.len(), 3);
    assert_eq!(fields[0], "1");
    let mantissa = fields[2].split('e').next().unwrap();
    assert_eq!(mantissa.trim_start_matches('-').replace('.', "").len(), 12);
}

#[test]
fn tables_round_trip_to_two_decimals() {
    let graph = music_graph();
    let index = TagIndex::build(&graph);
    let (store, _) = build_store(
        &graph,
        &index,
        &PageRankParams::default(),
        Truncation::Unlimited,
    );
    let cfg = ExperimentConfig {
        top_tag_count: 2,
        windows: vec![2, 3],
        prune: false,
        ..ExperimentConfig::default()
    };
    let report = run_experiment(&graph, &store, &cfg).unwrap();
    assert_eq!(report.pair_count, 1);
    for table in &report.tables {
        let text = render_table(table);
        let parsed = parse_table(&text).unwrap();
        assert_eq!(parsed.reference.as_deref(), Some(table.reference.as_str()));
        assert_eq!(parsed.windows, table.windows);
        assert_eq!(parsed.rows.len(), table.rows.len());
        for (row, parsed_row) in table.rows.iter().zip(&parsed.rows) {
            assert_eq!(parsed_row.0, row.algorithm.as_str());
            for (cell, parsed_cell) in row.cells.iter().zip(&parsed_row.1) {
                match (cell, parsed_cell) {
                    (Some(cell), Some((osim, ksim))) => {
                        assert!((cell.osim - osim).abs() < 0.005 + 1e-12);
                        assert!((cell.ksim - ksim).abs() < 0.005 + 1e-12);
                    }
                    (None, None) => {}
                    other => panic!("cell mismatch: {other:?}"),
                }
            }
        }
        let full = render_table_full(table);
        assert!(full.lines().count() >= 2);
    }
}

#[test]
fn manifests_are_sorted_key_value_lines() {
    let mut entries = std::collections::BTreeMap::new();
    entries.insert("zeta".to_string(), "1".to_string());
    entries.insert("alpha".to_string(), "two words".to_string());
    assert_eq!(render_manifest(&entries), "alpha\ttwo words\nzeta\t1\n");
}
