//! End-to-end checks of the command-line binary: exit codes, the
//! stdout/stderr split, and byte-stable outputs.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn facetrank(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_facetrank"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is UTF-8")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

/// Runs `build` on the music fixture, returning the graph path.
fn build_music(dir: &Path) -> PathBuf {
    let graph = dir.join("music.graph");
    let out = facetrank(&[
        "build",
        "--contents",
        fixture("music-contents.tsv").to_str().unwrap(),
        "--recs",
        fixture("music-recs.tsv").to_str().unwrap(),
        "--out",
        graph.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "build failed: {}", stderr(&out));
    graph
}

fn index_music(dir: &Path, graph: &Path) -> PathBuf {
    let store = dir.join("music.store");
    let out = facetrank(&[
        "index",
        "--graph",
        graph.to_str().unwrap(),
        "--out",
        store.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "index failed: {}", stderr(&out));
    store
}

#[test]
fn build_exports_the_music_graph_byte_stably() {
    let dir = tempfile::tempdir().unwrap();
    let graph = build_music(dir.path());
    let first = std::fs::read(&graph).unwrap();
    let expected = "# nodes=4 edges=5\n\
                    A\tB\tblues,jazz\n\
                    A\tC\tblues,jazz\n\
                    B\tC\tjazz\n\
                    B\tD\tblues\n\
                    C\tD\trock\n";
    assert_eq!(String::from_utf8(first.clone()).unwrap(), expected);
    build_music(dir.path());
    assert_eq!(std::fs::read(&graph).unwrap(), first);
}

#[test]
fn build_rejects_missing_and_empty_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("out.graph");
    let missing = facetrank(&[
        "build",
        "--contents",
        dir.path().join("nope.tsv").to_str().unwrap(),
        "--recs",
        fixture("music-recs.tsv").to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&missing), 2);
    assert!(stderr(&missing).contains("not found"));

    let empty = dir.path().join("empty.tsv");
    std::fs::write(&empty, "# only a comment\n").unwrap();
    let out = facetrank(&[
        "build",
        "--contents",
        empty.to_str().unwrap(),
        "--recs",
        fixture("music-recs.tsv").to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("no valid content records"));
}

#[test]
fn query_ranks_users_for_a_facet() {
    let dir = tempfile::tempdir().unwrap();
    let graph = build_music(dir.path());
    let store = index_music(dir.path(), &graph);
    let out = facetrank(&[
        "query",
        "--graph",
        graph.to_str().unwrap(),
        "--store",
        store.to_str().unwrap(),
        "--tags",
        "blues,jazz",
        "--alg",
        "pr-product",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    for (i, line) in lines.iter().enumerate() {
        let fields: Vec<&str> = line.split('\t').collect();
        assert_eq!(fields.len(), 3);
        assert_eq!(fields[0], (i + 1).to_string());
        assert!(fields[2].parse::<f64>().is_ok());
    }
    assert!(stderr(&out).contains("3 candidates"));
}

#[test]
fn query_notices_unknown_tags_without_failing() {
    let dir = tempfile::tempdir().unwrap();
    let graph = build_music(dir.path());
    let store = index_music(dir.path(), &graph);
    let out = facetrank(&[
        "query",
        "--graph",
        graph.to_str().unwrap(),
        "--store",
        store.to_str().unwrap(),
        "--tags",
        "tango",
        "--alg",
        "pr-product",
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).is_empty());
    assert!(stderr(&out).contains("no results"));
}

#[test]
fn query_rejects_unknown_algorithms() {
    let dir = tempfile::tempdir().unwrap();
    let graph = build_music(dir.path());
    let store = index_music(dir.path(), &graph);
    let out = facetrank(&[
        "query",
        "--graph",
        graph.to_str().unwrap(),
        "--store",
        store.to_str().unwrap(),
        "--tags",
        "blues",
        "--alg",
        "nonsense",
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("unknown algorithm"));
}

#[test]
fn query_detects_store_graph_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let graph = build_music(dir.path());
    let store = index_music(dir.path(), &graph);
    let other = dir.path().join("other.graph");
    let gen = facetrank(&[
        "gen",
        "--out",
        other.to_str().unwrap(),
        "--nodes",
        "50",
        "--seed",
        "1",
    ]);
    assert_eq!(code(&gen), 0);
    let out = facetrank(&[
        "query",
        "--graph",
        other.to_str().unwrap(),
        "--store",
        store.to_str().unwrap(),
        "--tags",
        "blues",
        "--alg",
        "r-sum",
    ]);
    assert_eq!(code(&out), 4);
    assert!(stderr(&out).contains("fingerprint"));
}

#[test]
fn query_rejects_future_store_versions() {
    let dir = tempfile::tempdir().unwrap();
    let graph = build_music(dir.path());
    let store = index_music(dir.path(), &graph);
    let text = std::fs::read_to_string(&store).unwrap();
    std::fs::write(&store, text.replacen("v1", "v2", 1)).unwrap();
    let out = facetrank(&[
        "query",
        "--graph",
        graph.to_str().unwrap(),
        "--store",
        store.to_str().unwrap(),
        "--tags",
        "blues",
        "--alg",
        "r-sum",
    ]);
    assert_eq!(code(&out), 4);
    assert!(stderr(&out).contains("version"));
}

#[test]
fn stats_reports_the_tags_per_edge_mean() {
    let dir = tempfile::tempdir().unwrap();
    let graph = build_music(dir.path());
    let out = facetrank(&["stats", "--graph", graph.to_str().unwrap(), "--tags-per-edge"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("nodes\t4\n"));
    assert!(text.contains("edges\t5\n"));
    assert!(
        text.contains("tags-per-edge-mean\t1.4\n"),
        "missing mean in: {text}"
    );
}

#[test]
fn gen_is_deterministic_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.graph");
    let b = dir.path().join("b.graph");
    let c = dir.path().join("c.graph");
    for (path, seed) in [(&a, "7"), (&b, "7"), (&c, "8")] {
        let out = facetrank(&[
            "gen",
            "--out",
            path.to_str().unwrap(),
            "--nodes",
            "200",
            "--seed",
            seed,
        ]);
        assert_eq!(code(&out), 0, "gen failed: {}", stderr(&out));
    }
    let a = std::fs::read(&a).unwrap();
    assert_eq!(a, std::fs::read(&b).unwrap());
    assert_ne!(a, std::fs::read(&c).unwrap());
    let header = String::from_utf8(a).unwrap();
    assert!(header.starts_with("# nodes=200\n"));
    assert!(header.contains("# seed=7\n"));
}

#[test]
fn eval_emits_tables_grids_and_a_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let graph = build_music(dir.path());
    let out_dir = dir.path().join("results");
    let run = || {
        facetrank(&[
            "eval",
            "--graph",
            graph.to_str().unwrap(),
            "--k",
            "2",
            "--windows",
            "2,3",
            "--no-prune",
            "--out-dir",
            out_dir.to_str().unwrap(),
        ])
    };
    let out = run();
    assert_eq!(code(&out), 0, "eval failed: {}", stderr(&out));
    let table = stdout(&out);
    assert!(table.contains("# pairs=1"));
    assert!(table.contains("algorithm\ttop 2\ttop 3"));
    for algorithm in [
        "e-intersection",
        "e-union-n-intersection",
        "single",
        "pr-product",
        "r-sum",
        "tau-n-intersection",
    ] {
        assert!(table.contains(&format!("\n{algorithm}\t")), "missing {algorithm}");
    }
    let files: Vec<String> = std::fs::read_dir(&out_dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    for name in [
        "table-e-intersection.tsv",
        "table-e-intersection-full.tsv",
        "table-e-union-n-intersection.tsv",
        "table-e-union-n-intersection-full.tsv",
        "grid-e-intersection.tsv",
        "grid-e-union-n-intersection.tsv",
        "manifest.tsv",
    ] {
        assert!(files.iter().any(|f| f == name), "missing {name}");
    }
    let manifest = std::fs::read_to_string(out_dir.join("manifest.tsv")).unwrap();
    assert!(manifest.contains("graph-fingerprint\t"));
    assert!(manifest.contains("pairs\t1\n"));
    let first: Vec<u8> = std::fs::read(out_dir.join("table-e-intersection.tsv")).unwrap();
    let out = run();
    assert_eq!(code(&out), 0);
    assert_eq!(
        std::fs::read(out_dir.join("table-e-intersection.tsv")).unwrap(),
        first
    );
}

#[test]
fn index_output_ignores_the_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let graph = build_music(dir.path());
    let one = dir.path().join("one.store");
    let many = dir.path().join("many.store");
    for (path, threads) in [(&one, "1"), (&many, "4")] {
        let out = facetrank(&[
            "index",
            "--graph",
            graph.to_str().unwrap(),
            "--out",
            path.to_str().unwrap(),
            "--threads",
            threads,
        ]);
        assert_eq!(code(&out), 0);
    }
    assert_eq!(std::fs::read(&one).unwrap(), std::fs::read(&many).unwrap());
}
