//! Command-line front end.
//!
//! Data goes to stdout, diagnostics to stderr. Exit codes: 0 success,
//! 2 usage or input error, 3 empty input, 4 incompatible artifacts.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use facetrank_core::analysis::{
    degree_distribution, fit_power_law, neighbor_indegree_correlation, pagerank_distribution,
    tags_per_edge_histogram, BinnedDistribution, Direction, LogBinning,
};
use facetrank_core::eval::{EvalError, ExperimentConfig};
use facetrank_core::facets::{execute, FacetError, FacetRankRequest, DEFAULT_TAU_WINDOW};
use facetrank_core::graph::{build_graph, BuildOptions, Facet, Tag};
use facetrank_core::synth::{generate, GenParams};
use facetrank_core::{Algorithm, TagIndex, TaggedGraph, Truncation};
use facetrank::formats::{
    read_contents, read_graph, read_recommendations, read_store, render_ranking, save_store,
    write_graph, FileError,
};
use facetrank::pipeline::{run_pipeline_parallel, thread_count};
use facetrank::tables::{render_grid, render_manifest, render_table, render_table_full};

#[derive(Parser)]
#[command(name = "facetrank", version, about = "Faceted user ranking for tagged recommendation graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a tagged graph from content and recommendation records.
    Build(BuildArgs),
    /// Rank every tag's subgraph and save the result as a rank store.
    Index(IndexArgs),
    /// Answer one facet query against a graph and its rank store.
    Query(QueryArgs),
    /// Compare the online algorithms against the offline references.
    Eval(EvalArgs),
    /// Print structural statistics of a graph.
    Stats(StatsArgs),
    /// Generate a synthetic scale-free tagged graph.
    Gen(GenArgs),
}

/// Power-iteration settings shared by the ranking commands.
#[derive(Args)]
struct RankArgs {
    /// Random-surfer damping factor.
    #[arg(long, default_value_t = 0.85)]
    damping: f64,
    /// Convergence threshold on the largest per-node change.
    #[arg(long, default_value_t = 1e-6)]
    epsilon: f64,
    /// Iteration cap for the power method.
    #[arg(long, default_value_t = 200)]
    max_iterations: usize,
}

impl RankArgs {
    fn params(&self) -> facetrank_core::PageRankParams {
        facetrank_core::PageRankParams {
            damping: self.damping,
            epsilon: self.epsilon,
            max_iterations: self.max_iterations,
        }
    }
}

#[derive(Args)]
struct BuildArgs {
    /// Content records, one `user \t content \t tag,tag,...` per line.
    #[arg(long)]
    contents: PathBuf,
    /// Recommendation records, one `recommender \t content` per line.
    #[arg(long)]
    recs: PathBuf,
    /// Where to write the graph export.
    #[arg(long)]
    out: PathBuf,
    /// Comma-separated tags to drop during construction.
    #[arg(long)]
    stop_tags: Option<String>,
}

#[derive(Args)]
struct IndexArgs {
    /// Graph export to index.
    #[arg(long)]
    graph: PathBuf,
    /// Where to write the rank store.
    #[arg(long)]
    out: PathBuf,
    /// Ranking truncation window: a count or `unlimited`.
    #[arg(long, value_parser = parse_truncation, default_value = "500")]
    w: Truncation,
    #[command(flatten)]
    rank: RankArgs,
    /// Worker threads; defaults to the environment, then all cores.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct QueryArgs {
    /// Graph export the store was built from.
    #[arg(long)]
    graph: PathBuf,
    /// Rank store produced by `index`.
    #[arg(long)]
    store: PathBuf,
    /// Comma-separated facet tags.
    #[arg(long)]
    tags: String,
    /// Ranking algorithm.
    #[arg(long)]
    alg: Algorithm,
    /// Keep only the first n results.
    #[arg(long)]
    top: Option<usize>,
    /// Store window consulted by tau-n-intersection.
    #[arg(long, default_value_t = DEFAULT_TAU_WINDOW)]
    w: usize,
}

#[derive(Args)]
struct EvalArgs {
    /// Graph export to evaluate on.
    #[arg(long)]
    graph: PathBuf,
    /// Directory for tables, grids, and the run manifest.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Number of most-used tags to pair up.
    #[arg(long, default_value_t = 99)]
    k: usize,
    /// Top-n comparison windows.
    #[arg(long, value_delimiter = ',', default_values_t = [8, 16, 32])]
    windows: Vec<usize>,
    /// Store window consulted by tau-n-intersection.
    #[arg(long, default_value_t = DEFAULT_TAU_WINDOW)]
    tau_window: usize,
    /// Ranking truncation window for the store: a count or `unlimited`.
    #[arg(long, value_parser = parse_truncation, default_value = "500")]
    w: Truncation,
    /// Comma-separated tags to exclude from the pairing.
    #[arg(long)]
    stop_tags: Option<String>,
    /// Keep dangling crawl-frontier leaves instead of pruning them.
    #[arg(long)]
    no_prune: bool,
    #[command(flatten)]
    rank: RankArgs,
    /// Worker threads; defaults to the environment, then all cores.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct StatsArgs {
    /// Graph export to analyze.
    #[arg(long)]
    graph: PathBuf,
    /// Log-binned indegree distribution.
    #[arg(long)]
    indegree: bool,
    /// Log-binned outdegree distribution.
    #[arg(long)]
    outdegree: bool,
    /// Histogram and mean of tag-set sizes over edges.
    #[arg(long)]
    tags_per_edge: bool,
    /// Log-binned distribution of global PageRank values.
    #[arg(long)]
    pagerank: bool,
    /// Mean in-neighbor indegree against node indegree.
    #[arg(long)]
    neighbor_correlation: bool,
    /// Fit a power law to each requested distribution.
    #[arg(long)]
    fit: bool,
    #[command(flatten)]
    rank: RankArgs,
}

#[derive(Args)]
struct GenArgs {
    /// Where to write the generated graph export.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 10_000)]
    nodes: usize,
    /// Mean of the Poisson out-degree draw per joining node.
    #[arg(long, default_value_t = 25.0)]
    mean_outdegree: f64,
    /// Target indegree power-law exponent, strictly between 2 and 3.
    #[arg(long, default_value_t = 2.5)]
    exponent: f64,
    /// Tag vocabulary size.
    #[arg(long, default_value_t = 300)]
    vocabulary: usize,
    /// Mean of the Poisson tag-count draw per edge, floored at 1.
    #[arg(long, default_value_t = 9.26)]
    tags_mean: f64,
    /// Zipf exponent of tag popularity.
    #[arg(long, default_value_t = 1.0)]
    tag_zipf: f64,
    /// Degree correlation knob in [-1, 1].
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    assortativity: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

fn parse_truncation(raw: &str) -> Result<Truncation, String> {
    if raw == "unlimited" {
        return Ok(Truncation::Unlimited);
    }
    raw.parse()
        .map(Truncation::Top)
        .map_err(|_| format!("expected a count or `unlimited`, found {raw:?}"))
}

/// A diagnostic plus the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure { code: 2, message: message.into() }
    }

    fn empty(message: impl Into<String>) -> Failure {
        Failure { code: 3, message: message.into() }
    }

    fn incompatible(message: impl Into<String>) -> Failure {
        Failure { code: 4, message: message.into() }
    }
}

impl From<FileError> for Failure {
    fn from(e: FileError) -> Failure {
        match e {
            FileError::Version { .. } => Failure::incompatible(e.to_string()),
            _ => Failure::usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("facetrank: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Build(args) => cmd_build(args),
        Command::Index(args) => cmd_index(args),
        Command::Query(args) => cmd_query(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Stats(args) => cmd_stats(args),
        Command::Gen(args) => cmd_gen(args),
    }
}

fn apply_threads(flag: Option<usize>) {
    if let Some(n) = thread_count(flag) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn parse_stop_tags(raw: &Option<String>) -> Result<BTreeSet<Tag>, Failure> {
    let Some(raw) = raw else {
        return Ok(BTreeSet::new());
    };
    raw.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| Tag::new(t).map_err(|e| Failure::usage(format!("bad stop tag {t:?}: {e}"))))
        .collect()
}

fn load_graph(path: &PathBuf) -> Result<TaggedGraph, Failure> {
    let graph = read_graph(path)?;
    if graph.is_empty() {
        return Err(Failure::empty(format!("{}: graph has no nodes", path.display())));
    }
    Ok(graph)
}

fn cmd_build(args: BuildArgs) -> Result<(), Failure> {
    let contents = read_contents(&args.contents)?;
    let recs = read_recommendations(&args.recs)?;
    if contents.records.is_empty() {
        return Err(Failure::empty(format!(
            "{}: no valid content records",
            args.contents.display()
        )));
    }
    if recs.records.is_empty() {
        return Err(Failure::empty(format!(
            "{}: no valid recommendation records",
            args.recs.display()
        )));
    }
    let opts = BuildOptions {
        stop_tags: parse_stop_tags(&args.stop_tags)?,
    };
    let (graph, report) = build_graph(&contents.records, &recs.records, &opts);
    let header = vec![format!("nodes={} edges={}", report.nodes, report.edges)];
    write_graph(&graph, &args.out, &header)?;
    eprintln!(
        "contents: {} records, {} lines skipped, {} duplicate ids dropped",
        report.contents, contents.skipped, report.duplicate_contents
    );
    eprintln!(
        "recommendations: {} records, {} lines skipped, {} for unknown contents",
        report.recommendations, recs.skipped, report.unknown_content_recommendations
    );
    if report.stop_tags_removed > 0 {
        eprintln!("stop tags removed: {}", report.stop_tags_removed);
    }
    eprintln!(
        "graph: {} nodes, {} edges -> {}",
        report.nodes,
        report.edges,
        args.out.display()
    );
    Ok(())
}

fn cmd_index(args: IndexArgs) -> Result<(), Failure> {
    apply_threads(args.threads);
    let graph = load_graph(&args.graph)?;
    let index = TagIndex::build(&graph);
    let (store, report) =
        facetrank::pipeline::build_store_parallel(&graph, &index, &args.rank.params(), args.w);
    save_store(&store, &args.out)?;
    eprintln!(
        "ranked {} tags covering {} subgraph edges -> {}",
        report.tags,
        report.total_subgraph_edges,
        args.out.display()
    );
    Ok(())
}

fn cmd_query(args: QueryArgs) -> Result<(), Failure> {
    let graph = load_graph(&args.graph)?;
    let store = read_store(&args.store)?;
    let fingerprint = graph.fingerprint();
    if store.graph_fingerprint != fingerprint {
        return Err(Failure::incompatible(format!(
            "store was built for graph {} but {} has fingerprint {}",
            store.graph_fingerprint,
            args.graph.display(),
            fingerprint
        )));
    }
    let facet = Facet::parse(&args.tags).map_err(|e| Failure::usage(e.to_string()))?;
    let index = TagIndex::build(&graph);
    let mut request = FacetRankRequest::new(facet, args.alg);
    request.top_n = args.top;
    request.tau_window = args.w;
    match execute(&graph, &index, &store, &request) {
        Ok(result) => {
            if result.ranking.is_empty() {
                eprintln!("no results for facet {}", request.facet);
            } else {
                print!("{}", render_ranking(&result.ranking));
            }
            eprintln!(
                "{} over {} candidates",
                result.provenance.algorithm, result.candidate_set_size
            );
            Ok(())
        }
        Err(FacetError::MissingTag(tag)) => {
            eprintln!("no results: tag {tag:?} is not in the rank store");
            Ok(())
        }
    }
}

fn cmd_eval(args: EvalArgs) -> Result<(), Failure> {
    apply_threads(args.threads);
    let graph = load_graph(&args.graph)?;
    let cfg = ExperimentConfig {
        top_tag_count: args.k,
        stop_tags: parse_stop_tags(&args.stop_tags)?,
        windows: args.windows.clone(),
        tau_window: args.tau_window,
        params: args.rank.params(),
        prune: !args.no_prune,
    };
    let output = run_pipeline_parallel(&graph, &cfg, args.w).map_err(|e| match e {
        EvalError::FingerprintMismatch { .. } => Failure::incompatible(e.to_string()),
        other => Failure::usage(other.to_string()),
    })?;
    let report = &output.report;
    for table in &report.tables {
        print!("{}", render_table(table));
        println!();
    }
    if let Some(dir) = &args.out_dir {
        std::fs::create_dir_all(dir)?;
        let mut manifest = BTreeMap::new();
        manifest.insert("k".to_string(), args.k.to_string());
        manifest.insert(
            "windows".to_string(),
            args.windows
                .iter()
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join(","),
        );
        manifest.insert("tau-window".to_string(), args.tau_window.to_string());
        manifest.insert("w".to_string(), args.w.to_string());
        manifest.insert("damping".to_string(), cfg.params.damping.to_string());
        manifest.insert("epsilon".to_string(), cfg.params.epsilon.to_string());
        manifest.insert(
            "max-iterations".to_string(),
            cfg.params.max_iterations.to_string(),
        );
        manifest.insert("prune".to_string(), cfg.prune.to_string());
        manifest.insert(
            "stop-tags".to_string(),
            cfg.stop_tags
                .iter()
                .map(|t| t.as_str().to_string())
                .collect::<Vec<_>>()
                .join(","),
        );
        manifest.insert(
            "graph-fingerprint".to_string(),
            output.graph.fingerprint(),
        );
        manifest.insert("nodes".to_string(), output.graph.node_count().to_string());
        manifest.insert("edges".to_string(), output.graph.edge_count().to_string());
        manifest.insert("tags".to_string(), report.tags.len().to_string());
        manifest.insert("pairs".to_string(), report.pair_count.to_string());
        manifest.insert("failures".to_string(), report.failures.len().to_string());
        for table in &report.tables {
            manifest.insert(
                format!("skipped-empty-{}", table.reference),
                table.skipped_empty.to_string(),
            );
        }
        for table in &report.tables {
            let name = table.reference.to_string();
            std::fs::write(dir.join(format!("table-{name}.tsv")), render_table(table))?;
            std::fs::write(
                dir.join(format!("table-{name}-full.tsv")),
                render_table_full(table),
            )?;
        }
        for grid in &report.grids {
            std::fs::write(
                dir.join(format!("grid-{}.tsv", grid.reference)),
                render_grid(grid),
            )?;
        }
        std::fs::write(dir.join("manifest.tsv"), render_manifest(&manifest))?;
        eprintln!("wrote tables, grids, and manifest to {}", dir.display());
    }
    eprintln!(
        "evaluated {} pairs over {} tags",
        report.pair_count,
        report.tags.len()
    );
    for (facet, error) in &report.failures {
        eprintln!("pair {facet}: {error}");
    }
    Ok(())
}

fn print_distribution(prefix: &str, d: &BinnedDistribution, fit: bool) {
    for point in &d.points {
        println!("{prefix}\t{}\t{}", point.center, point.value);
    }
    println!("{prefix}-zeros\t{}", d.zero_count);
    if fit {
        match fit_power_law(d) {
            Ok(fit) => {
                println!("{prefix}-exponent\t{}", fit.exponent);
                println!("{prefix}-r2\t{}", fit.r_squared);
            }
            Err(e) => eprintln!("{prefix}: no power-law fit: {e:?}"),
        }
    }
}

fn cmd_stats(args: StatsArgs) -> Result<(), Failure> {
    let graph = load_graph(&args.graph)?;
    println!("nodes\t{}", graph.node_count());
    println!("edges\t{}", graph.edge_count());
    println!("tag-assignments\t{}", graph.total_tag_assignments());
    let scheme = LogBinning::default();
    if args.indegree {
        let d = degree_distribution(&graph, Direction::In, &scheme);
        print_distribution("indegree", &d, args.fit);
    }
    if args.outdegree {
        let d = degree_distribution(&graph, Direction::Out, &scheme);
        print_distribution("outdegree", &d, args.fit);
    }
    if args.tags_per_edge {
        let t = tags_per_edge_histogram(&graph);
        for (size, count) in &t.histogram {
            println!("tags-per-edge\t{size}\t{count}");
        }
        if let Some(mean) = t.mean {
            println!("tags-per-edge-mean\t{mean}");
        }
    }
    if args.pagerank {
        let d = pagerank_distribution(&graph, &args.rank.params(), &scheme)
            .map_err(|e| Failure::usage(e.to_string()))?;
        print_distribution("pagerank", &d, args.fit);
    }
    if args.neighbor_correlation {
        let d = neighbor_indegree_correlation(&graph, &scheme);
        print_distribution("neighbor-indegree", &d, args.fit);
    }
    Ok(())
}

fn cmd_gen(args: GenArgs) -> Result<(), Failure> {
    let params = GenParams {
        node_count: args.nodes,
        mean_outdegree: args.mean_outdegree,
        indegree_exponent: args.exponent,
        tag_vocabulary_size: args.vocabulary,
        tags_per_edge_mean: args.tags_mean,
        tag_popularity_exponent: args.tag_zipf,
        assortativity_bias: args.assortativity,
        seed: args.seed,
    };
    let graph = generate(&params).map_err(|e| Failure::usage(e.to_string()))?;
    let header = vec![
        format!("nodes={}", params.node_count),
        format!("mean-outdegree={}", params.mean_outdegree),
        format!("indegree-exponent={}", params.indegree_exponent),
        format!("tag-vocabulary={}", params.tag_vocabulary_size),
        format!("tags-per-edge-mean={}", params.tags_per_edge_mean),
        format!("tag-popularity-exponent={}", params.tag_popularity_exponent),
        format!("assortativity={}", params.assortativity_bias),
        format!("seed={}", params.seed),
    ];
    write_graph(&graph, &args.out, &header)?;
    eprintln!(
        "generated {} nodes, {} edges -> {}",
        graph.node_count(),
        graph.edge_count(),
        args.out.display()
    );
    Ok(())
}
