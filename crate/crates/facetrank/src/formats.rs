//! Line-oriented file formats: content and recommendation records,
//! graph exports, and the persisted rank store.
//!
//! All formats are UTF-8 text with tab-separated fields. Lines starting
//! with `#` are comments and blank lines are ignored. Writers sort
//! everything they emit, so a given value always renders to the same
//! bytes.

use std::fs::File;
use std::io::{self, BufRead, BufReader, Read};
use std::path::{Path, PathBuf};

use facetrank_core::store::{format_centrality, RankStoreBuilder};
use facetrank_core::{
    PageRankParams, RankStore, Ranking, Recommendation, TaggedContent, TaggedGraph, Truncation,
};

/// Store format version written by this build.
pub const STORE_VERSION: &str = "v1";

#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error("{0}: file not found")]
    Missing(PathBuf),
    #[error("{path}:{line}: {reason}")]
    Corrupt {
        path: String,
        line: usize,
        reason: String,
    },
    #[error("unsupported store format version {found:?}; this build reads {STORE_VERSION:?}")]
    Version { found: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn open(path: &Path) -> Result<BufReader<File>, FileError> {
    match File::open(path) {
        Ok(f) => Ok(BufReader::new(f)),
        Err(e) if e.kind() == io::ErrorKind::NotFound => Err(FileError::Missing(path.into())),
        Err(e) => Err(e.into()),
    }
}

fn corrupt(path: &str, line: usize, reason: impl Into<String>) -> FileError {
    FileError::Corrupt {
        path: path.to_string(),
        line,
        reason: reason.into(),
    }
}

/// Data lines of a reader: comments and blanks dropped, line endings
/// trimmed, original 1-based line numbers kept.
fn data_lines(reader: impl BufRead) -> impl Iterator<Item = io::Result<(usize, String)>> {
    reader.lines().enumerate().filter_map(|(i, line)| match line {
        Ok(l) => {
            let l = l.strip_suffix('\r').map(str::to_string).unwrap_or(l);
            if l.trim().is_empty() || l.starts_with('#') {
                None
            } else {
                Some(Ok((i + 1, l)))
            }
        }
        Err(e) => Some(Err(e)),
    })
}

/// Records accepted from a file plus the number of lines that were not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedRecords<T> {
    pub records: Vec<T>,
    pub skipped: usize,
}

fn split_tags(field: &str) -> impl Iterator<Item = &str> {
    field.split(',').map(str::trim).filter(|t| !t.is_empty())
}

/// Parses content records, one `user \t content \t tag,tag,...` per
/// line; the tag field may be empty or missing entirely. Lines that do
/// not fit the shape are counted, not fatal.
pub fn parse_contents(reader: impl BufRead) -> io::Result<ParsedRecords<TaggedContent>> {
    let mut records = Vec::new();
    let mut skipped = 0usize;
    for entry in data_lines(reader) {
        let (_, line) = entry?;
        let fields: Vec<&str> = line.split('\t').collect();
        let parsed = match fields.as_slice() {
            [user, content] => TaggedContent::new(user, content, &[]),
            [user, content, tags] => {
                TaggedContent::new(user, content, &split_tags(tags).collect::<Vec<_>>())
            }
            _ => {
                skipped += 1;
                continue;
            }
        };
        match parsed {
            Ok(record) => records.push(record),
            Err(_) => skipped += 1,
        }
    }
    Ok(ParsedRecords { records, skipped })
}

/// Parses recommendation records, one `recommender \t content` per
/// line, with the same skip rule as [`parse_contents`].
pub fn parse_recommendations(reader: impl BufRead) -> io::Result<ParsedRecords<Recommendation>> {
    let mut records = Vec::new();
    let mut skipped = 0usize;
    for entry in data_lines(reader) {
        let (_, line) = entry?;
        let fields: Vec<&str> = line.split('\t').collect();
        let parsed = match fields.as_slice() {
            [recommender, content] => Recommendation::new(recommender, content),
            _ => {
                skipped += 1;
                continue;
            }
        };
        match parsed {
            Ok(record) => records.push(record),
            Err(_) => skipped += 1,
        }
    }
    Ok(ParsedRecords { records, skipped })
}

pub fn read_contents(path: impl AsRef<Path>) -> Result<ParsedRecords<TaggedContent>, FileError> {
    Ok(parse_contents(open(path.as_ref())?)?)
}

pub fn read_recommendations(
    path: impl AsRef<Path>,
) -> Result<ParsedRecords<Recommendation>, FileError> {
    Ok(parse_recommendations(open(path.as_ref())?)?)
}

/// Renders a graph as one `src \t dst \t tag,tag,...` line per edge,
/// preceded by `node \t name` lines for nodes no edge touches and by
/// the given header comments. Everything is sorted.
pub fn render_graph(graph: &TaggedGraph, header: &[String]) -> String {
    let mut out = String::new();
    for comment in header {
        out.push_str("# ");
        out.push_str(comment);
        out.push('\n');
    }
    let edges = graph.sorted_edges();
    let touched: std::collections::BTreeSet<&str> =
        edges.iter().flat_map(|&(src, dst, _)| [src, dst]).collect();
    for name in graph.sorted_nodes() {
        if !touched.contains(name) {
            out.push_str("node\t");
            out.push_str(name);
            out.push('\n');
        }
    }
    for (src, dst, tags) in edges {
        out.push_str(src);
        out.push('\t');
        out.push_str(dst);
        out.push('\t');
        out.push_str(&tags.join(","));
        out.push('\n');
    }
    out
}

pub fn write_graph(graph: &TaggedGraph, path: impl AsRef<Path>, header: &[String]) -> io::Result<()> {
    std::fs::write(path, render_graph(graph, header))
}

/// Strict inverse of [`render_graph`]. Any line that is neither an
/// edge nor a `node` line is an error; graph files are machine-written.
pub fn parse_graph(reader: impl BufRead, label: &str) -> Result<TaggedGraph, FileError> {
    let mut isolated: Vec<String> = Vec::new();
    let mut edges: Vec<(String, String, Vec<String>)> = Vec::new();
    let mut last_line = 0usize;
    for entry in data_lines(reader) {
        let (number, line) = entry?;
        last_line = number;
        let fields: Vec<&str> = line.split('\t').collect();
        match fields.as_slice() {
            ["node", name] => isolated.push(name.to_string()),
            [src, dst, tags] => edges.push((
                src.to_string(),
                dst.to_string(),
                split_tags(tags).map(str::to_string).collect(),
            )),
            _ => return Err(corrupt(label, number, "expected an edge or a node line")),
        }
    }
    TaggedGraph::from_edges(
        isolated.iter().map(String::as_str),
        edges
            .iter()
            .map(|(src, dst, tags)| (src.as_str(), dst.as_str(), tags.iter().map(String::as_str))),
    )
    .map_err(|e| corrupt(label, last_line, e.to_string()))
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<TaggedGraph, FileError> {
    let path = path.as_ref();
    parse_graph(open(path)?, &path.display().to_string())
}

/// Renders a store in its versioned line format: a three-line header,
/// then per tag a `tag <name> <nodes> <edges> <converged>` line, its
/// ranking as `rank \t user \t centrality` lines, and `node \t user`
/// lines for node-set members the truncation cut off.
pub fn render_store(store: &RankStore) -> String {
    let mut out = format!(
        "#facetrank-store {STORE_VERSION}\n#damping={} epsilon={} w={} max-iterations={}\n#graph-fingerprint={}\n",
        store.params.damping,
        store.params.epsilon,
        store.truncation,
        store.params.max_iterations,
        store.graph_fingerprint,
    );
    for snapshot in store.snapshots() {
        out.push_str(&format!(
            "tag {} {} {} {}\n",
            snapshot.tag, snapshot.node_count, snapshot.edge_count, snapshot.converged
        ));
        for (rank, user, centrality) in snapshot.ranking {
            out.push_str(&format!("{rank}\t{user}\t{}\n", format_centrality(centrality)));
        }
        for user in snapshot.unranked_nodes {
            out.push_str("node\t");
            out.push_str(user);
            out.push('\n');
        }
    }
    out
}

pub fn save_store(store: &RankStore, path: impl AsRef<Path>) -> io::Result<()> {
    std::fs::write(path, render_store(store))
}

struct PendingTag {
    tag: String,
    declared_nodes: usize,
    edge_count: usize,
    converged: bool,
    line: usize,
    ranking: Vec<(String, f64)>,
    tail: Vec<String>,
}

fn flush_tag(builder: &mut RankStoreBuilder, pending: PendingTag, label: &str) -> Result<(), FileError> {
    let listed = pending.ranking.len() + pending.tail.len();
    if listed != pending.declared_nodes {
        return Err(corrupt(
            label,
            pending.line,
            format!(
                "tag {:?} declares {} nodes but lists {listed}",
                pending.tag, pending.declared_nodes
            ),
        ));
    }
    let ranked: Vec<(&str, f64)> = pending
        .ranking
        .iter()
        .map(|(user, c)| (user.as_str(), *c))
        .collect();
    let tail: Vec<&str> = pending.tail.iter().map(String::as_str).collect();
    builder
        .add_tag_ranked(
            &pending.tag,
            &ranked,
            &tail,
            pending.edge_count,
            pending.converged,
        )
        .map_err(|e| corrupt(label, pending.line, e.to_string()))?;
    Ok(())
}

/// Strict inverse of [`render_store`].
pub fn parse_store(reader: impl Read, label: &str) -> Result<RankStore, FileError> {
    let mut lines = BufReader::new(reader).lines().enumerate();
    let mut take = || -> Result<Option<(usize, String)>, FileError> {
        match lines.next() {
            Some((i, Ok(l))) => Ok(Some((i + 1, l.strip_suffix('\r').map(str::to_string).unwrap_or(l)))),
            Some((_, Err(e))) => Err(e.into()),
            None => Ok(None),
        }
    };

    let Some((_, first)) = take()? else {
        return Err(corrupt(label, 1, "empty file"));
    };
    let Some(version) = first.strip_prefix("#facetrank-store ") else {
        return Err(corrupt(label, 1, "missing store signature line"));
    };
    if version != STORE_VERSION {
        return Err(FileError::Version {
            found: version.to_string(),
        });
    }

    let Some((_, params_line)) = take()? else {
        return Err(corrupt(label, 2, "missing parameter line"));
    };
    let mut params = PageRankParams::default();
    let mut truncation = Truncation::Unlimited;
    let rest = params_line
        .strip_prefix('#')
        .ok_or_else(|| corrupt(label, 2, "missing parameter line"))?;
    for pair in rest.split_whitespace() {
        let (key, value) = pair
            .split_once('=')
            .ok_or_else(|| corrupt(label, 2, format!("malformed parameter {pair:?}")))?;
        let bad = |what: &str| corrupt(label, 2, format!("bad {what} value {value:?}"));
        match key {
            "damping" => params.damping = value.parse().map_err(|_| bad("damping"))?,
            "epsilon" => params.epsilon = value.parse().map_err(|_| bad("epsilon"))?,
            "max-iterations" => {
                params.max_iterations = value.parse().map_err(|_| bad("max-iterations"))?
            }
            "w" => {
                truncation = if value == "unlimited" {
                    Truncation::Unlimited
                } else {
                    Truncation::Top(value.parse().map_err(|_| bad("w"))?)
                }
            }
            _ => return Err(corrupt(label, 2, format!("unknown parameter {key:?}"))),
        }
    }

    let Some((_, fp_line)) = take()? else {
        return Err(corrupt(label, 3, "missing fingerprint line"));
    };
    let Some(fingerprint) = fp_line.strip_prefix("#graph-fingerprint=") else {
        return Err(corrupt(label, 3, "missing fingerprint line"));
    };

    let mut builder = RankStoreBuilder::new(params, truncation, fingerprint);
    let mut pending: Option<PendingTag> = None;
    while let Some((number, line)) = take()? {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("tag ") {
            if let Some(done) = pending.take() {
                flush_tag(&mut builder, done, label)?;
            }
            // The name may contain spaces; the last three fields never do.
            let mut fields = rest.rsplitn(4, ' ');
            let converged = fields.next();
            let edge_count = fields.next();
            let node_count = fields.next();
            let name = fields.next();
            let (Some(converged), Some(edge_count), Some(node_count), Some(name)) =
                (converged, edge_count, node_count, name)
            else {
                return Err(corrupt(label, number, "malformed tag line"));
            };
            let converged = match converged {
                "true" => true,
                "false" => false,
                other => {
                    return Err(corrupt(
                        label,
                        number,
                        format!("bad converged flag {other:?}"),
                    ))
                }
            };
            pending = Some(PendingTag {
                tag: name.to_string(),
                declared_nodes: node_count
                    .parse()
                    .map_err(|_| corrupt(label, number, format!("bad node count {node_count:?}")))?,
                edge_count: edge_count
                    .parse()
                    .map_err(|_| corrupt(label, number, format!("bad edge count {edge_count:?}")))?,
                converged,
                line: number,
                ranking: Vec::new(),
                tail: Vec::new(),
            });
            continue;
        }
        let Some(entry) = pending.as_mut() else {
            return Err(corrupt(label, number, "entry line before any tag line"));
        };
        let fields: Vec<&str> = line.split('\t').collect();
        match fields.as_slice() {
            ["node", user] => entry.tail.push(user.to_string()),
            [rank, user, centrality] => {
                let expected = entry.ranking.len() + 1;
                if rank.parse::<usize>() != Ok(expected) {
                    return Err(corrupt(
                        label,
                        number,
                        format!("expected rank {expected}, found {rank:?}"),
                    ));
                }
                if !entry.tail.is_empty() {
                    return Err(corrupt(label, number, "ranked entry after node lines"));
                }
                let centrality: f64 = centrality.parse().map_err(|_| {
                    corrupt(label, number, format!("bad centrality {centrality:?}"))
                })?;
                entry.ranking.push((user.to_string(), centrality));
            }
            _ => return Err(corrupt(label, number, "expected a rank or a node line")),
        }
    }
    if let Some(done) = pending.take() {
        flush_tag(&mut builder, done, label)?;
    }
    Ok(builder.build())
}

pub fn read_store(path: impl AsRef<Path>) -> Result<RankStore, FileError> {
    let path = path.as_ref();
    parse_store(open(path)?, &path.display().to_string())
}

/// Renders a ranking as `rank \t user \t score` lines.
pub fn render_ranking(ranking: &Ranking) -> String {
    let mut out = String::new();
    for entry in ranking.iter() {
        out.push_str(&format!(
            "{}\t{}\t{}\n",
            entry.rank,
            entry.user,
            format_centrality(entry.score)
        ));
    }
    out
}
