//! TSV rendering for experiment results.
//!
//! A similarity table gets two renderings: a compact one with `OSim|KSim`
//! cells rounded to two decimals, and a long-form companion at full
//! precision. Grids and run manifests are long-form only. None of the
//! outputs carry timestamps, so equal inputs produce equal bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use facetrank_core::eval::{SimilarityGrid, SimilarityTable};

/// Renders the compact table: one row per algorithm, one `OSim|KSim`
/// column per window, `-` where no pair produced a measurement.
pub fn render_table(table: &SimilarityTable) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# reference={}", table.reference);
    let _ = writeln!(out, "# pairs={}", table.pair_count);
    let _ = writeln!(out, "# skipped-empty={}", table.skipped_empty);
    for (window, count) in &table.window_skips {
        let _ = writeln!(out, "# skipped-window-{window}={count}");
    }
    out.push_str("algorithm");
    for window in &table.windows {
        let _ = write!(out, "\ttop {window}");
    }
    out.push('\n');
    for row in &table.rows {
        out.push_str(row.algorithm.as_str());
        for cell in &row.cells {
            match cell {
                Some(cell) => {
                    let _ = write!(out, "\t{:.2}|{:.2}", cell.osim, cell.ksim);
                }
                None => out.push_str("\t-"),
            }
        }
        out.push('\n');
    }
    out
}

/// Renders the full-precision companion, one measurement per line.
pub fn render_table_full(table: &SimilarityTable) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# reference={}", table.reference);
    out.push_str("algorithm\twindow\tmean-osim\tmean-ksim\tpairs\n");
    for row in &table.rows {
        for (window, cell) in table.windows.iter().zip(&row.cells) {
            if let Some(cell) = cell {
                let _ = writeln!(
                    out,
                    "{}\t{window}\t{}\t{}\t{}",
                    row.algorithm, cell.osim, cell.ksim, cell.count
                );
            }
        }
    }
    out
}

/// A compact table read back from its rendering. Means survive to the
/// two decimals the format keeps.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedTable {
    pub reference: Option<String>,
    pub windows: Vec<usize>,
    pub rows: Vec<(String, Vec<Option<(f64, f64)>>)>,
}

/// Parses the output of [`render_table`].
pub fn parse_table(text: &str) -> Result<ParsedTable, String> {
    let mut reference = None;
    let mut windows: Option<Vec<usize>> = None;
    let mut rows = Vec::new();
    for line in text.lines() {
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(value) = rest.trim().strip_prefix("reference=") {
                reference = Some(value.to_string());
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split('\t');
        let first = fields.next().unwrap_or_default();
        let Some(windows) = &windows else {
            if first != "algorithm" {
                return Err(format!("expected header row, found {first:?}"));
            }
            let parsed: Result<Vec<usize>, _> = fields
                .map(|f| {
                    f.strip_prefix("top ")
                        .ok_or_else(|| format!("bad window column {f:?}"))?
                        .parse::<usize>()
                        .map_err(|e| e.to_string())
                })
                .collect();
            windows = Some(parsed?);
            continue;
        };
        let mut cells = Vec::new();
        for field in fields {
            if field == "-" {
                cells.push(None);
                continue;
            }
            let (osim, ksim) = field
                .split_once('|')
                .ok_or_else(|| format!("bad cell {field:?}"))?;
            let osim: f64 = osim.parse().map_err(|_| format!("bad cell {field:?}"))?;
            let ksim: f64 = ksim.parse().map_err(|_| format!("bad cell {field:?}"))?;
            cells.push(Some((osim, ksim)));
        }
        if cells.len() != windows.len() {
            return Err(format!(
                "row {first:?} has {} cells for {} windows",
                cells.len(),
                windows.len()
            ));
        }
        rows.push((first.to_string(), cells));
    }
    Ok(ParsedTable {
        reference,
        windows: windows.ok_or("missing header row")?,
        rows,
    })
}

/// Renders a grid as long-form TSV, one populated cell per line. The
/// size columns are the half-open result-size bin `[lo, hi)`.
pub fn render_grid(grid: &SimilarityGrid) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# reference={}", grid.reference);
    out.push_str("algorithm\twindow\tsize-lo\tsize-hi\tmean-osim\tmean-ksim\tpairs\n");
    for cell in &grid.cells {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            cell.algorithm,
            cell.window,
            cell.size_lo,
            cell.size_hi,
            cell.mean_osim,
            cell.mean_ksim,
            cell.count
        );
    }
    out
}

/// Renders a run manifest as sorted `key \t value` lines.
pub fn render_manifest(entries: &BTreeMap<String, String>) -> String {
    let mut out = String::new();
    for (key, value) in entries {
        let _ = writeln!(out, "{key}\t{value}");
    }
    out
}
