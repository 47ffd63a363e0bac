//! Structural statistics: degree distributions, neighbor-degree
//! correlation, PageRank distribution, and power-law fitting, all on
//! logarithmically binned data.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::centrality::{pagerank, CentralityError, PageRankParams};
use crate::graph::TaggedGraph;

/// Logarithmic binning scheme. Bin `i` covers
/// `[base^(i/bins_per_decade), base^((i+1)/bins_per_decade))`, so with
/// the defaults each factor of 10 is split into 10 bins.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogBinning {
    pub base: f64,
    pub bins_per_decade: usize,
}

impl Default for LogBinning {
    fn default() -> Self {
        LogBinning {
            base: 10.0,
            bins_per_decade: 10,
        }
    }
}

impl LogBinning {
    fn width_ln(&self) -> f64 {
        assert!(self.base > 1.0, "log binning needs a base above 1");
        assert!(self.bins_per_decade > 0, "log binning needs at least one bin per decade");
        libm::log(self.base) / self.bins_per_decade as f64
    }

    fn index(&self, x: f64) -> i64 {
        debug_assert!(x > 0.0);
        libm::floor(libm::log(x) / self.width_ln()) as i64
    }

    fn bounds(&self, index: i64) -> (f64, f64) {
        let w = self.width_ln();
        (libm::exp(index as f64 * w), libm::exp((index + 1) as f64 * w))
    }

    /// Geometric center of the bin.
    fn center(&self, index: i64) -> f64 {
        libm::exp((index as f64 + 0.5) * self.width_ln())
    }
}

/// One occupied bin: the bin's geometric center and the value assigned
/// to it (a density for distributions, a mean for correlation curves).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinPoint {
    pub center: f64,
    pub value: f64,
}

/// A log-binned curve. Only occupied bins appear; centers are strictly
/// increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct BinnedDistribution {
    pub scheme: LogBinning,
    pub points: Vec<BinPoint>,
    /// Observations at exactly zero, which no log bin can hold.
    pub zero_count: usize,
    /// Number of observations behind the binned points.
    pub observations: usize,
}

impl BinnedDistribution {
    /// Wraps explicit `(center, value)` points, for fitting data that
    /// was not produced by the binning functions here. Points are
    /// sorted by center; the default scheme is attached nominally and
    /// the observation count is zero.
    pub fn from_points(points: Vec<(f64, f64)>) -> BinnedDistribution {
        let mut points: Vec<BinPoint> = points
            .into_iter()
            .map(|(center, value)| BinPoint { center, value })
            .collect();
        points.sort_unstable_by(|a, b| a.center.total_cmp(&b.center));
        BinnedDistribution {
            scheme: LogBinning::default(),
            points,
            zero_count: 0,
            observations: 0,
        }
    }

    /// The sub-curve from `min_center` upward. Counts are inherited
    /// from the full distribution.
    pub fn tail(&self, min_center: f64) -> BinnedDistribution {
        BinnedDistribution {
            scheme: self.scheme,
            points: self
                .points
                .iter()
                .copied()
                .filter(|p| p.center >= min_center)
                .collect(),
            zero_count: self.zero_count,
            observations: self.observations,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    In,
    Out,
}

/// Exact degree counts, including degree zero.
pub fn degree_histogram(g: &TaggedGraph, direction: Direction) -> BTreeMap<usize, usize> {
    let mut degree: BTreeMap<u32, usize> = g.node_ids().iter().map(|&id| (id, 0)).collect();
    for &(src, dst) in g.edge_map().keys() {
        let node = match direction {
            Direction::In => dst,
            Direction::Out => src,
        };
        *degree.get_mut(&node).expect("endpoints are nodes") += 1;
    }
    let mut histogram: BTreeMap<usize, usize> = BTreeMap::new();
    for d in degree.into_values() {
        *histogram.entry(d).or_default() += 1;
    }
    histogram
}

fn densify(
    scheme: &LogBinning,
    binned: BTreeMap<i64, usize>,
    observations: usize,
    zero_count: usize,
) -> BinnedDistribution {
    let points = binned
        .into_iter()
        .map(|(index, count)| {
            let (lo, hi) = scheme.bounds(index);
            BinPoint {
                center: scheme.center(index),
                value: count as f64 / (observations as f64 * (hi - lo)),
            }
        })
        .collect();
    BinnedDistribution {
        scheme: *scheme,
        points,
        zero_count,
        observations,
    }
}

/// Log-binned density of node degrees. Degree-zero nodes are counted
/// in `zero_count` and excluded from the density estimate.
pub fn degree_distribution(
    g: &TaggedGraph,
    direction: Direction,
    scheme: &LogBinning,
) -> BinnedDistribution {
    let histogram = degree_histogram(g, direction);
    let zero_count = histogram.get(&0).copied().unwrap_or(0);
    let mut binned: BTreeMap<i64, usize> = BTreeMap::new();
    let mut observations = 0usize;
    for (&k, &count) in &histogram {
        if k == 0 {
            continue;
        }
        observations += count;
        *binned.entry(scheme.index(k as f64)).or_default() += count;
    }
    densify(scheme, binned, observations, zero_count)
}

/// For nodes binned by indegree, the mean over the bin of each node's
/// mean in-neighbor indegree. A rising curve means popular users are
/// recommended by other popular users. Nodes without in-edges land in
/// `zero_count`; a graph with no edges yields no points.
pub fn neighbor_indegree_correlation(g: &TaggedGraph, scheme: &LogBinning) -> BinnedDistribution {
    let mut indegree: BTreeMap<u32, usize> = BTreeMap::new();
    let mut in_neighbors: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for &(src, dst) in g.edge_map().keys() {
        *indegree.entry(dst).or_default() += 1;
        in_neighbors.entry(dst).or_default().push(src);
    }
    let deg = |id: u32| indegree.get(&id).copied().unwrap_or(0);
    let mut sums: BTreeMap<i64, (f64, usize)> = BTreeMap::new();
    let mut contributors = 0usize;
    for (&node, neighbors) in &in_neighbors {
        let k = deg(node);
        debug_assert!(k > 0);
        let neighbor_mean =
            neighbors.iter().map(|&u| deg(u) as f64).sum::<f64>() / neighbors.len() as f64;
        let slot = sums.entry(scheme.index(k as f64)).or_insert((0.0, 0));
        slot.0 += neighbor_mean;
        slot.1 += 1;
        contributors += 1;
    }
    let points = sums
        .into_iter()
        .map(|(index, (sum, count))| BinPoint {
            center: scheme.center(index),
            value: sum / count as f64,
        })
        .collect();
    BinnedDistribution {
        scheme: *scheme,
        points,
        zero_count: g.node_count() - contributors,
        observations: contributors,
    }
}

/// Exact histogram of tag-set sizes over edges.
#[derive(Debug, Clone, PartialEq)]
pub struct TagsPerEdge {
    pub histogram: BTreeMap<usize, usize>,
    /// Absent when the graph has no edges.
    pub mean: Option<f64>,
}

pub fn tags_per_edge_histogram(g: &TaggedGraph) -> TagsPerEdge {
    let mut histogram: BTreeMap<usize, usize> = BTreeMap::new();
    let mut total = 0usize;
    for labels in g.edge_map().values() {
        *histogram.entry(labels.len()).or_default() += 1;
        total += labels.len();
    }
    let mean = if g.edge_count() == 0 {
        None
    } else {
        Some(total as f64 / g.edge_count() as f64)
    };
    TagsPerEdge { histogram, mean }
}

/// Log-binned density of PageRank values.
pub fn pagerank_distribution(
    g: &TaggedGraph,
    params: &PageRankParams,
    scheme: &LogBinning,
) -> Result<BinnedDistribution, CentralityError> {
    let centrality = pagerank(g, params)?;
    let mut binned: BTreeMap<i64, usize> = BTreeMap::new();
    for (_, score) in centrality.iter() {
        *binned.entry(scheme.index(score)).or_default() += 1;
    }
    Ok(densify(scheme, binned, centrality.len(), 0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    /// Exponent γ of `value ∝ center^(-γ)`; the negated log-log slope.
    pub exponent: f64,
    pub r_squared: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitError {
    /// Fewer than three occupied bins with positive center and value.
    TooFewBins,
}

impl fmt::Display for FitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FitError::TooFewBins => {
                write!(f, "power-law fitting needs at least three occupied bins")
            }
        }
    }
}

impl core::error::Error for FitError {}

/// Ordinary least squares over the `(ln center, ln value)` points.
/// Bins with non-positive center or value are skipped. A perfectly
/// flat curve fits exactly, with exponent 0 and r² of 1.
pub fn fit_power_law(d: &BinnedDistribution) -> Result<PowerLawFit, FitError> {
    let pts: Vec<(f64, f64)> = d
        .points
        .iter()
        .filter(|p| p.center > 0.0 && p.value > 0.0)
        .map(|p| (libm::log(p.center), libm::log(p.value)))
        .collect();
    if pts.len() < 3 {
        return Err(FitError::TooFewBins);
    }
    let n = pts.len() as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.0 - mean_x)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - mean_y) * (p.1 - mean_y)).sum();
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    Ok(PowerLawFit {
        exponent: -slope,
        r_squared,
    })
}
