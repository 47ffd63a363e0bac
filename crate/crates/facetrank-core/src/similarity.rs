//! Ranked-list similarity measures.

use alloc::collections::{BTreeMap, BTreeSet};
use core::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimilarityError {
    /// `osim` with a zero window.
    ZeroWindow,
    /// `ksim` of two empty rankings.
    EmptyLists,
}

impl fmt::Display for SimilarityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimilarityError::ZeroWindow => write!(f, "overlap similarity needs a window of at least 1"),
            SimilarityError::EmptyLists => write!(f, "rank similarity of two empty rankings is undefined"),
        }
    }
}

impl core::error::Error for SimilarityError {}

/// Overlap similarity: the fraction of the top `n` entries the two
/// rankings share. The denominator is always `n`, so rankings shorter
/// than the window are effectively padded with entries that match
/// nothing.
pub fn osim<T: Ord>(r1: &[T], r2: &[T], n: usize) -> Result<f64, SimilarityError> {
    if n == 0 {
        return Err(SimilarityError::ZeroWindow);
    }
    let top1: BTreeSet<&T> = r1.iter().take(n).collect();
    let top2: BTreeSet<&T> = r2.iter().take(n).collect();
    Ok(top1.intersection(&top2).count() as f64 / n as f64)
}

#[derive(PartialEq, Eq, Clone, Copy)]
enum Relation {
    Before,
    After,
    Tied,
}

/// How a ranking orders `a` relative to `b` once every element missing
/// from it is appended as one tied block after the listed ones.
fn relation<T: Ord>(positions: &BTreeMap<&T, usize>, a: &T, b: &T) -> Relation {
    match (positions.get(a), positions.get(b)) {
        (Some(x), Some(y)) if x < y => Relation::Before,
        (Some(_), Some(_)) => Relation::After,
        (Some(_), None) => Relation::Before,
        (None, Some(_)) => Relation::After,
        (None, None) => Relation::Tied,
    }
}

/// Rank similarity: the fraction of element pairs from the union of the
/// two rankings that both order the same way. Lists need not contain
/// the same elements. A union of one element (or identical
/// single-element lists) has no pairs to disagree on and scores 1.
pub fn ksim<T: Ord>(r1: &[T], r2: &[T]) -> Result<f64, SimilarityError> {
    if r1.is_empty() && r2.is_empty() {
        return Err(SimilarityError::EmptyLists);
    }
    let pos1: BTreeMap<&T, usize> = r1.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let pos2: BTreeMap<&T, usize> = r2.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let union: BTreeSet<&T> = r1.iter().chain(r2.iter()).collect();
    let union: alloc::vec::Vec<&T> = union.into_iter().collect();
    if union.len() < 2 {
        return Ok(1.0);
    }
    let mut agreements = 0usize;
    for (i, a) in union.iter().enumerate() {
        for b in &union[i + 1..] {
            if relation(&pos1, a, b) == relation(&pos2, a, b) {
                agreements += 1;
            }
        }
    }
    let pairs = union.len() * (union.len() - 1) / 2;
    Ok(agreements as f64 / pairs as f64)
}
