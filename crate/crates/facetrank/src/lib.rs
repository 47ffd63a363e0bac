//! Everything around [`facetrank_core`] that needs an operating system:
//! line-oriented file formats, table emission for experiment reports,
//! and a rayon-parallel build and evaluation pipeline.

pub mod formats;
pub mod pipeline;
pub mod tables;
