//! String interning shared across a graph and everything derived from it.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::vec::Vec;

/// Append-only bidirectional map between names and dense `u32` ids.
///
/// A graph owns one table for users and one for tags, wrapped in `Arc`.
/// Subgraphs, indices, centrality vectors, and rankings derived from the
/// graph clone the `Arc`, so ids stay comparable across the whole family
/// without repeated string lookups.
#[derive(Debug, Default, Clone)]
pub(crate) struct SymbolTable {
    names: Vec<Box<str>>,
    ids: BTreeMap<Box<str>, u32>,
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, name: &str) -> u32 {
        if let Some(&id) = self.ids.get(name) {
            return id;
        }
        let id = self.names.len() as u32;
        self.names.push(name.into());
        self.ids.insert(name.into(), id);
        id
    }

    pub fn id(&self, name: &str) -> Option<u32> {
        self.ids.get(name).copied()
    }

    pub fn name(&self, id: u32) -> &str {
        &self.names[id as usize]
    }
}
