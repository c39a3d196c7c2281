//! Hash table from rendered keys to cluster ids.
//!
//! Key bytes live back to back in one arena and the table holds offsets into
//! it, so a stored key costs its length plus a fixed 16-byte slot. Lookups
//! compare full key bytes; nothing is digested.

use std::hash::BuildHasher;

use hashbrown::{DefaultHashBuilder, HashTable};

use crate::cluster::ClusterId;

#[derive(Debug, Clone, Copy)]
struct Slot {
    offset: usize,
    len: u32,
    id: ClusterId,
}

/// First-writer-wins marker store with constant expected-time operations.
#[derive(Default)]
pub struct MarkerStore {
    table: HashTable<Slot>,
    arena: Vec<u8>,
    hasher: DefaultHashBuilder,
}

impl MarkerStore {
    pub fn new() -> Self {
        Self::default()
    }

    fn bytes<'a>(arena: &'a [u8], slot: &Slot) -> &'a [u8] {
        &arena[slot.offset..slot.offset + slot.len as usize]
    }

    /// Cluster id marked under `key`, if any.
    pub fn get(&self, key: &str) -> Option<ClusterId> {
        let key = key.as_bytes();
        let hash = self.hasher.hash_one(key);
        self.table
            .find(hash, |s| Self::bytes(&self.arena, s) == key)
            .map(|s| s.id)
    }

    /// Marks `key` with `id` unless it is already marked. Returns whether the
    /// store changed; an existing marker is never overwritten.
    pub fn mark(&mut self, key: &str, id: ClusterId) -> bool {
        let bytes = key.as_bytes();
        let hash = self.hasher.hash_one(bytes);
        let arena = &self.arena;
        if self.table.find(hash, |s| Self::bytes(arena, s) == bytes).is_some() {
            return false;
        }
        let slot = Slot {
            offset: self.arena.len(),
            len: u32::try_from(bytes.len()).expect("key longer than 4 GiB"),
            id,
        };
        self.arena.extend_from_slice(bytes);
        let (arena, hasher) = (&self.arena, &self.hasher);
        self.table
            .insert_unique(hash, slot, |s| hasher.hash_one(Self::bytes(arena, s)));
        true
    }

    /// Number of marked keys.
    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Approximate heap footprint in bytes.
    pub fn heap_bytes(&self) -> usize {
        self.arena.capacity() + self.table.capacity() * (std::mem::size_of::<Slot>() + 1)
    }

    /// All markers sorted by key, for debug dumps.
    pub fn dump(&self) -> Vec<(&str, ClusterId)> {
        let mut out: Vec<(&str, ClusterId)> = self
            .table
            .iter()
            .map(|s| {
                let key = std::str::from_utf8(Self::bytes(&self.arena, s)).expect("keys are utf-8");
                (key, s.id)
            })
            .collect();
        out.sort_unstable();
        out
    }
}

impl std::fmt::Debug for MarkerStore {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MarkerStore").field("keys", &self.len()).finish()
    }
}
