//! Streaming Mark-In / Match-Out clustering engine.
//!
//! Each item is handled in two stages. Match-Out looks up every MO key of
//! the signature and takes the lowest cluster id found. Mark-In then writes
//! the signature's MI keys: always for a new cluster, and for members only
//! in [`Neighborhood::Growing`] mode. The work per item depends on the
//! signature size, θ and the allowed sizes, never on how many items came
//! before.

use crate::cluster::{ClusterAssignment, ClusterId, Clusterer, EngineError};
use crate::keys::{visit_mi_keys, visit_mo_keys};
use crate::signature::Signature;
use crate::similarity::{MinOverlapTable, SizeSet};
use crate::store::MarkerStore;
use crate::Threshold;

/// Which signatures mark keys.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Neighborhood {
    /// Only the first member of a cluster marks keys; later members are
    /// matched against it and leave the store untouched.
    #[default]
    Centroid,
    /// Every member marks its keys with its cluster id.
    Growing,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EngineConfig {
    pub theta: Threshold,
    pub sizes: SizeSet,
    pub mode: Neighborhood,
}

impl EngineConfig {
    pub fn new(theta: Threshold, sizes: SizeSet) -> Self {
        Self {
            theta,
            sizes,
            mode: Neighborhood::Centroid,
        }
    }

    pub fn growing(mut self) -> Self {
        self.mode = Neighborhood::Growing;
        self
    }
}

/// Running counters. Every field only ever increases.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EngineStats {
    pub items_processed: u64,
    pub clusters_minted: u64,
    /// Keys currently held by the marker store.
    pub keys_stored: u64,
    /// MO key lookups performed.
    pub keys_checked: u64,
    /// MI key writes attempted, including ones that found the key taken.
    pub keys_marked: u64,
}

#[derive(Debug)]
pub struct MimosaEngine {
    config: EngineConfig,
    table: MinOverlapTable,
    store: MarkerStore,
    next_id: ClusterId,
    stats: EngineStats,
    buf: String,
}

impl MimosaEngine {
    pub fn new(config: EngineConfig) -> Self {
        let table = MinOverlapTable::build(&config.theta, &config.sizes);
        Self {
            config,
            table,
            store: MarkerStore::new(),
            next_id: ClusterId::FIRST,
            stats: EngineStats::default(),
            buf: String::new(),
        }
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn table(&self) -> &MinOverlapTable {
        &self.table
    }

    pub fn store(&self) -> &MarkerStore {
        &self.store
    }

    pub fn stats(&self) -> EngineStats {
        EngineStats {
            keys_stored: self.store.len() as u64,
            ..self.stats
        }
    }

    /// Looks up every MO key of `sig` and returns the lowest marked cluster
    /// id, or `None` when no key is marked.
    pub fn match_out(&mut self, sig: &Signature) -> Option<ClusterId> {
        let store = &self.store;
        let mut best: Option<ClusterId> = None;
        let mut checked = 0u64;
        visit_mo_keys(sig.elements(), &self.table, &mut self.buf, |key| {
            checked += 1;
            if let Some(id) = store.get(key) {
                best = Some(best.map_or(id, |b| b.min(id)));
            }
        });
        self.stats.keys_checked += checked;
        best
    }

    /// Marks every MI key of `sig` with `id`, leaving keys that are already
    /// marked as they are.
    pub fn mark_in(&mut self, sig: &Signature, id: ClusterId) {
        debug_assert!(id < self.next_id, "cluster {id} has not been minted");
        let store = &mut self.store;
        let mut marked = 0u64;
        visit_mi_keys(sig.elements(), &self.table, &mut self.buf, |key| {
            marked += 1;
            store.mark(key, id);
        });
        self.stats.keys_marked += marked;
    }

    fn mint(&mut self) -> ClusterId {
        let id = self.next_id;
        self.next_id = id.next();
        self.stats.clusters_minted += 1;
        id
    }
}

impl Clusterer for MimosaEngine {
    fn process(&mut self, sig: Signature) -> Result<ClusterAssignment, EngineError> {
        sig.check_size(&self.config.sizes)?;
        let cluster_id = match self.match_out(&sig) {
            None => {
                let id = self.mint();
                self.mark_in(&sig, id);
                id
            }
            Some(id) => {
                if self.config.mode == Neighborhood::Growing {
                    self.mark_in(&sig, id);
                }
                id
            }
        };
        self.stats.items_processed += 1;
        Ok(ClusterAssignment {
            cluster_id,
            ordinal: sig.ordinal(),
            elements: sig.into_elements(),
        })
    }

    fn cluster_count(&self) -> u64 {
        self.stats.clusters_minted
    }

    fn work(&self) -> u64 {
        self.stats.keys_checked + self.stats.keys_marked
    }
}
