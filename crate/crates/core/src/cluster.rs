//! Types shared by both clustering engines.

use std::fmt;
use std::num::NonZeroU32;

use thiserror::Error;

use crate::signature::{Signature, SignatureError};

/// Cluster identifier, minted sequentially from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClusterId(NonZeroU32);

impl ClusterId {
    pub const FIRST: ClusterId = ClusterId(NonZeroU32::MIN);

    pub fn new(id: u32) -> Option<Self> {
        NonZeroU32::new(id).map(Self)
    }

    pub fn get(self) -> u32 {
        self.0.get()
    }

    pub(crate) fn next(self) -> Self {
        Self(self.0.checked_add(1).expect("cluster id space exhausted"))
    }
}

impl fmt::Display for ClusterId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The cluster a signature was placed in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterAssignment {
    pub cluster_id: ClusterId,
    pub ordinal: u64,
    pub elements: Vec<String>,
}

impl fmt::Display for ClusterAssignment {
    /// Output line body: `<cluster_id>\t<ordinal>\t<e1-e2-…>`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}\t{}", self.cluster_id, self.ordinal, self.elements.join("-"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Signature(#[from] SignatureError),
}

/// A single-pass clustering engine: items go in one at a time, in order.
pub trait Clusterer {
    fn process(&mut self, sig: Signature) -> Result<ClusterAssignment, EngineError>;

    /// Clusters minted so far.
    fn cluster_count(&self) -> u64;

    /// Instrumented work counter: similarity comparisons for the centroid
    /// scan, key lookups plus key writes for the key-based engine.
    fn work(&self) -> u64;
}
