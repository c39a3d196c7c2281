//! Exact single-pass set-similarity clustering.
//!
//! Signatures (small sorted sets of string elements) arrive one at a time
//! and are assigned to clusters under a Jaccard threshold θ. The
//! [`MimosaEngine`] does this in constant time per item by marking and
//! matching size-prefixed partial-signature keys in a hash table; the
//! [`CentroidEngine`] is the quadratic reference that compares each item to
//! every cluster's first member. Both produce identical assignments in
//! centroid-neighborhood mode.
//!
//! Threshold arithmetic is generic over an unsigned integer [`Scalar`];
//! [`Threshold`] fixes it to `u64`.

pub mod bench;
pub mod centroid;
pub mod cluster;
pub mod engine;
pub mod keys;
pub mod scalar;
pub mod signature;
pub mod similarity;
pub mod store;
pub mod synth;

pub use centroid::CentroidEngine;
pub use cluster::{ClusterAssignment, ClusterId, Clusterer, EngineError};
pub use engine::{EngineConfig, EngineStats, MimosaEngine, Neighborhood};
pub use keys::{enumerate_partials, mi_keys, mo_keys, Key};
pub use scalar::Scalar;
pub use signature::{parse_line, truncate, Signature, SignatureError};
pub use similarity::{
    build_table, jaccard, min_overlap, min_overlap_oracle, MinOverlapTable, SizeSet, ThresholdOf,
};
pub use store::MarkerStore;

/// Threshold with `u64` arithmetic.
pub type Threshold = ThresholdOf<u64>;
/// Threshold with `u32` arithmetic.
pub type Threshold32 = ThresholdOf<u32>;
/// Exact similarity value.
pub type Similarity = num_rational::Ratio<u64>;
