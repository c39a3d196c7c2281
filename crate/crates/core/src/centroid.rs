//! Standard centroid clustering: each item is compared against the first
//! member of every existing cluster, in minting order.

use crate::cluster::{ClusterAssignment, ClusterId, Clusterer, EngineError};
use crate::signature::Signature;
use crate::similarity::{overlap_count, SizeSet};
use crate::Threshold;

#[derive(Debug)]
pub struct CentroidEngine {
    theta: Threshold,
    sizes: SizeSet,
    centroids: Vec<(ClusterId, Vec<String>)>,
    comparisons: u64,
}

impl CentroidEngine {
    pub fn new(theta: Threshold, sizes: SizeSet) -> Self {
        Self {
            theta,
            sizes,
            centroids: Vec::new(),
            comparisons: 0,
        }
    }

    /// Centroids in minting order.
    pub fn centroids(&self) -> &[(ClusterId, Vec<String>)] {
        &self.centroids
    }

    /// Jaccard comparisons performed so far.
    pub fn comparisons(&self) -> u64 {
        self.comparisons
    }

    /// Scans the centroids in id order and returns the first one similar to
    /// `elements`.
    pub fn find(&mut self, elements: &[String]) -> Option<ClusterId> {
        for (id, centroid) in &self.centroids {
            self.comparisons += 1;
            let common = overlap_count(elements, centroid);
            let union = elements.len() + centroid.len() - common;
            if self.theta.is_met(common as u64, union as u64) {
                return Some(*id);
            }
        }
        None
    }
}

impl Clusterer for CentroidEngine {
    fn process(&mut self, sig: Signature) -> Result<ClusterAssignment, EngineError> {
        sig.check_size(&self.sizes)?;
        let cluster_id = match self.find(sig.elements()) {
            Some(id) => id,
            None => {
                let id = self
                    .centroids
                    .last()
                    .map_or(ClusterId::FIRST, |(last, _)| last.next());
                self.centroids.push((id, sig.elements().to_vec()));
                id
            }
        };
        Ok(ClusterAssignment {
            cluster_id,
            ordinal: sig.ordinal(),
            elements: sig.into_elements(),
        })
    }

    fn cluster_count(&self) -> u64 {
        self.centroids.len() as u64
    }

    fn work(&self) -> u64 {
        self.comparisons
    }
}
