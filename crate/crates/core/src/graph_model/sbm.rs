use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::GraphSignal;
use crate::error::{DidmError, Result};

/// Parameters of a stochastic block model with one intra- and one inter-block probability.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SbmSpec {
    pub block_sizes: Vec<usize>,
    pub intra_p: f64,
    pub inter_q: f64,
    pub seed: u64,
}

impl SbmSpec {
    pub fn validate(&self) -> Result<()> {
        if self.block_sizes.is_empty() || self.block_sizes.contains(&0) {
            return Err(DidmError::InvalidArgument(
                "SBM needs at least one block and every block must be non-empty".into(),
            ));
        }
        for (name, p) in [("intra_p", self.intra_p), ("inter_q", self.inter_q)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(DidmError::InvalidArgument(format!("{name} = {p} outside [0, 1]")));
            }
        }
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.block_sizes.iter().sum()
    }

    /// Block index of every node; blocks occupy consecutive node ranges.
    pub fn block_assignment(&self) -> Vec<usize> {
        self.block_sizes
            .iter()
            .enumerate()
            .flat_map(|(b, &s)| std::iter::repeat_n(b, s))
            .collect()
    }
}

/// Samples a simple undirected graph (no self-loops) from the block model.
///
/// Pairs `(i, j)`, `i < j`, are visited in row-major order and each draws one Bernoulli
/// from a ChaCha8 stream seeded with `spec.seed`, so the output depends only on `spec`.
/// The returned graph has zero-dimensional attributes.
pub fn generate_sbm(spec: &SbmSpec) -> Result<GraphSignal> {
    spec.validate()?;
    let blocks = spec.block_assignment();
    let n = blocks.len();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut adjacency = Array2::zeros((n, n));
    for i in 0..n {
        for j in (i + 1)..n {
            let p = if blocks[i] == blocks[j] {
                spec.intra_p
            } else {
                spec.inter_q
            };
            if rng.random_bool(p) {
                adjacency[[i, j]] = 1.0;
                adjacency[[j, i]] = 1.0;
            }
        }
    }
    GraphSignal::new(adjacency, Array2::zeros((n, 0)))
}
