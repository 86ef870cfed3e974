use std::time::{Duration, Instant};

use ndarray::Array2;
use rayon::prelude::*;

use super::{distance_from_top, refine, initial_cost_matrix, NeighborMeasure};
use crate::error::{DidmError, Result};
use crate::graph_model::GraphSignal;

/// Symmetric matrix of graph distances plus how long it took.
#[derive(Debug, Clone)]
pub struct DistanceMatrix {
    pub distances: Array2<f64>,
    pub timing: TimingReport,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimingReport {
    pub pairs: usize,
    pub threads: usize,
    pub wall: Duration,
}

impl TimingReport {
    pub fn mean_per_pair(&self) -> Duration {
        if self.pairs == 0 {
            Duration::ZERO
        } else {
            self.wall / self.pairs as u32
        }
    }
}

/// Worker pool sized by `DIDM_THREADS` when set, otherwise by rayon's default.
pub fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = std::env::var("DIDM_THREADS") {
        let n: usize = raw
            .trim()
            .parse()
            .map_err(|_| DidmError::InvalidArgument(format!("DIDM_THREADS={raw:?} is not a thread count")))?;
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| DidmError::InvalidArgument(format!("cannot build thread pool: {e}")))
}

fn pair_distance(
    (g, ng): (&GraphSignal, &[NeighborMeasure]),
    (h, nh): (&GraphSignal, &[NeighborMeasure]),
    depth: usize,
) -> Result<f64> {
    let mut cost = initial_cost_matrix(g, h)?;
    for level in 1..=depth {
        cost = refine(cost.view(), ng, nh, level)?;
    }
    distance_from_top(cost.view())
}

/// All pairwise distances over `graphs`. The diagonal is zero and only the upper
/// triangle is computed. Each entry is computed by a single thread, so the result is
/// identical for any pool size.
pub fn pairwise_distance_matrix(graphs: &[GraphSignal], depth: usize) -> Result<DistanceMatrix> {
    let start = Instant::now();
    let n = graphs.len();
    let neighbors: Vec<Vec<NeighborMeasure>> = graphs.iter().map(NeighborMeasure::all).collect();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let pool = thread_pool()?;
    let values: Vec<f64> = pool.install(|| {
        pairs
            .par_iter()
            .map(|&(i, j)| {
                pair_distance((&graphs[i], &neighbors[i]), (&graphs[j], &neighbors[j]), depth)
                    .map_err(|e| DidmError::InvalidArgument(format!("graphs {i} and {j}: {e}")))
            })
            .collect::<Result<_>>()
    })?;
    let mut distances = Array2::zeros((n, n));
    for (&(i, j), &d) in pairs.iter().zip(&values) {
        distances[[i, j]] = d;
        distances[[j, i]] = d;
    }
    let timing = TimingReport { pairs: pairs.len(), threads: pool.current_num_threads(), wall: start.elapsed() };
    log::info!(
        "{} pairs on {} threads in {:.3?} ({:.3?} per pair)",
        timing.pairs,
        timing.threads,
        timing.wall,
        timing.mean_per_pair()
    );
    Ok(DistanceMatrix { distances, timing })
}
