use std::cmp::Ordering;

use ndarray::Array2;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{fmt_f64, write_table};
use crate::error::{DidmError, Result};
use crate::graph_model::{Dataset, GraphSignal};
use crate::metric::pairwise_distance_matrix;

const MAX_REDRAWS: usize = 1000;

/// Per-split 1-NN accuracies (fractions in `[0, 1]`) with their mean and population
/// standard deviation.
#[derive(Debug, Clone, PartialEq)]
pub struct KnnReport {
    pub accuracies: Vec<f64>,
    pub mean: f64,
    pub std: f64,
    /// Splits that were re-drawn because a class was missing from training.
    pub redraws: usize,
}

impl KnnReport {
    pub fn write_csv(&self, path: &std::path::Path, config: &str) -> Result<()> {
        let comments = vec![
            format!("mean_accuracy: {}", fmt_f64(self.mean)),
            format!("std_accuracy: {}", fmt_f64(self.std)),
            format!("redraws: {}", self.redraws),
        ];
        let rows = self.accuracies.iter().enumerate().map(|(s, a)| format!("{s},{}", fmt_f64(*a)));
        write_table(path, config, &comments, "split,accuracy", rows)
    }
}

fn content_key(g: &GraphSignal) -> (usize, Vec<u64>, Vec<u64>) {
    (
        g.node_count(),
        g.adjacency().iter().map(|v| v.to_bits()).collect(),
        g.attributes().iter().map(|v| v.to_bits()).collect(),
    )
}

/// Order of the dataset's graphs by content (size, adjacency, attributes, label). Splits
/// drawn over this order do not depend on how the dataset file happened to list them.
pub fn canonical_order(ds: &Dataset) -> Vec<usize> {
    let keys: Vec<_> = ds.graphs.iter().map(content_key).collect();
    let mut order: Vec<usize> = (0..ds.len()).collect();
    order.sort_by(|&a, &b| keys[a].cmp(&keys[b]).then(ds.labels[a].cmp(&ds.labels[b])));
    order
}

/// Computes the pairwise matrix once in canonical order, then runs
/// [`knn_from_distances`].
pub fn knn_experiment(ds: &Dataset, depth: usize, splits: usize, train_frac: f64, seed: u64) -> Result<KnnReport> {
    let order = canonical_order(ds);
    let graphs: Vec<GraphSignal> = order.iter().map(|&i| ds.graphs[i].clone()).collect();
    let labels: Vec<i64> = order.iter().map(|&i| ds.labels[i]).collect();
    let m = pairwise_distance_matrix(&graphs, depth)?;
    knn_from_distances(&m.distances, &labels, splits, train_frac, seed)
}

/// 1-NN classification over `splits` seeded random train/test partitions.
///
/// A test item takes the label of its nearest training item; ties go to the training
/// item with the smallest index. A split whose training part misses a class is drawn
/// again.
pub fn knn_from_distances(
    distances: &Array2<f64>,
    labels: &[i64],
    splits: usize,
    train_frac: f64,
    seed: u64,
) -> Result<KnnReport> {
    let n = labels.len();
    if distances.dim() != (n, n) {
        return Err(DidmError::DimensionMismatch(format!(
            "{:?} distance matrix for {n} labels",
            distances.dim()
        )));
    }
    let mut classes = labels.to_vec();
    classes.sort_unstable();
    classes.dedup();
    if classes.len() < 2 {
        return Err(DidmError::InvalidArgument("1-NN needs at least two classes".into()));
    }
    if !(train_frac > 0.0 && train_frac < 1.0) || splits == 0 {
        return Err(DidmError::InvalidArgument(format!(
            "need splits > 0 and train fraction in (0, 1), got {splits} and {train_frac}"
        )));
    }
    let n_train = ((train_frac * n as f64).round() as usize).clamp(1, n - 1);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut accuracies = Vec::with_capacity(splits);
    let mut redraws = 0;
    for split in 0..splits {
        let mut perm: Vec<usize> = (0..n).collect();
        let mut attempts = 0;
        loop {
            perm.shuffle(&mut rng);
            let mut seen: Vec<i64> = perm[..n_train].iter().map(|&i| labels[i]).collect();
            seen.sort_unstable();
            seen.dedup();
            if seen.len() == classes.len() {
                break;
            }
            attempts += 1;
            redraws += 1;
            log::warn!("split {split}: training part misses a class, drawing again");
            if attempts >= MAX_REDRAWS {
                return Err(DidmError::InvalidArgument(format!(
                    "no split with every class in training after {MAX_REDRAWS} draws"
                )));
            }
        }
        let mut train = perm[..n_train].to_vec();
        train.sort_unstable();
        let test = &perm[n_train..];
        let correct = test
            .iter()
            .filter(|&&t| {
                let nearest = train
                    .iter()
                    .copied()
                    .min_by(|&a, &b| {
                        distances[[t, a]]
                            .partial_cmp(&distances[[t, b]])
                            .unwrap_or(Ordering::Equal)
                            .then(a.cmp(&b))
                    })
                    .expect("nonempty training set");
                labels[nearest] == labels[t]
            })
            .count();
        accuracies.push(correct as f64 / test.len() as f64);
    }
    let mean = accuracies.iter().sum::<f64>() / splits as f64;
    let std = (accuracies.iter().map(|a| (a - mean) * (a - mean)).sum::<f64>() / splits as f64).sqrt();
    Ok(KnnReport { accuracies, mean, std, redraws })
}
