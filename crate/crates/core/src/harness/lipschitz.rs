use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{fmt_f64, write_table};
use crate::error::{DidmError, Result};
use crate::graph_model::Dataset;
use crate::metric::{didm_distance, thread_pool};
use crate::mpnn::{init_gc_meanpool, init_gin_meanpool, lipschitz_constants, output_distance, MpnnModel};

/// Absolute slack allowed on `‖out(g) - out(h)‖ ≤ C·δ(g, h)`.
pub const LIPSCHITZ_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LipschitzRow {
    pub left: usize,
    pub right: usize,
    pub delta: f64,
    /// Largest output distance over all models.
    pub max_output_distance: f64,
    /// Largest Lipschitz constant over all models.
    pub max_c_model: f64,
    /// Models whose own bound failed on this pair.
    pub violations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LipschitzReport {
    pub rows: Vec<LipschitzRow>,
    pub violations: usize,
    pub models: usize,
}

impl LipschitzReport {
    pub fn write_csv(&self, path: &std::path::Path, config: &str) -> Result<()> {
        let comments = vec![format!("models: {}", self.models), format!("violations: {}", self.violations)];
        let rows = self.rows.iter().map(|r| {
            format!(
                "{},{},{},{},{},{}",
                r.left,
                r.right,
                fmt_f64(r.delta),
                fmt_f64(r.max_output_distance),
                fmt_f64(r.max_c_model),
                r.violations
            )
        });
        write_table(
            path,
            config,
            &comments,
            "left,right,delta,max_output_distance,max_c_model,violations",
            rows,
        )
    }
}

/// Random models alternating between the GIN and GC families, seeds `seed, seed + 1, …`.
pub fn random_models(count: usize, depth: usize, hidden: usize, attr_dim: usize, seed: u64) -> Result<Vec<MpnnModel>> {
    (0..count)
        .map(|k| {
            let s = seed.wrapping_add(k as u64);
            if k % 2 == 0 {
                init_gin_meanpool(depth, hidden, attr_dim, hidden, s)
            } else {
                init_gc_meanpool(depth, hidden, attr_dim, hidden, s)
            }
        })
        .collect()
}

/// Checks the Lipschitz bound of `model_count` random models on `pairs` seeded random
/// graph pairs. The attribute radius is the dataset's largest attribute norm.
pub fn lipschitz_check_experiment(
    ds: &Dataset,
    depth: usize,
    model_count: usize,
    pairs: usize,
    hidden: usize,
    seed: u64,
) -> Result<LipschitzReport> {
    if ds.is_empty() {
        return Err(DidmError::InvalidArgument("empty dataset".into()));
    }
    let models = random_models(model_count, depth, hidden, ds.attr_dim, seed)?;
    let r = ds.max_attribute_norm().max(f64::MIN_POSITIVE);
    let constants: Vec<f64> = models
        .iter()
        .map(|m| lipschitz_constants(m, r).map(|c| c.c_model))
        .collect::<Result<_>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let chosen: Vec<(usize, usize)> = (0..pairs)
        .map(|_| (rng.random_range(0..ds.len()), rng.random_range(0..ds.len())))
        .collect();

    let rows: Vec<LipschitzRow> = thread_pool()?.install(|| {
        chosen
            .par_iter()
            .map(|&(left, right)| {
                let (g, h) = (&ds.graphs[left], &ds.graphs[right]);
                let delta = didm_distance(g, h, depth)?;
                let mut row = LipschitzRow { left, right, delta, max_output_distance: 0.0, max_c_model: 0.0, violations: 0 };
                for (m, &c) in models.iter().zip(&constants) {
                    let d = output_distance(&m.output(g)?, &m.output(h)?);
                    row.max_output_distance = row.max_output_distance.max(d);
                    row.max_c_model = row.max_c_model.max(c);
                    if d > c * delta + LIPSCHITZ_SLACK {
                        row.violations += 1;
                    }
                }
                Ok(row)
            })
            .collect::<Result<_>>()
    })?;
    let violations = rows.iter().map(|r| r.violations).sum();
    Ok(LipschitzReport { rows, violations, models: model_count })
}
