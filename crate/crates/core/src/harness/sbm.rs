use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{fmt_f64, pearson, write_table};
use crate::error::{DidmError, Result};
use crate::graph_model::{generate_sbm, GraphSignal, SbmSpec};
use crate::metric::{didm_distance, thread_pool};
use crate::mpnn::{output_distance, Family, ModelSpec};

/// Node signal placed on the sampled block-model graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignalMode {
    /// Every node carries `1.0`.
    Constant,
    /// Each block carries its own value drawn uniformly from `[0, 1]`.
    Community,
    /// Node values drawn from `N(1, σ_i)` with `σ_i` shrinking linearly to zero at the anchor.
    Gaussian,
}

impl std::str::FromStr for SignalMode {
    type Err = DidmError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "constant" => Ok(SignalMode::Constant),
            "community" => Ok(SignalMode::Community),
            "gaussian" => Ok(SignalMode::Gaussian),
            other => Err(DidmError::InvalidArgument(format!("unknown signal mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SbmCorrelationConfig {
    pub signal: SignalMode,
    pub family: Family,
    pub hidden: usize,
    /// Number of message-passing layers of the model.
    pub layers: usize,
    /// Depth of the DIDM distance.
    pub depth: usize,
    pub model_seed: u64,
    pub graph_seed: u64,
    pub block_sizes: Vec<usize>,
    pub intra_p: f64,
    pub q_min: f64,
    pub q_max: f64,
    pub graphs: usize,
}

impl Default for SbmCorrelationConfig {
    fn default() -> Self {
        SbmCorrelationConfig {
            signal: SignalMode::Constant,
            family: Family::GinMeanpool,
            hidden: 16,
            layers: 2,
            depth: 2,
            model_seed: 0,
            graph_seed: 0,
            block_sizes: vec![15, 15],
            intra_p: 0.5,
            q_min: 0.1,
            q_max: 0.5,
            graphs: 50,
        }
    }
}

impl SbmCorrelationConfig {
    /// `q_i` for `i = 0..graphs`, from `q_min` to `q_max` inclusive.
    pub fn inter_probabilities(&self) -> Vec<f64> {
        let last = (self.graphs.max(2) - 1) as f64;
        (0..self.graphs)
            .map(|i| self.q_min + (self.q_max - self.q_min) * i as f64 / last)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SbmRow {
    pub i: usize,
    pub q: f64,
    pub delta: f64,
    pub output_distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SbmReport {
    pub rows: Vec<SbmRow>,
    pub pearson: f64,
}

impl SbmReport {
    pub fn write_csv(&self, path: &std::path::Path, config: &str) -> Result<()> {
        let comments = vec![
            format!("pearson_r: {}", fmt_f64(self.pearson)),
            "pearson threshold 0.8 is a calibration choice, not a reported figure".to_string(),
        ];
        let rows = self.rows.iter().map(|r| {
            format!("{},{},{},{}", r.i, fmt_f64(r.q), fmt_f64(r.delta), fmt_f64(r.output_distance))
        });
        write_table(path, config, &comments, "i,q,delta,output_distance", rows)
    }
}

/// The graphs `G_0 … G_{n-1}` of the sweep with their signals attached.
///
/// Graph `i` uses seed `graph_seed + i`; its signal is drawn from a separate stream
/// of the same seed.
pub fn sbm_sweep(cfg: &SbmCorrelationConfig) -> Result<Vec<GraphSignal>> {
    if cfg.graphs < 2 {
        return Err(DidmError::InvalidArgument("the sweep needs at least two graphs".into()));
    }
    let last = (cfg.graphs - 1) as f64;
    cfg.inter_probabilities()
        .into_iter()
        .enumerate()
        .map(|(i, q)| {
            let seed = cfg.graph_seed.wrapping_add(i as u64);
            let spec = SbmSpec { block_sizes: cfg.block_sizes.clone(), intra_p: cfg.intra_p, inter_q: q, seed };
            let g = generate_sbm(&spec)?;
            let blocks = spec.block_assignment();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(1);
            let values: Vec<f64> = match cfg.signal {
                SignalMode::Constant => vec![1.0; blocks.len()],
                SignalMode::Community => {
                    let per_block: Vec<f64> = cfg.block_sizes.iter().map(|_| rng.random::<f64>()).collect();
                    blocks.iter().map(|&b| per_block[b]).collect()
                }
                SignalMode::Gaussian => {
                    let sigma = (last - i as f64) / last;
                    let normal = Normal::new(1.0, sigma).expect("finite nonnegative sigma");
                    blocks.iter().map(|_| normal.sample(&mut rng)).collect()
                }
            };
            g.with_attributes(Array2::from_shape_vec((values.len(), 1), values).expect("one column"))
        })
        .collect()
}

/// Distances of every sweep graph to the last one (the anchor), both in DIDM and in
/// the output space of one seeded model.
pub fn sbm_correlation_experiment(cfg: &SbmCorrelationConfig) -> Result<SbmReport> {
    let graphs = sbm_sweep(cfg)?;
    let model = ModelSpec {
        family: cfg.family,
        layers: cfg.layers,
        hidden: cfg.hidden,
        attr_dim: 1,
        out_dim: cfg.hidden,
        seed: cfg.model_seed,
    }
    .build()?;
    let anchor = graphs.last().unwrap();
    let anchor_out = model.output(anchor)?;
    let qs = cfg.inter_probabilities();
    let rows: Vec<SbmRow> = thread_pool()?.install(|| {
        graphs
            .par_iter()
            .enumerate()
            .map(|(i, g)| {
                Ok(SbmRow {
                    i,
                    q: qs[i],
                    delta: didm_distance(g, anchor, cfg.depth)?,
                    output_distance: output_distance(&model.output(g)?, &anchor_out),
                })
            })
            .collect::<Result<_>>()
    })?;
    let x: Vec<f64> = rows.iter().map(|r| r.delta).collect();
    let y: Vec<f64> = rows.iter().map(|r| r.output_distance).collect();
    Ok(SbmReport { pearson: pearson(&x, &y), rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(signal: SignalMode) -> SbmCorrelationConfig {
        SbmCorrelationConfig { signal, block_sizes: vec![4, 4], graphs: 5, ..Default::default() }
    }

    #[test]
    fn probabilities_span_the_range() {
        let q = SbmCorrelationConfig::default().inter_probabilities();
        assert_eq!(q.len(), 50);
        assert_eq!(q[0], 0.1);
        assert!((q[49] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn anchor_row_is_zero() {
        let r = sbm_correlation_experiment(&small(SignalMode::Community)).unwrap();
        let last = r.rows.last().unwrap();
        assert_eq!((last.delta, last.output_distance), (0.0, 0.0));
    }

    #[test]
    fn signals() {
        let c = sbm_sweep(&small(SignalMode::Constant)).unwrap();
        assert!(c.iter().all(|g| g.attributes().iter().all(|&v| v == 1.0)));
        let m = sbm_sweep(&small(SignalMode::Community)).unwrap();
        for g in &m {
            let a = g.attributes();
            assert!(a[[0, 0]] == a[[3, 0]] && a[[4, 0]] == a[[7, 0]]);
        }
        let s = sbm_sweep(&small(SignalMode::Gaussian)).unwrap();
        assert!(s.last().unwrap().attributes().iter().all(|&v| v == 1.0));
        assert!(s[0].attributes().iter().any(|&v| v != 1.0));
    }

    #[test]
    fn reproducible() {
        let cfg = small(SignalMode::Gaussian);
        assert_eq!(sbm_correlation_experiment(&cfg).unwrap(), sbm_correlation_experiment(&cfg).unwrap());
    }
}
