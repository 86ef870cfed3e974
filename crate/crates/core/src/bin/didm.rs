use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use didm::graph_model::{generate_sbm, load_graph_json, save_graph_json, SbmSpec};
use didm::harness::{
    AttributeMode, DatasetSource, ExperimentConfig, ExperimentKind, ExperimentOutcome, ModelConfig, SignalMode,
};
use didm::metric::{didm_distance, pairwise_distance_matrix, write_distance_csv, DEFAULT_DEPTH};
use didm::mpnn::Family;

#[derive(Parser)]
#[command(name = "didm", version, about = "DIDM mover's distance and MPNN experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct DatasetArgs {
    /// Directory holding the TU-format files (or a subdirectory named after the dataset)
    #[arg(long)]
    tudataset: PathBuf,
    #[arg(long)]
    name: String,
    /// Use raw node degrees as attributes
    #[arg(long)]
    degrees: bool,
    /// Use node degree divided by node count as attributes
    #[arg(long, conflicts_with = "degrees")]
    normalize_degrees: bool,
}

impl DatasetArgs {
    fn source(&self) -> DatasetSource {
        let attributes = if self.degrees {
            AttributeMode::Degrees
        } else if self.normalize_degrees {
            AttributeMode::NormalizedDegrees
        } else {
            AttributeMode::Native
        };
        DatasetSource { root: self.tudataset.clone(), name: self.name.clone(), attributes }
    }
}

#[derive(Args)]
struct ModelArgs {
    /// gin or gc
    #[arg(long, default_value = "gin")]
    model: Family,
    #[arg(long, default_value_t = 16)]
    hidden: usize,
    #[arg(long, default_value_t = 2)]
    layers: usize,
}

impl ModelArgs {
    fn config(&self) -> ModelConfig {
        ModelConfig { family: self.model, hidden: self.hidden, layers: self.layers }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Distance between two graphs stored as JSON
    Dist {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
    },
    /// Pairwise distance matrix of a dataset, written as CSV
    Pairwise {
        #[command(flatten)]
        data: DatasetArgs,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// 1-NN classification accuracy over random splits
    Knn {
        #[command(flatten)]
        data: DatasetArgs,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
        #[arg(long, default_value_t = 10)]
        splits: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Distance vs output-distance correlation on a block-model sweep
    SbmCorrelate {
        /// constant, community or gaussian
        #[arg(long, default_value = "constant")]
        signal: SignalMode,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
        /// Model seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        graph_seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Distance vs output-distance correlation against one dataset graph
    DatasetCorrelate {
        #[command(flatten)]
        data: DatasetArgs,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 0)]
        anchor: usize,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Checks the Lipschitz bound of random models on random graph pairs
    LipschitzCheck {
        #[command(flatten)]
        data: DatasetArgs,
        #[arg(long, default_value_t = 100)]
        models: usize,
        #[arg(long, default_value_t = 100)]
        pairs: usize,
        #[arg(long, default_value_t = 16)]
        hidden: usize,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Samples a block-model graph and writes it as JSON
    GenSbm {
        /// Comma-separated block sizes
        #[arg(long, value_delimiter = ',', default_value = "15,15")]
        blocks: Vec<usize>,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 0.3)]
        q: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn run(cmd: Command) -> didm::Result<ExitCode> {
    let cfg = match cmd {
        Command::Dist { left, right, depth } => {
            let d = didm_distance(&load_graph_json(left)?, &load_graph_json(right)?, depth)?;
            println!("{d:.16e}");
            return Ok(ExitCode::SUCCESS);
        }
        Command::Pairwise { data, depth, out } => {
            let ds = data.source().load()?;
            let m = pairwise_distance_matrix(&ds.graphs, depth)?;
            let config = serde_json::json!({
                "dataset": data.name, "depth": depth, "attributes": data.source().attributes,
            });
            write_distance_csv(&out, &m.distances, &config.to_string())?;
            eprintln!(
                "{} pairs on {} threads in {:.2?} ({:.2?} per pair)",
                m.timing.pairs,
                m.timing.threads,
                m.timing.wall,
                m.timing.mean_per_pair()
            );
            return Ok(ExitCode::SUCCESS);
        }
        Command::GenSbm { blocks, p, q, seed, out } => {
            let g = generate_sbm(&SbmSpec { block_sizes: blocks, intra_p: p, inter_q: q, seed })?;
            save_graph_json(out, &g)?;
            return Ok(ExitCode::SUCCESS);
        }
        Command::Knn { data, depth, splits, seed, out } => {
            let mut c = ExperimentConfig::new(ExperimentKind::Knn);
            c.dataset = Some(data.source());
            c.depth = depth;
            c.splits = splits;
            c.seeds.split = seed;
            c.output_dir = out;
            c
        }
        Command::SbmCorrelate { signal, model, depth, seed, graph_seed, out } => {
            let mut c = ExperimentConfig::new(ExperimentKind::SbmCorrelate);
            c.sbm = Some(didm::harness::SbmCorrelationConfig { signal, ..Default::default() });
            c.model = model.config();
            c.depth = depth;
            c.seeds.model = seed;
            c.seeds.graph = graph_seed;
            c.output_dir = out;
            c
        }
        Command::DatasetCorrelate { data, model, anchor, depth, seed, out } => {
            let mut c = ExperimentConfig::new(ExperimentKind::DatasetCorrelate);
            c.dataset = Some(data.source());
            c.model = model.config();
            c.anchor = anchor;
            c.depth = depth;
            c.seeds.model = seed;
            c.output_dir = out;
            c
        }
        Command::LipschitzCheck { data, models, pairs, hidden, depth, seed, out } => {
            let mut c = ExperimentConfig::new(ExperimentKind::LipschitzCheck);
            c.dataset = Some(data.source());
            c.models = models;
            c.pairs = pairs;
            c.model.hidden = hidden;
            c.depth = depth;
            c.seeds.model = seed;
            c.output_dir = out;
            c
        }
    };
    match cfg.run()? {
        ExperimentOutcome::Knn(r) => {
            println!("accuracy {:.2} ± {:.2} %", 100.0 * r.mean, 100.0 * r.std);
        }
        ExperimentOutcome::Sbm(r) => {
            for row in &r.rows {
                println!("{:2} q={:.4} delta={:.6} out={:.6}", row.i, row.q, row.delta, row.output_distance);
            }
            println!("pearson r = {:.4}", r.pearson);
        }
        ExperimentOutcome::Correlation(r) => println!("pearson r = {:.4} over {} graphs", r.pearson, r.rows.len()),
        ExperimentOutcome::Lipschitz(r) => {
            println!("{} pairs x {} models: {} violations", r.rows.len(), r.models, r.violations);
            if r.violations > 0 {
                return Ok(ExitCode::from(2));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse().command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
