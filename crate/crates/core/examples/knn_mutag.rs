//! 1-NN classification on MUTAG from the DIDM distance matrix.
//!
//! ```text
//! cargo run --release --example knn_mutag -- [raw|normalized|native] [seed]
//! ```

use std::path::Path;

use didm::graph_model::load_tudataset;
use didm::harness::knn_experiment;

fn main() -> didm::Result<()> {
    env_logger::init();
    let mut args = std::env::args().skip(1);
    let mode = args.next().unwrap_or_else(|| "raw".into());
    let seed: u64 = args.next().map_or(0, |s| s.parse().expect("seed"));

    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data");
    let ds = load_tudataset(&root, "MUTAG")?;
    let ds = match mode.as_str() {
        "raw" => ds.with_degree_attributes(false)?,
        "normalized" => ds.with_degree_attributes(true)?,
        _ => ds,
    };
    let report = knn_experiment(&ds, 2, 10, 0.9, seed)?;
    for (s, a) in report.accuracies.iter().enumerate() {
        println!("split {s}: {:.2}%", 100.0 * a);
    }
    println!("{mode} attributes, seed {seed}: {:.2}% ± {:.2}%", 100.0 * report.mean, 100.0 * report.std);
    Ok(())
}
