//! Random models against random MUTAG pairs: the largest output gap next to the
//! bound it must respect.

use std::path::Path;

use didm::graph_model::load_tudataset;
use didm::harness::lipschitz_check_experiment;

fn main() -> didm::Result<()> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data");
    let ds = load_tudataset(&root, "MUTAG")?.with_degree_attributes(false)?;
    let report = lipschitz_check_experiment(&ds, 2, 20, 10, 16, 0)?;
    for row in &report.rows {
        println!(
            "graphs {:>3} {:>3}: δ = {:.4}, max |Δout| = {:.3e}, bound = {:.3e}",
            row.left,
            row.right,
            row.delta,
            row.max_output_distance,
            row.max_c_model * row.delta
        );
    }
    println!("{} models, {} violations", report.models, report.violations);
    Ok(())
}
