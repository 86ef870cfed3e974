//! Sweeps the inter-block probability of a two-block model and correlates distance
//! to the last graph with a random model's output distance.
//!
//! ```text
//! cargo run --release --example sbm_correlation -- [constant|community|gaussian] [gin|gc]
//! ```

use didm::harness::{sbm_correlation_experiment, SbmCorrelationConfig};

fn main() -> didm::Result<()> {
    let mut args = std::env::args().skip(1);
    let mut cfg = SbmCorrelationConfig::default();
    if let Some(s) = args.next() {
        cfg.signal = s.parse()?;
    }
    if let Some(m) = args.next() {
        cfg.family = m.parse()?;
    }
    let report = sbm_correlation_experiment(&cfg)?;
    println!("{:>3} {:>6} {:>10} {:>12}", "i", "q", "delta", "out dist");
    for row in report.rows.iter().step_by(5) {
        println!("{:>3} {:>6.3} {:>10.5} {:>12.5e}", row.i, row.q, row.delta, row.output_distance);
    }
    println!("Pearson r = {:.4}", report.pearson);
    Ok(())
}
