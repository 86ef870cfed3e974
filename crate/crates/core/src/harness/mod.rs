//! Experiment drivers. Each driver returns an in-memory report that can be written
//! as CSV; [`ExperimentConfig`] ties a driver to its inputs and output directory.

mod config;
mod correlate;
mod knn;
mod lipschitz;
mod sbm;

pub use config::{AttributeMode, DatasetSource, ExperimentConfig, ExperimentKind, ExperimentOutcome, ModelConfig, Seeds};
pub use correlate::{dataset_correlation_experiment, CorrelationReport, CorrelationRow};
pub use knn::{canonical_order, knn_experiment, knn_from_distances, KnnReport};
pub use lipschitz::{lipschitz_check_experiment, random_models, LipschitzReport, LipschitzRow, LIPSCHITZ_SLACK};
pub use sbm::{sbm_correlation_experiment, sbm_sweep, SbmCorrelationConfig, SbmReport, SbmRow, SignalMode};

use std::fs;
use std::path::Path;

use crate::error::{DidmError, Result};

/// Pearson correlation. `NaN` when either sample has zero variance.
pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    sxy / (sxx * syy).sqrt()
}

pub(crate) fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes `# config:` plus any extra comment lines, a header and the rows.
pub(crate) fn write_table(
    path: &Path,
    config: &str,
    comments: &[String],
    header: &str,
    rows: impl IntoIterator<Item = String>,
) -> Result<()> {
    let mut out = format!("# config: {config}\n");
    for c in comments {
        out.push_str(&format!("# {c}\n"));
    }
    out.push_str(header);
    out.push('\n');
    for r in rows {
        out.push_str(&r);
        out.push('\n');
    }
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| DidmError::io(dir, e))?;
    }
    fs::write(path, out).map_err(|e| DidmError::io(path, e))
}
