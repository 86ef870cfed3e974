use std::fs;
use std::io::Write;
use std::path::Path;

use ndarray::Array2;

use crate::error::{DidmError, Result};

/// Writes a square matrix as CSV: a `# config:` comment line, a header row of graph
/// indices, then one row per graph with 17 significant digits.
pub fn write_distance_csv(path: &Path, distances: &Array2<f64>, config: &str) -> Result<()> {
    let mut out = String::new();
    out.push_str(&format!("# config: {config}\n"));
    let header: Vec<String> = (0..distances.ncols()).map(|j| j.to_string()).collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in distances.rows() {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    let mut f = fs::File::create(path).map_err(|e| DidmError::io(path, e))?;
    f.write_all(out.as_bytes()).map_err(|e| DidmError::io(path, e))
}

/// Reads a matrix written by [`write_distance_csv`]. Comment lines and the index
/// header are skipped.
pub fn read_distance_csv(path: &Path) -> Result<Array2<f64>> {
    let text = fs::read_to_string(path).map_err(|e| DidmError::io(path, e))?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut header_seen = false;
    for (lineno, line) in text.lines().enumerate() {
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        if !header_seen {
            header_seen = true;
            continue;
        }
        let row = line
            .split(',')
            .map(|c| c.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| DidmError::parse(format!("{}:{}", path.display(), lineno + 1), e.to_string()))?;
        rows.push(row);
    }
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(DidmError::DimensionMismatch(format!("{} is not a square matrix", path.display())));
    }
    Ok(Array2::from_shape_vec((n, n), rows.concat()).expect("checked shape"))
}
