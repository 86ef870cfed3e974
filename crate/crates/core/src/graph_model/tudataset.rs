use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use ndarray::Array2;

use super::{Dataset, GraphSignal};
use crate::error::{DidmError, Result};

fn dataset_file(root: &Path, name: &str, suffix: &str) -> PathBuf {
    root.join(format!("{name}_{suffix}.txt"))
}

fn read_required(path: &Path) -> Result<String> {
    if !path.is_file() {
        return Err(DidmError::MissingFile(path.to_path_buf()));
    }
    fs::read_to_string(path).map_err(|e| DidmError::io(path, e))
}

fn read_optional(path: &Path) -> Result<Option<String>> {
    if path.is_file() {
        fs::read_to_string(path).map(Some).map_err(|e| DidmError::io(path, e))
    } else {
        Ok(None)
    }
}

/// Non-empty lines paired with their 1-based line number.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn parse_fields<T: std::str::FromStr>(path: &Path, line_no: usize, line: &str) -> Result<Vec<T>> {
    line.split(',')
        .map(|f| {
            f.trim().parse::<T>().map_err(|_| {
                DidmError::parse(
                    format!("{}:{line_no}", path.display()),
                    format!("cannot parse field {:?}", f.trim()),
                )
            })
        })
        .collect()
}

fn parse_column<T: std::str::FromStr>(path: &Path, text: &str) -> Result<Vec<T>> {
    lines(text)
        .map(|(no, l)| {
            let mut v = parse_fields::<T>(path, no, l)?;
            if v.len() != 1 {
                return Err(DidmError::parse(
                    format!("{}:{no}", path.display()),
                    "expected a single value",
                ));
            }
            Ok(v.remove(0))
        })
        .collect()
}

/// Loads a dataset stored in the TU benchmark text format.
///
/// Required files are `<name>_A.txt`, `<name>_graph_indicator.txt` and
/// `<name>_graph_labels.txt`. Node labels are one-hot encoded over the sorted set of
/// distinct labels; node attributes, when present, come first and the one-hot block
/// is appended. Without either file the graphs carry zero-dimensional attributes.
///
/// The files are looked up in `root/<name>/` when that directory exists, otherwise
/// directly in `root`.
pub fn load_tudataset(root: impl AsRef<Path>, name: &str) -> Result<Dataset> {
    let nested = root.as_ref().join(name);
    let root = if nested.is_dir() { nested.as_path() } else { root.as_ref() };
    let a_path = dataset_file(root, name, "A");
    let ind_path = dataset_file(root, name, "graph_indicator");
    let lab_path = dataset_file(root, name, "graph_labels");
    let a_text = read_required(&a_path)?;
    let ind_text = read_required(&ind_path)?;
    let lab_text = read_required(&lab_path)?;

    let indicator: Vec<usize> = parse_column(&ind_path, &ind_text)?;
    let graph_labels: Vec<i64> = parse_column(&lab_path, &lab_text)?;
    let graph_count = graph_labels.len();
    let node_total = indicator.len();

    // global node (0-based) -> (graph, local index)
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); graph_count];
    let mut local = vec![0usize; node_total];
    for (v, &gid) in indicator.iter().enumerate() {
        if gid == 0 || gid > graph_count {
            return Err(DidmError::parse(
                format!("{}:{}", ind_path.display(), v + 1),
                format!("graph id {gid} outside 1..={graph_count}"),
            ));
        }
        local[v] = members[gid - 1].len();
        members[gid - 1].push(v);
    }
    if let Some(g) = members.iter().position(Vec::is_empty) {
        return Err(DidmError::parse(
            ind_path.display().to_string(),
            format!("graph {} has no nodes", g + 1),
        ));
    }

    let mut directed: Vec<Array2<bool>> = members
        .iter()
        .map(|m| Array2::from_elem((m.len(), m.len()), false))
        .collect();
    for (no, line) in lines(&a_text) {
        let ends: Vec<usize> = parse_fields(&a_path, no, line)?;
        let loc = || format!("{}:{no}", a_path.display());
        let [i, j] = ends[..] else {
            return Err(DidmError::parse(loc(), "expected `row, col`"));
        };
        if i == 0 || j == 0 || i > node_total || j > node_total {
            return Err(DidmError::parse(loc(), format!("node id out of 1..={node_total}")));
        }
        let (i, j) = (i - 1, j - 1);
        let gid = indicator[i] - 1;
        if indicator[j] - 1 != gid {
            return Err(DidmError::parse(loc(), "edge joins two different graphs"));
        }
        directed[gid][[local[i], local[j]]] = true;
    }

    let mut symmetrized_edges = 0;
    let adjacencies: Vec<Array2<f64>> = directed
        .iter()
        .map(|d| {
            let n = d.nrows();
            let mut a = Array2::zeros((n, n));
            for i in 0..n {
                for j in i..n {
                    let (fwd, bwd) = (d[[i, j]], d[[j, i]]);
                    if fwd || bwd {
                        if fwd != bwd {
                            symmetrized_edges += 1;
                        }
                        a[[i, j]] = 1.0;
                        a[[j, i]] = 1.0;
                    }
                }
            }
            a
        })
        .collect();

    let attr_path = dataset_file(root, name, "node_attributes");
    let continuous: Option<Vec<Vec<f64>>> = read_optional(&attr_path)?
        .map(|t| lines(&t).map(|(no, l)| parse_fields(&attr_path, no, l)).collect())
        .transpose()?;
    let nl_path = dataset_file(root, name, "node_labels");
    let node_labels: Option<Vec<i64>> = read_optional(&nl_path)?
        .map(|t| {
            // Some TU datasets list several label columns; the first one is the node label.
            lines(&t)
                .map(|(no, l)| parse_fields::<i64>(&nl_path, no, l).map(|v| v[0]))
                .collect()
        })
        .transpose()?;

    for (path, len) in [
        (&attr_path, continuous.as_ref().map(Vec::len)),
        (&nl_path, node_labels.as_ref().map(Vec::len)),
    ] {
        if let Some(len) = len.filter(|&l| l != node_total) {
            return Err(DidmError::parse(
                path.display().to_string(),
                format!("{len} rows for {node_total} nodes"),
            ));
        }
    }

    let cont_dim = continuous.as_ref().and_then(|c| c.first()).map_or(0, Vec::len);
    if let Some(rows) = &continuous {
        if let Some(i) = rows.iter().position(|r| r.len() != cont_dim) {
            return Err(DidmError::parse(
                format!("{}:{}", attr_path.display(), i + 1),
                format!("expected {cont_dim} attributes"),
            ));
        }
    }
    let label_index: BTreeMap<i64, usize> = node_labels
        .iter()
        .flatten()
        .copied()
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .enumerate()
        .map(|(k, l)| (l, k))
        .collect();
    let attr_dim = cont_dim + label_index.len();

    let graphs = members
        .iter()
        .zip(adjacencies)
        .map(|(nodes, adjacency)| {
            let mut attrs = Array2::zeros((nodes.len(), attr_dim));
            for (li, &v) in nodes.iter().enumerate() {
                if let Some(rows) = &continuous {
                    for (k, x) in rows[v].iter().enumerate() {
                        attrs[[li, k]] = *x;
                    }
                }
                if let Some(labels) = &node_labels {
                    attrs[[li, cont_dim + label_index[&labels[v]]]] = 1.0;
                }
            }
            GraphSignal::new(adjacency, attrs)
        })
        .collect::<Result<Vec<_>>>()?;

    if symmetrized_edges > 0 {
        log::warn!("{name}: added {symmetrized_edges} missing reverse edges");
    }
    let mut ds = Dataset::new(name, graphs, graph_labels)?;
    ds.symmetrized_edges = symmetrized_edges;
    Ok(ds)
}
