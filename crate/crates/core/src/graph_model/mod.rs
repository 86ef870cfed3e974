//! Attributed graphs ("graph-signals") and the datasets built from them.
//!
//! A [`GraphSignal`] stores a symmetric weighted adjacency with entries in `[0, 1]`
//! and one attribute row per node. The graphon induced by a graph-signal is never
//! built explicitly: every consumer works with the adjacency divided by the node
//! count, which is what the induced step graphon integrates to.

mod json;
mod sbm;
mod tudataset;

pub use json::{load_graph_json, parse_graph_json, save_graph_json, to_graph_json};
pub use sbm::{generate_sbm, SbmSpec};
pub use tudataset::load_tudataset;

use ndarray::{Array2, ArrayView1, ArrayView2};

use crate::error::{DidmError, Result};

/// A finite attributed graph with a symmetric weighted adjacency in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphSignal {
    adjacency: Array2<f64>,
    attributes: Array2<f64>,
}

impl GraphSignal {
    /// Builds a graph-signal, rejecting asymmetric or out-of-range adjacency entries.
    pub fn new(adjacency: Array2<f64>, attributes: Array2<f64>) -> Result<Self> {
        let graph = GraphSignal {
            adjacency,
            attributes,
        };
        graph.validate()?;
        Ok(graph)
    }

    /// Builds a 0/1 graph from an undirected edge list. Each pair is set in both directions.
    pub fn from_edges(n: usize, edges: &[(usize, usize)], attributes: Vec<Vec<f64>>) -> Result<Self> {
        if n == 0 {
            return Err(DidmError::ContractViolation("graph must have at least one node".into()));
        }
        let mut adjacency = Array2::zeros((n, n));
        for &(i, j) in edges {
            if i >= n || j >= n {
                return Err(DidmError::ContractViolation(format!(
                    "edge ({i}, {j}) out of range for {n} nodes"
                )));
            }
            adjacency[[i, j]] = 1.0;
            adjacency[[j, i]] = 1.0;
        }
        let attributes = attributes_from_rows(n, attributes)?;
        GraphSignal::new(adjacency, attributes)
    }

    /// An edgeless graph with the given attribute rows.
    pub fn edgeless(attributes: Vec<Vec<f64>>) -> Result<Self> {
        let n = attributes.len();
        GraphSignal::from_edges(n, &[], attributes)
    }

    /// Re-checks every structural invariant.
    pub fn validate(&self) -> Result<()> {
        let n = self.adjacency.nrows();
        if n == 0 {
            return Err(DidmError::ContractViolation("graph must have at least one node".into()));
        }
        if self.adjacency.ncols() != n {
            return Err(DidmError::DimensionMismatch(format!(
                "adjacency is {}x{}, expected square",
                n,
                self.adjacency.ncols()
            )));
        }
        if self.attributes.nrows() != n {
            return Err(DidmError::DimensionMismatch(format!(
                "attributes have {} rows for {} nodes",
                self.attributes.nrows(),
                n
            )));
        }
        for i in 0..n {
            for j in 0..n {
                let a = self.adjacency[[i, j]];
                if !(0.0..=1.0).contains(&a) {
                    return Err(DidmError::parse(
                        format!("adjacency[{i}][{j}]"),
                        format!("weight {a} outside [0, 1]"),
                    ));
                }
                if a != self.adjacency[[j, i]] {
                    return Err(DidmError::parse(
                        format!("adjacency[{i}][{j}]"),
                        format!("asymmetric: {a} vs {}", self.adjacency[[j, i]]),
                    ));
                }
            }
        }
        if let Some(((i, k), v)) = self.attributes.indexed_iter().find(|(_, v)| !v.is_finite()) {
            return Err(DidmError::parse(
                format!("attributes[{i}][{k}]"),
                format!("non-finite value {v}"),
            ));
        }
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.nrows()
    }

    pub fn attr_dim(&self) -> usize {
        self.attributes.ncols()
    }

    pub fn adjacency(&self) -> ArrayView2<'_, f64> {
        self.adjacency.view()
    }

    pub fn attributes(&self) -> ArrayView2<'_, f64> {
        self.attributes.view()
    }

    pub fn attribute(&self, v: usize) -> ArrayView1<'_, f64> {
        self.attributes.row(v)
    }

    /// Nodes `u` with `a_{vu} > 0`, paired with the weight.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.adjacency
            .row(v)
            .into_iter()
            .copied()
            .enumerate()
            .filter(|&(_, a)| a > 0.0)
    }

    /// `Σ_u a_{vu}`.
    pub fn weighted_degree(&self, v: usize) -> f64 {
        self.adjacency.row(v).sum()
    }

    pub fn edge_count(&self) -> usize {
        let n = self.node_count();
        (0..n)
            .flat_map(|i| (i..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.adjacency[[i, j]] > 0.0)
            .count()
    }

    /// Largest Euclidean norm among the attribute rows (0 for attribute-free graphs).
    pub fn max_attribute_norm(&self) -> f64 {
        self.attributes
            .rows()
            .into_iter()
            .map(|r| r.dot(&r).sqrt())
            .fold(0.0, f64::max)
    }

    /// Same topology, new attribute matrix.
    pub fn with_attributes(&self, attributes: Array2<f64>) -> Result<Self> {
        GraphSignal::new(self.adjacency.clone(), attributes)
    }

    /// Relabels nodes so that new node `i` is old node `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(DidmError::InvalidArgument(format!(
                "not a permutation of 0..{n}"
            )));
        }
        let adjacency = Array2::from_shape_fn((n, n), |(i, j)| self.adjacency[[perm[i], perm[j]]]);
        let attributes =
            Array2::from_shape_fn((n, self.attr_dim()), |(i, k)| self.attributes[[perm[i], k]]);
        Ok(GraphSignal {
            adjacency,
            attributes,
        })
    }
}

pub(crate) fn attributes_from_rows(n: usize, rows: Vec<Vec<f64>>) -> Result<Array2<f64>> {
    if rows.len() != n {
        return Err(DidmError::DimensionMismatch(format!(
            "{} attribute rows for {n} nodes",
            rows.len()
        )));
    }
    let d = rows.first().map_or(0, Vec::len);
    if let Some(i) = rows.iter().position(|r| r.len() != d) {
        return Err(DidmError::DimensionMismatch(format!(
            "attribute row {i} has length {}, expected {d}",
            rows[i].len()
        )));
    }
    let flat: Vec<f64> = rows.into_iter().flatten().collect();
    Array2::from_shape_vec((n, d), flat).map_err(|e| DidmError::DimensionMismatch(e.to_string()))
}

/// Replaces the attributes with the raw weighted degree `Σ_u a_{vu}` of each node.
pub fn degrees_as_attributes(g: &GraphSignal) -> GraphSignal {
    let n = g.node_count();
    let attributes = Array2::from_shape_fn((n, 1), |(v, _)| g.weighted_degree(v));
    GraphSignal {
        adjacency: g.adjacency.clone(),
        attributes,
    }
}

/// Degree divided by the node count, so every attribute lies in `[0, 1]`.
pub fn normalized_degrees_as_attributes(g: &GraphSignal) -> GraphSignal {
    let n = g.node_count();
    let attributes = Array2::from_shape_fn((n, 1), |(v, _)| g.weighted_degree(v) / n as f64);
    GraphSignal {
        adjacency: g.adjacency.clone(),
        attributes,
    }
}

/// A labelled collection of graph-signals sharing one attribute dimension.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub name: String,
    pub graphs: Vec<GraphSignal>,
    pub labels: Vec<i64>,
    pub attr_dim: usize,
    /// Reverse edges that were missing from the source edge list and had to be added.
    pub symmetrized_edges: usize,
}

impl Dataset {
    pub fn new(name: impl Into<String>, graphs: Vec<GraphSignal>, labels: Vec<i64>) -> Result<Self> {
        if graphs.len() != labels.len() {
            return Err(DidmError::DimensionMismatch(format!(
                "{} graphs but {} labels",
                graphs.len(),
                labels.len()
            )));
        }
        let attr_dim = graphs.first().map_or(0, GraphSignal::attr_dim);
        if let Some(i) = graphs.iter().position(|g| g.attr_dim() != attr_dim) {
            return Err(DidmError::DimensionMismatch(format!(
                "graph {i} has attr_dim {}, expected {attr_dim}",
                graphs[i].attr_dim()
            )));
        }
        Ok(Dataset {
            name: name.into(),
            graphs,
            labels,
            attr_dim,
            symmetrized_edges: 0,
        })
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    /// Sorted distinct class labels.
    pub fn classes(&self) -> Vec<i64> {
        let mut c = self.labels.clone();
        c.sort_unstable();
        c.dedup();
        c
    }

    /// Applies `f` to every graph, keeping labels and name.
    pub fn map_graphs(&self, f: impl Fn(&GraphSignal) -> GraphSignal) -> Result<Self> {
        let mut ds = Dataset::new(
            self.name.clone(),
            self.graphs.iter().map(f).collect(),
            self.labels.clone(),
        )?;
        ds.symmetrized_edges = self.symmetrized_edges;
        Ok(ds)
    }

    pub fn with_degree_attributes(&self, normalize: bool) -> Result<Self> {
        if normalize {
            self.map_graphs(normalized_degrees_as_attributes)
        } else {
            self.map_graphs(degrees_as_attributes)
        }
    }

    /// Largest attribute norm over all graphs; the natural radius `r` for the bounds.
    pub fn max_attribute_norm(&self) -> f64 {
        self.graphs
            .iter()
            .map(GraphSignal::max_attribute_norm)
            .fold(0.0, f64::max)
    }
}
