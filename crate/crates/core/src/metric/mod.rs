//! The DIDM mover's distance between graph-signals.
//!
//! For graphs `G` (nodes `x`) and `H` (nodes `y`) the node-pair cost matrices are
//!
//! ```text
//! C_0(x, y) = ‖f(x) - g(y)‖₂
//! C_i(x, y) = C_{i-1}(x, y) + OT_{C_{i-1}}(ν_x, ν_y)        i = 1..L
//! ```
//!
//! where `ν_x` puts mass `a_{xu} / N_G` on every node `u` of `G` and `OT` is the
//! unbalanced transport value. `C_i(x, y)` is the order-`i` IDM distance between the
//! computation IDMs of `x` and `y`; the graph distance is the unbalanced transport
//! value between the uniform node measures with cost `C_L`.

mod csv;
mod pairwise;

pub use csv::{read_distance_csv, write_distance_csv};
pub use pairwise::{pairwise_distance_matrix, thread_pool, DistanceMatrix, TimingReport};

use ndarray::{Array2, ArrayView2};

use crate::error::{DidmError, Result};
use crate::graph_model::GraphSignal;
use crate::ot::unbalanced_value;

/// Depth used by the experiments when none is given.
pub const DEFAULT_DEPTH: usize = 2;

/// Neighbor measure of one node, restricted to nodes with positive edge weight.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborMeasure {
    pub support: Vec<usize>,
    pub weights: Vec<f64>,
}

impl NeighborMeasure {
    pub fn of(g: &GraphSignal, x: usize) -> Self {
        let n = g.node_count() as f64;
        let (support, weights) = g.neighbors(x).map(|(u, a)| (u, a / n)).unzip();
        NeighborMeasure { support, weights }
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// Neighbor measures of every node of `g`.
    pub fn all(g: &GraphSignal) -> Vec<Self> {
        (0..g.node_count()).map(|x| NeighborMeasure::of(g, x)).collect()
    }
}

/// The matrices `C_0 … C_L` for one graph pair.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrixStack {
    matrices: Vec<Array2<f64>>,
}

impl CostMatrixStack {
    pub fn build(g: &GraphSignal, h: &GraphSignal, depth: usize) -> Result<Self> {
        let ng = NeighborMeasure::all(g);
        let nh = NeighborMeasure::all(h);
        let mut matrices = Vec::with_capacity(depth + 1);
        matrices.push(initial_cost_matrix(g, h)?);
        for level in 1..=depth {
            let next = refine(matrices[level - 1].view(), &ng, &nh, level)?;
            matrices.push(next);
        }
        Ok(CostMatrixStack { matrices })
    }

    pub fn depth(&self) -> usize {
        self.matrices.len() - 1
    }

    /// `C_level`.
    pub fn level(&self, level: usize) -> ArrayView2<'_, f64> {
        self.matrices[level].view()
    }

    /// `C_L`.
    pub fn top(&self) -> ArrayView2<'_, f64> {
        self.matrices[self.depth()].view()
    }

    /// `D_level = C_level - C_{level-1}` for `level ≥ 1`.
    pub fn increment(&self, level: usize) -> Array2<f64> {
        &self.matrices[level] - &self.matrices[level - 1]
    }

    pub fn matrices(&self) -> &[Array2<f64>] {
        &self.matrices
    }
}

/// Pairwise Euclidean distances between the attribute rows of `g` and `h`.
///
/// Zero-dimensional attributes are treated as the constant zero signal.
pub fn initial_cost_matrix(g: &GraphSignal, h: &GraphSignal) -> Result<Array2<f64>> {
    if g.attr_dim() != h.attr_dim() {
        return Err(DidmError::ContractViolation(format!(
            "attribute dimensions differ: {} vs {}",
            g.attr_dim(),
            h.attr_dim()
        )));
    }
    let (fg, fh) = (g.attributes(), h.attributes());
    Ok(Array2::from_shape_fn((g.node_count(), h.node_count()), |(x, y)| {
        fg.row(x)
            .iter()
            .zip(fh.row(y))
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }))
}

/// `C_i = C_{i-1} + D_i` with `D_i(x, y)` the unbalanced transport value between the
/// neighbor measures of `x` and `y` under cost `C_{i-1}`.
pub fn next_cost_matrix(prev: ArrayView2<'_, f64>, g: &GraphSignal, h: &GraphSignal) -> Result<Array2<f64>> {
    if prev.dim() != (g.node_count(), h.node_count()) {
        return Err(DidmError::DimensionMismatch(format!(
            "cost matrix is {:?}, graphs have {} and {} nodes",
            prev.dim(),
            g.node_count(),
            h.node_count()
        )));
    }
    refine(prev, &NeighborMeasure::all(g), &NeighborMeasure::all(h), 0)
}

fn refine(
    prev: ArrayView2<'_, f64>,
    ng: &[NeighborMeasure],
    nh: &[NeighborMeasure],
    level: usize,
) -> Result<Array2<f64>> {
    let mut next = prev.to_owned();
    let mut sub = Vec::new();
    for (x, mx) in ng.iter().enumerate() {
        for (y, my) in nh.iter().enumerate() {
            let d = if mx.is_empty() || my.is_empty() {
                (mx.total_mass() - my.total_mass()).abs()
            } else {
                sub.clear();
                sub.extend(
                    mx.support
                        .iter()
                        .flat_map(|&u| my.support.iter().map(move |&w| prev[[u, w]])),
                );
                unbalanced_value(&sub, &mx.weights, &my.weights).map_err(|e| DidmError::NodePair {
                    left: x,
                    right: y,
                    level,
                    source: Box::new(e),
                })?
            };
            next[[x, y]] += d;
        }
    }
    Ok(next)
}

/// Unbalanced transport between the uniform node measures under `C_L`.
pub(crate) fn distance_from_top(top: ArrayView2<'_, f64>) -> Result<f64> {
    let (m, n) = top.dim();
    let flat: Vec<f64> = top.iter().copied().collect();
    unbalanced_value(&flat, &vec![1.0 / m as f64; m], &vec![1.0 / n as f64; n])
}

/// `δ^L_DIDM(g, h)`.
pub fn didm_distance(g: &GraphSignal, h: &GraphSignal, depth: usize) -> Result<f64> {
    let stack = CostMatrixStack::build(g, h, depth)?;
    distance_from_top(stack.top())
}
