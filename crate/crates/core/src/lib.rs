//! Optimal-transport distances between attributed graphs and the message-passing
//! networks that are Lipschitz with respect to them.
//!
//! The crate is organised in five layers:
//!
//! - [`graph_model`]: attributed graphs, TU-format dataset loading, stochastic
//!   block model sampling and a small JSON exchange format.
//! - [`ot`]: exact balanced and unbalanced discrete optimal transport on top of a
//!   transportation simplex.
//! - [`metric`]: the DIDM mover's distance, computed through a stack of node-pair
//!   cost matrices, plus dataset-wide distance matrices.
//! - [`mpnn`]: message-passing networks with normalized sum aggregation, their
//!   random initialisation, and the closed-form Lipschitz / feature / generalization
//!   constants.
//! - [`harness`]: experiment drivers (1-NN classification, correlation studies,
//!   Lipschitz checks) that write CSV artifacts.
//!
//! ```
//! use didm::graph_model::GraphSignal;
//! use didm::metric::didm_distance;
//!
//! let a = GraphSignal::from_edges(2, &[(0, 1)], vec![vec![0.0], vec![0.0]]).unwrap();
//! let b = GraphSignal::from_edges(1, &[], vec![vec![0.0]]).unwrap();
//! let d = didm_distance(&a, &b, 1).unwrap();
//! assert!((d - 0.5).abs() < 1e-12);
//! ```

pub mod error;
pub mod graph_model;
pub mod harness;
pub mod metric;
pub mod mpnn;
pub mod ot;

pub use error::{DidmError, Result};
