//! Message-passing networks with normalized sum aggregation.
//!
//! ```text
//! g⁽⁰⁾_v = φ⁽⁰⁾(f(v))
//! g⁽ᵗ⁾_v = φ⁽ᵗ⁾(g⁽ᵗ⁻¹⁾_v, (1/N) Σ_u a_vu g⁽ᵗ⁻¹⁾_u)
//! out    = ψ((1/N) Σ_v g⁽ᴸ⁾_v)
//! ```
//!
//! The aggregate divides by the node count, not by the degree.

mod bounds;
mod init;
mod layer;
mod spec;

pub use bounds::{
    generalization_bound_log, generalization_constants, lipschitz_constants, log_xi, xi_inverse, CoveringParams,
    GeneralizationConstants, LipschitzConstants,
};
pub use init::{init_gc_meanpool, init_gin_meanpool};
pub use layer::{spectral_norm, Activation, AffineStage, InputCombine, UpdateLayer};
pub use spec::{load_weights, save_weights, ModelSpec};

use ndarray::{Array1, Array2, Axis};
use serde::{Deserialize, Serialize};

use crate::error::{DidmError, Result};
use crate::graph_model::GraphSignal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    GinMeanpool,
    GcMeanpool,
    Custom,
}

impl std::str::FromStr for Family {
    type Err = DidmError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gin" | "gin_meanpool" => Ok(Family::GinMeanpool),
            "gc" | "gc_meanpool" => Ok(Family::GcMeanpool),
            "custom" => Ok(Family::Custom),
            other => Err(DidmError::InvalidArgument(format!("unknown model family {other:?}"))),
        }
    }
}

/// An `L`-layer model with mean-pool readout. `layers[0]` is `φ⁽⁰⁾`.
#[derive(Debug, Clone, PartialEq)]
pub struct MpnnModel {
    layers: Vec<UpdateLayer>,
    readout: UpdateLayer,
    family: Family,
    seed: u64,
}

/// Node features after every layer and the graph-level output.
#[derive(Debug, Clone, PartialEq)]
pub struct ForwardPass {
    pub layer_features: Vec<Array2<f64>>,
    pub output: Array1<f64>,
}

impl ForwardPass {
    /// `g⁽ᴸ⁾` as an `N × d_L` matrix.
    pub fn node_features(&self) -> &Array2<f64> {
        self.layer_features.last().expect("at least the initial layer")
    }
}

impl MpnnModel {
    /// Assembles a model, checking that widths chain and the layer kinds fit.
    pub fn new(layers: Vec<UpdateLayer>, readout: UpdateLayer, family: Family, seed: u64) -> Result<Self> {
        let Some(first) = layers.first() else {
            return Err(DidmError::InvalidArgument("a model needs an initial layer".into()));
        };
        if first.combine() != InputCombine::Single || readout.combine() != InputCombine::Single {
            return Err(DidmError::InvalidArgument(
                "initial and readout layers must be unary".into(),
            ));
        }
        for (t, pair) in layers.windows(2).enumerate() {
            if pair[1].combine() == InputCombine::Single {
                return Err(DidmError::InvalidArgument(format!("layer {} must take (x, m)", t + 1)));
            }
            if pair[0].out_dim() != pair[1].in_dim() {
                return Err(DidmError::DimensionMismatch(format!(
                    "layer {t} outputs width {}, layer {} expects {}",
                    pair[0].out_dim(),
                    t + 1,
                    pair[1].in_dim()
                )));
            }
        }
        let last = layers.last().unwrap().out_dim();
        if readout.in_dim() != last {
            return Err(DidmError::DimensionMismatch(format!(
                "readout expects width {}, last layer outputs {last}",
                readout.in_dim()
            )));
        }
        Ok(MpnnModel { layers, readout, family, seed })
    }

    /// Number of message-passing layers `L`.
    pub fn depth(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn layers(&self) -> &[UpdateLayer] {
        &self.layers
    }

    pub fn readout(&self) -> &UpdateLayer {
        &self.readout
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].in_dim()
    }

    pub fn output_dim(&self) -> usize {
        self.readout.out_dim()
    }

    pub fn forward(&self, g: &GraphSignal) -> Result<ForwardPass> {
        if g.attr_dim() != self.input_dim() {
            return Err(DidmError::DimensionMismatch(format!(
                "graph has {}-dimensional attributes, model expects {}",
                g.attr_dim(),
                self.input_dim()
            )));
        }
        let n = g.node_count() as f64;
        let a = g.adjacency();
        let mut features = vec![self.layers[0].apply(g.attributes(), None)];
        for layer in &self.layers[1..] {
            let prev = features.last().unwrap();
            let agg = a.dot(prev) / n;
            features.push(layer.apply(prev.view(), Some(agg.view())));
        }
        let pooled = features.last().unwrap().mean_axis(Axis(0)).expect("at least one node");
        let out = self.readout.apply(pooled.insert_axis(Axis(0)).view(), None);
        Ok(ForwardPass {
            layer_features: features,
            output: out.row(0).to_owned(),
        })
    }

    pub fn output(&self, g: &GraphSignal) -> Result<Array1<f64>> {
        Ok(self.forward(g)?.output)
    }
}

/// Euclidean distance between two output vectors.
pub fn output_distance(a: &Array1<f64>, b: &Array1<f64>) -> f64 {
    (a - b).mapv(|v| v * v).sum().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn identity_sum_model() -> MpnnModel {
        let id = |d| AffineStage::new(Array2::eye(d), Array1::zeros(d), Activation::Identity).unwrap();
        let phi0 = UpdateLayer::new(InputCombine::Single, 1, vec![], false).unwrap();
        let phi1 = UpdateLayer::new(InputCombine::Sum, 1, vec![id(1)], false).unwrap();
        let psi = UpdateLayer::new(InputCombine::Single, 1, vec![], false).unwrap();
        MpnnModel::new(vec![phi0, phi1], psi, Family::Custom, 0).unwrap()
    }

    #[test]
    fn isolated_node_keeps_its_attribute() {
        let g = GraphSignal::edgeless(vec![vec![0.7]]).unwrap();
        let pass = identity_sum_model().forward(&g).unwrap();
        assert_eq!(pass.node_features(), &array![[0.7]]);
        assert_eq!(pass.output, array![0.7]);
    }

    #[test]
    fn k2_hand_evaluation() {
        let g = GraphSignal::from_edges(2, &[(0, 1)], vec![vec![1.0], vec![1.0]]).unwrap();
        let pass = identity_sum_model().forward(&g).unwrap();
        assert_eq!(pass.node_features(), &array![[1.5], [1.5]]);
        assert_eq!(pass.output, array![1.5]);
    }

    #[test]
    fn rejects_wrong_input_dimension() {
        let g = GraphSignal::edgeless(vec![vec![0.0, 1.0]]).unwrap();
        assert!(matches!(
            identity_sum_model().forward(&g),
            Err(DidmError::DimensionMismatch(_))
        ));
    }

    #[test]
    fn rejects_unchained_widths() {
        let phi0 = UpdateLayer::new(InputCombine::Single, 2, vec![], false).unwrap();
        let phi1 = UpdateLayer::new(InputCombine::Sum, 3, vec![], false).unwrap();
        let psi = UpdateLayer::new(InputCombine::Single, 3, vec![], false).unwrap();
        assert!(MpnnModel::new(vec![phi0, phi1], psi, Family::Custom, 0).is_err());
    }

    #[test]
    fn family_names() {
        assert_eq!("gin".parse::<Family>().unwrap(), Family::GinMeanpool);
        assert_eq!("gc_meanpool".parse::<Family>().unwrap(), Family::GcMeanpool);
        assert!("gat".parse::<Family>().is_err());
    }
}
