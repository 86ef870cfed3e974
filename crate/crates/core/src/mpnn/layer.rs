use ndarray::{s, Array1, Array2, ArrayView2, Axis};

use crate::error::{DidmError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Relu,
    Identity,
}

impl Activation {
    fn apply(self, z: &mut Array2<f64>) {
        if self == Activation::Relu {
            z.mapv_inplace(|v| v.max(0.0));
        }
    }
}

/// `z ↦ act(W z + b)` with `W` of shape `out × in`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineStage {
    pub weight: Array2<f64>,
    pub bias: Array1<f64>,
    pub activation: Activation,
}

impl AffineStage {
    pub fn new(weight: Array2<f64>, bias: Array1<f64>, activation: Activation) -> Result<Self> {
        if bias.len() != weight.nrows() {
            return Err(DidmError::DimensionMismatch(format!(
                "bias has {} entries for a {}x{} weight",
                bias.len(),
                weight.nrows(),
                weight.ncols()
            )));
        }
        if weight.iter().chain(bias.iter()).any(|v| !v.is_finite()) {
            return Err(DidmError::ContractViolation("non-finite layer parameter".into()));
        }
        Ok(AffineStage { weight, bias, activation })
    }

    pub fn in_dim(&self) -> usize {
        self.weight.ncols()
    }

    pub fn out_dim(&self) -> usize {
        self.weight.nrows()
    }
}

/// How the two inputs `(x, m)` of an update function reach the first stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputCombine {
    /// Unary layer: only `x` (initial embedding and readout).
    Single,
    /// The first stage sees `x + m`.
    Sum,
    /// The first stage sees `[x; m]`.
    Concat,
}

/// One update function: an MLP over the combined input, optionally plus `x`.
///
/// Lipschitz bounds are taken with respect to `‖Δx‖₂ + ‖Δm‖₂` on pair inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct UpdateLayer {
    combine: InputCombine,
    in_dim: usize,
    stages: Vec<AffineStage>,
    residual: bool,
    lip_bound: f64,
    formal_bias: f64,
}

impl UpdateLayer {
    /// `in_dim` is the width of `x` (and of `m` for pair layers). An empty stage list
    /// is the identity on the combined input.
    pub fn new(combine: InputCombine, in_dim: usize, stages: Vec<AffineStage>, residual: bool) -> Result<Self> {
        let mut width = match combine {
            InputCombine::Concat => 2 * in_dim,
            _ => in_dim,
        };
        for (k, st) in stages.iter().enumerate() {
            if st.in_dim() != width {
                return Err(DidmError::DimensionMismatch(format!(
                    "stage {k} expects width {}, receives {width}",
                    st.in_dim()
                )));
            }
            width = st.out_dim();
        }
        if residual && width != in_dim {
            return Err(DidmError::DimensionMismatch(format!(
                "residual layer maps width {in_dim} to {width}"
            )));
        }
        let mut layer = UpdateLayer {
            combine,
            in_dim,
            stages,
            residual,
            lip_bound: 0.0,
            formal_bias: 0.0,
        };
        layer.lip_bound = layer.compute_lip_bound();
        layer.formal_bias = layer.compute_formal_bias();
        Ok(layer)
    }

    fn compute_lip_bound(&self) -> f64 {
        let mut factor = 1.0;
        for (k, st) in self.stages.iter().enumerate() {
            let norm = if k == 0 && self.combine == InputCombine::Concat {
                let d = self.in_dim;
                spectral_norm(st.weight.slice(s![.., ..d])).max(spectral_norm(st.weight.slice(s![.., d..])))
            } else {
                spectral_norm(st.weight.view())
            };
            factor *= norm;
        }
        factor + if self.residual { 1.0 } else { 0.0 }
    }

    fn compute_formal_bias(&self) -> f64 {
        let zero = Array2::zeros((1, self.in_dim));
        let out = match self.combine {
            InputCombine::Single => self.apply(zero.view(), None),
            _ => self.apply(zero.view(), Some(zero.view())),
        };
        out.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn combine(&self) -> InputCombine {
        self.combine
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        match (self.stages.last(), self.combine) {
            (Some(st), _) => st.out_dim(),
            (None, InputCombine::Concat) => 2 * self.in_dim,
            (None, _) => self.in_dim,
        }
    }

    pub fn stages(&self) -> &[AffineStage] {
        &self.stages
    }

    pub fn residual(&self) -> bool {
        self.residual
    }

    /// Upper bound on the Lipschitz constant.
    pub fn lip_bound(&self) -> f64 {
        self.lip_bound
    }

    /// `‖layer(0)‖₂`.
    pub fn formal_bias(&self) -> f64 {
        self.formal_bias
    }

    /// Applies the layer to each row of `x` (and `m` for pair layers).
    pub fn apply(&self, x: ArrayView2<'_, f64>, m: Option<ArrayView2<'_, f64>>) -> Array2<f64> {
        let mut z = match (self.combine, m) {
            (InputCombine::Single, _) => x.to_owned(),
            (InputCombine::Sum, Some(m)) => &x + &m,
            (InputCombine::Concat, Some(m)) => ndarray::concatenate(Axis(1), &[x, m]).expect("equal row counts"),
            (_, None) => panic!("pair layer applied without aggregate"),
        };
        for st in &self.stages {
            let mut next = z.dot(&st.weight.t());
            next += &st.bias;
            st.activation.apply(&mut next);
            z = next;
        }
        if self.residual {
            z += &x;
        }
        z
    }
}

const POWER_ITERATIONS: usize = 100;
const POWER_TOL: f64 = 1e-10;

/// Upper estimate of the largest singular value.
///
/// Power iteration on `WᵀW` from a fixed start vector. A converged estimate is inflated
/// by a relative `1e-9`; if the iteration does not settle, the Frobenius norm is
/// returned instead, which is always an upper bound.
pub fn spectral_norm(w: ArrayView2<'_, f64>) -> f64 {
    let frob = w.iter().map(|v| v * v).sum::<f64>().sqrt();
    if frob == 0.0 {
        return 0.0;
    }
    let n = w.ncols();
    let mut v = Array1::from_shape_fn(n, |i| 1.0 + 0.01 * i as f64);
    v /= v.dot(&v).sqrt();
    let mut sigma = 0.0;
    for _ in 0..POWER_ITERATIONS {
        let wv = w.dot(&v);
        let mut next = w.t().dot(&wv);
        let norm = next.dot(&next).sqrt();
        if norm == 0.0 {
            // start vector in the null space; fall back to the safe bound
            return frob;
        }
        next /= norm;
        let estimate = norm.sqrt();
        let converged = (estimate - sigma).abs() <= POWER_TOL * estimate;
        sigma = estimate;
        v = next;
        if converged {
            return (sigma * (1.0 + 1e-9)).min(frob);
        }
    }
    frob
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn diagonal_norm() {
        let w = array![[3.0, 0.0], [0.0, -2.0]];
        assert!((spectral_norm(w.view()) - 3.0).abs() < 1e-8);
    }

    #[test]
    fn rank_one_norm() {
        let w = array![[1.0, 2.0], [2.0, 4.0]];
        assert!((spectral_norm(w.view()) - 5.0).abs() < 1e-8);
    }

    #[test]
    fn zero_matrix() {
        assert_eq!(spectral_norm(Array2::zeros((3, 2)).view()), 0.0);
    }

    #[test]
    fn sum_layer_evaluation() {
        let id = AffineStage::new(Array2::eye(1), array![0.0], Activation::Identity).unwrap();
        let layer = UpdateLayer::new(InputCombine::Sum, 1, vec![id], false).unwrap();
        let out = layer.apply(array![[1.0], [2.0]].view(), Some(array![[0.5], [0.0]].view()));
        assert_eq!(out, array![[1.5], [2.0]]);
        assert!((layer.lip_bound() - 1.0).abs() < 1e-8);
        assert_eq!(layer.formal_bias(), 0.0);
    }

    #[test]
    fn formal_bias_is_output_at_zero() {
        let st = AffineStage::new(array![[1.0, 0.0]], array![-2.0], Activation::Relu).unwrap();
        let relu = UpdateLayer::new(InputCombine::Single, 2, vec![st.clone()], false).unwrap();
        assert_eq!(relu.formal_bias(), 0.0);
        let lin = AffineStage::new(st.weight.clone(), array![-2.0], Activation::Identity).unwrap();
        let layer = UpdateLayer::new(InputCombine::Single, 2, vec![lin], false).unwrap();
        assert_eq!(layer.formal_bias(), 2.0);
    }

    #[test]
    fn concat_bound_takes_larger_block() {
        let w = array![[2.0, -1.0]];
        let st = AffineStage::new(w, array![0.0], Activation::Identity).unwrap();
        let layer = UpdateLayer::new(InputCombine::Concat, 1, vec![st], true).unwrap();
        assert!((layer.lip_bound() - 3.0).abs() < 1e-8);
    }

    #[test]
    fn shape_errors() {
        let st = AffineStage::new(Array2::zeros((3, 2)), Array1::zeros(3), Activation::Relu).unwrap();
        assert!(UpdateLayer::new(InputCombine::Sum, 3, vec![st.clone()], false).is_err());
        assert!(UpdateLayer::new(InputCombine::Single, 2, vec![st], true).is_err());
        assert!(AffineStage::new(Array2::zeros((3, 2)), Array1::zeros(2), Activation::Relu).is_err());
    }
}
