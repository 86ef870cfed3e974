use ndarray::{Array1, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Activation, AffineStage, Family, InputCombine, MpnnModel, UpdateLayer};
use crate::error::{DidmError, Result};

/// Glorot-uniform weights, biases uniform in `±1/√fan_in`.
fn random_stage(rng: &mut ChaCha8Rng, fan_in: usize, fan_out: usize, activation: Activation) -> AffineStage {
    let w_lim = (6.0 / (fan_in + fan_out) as f64).sqrt();
    let b_lim = 1.0 / (fan_in.max(1) as f64).sqrt();
    let weight = Array2::from_shape_simple_fn((fan_out, fan_in), || rng.random_range(-w_lim..=w_lim));
    let bias = Array1::from_shape_simple_fn(fan_out, || rng.random_range(-b_lim..=b_lim));
    AffineStage::new(weight, bias, activation).expect("shapes agree by construction")
}

/// `ψ`: identity when the widths agree, otherwise a random linear projection.
fn readout(rng: &mut ChaCha8Rng, hidden: usize, out_dim: usize) -> UpdateLayer {
    let stages = if out_dim == hidden {
        vec![]
    } else {
        vec![random_stage(rng, hidden, out_dim, Activation::Identity)]
    };
    UpdateLayer::new(InputCombine::Single, hidden, stages, false).expect("readout shape")
}

fn check(depth: usize, hidden: usize, out_dim: usize) -> Result<()> {
    if depth == 0 || hidden == 0 || out_dim == 0 {
        return Err(DidmError::InvalidArgument(format!(
            "depth, hidden and out_dim must be positive (got {depth}, {hidden}, {out_dim})"
        )));
    }
    Ok(())
}

/// GIN-style model: `φ⁽ᵗ⁾(x, m) = MLP(x + m)` with a two-stage ReLU MLP, plus `x` for
/// `t ≥ 2`. `φ⁽⁰⁾` is a linear embedding.
pub fn init_gin_meanpool(depth: usize, hidden: usize, attr_dim: usize, out_dim: usize, seed: u64) -> Result<MpnnModel> {
    check(depth, hidden, out_dim)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut layers = vec![UpdateLayer::new(
        InputCombine::Single,
        attr_dim,
        vec![random_stage(&mut rng, attr_dim, hidden, Activation::Identity)],
        false,
    )?];
    for t in 1..=depth {
        let stages = vec![
            random_stage(&mut rng, hidden, hidden, Activation::Relu),
            random_stage(&mut rng, hidden, hidden, Activation::Relu),
        ];
        layers.push(UpdateLayer::new(InputCombine::Sum, hidden, stages, t >= 2)?);
    }
    let psi = readout(&mut rng, hidden, out_dim);
    MpnnModel::new(layers, psi, Family::GinMeanpool, seed)
}

/// Graph-convolution model: `φ⁽ᵗ⁾(x, m) = W_s x + W_a m + b`, plus `x` for `t ≥ 2`.
pub fn init_gc_meanpool(depth: usize, hidden: usize, attr_dim: usize, out_dim: usize, seed: u64) -> Result<MpnnModel> {
    check(depth, hidden, out_dim)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut layers = vec![UpdateLayer::new(
        InputCombine::Single,
        attr_dim,
        vec![random_stage(&mut rng, attr_dim, hidden, Activation::Identity)],
        false,
    )?];
    for t in 1..=depth {
        let self_part = random_stage(&mut rng, hidden, hidden, Activation::Identity);
        let agg_part = random_stage(&mut rng, hidden, hidden, Activation::Identity);
        let weight = ndarray::concatenate(ndarray::Axis(1), &[self_part.weight.view(), agg_part.weight.view()])
            .expect("same row count");
        let stage = AffineStage::new(weight, self_part.bias, Activation::Identity)?;
        layers.push(UpdateLayer::new(InputCombine::Concat, hidden, vec![stage], t >= 2)?);
    }
    let psi = readout(&mut rng, hidden, out_dim);
    MpnnModel::new(layers, psi, Family::GcMeanpool, seed)
}
