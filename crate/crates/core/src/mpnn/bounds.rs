use super::MpnnModel;
use crate::error::{DidmError, Result};

/// Lipschitz and sup-norm bounds of a model with attributes in the ball of radius `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct LipschitzConstants {
    /// `C⁽ᴸ⁾`, Lipschitz constant of the node features.
    pub c_phi: f64,
    /// Lipschitz constant of the graph output with respect to the DIDM distance.
    pub c_model: f64,
    /// `B⁽ᴸ⁾`, bound on node feature norms.
    pub b_phi: f64,
    /// Bound on the output norm.
    pub b_model: f64,
    /// `B⁽ᵗ⁾` for `t = 0..=L`.
    pub feature_bounds: Vec<f64>,
    /// `C⁽ᵗ⁾` for `t = 0..=L`.
    pub lipschitz_per_layer: Vec<f64>,
}

impl LipschitzConstants {
    /// Runs the recursions on explicit per-layer Lipschitz constants and formal biases.
    /// `lips[0]` and `biases[0]` belong to `φ⁽⁰⁾`.
    pub fn from_layers(lips: &[f64], biases: &[f64], readout_lip: f64, readout_bias: f64, r: f64) -> Self {
        assert_eq!(lips.len(), biases.len());
        assert!(!lips.is_empty());
        let mut b = vec![r * lips[0] + biases[0]];
        let mut c = vec![lips[0]];
        for t in 1..lips.len() {
            c.push(2.0 * lips[t] * (b[t - 1] + c[t - 1]));
            b.push(2.0 * lips[t] * b[t - 1] + biases[t]);
        }
        let (b_phi, c_phi) = (*b.last().unwrap(), *c.last().unwrap());
        LipschitzConstants {
            c_phi,
            c_model: readout_lip * (b_phi + c_phi),
            b_phi,
            b_model: readout_lip * b_phi + readout_bias,
            feature_bounds: b,
            lipschitz_per_layer: c,
        }
    }
}

/// Constants for `model`, using each layer's Lipschitz upper bound and formal bias.
pub fn lipschitz_constants(model: &MpnnModel, r: f64) -> Result<LipschitzConstants> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(DidmError::InvalidArgument(format!("attribute radius must be positive, got {r}")));
    }
    let lips: Vec<f64> = model.layers().iter().map(|l| l.lip_bound()).collect();
    let biases: Vec<f64> = model.layers().iter().map(|l| l.formal_bias()).collect();
    Ok(LipschitzConstants::from_layers(
        &lips,
        &biases,
        model.readout().lip_bound(),
        model.readout().formal_bias(),
        r,
    ))
}

/// Constants of the hypothesis class of models whose layers have Lipschitz constants
/// at most `A1` and formal biases at most `A2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralizationConstants {
    pub b1: f64,
    pub c1: f64,
    pub c_theta: f64,
    pub b_theta: f64,
    pub c: f64,
    pub b: f64,
}

pub fn generalization_constants(
    a1: f64,
    a2: f64,
    depth: usize,
    r: f64,
    c_loss: f64,
    loss_at_zero: f64,
) -> Result<GeneralizationConstants> {
    for (name, v) in [("A1", a1), ("A2", a2), ("r", r), ("C_loss", c_loss)] {
        if !(v >= 0.0) || !v.is_finite() {
            return Err(DidmError::InvalidArgument(format!("{name} must be finite and nonnegative, got {v}")));
        }
    }
    let layers = LipschitzConstants::from_layers(&vec![a1; depth + 1], &vec![a2; depth + 1], a1, a2, r);
    let (b1, c1) = (layers.b_phi, layers.c_phi);
    let c_theta = a1 * (b1 + c1);
    let b_theta = a1 * b1 + a2;
    Ok(GeneralizationConstants {
        b1,
        c1,
        c_theta,
        b_theta,
        c: c_loss * c_theta.max(1.0),
        b: c_loss * (b_theta + 1.0) + loss_at_zero.abs(),
    })
}

/// Parameters of the covering number `κ(ε) = 2^{k²}`, `k = ⌈2^{9c/(4ε²)}⌉`, of the
/// attributed-graph space with attributes in the ball of radius `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoveringParams {
    pub c: f64,
    /// Radius of the attribute ball. The count itself only depends on `c`.
    pub r: f64,
}

impl CoveringParams {
    fn validate(&self) -> Result<()> {
        if !(self.c > 1.0) || !self.c.is_finite() || !(self.r > 0.0) {
            return Err(DidmError::InvalidArgument(format!(
                "covering parameters need c > 1 and r > 0, got c = {}, r = {}",
                self.c, self.r
            )));
        }
        Ok(())
    }
}

/// `ln ξ(ε)` with `ξ(ε) = κ(ε)² ln κ(ε) / ε²`. Returns `+∞` once `κ` leaves the range
/// of `f64` even in log form.
pub fn log_xi(eps: f64, covering: CoveringParams) -> f64 {
    let exponent = 9.0 * covering.c / (4.0 * eps * eps);
    // ln k, with k = ⌈2^exponent⌉
    let ln_k = if exponent < 52.0 {
        exponent.exp2().ceil().ln()
    } else {
        exponent * std::f64::consts::LN_2
    };
    let ln_ln_kappa = 2.0 * ln_k + std::f64::consts::LN_2.ln();
    let ln_kappa = ln_ln_kappa.exp();
    2.0 * ln_kappa + ln_ln_kappa - 2.0 * eps.ln()
}

/// `ξ⁻¹(n)` by bisection. `ξ` decreases strictly in `ε`.
pub fn xi_inverse(n: f64, covering: CoveringParams) -> Result<f64> {
    covering.validate()?;
    if !(n >= 1.0) {
        return Err(DidmError::InvalidArgument(format!("sample count must be at least 1, got {n}")));
    }
    let target = n.ln();
    let (mut lo, mut hi) = (1.0, 1.0);
    while log_xi(lo, covering) <= target {
        lo /= 2.0;
    }
    while log_xi(hi, covering) > target {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if log_xi(mid, covering) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// Natural log of `ξ⁻¹(N)·(2C + B/√2·(1 + √ln(2/p)))`.
///
/// The covering number is so large that `ξ⁻¹(N)` stays above one for any realistic
/// `N`, so the bound is vacuous in practice; only its trend in `N` and `p` is
/// informative.
pub fn generalization_bound_log(n: f64, p: f64, c: f64, b: f64, covering: CoveringParams) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(DidmError::InvalidArgument(format!("confidence p must lie in (0, 1), got {p}")));
    }
    if !(c >= 0.0 && b >= 0.0) {
        return Err(DidmError::InvalidArgument(format!("C and B must be nonnegative, got {c} and {b}")));
    }
    let eps = xi_inverse(n, covering)?;
    let factor = 2.0 * c + b / std::f64::consts::SQRT_2 * (1.0 + (2.0 / p).ln().sqrt());
    Ok(eps.ln() + factor.ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_recursion() {
        let k = LipschitzConstants::from_layers(&[1.0, 1.0], &[0.0, 0.0], 1.0, 0.0, 1.0);
        assert_eq!(k.feature_bounds, vec![1.0, 2.0]);
        assert_eq!(k.lipschitz_per_layer, vec![1.0, 4.0]);
        assert_eq!(k.c_model, 6.0);
        assert_eq!(k.b_model, 2.0);
    }

    #[test]
    fn zero_weights_leave_biases() {
        let k = LipschitzConstants::from_layers(&[0.0, 0.0, 0.0], &[0.5, 0.25, 2.0], 0.0, 3.0, 1.0);
        assert_eq!(k.feature_bounds, vec![0.5, 0.25, 2.0]);
        assert_eq!(k.c_phi, 0.0);
        assert_eq!(k.b_model, 3.0);
    }

    #[test]
    fn doubling_lips_without_bias() {
        for depth in 1..5usize {
            let one = LipschitzConstants::from_layers(&vec![1.3; depth + 1], &vec![0.0; depth + 1], 1.0, 0.0, 0.7);
            let two = LipschitzConstants::from_layers(&vec![2.6; depth + 1], &vec![0.0; depth + 1], 1.0, 0.0, 0.7);
            let ratio = two.c_phi / one.c_phi;
            assert!((ratio - 2f64.powi(depth as i32 + 1)).abs() < 1e-9 * ratio);
        }
    }

    #[test]
    fn generalization_fixture() {
        let g = generalization_constants(1.0, 0.0, 1, 1.0, 1.0, 0.0).unwrap();
        assert_eq!((g.b1, g.c1, g.c_theta, g.b_theta), (2.0, 4.0, 6.0, 2.0));
        assert_eq!((g.c, g.b), (6.0, 3.0));
        let z = generalization_constants(0.0, 0.5, 3, 1.0, 2.0, 0.0).unwrap();
        assert_eq!(z.c_theta, 0.0);
        assert_eq!(z.c, 2.0);
    }

    #[test]
    fn xi_decreases() {
        let cov = CoveringParams { c: 1.5, r: 1.0 };
        let mut last = f64::INFINITY;
        for k in 1..200 {
            let v = log_xi(0.5 + 0.05 * k as f64, cov);
            assert!(v < last);
            last = v;
        }
    }

    #[test]
    fn inverse_lands_on_target() {
        let cov = CoveringParams { c: 1.01, r: 1.0 };
        for n in [1e3, 1e6, 1e9] {
            let eps = xi_inverse(n, cov).unwrap();
            assert!(log_xi(eps, cov) <= n.ln());
            assert!(log_xi(eps * (1.0 - 1e-9), cov) > n.ln());
        }
    }

    #[test]
    fn bound_trends() {
        let cov = CoveringParams { c: 1.01, r: 1.0 };
        let at = |n, p| generalization_bound_log(n, p, 6.0, 3.0, cov).unwrap();
        assert!(at(1e3, 0.05) > at(1e6, 0.05));
        assert!(at(1e6, 0.05) > at(1e9, 0.05));
        assert!(at(1e6, 0.01) > at(1e6, 0.05));
    }

    #[test]
    fn bad_arguments() {
        let cov = CoveringParams { c: 1.01, r: 1.0 };
        assert!(generalization_bound_log(0.5, 0.1, 1.0, 1.0, cov).is_err());
        assert!(generalization_bound_log(10.0, 1.0, 1.0, 1.0, cov).is_err());
        assert!(xi_inverse(10.0, CoveringParams { c: 0.5, r: 1.0 }).is_err());
    }
}
