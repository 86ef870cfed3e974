//! Exact discrete optimal transport, balanced and unbalanced.
//!
//! The unbalanced value between `μ` and `ν` (total masses `a` and `b`) is
//!
//! ```text
//! OT(μ, ν) = min_γ Σ_ij c_ij γ_ij + |a - b|
//! ```
//!
//! where `γ` ranges over nonnegative matrices whose marginal on the lighter side
//! equals that measure and whose marginal on the heavier side is dominated by it.
//! It is reduced to a balanced problem by adding one zero-cost reservoir node on the
//! lighter side that holds the surplus `|a - b|`.

mod feasibility;
mod simplex;

pub use feasibility::{check_plan_feasibility, Violation};

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use ndarray::{Array2, ArrayView2};

use crate::error::{DidmError, Result};

/// Marginal / optimality tolerance of the solvers.
pub const FEASIBILITY_TOL: f64 = 1e-9;

/// Largest total mass a measure may carry.
pub const MAX_TOTAL_MASS: f64 = 1.0 + 1e-12;

/// A finitely supported nonnegative measure of total mass at most one.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure {
    weights: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if let Some((i, w)) = weights.iter().enumerate().find(|(_, w)| !(**w >= 0.0) || !w.is_finite()) {
            return Err(DidmError::ContractViolation(format!(
                "weight {i} is {w}; weights must be finite and nonnegative"
            )));
        }
        let mass: f64 = weights.iter().sum();
        if mass > MAX_TOTAL_MASS {
            return Err(DidmError::ContractViolation(format!(
                "total mass {mass} exceeds one"
            )));
        }
        Ok(DiscreteMeasure { weights })
    }

    /// Mass `1/n` on each of `n` points.
    pub fn uniform(n: usize) -> Self {
        DiscreteMeasure {
            weights: vec![1.0 / n as f64; n],
        }
    }

    /// The zero measure on `n` points.
    pub fn zero(n: usize) -> Self {
        DiscreteMeasure {
            weights: vec![0.0; n],
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// A coupling together with the objective it attains.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportPlan {
    pub plan: Array2<f64>,
    pub objective: f64,
}

impl TransportPlan {
    /// Writes the plan as CSV (one row per source point, 17 significant digits).
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut out = String::new();
        writeln!(out, "# objective: {:.16e}", self.objective).unwrap();
        for row in self.plan.rows() {
            let fields: Vec<String> = row.iter().map(|x| format!("{x:.16e}")).collect();
            writeln!(out, "{}", fields.join(",")).unwrap();
        }
        fs::write(path, out).map_err(|e| DidmError::io(path, e))
    }
}

fn check_shape(cost: &ArrayView2<'_, f64>, mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<()> {
    if cost.dim() != (mu.len(), nu.len()) {
        return Err(DidmError::DimensionMismatch(format!(
            "cost is {:?} but measures have sizes ({}, {})",
            cost.dim(),
            mu.len(),
            nu.len()
        )));
    }
    Ok(())
}

fn dense_plan(m: usize, n: usize, sol: &simplex::Solution) -> Array2<f64> {
    let mut plan = Array2::zeros((m, n));
    for c in sol.cells.iter().filter(|c| c.row < m && c.col < n) {
        plan[[c.row, c.col]] += c.flow;
    }
    plan
}

/// Exact balanced optimal transport between measures of equal total mass.
pub fn solve_balanced_ot(
    cost: ArrayView2<'_, f64>,
    mu: &DiscreteMeasure,
    nu: &DiscreteMeasure,
) -> Result<TransportPlan> {
    check_shape(&cost, mu, nu)?;
    let (a, b) = (mu.total_mass(), nu.total_mass());
    if (a - b).abs() > FEASIBILITY_TOL {
        return Err(DidmError::ContractViolation(format!(
            "balanced transport needs equal masses, got {a} and {b}"
        )));
    }
    if (mu.is_empty() && b > 0.0) || (nu.is_empty() && a > 0.0) {
        return Err(DidmError::Infeasible("empty support facing positive mass".into()));
    }
    let flat = cost.iter().copied().collect::<Vec<_>>();
    let sol = simplex::solve_transport(&flat, mu.weights(), nu.weights())?;
    Ok(TransportPlan {
        plan: dense_plan(mu.len(), nu.len(), &sol),
        objective: sol.objective,
    })
}

/// Exact unbalanced optimal transport (transport cost plus the mass difference).
///
/// When one measure is zero the only coupling is zero, and the value is the other
/// measure's mass. The returned plan keeps the caller's orientation.
pub fn solve_unbalanced_ot(
    cost: ArrayView2<'_, f64>,
    mu: &DiscreteMeasure,
    nu: &DiscreteMeasure,
) -> Result<TransportPlan> {
    check_shape(&cost, mu, nu)?;
    let (m, n) = cost.dim();
    let flat = cost.iter().copied().collect::<Vec<_>>();
    let (sol, gap) = unbalanced_solution(&flat, mu.weights(), nu.weights())?;
    Ok(TransportPlan {
        plan: dense_plan(m, n, &sol),
        objective: sol.objective + gap,
    })
}

/// Objective of [`solve_unbalanced_ot`] for a row-major cost slice, without
/// materialising the plan. Weights must already be validated.
pub(crate) fn unbalanced_value(cost: &[f64], mu: &[f64], nu: &[f64]) -> Result<f64> {
    let (sol, gap) = unbalanced_solution(cost, mu, nu)?;
    Ok(sol.objective + gap)
}

/// Transport part of the unbalanced problem and the mass gap `|a - b|`.
fn unbalanced_solution(cost: &[f64], mu: &[f64], nu: &[f64]) -> Result<(simplex::Solution, f64)> {
    let (m, n) = (mu.len(), nu.len());
    let a: f64 = mu.iter().sum();
    let b: f64 = nu.iter().sum();
    let gap = (a - b).abs();
    if a <= 0.0 || b <= 0.0 {
        if let Some(bad) = cost.iter().find(|x| !x.is_finite()) {
            return Err(DidmError::ContractViolation(format!("non-finite cost entry {bad}")));
        }
        let empty = simplex::Solution {
            cells: Vec::new(),
            objective: 0.0,
        };
        return Ok((empty, gap));
    }
    let sol = if a < b {
        // reservoir row: supplies the part of ν that μ cannot fill
        let mut c = cost.to_vec();
        c.extend(std::iter::repeat_n(0.0, n));
        let mut s = mu.to_vec();
        s.push(b - a);
        simplex::solve_transport(&c, &s, nu)?
    } else if a > b {
        // reservoir column: absorbs the part of μ that ν cannot take
        let mut c = Vec::with_capacity(m * (n + 1));
        for row in cost.chunks(n) {
            c.extend_from_slice(row);
            c.push(0.0);
        }
        let mut t = nu.to_vec();
        t.push(a - b);
        simplex::solve_transport(&c, mu, &t)?
    } else {
        simplex::solve_transport(cost, mu, nu)?
    };
    Ok((sol, gap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn measure(w: &[f64]) -> DiscreteMeasure {
        DiscreteMeasure::new(w.to_vec()).unwrap()
    }

    #[test]
    fn forced_single_point_plan() {
        let p = solve_balanced_ot(array![[5.0]].view(), &measure(&[1.0]), &measure(&[1.0])).unwrap();
        assert_eq!(p.objective, 5.0);
        assert_eq!(p.plan, array![[1.0]]);
    }

    #[test]
    fn balanced_two_by_two() {
        let cost = array![[0.0, 1.0], [1.0, 0.0]];
        let p = solve_balanced_ot(cost.view(), &measure(&[0.5, 0.5]), &measure(&[0.25, 0.75])).unwrap();
        assert!((p.objective - 0.25).abs() < 1e-12);
        assert!(check_plan_feasibility(&p, &measure(&[0.5, 0.5]), &measure(&[0.25, 0.75]), true).is_empty());
    }

    #[test]
    fn zero_cost_zero_objective() {
        let mu = measure(&[0.2, 0.3, 0.5]);
        let p = solve_balanced_ot(Array2::zeros((3, 3)).view(), &mu, &mu).unwrap();
        assert_eq!(p.objective, 0.0);
    }

    #[test]
    fn balanced_rejects_mass_mismatch_and_empty_support() {
        let cost = Array2::zeros((1, 1));
        assert!(matches!(
            solve_balanced_ot(cost.view(), &measure(&[0.5]), &measure(&[0.6])),
            Err(DidmError::ContractViolation(_))
        ));
        assert!(matches!(
            solve_balanced_ot(Array2::zeros((0, 1)).view(), &measure(&[]), &measure(&[1e-10])),
            Err(DidmError::Infeasible(_))
        ));
    }

    #[test]
    fn unbalanced_against_zero_measure() {
        let p = solve_unbalanced_ot(array![[3.0]].view(), &measure(&[0.5]), &DiscreteMeasure::zero(1)).unwrap();
        assert_eq!(p.objective, 0.5);
        assert_eq!(p.plan.sum(), 0.0);
    }

    #[test]
    fn unbalanced_identity_is_free() {
        let mu = measure(&[0.1, 0.4, 0.3]);
        let cost = array![[0.0, 1.0, 2.0], [1.0, 0.0, 1.0], [2.0, 1.0, 0.0]];
        assert!(solve_unbalanced_ot(cost.view(), &mu, &mu).unwrap().objective.abs() < 1e-15);
    }

    #[test]
    fn unbalanced_mass_stays_put() {
        let cost = array![[0.0, 1.0]];
        let p = solve_unbalanced_ot(cost.view(), &measure(&[0.5]), &measure(&[0.5, 0.5])).unwrap();
        assert!((p.objective - 0.5).abs() < 1e-15);
        assert_eq!(p.plan, array![[0.5, 0.0]]);
        // heavier side first: the reservoir moves to the other side
        let q = solve_unbalanced_ot(cost.t(), &measure(&[0.5, 0.5]), &measure(&[0.5])).unwrap();
        assert!((q.objective - 0.5).abs() < 1e-15);
        assert_eq!(q.plan, array![[0.5], [0.0]]);
    }

    #[test]
    fn rejects_negative_weight_and_excess_mass() {
        assert!(DiscreteMeasure::new(vec![0.5, -0.1]).is_err());
        assert!(DiscreteMeasure::new(vec![0.7, 0.7]).is_err());
        assert!(DiscreteMeasure::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn plan_csv_dump() {
        let dir = tempfile::tempdir().unwrap();
        let p = solve_balanced_ot(array![[5.0]].view(), &measure(&[1.0]), &measure(&[1.0])).unwrap();
        let path = dir.path().join("plan.csv");
        p.write_csv(&path).unwrap();
        let text = std::fs::read_to_string(path).unwrap();
        assert!(text.lines().nth(1).unwrap().starts_with("1.0000000000000000e0"));
    }
}
