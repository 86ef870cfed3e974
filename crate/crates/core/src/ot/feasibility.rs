use std::fmt;

use super::{DiscreteMeasure, TransportPlan, FEASIBILITY_TOL};

/// One way a plan fails to be a coupling of its measures.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    Shape { expected: (usize, usize), actual: (usize, usize) },
    NegativeEntry { row: usize, col: usize, value: f64 },
    RowSum { row: usize, expected: f64, actual: f64 },
    ColumnSum { col: usize, expected: f64, actual: f64 },
    RowExceeds { row: usize, bound: f64, actual: f64 },
    ColumnExceeds { col: usize, bound: f64, actual: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Shape { expected, actual } => {
                write!(f, "plan shape {actual:?}, expected {expected:?}")
            }
            Violation::NegativeEntry { row, col, value } => {
                write!(f, "entry ({row}, {col}) is negative: {value}")
            }
            Violation::RowSum { row, expected, actual } => {
                write!(f, "row {row} sums to {actual}, expected {expected}")
            }
            Violation::ColumnSum { col, expected, actual } => {
                write!(f, "column {col} sums to {actual}, expected {expected}")
            }
            Violation::RowExceeds { row, bound, actual } => {
                write!(f, "row {row} sums to {actual}, above {bound}")
            }
            Violation::ColumnExceeds { col, bound, actual } => {
                write!(f, "column {col} sums to {actual}, above {bound}")
            }
        }
    }
}

/// Lists every marginal or sign constraint the plan breaks, within `1e-9`.
///
/// With `balanced` both marginals must match. Otherwise the marginal on the lighter
/// side must match and the heavier side only bounds the plan from above.
pub fn check_plan_feasibility(
    plan: &TransportPlan,
    mu: &DiscreteMeasure,
    nu: &DiscreteMeasure,
    balanced: bool,
) -> Vec<Violation> {
    let expected = (mu.len(), nu.len());
    if plan.plan.dim() != expected {
        return vec![Violation::Shape {
            expected,
            actual: plan.plan.dim(),
        }];
    }
    let mut out = Vec::new();
    for ((row, col), &value) in plan.plan.indexed_iter() {
        if value < -FEASIBILITY_TOL {
            out.push(Violation::NegativeEntry { row, col, value });
        }
    }
    let rows_exact = balanced || mu.total_mass() <= nu.total_mass();
    let cols_exact = balanced || nu.total_mass() <= mu.total_mass();
    for (row, r) in plan.plan.rows().into_iter().enumerate() {
        let (actual, bound) = (r.sum(), mu.weights()[row]);
        if rows_exact && (actual - bound).abs() > FEASIBILITY_TOL {
            out.push(Violation::RowSum { row, expected: bound, actual });
        } else if !rows_exact && actual > bound + FEASIBILITY_TOL {
            out.push(Violation::RowExceeds { row, bound, actual });
        }
    }
    for (col, c) in plan.plan.columns().into_iter().enumerate() {
        let (actual, bound) = (c.sum(), nu.weights()[col]);
        if cols_exact && (actual - bound).abs() > FEASIBILITY_TOL {
            out.push(Violation::ColumnSum { col, expected: bound, actual });
        } else if !cols_exact && actual > bound + FEASIBILITY_TOL {
            out.push(Violation::ColumnExceeds { col, bound, actual });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ot::solve_balanced_ot;
    use ndarray::array;

    fn m(w: &[f64]) -> DiscreteMeasure {
        DiscreteMeasure::new(w.to_vec()).unwrap()
    }

    #[test]
    fn optimal_plan_has_no_violations() {
        let (mu, nu) = (m(&[0.5, 0.5]), m(&[0.25, 0.75]));
        let p = solve_balanced_ot(array![[0.0, 1.0], [1.0, 0.0]].view(), &mu, &nu).unwrap();
        assert!(check_plan_feasibility(&p, &mu, &nu, true).is_empty());
    }

    #[test]
    fn off_row_is_named() {
        let (mu, nu) = (m(&[0.5, 0.5]), m(&[0.5, 0.5]));
        let p = TransportPlan {
            plan: array![[0.5, 0.001], [0.0, 0.499]],
            objective: 0.0,
        };
        let v = check_plan_feasibility(&p, &mu, &nu, true);
        assert_eq!(v.len(), 2);
        assert!(matches!(v[0], Violation::RowSum { row: 0, .. }));
        assert!(v[0].to_string().contains("row 0"));
    }

    #[test]
    fn negative_entry_flagged() {
        let (mu, nu) = (m(&[0.5, 0.5]), m(&[0.5, 0.5]));
        let p = TransportPlan {
            plan: array![[0.6, -0.1], [-0.1, 0.6]],
            objective: 0.0,
        };
        let v = check_plan_feasibility(&p, &mu, &nu, true);
        assert!(v.iter().any(|x| matches!(x, Violation::NegativeEntry { row: 0, col: 1, .. })));
    }

    #[test]
    fn unbalanced_allows_slack_on_heavier_side() {
        let (mu, nu) = (m(&[0.5]), m(&[0.5, 0.5]));
        let p = TransportPlan {
            plan: array![[0.25, 0.25]],
            objective: 0.0,
        };
        assert!(check_plan_feasibility(&p, &mu, &nu, false).is_empty());
        assert_eq!(check_plan_feasibility(&p, &mu, &nu, true).len(), 2);
        let over = TransportPlan {
            plan: array![[0.0, 0.6]],
            objective: 0.0,
        };
        assert!(!check_plan_feasibility(&over, &m(&[0.6]), &nu, false).is_empty());
    }
}
