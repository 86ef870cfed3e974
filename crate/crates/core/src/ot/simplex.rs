//! Transportation simplex for the balanced problem
//! `min Σ c_ij x_ij  s.t.  Σ_j x_ij = s_i, Σ_i x_ij = t_j, x ≥ 0`.
//!
//! The basis is a spanning tree on the bipartite row/column graph with `m + n - 1`
//! cells (degenerate cells carry zero flow). Pricing is Dantzig's rule; after a run of
//! degenerate pivots the solver switches to Bland's smallest-index rule, which cannot
//! cycle.

use std::collections::VecDeque;

use crate::error::{DidmError, Result};

/// A basic cell `(row, col)` and its flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Cell {
    pub row: usize,
    pub col: usize,
    pub flow: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct Solution {
    pub cells: Vec<Cell>,
    pub objective: f64,
}

const DEGENERATE_STREAK_LIMIT: usize = 32;

/// Solves the balanced problem. `cost` is row-major `m × n`.
///
/// Rows and columns with zero mass are removed before pivoting. The row sums of the
/// result are exact; column sums absorb any residual imbalance between `supply` and
/// `demand`, so callers must check balance beforehand.
pub(crate) fn solve_transport(cost: &[f64], supply: &[f64], demand: &[f64]) -> Result<Solution> {
    let (m_all, n_all) = (supply.len(), demand.len());
    debug_assert_eq!(cost.len(), m_all * n_all);

    let rows: Vec<usize> = (0..m_all).filter(|&i| supply[i] > 0.0).collect();
    let cols: Vec<usize> = (0..n_all).filter(|&j| demand[j] > 0.0).collect();
    if rows.is_empty() || cols.is_empty() {
        if rows.is_empty() && cols.is_empty() {
            return Ok(Solution {
                cells: Vec::new(),
                objective: 0.0,
            });
        }
        return Err(DidmError::Infeasible(
            "one side has positive mass and the other has none".into(),
        ));
    }

    let (m, n) = (rows.len(), cols.len());
    let c: Vec<f64> = rows
        .iter()
        .flat_map(|&i| cols.iter().map(move |&j| cost[i * n_all + j]))
        .collect();
    if let Some(bad) = c.iter().find(|x| !x.is_finite()) {
        return Err(DidmError::ContractViolation(format!("non-finite cost entry {bad}")));
    }
    let s: Vec<f64> = rows.iter().map(|&i| supply[i]).collect();
    let t: Vec<f64> = cols.iter().map(|&j| demand[j]).collect();

    let mut tree = BasisTree::northwest_corner(m, n, &s, &t);
    tree.optimize(&c)?;

    let objective = tree.cells.iter().map(|e| c[e.row * n + e.col] * e.flow).sum();
    let cells = tree
        .cells
        .into_iter()
        .filter(|e| e.flow > 0.0)
        .map(|e| Cell {
            row: rows[e.row],
            col: cols[e.col],
            flow: e.flow,
        })
        .collect();
    Ok(Solution { cells, objective })
}

struct BasisTree {
    m: usize,
    n: usize,
    cells: Vec<Cell>,
    /// Basis indices touching each tree node; nodes `0..m` are rows, `m..m+n` columns.
    incident: Vec<Vec<usize>>,
    is_basic: Vec<bool>,
}

impl BasisTree {
    fn northwest_corner(m: usize, n: usize, s: &[f64], t: &[f64]) -> Self {
        let mut rem_s = s.to_vec();
        let mut rem_t = t.to_vec();
        let mut cells = Vec::with_capacity(m + n - 1);
        let (mut i, mut j) = (0, 0);
        loop {
            if i == m - 1 && j == n - 1 {
                // The last cell takes whatever the final row still holds.
                cells.push(Cell {
                    row: i,
                    col: j,
                    flow: rem_s[i].max(0.0),
                });
                break;
            }
            let x = rem_s[i].min(rem_t[j]).max(0.0);
            cells.push(Cell { row: i, col: j, flow: x });
            rem_s[i] -= x;
            rem_t[j] -= x;
            if j == n - 1 || (i < m - 1 && rem_s[i] <= rem_t[j]) {
                i += 1;
            } else {
                j += 1;
            }
        }
        let mut tree = BasisTree {
            m,
            n,
            cells,
            incident: vec![Vec::new(); m + n],
            is_basic: vec![false; m * n],
        };
        for k in 0..tree.cells.len() {
            tree.link(k);
        }
        tree
    }

    fn link(&mut self, k: usize) {
        let Cell { row, col, .. } = self.cells[k];
        self.incident[row].push(k);
        self.incident[self.m + col].push(k);
        self.is_basic[row * self.n + col] = true;
    }

    fn unlink(&mut self, k: usize) {
        let Cell { row, col, .. } = self.cells[k];
        self.incident[row].retain(|&e| e != k);
        self.incident[self.m + col].retain(|&e| e != k);
        self.is_basic[row * self.n + col] = false;
    }

    fn other_end(&self, k: usize, node: usize) -> usize {
        let e = self.cells[k];
        if node < self.m {
            self.m + e.col
        } else {
            e.row
        }
    }

    /// Dual potentials with `u_0 = 0` and `c_ij = u_i + v_j` on every basic cell.
    fn potentials(&self, c: &[f64], pot: &mut [f64], queue: &mut VecDeque<usize>, seen: &mut [bool]) {
        seen.fill(false);
        pot[0] = 0.0;
        seen[0] = true;
        queue.clear();
        queue.push_back(0);
        while let Some(node) = queue.pop_front() {
            for &k in &self.incident[node] {
                let next = self.other_end(k, node);
                if !seen[next] {
                    let e = self.cells[k];
                    let ce = c[e.row * self.n + e.col];
                    pot[next] = ce - pot[node];
                    seen[next] = true;
                    queue.push_back(next);
                }
            }
        }
    }

    /// Basis indices on the tree path from `from` to `to`, ordered starting at `from`.
    fn path(&self, from: usize, to: usize, parent: &mut [Option<usize>], queue: &mut VecDeque<usize>) -> Vec<usize> {
        parent.fill(None);
        queue.clear();
        queue.push_back(from);
        let mut reached = vec![false; self.m + self.n];
        reached[from] = true;
        while let Some(node) = queue.pop_front() {
            if node == to {
                break;
            }
            for &k in &self.incident[node] {
                let next = self.other_end(k, node);
                if !reached[next] {
                    reached[next] = true;
                    parent[next] = Some(k);
                    queue.push_back(next);
                }
            }
        }
        let mut path = Vec::new();
        let mut node = to;
        while node != from {
            let k = parent[node].expect("basis is a spanning tree");
            path.push(k);
            node = self.other_end(k, node);
        }
        path.reverse();
        path
    }

    fn optimize(&mut self, c: &[f64]) -> Result<()> {
        let (m, n) = (self.m, self.n);
        let scale = c.iter().fold(1.0f64, |a, &x| a.max(x.abs()));
        let tol = 1e-12 * scale;
        let max_iter = 50 * (m + n) * (m + n) + 1000;

        let mut pot = vec![0.0; m + n];
        let mut queue = VecDeque::with_capacity(m + n);
        let mut seen = vec![false; m + n];
        let mut parent = vec![None; m + n];
        let mut degenerate_streak = 0;
        let mut bland = false;

        for _ in 0..max_iter {
            self.potentials(c, &mut pot, &mut queue, &mut seen);

            let mut entering = None;
            let mut best = -tol;
            'pricing: for i in 0..m {
                for j in 0..n {
                    if self.is_basic[i * n + j] {
                        continue;
                    }
                    let r = c[i * n + j] - pot[i] - pot[m + j];
                    if r < best {
                        entering = Some((i, j));
                        if bland {
                            break 'pricing;
                        }
                        best = r;
                    }
                }
            }
            let Some((ei, ej)) = entering else {
                return Ok(());
            };

            // Cycle: entering cell (+), then the tree path from column ej back to row ei
            // with alternating signs starting at (-).
            let path = self.path(m + ej, ei, &mut parent, &mut queue);
            let mut leave_pos = None;
            let mut theta = f64::INFINITY;
            for (p, &k) in path.iter().enumerate().step_by(2) {
                let e = self.cells[k];
                let better = e.flow < theta
                    || (bland
                        && e.flow == theta
                        && leave_pos.is_some_and(|lp: usize| {
                            let l = self.cells[path[lp]];
                            e.row * n + e.col < l.row * n + l.col
                        }));
                if better {
                    theta = e.flow;
                    leave_pos = Some(p);
                }
            }
            let leave = path[leave_pos.expect("cycle has a minus cell")];

            for (p, &k) in path.iter().enumerate() {
                if p % 2 == 0 {
                    self.cells[k].flow -= theta;
                } else {
                    self.cells[k].flow += theta;
                }
            }
            self.cells[leave].flow = 0.0;

            self.unlink(leave);
            self.cells[leave] = Cell {
                row: ei,
                col: ej,
                flow: theta,
            };
            self.link(leave);

            if theta <= 0.0 {
                degenerate_streak += 1;
                if degenerate_streak > DEGENERATE_STREAK_LIMIT {
                    bland = true;
                }
            } else {
                degenerate_streak = 0;
            }
        }
        Err(DidmError::Infeasible(format!(
            "transportation simplex did not converge within {max_iter} pivots ({m}x{n})"
        )))
    }
}
