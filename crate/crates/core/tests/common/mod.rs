//! Helpers shared by the integration tests: an enumeration oracle for unbalanced
//! transport, a DIDM evaluator built on it, and seeded random inputs.
#![allow(dead_code)]

use didm::graph_model::GraphSignal;
use ndarray::Array2;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Solves the square system `m x = rhs` by Gaussian elimination with partial
/// pivoting. `None` when the matrix is singular.
fn solve_square(mut m: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Option<Vec<f64>> {
    let k = rhs.len();
    for col in 0..k {
        let piv = (col..k).max_by(|&a, &b| m[a][col].abs().partial_cmp(&m[b][col].abs()).unwrap())?;
        if m[piv][col].abs() < 1e-12 {
            return None;
        }
        m.swap(col, piv);
        rhs.swap(col, piv);
        for r in 0..k {
            if r != col {
                let f = m[r][col] / m[col][col];
                if f != 0.0 {
                    for c in col..k {
                        m[r][c] -= f * m[col][c];
                    }
                    rhs[r] -= f * rhs[col];
                }
            }
        }
    }
    Some((0..k).map(|i| rhs[i] / m[i][i]).collect())
}

fn subsets(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for i in start..n {
        if n - i < k - cur.len() {
            break;
        }
        cur.push(i);
        subsets(n, k, i + 1, cur, out);
        cur.pop();
    }
}

/// Unbalanced transport value by enumerating every basic feasible solution of
///
/// ```text
/// Σ_j γ_ij = a_i (lighter side),  Σ_i γ_ij + s_j = b_j (heavier side),  γ, s ≥ 0
/// ```
///
/// and adding the mass difference. Cost is row-major `mu.len() × nu.len()`.
pub fn oracle_unbalanced(cost: &[f64], mu: &[f64], nu: &[f64]) -> f64 {
    let (ma, mb): (f64, f64) = (mu.iter().sum(), nu.iter().sum());
    if ma <= 0.0 || mb <= 0.0 || mu.is_empty() || nu.is_empty() {
        return (ma - mb).abs();
    }
    // orient so that the rows are the lighter side
    let (m, n) = (mu.len(), nu.len());
    let (rows, cols, c): (Vec<f64>, Vec<f64>, Vec<f64>) = if ma <= mb {
        (mu.to_vec(), nu.to_vec(), cost.to_vec())
    } else {
        let t = (0..n).flat_map(|j| (0..m).map(move |i| cost[i * n + j])).collect();
        (nu.to_vec(), mu.to_vec(), t)
    };
    let (m, n) = (rows.len(), cols.len());
    let vars = m * n + n;
    let eqs = m + n;
    let column = |v: usize| -> Vec<f64> {
        let mut col = vec![0.0; eqs];
        if v < m * n {
            col[v / n] = 1.0;
            col[m + v % n] = 1.0;
        } else {
            col[m + (v - m * n)] = 1.0;
        }
        col
    };
    let rhs: Vec<f64> = rows.iter().chain(cols.iter()).copied().collect();
    let mut bases = Vec::new();
    subsets(vars, eqs, 0, &mut Vec::new(), &mut bases);
    let mut best = f64::INFINITY;
    for basis in bases {
        let mat: Vec<Vec<f64>> = (0..eqs).map(|r| basis.iter().map(|&v| column(v)[r]).collect()).collect();
        let Some(x) = solve_square(mat, rhs.clone()) else { continue };
        if x.iter().any(|&v| v < -1e-12) {
            continue;
        }
        let obj: f64 = basis.iter().zip(&x).filter(|(&v, _)| v < m * n).map(|(&v, &xv)| c[v] * xv).sum();
        best = best.min(obj);
    }
    best + (ma - mb).abs()
}

/// DIDM distance evaluated with [`oracle_unbalanced`] on full (unrestricted) neighbor
/// measures.
pub fn oracle_didm(g: &GraphSignal, h: &GraphSignal, depth: usize) -> f64 {
    let (ng, nh) = (g.node_count(), h.node_count());
    let mut c = Array2::from_shape_fn((ng, nh), |(x, y)| {
        let d: f64 = g.attribute(x).iter().zip(h.attribute(y)).map(|(a, b)| (a - b) * (a - b)).sum();
        d.sqrt()
    });
    for _ in 0..depth {
        let mut next = c.clone();
        for x in 0..ng {
            for y in 0..nh {
                let mu: Vec<f64> = g.adjacency().row(x).iter().map(|a| a / ng as f64).collect();
                let nu: Vec<f64> = h.adjacency().row(y).iter().map(|a| a / nh as f64).collect();
                next[[x, y]] += oracle_unbalanced(c.as_slice().unwrap(), &mu, &nu);
            }
        }
        c = next;
    }
    oracle_unbalanced(c.as_slice().unwrap(), &vec![1.0 / ng as f64; ng], &vec![1.0 / nh as f64; nh])
}

/// Weights on `len` points with total mass at most one; roughly one in five
/// entries is zero.
pub fn random_weights(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..len)
        .map(|_| if rng.random_bool(0.2) { 0.0 } else { rng.random::<f64>() })
        .collect();
    let total: f64 = raw.iter().sum();
    if total == 0.0 {
        return raw;
    }
    let mass = rng.random_range(0.05..=1.0);
    raw.iter().map(|w| w / total * mass).collect()
}

/// Nonnegative costs; half of the instances use small integers to create ties.
pub fn random_cost(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    let integer = rng.random_bool(0.5);
    (0..len)
        .map(|_| if integer { rng.random_range(0..4) as f64 } else { rng.random_range(0.0..5.0) })
        .collect()
}

/// A random graph-signal with up to `max_nodes` nodes. Edge weights are 0/1 or, with
/// `weighted`, uniform in (0, 1]. Attributes lie in `[-1, 1]^dim`.
pub fn random_graph(rng: &mut ChaCha8Rng, max_nodes: usize, dim: usize, weighted: bool) -> GraphSignal {
    let n = rng.random_range(1..=max_nodes);
    let p = rng.random_range(0.1..0.8);
    let mut a = Array2::zeros((n, n));
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(p) {
                let w = if weighted { 1.0 - rng.random::<f64>() } else { 1.0 };
                a[[i, j]] = w;
                a[[j, i]] = w;
            }
        }
    }
    let f = Array2::from_shape_simple_fn((n, dim), || rng.random_range(-1.0..=1.0));
    GraphSignal::new(a, f).expect("valid by construction")
}

pub fn random_permutation(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}
