//! Distance between two attributed graphs at several depths, and the cost-matrix
//! stack behind it.

use didm::graph_model::GraphSignal;
use didm::metric::{didm_distance, CostMatrixStack};

fn main() -> didm::Result<()> {
    // a triangle and a path, both with one-dimensional attributes
    let triangle = GraphSignal::from_edges(3, &[(0, 1), (1, 2), (0, 2)], vec![vec![1.0], vec![1.0], vec![0.0]])?;
    let path = GraphSignal::from_edges(3, &[(0, 1), (1, 2)], vec![vec![1.0], vec![1.0], vec![0.0]])?;

    for depth in 0..=3 {
        println!("depth {depth}: δ = {:.6}", didm_distance(&triangle, &path, depth)?);
    }

    let stack = CostMatrixStack::build(&triangle, &path, 2)?;
    for (level, c) in stack.matrices().iter().enumerate() {
        println!("C_{level} =\n{c:.4}");
    }

    let relabeled = path.permuted(&[2, 0, 1])?;
    println!("path vs relabeled path: {:.1e}", didm_distance(&path, &relabeled, 3)?);
    Ok(())
}
