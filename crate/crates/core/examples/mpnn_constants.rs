//! Builds a GIN-style and a graph-convolution model, runs them on a graph, and prints
//! the feature bounds and the Lipschitz constant relating outputs to distances.

use didm::graph_model::{generate_sbm, SbmSpec};
use didm::metric::didm_distance;
use didm::mpnn::{init_gc_meanpool, init_gin_meanpool, lipschitz_constants, output_distance};

fn main() -> didm::Result<()> {
    let spec = |q, seed| SbmSpec { block_sizes: vec![8, 8], intra_p: 0.6, inter_q: q, seed };
    let g = generate_sbm(&spec(0.1, 1))?.with_attributes(ndarray::Array2::ones((16, 1)))?;
    let h = generate_sbm(&spec(0.4, 2))?.with_attributes(ndarray::Array2::ones((16, 1)))?;
    let delta = didm_distance(&g, &h, 2)?;

    for model in [init_gin_meanpool(2, 16, 1, 16, 0)?, init_gc_meanpool(2, 16, 1, 16, 0)?] {
        let k = lipschitz_constants(&model, 1.0)?;
        let pass = model.forward(&g)?;
        let largest: Vec<f64> = pass
            .layer_features
            .iter()
            .map(|f| f.rows().into_iter().map(|r| r.dot(&r).sqrt()).fold(0.0, f64::max))
            .collect();
        println!("{:?}", model.family());
        println!("  largest node feature per layer {largest:.3?}");
        println!("  feature bounds B^t            {:.3?}", k.feature_bounds);
        let d = output_distance(&model.output(&g)?, &model.output(&h)?);
        println!("  |out(g) - out(h)| = {d:.4e} <= C·δ = {:.3e}·{delta:.4} = {:.3e}", k.c_model, k.c_model * delta);
    }
    Ok(())
}
