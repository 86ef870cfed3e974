//! Constants of a bounded hypothesis class and the (log) generalization bound as the
//! sample count grows.

use didm::mpnn::{generalization_bound_log, generalization_constants, xi_inverse, CoveringParams};

fn main() -> didm::Result<()> {
    let k = generalization_constants(1.0, 0.5, 2, 1.0, 1.0, 0.0)?;
    println!("class constants: C_Θ = {}, B_Θ = {}; loss constants C = {}, B = {}", k.c_theta, k.b_theta, k.c, k.b);

    let cov = CoveringParams { c: 2.0, r: 1.0 };
    for n in [1e3, 1e6, 1e9, 1e30, 1e300] {
        let eps = xi_inverse(n, cov)?;
        let log_bound = generalization_bound_log(n, 0.05, k.c, k.b, cov)?;
        println!("N = {n:e}: ξ⁻¹(N) = {eps:.4}, ln bound = {log_bound:.4}");
    }
    Ok(())
}
