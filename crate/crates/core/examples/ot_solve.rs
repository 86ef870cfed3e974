//! Balanced and unbalanced transport between two small discrete measures, with the
//! optimal plan dumped as CSV.

use didm::ot::{check_plan_feasibility, solve_balanced_ot, solve_unbalanced_ot, DiscreteMeasure};
use ndarray::array;

fn main() -> didm::Result<()> {
    let cost = array![[0.0, 1.0, 2.0], [1.0, 0.0, 1.0]];

    let mu = DiscreteMeasure::new(vec![0.5, 0.5])?;
    let nu = DiscreteMeasure::new(vec![0.2, 0.3, 0.5])?;
    let balanced = solve_balanced_ot(cost.view(), &mu, &nu)?;
    println!("balanced OT = {}", balanced.objective);
    println!("plan:\n{}", balanced.plan);

    // 0.4 of mass is missing on the left; it is paid for once, at unit cost
    let light = DiscreteMeasure::new(vec![0.3, 0.3])?;
    let unbalanced = solve_unbalanced_ot(cost.view(), &light, &nu)?;
    println!("unbalanced OT = {} (includes mass gap 0.4)", unbalanced.objective);
    assert!(check_plan_feasibility(&unbalanced, &light, &nu, false).is_empty());

    let path = std::env::temp_dir().join("didm_plan.csv");
    unbalanced.write_csv(&path)?;
    println!("plan written to {}", path.display());
    Ok(())
}
