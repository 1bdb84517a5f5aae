//! Optimise X=Y, inspect how close the angles sit to their transition
//! points and read a classical cut off them.

use xqaoa::analytic::{AngleAssignment, Variant};
use xqaoa::baselines::{extract_cut_xeqy, snapped_objective, transition_distances};
use xqaoa::graph::{brute_force_maxcut, generate_regular};
use xqaoa::optimize::{multistart, random_params, AnalyticObjective, OptimizerConfig};
use xqaoa::rng::Rng;

fn main() -> xqaoa::Result<()> {
    let g = generate_regular(22, 3, 8)?;
    let optimum = brute_force_maxcut(&g)?.cut_value;
    let f = AnalyticObjective::new(&g, Variant::XeqY);
    let ms = multistart(&f, |rng: &mut Rng| random_params(Variant::XeqY, &g, rng), 30, 2, &OptimizerConfig::default())?;
    let a = AngleAssignment::from_params(&g, Variant::XeqY, &ms.best_run().x_final)?;

    let (dg, db) = transition_distances(&g, &a);
    let near = |d: &[f64]| d.iter().filter(|&&x| x <= 0.15).count();
    println!("within 0.15 of a transition point: γ {}/{}, β {}/{}", near(&dg), dg.len(), near(&db), db.len());

    let ex = extract_cut_xeqy(&g, &a)?;
    println!("⟨C⟩ = {:.6}, extracted cut {} of {optimum}", ms.best_value(), ex.cut.cut_value);
    println!("objective at snapped angles {}", snapped_objective(&g, &ex));
    println!("partition {:?}", ex.cut.assignment);
    for w in &ex.warnings {
        println!("warning: {w}");
    }
    Ok(())
}
