//! Multistart L-BFGS on the closed-form X=Y objective.

use xqaoa::analytic::Variant;
use xqaoa::graph::{brute_force_maxcut, generate_regular};
use xqaoa::optimize::{multistart, random_params, AnalyticObjective, OptimizerConfig};
use xqaoa::rng::Rng;

fn main() -> xqaoa::Result<()> {
    let g = generate_regular(24, 3, 3)?;
    let optimum = brute_force_maxcut(&g)?.cut_value;
    let cfg = OptimizerConfig::default();

    for variant in [Variant::Qaoa, Variant::Ma, Variant::XeqY] {
        let f = AnalyticObjective::new(&g, variant);
        let ms = multistart(&f, |rng: &mut Rng| random_params(variant, &g, rng), 20, 7, &cfg)?;
        let best = ms.best_run();
        let converged = ms.runs.iter().filter(|r| r.converged).count();
        println!(
            "{:>5}: best ⟨C⟩ {:.4} (ratio {:.4}), {converged}/20 converged, {} evaluations on the best run",
            variant.name(),
            best.best_value,
            best.best_value / optimum,
            best.evaluations
        );
    }

    let f = AnalyticObjective::new(&g, Variant::XeqY);
    let ms = multistart(&f, |rng: &mut Rng| random_params(Variant::XeqY, &g, rng), 1, 11, &cfg)?;
    println!("trace of one X=Y run (evaluations, value):");
    for (evals, value) in ms.best_run().objective_trace.iter().step_by(5) {
        println!("  {evals:>6} {value:.6}");
    }
    Ok(())
}
