//! Classical-Relaxed and Goemans-Williamson on a weighted graph.

use rand::Rng as _;
use xqaoa::baselines::{classical_relaxed, gw_certificate, gw_default_rank, gw_round, gw_solve};
use xqaoa::graph::{brute_force_maxcut, generate_regular};
use xqaoa::optimize::OptimizerConfig;
use xqaoa::rng::rng_from_seed;

fn main() -> xqaoa::Result<()> {
    let mut rng = rng_from_seed(4);
    let g = generate_regular(18, 4, 4)?.reweighted(|_| rng.random_range(0.1..2.0))?;
    let optimum = brute_force_maxcut(&g)?.cut_value;
    println!("optimum {optimum:.4}");

    let (relaxed, cut) = classical_relaxed(&g, 50, 1, &OptimizerConfig::default())?;
    println!("CR: relaxed objective {:.4}, rounded cut {:.4}", relaxed.objective_value, cut.cut_value);

    let sol = gw_solve(&g, gw_default_rank(g.n()), 2)?;
    let cert = gw_certificate(&g, &sol)?;
    let (best, trials) = gw_round(&g, &sol, 200, 3)?;
    let mean = trials.iter().sum::<f64>() / trials.len() as f64;
    println!(
        "GW: vector program {:.4}, expected cut {:.4} ≥ {:.5} × {:.4}",
        cert.sdp_value, cert.expected_cut, cert.guarantee_constant, cert.sdp_value
    );
    println!("GW: mean rounded cut {mean:.4}, best {:.4}", best.cut_value);
    Ok(())
}
