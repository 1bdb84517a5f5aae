//! Angle-transition statistics of converged X=Y runs, with the γ=0 ablation.

use xqaoa::bench::{run_transition_study, GraphSource, TransitionConfig};

fn main() -> xqaoa::Result<()> {
    let cfg = TransitionConfig {
        source: GraphSource::Regular { n: 16, degree: 3, instances: 3 },
        restarts: 20,
        ..Default::default()
    };
    let report = run_transition_study(&cfg)?;
    println!("γ within tolerance: {:.4}", report.gamma_within_fraction);
    println!("β within tolerance: {:.4}", report.beta_within_fraction);
    println!("extraction consistent: {:.4}", report.extraction_consistent_fraction);
    println!("β histogram {:?}", report.beta_histogram.counts);
    if let Some(ab) = &report.ablation {
        println!(
            "median ratios: X=Y {:.4}, X=Y with γ=0 {:.4}, CR {:.4}",
            ab.median_xeqy_ratio, ab.median_gamma0_ratio, ab.median_cr_ratio
        );
    }
    Ok(())
}
