//! Simulator-backed depth study on small graphs, with and without shots.

use xqaoa::analytic::Variant;
use xqaoa::bench::{run_depth_study, Algorithm, DepthConfig, GraphSource};

fn main() -> xqaoa::Result<()> {
    for shots in [None, Some(1000)] {
        let cfg = DepthConfig {
            source: GraphSource::Regular { n: 10, degree: 3, instances: 3 },
            variants: vec![Variant::Qaoa, Variant::XeqY],
            max_depth: 3,
            shots,
            ..Default::default()
        };
        let campaign = run_depth_study(&cfg)?;
        println!("shots: {shots:?}");
        for alg in [Algorithm::Qaoa, Algorithm::XeqY] {
            for p in 1..=3 {
                let s = campaign.summary_for(alg, p).expect("every depth is summarised");
                println!("  {:<5} p={p} median ratio {:.4}", alg.name(), s.median);
            }
        }
    }
    Ok(())
}
