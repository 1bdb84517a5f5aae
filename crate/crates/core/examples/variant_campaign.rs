//! A small variant-comparison campaign; rows go to stdout as CSV and the
//! quartile summary to stderr.

use xqaoa::bench::{run_variant_comparison, Algorithm, CampaignConfig, GraphSource};

fn main() -> xqaoa::Result<()> {
    let cfg = CampaignConfig {
        source: GraphSource::Regular { n: 14, degree: 3, instances: 4 },
        algorithms: Algorithm::COMPARISON.to_vec(),
        restarts: 10,
        seed: 1,
        ..Default::default()
    };
    let campaign = run_variant_comparison(&cfg)?;
    campaign.write_csv(std::io::stdout().lock())?;
    for s in &campaign.summary {
        eprintln!(
            "{:<14} q1 {:.4} median {:.4} q3 {:.4}",
            s.algorithm.name(),
            s.lower_quartile,
            s.median,
            s.upper_quartile
        );
    }
    Ok(())
}
