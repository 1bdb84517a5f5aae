use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{
    algorithm_seed, load_instances, record_from, rows_from, Algorithm, Campaign, GraphSource, Instance, RunRow,
};
use crate::analytic::Variant;
use crate::error::{Error, Result};
use crate::graph::BRUTE_FORCE_CAP;
use crate::optimize::{lbfgs_maximize, multistart, random_params, GradientSource, MultistartResult, OptimizerConfig};
use crate::rng::{derive_seed, label_key, Rng};
use crate::simulator::{self, SimulatedAnsatz};

pub const MAX_STUDY_DEPTH: usize = 5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DepthConfig {
    pub source: GraphSource,
    pub variants: Vec<Variant>,
    pub max_depth: usize,
    /// Random starts per (variant, depth); depths above 1 add one warm start.
    pub restarts: usize,
    pub seed: u64,
    pub optimizer: OptimizerConfig,
    /// Estimate each run's cut from this many measurements instead of reading
    /// `⟨C⟩` off the statevector.
    pub shots: Option<usize>,
    pub oracle_cap: usize,
}

impl Default for DepthConfig {
    fn default() -> Self {
        DepthConfig {
            source: GraphSource::Regular { n: 16, degree: 3, instances: 20 },
            variants: vec![Variant::Qaoa, Variant::Ma, Variant::XeqY],
            max_depth: 3,
            restarts: 2,
            seed: 0,
            optimizer: OptimizerConfig { gradient: GradientSource::Exact, grad_tolerance: 1e-3, ..Default::default() },
            shots: None,
            oracle_cap: BRUTE_FORCE_CAP,
        }
    }
}

pub fn run_depth_study(cfg: &DepthConfig) -> Result<Campaign> {
    let instances = load_instances(&cfg.source, cfg.seed, cfg.oracle_cap)?;
    run_depth_study_on(&instances, cfg)
}

/// Simulator-backed optimisation for every variant at depths `1..=max_depth`.
///
/// Depth `p + 1` is also started from the best depth-`p` angles followed by
/// an identity layer, so the best value per instance cannot drop with depth
/// beyond the optimiser's tolerance.
pub fn run_depth_study_on(instances: &[Instance], cfg: &DepthConfig) -> Result<Campaign> {
    if !(1..=MAX_STUDY_DEPTH).contains(&cfg.max_depth) {
        return Err(Error::InvalidArgument(format!("depth must be in 1..={MAX_STUDY_DEPTH}")));
    }
    if cfg.restarts == 0 {
        return Err(Error::InvalidArgument("restarts must be at least 1".into()));
    }
    if cfg.shots == Some(0) {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    let mut records = Vec::new();
    let mut rows = Vec::new();
    for inst in instances {
        let g = &inst.graph;
        for &variant in &cfg.variants {
            let algorithm = Algorithm::from_variant(variant);
            let mut previous: Option<Vec<f64>> = None;
            for p in 1..=cfg.max_depth {
                let started = Instant::now();
                let ansatz = SimulatedAnsatz::new(g, variant, p)?;
                let seed = algorithm_seed(cfg.seed, &inst.id, algorithm, p);
                let sampler = |rng: &mut Rng| (0..p).flat_map(|_| random_params(variant, g, rng)).collect();
                let mut ms = multistart(&ansatz, sampler, cfg.restarts, seed, &cfg.optimizer)?;
                if let Some(prev) = &previous {
                    let mut x0 = prev.clone();
                    x0.resize(ansatz.num_params(), 0.0);
                    let mut warm = lbfgs_maximize(&ansatz, &x0, &cfg.optimizer)?;
                    warm.seed = derive_seed(seed, &[label_key("warm")]);
                    ms.runs.push(warm);
                    if ms.runs.last().expect("pushed").best_value > ms.best_value() {
                        ms.best = ms.runs.len() - 1;
                    }
                }
                let mut run_rows = rows_from(inst, algorithm, p, &ms, |_| None);
                let best = ms.best_value();
                let best_cut = match cfg.shots {
                    Some(shots) => sample_cuts(&ansatz, &ms, &mut run_rows, shots, seed)?,
                    None => best,
                };
                records.push(record_from(inst, algorithm, p, seed, started, &run_rows, best, best_cut, None));
                rows.append(&mut run_rows);
                previous = Some(ms.best_run().x_final.clone());
            }
        }
    }
    Ok(Campaign::new("depth", cfg.seed, records, rows))
}

/// Fill each row's `cut_value` with a shot-based mean; returns the best run's.
fn sample_cuts(
    ansatz: &SimulatedAnsatz,
    ms: &MultistartResult,
    rows: &mut [RunRow],
    shots: usize,
    seed: u64,
) -> Result<f64> {
    for (i, (run, row)) in ms.runs.iter().zip(rows.iter_mut()).enumerate() {
        let layers = ansatz.layers(&run.x_final)?;
        let shot_seed = derive_seed(seed, &[label_key("shots"), i as u64]);
        let mean = simulator::shot_expectation(ansatz.graph(), &layers, ansatz.variant(), shots, shot_seed)?;
        row.cut_value = Some(mean);
    }
    Ok(rows[ms.best].cut_value.expect("filled above"))
}
