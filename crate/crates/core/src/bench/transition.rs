use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{
    algorithm_seed, load_instances, median, record_from, rows_from, run_algorithm, Algorithm, Campaign, CampaignConfig,
    GraphSource, Instance, SCHEMA_VERSION,
};
use crate::analytic::{AngleAssignment, Variant};
use crate::baselines::{extract_cut_xeqy, snapped_objective, transition_distances};
use crate::error::{Error, Result};
use crate::graph::BRUTE_FORCE_CAP;
use crate::optimize::{multistart, random_params, AnalyticObjective, OptimizerConfig};
use crate::rng::Rng;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TransitionConfig {
    pub source: GraphSource,
    pub restarts: usize,
    pub seed: u64,
    pub optimizer: OptimizerConfig,
    pub oracle_cap: usize,
    pub gamma_tolerance: f64,
    pub beta_tolerance: f64,
    /// Also run the γ=0 X=Y ablation and Classical-Relaxed.
    pub ablation: bool,
    pub histogram_bins: usize,
}

impl Default for TransitionConfig {
    fn default() -> Self {
        TransitionConfig {
            source: GraphSource::Regular { n: 32, degree: 3, instances: 10 },
            restarts: 100,
            seed: 0,
            optimizer: OptimizerConfig::default(),
            oracle_cap: BRUTE_FORCE_CAP,
            gamma_tolerance: 0.15,
            beta_tolerance: 0.15,
            ablation: true,
            histogram_bins: 16,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    /// `bins + 1` bin edges.
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
}

impl Histogram {
    fn new(upper: f64, bins: usize) -> Self {
        let bins = bins.max(1);
        Histogram { edges: (0..=bins).map(|i| upper * i as f64 / bins as f64).collect(), counts: vec![0; bins] }
    }

    fn add(&mut self, x: f64) {
        let bins = self.counts.len();
        let upper = self.edges[bins];
        let i = ((x / upper) * bins as f64).floor() as usize;
        self.counts[i.min(bins - 1)] += 1;
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TransitionInstance {
    pub graph_id: String,
    pub optimum: Option<f64>,
    pub runs: usize,
    pub converged_runs: usize,
    pub gamma_within: usize,
    pub gamma_total: usize,
    pub beta_within: usize,
    pub beta_total: usize,
    /// Converged runs whose extracted cut equals the objective at the snapped angles.
    pub extraction_consistent: usize,
    pub non_transitioned_vertices: usize,
    pub best_value: f64,
    pub best_extracted_cut: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AblationSummary {
    pub median_xeqy_ratio: f64,
    pub median_gamma0_ratio: f64,
    pub median_cr_ratio: f64,
    /// `|median γ=0 ratio − median CR ratio|`
    pub gap: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TransitionReport {
    pub schema_version: u32,
    pub seed: u64,
    pub gamma_tolerance: f64,
    pub beta_tolerance: f64,
    pub instances: Vec<TransitionInstance>,
    /// Pooled over every angle of every converged run.
    pub gamma_within_fraction: f64,
    pub beta_within_fraction: f64,
    pub extraction_consistent_fraction: f64,
    /// Distance of `γ w mod 2π` to `{0, π, 2π}`, on `[0, π/2]`.
    pub gamma_histogram: Histogram,
    /// Distance of `β mod π` to `{π/4, 3π/4}`, on `[0, π/4]`.
    pub beta_histogram: Histogram,
    pub ablation: Option<AblationSummary>,
    pub campaign: Campaign,
}

pub fn run_transition_study(cfg: &TransitionConfig) -> Result<TransitionReport> {
    let instances = load_instances(&cfg.source, cfg.seed, cfg.oracle_cap)?;
    run_transition_study_on(&instances, cfg)
}

pub fn run_transition_study_on(instances: &[Instance], cfg: &TransitionConfig) -> Result<TransitionReport> {
    if cfg.restarts == 0 {
        return Err(Error::InvalidArgument("restarts must be at least 1".into()));
    }
    let campaign_cfg = CampaignConfig {
        source: cfg.source.clone(),
        algorithms: vec![Algorithm::XeqY],
        restarts: cfg.restarts,
        informed_restarts: None,
        seed: cfg.seed,
        optimizer: cfg.optimizer.clone(),
        oracle_cap: cfg.oracle_cap,
        gw_trials: 1,
    };
    let mut gamma_hist = Histogram::new(FRAC_PI_2, cfg.histogram_bins);
    let mut beta_hist = Histogram::new(FRAC_PI_4, cfg.histogram_bins);
    let mut per_instance = Vec::new();
    let mut records = Vec::new();
    let mut rows = Vec::new();

    for inst in instances {
        let g = &inst.graph;
        let started = Instant::now();
        let seed = algorithm_seed(cfg.seed, &inst.id, Algorithm::XeqY, 1);
        let f = AnalyticObjective::new(g, Variant::XeqY);
        let ms =
            multistart(&f, |rng: &mut Rng| random_params(Variant::XeqY, g, rng), cfg.restarts, seed, &cfg.optimizer)?;

        let mut stats = TransitionInstance {
            graph_id: inst.id.clone(),
            optimum: inst.optimum,
            runs: ms.runs.len(),
            converged_runs: 0,
            gamma_within: 0,
            gamma_total: 0,
            beta_within: 0,
            beta_total: 0,
            extraction_consistent: 0,
            non_transitioned_vertices: 0,
            best_value: ms.best_value(),
            best_extracted_cut: f64::NEG_INFINITY,
        };
        let mut extracted = Vec::with_capacity(ms.runs.len());
        for run in &ms.runs {
            let a = AngleAssignment::from_params(g, Variant::XeqY, &run.x_final)?;
            let ex = extract_cut_xeqy(g, &a)?;
            extracted.push(ex.cut.cut_value);
            stats.best_extracted_cut = stats.best_extracted_cut.max(ex.cut.cut_value);
            if !run.converged {
                continue;
            }
            stats.converged_runs += 1;
            let (dg, db) = transition_distances(g, &a);
            for d in dg {
                gamma_hist.add(d);
                stats.gamma_total += 1;
                stats.gamma_within += usize::from(d <= cfg.gamma_tolerance);
            }
            for d in db {
                beta_hist.add(d);
                stats.beta_total += 1;
                stats.beta_within += usize::from(d <= cfg.beta_tolerance);
            }
            stats.non_transitioned_vertices += ex.non_transitioned.len();
            if (snapped_objective(g, &ex) - ex.cut.cut_value).abs() <= 1e-9 {
                stats.extraction_consistent += 1;
            }
        }
        let mut run_rows = rows_from(inst, Algorithm::XeqY, 1, &ms, |_| None);
        for (row, cut) in run_rows.iter_mut().zip(&extracted) {
            row.cut_value = Some(*cut);
        }
        let best = ms.best_value();
        let best_extracted = extracted[ms.best];
        records.push(record_from(inst, Algorithm::XeqY, 1, seed, started, &run_rows, best, best, Some(best_extracted)));
        rows.append(&mut run_rows);
        per_instance.push(stats);

        if cfg.ablation {
            for alg in [Algorithm::XeqYGammaZero, Algorithm::Cr] {
                let (rec, mut r) = run_algorithm(inst, alg, &campaign_cfg)?;
                records.push(rec);
                rows.append(&mut r);
            }
        }
    }

    let total = |f: fn(&TransitionInstance) -> usize| per_instance.iter().map(f).sum::<usize>();
    let frac = |a: usize, b: usize| if b == 0 { f64::NAN } else { a as f64 / b as f64 };
    let campaign = Campaign::new("transition", cfg.seed, records, rows);
    let ratios = |alg: Algorithm| -> Vec<f64> { campaign.records_for(alg, 1).filter_map(|r| r.ratio).collect() };
    let ablation = cfg.ablation.then(|| {
        let (x, z, c) = (
            median(&ratios(Algorithm::XeqY)),
            median(&ratios(Algorithm::XeqYGammaZero)),
            median(&ratios(Algorithm::Cr)),
        );
        AblationSummary { median_xeqy_ratio: x, median_gamma0_ratio: z, median_cr_ratio: c, gap: (z - c).abs() }
    });
    Ok(TransitionReport {
        schema_version: SCHEMA_VERSION,
        seed: cfg.seed,
        gamma_tolerance: cfg.gamma_tolerance,
        beta_tolerance: cfg.beta_tolerance,
        gamma_within_fraction: frac(total(|s| s.gamma_within), total(|s| s.gamma_total)),
        beta_within_fraction: frac(total(|s| s.beta_within), total(|s| s.beta_total)),
        extraction_consistent_fraction: frac(total(|s| s.extraction_consistent), total(|s| s.converged_runs)),
        instances: per_instance,
        gamma_histogram: gamma_hist,
        beta_histogram: beta_hist,
        ablation,
        campaign,
    })
}
