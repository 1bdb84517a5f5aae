//! Benchmark campaigns: variant comparison, angle-transition statistics and
//! the depth study.
//!
//! Every campaign yields one CSV row per (graph, algorithm, depth, run) and a
//! versioned JSON document with per-instance records and per-algorithm
//! quantiles. CSV output holds no timing, so it is byte-identical across
//! reruns of the same configuration; wall times live in the JSON records.

mod depth;
mod transition;

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::analytic::{self, Variant};
use crate::baselines::{
    extract_cut_xeqy, gw_default_rank, gw_round, gw_solve_with, round_relaxed, GW_DEFAULT_RESTARTS,
};
use crate::error::{Error, Result};
use crate::graph::{
    brute_force_maxcut_with_cap, generate_regular, load_edge_list_mapped, Graph, GraphFormat, BRUTE_FORCE_CAP,
};
use crate::optimize::{
    multistart, qaoa_informed_point, random_params, AnalyticObjective, FnObjective, MultistartResult, OptimizerConfig,
    RelaxedObjective,
};
use crate::rng::{derive_seed, label_key, Rng};

pub use depth::{run_depth_study, run_depth_study_on, DepthConfig};
pub use transition::{
    run_transition_study, run_transition_study_on, AblationSummary, Histogram, TransitionConfig, TransitionInstance,
    TransitionReport,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Qaoa,
    /// QAOA started inside `[0, π/4]²`.
    QaoaInformed,
    Ma,
    Xy,
    #[serde(rename = "xeqy")]
    XeqY,
    Y,
    Cr,
    Gw,
    /// X=Y with every `γ` frozen at 0.
    #[serde(rename = "xeqy_gamma0")]
    XeqYGammaZero,
}

impl Algorithm {
    pub const COMPARISON: [Algorithm; 8] = [
        Algorithm::Xy,
        Algorithm::XeqY,
        Algorithm::Y,
        Algorithm::Ma,
        Algorithm::Qaoa,
        Algorithm::QaoaInformed,
        Algorithm::Cr,
        Algorithm::Gw,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Qaoa => "qaoa",
            Algorithm::QaoaInformed => "qaoa_informed",
            Algorithm::Ma => "ma",
            Algorithm::Xy => "xy",
            Algorithm::XeqY => "xeqy",
            Algorithm::Y => "y",
            Algorithm::Cr => "cr",
            Algorithm::Gw => "gw",
            Algorithm::XeqYGammaZero => "xeqy_gamma0",
        }
    }

    pub fn variant(self) -> Option<Variant> {
        match self {
            Algorithm::Qaoa | Algorithm::QaoaInformed => Some(Variant::Qaoa),
            Algorithm::Ma => Some(Variant::Ma),
            Algorithm::Xy => Some(Variant::Xy),
            Algorithm::XeqY | Algorithm::XeqYGammaZero => Some(Variant::XeqY),
            Algorithm::Y => Some(Variant::Y),
            Algorithm::Cr | Algorithm::Gw => None,
        }
    }

    pub fn from_variant(v: Variant) -> Self {
        match v {
            Variant::Qaoa => Algorithm::Qaoa,
            Variant::Ma => Algorithm::Ma,
            Variant::Xy => Algorithm::Xy,
            Variant::XeqY => Algorithm::XeqY,
            Variant::Y => Algorithm::Y,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let all = Algorithm::COMPARISON.into_iter().chain([Algorithm::XeqYGammaZero]);
        for a in all {
            if a.name().eq_ignore_ascii_case(s) {
                return Ok(a);
            }
        }
        s.parse::<Variant>()
            .map(Algorithm::from_variant)
            .map_err(|_| Error::InvalidArgument(format!("unknown algorithm {s:?}")))
    }
}

/// Where campaign graphs come from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GraphSource {
    Regular { n: usize, degree: usize, instances: usize },
    Files { paths: Vec<PathBuf> },
}

impl Default for GraphSource {
    fn default() -> Self {
        GraphSource::Regular { n: 16, degree: 3, instances: 10 }
    }
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub id: String,
    pub graph: Graph,
    pub degree: Option<usize>,
    /// Exact MaxCut when known (oracle or recorded in the file).
    pub optimum: Option<f64>,
}

/// Seed of regular instance `index` for a campaign master seed.
pub fn instance_seed(seed: u64, n: usize, degree: usize, index: usize) -> u64 {
    derive_seed(seed, &[label_key("graph"), n as u64, degree as u64, index as u64])
}

/// Materialise a graph source. Optima come from the file when recorded,
/// otherwise from the brute-force oracle when `n ≤ oracle_cap`.
pub fn load_instances(source: &GraphSource, seed: u64, oracle_cap: usize) -> Result<Vec<Instance>> {
    let optimum = |g: &Graph, recorded: Option<f64>| -> Result<Option<f64>> {
        match recorded {
            Some(v) => Ok(Some(v)),
            None if g.n() <= oracle_cap => Ok(Some(brute_force_maxcut_with_cap(g, oracle_cap)?.cut_value)),
            None => Ok(None),
        }
    };
    match source {
        GraphSource::Regular { n, degree, instances } => (0..*instances)
            .map(|i| {
                let graph = generate_regular(*n, *degree, instance_seed(seed, *n, *degree, i))?;
                Ok(Instance {
                    id: format!("rr-n{n}-d{degree}-{i}"),
                    optimum: optimum(&graph, None)?,
                    graph,
                    degree: Some(*degree),
                })
            })
            .collect(),
        GraphSource::Files { paths } => paths
            .iter()
            .map(|path| {
                let file = std::fs::File::open(path)?;
                let loaded = load_edge_list_mapped(file, GraphFormat::from_path(path))?;
                let g = loaded.graph;
                let first = g.degree(0);
                let regular = g.n() > 0 && (0..g.n()).all(|v| g.degree(v) == first);
                Ok(Instance {
                    id: path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
                    optimum: optimum(&g, loaded.recorded_optimum)?,
                    degree: regular.then_some(first),
                    graph: g,
                })
            })
            .collect(),
    }
}

/// One optimiser run (or one rounding outcome) of one algorithm on one graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRow {
    pub graph_id: String,
    pub n: usize,
    pub degree: Option<usize>,
    pub algorithm: Algorithm,
    pub depth: usize,
    pub run: usize,
    pub seed: u64,
    /// Objective reached: `⟨C⟩`, relaxed objective or SDP value.
    pub value: f64,
    /// Cut read out of the run (rounded, extracted or sampled), if any.
    pub cut_value: Option<f64>,
    pub converged: bool,
    pub evaluations: usize,
}

/// Outcome of one algorithm on one graph.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BenchmarkRecord {
    pub graph_id: String,
    pub n: usize,
    pub degree: Option<usize>,
    pub algorithm: Algorithm,
    pub depth: usize,
    pub restarts: usize,
    pub seed: u64,
    pub best_value: f64,
    /// Achieved cut: `⟨C⟩` for quantum ansatzes, best rounded cut for CR/GW.
    pub best_cut_value: f64,
    /// Bit string read off the best X=Y run.
    pub extracted_cut: Option<f64>,
    pub optimum: Option<f64>,
    /// `best_cut_value / optimum`
    pub ratio: Option<f64>,
    pub wall_time_s: f64,
    pub run_values: Vec<f64>,
    pub converged_runs: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmSummary {
    pub algorithm: Algorithm,
    pub depth: usize,
    pub instances: usize,
    pub lower_quartile: f64,
    pub median: f64,
    pub upper_quartile: f64,
    pub mean: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Campaign {
    pub schema_version: u32,
    pub kind: String,
    pub seed: u64,
    pub records: Vec<BenchmarkRecord>,
    pub summary: Vec<AlgorithmSummary>,
    #[serde(skip)]
    pub rows: Vec<RunRow>,
}

impl Campaign {
    fn new(kind: &str, seed: u64, records: Vec<BenchmarkRecord>, rows: Vec<RunRow>) -> Self {
        Campaign {
            schema_version: SCHEMA_VERSION,
            kind: kind.into(),
            seed,
            summary: summarize(&records),
            records,
            rows,
        }
    }

    pub fn write_csv<W: Write>(&self, sink: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(sink);
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_json<W: Write>(&self, sink: W) -> Result<()> {
        serde_json::to_writer_pretty(sink, self)?;
        Ok(())
    }

    pub fn summary_for(&self, algorithm: Algorithm, depth: usize) -> Option<&AlgorithmSummary> {
        self.summary.iter().find(|s| s.algorithm == algorithm && s.depth == depth)
    }

    pub fn records_for(&self, algorithm: Algorithm, depth: usize) -> impl Iterator<Item = &BenchmarkRecord> {
        self.records.iter().filter(move |r| r.algorithm == algorithm && r.depth == depth)
    }
}

/// Linear-interpolation quantile of unsorted data.
pub fn quantile(values: &[f64], q: f64) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let pos = q.clamp(0.0, 1.0) * (v.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    v[lo] + (pos - lo as f64) * (v[hi] - v[lo])
}

pub fn median(values: &[f64]) -> f64 {
    quantile(values, 0.5)
}

/// Ratio quantiles per (algorithm, depth), over records with a known optimum.
pub fn summarize(records: &[BenchmarkRecord]) -> Vec<AlgorithmSummary> {
    let mut keys: Vec<(Algorithm, usize)> = records.iter().map(|r| (r.algorithm, r.depth)).collect();
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .filter_map(|(algorithm, depth)| {
            let ratios: Vec<f64> = records
                .iter()
                .filter(|r| r.algorithm == algorithm && r.depth == depth)
                .filter_map(|r| r.ratio)
                .collect();
            (!ratios.is_empty()).then(|| AlgorithmSummary {
                algorithm,
                depth,
                instances: ratios.len(),
                lower_quartile: quantile(&ratios, 0.25),
                median: quantile(&ratios, 0.5),
                upper_quartile: quantile(&ratios, 0.75),
                mean: ratios.iter().sum::<f64>() / ratios.len() as f64,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CampaignConfig {
    pub source: GraphSource,
    pub algorithms: Vec<Algorithm>,
    pub restarts: usize,
    /// Restarts for [`Algorithm::QaoaInformed`]; `None` means `restarts`.
    pub informed_restarts: Option<usize>,
    pub seed: u64,
    pub optimizer: OptimizerConfig,
    pub oracle_cap: usize,
    pub gw_trials: usize,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            source: GraphSource::default(),
            algorithms: Algorithm::COMPARISON.to_vec(),
            restarts: 100,
            informed_restarts: None,
            seed: 0,
            optimizer: OptimizerConfig::default(),
            oracle_cap: BRUTE_FORCE_CAP,
            gw_trials: 100,
        }
    }
}

/// Seed stream of one algorithm on one instance.
pub fn algorithm_seed(seed: u64, instance: &str, algorithm: Algorithm, depth: usize) -> u64 {
    derive_seed(seed, &[label_key(instance), label_key(algorithm.name()), depth as u64])
}

pub(crate) fn record_from(
    inst: &Instance,
    algorithm: Algorithm,
    depth: usize,
    seed: u64,
    started: Instant,
    rows: &[RunRow],
    best_value: f64,
    best_cut_value: f64,
    extracted_cut: Option<f64>,
) -> BenchmarkRecord {
    BenchmarkRecord {
        graph_id: inst.id.clone(),
        n: inst.graph.n(),
        degree: inst.degree,
        algorithm,
        depth,
        restarts: rows.len(),
        seed,
        best_value,
        best_cut_value,
        extracted_cut,
        optimum: inst.optimum,
        ratio: inst.optimum.map(|o| if o > 0.0 { best_cut_value / o } else { 1.0 }),
        wall_time_s: started.elapsed().as_secs_f64(),
        run_values: rows.iter().map(|r| r.value).collect(),
        converged_runs: rows.iter().filter(|r| r.converged).count(),
    }
}

pub(crate) fn rows_from(
    inst: &Instance,
    algorithm: Algorithm,
    depth: usize,
    ms: &MultistartResult,
    cut: impl Fn(&[f64]) -> Option<f64>,
) -> Vec<RunRow> {
    ms.runs
        .iter()
        .enumerate()
        .map(|(i, r)| RunRow {
            graph_id: inst.id.clone(),
            n: inst.graph.n(),
            degree: inst.degree,
            algorithm,
            depth,
            run: i,
            seed: r.seed,
            value: r.best_value,
            cut_value: cut(&r.x_final),
            converged: r.converged,
            evaluations: r.evaluations,
        })
        .collect()
}

/// Run one algorithm on one instance.
pub fn run_algorithm(
    inst: &Instance,
    algorithm: Algorithm,
    cfg: &CampaignConfig,
) -> Result<(BenchmarkRecord, Vec<RunRow>)> {
    let g = &inst.graph;
    let seed = algorithm_seed(cfg.seed, &inst.id, algorithm, 1);
    let started = Instant::now();
    let opt = &cfg.optimizer;
    match algorithm {
        Algorithm::Cr => {
            let f = RelaxedObjective(g);
            let sampler = |rng: &mut Rng| (0..g.n()).map(|_| rng.random_range(0.0..2.0 * PI)).collect();
            let ms = multistart(&f, sampler, cfg.restarts, seed, opt)?;
            let rows = rows_from(inst, algorithm, 1, &ms, |x| Some(round_relaxed(g, x).cut_value));
            let best_cut = rows.iter().filter_map(|r| r.cut_value).fold(f64::NEG_INFINITY, f64::max);
            Ok((record_from(inst, algorithm, 1, seed, started, &rows, ms.best_value(), best_cut, None), rows))
        }
        Algorithm::Gw => {
            let sol = gw_solve_with(g, gw_default_rank(g.n()), GW_DEFAULT_RESTARTS, seed, opt)?;
            let (best, _) = gw_round(g, &sol, cfg.gw_trials, derive_seed(seed, &[label_key("round")]))?;
            let rows = vec![RunRow {
                graph_id: inst.id.clone(),
                n: g.n(),
                degree: inst.degree,
                algorithm,
                depth: 1,
                run: 0,
                seed,
                value: sol.objective_value,
                cut_value: Some(best.cut_value),
                converged: sol.converged,
                evaluations: 0,
            }];
            Ok((record_from(inst, algorithm, 1, seed, started, &rows, sol.objective_value, best.cut_value, None), rows))
        }
        Algorithm::XeqYGammaZero => {
            let m = g.m();
            let f = FnObjective::new(g.n(), |beta: &[f64]| {
                let mut x = vec![0.0; m];
                x.extend_from_slice(beta);
                analytic::expectation_from_params(g, Variant::XeqY, &x).unwrap_or(f64::NAN)
            });
            let sampler = |rng: &mut Rng| (0..g.n()).map(|_| rng.random_range(0.0..PI)).collect();
            let ms = multistart(&f, sampler, cfg.restarts, seed, opt)?;
            let rows = rows_from(inst, algorithm, 1, &ms, |_| None);
            let best = ms.best_value();
            Ok((record_from(inst, algorithm, 1, seed, started, &rows, best, best, None), rows))
        }
        _ => {
            let variant = algorithm.variant().expect("quantum algorithm");
            let f = AnalyticObjective::new(g, variant);
            let ms = if algorithm == Algorithm::QaoaInformed {
                let sampler = |rng: &mut Rng| {
                    let (gm, bt) = qaoa_informed_point(rng);
                    vec![gm, bt]
                };
                multistart(&f, sampler, cfg.informed_restarts.unwrap_or(cfg.restarts), seed, opt)?
            } else {
                multistart(&f, |rng: &mut Rng| random_params(variant, g, rng), cfg.restarts, seed, opt)?
            };
            let extract = |x: &[f64]| -> Option<f64> {
                let a = crate::analytic::AngleAssignment::from_params(g, variant, x).ok()?;
                extract_cut_xeqy(g, &a).ok().map(|e| e.cut.cut_value)
            };
            let rows = if variant == Variant::XeqY {
                rows_from(inst, algorithm, 1, &ms, extract)
            } else {
                rows_from(inst, algorithm, 1, &ms, |_| None)
            };
            let best = ms.best_value();
            let extracted = if variant == Variant::XeqY { extract(&ms.best_run().x_final) } else { None };
            Ok((record_from(inst, algorithm, 1, seed, started, &rows, best, best, extracted), rows))
        }
    }
}

/// Every configured algorithm on every instance of the source.
pub fn run_variant_comparison(cfg: &CampaignConfig) -> Result<Campaign> {
    let instances = load_instances(&cfg.source, cfg.seed, cfg.oracle_cap)?;
    run_variant_comparison_on(&instances, cfg)
}

pub fn run_variant_comparison_on(instances: &[Instance], cfg: &CampaignConfig) -> Result<Campaign> {
    if cfg.restarts == 0 {
        return Err(Error::InvalidArgument("restarts must be at least 1".into()));
    }
    let mut records = Vec::new();
    let mut rows = Vec::new();
    for inst in instances {
        for &alg in &cfg.algorithms {
            let (rec, mut r) = run_algorithm(inst, alg, cfg)?;
            records.push(rec);
            rows.append(&mut r);
        }
    }
    Ok(Campaign::new("variants", cfg.seed, records, rows))
}
