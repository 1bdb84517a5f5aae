use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;
use xqaoa::analytic::{AngleAssignment, Variant};
use xqaoa::baselines::{
    classical_relaxed, extract_cut_xeqy, gw_certificate, gw_default_rank, gw_round, gw_solve_with, GW_DEFAULT_RESTARTS,
};
use xqaoa::bench::{
    instance_seed, run_algorithm, run_depth_study, run_transition_study, run_variant_comparison, Algorithm, Campaign,
    CampaignConfig, DepthConfig, GraphSource, Instance, TransitionConfig,
};
use xqaoa::graph::{
    brute_force_maxcut_with_cap, generate_regular, load_edge_list_mapped, save_edge_list_with_optimum, GraphFormat,
    BRUTE_FORCE_CAP, BRUTE_FORCE_HARD_CAP,
};
use xqaoa::optimize::{multistart, random_params, AnalyticObjective, GradStep, GradientSource, OptimizerConfig};
use xqaoa::rng::Rng;
use xqaoa::simulator::{self, SimulatedAnsatz};
use xqaoa::Graph;

/// MaxCut with QAOA, MA-QAOA and XQAOA ansatzes, classical baselines and
/// benchmark campaigns.
#[derive(Parser)]
#[command(name = "xqaoa", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write random regular graphs as edge lists.
    Generate(GenerateArgs),
    /// Optimise one ansatz or baseline on one graph.
    Solve(SolveArgs),
    /// Compare algorithms across a set of graphs.
    BenchVariants(BenchArgs),
    /// Angle-transition statistics of X=Y optima.
    BenchTransition(BenchArgs),
    /// Simulator-backed study over depths 1..=p.
    BenchDepth(BenchArgs),
    /// Goemans-Williamson relaxation with its approximation certificate.
    CertifyGw(CertifyArgs),
    /// Exhaustive MaxCut.
    Oracle(OracleArgs),
}

#[derive(Args, Clone)]
struct OptimizerArgs {
    /// Threads for gradient evaluation and restarts.
    #[arg(long)]
    workers: Option<usize>,
    /// Stop when every gradient component is at most this.
    #[arg(long)]
    grad_tol: Option<f64>,
    /// Relative finite-difference step.
    #[arg(long)]
    grad_step: Option<f64>,
    /// Objective-evaluation budget per run.
    #[arg(long)]
    max_evals: Option<usize>,
}

impl OptimizerArgs {
    fn apply(&self, cfg: &mut OptimizerConfig) {
        if let Some(w) = self.workers {
            cfg.workers = w;
        }
        if let Some(t) = self.grad_tol {
            cfg.grad_tolerance = t;
        }
        if let Some(h) = self.grad_step {
            cfg.grad_step = GradStep::Relative(h);
        }
        if let Some(m) = self.max_evals {
            cfg.max_evaluations = m;
        }
    }
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    degree: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of graphs; with more than one, `--out` names a directory.
    #[arg(long, default_value_t = 1)]
    count: usize,
    /// Record the exhaustive optimum in each file (n ≤ 32).
    #[arg(long)]
    with_optimum: bool,
    /// `csv` or `json`; defaults to the `--out` extension.
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    graph: PathBuf,
    /// qaoa, qaoa_informed, ma, xy, xeqy, y, cr or gw.
    #[arg(long, default_value = "xeqy")]
    variant: String,
    /// Circuit depth; above 1 the statevector simulator is used (n ≤ 24).
    #[arg(long, default_value_t = 1)]
    p: usize,
    #[arg(long, default_value_t = 100)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also estimate the best cut from this many measurements (n ≤ 24).
    #[arg(long)]
    shots: Option<usize>,
    /// Compare with the exhaustive optimum when n is at most this.
    #[arg(long, default_value_t = BRUTE_FORCE_CAP)]
    oracle_cap: usize,
    #[command(flatten)]
    optimizer: OptimizerArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// TOML file with the campaign configuration; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Edge-list files; replaces the random regular source.
    #[arg(long, num_args = 1..)]
    graph: Vec<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long)]
    instances: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    restarts: Option<usize>,
    /// Comma-separated algorithms (bench-variants) or variants (bench-depth).
    #[arg(long, value_delimiter = ',')]
    variant: Vec<String>,
    /// Maximum depth (bench-depth).
    #[arg(long)]
    p: Option<usize>,
    /// Measurement-based cut estimates (bench-depth).
    #[arg(long)]
    shots: Option<usize>,
    #[command(flatten)]
    optimizer: OptimizerArgs,
    /// Output directory for `<kind>.csv` and `<kind>.json`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CertifyArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Vector dimension; defaults to ⌈√(2n)⌉ + 1.
    #[arg(long)]
    rank: Option<usize>,
    #[arg(long, default_value_t = GW_DEFAULT_RESTARTS)]
    restarts: usize,
    /// Random hyperplanes.
    #[arg(long, default_value_t = 100)]
    shots: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Largest n to attempt (at most 32).
    #[arg(long, default_value_t = BRUTE_FORCE_CAP)]
    cap: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Generate(a) => generate(a),
        Command::Solve(a) => solve(a),
        Command::BenchVariants(a) => bench_variants(a),
        Command::BenchTransition(a) => bench_transition(a),
        Command::BenchDepth(a) => bench_depth(a),
        Command::CertifyGw(a) => certify_gw(a),
        Command::Oracle(a) => oracle(a),
    }
}

fn parse_format(name: Option<&str>, path: Option<&Path>) -> Result<GraphFormat> {
    match name {
        Some(f) if f.eq_ignore_ascii_case("csv") => Ok(GraphFormat::Csv),
        Some(f) if f.eq_ignore_ascii_case("json") => Ok(GraphFormat::Json),
        Some(f) => bail!("unknown graph format {f:?}"),
        None => Ok(path.map_or(GraphFormat::Csv, GraphFormat::from_path)),
    }
}

fn load_graph(path: &Path) -> Result<(Graph, Option<f64>)> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let loaded = load_edge_list_mapped(file, GraphFormat::from_path(path))
        .with_context(|| format!("reading {}", path.display()))?;
    Ok((loaded.graph, loaded.recorded_optimum))
}

fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
            serde_json::to_writer_pretty(&mut w, value)?;
            writeln!(w)?;
        }
        None => {
            let mut w = io::stdout().lock();
            serde_json::to_writer_pretty(&mut w, value)?;
            writeln!(w)?;
        }
    }
    Ok(())
}

fn generate(a: GenerateArgs) -> Result<()> {
    let format = parse_format(a.format.as_deref(), a.out.as_deref().filter(|_| a.count == 1))?;
    let ext = match format {
        GraphFormat::Csv => "csv",
        GraphFormat::Json => "json",
    };
    if a.count > 1 {
        let Some(dir) = &a.out else {
            bail!("--out must name a directory when --count > 1");
        };
        fs::create_dir_all(dir)?;
    }
    for i in 0..a.count {
        let seed = instance_seed(a.seed, a.n, a.degree, i);
        let graph = generate_regular(a.n, a.degree, if a.count == 1 { a.seed } else { seed })?;
        let optimum = if a.with_optimum {
            Some(brute_force_maxcut_with_cap(&graph, BRUTE_FORCE_HARD_CAP)?.cut_value)
        } else {
            None
        };
        match (&a.out, a.count) {
            (None, _) => save_edge_list_with_optimum(&graph, io::stdout().lock(), format, optimum)?,
            (Some(path), 1) => {
                save_edge_list_with_optimum(&graph, BufWriter::new(File::create(path)?), format, optimum)?
            }
            (Some(dir), _) => {
                let path = dir.join(format!("rr-n{}-d{}-{i}.{ext}", a.n, a.degree));
                save_edge_list_with_optimum(&graph, BufWriter::new(File::create(path)?), format, optimum)?;
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct SolveReport {
    algorithm: String,
    depth: usize,
    n: usize,
    m: usize,
    seed: u64,
    restarts: usize,
    /// `⟨C⟩` for ansatzes, the relaxed objective for CR/GW.
    best_value: f64,
    best_cut: Option<f64>,
    assignment: Option<Vec<u8>>,
    sampled_cut: Option<f64>,
    optimum: Option<f64>,
    ratio: Option<f64>,
    converged_runs: usize,
    parameters: Vec<f64>,
}

fn solve(a: SolveArgs) -> Result<()> {
    let (graph, recorded) = load_graph(&a.graph)?;
    let algorithm: Algorithm = a.variant.parse()?;
    let mut cfg = OptimizerConfig::default();
    a.optimizer.apply(&mut cfg);
    let optimum = match recorded {
        Some(v) => Some(v),
        None if graph.n() <= a.oracle_cap => Some(brute_force_maxcut_with_cap(&graph, a.oracle_cap)?.cut_value),
        None => None,
    };
    let mut report = SolveReport {
        algorithm: algorithm.name().to_string(),
        depth: a.p,
        n: graph.n(),
        m: graph.m(),
        seed: a.seed,
        restarts: a.restarts,
        best_value: f64::NAN,
        best_cut: None,
        assignment: None,
        sampled_cut: None,
        optimum,
        ratio: None,
        converged_runs: 0,
        parameters: Vec::new(),
    };
    match (algorithm, algorithm.variant()) {
        (Algorithm::Cr, _) => {
            let (sol, cut) = classical_relaxed(&graph, a.restarts, a.seed, &cfg)?;
            report.best_value = sol.objective_value;
            report.converged_runs = usize::from(sol.converged);
            report.parameters = sol.theta;
            report.best_cut = Some(cut.cut_value);
            report.assignment = Some(cut.assignment);
        }
        (Algorithm::Gw, _) => {
            let rank = gw_default_rank(graph.n());
            let sol = gw_solve_with(&graph, rank, GW_DEFAULT_RESTARTS, a.seed, &cfg)?;
            let (cut, _) = gw_round(&graph, &sol, a.restarts, a.seed)?;
            report.best_value = sol.objective_value;
            report.converged_runs = usize::from(sol.converged);
            report.best_cut = Some(cut.cut_value);
            report.assignment = Some(cut.assignment);
        }
        (Algorithm::QaoaInformed | Algorithm::XeqYGammaZero, _) => {
            if a.p != 1 || a.shots.is_some() {
                bail!("{algorithm} is only available at depth 1 without shots");
            }
            let campaign = CampaignConfig { restarts: a.restarts, seed: a.seed, optimizer: cfg, ..Default::default() };
            let instance = Instance { id: "input".into(), graph: graph.clone(), degree: None, optimum };
            let (record, _) = run_algorithm(&instance, algorithm, &campaign)?;
            report.best_value = record.best_value;
            report.converged_runs = record.converged_runs;
            report.best_cut = record.extracted_cut;
        }
        (_, Some(variant)) if a.p == 1 && a.shots.is_none() => {
            let f = AnalyticObjective::new(&graph, variant);
            let sampler = |rng: &mut Rng| random_params(variant, &graph, rng);
            let ms = multistart(&f, sampler, a.restarts, a.seed, &cfg)?;
            report.best_value = ms.best_value();
            report.converged_runs = ms.runs.iter().filter(|r| r.converged).count();
            report.parameters = ms.best_run().x_final.clone();
            if variant == Variant::XeqY {
                let angles = AngleAssignment::from_params(&graph, variant, &report.parameters)?;
                let ex = extract_cut_xeqy(&graph, &angles)?;
                for w in &ex.warnings {
                    eprintln!("warning: {w}");
                }
                report.best_cut = Some(ex.cut.cut_value);
                report.assignment = Some(ex.cut.assignment);
            }
        }
        (_, Some(variant)) => {
            cfg.gradient = GradientSource::Exact;
            let ansatz = SimulatedAnsatz::new(&graph, variant, a.p)?;
            let sampler = |rng: &mut Rng| (0..a.p).flat_map(|_| random_params(variant, &graph, rng)).collect();
            let ms = multistart(&ansatz, sampler, a.restarts, a.seed, &cfg)?;
            report.best_value = ms.best_value();
            report.converged_runs = ms.runs.iter().filter(|r| r.converged).count();
            report.parameters = ms.best_run().x_final.clone();
            if let Some(shots) = a.shots {
                let layers = ansatz.layers(&report.parameters)?;
                let psi = simulator::build_state(&graph, &layers, variant)?;
                let estimate = simulator::shot_estimate(&graph, &psi, shots, a.seed);
                let samples = simulator::sample(&psi, shots, a.seed);
                let best = samples
                    .iter()
                    .map(|&z| (graph.cut_value_bits(z), z))
                    .fold((f64::NEG_INFINITY, 0), |acc, x| if x.0 > acc.0 { x } else { acc });
                report.sampled_cut = Some(estimate.mean);
                report.best_cut = Some(best.0);
                report.assignment = Some((0..graph.n()).map(|v| ((best.1 >> v) & 1) as u8).collect());
            }
        }
        (_, None) => unreachable!("every non-classical algorithm has a variant"),
    }
    report.ratio = optimum.map(|o| report.best_cut.unwrap_or(report.best_value) / o);
    emit(&report, a.out.as_deref())
}

fn read_config<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<T> {
    match path {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            toml::from_str(&text).with_context(|| format!("parsing {}", p.display()))
        }
        None => Ok(T::default()),
    }
}

impl BenchArgs {
    fn source(&self, current: &mut GraphSource) {
        if !self.graph.is_empty() {
            *current = GraphSource::Files { paths: self.graph.clone() };
            return;
        }
        if let GraphSource::Regular { n, degree, instances } = current {
            *n = self.n.unwrap_or(*n);
            *degree = self.degree.unwrap_or(*degree);
            *instances = self.instances.unwrap_or(*instances);
        } else if self.n.is_some() || self.degree.is_some() || self.instances.is_some() {
            *current = GraphSource::Regular {
                n: self.n.unwrap_or(16),
                degree: self.degree.unwrap_or(3),
                instances: self.instances.unwrap_or(10),
            };
        }
    }
}

fn write_campaign(c: &Campaign, out: Option<&Path>) -> Result<()> {
    match out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            c.write_csv(BufWriter::new(File::create(dir.join(format!("{}.csv", c.kind)))?))?;
            c.write_json(BufWriter::new(File::create(dir.join(format!("{}.json", c.kind)))?))?;
        }
        None => print_summary(c),
    }
    Ok(())
}

fn print_summary(c: &Campaign) {
    println!("{:<14} {:>5} {:>9} {:>9} {:>9} {:>9}", "algorithm", "depth", "q1", "median", "q3", "mean");
    for s in &c.summary {
        println!(
            "{:<14} {:>5} {:>9.4} {:>9.4} {:>9.4} {:>9.4}",
            s.algorithm.name(),
            s.depth,
            s.lower_quartile,
            s.median,
            s.upper_quartile,
            s.mean
        );
    }
}

fn bench_variants(a: BenchArgs) -> Result<()> {
    let mut cfg: CampaignConfig = read_config(a.config.as_deref())?;
    a.source(&mut cfg.source);
    cfg.seed = a.seed.unwrap_or(cfg.seed);
    cfg.restarts = a.restarts.unwrap_or(cfg.restarts);
    if !a.variant.is_empty() {
        cfg.algorithms = a.variant.iter().map(|s| s.parse()).collect::<xqaoa::Result<_>>()?;
    }
    a.optimizer.apply(&mut cfg.optimizer);
    let campaign = run_variant_comparison(&cfg)?;
    write_campaign(&campaign, a.out.as_deref())
}

fn bench_transition(a: BenchArgs) -> Result<()> {
    let mut cfg: TransitionConfig = read_config(a.config.as_deref())?;
    a.source(&mut cfg.source);
    cfg.seed = a.seed.unwrap_or(cfg.seed);
    cfg.restarts = a.restarts.unwrap_or(cfg.restarts);
    a.optimizer.apply(&mut cfg.optimizer);
    let report = run_transition_study(&cfg)?;
    match a.out.as_deref() {
        Some(dir) => {
            write_campaign(&report.campaign, Some(dir))?;
            emit(&report, Some(&dir.join("transition_report.json")))?;
        }
        None => {
            println!(
                "gamma within {:.4}, beta within {:.4}, extraction consistent {:.4}",
                report.gamma_within_fraction, report.beta_within_fraction, report.extraction_consistent_fraction
            );
            print_summary(&report.campaign);
        }
    }
    Ok(())
}

fn bench_depth(a: BenchArgs) -> Result<()> {
    let mut cfg: DepthConfig = read_config(a.config.as_deref())?;
    a.source(&mut cfg.source);
    cfg.seed = a.seed.unwrap_or(cfg.seed);
    cfg.restarts = a.restarts.unwrap_or(cfg.restarts);
    cfg.max_depth = a.p.unwrap_or(cfg.max_depth);
    cfg.shots = a.shots.or(cfg.shots);
    if !a.variant.is_empty() {
        cfg.variants = a.variant.iter().map(|s| s.parse()).collect::<xqaoa::Result<_>>()?;
    }
    a.optimizer.apply(&mut cfg.optimizer);
    let campaign = run_depth_study(&cfg)?;
    write_campaign(&campaign, a.out.as_deref())
}

#[derive(Serialize)]
struct CertifyReport {
    n: usize,
    rank: usize,
    sdp_value: f64,
    expected_cut: f64,
    guarantee_constant: f64,
    worst_angle: f64,
    best_rounded_cut: f64,
    assignment: Vec<u8>,
    converged: bool,
}

fn certify_gw(a: CertifyArgs) -> Result<()> {
    let (graph, _) = load_graph(&a.graph)?;
    let rank = a.rank.unwrap_or_else(|| gw_default_rank(graph.n()));
    let sol = gw_solve_with(&graph, rank, a.restarts, a.seed, &OptimizerConfig::default())?;
    let cert = gw_certificate(&graph, &sol)?;
    let (cut, _) = gw_round(&graph, &sol, a.shots, a.seed)?;
    let report = CertifyReport {
        n: graph.n(),
        rank,
        sdp_value: cert.sdp_value,
        expected_cut: cert.expected_cut,
        guarantee_constant: cert.guarantee_constant,
        worst_angle: cert.worst_angle,
        best_rounded_cut: cut.cut_value,
        assignment: cut.assignment,
        converged: sol.converged,
    };
    emit(&report, a.out.as_deref())
}

fn oracle(a: OracleArgs) -> Result<()> {
    let (graph, _) = load_graph(&a.graph)?;
    let cut = brute_force_maxcut_with_cap(&graph, a.cap)?;
    emit(&cut, a.out.as_deref())
}
