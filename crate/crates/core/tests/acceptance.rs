//! Acceptance suite. Every criterion runs inside one test so that wall-time
//! measurements are not disturbed by other tests sharing the CPU. Set
//! `XQAOA_ACCEPTANCE=1,3,7` to run a subset.

use std::f64::consts::{FRAC_PI_4, PI};
use std::time::{Duration, Instant};

use rand::Rng as _;
use xqaoa::analytic::{self, AngleAssignment, StarGraphSpec, Variant};
use xqaoa::baselines::{gw_certificate, gw_default_rank, gw_guarantee, gw_round, gw_solve};
use xqaoa::bench::{
    load_instances, quantile, run_depth_study, run_transition_study_on, run_variant_comparison_on, Algorithm,
    CampaignConfig, DepthConfig, GraphSource, Instance, TransitionConfig,
};
use xqaoa::graph::{brute_force_maxcut, generate_regular, named, BRUTE_FORCE_HARD_CAP};
use xqaoa::optimize::{
    cga_gradient, lbfgs_maximize, multistart, random_params, AnalyticObjective, FnObjective, GradStep, OptimizerConfig,
};
use xqaoa::rng::{rng_from_seed, Rng};
use xqaoa::simulator::{self, SimulatedAnsatz};
use xqaoa::{Graph, Result};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Result<Verdict> {
    Ok(Verdict { pass, detail: detail.into() })
}

fn random_weighted(rng: &mut Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v, rng.random_range(0.0..2.0)));
            }
        }
    }
    if edges.is_empty() {
        edges.push((0, 1, rng.random_range(0.0..2.0)));
    }
    Graph::new(n, edges).unwrap()
}

fn random_unweighted(rng: &mut Rng, n: usize, p: f64) -> Graph {
    let g = random_weighted(rng, n, p);
    g.reweighted(|_| 1.0).unwrap()
}

fn angles(rng: &mut Rng, k: usize, hi: f64) -> Vec<f64> {
    (0..k).map(|_| rng.random_range(-hi..hi)).collect()
}

fn prufer_tree(rng: &mut Rng, n: usize) -> Graph {
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.random_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &s in &seq {
        degree[s] += 1;
    }
    let mut edges = Vec::new();
    for &s in &seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
        edges.push((leaf, s));
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    Graph::unweighted(n, edges).unwrap()
}

fn c1_oracle_equivalence() -> Result<Verdict> {
    let started = Instant::now();
    let mut rng = rng_from_seed(101);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let n = rng.random_range(2..=10);
        let g = random_weighted(&mut rng, n, 0.45);
        for _ in 0..50 {
            for variant in Variant::ALL {
                let params = angles(&mut rng, variant.param_count(g.n(), g.m()), PI);
                let a = AngleAssignment::from_params(&g, variant, &params)?;
                let closed = analytic::expectation(&g, &a);
                let psi = simulator::build_state(&g, std::slice::from_ref(&a), variant)?;
                worst = worst.max((closed - simulator::expectation(&psi, &g)?).abs());
            }
        }
    }
    let elapsed = started.elapsed();
    verdict(
        worst <= 1e-9 && elapsed <= Duration::from_secs(120),
        format!("max |Δ| = {worst:.2e}, {:.1} s", elapsed.as_secs_f64()),
    )
}

fn c2_reductions() -> Result<Verdict> {
    let mut rng = rng_from_seed(202);
    let mut worst = [0.0f64; 4];
    for _ in 0..20 {
        let n = rng.random_range(3..=12);
        let g = random_weighted(&mut rng, n, 0.4);
        let (n, m) = (g.n(), g.m());
        let gamma = angles(&mut rng, m, PI);
        let beta = angles(&mut rng, n, PI);
        let alpha = angles(&mut rng, n, PI);
        let e = |a: &AngleAssignment| analytic::expectation(&g, a);

        let xy = AngleAssignment::xy(&g, gamma.clone(), beta.clone(), vec![0.0; n])?;
        let ma = AngleAssignment::ma(&g, gamma.clone(), beta.clone())?;
        worst[0] = worst[0].max((e(&xy) - e(&ma)).abs());

        let (g0, b0) = (gamma[0], beta[0]);
        let uniform = AngleAssignment::ma(&g, vec![g0; m], vec![b0; n])?;
        worst[1] = worst[1].max((e(&uniform) - analytic::qaoa1_expectation(&g, g0, b0)).abs());

        let xy = AngleAssignment::xy(&g, gamma.clone(), beta.clone(), beta.clone())?;
        let xeqy = AngleAssignment::xeqy(&g, gamma.clone(), beta.clone())?;
        worst[2] = worst[2].max((e(&xy) - e(&xeqy)).abs());

        let xy = AngleAssignment::xy(&g, gamma.clone(), vec![0.0; n], alpha.clone())?;
        let y = AngleAssignment::y(&g, gamma.clone(), alpha.clone())?;
        worst[3] = worst[3].max((e(&xy) - e(&y)).abs());
    }
    let max = worst.iter().cloned().fold(0.0, f64::max);
    verdict(
        max <= 1e-12,
        format!("XY→MA {:.1e}, MA→QAOA {:.1e}, XY→X=Y {:.1e}, XY→Y {:.1e}", worst[0], worst[1], worst[2], worst[3]),
    )
}

fn c3_y_mixer_and_stars() -> Result<Verdict> {
    let mut graphs = vec![named::star(4)];
    graphs.extend([2, 4, 6, 8, 10].map(named::star));
    graphs.push(named::path(3));
    let mut rng = rng_from_seed(303);
    let mut tries = 0;
    while graphs.len() < 11 {
        tries += 1;
        let n = rng.random_range(5..=10);
        let t = prufer_tree(&mut rng, n);
        if t.has_odd_edge_degrees() {
            graphs.push(t);
        }
        assert!(tries < 1_000_000, "no parity-valid tree found");
    }
    let mut worst = 0.0f64;
    for g in &graphs {
        assert!(g.has_odd_edge_degrees());
        let a = AngleAssignment::uniform(g, Variant::Y, PI, 0.0, FRAC_PI_4);
        worst = worst.max((analytic::expectation(g, &a) - g.m() as f64).abs());
    }

    let star = StarGraphSpec::new(4)?;
    let ratio = analytic::star_qaoa1_optimum(star).ratio;

    let s4 = named::star(4);
    let f = FnObjective::new(2, |x: &[f64]| analytic::qaoa1_expectation(&s4, x[0], x[1]));
    let cfg = OptimizerConfig { grad_tolerance: 1e-10, ..Default::default() };
    let mut best = f64::NEG_INFINITY;
    let steps = 64;
    for i in 0..steps {
        for j in 0..steps {
            let x0 = [2.0 * PI * i as f64 / steps as f64, PI * j as f64 / steps as f64];
            best = best.max(analytic::qaoa1_expectation(&s4, x0[0], x0[1]));
            if (i * steps + j) % 16 == 0 {
                best = best.max(lbfgs_maximize(&f, &x0, &cfg)?.best_value);
            }
        }
    }
    verdict(
        worst <= 1e-12 && (ratio - 0.75).abs() <= 1e-6 && best <= 3.0 + 1e-6,
        format!(
            "{} graphs, max |⟨C⟩ − |E|| = {worst:.1e}; S4 ratio {ratio:.7}; S4 grid+L-BFGS max {best:.9}",
            graphs.len()
        ),
    )
}

fn c4_trig_lemmas() -> Result<Verdict> {
    let mut rng = rng_from_seed(404);
    let mut worst = 0.0f64;
    for f in 1..=8 {
        for _ in 0..100 {
            let x = angles(&mut rng, f, PI);
            let y = angles(&mut rng, f, PI);
            worst = worst.max(analytic::trig_identity_check(&x, &y)?.max());
        }
    }
    verdict(worst <= 1e-12, format!("max residual {worst:.2e}"))
}

fn c5_gw_guarantee() -> Result<Verdict> {
    let (constant, theta) = gw_guarantee();
    let mut rng = rng_from_seed(505);
    let mut failures = Vec::new();
    let mut min_margin = f64::INFINITY;
    for i in 0..20 {
        let n = rng.random_range(4..=18);
        let g = if i % 2 == 0 { random_weighted(&mut rng, n, 0.4) } else { random_unweighted(&mut rng, n, 0.4) };
        let sol = gw_solve(&g, gw_default_rank(n), 7 + i)?;
        let cert = gw_certificate(&g, &sol)?;
        let opt = brute_force_maxcut(&g)?.cut_value;
        let (cut, _) = gw_round(&g, &sol, 100, 11 + i)?;
        let margin = cert.expected_cut - 0.87856 * cert.sdp_value;
        min_margin = min_margin.min(margin);
        let ok = margin >= -1e-9 && cert.sdp_value >= opt - 1e-9 && opt >= cut.cut_value - 1e-9;
        if !ok {
            failures.push(format!("#{i}: sdp {} opt {} cut {}", cert.sdp_value, opt, cut.cut_value));
        }
    }
    verdict(
        failures.is_empty() && (constant - 0.87856).abs() <= 5e-6 && (theta - 2.331122).abs() <= 1e-4,
        format!("α = {constant:.7} at θ = {theta:.6}; min margin {min_margin:.3e}; failures {failures:?}"),
    )
}

fn c6_gamma_zero() -> Result<Verdict> {
    let mut rng = rng_from_seed(606);
    let graphs: Vec<Graph> = vec![
        named::petersen(),
        named::cycle(7),
        random_weighted(&mut rng, 9, 0.5),
        random_weighted(&mut rng, 12, 0.3),
        generate_regular(16, 3, 1)?,
    ];
    let mut worst = 0.0f64;
    for g in &graphs {
        for _ in 0..1000 {
            let beta = angles(&mut rng, g.n(), PI);
            let a = AngleAssignment::xeqy(g, vec![0.0; g.m()], beta.clone())?;
            let theta: Vec<f64> = beta.iter().map(|b| 2.0 * b).collect();
            worst = worst.max((analytic::expectation(g, &a) - analytic::relaxed_objective(g, &theta)).abs());
        }
    }
    verdict(worst <= 1e-12, format!("max |Δ| = {worst:.2e}"))
}

fn c7_ordering(d3: &[Instance], d6: &[Instance], oracle: Duration) -> Result<Verdict> {
    let started = Instant::now();
    let cfg = CampaignConfig {
        algorithms: vec![Algorithm::Qaoa, Algorithm::Ma, Algorithm::XeqY],
        restarts: 50,
        seed: 7,
        ..Default::default()
    };
    let mut pass = true;
    let mut detail = Vec::new();
    for (degree, instances) in [(3, d3), (6, d6)] {
        let c = run_variant_comparison_on(instances, &cfg)?;
        let ratios = |alg| -> Vec<f64> { c.records_for(alg, 1).filter_map(|r| r.ratio).collect() };
        let (q, m, x) = (ratios(Algorithm::Qaoa), ratios(Algorithm::Ma), ratios(Algorithm::XeqY));
        let med = |v: &[f64]| quantile(v, 0.5);
        let xq1 = quantile(&x, 0.25);
        pass &= med(&x) - med(&m) >= 0.02 && med(&m) >= med(&q) && xq1 >= 0.92;
        detail.push(format!(
            "D={degree}: median QAOA {:.4} MA {:.4} X=Y {:.4}, X=Y Q1 {xq1:.4}",
            med(&q),
            med(&m),
            med(&x)
        ));
    }
    let elapsed = started.elapsed() + oracle;
    pass &= elapsed <= Duration::from_secs(15 * 60);
    detail.push(format!("{:.0} s incl. oracle", elapsed.as_secs_f64()));
    verdict(pass, detail.join("; "))
}

fn c8_transition(d3: &[Instance]) -> Result<Verdict> {
    let cfg = TransitionConfig { restarts: 50, seed: 8, ablation: false, ..Default::default() };
    let report = run_transition_study_on(d3, &cfg)?;
    let converged: usize = report.instances.iter().map(|s| s.converged_runs).sum();
    verdict(
        report.gamma_within_fraction >= 0.95
            && report.beta_within_fraction >= 0.95
            && report.extraction_consistent_fraction == 1.0,
        format!(
            "{converged} converged runs; γ within {:.4}, β within {:.4}, extraction consistent {:.4}",
            report.gamma_within_fraction, report.beta_within_fraction, report.extraction_consistent_fraction
        ),
    )
}

fn c9_depth() -> Result<Verdict> {
    let started = Instant::now();
    let cfg = DepthConfig { seed: 9, ..Default::default() };
    let c = run_depth_study(&cfg)?;
    let median = |alg| c.summary_for(alg, 1).map(|s| s.median).unwrap_or(f64::NAN);
    let (q, m, x) = (median(Algorithm::Qaoa), median(Algorithm::Ma), median(Algorithm::XeqY));
    let mut drops = 0;
    let ids: std::collections::BTreeSet<&str> = c.records.iter().map(|r| r.graph_id.as_str()).collect();
    for id in &ids {
        let values: Vec<f64> = (1..=3)
            .map(|p| c.records_for(Algorithm::Qaoa, p).find(|r| r.graph_id == *id).unwrap().best_value)
            .collect();
        drops += values.windows(2).filter(|w| w[1] < w[0] - 1e-6).count();
    }
    let elapsed = started.elapsed();
    verdict(
        ids.len() == 20 && x >= q && x >= m && drops == 0 && elapsed <= Duration::from_secs(20 * 60),
        format!(
            "p=1 medians QAOA {q:.4} MA {m:.4} X=Y {x:.4}; QAOA depth drops {drops}; {:.0} s",
            elapsed.as_secs_f64()
        ),
    )
}

fn c10_optimizer() -> Result<Verdict> {
    let rosen = FnObjective::new(2, |x: &[f64]| -((1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2)));
    let cfg = OptimizerConfig { grad_tolerance: 1e-9, ..Default::default() };
    let run = lbfgs_maximize(&rosen, &[-1.2, 1.0], &cfg)?;
    let rosen_err = (run.x_final[0] - 1.0).abs().max((run.x_final[1] - 1.0).abs());

    let k3 = named::complete(3);
    let x = [0.73, 0.41];
    let exact = SimulatedAnsatz::new(&k3, Variant::Qaoa, 1)?.value_and_gradient(&x)?.1;
    let f = AnalyticObjective::new(&k3, Variant::Qaoa);
    let steps: Vec<f64> = (0..4).map(|k| 4e-2 / 2f64.powi(k)).collect();
    let errors: Vec<f64> = steps
        .iter()
        .map(|&h| {
            let g = cga_gradient(&f, &x, GradStep::Absolute(h), 1).unwrap();
            g.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
        })
        .collect();
    let order = (errors[0] / errors[3]).log2() / 3.0;

    let mut rng = rng_from_seed(1010);
    let g = random_weighted(&mut rng, 10, 0.5);
    let xy = AnalyticObjective::new(&g, Variant::Xy);
    let p = random_params(Variant::Xy, &g, &mut rng);
    let one = cga_gradient(&xy, &p, GradStep::default(), 1)?;
    let eight = cga_gradient(&xy, &p, GradStep::default(), 8)?;
    let spread = one.iter().zip(&eight).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);

    verdict(
        rosen_err <= 1e-6 && order >= 1.9 && spread <= 1e-15,
        format!("Rosenbrock error {rosen_err:.1e}; CGA order {order:.3}; workers 1 vs 8 max |Δ| {spread:.1e}"),
    )
}

fn c11_performance(d3: &[Instance]) -> Result<Verdict> {
    let big = generate_regular(256, 10, 11)?;
    let mut rng = rng_from_seed(1111);
    let mut slowest = Duration::ZERO;
    let mut sink = 0.0;
    for _ in 0..20 {
        let p = random_params(Variant::Xy, &big, &mut rng);
        let a = AngleAssignment::from_params(&big, Variant::Xy, &p)?;
        let t = Instant::now();
        sink += analytic::expectation(&big, &a);
        slowest = slowest.max(t.elapsed());
    }
    assert!(sink.is_finite());

    let g = &d3[0].graph;
    let cfg = OptimizerConfig { workers: 8, ..Default::default() };
    let f = AnalyticObjective::new(g, Variant::XeqY);
    let t = Instant::now();
    multistart(&f, |r: &mut Rng| random_params(Variant::XeqY, g, r), 50, 12, &cfg)?;
    let full = t.elapsed();
    verdict(
        slowest <= Duration::from_millis(10) && full <= Duration::from_secs(30),
        format!(
            "n=256 D=10 XY evaluation {:.3} ms (slowest of 20); 50-restart X=Y on n=32 {:.1} s",
            slowest.as_secs_f64() * 1e3,
            full.as_secs_f64()
        ),
    )
}

#[test]
fn acceptance() {
    let selected: Option<Vec<usize>> =
        std::env::var("XQAOA_ACCEPTANCE").ok().map(|s| s.split(',').filter_map(|t| t.trim().parse().ok()).collect());
    let wanted = |i: usize| selected.as_ref().is_none_or(|s| s.contains(&i));

    let needs_n32 = [7, 8, 11].into_iter().any(wanted);
    let oracle_started = Instant::now();
    let regular = |degree| -> Vec<Instance> {
        if !needs_n32 {
            return Vec::new();
        }
        let source = GraphSource::Regular { n: 32, degree, instances: 10 };
        load_instances(&source, 0, BRUTE_FORCE_HARD_CAP).unwrap()
    };
    let d3 = regular(3);
    let d6 = if wanted(7) { regular(6) } else { Vec::new() };
    let oracle = oracle_started.elapsed();

    type Check<'a> = Box<dyn FnOnce() -> Result<Verdict> + 'a>;
    let criteria: Vec<(usize, &str, Check)> = vec![
        (1, "closed forms match the statevector", Box::new(c1_oracle_equivalence)),
        (2, "reduction chain", Box::new(c2_reductions)),
        (3, "Y mixer on odd edge degrees, star S4 ceiling", Box::new(c3_y_mixer_and_stars)),
        (4, "product-to-sum identities", Box::new(c4_trig_lemmas)),
        (5, "Goemans-Williamson guarantee", Box::new(c5_gw_guarantee)),
        (6, "γ=0 X=Y equals the relaxed objective", Box::new(c6_gamma_zero)),
        (7, "n=32 ordering X=Y > MA ≥ QAOA", Box::new(|| c7_ordering(&d3, &d6, oracle))),
        (8, "X=Y transition statistics", Box::new(|| c8_transition(&d3))),
        (9, "depth study", Box::new(c9_depth)),
        (10, "optimizer correctness", Box::new(c10_optimizer)),
        (11, "performance", Box::new(|| c11_performance(&d3))),
    ];

    let mut failed = Vec::new();
    for (i, name, check) in criteria {
        if !wanted(i) {
            continue;
        }
        let started = Instant::now();
        let (pass, detail) = match check() {
            Ok(v) => (v.pass, v.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let tag = if pass { "PASS" } else { "FAIL" };
        println!("[{tag}] {i:>2} {name}: {detail} ({:.1} s)", started.elapsed().as_secs_f64());
        if !pass {
            failed.push(i);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
