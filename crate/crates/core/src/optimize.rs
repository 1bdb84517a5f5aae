//! L-BFGS maximisation with central-difference gradients, plus multistart
//! and initial-point samplers.
//!
//! The optimiser minimises `−f` internally; every value it reports is in the
//! maximisation convention.

use std::collections::VecDeque;
use std::f64::consts::PI;

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{self, AngleAssignment, Variant};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::{derive_seed, rng_from_seed, Rng};
use crate::simulator::SimulatedAnsatz;

/// A pure scalar function to maximise.
pub trait Objective: Sync {
    fn dim(&self) -> usize;

    fn value(&self, x: &[f64]) -> f64;

    /// Exact `(value, gradient)` if the objective can supply one.
    fn value_and_gradient(&self, _x: &[f64]) -> Option<(f64, Vec<f64>)> {
        None
    }
}

/// Adapter turning a closure into an [`Objective`].
pub struct FnObjective<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(&[f64]) -> f64 + Sync> FnObjective<F> {
    pub fn new(dim: usize, f: F) -> Self {
        FnObjective { dim, f }
    }
}

impl<F: Fn(&[f64]) -> f64 + Sync> Objective for FnObjective<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }
}

/// Closed-form p=1 expectation of one variant over its free parameters.
pub struct AnalyticObjective<'g> {
    pub graph: &'g Graph,
    pub variant: Variant,
}

impl<'g> AnalyticObjective<'g> {
    pub fn new(graph: &'g Graph, variant: Variant) -> Self {
        AnalyticObjective { graph, variant }
    }
}

impl Objective for AnalyticObjective<'_> {
    fn dim(&self) -> usize {
        self.variant.param_count(self.graph.n(), self.graph.m())
    }

    fn value(&self, x: &[f64]) -> f64 {
        analytic::expectation_from_params(self.graph, self.variant, x).unwrap_or(f64::NAN)
    }
}

/// The Classical-Relaxed objective over per-vertex angles.
pub struct RelaxedObjective<'g>(pub &'g Graph);

impl Objective for RelaxedObjective<'_> {
    fn dim(&self) -> usize {
        self.0.n()
    }

    fn value(&self, x: &[f64]) -> f64 {
        analytic::relaxed_objective(self.0, x)
    }
}

impl Objective for SimulatedAnsatz<'_> {
    fn dim(&self) -> usize {
        self.num_params()
    }

    fn value(&self, x: &[f64]) -> f64 {
        SimulatedAnsatz::value(self, x).unwrap_or(f64::NAN)
    }

    fn value_and_gradient(&self, x: &[f64]) -> Option<(f64, Vec<f64>)> {
        SimulatedAnsatz::value_and_gradient(self, x).ok()
    }
}

/// Finite-difference step.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GradStep {
    /// `h_i = scale · max(1, |x_i|)`
    Relative(f64),
    Absolute(f64),
}

impl GradStep {
    #[inline]
    fn at(self, xi: f64) -> f64 {
        match self {
            GradStep::Relative(s) => s * xi.abs().max(1.0),
            GradStep::Absolute(h) => h,
        }
    }

    fn scale(self) -> f64 {
        match self {
            GradStep::Relative(s) | GradStep::Absolute(s) => s,
        }
    }
}

impl Default for GradStep {
    fn default() -> Self {
        GradStep::Relative(1e-6)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GradientSource {
    #[default]
    CentralDifference,
    /// Use [`Objective::value_and_gradient`] when available.
    Exact,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizerConfig {
    pub memory: usize,
    pub grad_step: GradStep,
    pub grad_tolerance: f64,
    pub max_evaluations: usize,
    pub workers: usize,
    pub gradient: GradientSource,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            memory: 10,
            grad_step: GradStep::default(),
            grad_tolerance: 1e-6,
            max_evaluations: 100_000,
            workers: 1,
            gradient: GradientSource::CentralDifference,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidArgument(m.into()));
        if self.memory == 0 {
            return bad("memory must be at least 1");
        }
        if !(self.grad_step.scale() > 0.0) {
            return bad("gradient step must be positive");
        }
        if !(self.grad_tolerance >= 0.0) {
            return bad("gradient tolerance must be non-negative");
        }
        if self.workers == 0 {
            return bad("workers must be at least 1");
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    GradientTolerance,
    BudgetExhausted,
    LineSearchFailed,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OptimizationRun {
    pub x0: Vec<f64>,
    pub x_final: Vec<f64>,
    /// `(evaluations so far, best value so far)` after every accepted step.
    pub objective_trace: Vec<(usize, f64)>,
    pub best_value: f64,
    pub converged: bool,
    /// `max_i |∂f/∂x_i|` at `x_final`.
    pub gradient_norm_final: f64,
    pub seed: u64,
    pub evaluations: usize,
    pub iterations: usize,
    pub termination: Termination,
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))
}

fn finite(value: f64, coordinate: Option<usize>) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFiniteObjective { coordinate, value })
    }
}

fn cga_inner<O: Objective + ?Sized>(f: &O, x: &[f64], step: GradStep, parallel: bool) -> Result<Vec<f64>> {
    let partial = |i: usize| -> Result<f64> {
        let h = step.at(x[i]);
        let mut xp = x.to_vec();
        xp[i] = x[i] + h;
        let fp = finite(f.value(&xp), Some(i))?;
        xp[i] = x[i] - h;
        let fm = finite(f.value(&xp), Some(i))?;
        Ok((fp - fm) / (2.0 * h))
    };
    if parallel {
        (0..x.len()).into_par_iter().map(partial).collect()
    } else {
        (0..x.len()).map(partial).collect()
    }
}

/// Central-difference gradient `g_i = (f(x + h e_i) − f(x − h e_i)) / 2h`,
/// with the `2n` evaluations spread over `workers` threads. Every component
/// is computed independently, so the result does not depend on `workers`.
pub fn cga_gradient<O: Objective + ?Sized>(f: &O, x: &[f64], step: GradStep, workers: usize) -> Result<Vec<f64>> {
    if workers <= 1 {
        cga_inner(f, x, step, false)
    } else {
        pool(workers)?.install(|| cga_inner(f, x, step, true))
    }
}

enum Stop {
    Budget,
    Failed(Error),
}

impl From<Error> for Stop {
    fn from(e: Error) -> Self {
        Stop::Failed(e)
    }
}

/// A point evaluated for the minimisation of `φ = −f`.
#[derive(Clone)]
struct Point {
    x: Vec<f64>,
    phi: f64,
    grad: Vec<f64>,
}

struct Engine<'a, O: ?Sized> {
    f: &'a O,
    cfg: &'a OptimizerConfig,
    parallel: bool,
    evals: usize,
}

impl<O: Objective + ?Sized> Engine<'_, O> {
    fn cost(&self, n: usize) -> usize {
        match self.cfg.gradient {
            GradientSource::Exact => 1,
            GradientSource::CentralDifference => 2 * n + 1,
        }
    }

    fn eval(&mut self, x: Vec<f64>) -> std::result::Result<Point, Stop> {
        let cost = self.cost(x.len());
        if self.evals + cost > self.cfg.max_evaluations {
            return Err(Stop::Budget);
        }
        self.evals += cost;
        let exact = match self.cfg.gradient {
            GradientSource::Exact => self.f.value_and_gradient(&x),
            GradientSource::CentralDifference => None,
        };
        let (value, grad) = match exact {
            Some(vg) => vg,
            None => {
                if self.cfg.gradient == GradientSource::Exact {
                    // No exact gradient on offer: account for the stencil.
                    self.evals += 2 * x.len();
                }
                let value = self.f.value(&x);
                (value, cga_inner(self.f, &x, self.cfg.grad_step, self.parallel)?)
            }
        };
        finite(value, None)?;
        Ok(Point { phi: -value, grad: grad.into_iter().map(|g| -g).collect(), x })
    }

    fn probe(&mut self, base: &Point, d: &[f64], alpha: f64) -> std::result::Result<(Point, f64), Stop> {
        let x = base.x.iter().zip(d).map(|(xi, di)| xi + alpha * di).collect();
        let p = self.eval(x)?;
        let slope = dot(&p.grad, d);
        Ok((p, slope))
    }

    /// Strong-Wolfe line search (bracketing then zoom). Returns `None` when
    /// no acceptable step was found.
    fn line_search(&mut self, base: &Point, d: &[f64], alpha_init: f64) -> std::result::Result<Option<Point>, Stop> {
        const C1: f64 = 1e-4;
        const C2: f64 = 0.9;
        const MAX_BRACKET: usize = 40;
        let phi0 = base.phi;
        let dphi0 = dot(&base.grad, d);
        let armijo = |a: f64, phi: f64| phi <= phi0 + C1 * a * dphi0;
        let curvature = |slope: f64| slope.abs() <= -C2 * dphi0;

        // (alpha, phi, slope, point) at the previous trial.
        let mut prev: (f64, f64, f64, Option<Point>) = (0.0, phi0, dphi0, None);
        let mut alpha = alpha_init;
        for i in 0..MAX_BRACKET {
            let (p, slope) = self.probe(base, d, alpha)?;
            if !armijo(alpha, p.phi) || (i > 0 && p.phi >= prev.1) {
                let lo = prev;
                return self.zoom(base, d, lo, (alpha, p.phi, slope), phi0, dphi0);
            }
            if curvature(slope) {
                return Ok(Some(p));
            }
            if slope >= 0.0 {
                let lo = (alpha, p.phi, slope, Some(p));
                return self.zoom(base, d, lo, (prev.0, prev.1, prev.2), phi0, dphi0);
            }
            prev = (alpha, p.phi, slope, Some(p));
            alpha *= 2.0;
        }
        Ok(prev.3)
    }

    fn zoom(
        &mut self,
        base: &Point,
        d: &[f64],
        mut lo: (f64, f64, f64, Option<Point>),
        mut hi: (f64, f64, f64),
        phi0: f64,
        dphi0: f64,
    ) -> std::result::Result<Option<Point>, Stop> {
        const C1: f64 = 1e-4;
        const C2: f64 = 0.9;
        const MAX_ZOOM: usize = 40;
        for _ in 0..MAX_ZOOM {
            let (a_lo, a_hi) = (lo.0, hi.0);
            let width = (a_hi - a_lo).abs();
            if width <= 1e-14 * a_lo.abs().max(a_hi.abs()).max(1e-300) {
                break;
            }
            let (left, right) = (a_lo.min(a_hi), a_lo.max(a_hi));
            let alpha = match cubic_min(a_lo, lo.1, lo.2, a_hi, hi.1, hi.2) {
                Some(a) if a > left + 0.1 * width && a < right - 0.1 * width => a,
                _ => 0.5 * (a_lo + a_hi),
            };
            let (p, slope) = self.probe(base, d, alpha)?;
            if p.phi > phi0 + C1 * alpha * dphi0 || p.phi >= lo.1 {
                hi = (alpha, p.phi, slope);
            } else {
                if slope.abs() <= -C2 * dphi0 {
                    return Ok(Some(p));
                }
                if slope * (a_hi - a_lo) >= 0.0 {
                    hi = (lo.0, lo.1, lo.2);
                }
                lo = (alpha, p.phi, slope, Some(p));
            }
        }
        // Fall back to the best sufficient-decrease point seen, if any.
        Ok(lo.3)
    }
}

/// Minimiser of the cubic interpolating values and slopes at two points.
fn cubic_min(a0: f64, f0: f64, d0: f64, a1: f64, f1: f64, d1: f64) -> Option<f64> {
    let t = d0 + d1 - 3.0 * (f0 - f1) / (a0 - a1);
    let disc = t * t - d0 * d1;
    if !(disc >= 0.0) {
        return None;
    }
    let s = (a1 - a0).signum() * disc.sqrt();
    let a = a1 - (a1 - a0) * (d1 + s - t) / (d1 - d0 + 2.0 * s);
    a.is_finite().then_some(a)
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

struct Pair {
    s: Vec<f64>,
    y: Vec<f64>,
    rho: f64,
}

/// `−H g` by the two-loop recursion.
fn two_loop(g: &[f64], memory: &VecDeque<Pair>) -> Vec<f64> {
    let mut q = g.to_vec();
    let mut alphas = Vec::with_capacity(memory.len());
    for p in memory.iter().rev() {
        let a = p.rho * dot(&p.s, &q);
        for (qi, yi) in q.iter_mut().zip(&p.y) {
            *qi -= a * yi;
        }
        alphas.push(a);
    }
    if let Some(last) = memory.back() {
        let scale = dot(&last.s, &last.y) / dot(&last.y, &last.y);
        for qi in &mut q {
            *qi *= scale;
        }
    }
    for (p, a) in memory.iter().zip(alphas.iter().rev()) {
        let b = p.rho * dot(&p.y, &q);
        for (qi, si) in q.iter_mut().zip(&p.s) {
            *qi += (a - b) * si;
        }
    }
    for qi in &mut q {
        *qi = -*qi;
    }
    q
}

fn lbfgs_inner<O: Objective + ?Sized>(
    f: &O,
    x0: &[f64],
    cfg: &OptimizerConfig,
    seed: u64,
    parallel: bool,
) -> Result<OptimizationRun> {
    if x0.len() != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), actual: x0.len() });
    }
    if let Some(i) = x0.iter().position(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(format!("x0[{i}] is not finite")));
    }
    let mut engine = Engine { f, cfg, parallel, evals: 0 };
    let mut current = match engine.eval(x0.to_vec()) {
        Ok(p) => p,
        Err(Stop::Failed(e)) => return Err(e),
        Err(Stop::Budget) => {
            return Err(Error::InvalidArgument("evaluation budget too small for a single gradient".into()))
        }
    };
    let mut trace = vec![(engine.evals, -current.phi)];
    let mut memory: VecDeque<Pair> = VecDeque::with_capacity(cfg.memory);
    let mut iterations = 0;

    let termination = loop {
        if max_abs(&current.grad) <= cfg.grad_tolerance {
            break Termination::GradientTolerance;
        }
        let mut d = two_loop(&current.grad, &memory);
        if !(dot(&d, &current.grad) < 0.0) {
            memory.clear();
            d = current.grad.iter().map(|g| -g).collect();
        }
        let alpha_init =
            if memory.is_empty() { (1.0 / dot(&current.grad, &current.grad).sqrt()).min(1.0) } else { 1.0 };
        match engine.line_search(&current, &d, alpha_init) {
            Ok(Some(next)) => {
                let s: Vec<f64> = next.x.iter().zip(&current.x).map(|(a, b)| a - b).collect();
                let y: Vec<f64> = next.grad.iter().zip(&current.grad).map(|(a, b)| a - b).collect();
                let sy = dot(&s, &y);
                if sy > 1e-12 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() {
                    if memory.len() == cfg.memory {
                        memory.pop_front();
                    }
                    memory.push_back(Pair { s, y, rho: 1.0 / sy });
                }
                current = next;
                iterations += 1;
                trace.push((engine.evals, -current.phi));
            }
            Ok(None) => {
                if memory.is_empty() {
                    break Termination::LineSearchFailed;
                }
                memory.clear();
            }
            Err(Stop::Budget) => break Termination::BudgetExhausted,
            Err(Stop::Failed(e)) => return Err(e),
        }
    };

    Ok(OptimizationRun {
        x0: x0.to_vec(),
        gradient_norm_final: max_abs(&current.grad),
        best_value: -current.phi,
        x_final: current.x,
        objective_trace: trace,
        converged: termination == Termination::GradientTolerance,
        seed,
        evaluations: engine.evals,
        iterations,
        termination,
    })
}

/// Maximise `f` from `x0`. Budget exhaustion is reported through
/// `converged = false`, not as an error.
pub fn lbfgs_maximize<O: Objective + ?Sized>(f: &O, x0: &[f64], cfg: &OptimizerConfig) -> Result<OptimizationRun> {
    cfg.validate()?;
    if cfg.workers <= 1 {
        lbfgs_inner(f, x0, cfg, 0, false)
    } else {
        pool(cfg.workers)?.install(|| lbfgs_inner(f, x0, cfg, 0, true))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MultistartResult {
    /// Index into `runs` of the best run (earliest on ties).
    pub best: usize,
    pub runs: Vec<OptimizationRun>,
}

impl MultistartResult {
    pub fn best_run(&self) -> &OptimizationRun {
        &self.runs[self.best]
    }

    pub fn best_value(&self) -> f64 {
        self.best_run().best_value
    }
}

/// Seed of restart `index` under master seed `seed`.
pub fn restart_seed(seed: u64, index: usize) -> u64 {
    derive_seed(seed, &[index as u64])
}

/// `restarts` independent runs, restart `i` starting from
/// `sampler(rng_from_seed(restart_seed(seed, i)))`. Runs share the worker
/// pool; results are collected in restart order.
pub fn multistart<O, S>(
    f: &O,
    sampler: S,
    restarts: usize,
    seed: u64,
    cfg: &OptimizerConfig,
) -> Result<MultistartResult>
where
    O: Objective + ?Sized,
    S: Fn(&mut Rng) -> Vec<f64> + Sync,
{
    cfg.validate()?;
    if restarts == 0 {
        return Err(Error::InvalidArgument("restarts must be at least 1".into()));
    }
    let one = |i: usize, parallel: bool| {
        let s = restart_seed(seed, i);
        let x0 = sampler(&mut rng_from_seed(s));
        lbfgs_inner(f, &x0, cfg, s, parallel)
    };
    let runs: Vec<OptimizationRun> = if cfg.workers <= 1 {
        (0..restarts).map(|i| one(i, false)).collect::<Result<_>>()?
    } else {
        pool(cfg.workers)?.install(|| (0..restarts).into_par_iter().map(|i| one(i, true)).collect::<Result<_>>())?
    };
    let mut best = 0;
    for (i, r) in runs.iter().enumerate() {
        if r.best_value > runs[best].best_value {
            best = i;
        }
    }
    Ok(MultistartResult { best, runs })
}

/// Initial QAOA point `(γ, β)` uniform on `[0, π/4]²`.
pub fn init_qaoa_informed(seed: u64) -> (f64, f64) {
    qaoa_informed_point(&mut rng_from_seed(seed))
}

pub fn qaoa_informed_point(rng: &mut Rng) -> (f64, f64) {
    let gamma = rng.random_range(0.0..PI / 4.0);
    let beta = rng.random_range(0.0..PI / 4.0);
    (gamma, beta)
}

/// Random angles for `variant`: `γ ~ U[0, 2π)`, `β, α ~ U[0, π)`.
pub fn init_random(variant: Variant, graph: &Graph, seed: u64) -> AngleAssignment {
    let x = random_params(variant, graph, &mut rng_from_seed(seed));
    AngleAssignment::from_params(graph, variant, &x).expect("shape matches the variant")
}

/// [`init_random`] in the flat [`AngleAssignment::free_params`] layout.
pub fn random_params(variant: Variant, graph: &Graph, rng: &mut Rng) -> Vec<f64> {
    let (n, m) = (graph.n(), graph.m());
    let (gammas, betas, alphas) = match variant {
        Variant::Qaoa => (1, 1, 0),
        Variant::Ma | Variant::XeqY => (m, n, 0),
        Variant::Xy => (m, n, n),
        Variant::Y => (m, 0, n),
    };
    let mut x = Vec::with_capacity(gammas + betas + alphas);
    x.extend((0..gammas).map(|_| rng.random_range(0.0..2.0 * PI)));
    x.extend((0..betas + alphas).map(|_| rng.random_range(0.0..PI)));
    x
}
