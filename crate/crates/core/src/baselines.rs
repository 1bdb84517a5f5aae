//! Classical baselines and cut extraction from converged X=Y angles.
//!
//! * Classical-Relaxed: maximise `Σ (w_uv / 2)(1 − sin θ_u sin θ_v)` and
//!   round by the sign of `sin θ_u`.
//! * Goemans-Williamson: the MaxCut vector program solved by a rank-`r`
//!   factorisation, then random-hyperplane rounding.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI};

use rand::Rng as _;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::analytic::{self, golden_max, AngleAssignment, Variant};
use crate::error::{Error, Result};
use crate::graph::{CutResult, Graph};
use crate::optimize::{multistart, GradientSource, Objective, OptimizerConfig, RelaxedObjective};
use crate::rng::{rng_from_seed, Rng};

pub const GW_DEFAULT_RESTARTS: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelaxationKind {
    Cr,
    Gw,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RelaxedSolution {
    pub kind: RelaxationKind,
    /// Per-vertex angles (CR only).
    pub theta: Vec<f64>,
    /// Per-vertex unit vectors (GW only).
    pub vectors: Vec<Vec<f64>>,
    pub objective_value: f64,
    pub converged: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GwCertificate {
    pub sdp_value: f64,
    pub expected_cut: f64,
    pub guarantee_constant: f64,
    pub worst_angle: f64,
}

/// Best rounded cut over `restarts` relaxed runs, and the run with the
/// highest relaxed objective.
pub fn classical_relaxed(
    graph: &Graph,
    restarts: usize,
    seed: u64,
    cfg: &OptimizerConfig,
) -> Result<(RelaxedSolution, CutResult)> {
    let f = RelaxedObjective(graph);
    let n = graph.n();
    let sampler = |rng: &mut Rng| (0..n).map(|_| rng.random_range(0.0..2.0 * PI)).collect();
    let ms = multistart(&f, sampler, restarts, seed, cfg)?;
    let mut best_cut: Option<CutResult> = None;
    for run in &ms.runs {
        let cut = round_relaxed(graph, &run.x_final);
        if best_cut.as_ref().is_none_or(|b| cut.cut_value > b.cut_value) {
            best_cut = Some(cut);
        }
    }
    let best = ms.best_run();
    let solution = RelaxedSolution {
        kind: RelaxationKind::Cr,
        theta: best.x_final.clone(),
        vectors: Vec::new(),
        objective_value: best.best_value,
        converged: best.converged,
    };
    Ok((solution, best_cut.expect("at least one restart")))
}

/// `z_u = [sin θ_u ≥ 0]`
pub fn round_relaxed(graph: &Graph, theta: &[f64]) -> CutResult {
    let bits = theta.iter().map(|t| u8::from(t.sin() >= 0.0)).collect();
    CutResult::new(graph, bits)
}

/// `⌈√(2n)⌉ + 1`
pub fn gw_default_rank(n: usize) -> usize {
    (2.0 * n as f64).sqrt().ceil() as usize + 1
}

/// Vector-program objective over unnormalised rows, each projected to the
/// unit sphere before use.
struct LowRank<'g> {
    graph: &'g Graph,
    rank: usize,
}

impl LowRank<'_> {
    fn normalised(&self, x: &[f64]) -> (Vec<Vec<f64>>, Vec<f64>) {
        let mut rows = Vec::with_capacity(self.graph.n());
        let mut norms = Vec::with_capacity(self.graph.n());
        for chunk in x.chunks_exact(self.rank) {
            let norm = chunk.iter().map(|v| v * v).sum::<f64>().sqrt();
            rows.push(chunk.iter().map(|v| v / norm).collect());
            norms.push(norm);
        }
        (rows, norms)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn vector_program_value(graph: &Graph, rows: &[Vec<f64>]) -> f64 {
    graph.edges().iter().map(|e| 0.5 * e.weight * (1.0 - dot(&rows[e.u], &rows[e.v]))).sum()
}

impl Objective for LowRank<'_> {
    fn dim(&self) -> usize {
        self.graph.n() * self.rank
    }

    fn value(&self, x: &[f64]) -> f64 {
        vector_program_value(self.graph, &self.normalised(x).0)
    }

    fn value_and_gradient(&self, x: &[f64]) -> Option<(f64, Vec<f64>)> {
        let r = self.rank;
        let (rows, norms) = self.normalised(x);
        let value = vector_program_value(self.graph, &rows);
        // ∂f/∂v̂_i, then through the projection v̂ = v / |v|.
        let mut unit_grad = vec![0.0; x.len()];
        for e in self.graph.edges() {
            for k in 0..r {
                unit_grad[e.u * r + k] -= 0.5 * e.weight * rows[e.v][k];
                unit_grad[e.v * r + k] -= 0.5 * e.weight * rows[e.u][k];
            }
        }
        let mut grad = vec![0.0; x.len()];
        for (i, row) in rows.iter().enumerate() {
            let gi = &unit_grad[i * r..(i + 1) * r];
            let radial = dot(gi, row);
            for k in 0..r {
                grad[i * r + k] = (gi[k] - radial * row[k]) / norms[i];
            }
        }
        Some((value, grad))
    }
}

/// Solve the vector program at rank `rank` with [`GW_DEFAULT_RESTARTS`]
/// restarts and default optimiser settings.
pub fn gw_solve(graph: &Graph, rank: usize, seed: u64) -> Result<RelaxedSolution> {
    gw_solve_with(graph, rank, GW_DEFAULT_RESTARTS, seed, &OptimizerConfig::default())
}

pub fn gw_solve_with(
    graph: &Graph,
    rank: usize,
    restarts: usize,
    seed: u64,
    cfg: &OptimizerConfig,
) -> Result<RelaxedSolution> {
    if rank < 2 {
        return Err(Error::InvalidArgument("rank must be at least 2".into()));
    }
    let f = LowRank { graph, rank };
    let sampler = |rng: &mut Rng| (0..graph.n() * rank).map(|_| rng.sample(StandardNormal)).collect();
    let cfg = OptimizerConfig { gradient: GradientSource::Exact, ..cfg.clone() };
    let ms = multistart(&f, sampler, restarts, seed, &cfg)?;
    let best = ms.best_run();
    let vectors = f.normalised(&best.x_final).0;
    Ok(RelaxedSolution {
        kind: RelaxationKind::Gw,
        theta: Vec::new(),
        objective_value: vector_program_value(graph, &vectors),
        vectors,
        converged: best.converged,
    })
}

fn require_gw(sol: &RelaxedSolution) -> Result<()> {
    if sol.kind == RelaxationKind::Gw && !sol.vectors.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidArgument("expected a Goemans-Williamson solution".into()))
    }
}

/// Random-hyperplane rounding. Returns the best cut and every trial's value.
pub fn gw_round(graph: &Graph, sol: &RelaxedSolution, trials: usize, seed: u64) -> Result<(CutResult, Vec<f64>)> {
    require_gw(sol)?;
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    if sol.vectors.len() != graph.n() {
        return Err(Error::DimensionMismatch { expected: graph.n(), actual: sol.vectors.len() });
    }
    let rank = sol.vectors[0].len();
    let mut rng = rng_from_seed(seed);
    let mut best: Option<CutResult> = None;
    let mut values = Vec::with_capacity(trials);
    for _ in 0..trials {
        let r: Vec<f64> = (0..rank).map(|_| rng.sample(StandardNormal)).collect();
        let bits = sol.vectors.iter().map(|v| u8::from(dot(&r, v) >= 0.0)).collect();
        let cut = CutResult::new(graph, bits);
        values.push(cut.cut_value);
        if best.as_ref().is_none_or(|b| cut.cut_value > b.cut_value) {
            best = Some(cut);
        }
    }
    Ok((best.expect("trials ≥ 1"), values))
}

/// `(2/π) · θ / (1 − cos θ)`
pub fn gw_ratio_curve(theta: f64) -> f64 {
    2.0 / PI * theta / (1.0 - theta.cos())
}

/// `(min_θ gw_ratio_curve(θ), argmin)` on `(0, π]`.
pub fn gw_guarantee() -> (f64, f64) {
    let theta = golden_max(|t| -gw_ratio_curve(t), 1.0, PI);
    (gw_ratio_curve(theta), theta)
}

pub fn gw_certificate(graph: &Graph, sol: &RelaxedSolution) -> Result<GwCertificate> {
    require_gw(sol)?;
    let expected_cut = graph
        .edges()
        .iter()
        .map(|e| e.weight * dot(&sol.vectors[e.u], &sol.vectors[e.v]).clamp(-1.0, 1.0).acos() / PI)
        .sum();
    let (guarantee_constant, worst_angle) = gw_guarantee();
    Ok(GwCertificate {
        sdp_value: vector_program_value(graph, &sol.vectors),
        expected_cut,
        guarantee_constant,
        worst_angle,
    })
}

/// Outcome of reading a bit string off converged X=Y angles.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Extraction {
    pub cut: CutResult,
    /// Input angles with `γ w` snapped to `{0, π, 2π}` and `β = α` snapped
    /// to `{π/4, 3π/4}`; these describe exactly the basis state `cut`.
    pub snapped: AngleAssignment,
    /// Vertices whose `β` was more than π/8 from both targets.
    pub non_transitioned: Vec<usize>,
    pub warnings: Vec<String>,
}

/// Distance of `γ w mod 2π` to `{0, π, 2π}`.
pub fn gamma_snap_distance(scaled_gamma: f64) -> f64 {
    let t = scaled_gamma.rem_euclid(2.0 * PI);
    t.min((t - PI).abs()).min(2.0 * PI - t)
}

/// Distance of `β mod π` to `{π/4, 3π/4}`.
pub fn beta_snap_distance(beta: f64) -> f64 {
    let b = beta.rem_euclid(PI);
    (b - FRAC_PI_4).abs().min((b - 3.0 * FRAC_PI_4).abs())
}

/// Per-edge and per-vertex snap distances of an X=Y assignment.
pub fn transition_distances(graph: &Graph, a: &AngleAssignment) -> (Vec<f64>, Vec<f64>) {
    let gamma =
        graph.edges().iter().enumerate().map(|(id, e)| gamma_snap_distance(a.gamma_for(id) * e.weight)).collect();
    let beta = (0..graph.n()).map(|v| beta_snap_distance(a.beta_for(v))).collect();
    (gamma, beta)
}

pub fn extract_cut_xeqy(graph: &Graph, a: &AngleAssignment) -> Result<Extraction> {
    a.require(Variant::XeqY)?;
    a.validate(graph)?;
    let n = graph.n();
    let mut parity = vec![0u8; n];
    let mut gamma = a.gamma.clone();
    for (id, e) in graph.edges().iter().enumerate() {
        let t = (a.gamma[id] * e.weight).rem_euclid(2.0 * PI);
        let snapped =
            [0.0, PI, 2.0 * PI].into_iter().min_by(|x, y| (t - x).abs().total_cmp(&(t - y).abs())).expect("non-empty");
        if snapped == PI {
            parity[e.u] ^= 1;
            parity[e.v] ^= 1;
        }
        if e.weight != 0.0 {
            gamma[id] = snapped / e.weight;
        }
    }
    let mut bits = Vec::with_capacity(n);
    let mut beta = Vec::with_capacity(n);
    let mut non_transitioned = Vec::new();
    let mut warnings = Vec::new();
    for v in 0..n {
        let b = a.beta[v].rem_euclid(PI);
        let quarter = (b - FRAC_PI_4).abs() <= (b - 3.0 * FRAC_PI_4).abs();
        if beta_snap_distance(b) > FRAC_PI_8 {
            non_transitioned.push(v);
            warnings.push(format!("vertex {v}: beta {b:.6} has not transitioned; rounded to the nearest target"));
        }
        let plus = parity[v] == 0;
        bits.push(u8::from(plus == quarter));
        beta.push(if quarter { FRAC_PI_4 } else { 3.0 * FRAC_PI_4 });
    }
    let snapped = AngleAssignment::xeqy(graph, gamma, beta)?;
    Ok(Extraction { cut: CutResult::new(graph, bits), snapped, non_transitioned, warnings })
}

/// Analytic X=Y objective at the snapped angles of an extraction.
pub fn snapped_objective(graph: &Graph, extraction: &Extraction) -> f64 {
    analytic::expectation(graph, &extraction.snapped)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;
    use crate::graph::{brute_force_maxcut, generate_regular};

    #[test]
    fn relaxed_on_small_graphs() {
        let cfg = OptimizerConfig::default();
        assert_eq!(classical_relaxed(&path(3), 5, 1, &cfg).unwrap().1.cut_value, 2.0);
        assert_eq!(classical_relaxed(&complete(3), 5, 1, &cfg).unwrap().1.cut_value, 2.0);
    }

    #[test]
    fn relaxed_solution_value_matches_objective() {
        let g = petersen();
        let (sol, _) = classical_relaxed(&g, 4, 3, &OptimizerConfig::default()).unwrap();
        assert!((sol.objective_value - analytic::relaxed_objective(&g, &sol.theta)).abs() < 1e-12);
    }

    #[test]
    fn gw_on_an_edge_and_a_triangle() {
        let k2 = gw_solve(&complete(2), 3, 0).unwrap();
        assert!((k2.objective_value - 1.0).abs() < 1e-9);
        let (best, values) = gw_round(&complete(2), &k2, 50, 1).unwrap();
        assert_eq!(best.cut_value, 1.0);
        assert!(values.iter().all(|&v| v == 1.0));

        let k3 = gw_solve(&complete(3), 3, 0).unwrap();
        assert!((k3.objective_value - 2.25).abs() < 1e-9, "{}", k3.objective_value);
        let cert = gw_certificate(&complete(3), &k3).unwrap();
        assert!((cert.expected_cut - 2.0).abs() < 1e-6, "{}", cert.expected_cut);
    }

    #[test]
    fn gw_vectors_are_unit() {
        let g = generate_regular(12, 3, 4).unwrap();
        let sol = gw_solve(&g, gw_default_rank(12), 2).unwrap();
        for v in &sol.vectors {
            assert!((dot(v, v) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn low_rank_gradient_matches_differences() {
        let g = Graph::new(4, [(0, 1, 1.0), (1, 2, 0.5), (2, 3, 2.0), (0, 2, 1.5)]).unwrap();
        let f = LowRank { graph: &g, rank: 3 };
        let mut rng = rng_from_seed(8);
        let x: Vec<f64> = (0..12).map(|_| rng.sample(StandardNormal)).collect();
        let (_, grad) = f.value_and_gradient(&x).unwrap();
        let fd = crate::optimize::cga_gradient(&f, &x, crate::optimize::GradStep::Absolute(1e-6), 1).unwrap();
        for (a, b) in grad.iter().zip(&fd) {
            assert!((a - b).abs() < 1e-7);
        }
    }

    #[test]
    fn guarantee_constant_and_angle() {
        let (c, theta) = gw_guarantee();
        assert!((c - 0.878567).abs() < 1e-6, "{c}");
        assert!((theta - 2.331122).abs() < 1e-4, "{theta}");
    }

    #[test]
    fn relaxation_sandwich_on_petersen() {
        let g = petersen();
        let sol = gw_solve(&g, gw_default_rank(10), 5).unwrap();
        let opt = brute_force_maxcut(&g).unwrap().cut_value;
        let (best, _) = gw_round(&g, &sol, 200, 5).unwrap();
        assert!(sol.objective_value >= opt - 1e-9);
        assert!(opt >= best.cut_value);
        let cert = gw_certificate(&g, &sol).unwrap();
        assert!(cert.expected_cut >= 0.87856 * cert.sdp_value - 1e-9);
    }

    #[test]
    fn extraction_examples() {
        let k2 = complete(2);
        let a = AngleAssignment::xeqy(&k2, vec![PI], vec![FRAC_PI_4, 3.0 * FRAC_PI_4]).unwrap();
        let ex = extract_cut_xeqy(&k2, &a).unwrap();
        assert_eq!(ex.cut.assignment, vec![0, 1]);
        assert_eq!(ex.cut.cut_value, 1.0);

        let p3 = path(3);
        let a = AngleAssignment::xeqy(&p3, vec![PI, PI], vec![FRAC_PI_4; 3]).unwrap();
        let ex = extract_cut_xeqy(&p3, &a).unwrap();
        assert_eq!(ex.cut.assignment, vec![0, 1, 0]);
        assert_eq!(ex.cut.cut_value, 2.0);
        assert!(ex.non_transitioned.is_empty());
    }

    #[test]
    fn extraction_flags_and_agrees_with_snapped_objective() {
        let g = Graph::new(4, [(0, 1, 1.0), (1, 2, 0.5), (2, 3, 2.0), (0, 2, 1.5), (1, 3, 0.7)]).unwrap();
        let mut rng = rng_from_seed(3);
        for _ in 0..50 {
            let gamma = (0..g.m()).map(|_| rng.random_range(-7.0..7.0)).collect();
            let beta = (0..4).map(|_| rng.random_range(-4.0..4.0)).collect();
            let a = AngleAssignment::xeqy(&g, gamma, beta).unwrap();
            let ex = extract_cut_xeqy(&g, &a).unwrap();
            assert!((snapped_objective(&g, &ex) - ex.cut.cut_value).abs() < 1e-9);
            assert_eq!(ex.non_transitioned.len(), ex.warnings.len());
        }
        let a = AngleAssignment::xeqy(&g, vec![0.0; 5], vec![0.0, FRAC_PI_4, 0.5, 2.4]).unwrap();
        assert_eq!(extract_cut_xeqy(&g, &a).unwrap().non_transitioned, vec![0]);
    }

    #[test]
    fn snap_distances() {
        assert!((gamma_snap_distance(2.0 * PI - 0.01) - 0.01).abs() < 1e-12);
        assert!((gamma_snap_distance(PI + 0.1) - 0.1).abs() < 1e-12);
        assert!(beta_snap_distance(FRAC_PI_4 + PI).abs() < 1e-12);
        assert!((beta_snap_distance(0.0) - FRAC_PI_4).abs() < 1e-12);
    }
}
