//! Closed-form p=1 expectation values `⟨C⟩ = Σ_{uv} ⟨C_uv⟩`.
//!
//! Each edge term depends only on the edge's neighbourhood sets `e`, `d`
//! and `F`, through products of `cos γ'` over those sets, where
//! `γ'_ij = γ_ij · w_ij`. The triangle products `Π_F cos(γ'_uf ± γ'_vf)` are
//! accumulated directly, one factor per common neighbour.
//!
//! All evaluators are pure functions of the graph and the angles.

mod angles;
mod identities;
mod star;

use crate::error::Result;
use crate::graph::{EdgeNeighborhood, Graph};

pub use angles::{AngleAssignment, Variant};
pub use identities::{trig_identity_check, TrigResiduals, TRIG_IDENTITY_MAX_F};
pub(crate) use star::golden_max;
pub use star::{star_g, star_qaoa1_optimum, StarGraphSpec, StarOptimum};

/// `cos γ'_e` and `sin γ'_e` for every edge.
pub(crate) struct EdgeTrig {
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
}

impl EdgeTrig {
    pub fn new(graph: &Graph, gamma_of: impl Fn(usize) -> f64) -> Self {
        let m = graph.m();
        let mut cos = Vec::with_capacity(m);
        let mut sin = Vec::with_capacity(m);
        for (id, e) in graph.edges().iter().enumerate() {
            let (s, c) = (gamma_of(id) * e.weight).sin_cos();
            cos.push(c);
            sin.push(s);
        }
        EdgeTrig { cos, sin }
    }
}

/// Cosine products over the neighbourhood of one edge.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Products {
    /// `Π_{w∈e} cos γ'_wv`
    pub full_e: f64,
    /// `Π_{w∈d} cos γ'_uw`
    pub full_d: f64,
    /// `Π_{w∈e\F} cos γ'_wv · Π_{w∈d\F} cos γ'_uw`
    pub outer: f64,
    /// `Π_{f∈F} cos(γ'_uf + γ'_vf)`
    pub tri_plus: f64,
    /// `Π_{f∈F} cos(γ'_uf − γ'_vf)`
    pub tri_minus: f64,
}

impl Products {
    #[inline]
    pub fn new(nb: &EdgeNeighborhood, trig: &EdgeTrig) -> Self {
        let c = &trig.cos;
        let s = &trig.sin;
        let e_only: f64 = nb.e_only.iter().map(|&id| c[id]).product();
        let d_only: f64 = nb.d_only.iter().map(|&id| c[id]).product();
        let (mut full_e, mut full_d) = (e_only, d_only);
        let (mut tri_plus, mut tri_minus) = (1.0, 1.0);
        for &(uf, vf) in &nb.triangles {
            full_e *= c[vf];
            full_d *= c[uf];
            let cc = c[uf] * c[vf];
            let ss = s[uf] * s[vf];
            tri_plus *= cc - ss;
            tri_minus *= cc + ss;
        }
        Products { full_e, full_d, outer: e_only * d_only, tri_plus, tri_minus }
    }
}

/// `(cos 2x, sin 2x)` per vertex.
fn doubled(graph: &Graph, angle_of: impl Fn(usize) -> f64) -> Vec<(f64, f64)> {
    (0..graph.n())
        .map(|v| {
            let (s, c) = (2.0 * angle_of(v)).sin_cos();
            (c, s)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// QAOA
// ---------------------------------------------------------------------------

#[inline]
fn qaoa1_term(weight: f64, p: &Products, sin_g: f64, s4b: f64, s2b_sq: f64) -> f64 {
    weight / 2.0 + weight / 4.0 * (s4b * sin_g * (p.full_e + p.full_d) + s2b_sq * p.outer * (p.tri_plus - p.tri_minus))
}

/// QAOA_1 expectation on a weighted graph with `γ'_ij = γ w_ij`.
pub fn qaoa1_expectation(graph: &Graph, gamma: f64, beta: f64) -> f64 {
    let trig = EdgeTrig::new(graph, |_| gamma);
    let s4b = (4.0 * beta).sin();
    let s2b_sq = (2.0 * beta).sin().powi(2);
    graph
        .edges()
        .iter()
        .zip(graph.neighborhoods())
        .enumerate()
        .map(|(id, (e, nb))| qaoa1_term(e.weight, &Products::new(nb, &trig), trig.sin[id], s4b, s2b_sq))
        .sum()
}

/// Single-edge QAOA_1 term `⟨C_uv⟩`.
pub fn qaoa1_edge(graph: &Graph, edge: (usize, usize), gamma: f64, beta: f64) -> Result<f64> {
    let nb = graph.neighborhood(edge.0, edge.1)?;
    let id = graph.edge_id(edge.0, edge.1).expect("edge exists");
    let trig = EdgeTrig::new(graph, |_| gamma);
    let s4b = (4.0 * beta).sin();
    let s2b_sq = (2.0 * beta).sin().powi(2);
    Ok(qaoa1_term(graph.edges()[id].weight, &Products::new(nb, &trig), trig.sin[id], s4b, s2b_sq))
}

/// Unweighted QAOA_1 edge term from the neighbourhood sizes `(|e|, |d|, |F|)`.
pub fn qaoa1_unweighted_edge(sizes: (usize, usize, usize), gamma: f64, beta: f64) -> f64 {
    let (e, d, f) = sizes;
    debug_assert!(f <= e.min(d));
    let c = gamma.cos();
    0.5 + 0.25
        * ((4.0 * beta).sin() * gamma.sin() * (c.powi(e as i32) + c.powi(d as i32))
            + (2.0 * beta).sin().powi(2) * c.powi((e + d - 2 * f) as i32) * ((2.0 * gamma).cos().powi(f as i32) - 1.0))
}

// ---------------------------------------------------------------------------
// MA-QAOA
// ---------------------------------------------------------------------------

pub fn maqaoa1_expectation(graph: &Graph, angles: &AngleAssignment) -> Result<f64> {
    angles.require(Variant::Ma)?;
    Ok(maqaoa1_unchecked(graph, angles))
}

fn maqaoa1_unchecked(graph: &Graph, angles: &AngleAssignment) -> f64 {
    let trig = EdgeTrig::new(graph, |id| angles.gamma_for(id));
    let b2 = doubled(graph, |v| angles.beta_for(v));
    graph
        .edges()
        .iter()
        .zip(graph.neighborhoods())
        .enumerate()
        .map(|(id, (e, nb))| {
            let p = Products::new(nb, &trig);
            let (c2bu, s2bu) = b2[e.u];
            let (c2bv, s2bv) = b2[e.v];
            let sin_g = trig.sin[id];
            e.weight / 2.0
                + e.weight / 2.0
                    * (c2bu * s2bv * sin_g * p.full_e
                        + s2bu * c2bv * sin_g * p.full_d
                        + 0.5 * s2bu * s2bv * p.outer * (p.tri_plus - p.tri_minus))
        })
        .sum()
}

// ---------------------------------------------------------------------------
// XQAOA
// ---------------------------------------------------------------------------

/// Per-edge XY-mixer term given `(cos 2α, sin 2α)` and `(cos 2β, sin 2β)` of
/// both endpoints.
#[inline]
fn xy_term(
    weight: f64,
    p: &Products,
    sin_g: f64,
    (c2au, s2au): (f64, f64),
    (c2av, s2av): (f64, f64),
    (c2bu, s2bu): (f64, f64),
    (c2bv, s2bv): (f64, f64),
) -> f64 {
    let linear = c2au * c2av * sin_g * (c2bu * s2bv * p.full_e + s2bu * c2bv * p.full_d);
    let xx = -0.5 * s2au * s2av * p.outer * (p.tri_plus + p.tri_minus);
    let yy = 0.5 * c2au * s2bu * c2av * s2bv * p.outer * (p.tri_plus - p.tri_minus);
    weight / 2.0 + weight / 2.0 * (linear + xx + yy)
}

fn xy_unchecked(graph: &Graph, angles: &AngleAssignment) -> f64 {
    let trig = EdgeTrig::new(graph, |id| angles.gamma_for(id));
    let a2 = doubled(graph, |v| angles.alpha_for(v));
    let b2 = doubled(graph, |v| angles.beta_for(v));
    graph
        .edges()
        .iter()
        .zip(graph.neighborhoods())
        .enumerate()
        .map(|(id, (e, nb))| {
            let p = Products::new(nb, &trig);
            xy_term(e.weight, &p, trig.sin[id], a2[e.u], a2[e.v], b2[e.u], b2[e.v])
        })
        .sum()
}

/// XQAOA_1 with the XY mixer (independent `α_u`, `β_u`).
pub fn xqaoa1_xy_expectation(graph: &Graph, angles: &AngleAssignment) -> Result<f64> {
    angles.require(Variant::Xy)?;
    Ok(xy_unchecked(graph, angles))
}

/// XQAOA_1 with the X=Y mixer: the XY formula at `α_u = β_u`.
pub fn xqaoa1_xeqy_expectation(graph: &Graph, angles: &AngleAssignment) -> Result<f64> {
    angles.require(Variant::XeqY)?;
    Ok(xy_unchecked(graph, angles))
}

/// XQAOA_1 with the Y mixer (`β = 0`).
pub fn xqaoa1_y_expectation(graph: &Graph, angles: &AngleAssignment) -> Result<f64> {
    angles.require(Variant::Y)?;
    let trig = EdgeTrig::new(graph, |id| angles.gamma_for(id));
    let s2a: Vec<f64> = (0..graph.n()).map(|v| (2.0 * angles.alpha_for(v)).sin()).collect();
    Ok(graph
        .edges()
        .iter()
        .zip(graph.neighborhoods())
        .map(|(e, nb)| {
            let p = Products::new(nb, &trig);
            e.weight / 2.0 - e.weight / 4.0 * s2a[e.u] * s2a[e.v] * p.outer * (p.tri_plus + p.tri_minus)
        })
        .sum())
}

/// Dispatch on `angles.variant`.
pub fn expectation(graph: &Graph, angles: &AngleAssignment) -> f64 {
    match angles.variant {
        Variant::Qaoa => qaoa1_expectation(graph, angles.gamma[0], angles.beta[0]),
        Variant::Ma => maqaoa1_unchecked(graph, angles),
        Variant::Xy | Variant::XeqY => xy_unchecked(graph, angles),
        Variant::Y => xqaoa1_y_expectation(graph, angles).expect("variant checked"),
    }
}

/// Expectation from a flat parameter vector in the [`AngleAssignment::free_params`] layout.
pub fn expectation_from_params(graph: &Graph, variant: Variant, params: &[f64]) -> Result<f64> {
    if variant == Variant::Qaoa {
        if params.len() != 2 {
            return Err(crate::Error::DimensionMismatch { expected: 2, actual: params.len() });
        }
        return Ok(qaoa1_expectation(graph, params[0], params[1]));
    }
    AngleAssignment::from_params(graph, variant, params).map(|a| expectation(graph, &a))
}

/// Classical-Relaxed objective `Σ (w_uv / 2)(1 − sin θ_u sin θ_v)`.
pub fn relaxed_objective(graph: &Graph, theta: &[f64]) -> f64 {
    let s: Vec<f64> = theta.iter().map(|t| t.sin()).collect();
    graph.edges().iter().map(|e| 0.5 * e.weight * (1.0 - s[e.u] * s[e.v])).sum()
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::graph::named::*;
    use crate::graph::Graph;

    const TOL: f64 = 1e-12;

    fn sample_graph() -> Graph {
        Graph::new(
            6,
            [(0, 1, 1.0), (1, 2, 0.5), (0, 2, 1.5), (2, 3, 2.0), (3, 4, 1.0), (4, 5, 0.3), (5, 0, 1.2), (1, 4, 0.7)],
        )
        .unwrap()
    }

    #[test]
    fn zero_angles_give_half_the_weight() {
        let k3 = complete(3);
        assert!((qaoa1_expectation(&k3, 0.0, 0.7) - 1.5).abs() < TOL);
        assert!((qaoa1_expectation(&k3, 0.9, 0.0) - 1.5).abs() < TOL);
        let g = sample_graph();
        let half = g.total_weight() / 2.0;
        assert!((qaoa1_expectation(&g, 0.0, 0.3) - half).abs() < TOL);
    }

    #[test]
    fn single_edge_optimum() {
        let k2 = complete(2);
        assert!((qaoa1_expectation(&k2, PI / 2.0, PI / 8.0) - 1.0).abs() < TOL);
        assert!((qaoa1_unweighted_edge((0, 0, 0), PI / 2.0, PI / 8.0) - 1.0).abs() < TOL);
        assert!((qaoa1_edge(&k2, (1, 0), PI / 2.0, PI / 8.0).unwrap() - 1.0).abs() < TOL);
        let ma = AngleAssignment::ma(&k2, vec![PI / 2.0], vec![0.0, PI / 4.0]).unwrap();
        assert!((maqaoa1_expectation(&k2, &ma).unwrap() - 1.0).abs() < TOL);
    }

    #[test]
    fn star_edge_at_its_optimum() {
        // S4 edge: |e| = 0, |d| = 3, best angles γ = π/2, β = π/8.
        let v = qaoa1_unweighted_edge((0, 3, 0), PI / 2.0, PI / 8.0);
        assert!((v - 0.75).abs() < TOL);
        let s4 = star(4);
        assert!((qaoa1_expectation(&s4, PI / 2.0, PI / 8.0) - 3.0).abs() < TOL);
    }

    #[test]
    fn unweighted_form_agrees_with_weighted_form() {
        for g in [complete(3), complete(4), petersen(), star(5), cycle(6)] {
            for &(gamma, beta) in &[(0.3, 0.2), (1.7, -0.4), (2.9, 1.1)] {
                for nb in g.neighborhoods() {
                    let a = qaoa1_unweighted_edge(nb.sizes(), gamma, beta);
                    let b = qaoa1_edge(&g, (nb.u, nb.v), gamma, beta).unwrap();
                    assert!((a - b).abs() < TOL, "{a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn variant_mismatch_is_reported() {
        let g = sample_graph();
        let a = AngleAssignment::uniform(&g, Variant::Xy, 0.1, 0.2, 0.3);
        assert!(maqaoa1_expectation(&g, &a).is_err());
        assert!(xqaoa1_y_expectation(&g, &a).is_err());
        assert!(xqaoa1_xeqy_expectation(&g, &a).is_err());
        assert!(xqaoa1_xy_expectation(&g, &a).is_ok());
    }

    #[test]
    fn xy_with_zero_gamma_keeps_only_the_xx_term() {
        let g = sample_graph();
        let beta: Vec<f64> = (0..6).map(|i| 0.3 * i as f64).collect();
        let alpha: Vec<f64> = (0..6).map(|i| 0.7 - 0.2 * i as f64).collect();
        let a = AngleAssignment::xy(&g, vec![0.0; g.m()], beta, alpha.clone()).unwrap();
        let expected: f64 = g
            .edges()
            .iter()
            .map(|e| e.weight / 2.0 - e.weight / 2.0 * (2.0 * alpha[e.u]).sin() * (2.0 * alpha[e.v]).sin())
            .sum();
        assert!((xqaoa1_xy_expectation(&g, &a).unwrap() - expected).abs() < TOL);
    }

    #[test]
    fn y_mixer_exact_on_odd_edge_degree_graphs() {
        for g in [path(3), star(4), star(2), star(6)] {
            assert!(g.has_odd_edge_degrees() && g.is_triangle_free());
            let a = AngleAssignment::uniform(&g, Variant::Y, PI, 0.0, PI / 4.0);
            let v = xqaoa1_y_expectation(&g, &a).unwrap();
            assert!((v - g.m() as f64).abs() < TOL, "{v}");
        }
        let g = star(4);
        let a = AngleAssignment::uniform(&g, Variant::Y, 1.3, 0.0, 0.0);
        assert!((xqaoa1_y_expectation(&g, &a).unwrap() - 2.0).abs() < TOL);
    }

    #[test]
    fn gamma_zero_xeqy_is_the_relaxed_objective_at_doubled_angles() {
        let g = sample_graph();
        let beta: Vec<f64> = (0..6).map(|i| 0.41 * i as f64 - 0.9).collect();
        let a = AngleAssignment::xeqy(&g, vec![0.0; g.m()], beta.clone()).unwrap();
        let theta: Vec<f64> = beta.iter().map(|b| 2.0 * b).collect();
        assert!((expectation(&g, &a) - relaxed_objective(&g, &theta)).abs() < TOL);
    }

    #[test]
    fn params_dispatch_matches_direct_call() {
        let g = sample_graph();
        let v = expectation_from_params(&g, Variant::Qaoa, &[0.4, 0.3]).unwrap();
        assert_eq!(v, qaoa1_expectation(&g, 0.4, 0.3));
        assert!(expectation_from_params(&g, Variant::Qaoa, &[0.4]).is_err());
    }
}
