use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Star graph `S_k`: one centre and `k` leaves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarGraphSpec {
    pub k: usize,
}

impl StarGraphSpec {
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("a star needs at least one leaf".into()));
        }
        Ok(StarGraphSpec { k })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StarOptimum {
    /// Best expected approximation ratio of QAOA_1 on `S_k`.
    pub ratio: f64,
    pub gamma: f64,
    pub beta: f64,
}

/// `g_k(γ) = sin γ (1 + cos^{k-1} γ)`.
pub fn star_g(k: usize, gamma: f64) -> f64 {
    gamma.sin() * (1.0 + gamma.cos().powi(k as i32 - 1))
}

const GRID_POINTS: usize = 100_000;

/// Optimal QAOA_1 ratio on `S_k`.
///
/// Every edge of a star has `|e| = |F| = 0`, `|d| = k - 1`, so the ratio is
/// `1/2 + (1/4) sin 4β · g_k(γ)`. The β factor peaks at `β = π/8`; `g_k` is
/// maximised on a uniform grid over `[0, 2π)` followed by golden-section
/// refinement around the best grid point.
pub fn star_qaoa1_optimum(spec: StarGraphSpec) -> StarOptimum {
    let k = spec.k;
    let step = 2.0 * PI / GRID_POINTS as f64;
    let (best_i, _) = (0..GRID_POINTS)
        .map(|i| (i, star_g(k, i as f64 * step)))
        .fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
    let centre = best_i as f64 * step;
    let gamma = golden_max(|x| star_g(k, x), centre - step, centre + step);
    let g_max = star_g(k, gamma).max(star_g(k, centre));
    StarOptimum { ratio: 0.5 + 0.25 * g_max, gamma: gamma.rem_euclid(2.0 * PI), beta: PI / 8.0 }
}

/// Golden-section search for a maximum of a unimodal function on `[lo, hi]`.
pub(crate) fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - inv_phi * (hi - lo);
    let mut b = lo + inv_phi * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    for _ in 0..200 {
        if hi - lo < 1e-15 {
            break;
        }
        if fa < fb {
            lo = a;
            a = b;
            fa = fb;
            b = lo + inv_phi * (hi - lo);
            fb = f(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - inv_phi * (hi - lo);
            fa = f(a);
        }
    }
    0.5 * (lo + hi)
}
