use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Ansatz family. The mixer of every variant is `Π_j e^{-iα_j Y_j} e^{-iβ_j X_j}`
/// with the restrictions below.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variant {
    /// One shared `γ` and one shared `β` per layer, `α = 0`.
    #[serde(rename = "qaoa")]
    Qaoa,
    /// Per-edge `γ`, per-vertex `β`, `α = 0`.
    #[serde(rename = "ma")]
    Ma,
    /// Per-edge `γ`, independent per-vertex `β` and `α`.
    #[serde(rename = "xy")]
    Xy,
    /// Per-edge `γ`, per-vertex `β` with `α = β`.
    #[serde(rename = "xeqy")]
    XeqY,
    /// Per-edge `γ`, per-vertex `α`, `β = 0`.
    #[serde(rename = "y")]
    Y,
}

impl Variant {
    pub const ALL: [Variant; 5] = [Variant::Qaoa, Variant::Ma, Variant::Xy, Variant::XeqY, Variant::Y];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Qaoa => "qaoa",
            Variant::Ma => "ma",
            Variant::Xy => "xy",
            Variant::XeqY => "xeqy",
            Variant::Y => "y",
        }
    }

    /// Free parameters per layer on a graph with `n` vertices and `m` edges.
    pub fn param_count(self, n: usize, m: usize) -> usize {
        match self {
            Variant::Qaoa => 2,
            Variant::Ma | Variant::XeqY | Variant::Y => n + m,
            Variant::Xy => 2 * n + m,
        }
    }

    /// Which rotations the mixer applies: `(X, Y)`.
    pub fn mixer_axes(self) -> (bool, bool) {
        (self != Variant::Y, matches!(self, Variant::Xy | Variant::XeqY | Variant::Y))
    }

    fn has_free_beta(self) -> bool {
        !matches!(self, Variant::Y)
    }

    fn has_free_alpha(self) -> bool {
        matches!(self, Variant::Xy | Variant::Y)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "qaoa" => Ok(Variant::Qaoa),
            "ma" | "ma-qaoa" => Ok(Variant::Ma),
            "xy" => Ok(Variant::Xy),
            "xeqy" | "x=y" => Ok(Variant::XeqY),
            "y" => Ok(Variant::Y),
            other => Err(Error::InvalidArgument(format!("unknown variant {other:?}"))),
        }
    }
}

/// Angles of one ansatz layer.
///
/// `gamma` has one entry per edge (a single shared entry for QAOA), `beta`
/// one per vertex (single shared entry for QAOA, all zero for Y) and `alpha`
/// one per vertex (all zero for QAOA and MA, a copy of `beta` for X=Y).
/// Angles are stored unwrapped; see [`AngleAssignment::canonicalized`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngleAssignment {
    pub variant: Variant,
    pub gamma: Vec<f64>,
    pub beta: Vec<f64>,
    pub alpha: Vec<f64>,
}

impl AngleAssignment {
    pub fn qaoa(graph: &Graph, gamma: f64, beta: f64) -> Self {
        AngleAssignment { variant: Variant::Qaoa, gamma: vec![gamma], beta: vec![beta], alpha: vec![0.0; graph.n()] }
    }

    pub fn ma(graph: &Graph, gamma: Vec<f64>, beta: Vec<f64>) -> Result<Self> {
        let alpha = vec![0.0; graph.n()];
        Self::checked(graph, Variant::Ma, gamma, beta, alpha)
    }

    pub fn xy(graph: &Graph, gamma: Vec<f64>, beta: Vec<f64>, alpha: Vec<f64>) -> Result<Self> {
        Self::checked(graph, Variant::Xy, gamma, beta, alpha)
    }

    pub fn xeqy(graph: &Graph, gamma: Vec<f64>, beta: Vec<f64>) -> Result<Self> {
        let alpha = beta.clone();
        Self::checked(graph, Variant::XeqY, gamma, beta, alpha)
    }

    pub fn y(graph: &Graph, gamma: Vec<f64>, alpha: Vec<f64>) -> Result<Self> {
        let beta = vec![0.0; graph.n()];
        Self::checked(graph, Variant::Y, gamma, beta, alpha)
    }

    /// Uniform angles expressed in any variant: every `γ_uv = gamma`,
    /// `β_u = beta`, `α_u = alpha` (ignored where the variant pins it).
    pub fn uniform(graph: &Graph, variant: Variant, gamma: f64, beta: f64, alpha: f64) -> Self {
        let (n, m) = (graph.n(), graph.m());
        match variant {
            Variant::Qaoa => Self::qaoa(graph, gamma, beta),
            Variant::Ma => Self::ma(graph, vec![gamma; m], vec![beta; n]).unwrap(),
            Variant::Xy => Self::xy(graph, vec![gamma; m], vec![beta; n], vec![alpha; n]).unwrap(),
            Variant::XeqY => Self::xeqy(graph, vec![gamma; m], vec![beta; n]).unwrap(),
            Variant::Y => Self::y(graph, vec![gamma; m], vec![alpha; n]).unwrap(),
        }
    }

    fn checked(graph: &Graph, variant: Variant, gamma: Vec<f64>, beta: Vec<f64>, alpha: Vec<f64>) -> Result<Self> {
        let a = AngleAssignment { variant, gamma, beta, alpha };
        a.validate(graph)?;
        Ok(a)
    }

    /// Check lengths and the variant's angle constraints.
    pub fn validate(&self, graph: &Graph) -> Result<()> {
        let (n, m) = (graph.n(), graph.m());
        let (g_len, b_len) = match self.variant {
            Variant::Qaoa => (1, 1),
            _ => (m, n),
        };
        for (actual, expected) in [(self.gamma.len(), g_len), (self.beta.len(), b_len), (self.alpha.len(), n)] {
            if actual != expected {
                return Err(Error::DimensionMismatch { expected, actual });
            }
        }
        let all_zero = |v: &[f64]| v.iter().all(|&x| x == 0.0);
        let ok = match self.variant {
            Variant::Qaoa | Variant::Ma => all_zero(&self.alpha),
            Variant::Y => all_zero(&self.beta),
            Variant::XeqY => self.alpha == self.beta,
            Variant::Xy => true,
        };
        if !ok {
            return Err(Error::InvalidArgument(format!("angles violate the {} mixer constraint", self.variant)));
        }
        Ok(())
    }

    pub fn require(&self, variant: Variant) -> Result<()> {
        if self.variant == variant {
            Ok(())
        } else {
            Err(Error::VariantMismatch { expected: variant.name().into(), actual: self.variant.name().into() })
        }
    }

    #[inline]
    pub fn gamma_for(&self, edge: usize) -> f64 {
        if self.variant == Variant::Qaoa {
            self.gamma[0]
        } else {
            self.gamma[edge]
        }
    }

    #[inline]
    pub fn beta_for(&self, vertex: usize) -> f64 {
        if self.variant == Variant::Qaoa {
            self.beta[0]
        } else {
            self.beta[vertex]
        }
    }

    #[inline]
    pub fn alpha_for(&self, vertex: usize) -> f64 {
        self.alpha[vertex]
    }

    /// Number of free parameters (Table-I style count for one layer).
    pub fn param_count(&self) -> usize {
        self.free_params().len()
    }

    /// Free parameters in the layout `[γ..., β..., α...]`, omitting pinned blocks.
    pub fn free_params(&self) -> Vec<f64> {
        let mut out = self.gamma.clone();
        if self.variant.has_free_beta() {
            out.extend_from_slice(&self.beta);
        }
        if self.variant.has_free_alpha() {
            out.extend_from_slice(&self.alpha);
        }
        out
    }

    /// Inverse of [`free_params`](Self::free_params).
    pub fn from_params(graph: &Graph, variant: Variant, params: &[f64]) -> Result<Self> {
        let (n, m) = (graph.n(), graph.m());
        let expected = variant.param_count(n, m);
        if params.len() != expected {
            return Err(Error::DimensionMismatch { expected, actual: params.len() });
        }
        Ok(match variant {
            Variant::Qaoa => Self::qaoa(graph, params[0], params[1]),
            Variant::Ma => Self::ma(graph, params[..m].to_vec(), params[m..].to_vec())?,
            Variant::Xy => Self::xy(graph, params[..m].to_vec(), params[m..m + n].to_vec(), params[m + n..].to_vec())?,
            Variant::XeqY => Self::xeqy(graph, params[..m].to_vec(), params[m..].to_vec())?,
            Variant::Y => Self::y(graph, params[..m].to_vec(), params[m..].to_vec())?,
        })
    }

    /// Re-express these angles in a more general variant (e.g. QAOA as MA,
    /// MA or X=Y as XY). The state they describe is unchanged.
    pub fn embed(&self, graph: &Graph, target: Variant) -> Result<Self> {
        let (n, m) = (graph.n(), graph.m());
        let gamma: Vec<f64> = (0..m).map(|e| self.gamma_for(e)).collect();
        let beta: Vec<f64> = (0..n).map(|v| self.beta_for(v)).collect();
        let alpha = self.alpha.clone();
        let candidate = AngleAssignment { variant: target, gamma, beta, alpha };
        if target == Variant::Qaoa {
            if self.variant != Variant::Qaoa {
                return Err(Error::VariantMismatch { expected: "qaoa".into(), actual: self.variant.name().into() });
            }
            return Ok(self.clone());
        }
        candidate.validate(graph)?;
        Ok(candidate)
    }

    /// `β` and `α` reduced into `[0, π)`. `γ` is left alone because its
    /// period depends on the edge weight.
    pub fn canonicalized(&self) -> Self {
        let wrap = |x: f64| x.rem_euclid(PI);
        AngleAssignment {
            variant: self.variant,
            gamma: self.gamma.clone(),
            beta: self.beta.iter().copied().map(wrap).collect(),
            alpha: self.alpha.iter().copied().map(wrap).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn graph_5_6() -> Graph {
        Graph::unweighted(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)]).unwrap()
    }

    #[test]
    fn parameter_counts_follow_the_ansatz_table() {
        let g = graph_5_6();
        let (n, m) = (5, 6);
        assert_eq!(Variant::Qaoa.param_count(n, m), 2);
        assert_eq!(Variant::Ma.param_count(n, m), 11);
        assert_eq!(Variant::Xy.param_count(n, m), 16);
        assert_eq!(Variant::XeqY.param_count(n, m), 11);
        assert_eq!(Variant::Y.param_count(n, m), 11);
        for variant in Variant::ALL {
            let a = AngleAssignment::uniform(&g, variant, 0.1, 0.2, 0.3);
            assert_eq!(a.param_count(), variant.param_count(n, m));
        }
    }

    #[test]
    fn params_round_trip() {
        let g = graph_5_6();
        for variant in Variant::ALL {
            let params: Vec<f64> = (0..variant.param_count(5, 6)).map(|i| i as f64 * 0.1).collect();
            let a = AngleAssignment::from_params(&g, variant, &params).unwrap();
            assert_eq!(a.free_params(), params);
            a.validate(&g).unwrap();
        }
        assert!(AngleAssignment::from_params(&g, Variant::Ma, &[0.0; 3]).is_err());
    }

    #[test]
    fn constraints_enforced() {
        let g = graph_5_6();
        let mut a = AngleAssignment::uniform(&g, Variant::XeqY, 0.1, 0.2, 0.0);
        assert_eq!(a.alpha, a.beta);
        a.alpha[0] = 1.0;
        assert!(a.validate(&g).is_err());
        let mut y = AngleAssignment::uniform(&g, Variant::Y, 0.1, 0.0, 0.3);
        y.beta[2] = 0.5;
        assert!(y.validate(&g).is_err());
        assert!(AngleAssignment::ma(&g, vec![0.0; 5], vec![0.0; 5]).is_err());
    }

    #[test]
    fn embedding_and_canonical_form() {
        let g = graph_5_6();
        let q = AngleAssignment::qaoa(&g, 0.4, 3.5);
        let ma = q.embed(&g, Variant::Ma).unwrap();
        assert_eq!(ma.gamma, vec![0.4; 6]);
        assert!(q.embed(&g, Variant::Y).is_err());
        let c = ma.canonicalized();
        assert!((c.beta[0] - (3.5 - PI)).abs() < 1e-15);
        assert_eq!("x=y".parse::<Variant>().unwrap(), Variant::XeqY);
    }
}
