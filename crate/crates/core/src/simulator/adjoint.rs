use num_complex::Complex64;

use super::{cut_table, phase_table, Statevector};
use crate::analytic::{AngleAssignment, Variant};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Depth-`p` ansatz as a function of its flattened free parameters, with an
/// exact reverse-mode gradient.
///
/// The parameter vector is the concatenation of each layer's
/// [`AngleAssignment::free_params`].
pub struct SimulatedAnsatz<'g> {
    graph: &'g Graph,
    variant: Variant,
    depth: usize,
    cuts: Vec<f64>,
}

impl<'g> SimulatedAnsatz<'g> {
    pub fn new(graph: &'g Graph, variant: Variant, depth: usize) -> Result<Self> {
        if depth == 0 {
            return Err(Error::InvalidArgument("depth must be at least 1".into()));
        }
        if graph.n() > super::QUBIT_CAP {
            return Err(Error::QubitCap { n: graph.n(), cap: super::QUBIT_CAP });
        }
        Ok(SimulatedAnsatz { graph, variant, depth, cuts: cut_table(graph) })
    }

    pub fn graph(&self) -> &Graph {
        self.graph
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn layer_params(&self) -> usize {
        self.variant.param_count(self.graph.n(), self.graph.m())
    }

    pub fn num_params(&self) -> usize {
        self.depth * self.layer_params()
    }

    pub fn layers(&self, params: &[f64]) -> Result<Vec<AngleAssignment>> {
        if params.len() != self.num_params() {
            return Err(Error::DimensionMismatch { expected: self.num_params(), actual: params.len() });
        }
        params
            .chunks_exact(self.layer_params())
            .map(|chunk| AngleAssignment::from_params(self.graph, self.variant, chunk))
            .collect()
    }

    fn forward(&self, layers: &[AngleAssignment]) -> Result<Statevector> {
        super::build_state(self.graph, layers, self.variant)
    }

    fn energy(&self, psi: &Statevector) -> f64 {
        psi.amplitudes.iter().zip(&self.cuts).map(|(a, c)| a.norm_sqr() * c).sum()
    }

    pub fn value(&self, params: &[f64]) -> Result<f64> {
        let layers = self.layers(params)?;
        Ok(self.energy(&self.forward(&layers)?))
    }

    /// `⟨C⟩` and its gradient with respect to every free parameter.
    pub fn value_and_gradient(&self, params: &[f64]) -> Result<(f64, Vec<f64>)> {
        let layers = self.layers(params)?;
        let mut psi = self.forward(&layers)?;
        let value = self.energy(&psi);
        let mut lam: Vec<Complex64> = psi.amplitudes.iter().zip(&self.cuts).map(|(a, c)| a * c).collect();
        let psi = &mut psi.amplitudes;

        let (n, m) = (self.graph.n(), self.graph.m());
        let lp = self.layer_params();
        let mut grad = vec![0.0; params.len()];
        let mut q = vec![0.0; psi.len()];

        for (l, layer) in layers.iter().enumerate().rev() {
            let mut d_beta = vec![0.0; n];
            let mut d_alpha = vec![0.0; n];
            let (has_x, has_y) = self.variant.mixer_axes();
            for v in 0..n {
                if has_y {
                    d_alpha[v] = undo_ry(psi, &mut lam, v, layer.alpha_for(v));
                }
                if has_x {
                    d_beta[v] = undo_rx(psi, &mut lam, v, layer.beta_for(v));
                }
            }

            // Σ_{z: e cut} q_z = (q̂(0) − q̂(u ⊕ v)) / 2 with q̂ the Walsh-Hadamard transform.
            for ((qz, a), b) in q.iter_mut().zip(psi.iter()).zip(&lam) {
                *qz = b.re * a.im - b.im * a.re;
            }
            walsh_hadamard(&mut q);
            let d_gamma: Vec<f64> =
                self.graph.edges().iter().map(|e| e.weight * (q[0] - q[(1 << e.u) | (1 << e.v)])).collect();
            let phases = phase_table(self.graph, |id| layer.gamma_for(id));
            for ((a, b), p) in psi.iter_mut().zip(lam.iter_mut()).zip(&phases) {
                let pc = p.conj();
                *a *= pc;
                *b *= pc;
            }

            let g = &mut grad[l * lp..(l + 1) * lp];
            match self.variant {
                Variant::Qaoa => {
                    g[0] = d_gamma.iter().sum();
                    g[1] = d_beta.iter().sum();
                }
                Variant::Ma => {
                    g[..m].copy_from_slice(&d_gamma);
                    g[m..].copy_from_slice(&d_beta);
                }
                Variant::Xy => {
                    g[..m].copy_from_slice(&d_gamma);
                    g[m..m + n].copy_from_slice(&d_beta);
                    g[m + n..].copy_from_slice(&d_alpha);
                }
                Variant::XeqY => {
                    g[..m].copy_from_slice(&d_gamma);
                    for v in 0..n {
                        g[m + v] = d_beta[v] + d_alpha[v];
                    }
                }
                Variant::Y => {
                    g[..m].copy_from_slice(&d_gamma);
                    g[m..].copy_from_slice(&d_alpha);
                }
            }
        }
        Ok((value, grad))
    }
}

/// Undo `e^{−iβX_q}` on both vectors; returns `2 Im⟨λ|X_q|ψ⟩` taken before.
fn undo_rx(psi: &mut [Complex64], lam: &mut [Complex64], q: usize, beta: f64) -> f64 {
    let (s, c) = (-beta).sin_cos();
    let stride = 1usize << q;
    let mut acc = 0.0;
    let rot = |x0: Complex64, x1: Complex64| {
        (
            Complex64::new(c * x0.re + s * x1.im, c * x0.im - s * x1.re),
            Complex64::new(c * x1.re + s * x0.im, c * x1.im - s * x0.re),
        )
    };
    for (pb, lb) in psi.chunks_exact_mut(2 * stride).zip(lam.chunks_exact_mut(2 * stride)) {
        let (p0, p1) = pb.split_at_mut(stride);
        let (l0, l1) = lb.split_at_mut(stride);
        for k in 0..stride {
            let (a0, a1, b0, b1) = (p0[k], p1[k], l0[k], l1[k]);
            acc += b0.re * a1.im - b0.im * a1.re + b1.re * a0.im - b1.im * a0.re;
            (p0[k], p1[k]) = rot(a0, a1);
            (l0[k], l1[k]) = rot(b0, b1);
        }
    }
    2.0 * acc
}

/// Undo `e^{−iαY_q}` on both vectors; returns `2 Im⟨λ|Y_q|ψ⟩` taken before.
fn undo_ry(psi: &mut [Complex64], lam: &mut [Complex64], q: usize, alpha: f64) -> f64 {
    let (s, c) = (-alpha).sin_cos();
    let stride = 1usize << q;
    let mut acc = 0.0;
    for (pb, lb) in psi.chunks_exact_mut(2 * stride).zip(lam.chunks_exact_mut(2 * stride)) {
        let (p0, p1) = pb.split_at_mut(stride);
        let (l0, l1) = lb.split_at_mut(stride);
        for k in 0..stride {
            let (a0, a1, b0, b1) = (p0[k], p1[k], l0[k], l1[k]);
            acc += b1.re * a0.re + b1.im * a0.im - b0.re * a1.re - b0.im * a1.im;
            p0[k] = c * a0 - s * a1;
            p1[k] = s * a0 + c * a1;
            l0[k] = c * b0 - s * b1;
            l1[k] = s * b0 + c * b1;
        }
    }
    2.0 * acc
}

/// In-place unnormalised Walsh-Hadamard transform.
fn walsh_hadamard(v: &mut [f64]) {
    let mut h = 1;
    while h < v.len() {
        for block in v.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}
