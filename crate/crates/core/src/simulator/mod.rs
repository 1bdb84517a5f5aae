//! Dense statevector simulation of the layered ansatz for any depth.
//!
//! Basis index bit `j` holds qubit `j` (vertex `j`). Each layer applies the
//! diagonal problem unitary `exp(−i Σ γ_uv C_uv)` with
//! `C_uv = (w_uv / 2)(1 − Z_u Z_v)`, then `e^{−iβ_j X_j}` and `e^{−iα_j Y_j}`
//! on every qubit. Variants that pin `α` or `β` to zero skip that rotation.
//! Global phases are dropped throughout.

mod adjoint;

use std::io::{Read, Write};

use num_complex::Complex64;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::analytic::{AngleAssignment, Variant};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::rng_from_seed;

pub use adjoint::SimulatedAnsatz;

/// Largest supported register.
pub const QUBIT_CAP: usize = 24;

#[derive(Clone, Debug, PartialEq)]
pub struct Statevector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl Statevector {
    fn check_cap(n: usize) -> Result<()> {
        if n > QUBIT_CAP {
            Err(Error::QubitCap { n, cap: QUBIT_CAP })
        } else {
            Ok(())
        }
    }

    /// `|s⟩ = |+⟩^{⊗n}`
    pub fn uniform(n_qubits: usize) -> Result<Self> {
        Self::check_cap(n_qubits)?;
        let dim = 1usize << n_qubits;
        let amp = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Ok(Statevector { n_qubits, amplitudes: vec![amp; dim] })
    }

    pub fn basis(n_qubits: usize, z: u64) -> Result<Self> {
        Self::check_cap(n_qubits)?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[z as usize] = Complex64::new(1.0, 0.0);
        Ok(Statevector { n_qubits, amplitudes })
    }

    /// Wrap raw amplitudes; the length must be a power of two.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = amplitudes.len();
        if !dim.is_power_of_two() {
            return Err(Error::InvalidArgument(format!("{dim} amplitudes is not a power of two")));
        }
        let n_qubits = dim.trailing_zeros() as usize;
        Self::check_cap(n_qubits)?;
        Ok(Statevector { n_qubits, amplitudes })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `|⟨self|other⟩|`, insensitive to global phase.
    pub fn overlap(&self, other: &Statevector) -> f64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum::<Complex64>().norm()
    }

    pub(crate) fn apply_diagonal(&mut self, phases: &[Complex64]) {
        for (a, p) in self.amplitudes.iter_mut().zip(phases) {
            *a *= p;
        }
    }

    /// Raw dump: `2^n` pairs of little-endian `f64` (real, imaginary).
    pub fn write_binary<W: Write>(&self, mut sink: W) -> Result<()> {
        for a in &self.amplitudes {
            sink.write_all(&a.re.to_le_bytes())?;
            sink.write_all(&a.im.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut source: R) -> Result<Self> {
        let mut bytes = Vec::new();
        source.read_to_end(&mut bytes)?;
        if bytes.len() % 16 != 0 {
            return Err(Error::InvalidArgument("dump length is not a multiple of 16 bytes".into()));
        }
        let word = |chunk: &[u8]| f64::from_le_bytes(chunk.try_into().expect("8 bytes"));
        let amplitudes = bytes.chunks_exact(16).map(|c| Complex64::new(word(&c[..8]), word(&c[8..]))).collect();
        Self::from_amplitudes(amplitudes)
    }
}

/// `e^{−iβX}` on one qubit, by strided pair updates.
pub(crate) fn apply_rx(amps: &mut [Complex64], qubit: usize, beta: f64) {
    let (s, c) = beta.sin_cos();
    let stride = 1usize << qubit;
    for block in amps.chunks_exact_mut(2 * stride) {
        let (lo, hi) = block.split_at_mut(stride);
        for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
            let (x0, x1) = (*a0, *a1);
            *a0 = Complex64::new(c * x0.re + s * x1.im, c * x0.im - s * x1.re);
            *a1 = Complex64::new(c * x1.re + s * x0.im, c * x1.im - s * x0.re);
        }
    }
}

/// `e^{−iαY}` on one qubit.
pub(crate) fn apply_ry(amps: &mut [Complex64], qubit: usize, alpha: f64) {
    let (s, c) = alpha.sin_cos();
    let stride = 1usize << qubit;
    for block in amps.chunks_exact_mut(2 * stride) {
        let (lo, hi) = block.split_at_mut(stride);
        for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
            let (x0, x1) = (*a0, *a1);
            *a0 = c * x0 - s * x1;
            *a1 = s * x0 + c * x1;
        }
    }
}

/// `exp(−i Σ_e θ_e C_e(z))` for every basis state, `θ_e = γ_e` and `C_e(z) =
/// w_e [z_u ≠ z_v]`.
///
/// Built by a prefix recursion on the highest set bit `h` of `z`: setting bit
/// `h` toggles the cut status of exactly the edges at `h`, so each entry costs
/// `deg(h)` complex multiplications.
pub(crate) fn phase_table(graph: &Graph, gamma_of: impl Fn(usize) -> f64) -> Vec<Complex64> {
    let n = graph.n();
    // Per vertex: (neighbour, [e^{−iθ}, e^{+iθ}]) for each incident edge.
    let factors: Vec<Vec<(usize, [Complex64; 2])>> = (0..n)
        .map(|h| {
            graph
                .incident(h)
                .iter()
                .map(|&(x, id)| {
                    let f = Complex64::from_polar(1.0, -gamma_of(id) * graph.edges()[id].weight);
                    (x, [f, f.conj()])
                })
                .collect()
        })
        .collect();
    let dim = 1usize << n;
    let mut table = vec![Complex64::new(1.0, 0.0); dim];
    for h in 0..n {
        let top = 1usize << h;
        let (done, rest) = table.split_at_mut(top);
        for (base, slot) in rest[..top].iter_mut().enumerate() {
            // x > h is still 0 in z; the edge becomes cut iff z_x = 0.
            *slot = factors[h].iter().fold(done[base], |p, (x, f)| p * f[(base >> x) & 1]);
        }
    }
    table
}

/// `C(z)` for every basis state, same recursion as [`phase_table`].
pub(crate) fn cut_table(graph: &Graph) -> Vec<f64> {
    let n = graph.n();
    let mut table = vec![0.0; 1usize << n];
    for h in 0..n {
        let top = 1usize << h;
        for base in 0..top {
            let mut c = table[base];
            for &(x, id) in graph.incident(h) {
                let w = graph.edges()[id].weight;
                if (base >> x) & 1 == 0 {
                    c += w;
                } else {
                    c -= w;
                }
            }
            table[base | top] = c;
        }
    }
    table
}

/// Apply one layer (problem unitary, then mixer) in place.
pub fn apply_layer(psi: &mut Statevector, graph: &Graph, layer: &AngleAssignment) {
    let phases = phase_table(graph, |id| layer.gamma_for(id));
    psi.apply_diagonal(&phases);
    apply_mixer(&mut psi.amplitudes, graph.n(), layer);
}

pub(crate) fn apply_mixer(amps: &mut [Complex64], n: usize, layer: &AngleAssignment) {
    let (x, y) = layer.variant.mixer_axes();
    for q in 0..n {
        if x {
            apply_rx(amps, q, layer.beta_for(q));
        }
        if y {
            apply_ry(amps, q, layer.alpha_for(q));
        }
    }
}

/// Output state of `layers.len()` ansatz layers applied to `|s⟩`.
pub fn build_state(graph: &Graph, layers: &[AngleAssignment], variant: Variant) -> Result<Statevector> {
    if layers.is_empty() {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    for layer in layers {
        layer.require(variant)?;
        layer.validate(graph)?;
    }
    let mut psi = Statevector::uniform(graph.n())?;
    for layer in layers {
        apply_layer(&mut psi, graph, layer);
    }
    Ok(psi)
}

/// `⟨ψ|C|ψ⟩`, streaming over basis states in Gray-code order.
pub fn expectation(psi: &Statevector, graph: &Graph) -> Result<f64> {
    if psi.n_qubits != graph.n() {
        return Err(Error::DimensionMismatch { expected: graph.n(), actual: psi.n_qubits });
    }
    let amps = &psi.amplitudes;
    let mut z = 0usize;
    let mut cut = 0.0;
    let mut total = amps[0].norm_sqr() * cut;
    for t in 1..amps.len() {
        let k = t.trailing_zeros() as usize;
        let zk = (z >> k) & 1;
        for &(x, id) in graph.incident(k) {
            let w = graph.edges()[id].weight;
            if (z >> x) & 1 == zk {
                cut += w;
            } else {
                cut -= w;
            }
        }
        z ^= 1 << k;
        total += amps[z].norm_sqr() * cut;
    }
    Ok(total)
}

/// `shots` i.i.d. basis states drawn from `|ψ_z|²` by inverse CDF.
pub fn sample(psi: &Statevector, shots: usize, seed: u64) -> Vec<u64> {
    let mut cdf = Vec::with_capacity(psi.amplitudes.len());
    let mut acc = 0.0;
    for a in &psi.amplitudes {
        acc += a.norm_sqr();
        cdf.push(acc);
    }
    let mut rng = rng_from_seed(seed);
    (0..shots)
        .map(|_| {
            let u = rng.random::<f64>() * acc;
            let idx = cdf.partition_point(|&c| c <= u).min(cdf.len() - 1);
            idx as u64
        })
        .collect()
}

/// Empirical mean of `C` over `shots` measurements of the ansatz state.
pub fn shot_expectation(
    graph: &Graph,
    layers: &[AngleAssignment],
    variant: Variant,
    shots: usize,
    seed: u64,
) -> Result<f64> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    let psi = build_state(graph, layers, variant)?;
    let samples = sample(&psi, shots, seed);
    Ok(samples.iter().map(|&z| graph.cut_value_bits(z)).sum::<f64>() / shots as f64)
}

/// Summary of a shot-based estimate, for reporting.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ShotEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub shots: usize,
}

pub fn shot_estimate(graph: &Graph, psi: &Statevector, shots: usize, seed: u64) -> ShotEstimate {
    let values: Vec<f64> = sample(psi, shots, seed).into_iter().map(|z| graph.cut_value_bits(z)).collect();
    let mean = values.iter().sum::<f64>() / shots as f64;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (shots.max(2) - 1) as f64;
    ShotEstimate { mean, std_error: (var / shots as f64).sqrt(), shots }
}
