//! Exhaustive MaxCut by Gray-code enumeration.
//!
//! Vertex `n - 1` is pinned to side 0 (a cut and its complement have the same
//! value), leaving `2^(n-1)` assignments. The Gray sequence flips one vertex
//! per step so each step costs `O(deg)`, or a single popcount on unit-weight
//! graphs. The sequence is split into fixed-size blocks that are scanned in
//! parallel; block boundaries do not depend on the thread count, so the
//! reported optimum and assignment are deterministic.

use rayon::prelude::*;

use super::{CutResult, Graph};
use crate::error::{Error, Result};

/// Default vertex cap for [`brute_force_maxcut`].
pub const BRUTE_FORCE_CAP: usize = 26;
/// Largest cap accepted by [`brute_force_maxcut_with_cap`].
pub const BRUTE_FORCE_HARD_CAP: usize = 32;

const BLOCK_BITS: u32 = 20;

pub fn brute_force_maxcut(graph: &Graph) -> Result<CutResult> {
    brute_force_maxcut_with_cap(graph, BRUTE_FORCE_CAP)
}

/// Exact MaxCut with an explicit vertex cap (at most [`BRUTE_FORCE_HARD_CAP`]).
pub fn brute_force_maxcut_with_cap(graph: &Graph, cap: usize) -> Result<CutResult> {
    let cap = cap.min(BRUTE_FORCE_HARD_CAP);
    let n = graph.n();
    if n > cap {
        return Err(Error::OracleCap { n, cap });
    }
    if n <= 1 || graph.m() == 0 {
        return Ok(CutResult::new(graph, vec![0; n]).with_optimum(0.0));
    }
    let free_bits = (n - 1) as u32;
    let block_bits = BLOCK_BITS.min(free_bits);
    let blocks = 1u64 << (free_bits - block_bits);

    let scan = |block: u64| -> (f64, u64) {
        if graph.is_unweighted() {
            scan_block_unit(graph, block, block_bits)
        } else {
            scan_block_weighted(graph, block, block_bits)
        }
    };
    let (_, best_z) = (0..blocks)
        .into_par_iter()
        .map(scan)
        .reduce(|| (f64::NEG_INFINITY, u64::MAX), |a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a });
    let assignment = (0..n).map(|i| ((best_z >> i) & 1) as u8).collect();
    let result = CutResult::new(graph, assignment);
    let optimum = result.cut_value;
    Ok(result.with_optimum(optimum))
}

#[inline]
fn gray(t: u64) -> u64 {
    t ^ (t >> 1)
}

/// Best `(value, z)` over Gray indices `block * 2^bits .. (block + 1) * 2^bits`.
fn scan_block_unit(graph: &Graph, block: u64, bits: u32) -> (f64, u64) {
    let n = graph.n();
    let adj: Vec<u64> = (0..n).map(|x| graph.neighbors(x).fold(0u64, |m, y| m | (1 << y))).collect();
    let deg: Vec<i64> = (0..n).map(|x| graph.degree(x) as i64).collect();
    let start = block << bits;
    let z = gray(start);
    let cut = graph.cut_value_bits(z) as i64;
    #[cfg(target_arch = "x86_64")]
    if std::arch::is_x86_feature_detected!("popcnt") {
        // SAFETY: the feature was detected at runtime.
        let best = unsafe { gray_walk_popcnt(&adj, &deg, start, bits, z, cut) };
        return (best.0 as f64, best.1);
    }
    let best = gray_walk(&adj, &deg, start, bits, z, cut);
    (best.0 as f64, best.1)
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "popcnt")]
unsafe fn gray_walk_popcnt(adj: &[u64], deg: &[i64], start: u64, bits: u32, z: u64, cut: i64) -> (i64, u64) {
    gray_walk(adj, deg, start, bits, z, cut)
}

#[inline(always)]
fn gray_walk(adj: &[u64], deg: &[i64], start: u64, bits: u32, mut z: u64, mut cut: i64) -> (i64, u64) {
    let mut best = (cut, z);
    for t in start + 1..start + (1u64 << bits) {
        let k = t.trailing_zeros() as usize;
        let differs = if (z >> k) & 1 == 1 { !z } else { z };
        cut += deg[k] - 2 * (adj[k] & differs).count_ones() as i64;
        z ^= 1 << k;
        if cut > best.0 {
            best = (cut, z);
        }
    }
    best
}

fn scan_block_weighted(graph: &Graph, block: u64, bits: u32) -> (f64, u64) {
    let start = block << bits;
    let mut z = gray(start);
    let mut cut = graph.cut_value_bits(z);
    let mut best = (cut, z);
    for t in start + 1..start + (1u64 << bits) {
        let k = t.trailing_zeros() as usize;
        let zk = (z >> k) & 1;
        let mut delta = 0.0;
        for &(x, id) in graph.incident(k) {
            let w = graph.edges()[id].weight;
            if (z >> x) & 1 == zk {
                delta += w;
            } else {
                delta -= w;
            }
        }
        cut += delta;
        z ^= 1 << k;
        if cut > best.0 {
            best = (cut, z);
        }
    }
    // Re-evaluate to shed accumulated rounding.
    (graph.cut_value_bits(best.1), best.1)
}
