//! Weighted undirected graphs and the per-edge neighbourhood decomposition
//! consumed by every p=1 expectation formula.
//!
//! Vertices are dense ids `0..n`. Each edge is stored once as `(u, v)` with
//! `u < v`, in lexicographic order, so edge ids are stable for a given edge
//! set. For every edge `{u, v}` the graph caches
//!
//! * `e`: neighbours of `v` other than `u`,
//! * `d`: neighbours of `u` other than `v`,
//! * `F = e ∩ d`: vertices closing a triangle with the edge,
//!
//! together with the edge ids needed to evaluate products of cosines over
//! those sets without any hashing in the hot loop.

mod generate;
mod io;
mod oracle;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use generate::generate_regular;
pub use io::{
    load_edge_list, load_edge_list_mapped, save_edge_list, save_edge_list_with_optimum, GraphFormat, LoadedGraph,
};
pub use oracle::{brute_force_maxcut, brute_force_maxcut_with_cap, BRUTE_FORCE_CAP, BRUTE_FORCE_HARD_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

/// Neighbourhood sets of one edge `{u, v}` (with `u < v`).
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeNeighborhood {
    pub u: usize,
    pub v: usize,
    /// Neighbours of `v` excluding `u`.
    pub e: Vec<usize>,
    /// Neighbours of `u` excluding `v`.
    pub d: Vec<usize>,
    /// Common neighbours of `u` and `v`.
    pub f: Vec<usize>,
    /// `|N(u) ∪ N(v)| - 2`.
    pub edge_degree: usize,
    /// Edge ids `{w, v}` for `w ∈ e \ F`.
    pub(crate) e_only: Vec<usize>,
    /// Edge ids `{u, w}` for `w ∈ d \ F`.
    pub(crate) d_only: Vec<usize>,
    /// Edge id pairs `({u, f}, {v, f})` for `f ∈ F`.
    pub(crate) triangles: Vec<(usize, usize)>,
}

impl EdgeNeighborhood {
    /// `(|e|, |d|, |F|)`
    pub fn sizes(&self) -> (usize, usize, usize) {
        (self.e.len(), self.d.len(), self.f.len())
    }
}

#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    /// Per vertex: `(neighbour, edge id)` sorted by neighbour.
    adjacency: Vec<Vec<(usize, usize)>>,
    neighborhoods: Vec<EdgeNeighborhood>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}

impl Graph {
    /// Build a graph from `(u, v, weight)` triples.
    ///
    /// Endpoints may be given in either order. Self-loops, duplicate edges,
    /// out-of-range ids and negative or non-finite weights are rejected; the
    /// reported line is the 1-based position of the offending triple.
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let numbered = edges.into_iter().enumerate().map(|(i, (u, v, w))| (u, v, w, i as u64 + 1));
        Self::from_numbered(n, numbered)
    }

    /// Unit-weight convenience constructor.
    pub fn unweighted<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::new(n, edges.into_iter().map(|(u, v)| (u, v, 1.0)))
    }

    pub(crate) fn from_numbered<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64, u64)>,
    {
        let mut list: Vec<(Edge, u64)> = Vec::new();
        for (a, b, weight, line) in edges {
            if a == b {
                return Err(Error::SelfLoop { line, vertex: a });
            }
            if a >= n || b >= n {
                return Err(Error::Parse { line, message: format!("vertex id out of range for n = {n}: ({a}, {b})") });
            }
            if !weight.is_finite() || weight < 0.0 {
                return Err(Error::Parse {
                    line,
                    message: format!("edge weight must be finite and non-negative, got {weight}"),
                });
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            list.push((Edge { u, v, weight }, line));
        }
        list.sort_by(|x, y| (x.0.u, x.0.v, x.1).cmp(&(y.0.u, y.0.v, y.1)));
        for pair in list.windows(2) {
            if pair[0].0.u == pair[1].0.u && pair[0].0.v == pair[1].0.v {
                return Err(Error::DuplicateEdge { line: pair[1].1, u: pair[1].0.u, v: pair[1].0.v });
            }
        }
        let edges: Vec<Edge> = list.into_iter().map(|(e, _)| e).collect();
        Ok(Self::from_canonical(n, edges))
    }

    /// `edges` must already be canonical: `u < v`, sorted, unique.
    fn from_canonical(n: usize, edges: Vec<Edge>) -> Self {
        let mut adjacency = vec![Vec::new(); n];
        for (id, e) in edges.iter().enumerate() {
            adjacency[e.u].push((e.v, id));
            adjacency[e.v].push((e.u, id));
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let mut graph = Graph { n, edges, adjacency, neighborhoods: Vec::new() };
        graph.neighborhoods = (0..graph.edges.len()).map(|id| graph.build_neighborhood(id)).collect();
        graph
    }

    fn build_neighborhood(&self, id: usize) -> EdgeNeighborhood {
        let Edge { u, v, .. } = self.edges[id];
        let nu = &self.adjacency[u];
        let nv = &self.adjacency[v];
        let e: Vec<usize> = nv.iter().map(|&(w, _)| w).filter(|&w| w != u).collect();
        let d: Vec<usize> = nu.iter().map(|&(w, _)| w).filter(|&w| w != v).collect();

        let mut f = Vec::new();
        let mut triangles = Vec::new();
        let mut e_only = Vec::new();
        let mut d_only = Vec::new();
        // Sorted merge of N(u) and N(v).
        let (mut i, mut j) = (0, 0);
        while i < nu.len() || j < nv.len() {
            let a = nu.get(i).copied();
            let b = nv.get(j).copied();
            match (a, b) {
                (Some((wa, ea)), Some((wb, eb))) if wa == wb => {
                    f.push(wa);
                    triangles.push((ea, eb));
                    i += 1;
                    j += 1;
                }
                (Some((wa, ea)), Some((wb, _))) if wa < wb => {
                    if wa != v {
                        d_only.push(ea);
                    }
                    i += 1;
                }
                (Some((wa, ea)), None) => {
                    if wa != v {
                        d_only.push(ea);
                    }
                    i += 1;
                }
                (_, Some((wb, eb))) => {
                    if wb != u {
                        e_only.push(eb);
                    }
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        let edge_degree = e.len() + d.len() - f.len();
        EdgeNeighborhood { u, v, e, d, f, edge_degree, e_only, d_only, triangles }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn degree(&self, vertex: usize) -> usize {
        self.adjacency[vertex].len()
    }

    pub fn neighbors(&self, vertex: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[vertex].iter().map(|&(w, _)| w)
    }

    /// `(neighbour, edge id)` pairs of `vertex`, sorted by neighbour.
    pub fn incident(&self, vertex: usize) -> &[(usize, usize)] {
        &self.adjacency[vertex]
    }

    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        let list = self.adjacency.get(u)?;
        list.binary_search_by_key(&v, |&(w, _)| w).ok().map(|pos| list[pos].1)
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    pub fn is_unweighted(&self) -> bool {
        self.edges.iter().all(|e| e.weight == 1.0)
    }

    pub fn neighborhood_by_id(&self, id: usize) -> &EdgeNeighborhood {
        &self.neighborhoods[id]
    }

    pub fn neighborhoods(&self) -> &[EdgeNeighborhood] {
        &self.neighborhoods
    }

    /// Cached neighbourhood sets of the edge `{u, v}`.
    pub fn neighborhood(&self, u: usize, v: usize) -> Result<&EdgeNeighborhood> {
        self.edge_id(u, v).map(|id| &self.neighborhoods[id]).ok_or(Error::EdgeNotFound(u, v))
    }

    /// Same edge set with every weight replaced by `weight_of(edge id)`.
    pub fn reweighted(&self, mut weight_of: impl FnMut(usize) -> f64) -> Result<Self> {
        let triples: Vec<_> = self.edges.iter().enumerate().map(|(id, e)| (e.u, e.v, weight_of(id))).collect();
        Self::new(self.n, triples)
    }

    /// True iff every edge degree is odd.
    pub fn has_odd_edge_degrees(&self) -> bool {
        self.neighborhoods.iter().all(|nb| nb.edge_degree % 2 == 1)
    }

    pub fn is_triangle_free(&self) -> bool {
        self.neighborhoods.iter().all(|nb| nb.f.is_empty())
    }

    /// A proper 2-colouring when one exists (BFS per component).
    pub fn two_colouring(&self) -> Option<Vec<u8>> {
        let mut colour: Vec<Option<u8>> = vec![None; self.n];
        let mut queue = VecDeque::new();
        for start in 0..self.n {
            if colour[start].is_some() {
                continue;
            }
            colour[start] = Some(0);
            queue.push_back(start);
            while let Some(x) = queue.pop_front() {
                let cx = colour[x].unwrap();
                for y in self.neighbors(x) {
                    match colour[y] {
                        None => {
                            colour[y] = Some(1 - cx);
                            queue.push_back(y);
                        }
                        Some(cy) if cy == cx => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(colour.into_iter().map(|c| c.unwrap()).collect())
    }

    pub fn is_two_colourable(&self) -> bool {
        self.two_colouring().is_some()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for y in self.neighbors(x) {
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count == self.n
    }

    /// `C(z) = Σ w_uv [z_u ≠ z_v]`.
    pub fn cut_value(&self, assignment: &[u8]) -> f64 {
        self.edges.iter().filter(|e| assignment[e.u] != assignment[e.v]).map(|e| e.weight).sum()
    }

    /// Cut value of the basis state `z`, bit `i` of `z` giving vertex `i`.
    pub fn cut_value_bits(&self, z: u64) -> f64 {
        self.edges.iter().filter(|e| ((z >> e.u) ^ (z >> e.v)) & 1 == 1).map(|e| e.weight).sum()
    }
}

/// A partition of the vertices and its cut value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutResult {
    /// One bit per vertex.
    pub assignment: Vec<u8>,
    pub cut_value: f64,
    /// `cut_value / C_max` when the optimum is known.
    pub ratio: Option<f64>,
}

impl CutResult {
    pub fn new(graph: &Graph, assignment: Vec<u8>) -> Self {
        let cut_value = graph.cut_value(&assignment);
        CutResult { assignment, cut_value, ratio: None }
    }

    pub fn with_optimum(mut self, optimum: f64) -> Self {
        self.ratio = Some(if optimum > 0.0 { self.cut_value / optimum } else { 1.0 });
        self
    }

    /// The complementary partition, which cuts the same edges.
    pub fn flipped(&self, graph: &Graph) -> Self {
        let assignment = self.assignment.iter().map(|b| 1 - b).collect();
        CutResult { ratio: self.ratio, ..CutResult::new(graph, assignment) }
    }
}

/// Small named graphs used by tests, examples and benchmarks.
pub mod named {
    use super::Graph;

    pub fn complete(n: usize) -> Graph {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::unweighted(n, edges).expect("complete graph is simple")
    }

    pub fn path(n: usize) -> Graph {
        Graph::unweighted(n, (1..n).map(|v| (v - 1, v))).expect("path is simple")
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3);
        Graph::unweighted(n, (0..n).map(|v| (v, (v + 1) % n))).expect("cycle is simple")
    }

    /// Star `S_k`: centre 0 joined to leaves `1..=k`.
    pub fn star(k: usize) -> Graph {
        Graph::unweighted(k + 1, (1..=k).map(|leaf| (0, leaf))).expect("star is simple")
    }

    pub fn petersen() -> Graph {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (i + 5, (i + 2) % 5 + 5));
        Graph::unweighted(10, outer.chain(spokes).chain(inner)).expect("petersen is simple")
    }
}

#[cfg(test)]
mod tests {
    use super::named::*;
    use super::*;

    #[test]
    fn edges_are_canonicalised() {
        let g = Graph::new(3, [(2, 0, 1.5), (1, 0, 2.0)]).unwrap();
        assert_eq!(g.edges(), &[Edge { u: 0, v: 1, weight: 2.0 }, Edge { u: 0, v: 2, weight: 1.5 }]);
        assert_eq!(g.edge_id(2, 0), Some(1));
        assert_eq!(g.edge_id(1, 2), None);
    }

    #[test]
    fn rejects_self_loops_duplicates_and_bad_weights() {
        assert!(matches!(Graph::new(3, [(0, 1, 1.0), (1, 1, 1.0)]), Err(Error::SelfLoop { line: 2, vertex: 1 })));
        assert!(matches!(
            Graph::new(3, [(0, 1, 1.0), (1, 2, 1.0), (1, 0, 1.0)]),
            Err(Error::DuplicateEdge { line: 3, u: 0, v: 1 })
        ));
        assert!(Graph::new(3, [(0, 1, -1.0)]).is_err());
        assert!(Graph::new(3, [(0, 1, f64::NAN)]).is_err());
        assert!(Graph::new(2, [(0, 2, 1.0)]).is_err());
    }

    #[test]
    fn star_neighbourhoods() {
        let g = star(4);
        let nb = g.neighborhood(0, 3).unwrap();
        // u = centre, v = leaf
        assert!(nb.e.is_empty());
        assert_eq!(nb.d, vec![1, 2, 4]);
        assert!(nb.f.is_empty());
        assert_eq!(nb.edge_degree, 3);
        assert_eq!(nb.d_only.len(), 3);
    }

    #[test]
    fn triangle_and_k4_neighbourhoods() {
        let k3 = complete(3);
        for nb in k3.neighborhoods() {
            assert_eq!(nb.sizes(), (1, 1, 1));
            assert_eq!(nb.edge_degree, 1);
            assert!(nb.e_only.is_empty() && nb.d_only.is_empty());
            assert_eq!(nb.triangles.len(), 1);
        }
        let k4 = complete(4);
        for nb in k4.neighborhoods() {
            assert_eq!(nb.sizes(), (2, 2, 2));
            assert_eq!(nb.edge_degree, 2);
        }
    }

    #[test]
    fn neighbourhood_of_missing_edge_is_an_error() {
        assert!(matches!(path(3).neighborhood(0, 2), Err(Error::EdgeNotFound(0, 2))));
    }

    #[test]
    fn triangle_edge_ids_point_at_the_right_edges() {
        let g = complete(4);
        for nb in g.neighborhoods() {
            for (&f, &(uf, vf)) in nb.f.iter().zip(&nb.triangles) {
                assert_eq!(g.edge_id(nb.u, f), Some(uf));
                assert_eq!(g.edge_id(nb.v, f), Some(vf));
            }
        }
    }

    #[test]
    fn odd_edge_degree_checks() {
        assert!(path(3).has_odd_edge_degrees());
        assert!(star(4).has_odd_edge_degrees());
        assert!(!star(3).has_odd_edge_degrees());
        // Per-edge parity only: K3 edge degrees are all 1.
        assert!(complete(3).has_odd_edge_degrees());
        assert!(!complete(3).is_triangle_free());
        assert!(!path(4).has_odd_edge_degrees());
    }

    #[test]
    fn colouring_of_cycles() {
        let c4 = cycle(4);
        let colouring = c4.two_colouring().unwrap();
        assert!(c4.edges().iter().all(|e| colouring[e.u] != colouring[e.v]));
        assert!(c4.is_triangle_free());
        assert!(!complete(3).is_two_colourable());
        assert!(!complete(3).is_triangle_free());
        assert!(cycle(5).is_triangle_free());
        assert!(!cycle(5).is_two_colourable());
    }

    #[test]
    fn cut_values() {
        let g = complete(3);
        assert_eq!(g.cut_value(&[0, 0, 0]), 0.0);
        assert_eq!(g.cut_value(&[0, 1, 1]), 2.0);
        assert_eq!(g.cut_value_bits(0b110), 2.0);
        let r = CutResult::new(&g, vec![1, 0, 0]).with_optimum(2.0);
        assert_eq!(r.ratio, Some(1.0));
        assert_eq!(r.flipped(&g).cut_value, 2.0);
    }

    #[test]
    fn connectivity() {
        assert!(petersen().is_connected());
        let g = Graph::unweighted(4, [(0, 1), (2, 3)]).unwrap();
        assert!(!g.is_connected());
    }
}
