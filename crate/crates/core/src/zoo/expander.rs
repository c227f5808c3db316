//! Frustration-free search Hamiltonians on regular graphs.
//!
//! For a marked vertex `x` and edge weights `c_x = 1/sqrt(d(N-1))`,
//! `c_v = 1/sqrt(d)` otherwise, each edge contributes the rank-one projector
//! onto `c_y |y> - c_z |z>`. Edges of one color share no vertex, so each color
//! class sums to a projector and `H_x = sum_l Pi_l` is gap-amplifiable with
//! `lambda = L`.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gapamp::{GapAmpHamiltonian, GapAmpTerm};
use crate::linalg::{self, c, CMatrix, CVector};
use crate::operator::{self, Operator, SpectralDecomp, StateVector};
use crate::random;

/// Random samples drawn while looking for an expanding graph.
pub const MAX_SAMPLES: usize = 64;
/// Shuffled orderings tried when greedy coloring exceeds `d + 1` colors.
const COLORING_ATTEMPTS: usize = 256;
/// Double-edge switches per edge when randomizing a circulant graph.
const SWITCHES_PER_EDGE: usize = 20;

/// Simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    /// Edges `(y, z)` with `y < z`, sorted.
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::Invalid(format!("edge ({a}, {b}) outside {n} vertices")));
            }
            if a == b {
                return Err(Error::Invalid(format!("self loop at {a}")));
            }
            out.push((a.min(b), a.max(b)));
        }
        out.sort_unstable();
        let before = out.len();
        out.dedup();
        if out.len() != before {
            return Err(Error::Invalid("repeated edge".into()));
        }
        Ok(Self { n, edges: out })
    }

    /// Complete graph `K_n`.
    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        Self { n, edges }
    }

    /// Whitespace-separated `y z` pairs, one per line; `#` starts a comment.
    /// The vertex count is one more than the largest index.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let nums: Vec<usize> = line
                .split_whitespace()
                .map(|s| s.parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Invalid(format!("line {}: {e}", lineno + 1)))?;
            if nums.len() != 2 {
                return Err(Error::Invalid(format!("line {}: expected two vertices", lineno + 1)));
            }
            edges.push((nums[0], nums[1]));
        }
        let n = edges.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0);
        Self::new(n, edges)
    }

    pub fn to_edge_list(&self) -> String {
        self.edges.iter().map(|(a, b)| format!("{a} {b}\n")).collect()
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    /// Common degree, or `NotRegular`.
    pub fn regular_degree(&self) -> Result<usize> {
        let deg = self.degrees();
        let d = deg.first().copied().unwrap_or(0);
        if let Some(v) = deg.iter().position(|&x| x != d) {
            return Err(Error::NotRegular(format!("vertex 0 has degree {d}, vertex {v} has degree {}", deg[v])));
        }
        Ok(d)
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); self.n];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn adjacency(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.n, self.n);
        for &(a, b) in &self.edges {
            m[(a, b)] = c(1.0);
            m[(b, a)] = c(1.0);
        }
        m
    }

    /// Second largest adjacency eigenvalue.
    pub fn second_eigenvalue(&self) -> f64 {
        let (vals, _) = linalg::hermitian_eigen(&self.adjacency());
        if vals.len() < 2 {
            return 0.0;
        }
        vals[vals.len() - 2]
    }

    /// Circulant graphs randomized by edge switches; among the connected ones
    /// of up to [`MAX_SAMPLES`] draws the first with second eigenvalue at most
    /// `d/2` is returned, else the one with the smallest second eigenvalue.
    pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<Self> {
        if d == 0 || d >= n || n % 2 != 0 && d % 2 != 0 {
            return Err(Error::DomainError(format!("no simple {d}-regular graph on {n} vertices")));
        }
        let mut rng = random::rng(seed);
        let mut best: Option<(f64, Graph)> = None;
        for _ in 0..MAX_SAMPLES {
            let g = switched_circulant(n, d, &mut rng);
            if !g.is_connected() {
                continue;
            }
            let l2 = g.second_eigenvalue();
            if l2 <= 0.5 * d as f64 {
                return Ok(g);
            }
            if best.as_ref().map_or(true, |(b, _)| l2 < *b) {
                best = Some((l2, g));
            }
        }
        best.map(|b| b.1).ok_or(Error::Disconnected)
    }
}

/// Circulant `d`-regular graph mixed by random double-edge switches.
fn switched_circulant<R: Rng>(n: usize, d: usize, rng: &mut R) -> Graph {
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(n * d / 2);
    for v in 0..n {
        for k in 1..=d / 2 {
            edges.push((v, (v + k) % n));
        }
        if d % 2 == 1 && v < n / 2 {
            edges.push((v, v + n / 2));
        }
    }
    let mut adj = vec![vec![false; n]; n];
    for &(a, b) in &edges {
        adj[a][b] = true;
        adj[b][a] = true;
    }
    let m = edges.len();
    for _ in 0..SWITCHES_PER_EDGE * m {
        let (i, j) = (rng.random_range(0..m), rng.random_range(0..m));
        let ((a, b), (c, e)) = (edges[i], edges[j]);
        let (c, e) = if rng.random_bool(0.5) { (c, e) } else { (e, c) };
        // (a, b), (c, e) -> (a, c), (b, e)
        if i == j || a == c || b == e || adj[a][c] || adj[b][e] {
            continue;
        }
        for (p, q, v) in [(a, b, false), (c, e, false), (a, c, true), (b, e, true)] {
            adj[p][q] = v;
            adj[q][p] = v;
        }
        edges[i] = (a, c);
        edges[j] = (b, e);
    }
    Graph::new(n, edges).expect("switches keep the graph simple")
}

/// Proper edge coloring; `colors[i]` belongs to `graph.edges()[i]`.
fn greedy_coloring(graph: &Graph, order: &[usize]) -> Vec<usize> {
    let mut used: Vec<Vec<usize>> = vec![Vec::new(); graph.n];
    let mut colors = vec![0; graph.edges.len()];
    for &i in order {
        let (a, b) = graph.edges[i];
        let mut k = 0;
        while used[a].contains(&k) || used[b].contains(&k) {
            k += 1;
        }
        used[a].push(k);
        used[b].push(k);
        colors[i] = k;
    }
    colors
}

/// Greedy coloring in edge order, then shuffled orders until `d + 1` colors.
pub fn edge_coloring(graph: &Graph, seed: u64) -> (Vec<usize>, usize) {
    let d = graph.degrees().into_iter().max().unwrap_or(0);
    let mut order: Vec<usize> = (0..graph.edges.len()).collect();
    let count = |cols: &[usize]| cols.iter().max().map_or(0, |m| m + 1);
    let mut best = greedy_coloring(graph, &order);
    let mut rng = random::rng(seed);
    for _ in 0..COLORING_ATTEMPTS {
        if count(&best) <= d + 1 {
            break;
        }
        order.shuffle(&mut rng);
        let cand = greedy_coloring(graph, &order);
        if count(&cand) < count(&best) {
            best = cand;
        }
    }
    let k = count(&best);
    (best, k)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExpanderCertificates {
    pub ground_energy: f64,
    /// First nonzero eigenvalue.
    pub gap: f64,
    /// `1/(4N)`.
    pub gap_bound: f64,
    /// `min_phase ||phi_0 - e^{i a}(|x> + |perp>)/sqrt(2)||`.
    pub ground_state_error: f64,
    /// Second adjacency eigenvalue over `d`.
    pub eta: f64,
    pub colors: usize,
}

impl ExpanderCertificates {
    pub fn passes(&self) -> bool {
        self.ground_energy.abs() <= 1e-10 && self.gap >= self.gap_bound && self.ground_state_error <= 1e-8
    }
}

#[derive(Debug, Clone)]
pub struct ExpanderHamiltonian {
    pub graph: Graph,
    pub marked: usize,
    pub degree: usize,
    pub ga: GapAmpHamiltonian,
    pub decomp: SpectralDecomp,
    pub certificates: ExpanderCertificates,
}

fn weight(v: usize, x: usize, n: usize, d: usize) -> f64 {
    if v == x {
        1.0 / ((d * (n - 1)) as f64).sqrt()
    } else {
        1.0 / (d as f64).sqrt()
    }
}

/// `H_x` of a connected regular graph, grouped by edge color.
pub fn expander_ga_hamiltonian(graph: &Graph, x: usize) -> Result<ExpanderHamiltonian> {
    let n = graph.num_vertices();
    if x >= n {
        return Err(Error::DomainError(format!("marked vertex {x} outside [0, {n})")));
    }
    let d = graph.regular_degree()?;
    if d < 3 && n > 3 {
        return Err(Error::NotRegular(format!("degree {d} is below 3")));
    }
    if !graph.is_connected() {
        return Err(Error::Disconnected);
    }
    let eta = graph.second_eigenvalue() / d as f64;
    if eta > 0.5 {
        tracing::warn!(n, d, eta, "graph second eigenvalue exceeds d/2");
    }
    let (colors, count) = edge_coloring(graph, 0x5eed ^ x as u64);
    let mut projectors = vec![CMatrix::zeros(n, n); count];
    for (&(y, z), &k) in graph.edges().iter().zip(&colors) {
        let (cy, cz) = (weight(y, x, n, d), weight(z, x, n, d));
        let norm = cy * cy + cz * cz;
        let p = &mut projectors[k];
        p[(y, y)] += c(cy * cy / norm);
        p[(z, z)] += c(cz * cz / norm);
        p[(y, z)] += c(-cy * cz / norm);
        p[(z, y)] += c(-cy * cz / norm);
    }
    let terms = projectors.into_iter().map(|a| GapAmpTerm { lambda: 1.0, a }).collect();
    let ga = GapAmpHamiltonian::from_terms(terms, None)?;
    let decomp = operator::spectral_decompose(&ga.h)?;
    let expected = ground_state(n, x);
    let phi0 = decomp.eigenvectors.column(0).into_owned();
    let certificates = ExpanderCertificates {
        ground_energy: decomp.eigenvalues[0],
        gap: decomp.eigenvalues[1],
        gap_bound: 1.0 / (4.0 * n as f64),
        ground_state_error: phase_aligned_distance(&phi0, expected.amplitudes()),
        eta,
        colors: count,
    };
    Ok(ExpanderHamiltonian { graph: graph.clone(), marked: x, degree: d, ga, decomp, certificates })
}

fn phase_aligned_distance(a: &CVector, b: &CVector) -> f64 {
    let ip = b.dotc(a);
    let phase = if ip.norm() > 0.0 { ip / ip.norm() } else { c(1.0) };
    (a - b * phase).norm()
}

/// `a |x> + b |perp>` with `|perp>` uniform over the unmarked vertices.
pub fn marked_perp_state(n: usize, x: usize, a: f64, b: f64) -> Result<StateVector> {
    let p = b / ((n - 1) as f64).sqrt();
    let v = CVector::from_fn(n, |i, _| c(if i == x { a } else { p }));
    StateVector::normalized(v)
}

/// `(|x> + |perp>)/sqrt(2)`.
pub fn ground_state(n: usize, x: usize) -> StateVector {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    marked_perp_state(n, x, h, h).expect("nonzero")
}

/// The low-energy component of `|s>` along `|x>` and `|perp>`.
pub fn psi1_state(n: usize, x: usize) -> StateVector {
    let r = 1.0 / (n as f64).sqrt();
    marked_perp_state(n, x, ((1.0 + r) / 2.0).sqrt(), ((1.0 - r) / 2.0).sqrt()).expect("nonzero")
}

impl ExpanderHamiltonian {
    pub fn dim(&self) -> usize {
        self.graph.num_vertices()
    }

    pub fn operator(&self) -> &Operator {
        &self.ga.h
    }

    /// `Pi_{c/N} |s>` normalized, and `|<psi|s>|`.
    pub fn projected_uniform(&self, c_over_n: f64) -> Result<(StateVector, f64)> {
        let n = self.dim();
        let s = StateVector::uniform(n);
        let p = operator::projector_from(&self.decomp, c_over_n / n as f64);
        let psi = StateVector::normalized(p.apply(&s))?;
        let ov = psi.overlap(&s);
        Ok((psi, ov))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_round_trip() {
        let g = Graph::random_regular(12, 3, 4).unwrap();
        assert_eq!(g.regular_degree().unwrap(), 3);
        assert!(g.is_connected());
        let back = Graph::parse_edge_list(&g.to_edge_list()).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn rejects_irregular_and_disconnected() {
        let path = Graph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(matches!(expander_ga_hamiltonian(&path, 0), Err(Error::NotRegular(_))));
        let two_k4 = Graph::new(8, (0..4).flat_map(|a| (a + 1..4).flat_map(move |b| [(a, b), (a + 4, b + 4)]))).unwrap();
        assert!(matches!(expander_ga_hamiltonian(&two_k4, 0), Err(Error::Disconnected)));
    }

    #[test]
    fn coloring_is_proper() {
        let g = Graph::random_regular(16, 4, 1).unwrap();
        let (colors, k) = edge_coloring(&g, 3);
        assert!(k < 2 * 4);
        for (i, &(a, b)) in g.edges().iter().enumerate() {
            for (j, &(p, q)) in g.edges().iter().enumerate() {
                if i != j && colors[i] == colors[j] {
                    assert!(a != p && a != q && b != p && b != q);
                }
            }
        }
    }
}
