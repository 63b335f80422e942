//! Threshold graphs over distributions, the Earth Mover's Graph `G(s, n)`,
//! connected components, Laplacian spectra, and the spectral bounds on the
//! isoperimetric number and the mean distance.

use std::collections::{BTreeSet, HashMap, VecDeque};

use num::{BigInt, BigRational, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::emd::{emd_continuous_unit, Composition, EmdError, ProbVector};
use crate::render::{render_decimal, render_fraction, round_sig};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error(transparent)]
    Emd(#[from] EmdError),
    #[error("distributions have mixed lengths ({0} vs {1})")]
    MixedLengths(usize, usize),
    #[error("threshold must be non-negative")]
    NegativeThreshold,
    #[error("thresholds must be ascending")]
    ThresholdsNotAscending,
    #[error("graph too large: {vertices} vertices exceeds cap {cap}")]
    SizeCap { vertices: usize, cap: usize },
    #[error("exact enumeration infeasible for {vertices} vertices (cap {cap})")]
    EnumerationInfeasible { vertices: usize, cap: usize },
    #[error("need at least {min} vertices (got {vertices})")]
    TooFewVertices { vertices: usize, min: usize },
    #[error("mean distance undefined: graph is disconnected")]
    Disconnected,
    #[error("matrix is not symmetric (|a_ij - a_ji| = {0:e})")]
    NotSymmetric(f64),
    #[error("matrix is not square")]
    NotSquare,
    #[error("eigensolver did not converge (off-diagonal norm {0:e})")]
    NoConvergence(f64),
    #[error("invalid edge ({0}, {1})")]
    InvalidEdge(usize, usize),
    #[error("label count {labels} does not match vertex count {vertices}")]
    LabelCount { labels: usize, vertices: usize },
    #[error("{name} = {value} outside the admissible range")]
    OutOfRange { name: &'static str, value: f64 },
}

/// What a vertex stands for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Payload {
    Distribution(ProbVector),
    Composition(Composition),
    None,
}

/// Simple undirected graph with labelled vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmdGraph {
    labels: Vec<String>,
    payloads: Vec<Payload>,
    adjacency: Vec<BTreeSet<usize>>,
    threshold: Option<BigRational>,
}

impl EmdGraph {
    /// Graph on `m` vertices labelled `0..m` with the given edges.
    pub fn from_edges(m: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = EmdGraph {
            labels: (0..m).map(|i| i.to_string()).collect(),
            payloads: vec![Payload::None; m],
            adjacency: vec![BTreeSet::new(); m],
            threshold: None,
        };
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        if u == v || u >= self.adjacency.len() || v >= self.adjacency.len() {
            return Err(GraphError::InvalidEdge(u, v));
        }
        self.adjacency[u].insert(v);
        self.adjacency[v].insert(u);
        Ok(())
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, GraphError> {
        if labels.len() != self.vertex_count() {
            return Err(GraphError::LabelCount {
                labels: labels.len(),
                vertices: self.vertex_count(),
            });
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn payloads(&self) -> &[Payload] {
        &self.payloads
    }

    /// The threshold rule this graph was built with, if any.
    pub fn threshold(&self) -> Option<&BigRational> {
        self.threshold.as_ref()
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.range(u + 1..).map(move |&v| (u, v)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency.get(u).is_some_and(|n| n.contains(&v))
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[v].iter().copied()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(BTreeSet::len).max().unwrap_or(0)
    }

    /// `"u v"` per line, one line per edge.
    pub fn edge_list(&self) -> String {
        self.edges().iter().map(|(u, v)| format!("{u} {v}\n")).collect()
    }
}

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

/// Unit-normalized EMD for every pair `i < j`, as `dist[i][j - i - 1]`.
pub fn pairwise_unit_distances(dists: &[ProbVector]) -> Result<Vec<Vec<BigRational>>, GraphError> {
    if let Some(first) = dists.first() {
        if let Some(bad) = dists.iter().find(|d| d.len() != first.len()) {
            return Err(GraphError::MixedLengths(first.len(), bad.len()));
        }
    }
    dists
        .par_iter()
        .enumerate()
        .map(|(i, a)| {
            dists[i + 1..]
                .iter()
                .map(|b| emd_continuous_unit(a, b).map_err(GraphError::from))
                .collect()
        })
        .collect()
}

/// Joins `i` and `j` when their unit-normalized EMD is at most `threshold`
/// (exact comparison).
pub fn build_emd_graph(dists: &[ProbVector], threshold: &BigRational) -> Result<EmdGraph, GraphError> {
    if threshold < &BigRational::zero() {
        return Err(GraphError::NegativeThreshold);
    }
    let pairwise = pairwise_unit_distances(dists)?;
    let mut g = EmdGraph::from_edges(dists.len(), &[])?;
    for (i, row) in pairwise.iter().enumerate() {
        for (k, d) in row.iter().enumerate() {
            if d <= threshold {
                g.add_edge(i, i + k + 1)?;
            }
        }
    }
    g.payloads = dists.iter().cloned().map(Payload::Distribution).collect();
    g.threshold = Some(threshold.clone());
    Ok(g)
}

pub const DEFAULT_EMG_CAP: usize = 20_000;

/// `G(s, n)`: every composition of `s` into `n` parts, joined when the
/// discrete EMD is exactly 1, i.e. one unit moves to an adjacent bin.
pub fn earth_movers_graph(s: u64, n: usize, cap: usize) -> Result<EmdGraph, GraphError> {
    let count = Composition::count(s, n);
    if count > num::BigUint::from(cap) {
        return Err(GraphError::SizeCap { vertices: usize::try_from(&count).unwrap_or(usize::MAX), cap });
    }
    let vertices = Composition::all(s, n);
    let index: HashMap<&[u64], usize> =
        vertices.iter().enumerate().map(|(i, c)| (c.parts(), i)).collect();
    let mut g = EmdGraph::from_edges(vertices.len(), &[])?;
    for (u, c) in vertices.iter().enumerate() {
        for k in 0..n.saturating_sub(1) {
            if c.parts()[k] == 0 {
                continue;
            }
            let mut moved = c.parts().to_vec();
            moved[k] -= 1;
            moved[k + 1] += 1;
            g.add_edge(u, index[moved.as_slice()])?;
        }
    }
    g.labels = vertices.iter().map(Composition::to_string).collect();
    g.payloads = vertices.into_iter().map(Payload::Composition).collect();
    g.threshold = Some(BigRational::from_integer(BigInt::from(1)));
    Ok(g)
}

/// `G(m, p)` conditioned on connectivity: redraws until connected.
pub fn random_connected_graph(m: usize, p: f64, seed: u64) -> EmdGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let edges: Vec<(usize, usize)> = (0..m)
            .flat_map(|u| (u + 1..m).map(move |v| (u, v)))
            .filter(|_| rng.random_bool(p))
            .collect();
        let g = EmdGraph::from_edges(m, &edges).expect("valid edges");
        if connected_components(&g).len() <= 1 {
            return g;
        }
    }
}

// ---------------------------------------------------------------------------
// Components and sweeps
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    sets: usize,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), size: vec![1; n], sets: n }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        self.sets -= 1;
    }
}

/// Maximal connected vertex sets, each sorted, ordered by smallest member.
pub fn connected_components(g: &EmdGraph) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(g.vertex_count());
    for (u, v) in g.edges() {
        uf.union(u, v);
    }
    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for v in 0..g.vertex_count() {
        let root = uf.find(v);
        groups.entry(root).or_default().push(v);
    }
    let mut out: Vec<Vec<usize>> = groups.into_values().collect();
    out.sort_by_key(|c| c[0]);
    out
}

fn component_count_at(m: usize, pairwise: &[Vec<BigRational>], t: &BigRational) -> usize {
    let mut uf = UnionFind::new(m);
    for (i, row) in pairwise.iter().enumerate() {
        for (k, d) in row.iter().enumerate() {
            if d <= t {
                uf.union(i, i + k + 1);
            }
        }
    }
    uf.sets
}

/// Number of components of the threshold graph at each threshold.
pub fn threshold_sweep(
    dists: &[ProbVector],
    thresholds: &[BigRational],
) -> Result<Vec<(BigRational, usize)>, GraphError> {
    if thresholds.windows(2).any(|w| w[1] < w[0]) {
        return Err(GraphError::ThresholdsNotAscending);
    }
    let pairwise = pairwise_unit_distances(dists)?;
    Ok(thresholds
        .iter()
        .map(|t| (t.clone(), component_count_at(dists.len(), &pairwise, t)))
        .collect())
}

/// `steps` evenly spaced thresholds from `tmin` to `tmax` inclusive.
pub fn linspace(tmin: &BigRational, tmax: &BigRational, steps: usize) -> Vec<BigRational> {
    match steps {
        0 => Vec::new(),
        1 => vec![tmin.clone()],
        _ => {
            let step = (tmax - tmin) / BigRational::from_integer((steps - 1).into());
            (0..steps)
                .map(|k| tmin + &step * BigRational::from_integer(k.into()))
                .collect()
        }
    }
}

/// A maximal threshold interval `[start, end)` over which the component count
/// is constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plateau {
    pub start: BigRational,
    pub end: BigRational,
    pub components: usize,
}

/// Exact component-count profile: the count only changes at pairwise
/// distances, so the plateaus are the gaps between consecutive distinct
/// distances. The last plateau (one component) is unbounded and omitted.
pub fn plateaus(dists: &[ProbVector]) -> Result<Vec<Plateau>, GraphError> {
    let pairwise = pairwise_unit_distances(dists)?;
    let mut cuts: Vec<BigRational> = pairwise.iter().flatten().cloned().collect();
    cuts.sort();
    cuts.dedup();
    let mut out = Vec::new();
    let mut start = BigRational::zero();
    for cut in cuts {
        if cut > start {
            let components = component_count_at(dists.len(), &pairwise, &start);
            out.push(Plateau { start: start.clone(), end: cut.clone(), components });
        }
        start = cut;
    }
    Ok(out)
}

/// Longest plateau with between 2 and `m - 1` components.
pub fn longest_nontrivial_plateau(dists: &[ProbVector]) -> Result<Option<Plateau>, GraphError> {
    let m = dists.len();
    Ok(plateaus(dists)?
        .into_iter()
        .filter(|p| p.components >= 2 && p.components < m)
        .max_by(|a, b| (&a.end - &a.start).cmp(&(&b.end - &b.start))))
}

// ---------------------------------------------------------------------------
// Laplacian and spectrum
// ---------------------------------------------------------------------------

/// Dense square matrix of reals, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix { n, data: vec![0.0; n * n] }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, GraphError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(GraphError::NotSquare);
        }
        Ok(DenseMatrix { n, data: rows.concat() })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, x: f64) {
        self.data[i * self.n + j] = x;
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n.max(1)).map(<[f64]>::to_vec).collect()
    }

    fn off_diagonal_norm(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    acc += self.get(i, j).powi(2);
                }
            }
        }
        acc.sqrt()
    }

    fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// `L = D - A`.
pub fn laplacian(g: &EmdGraph) -> DenseMatrix {
    let mut l = DenseMatrix::zeros(g.vertex_count());
    for v in 0..g.vertex_count() {
        l.set(v, v, g.degree(v) as f64);
        for w in g.neighbors(v) {
            l.set(v, w, -1.0);
        }
    }
    l
}

/// Eigenvalues in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
}

impl Spectrum {
    /// Eigenvalues with absolute value below `tol`.
    pub fn zero_multiplicity(&self, tol: f64) -> usize {
        self.eigenvalues.iter().filter(|x| x.abs() < tol).count()
    }
}

pub const SYMMETRY_TOLERANCE: f64 = 1e-12;
pub const JACOBI_TOLERANCE: f64 = 1e-12;
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Eigenvalues below this count as zero when counting components.
pub const ZERO_EIGENVALUE_TOLERANCE: f64 = 1e-8;

/// All eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
///
/// Sweeps stop once the off-diagonal Frobenius norm falls below
/// `JACOBI_TOLERANCE * max(1, ||A||_F)`.
pub fn spectrum(matrix: &DenseMatrix) -> Result<Spectrum, GraphError> {
    let n = matrix.size();
    for i in 0..n {
        for j in i + 1..n {
            let gap = (matrix.get(i, j) - matrix.get(j, i)).abs();
            if gap > SYMMETRY_TOLERANCE {
                return Err(GraphError::NotSymmetric(gap));
            }
        }
    }
    let mut a = matrix.clone();
    let target = JACOBI_TOLERANCE * a.frobenius_norm().max(1.0);
    let mut off = a.off_diagonal_norm();
    let mut sweeps = 0;
    while off > target {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(GraphError::NoConvergence(off));
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, p, q);
            }
        }
        off = a.off_diagonal_norm();
        sweeps += 1;
    }
    let mut eigenvalues: Vec<f64> = (0..n).map(|i| a.get(i, i)).collect();
    eigenvalues.sort_by(f64::total_cmp);
    Ok(Spectrum { eigenvalues })
}

/// One Jacobi rotation annihilating `a[p][q]`.
fn rotate(a: &mut DenseMatrix, p: usize, q: usize) {
    let apq = a.get(p, q);
    if apq == 0.0 {
        return;
    }
    let (app, aqq) = (a.get(p, p), a.get(q, q));
    let theta = (aqq - app) / (2.0 * apq);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    for k in 0..a.size() {
        if k == p || k == q {
            continue;
        }
        let (akp, akq) = (a.get(k, p), a.get(k, q));
        let new_kp = c * akp - s * akq;
        let new_kq = s * akp + c * akq;
        a.set(k, p, new_kp);
        a.set(p, k, new_kp);
        a.set(k, q, new_kq);
        a.set(q, k, new_kq);
    }
    a.set(p, p, app - t * apq);
    a.set(q, q, aqq + t * apq);
    a.set(p, q, 0.0);
    a.set(q, p, 0.0);
}

/// Second-smallest Laplacian eigenvalue.
pub fn algebraic_connectivity(g: &EmdGraph) -> Result<f64, GraphError> {
    if g.vertex_count() < 2 {
        return Err(GraphError::TooFewVertices { vertices: g.vertex_count(), min: 2 });
    }
    Ok(spectrum(&laplacian(g))?.eigenvalues[1])
}

// ---------------------------------------------------------------------------
// Isoperimetric number and distances
// ---------------------------------------------------------------------------

pub const DEFAULT_ISOPERIMETRIC_CAP: usize = 25;

/// [`isoperimetric_number_capped`] with [`DEFAULT_ISOPERIMETRIC_CAP`].
pub fn isoperimetric_number(g: &EmdGraph) -> Result<BigRational, GraphError> {
    isoperimetric_number_capped(g, DEFAULT_ISOPERIMETRIC_CAP)
}

/// Minimum of `|edge boundary of X| / |X|` over `0 < |X| <= floor(m/2)`, by
/// enumerating subsets.
pub fn isoperimetric_number_capped(g: &EmdGraph, cap: usize) -> Result<BigRational, GraphError> {
    let m = g.vertex_count();
    if m > cap.min(63) {
        return Err(GraphError::EnumerationInfeasible { vertices: m, cap });
    }
    if m < 2 {
        return Err(GraphError::TooFewVertices { vertices: m, min: 2 });
    }
    let adj: Vec<u64> = (0..m)
        .map(|v| g.neighbors(v).fold(0u64, |acc, w| acc | (1 << w)))
        .collect();
    let half = (m / 2) as u32;
    // best boundary/size as a pair, compared by cross-multiplication
    let mut best: (u64, u64) = (u64::MAX, 1);
    for x in 1u64..(1u64 << m) {
        let size = x.count_ones();
        if size > half {
            continue;
        }
        let mut boundary = 0u64;
        let mut rest = x;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            boundary += (adj[v] & !x).count_ones() as u64;
            rest &= rest - 1;
        }
        if (boundary as u128) * (best.1 as u128) < (best.0 as u128) * (size as u128) {
            best = (boundary, size as u64);
        }
    }
    Ok(BigRational::new(best.0.into(), best.1.into()))
}

/// Hop distances from `src`; `None` for unreachable vertices.
pub fn bfs_distances(g: &EmdGraph, src: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.vertex_count()];
    dist[src] = Some(0);
    let mut queue = VecDeque::from([src]);
    while let Some(v) = queue.pop_front() {
        let d = dist[v].expect("queued vertices are labelled");
        for w in g.neighbors(v) {
            if dist[w].is_none() {
                dist[w] = Some(d + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Average hop distance over ordered pairs of distinct vertices.
pub fn mean_distance(g: &EmdGraph) -> Result<BigRational, GraphError> {
    let m = g.vertex_count();
    if m < 2 {
        return Err(GraphError::TooFewVertices { vertices: m, min: 2 });
    }
    let total = (0..m)
        .into_par_iter()
        .map(|v| {
            bfs_distances(g, v)
                .into_iter()
                .try_fold(0u64, |acc, d| d.map(|d| acc + d as u64))
        })
        .collect::<Option<Vec<u64>>>()
        .ok_or(GraphError::Disconnected)?
        .into_iter()
        .sum::<u64>();
    Ok(BigRational::new(total.into(), ((m * (m - 1)) as u64).into()))
}

/// `(lambda2 / 2, sqrt(lambda2 (2 d_max - lambda2)))`.
pub fn cheeger_bounds(lambda2: f64, d_max: usize) -> Result<(f64, f64), GraphError> {
    let top = 2.0 * d_max as f64;
    // eigensolver noise can push an exact 0 or 2 d_max slightly outside
    let slack = 1e-9 * top.max(1.0);
    if !(-slack..=top + slack).contains(&lambda2) {
        return Err(GraphError::OutOfRange { name: "lambda2", value: lambda2 });
    }
    let l = lambda2.clamp(0.0, top);
    Ok((l / 2.0, (l * (top - l)).sqrt()))
}

/// Lower `(2/lambda2 + (m-2)/2) / (m-1)` and upper
/// `m/(m-1) * (d_max - lambda2)/(4 lambda2) * ln(m-1)`.
pub fn mean_distance_bounds(lambda2: f64, d_max: usize, m: usize) -> Result<(f64, f64), GraphError> {
    if lambda2.is_nan() || lambda2 <= 0.0 {
        return Err(GraphError::OutOfRange { name: "lambda2", value: lambda2 });
    }
    if m < 2 {
        return Err(GraphError::TooFewVertices { vertices: m, min: 2 });
    }
    let mf = m as f64;
    let lower = (2.0 / lambda2 + (mf - 2.0) / 2.0) / (mf - 1.0);
    let upper = mf / (mf - 1.0) * ((d_max as f64 - lambda2) / (4.0 * lambda2)) * (mf - 1.0).ln();
    Ok((lower, upper))
}

// ---------------------------------------------------------------------------
// Export
// ---------------------------------------------------------------------------

/// Largest graph whose dense spectrum is computed for a report.
pub const SPECTRUM_CAP: usize = 500;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportMeta {
    pub tool: String,
    pub version: String,
    pub command: String,
}

/// Exact value with a rounded decimal rendering alongside.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactValue {
    pub exact: String,
    pub decimal: String,
}

impl ExactValue {
    pub fn new(x: &BigRational, digits: usize) -> Self {
        ExactValue { exact: render_fraction(x), decimal: render_decimal(x, digits) }
    }
}

/// Everything the analysis computes about one graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphReport {
    pub meta: ReportMeta,
    pub vertices: usize,
    pub labels: Vec<String>,
    pub threshold: Option<ExactValue>,
    pub edges: Vec<[usize; 2]>,
    pub components: Vec<Vec<usize>>,
    pub component_count: usize,
    pub max_degree: usize,
    pub spectrum: Option<Vec<f64>>,
    pub algebraic_connectivity: Option<f64>,
    pub isoperimetric_number: Option<ExactValue>,
    pub mean_distance: Option<ExactValue>,
    pub cheeger_bounds: Option<[f64; 2]>,
    pub mean_distance_bounds: Option<[f64; 2]>,
}

impl GraphReport {
    /// Floats are rounded to 6 significant digits, exact values rendered
    /// with `digits` decimals. Quantities that are undefined for the graph,
    /// or too large to compute, are `None`.
    pub fn build(
        g: &EmdGraph,
        command: &str,
        digits: usize,
        isoperimetric_cap: usize,
    ) -> Result<Self, GraphError> {
        let m = g.vertex_count();
        let components = connected_components(g);
        let spectrum = if m <= SPECTRUM_CAP { Some(spectrum(&laplacian(g))?.eigenvalues) } else { None };
        let lambda2 = spectrum.as_ref().and_then(|s| s.get(1).copied());
        let d_max = g.max_degree();
        let isoperimetric = if (2..=isoperimetric_cap).contains(&m) {
            Some(ExactValue::new(&isoperimetric_number_capped(g, isoperimetric_cap)?, digits))
        } else {
            None
        };
        let mean = match mean_distance(g) {
            Ok(rho) => Some(ExactValue::new(&rho, digits)),
            Err(GraphError::Disconnected | GraphError::TooFewVertices { .. }) => None,
            Err(e) => return Err(e),
        };
        let cheeger = lambda2
            .map(|l| cheeger_bounds(l, d_max))
            .transpose()?
            .map(|(lo, hi)| [round_sig(lo, 6), round_sig(hi, 6)]);
        let distance_bounds = lambda2
            .filter(|&l| l > ZERO_EIGENVALUE_TOLERANCE)
            .map(|l| mean_distance_bounds(l, d_max, m))
            .transpose()?
            .map(|(lo, hi)| [round_sig(lo, 6), round_sig(hi, 6)]);
        Ok(GraphReport {
            meta: ReportMeta {
                tool: env!("CARGO_PKG_NAME").to_string(),
                version: env!("CARGO_PKG_VERSION").to_string(),
                command: command.to_string(),
            },
            vertices: m,
            labels: g.labels().to_vec(),
            threshold: g.threshold().map(|t| ExactValue::new(t, digits)),
            edges: g.edges().into_iter().map(|(u, v)| [u, v]).collect(),
            component_count: components.len(),
            components,
            max_degree: d_max,
            spectrum: spectrum.map(|s| s.into_iter().map(|x| round_sig(x, 6)).collect()),
            algebraic_connectivity: lambda2.map(|l| round_sig(l, 6)),
            isoperimetric_number: isoperimetric,
            mean_distance: mean,
            cheeger_bounds: cheeger,
            mean_distance_bounds: distance_bounds,
        })
    }
}
