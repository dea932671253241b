//! Weighted undirected graphs and the matrices derived from them.
//!
//! A [`Graph`] stores only its edge list; self-loops are never stored; they
//! are added implicitly when the augmented matrices are built
//! (`Ã = A + I`, `D̃ = D + I`). Degrees are weighted row sums.

mod generate;
mod parse;
mod perturb;

pub use generate::{generate, GraphKind};
pub use parse::{from_edge_list, GraphSource};
pub use perturb::{drop_count, perturb, PerturbationPlan};

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Absolute tolerance under which a matrix counts as symmetric.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// An undirected weighted edge with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

/// Weighted undirected simple graph on nodes `0..n`.
///
/// Edges are kept sorted by `(u, v)` with `u < v` and no duplicates.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
}

impl Graph {
    /// Builds a graph from `(u, v, w)` triples in either orientation.
    ///
    /// Rejects self-loops, out-of-range ids, non-positive or non-finite
    /// weights and duplicate edges.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::validation("graph must have at least one node"));
        }
        let mut out = Vec::new();
        for (a, b, w) in edges {
            out.push(check_edge(n, a, b, w)?);
        }
        out.sort_by_key(|e| (e.u, e.v));
        if let Some(pair) = out
            .windows(2)
            .find(|p| (p[0].u, p[0].v) == (p[1].u, p[1].v))
        {
            return Err(Error::validation(format!(
                "duplicate edge ({}, {})",
                pair[0].u, pair[0].v
            )));
        }
        Ok(Graph { n, edges: out })
    }

    /// Graph with `n` nodes and no edges.
    pub fn empty(n: usize) -> Result<Self> {
        Graph::new(n, std::iter::empty())
    }

    pub(crate) fn from_sorted_unchecked(n: usize, edges: Vec<Edge>) -> Self {
        debug_assert!(edges
            .windows(2)
            .all(|p| (p[0].u, p[0].v) < (p[1].u, p[1].v)));
        Graph { n, edges }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Weighted degrees without the self-loop.
    pub fn degrees(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.n];
        for e in &self.edges {
            d[e.u] += e.w;
            d[e.v] += e.w;
        }
        d
    }

    /// `D̃` diagonal: weighted degree plus the unit self-loop. Every entry is at least 1.
    pub fn augmented_degrees(&self) -> Vec<f64> {
        self.degrees().into_iter().map(|d| d + 1.0).collect()
    }

    /// True when every node has the same weighted degree (within `1e-12`).
    pub fn is_regular(&self) -> bool {
        let d = self.degrees();
        let first = d[0];
        d.iter().all(|x| (x - first).abs() <= 1e-12)
    }

    /// Dense adjacency matrix `A` (no self-loops).
    pub fn adjacency(&self) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(self.n, self.n);
        for e in &self.edges {
            a[(e.u, e.v)] = e.w;
            a[(e.v, e.u)] = e.w;
        }
        a
    }

    /// The augmented normalized Laplacian `Δ̃ = I − D̃^{-1/2} Ã D̃^{-1/2}`.
    ///
    /// Diagonal entries are `1 − 1/d̃_i`; an edge `(i, j)` contributes
    /// `−w_ij / sqrt(d̃_i d̃_j)`.
    pub fn augmented_normalized_laplacian(&self) -> DenseSymMatrix {
        let deg = self.augmented_degrees();
        let mut m = DMatrix::zeros(self.n, self.n);
        for (i, d) in deg.iter().enumerate() {
            m[(i, i)] = 1.0 - 1.0 / d;
        }
        for e in &self.edges {
            let v = -e.w / (deg[e.u] * deg[e.v]).sqrt();
            m[(e.u, e.v)] = v;
            m[(e.v, e.u)] = v;
        }
        DenseSymMatrix(m)
    }

    /// Propagation matrix `P = I − Δ̃`.
    pub fn propagation_matrix(&self) -> DenseSymMatrix {
        let lap = self.augmented_normalized_laplacian();
        let n = self.n;
        DenseSymMatrix(DMatrix::identity(n, n) - lap.0)
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut nbrs = vec![Vec::new(); self.n];
        for e in &self.edges {
            nbrs[e.u].push(e.v);
            nbrs[e.v].push(e.u);
        }
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut stack = vec![start];
            while let Some(x) = stack.pop() {
                for &y in &nbrs[x] {
                    if !seen[y] {
                        seen[y] = true;
                        comp.push(y);
                        stack.push(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Serializes as an edge-list document readable by [`from_edge_list`].
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("# nodes {}\n", self.n);
        for e in &self.edges {
            s.push_str(&format!("{} {} {:e}\n", e.u, e.v, e.w));
        }
        s
    }
}

fn check_edge(n: usize, a: usize, b: usize, w: f64) -> Result<Edge> {
    if a == b {
        return Err(Error::validation(format!(
            "self-loop on node {a}; self-loops are added by augmentation"
        )));
    }
    if a >= n || b >= n {
        return Err(Error::validation(format!(
            "edge ({a}, {b}) out of range for {n} nodes"
        )));
    }
    if !(w.is_finite() && w > 0.0) {
        return Err(Error::validation(format!(
            "edge ({a}, {b}) has non-positive or non-finite weight {w}"
        )));
    }
    let (u, v) = if a < b { (a, b) } else { (b, a) };
    Ok(Edge { u, v, w })
}

/// Dense symmetric matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSymMatrix(DMatrix<f64>);

impl DenseSymMatrix {
    /// Validates squareness, finiteness and symmetry (absolute tolerance [`SYMMETRY_TOL`]).
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::validation(format!(
                "matrix is {}x{}, expected square",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.iter().any(|x| !x.is_finite()) {
            return Err(Error::validation("matrix has non-finite entries"));
        }
        let n = m.nrows();
        for i in 0..n {
            for j in (i + 1)..n {
                if (m[(i, j)] - m[(j, i)]).abs() > SYMMETRY_TOL {
                    return Err(Error::validation(format!(
                        "matrix is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(DenseSymMatrix(m))
    }

    /// Wraps `m` after replacing it with `(m + mᵀ)/2`.
    pub(crate) fn symmetrized(m: DMatrix<f64>) -> Self {
        let t = m.transpose();
        DenseSymMatrix((m + t) * 0.5)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }
}
