//! Dirichlet energy of node embeddings.
//!
//! Two routes compute the same quantity: the quadratic form
//! `tr(Xᵀ Δ̃ X)` and the edge sum
//! `Σ_(i,j) w_ij ‖x_i/√d̃_i − x_j/√d̃_j‖²` with augmented weighted degrees.

use nalgebra::DMatrix;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::graph::{DenseSymMatrix, Graph};
use crate::seed;

/// `N × C` matrix of node embeddings (one row per node) with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding(DMatrix<f64>);

impl Embedding {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if m.iter().any(|x| !x.is_finite()) {
            return Err(Error::validation("embedding has non-finite entries"));
        }
        Ok(Embedding(m))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Embedding(DMatrix::zeros(rows, cols))
    }

    /// Single-channel embedding.
    pub fn column(values: &[f64]) -> Result<Self> {
        Embedding::new(DMatrix::from_column_slice(values.len(), 1, values))
    }

    /// Standard Gaussian entries drawn from `seed`, filled row by row.
    pub fn gaussian(rows: usize, cols: usize, seed: u64) -> Self {
        let mut rng = seed::rng(seed);
        let mut m = DMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = StandardNormal.sample(&mut rng);
            }
        }
        Embedding(m)
    }

    /// Parses comma-separated rows, one node per line. Blank lines and `#`
    /// comments are skipped.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut values = Vec::new();
        let mut cols = None;
        let mut rows = 0;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let row: Vec<f64> = line
                .split(',')
                .map(|f| {
                    f.trim().parse::<f64>().map_err(|e| Error::Parse {
                        line: idx + 1,
                        message: format!("bad number {:?}: {e}", f.trim()),
                    })
                })
                .collect::<Result<_>>()?;
            match cols {
                None => cols = Some(row.len()),
                Some(c) if c != row.len() => {
                    return Err(Error::Parse {
                        line: idx + 1,
                        message: format!("expected {c} columns, found {}", row.len()),
                    })
                }
                _ => {}
            }
            values.extend(row);
            rows += 1;
        }
        let cols = cols.ok_or_else(|| Error::validation("signal file has no rows"))?;
        Embedding::new(DMatrix::from_row_slice(rows, cols, &values))
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }

    /// Frobenius norm squared, `tr(XᵀX)`.
    pub fn norm_squared(&self) -> f64 {
        self.0.norm_squared()
    }

    pub fn scaled(&self, c: f64) -> Self {
        Embedding(&self.0 * c)
    }

    /// Column concatenation `[self | other]`.
    pub fn hstack(&self, other: &Embedding) -> Result<Self> {
        if self.rows() != other.rows() {
            return Err(Error::validation("hstack: row counts differ"));
        }
        let (n, a, b) = (self.rows(), self.cols(), other.cols());
        Ok(Embedding(DMatrix::from_fn(n, a + b, |i, j| {
            if j < a {
                self.0[(i, j)]
            } else {
                other.0[(i, j - a)]
            }
        })))
    }

    /// Order-sensitive checksum of the raw bits; identical embeddings give identical sums.
    pub fn checksum(&self) -> u64 {
        self.0.iter().fold(0xcbf2_9ce4_8422_2325u64, |h, x| {
            seed::splitmix64(h ^ x.to_bits())
        })
    }
}

/// `tr(Xᵀ Δ̃ X)`.
///
/// Negative round-off within `1e-12 · max(1, 2‖X‖²)` is clamped to zero; a
/// larger negative value means `lap` is not positive semi-definite.
pub fn dirichlet_energy(x: &Embedding, lap: &DenseSymMatrix) -> Result<f64> {
    if x.rows() != lap.dim() {
        return Err(Error::validation(format!(
            "embedding has {} rows but the Laplacian is {}x{}",
            x.rows(),
            lap.dim(),
            lap.dim()
        )));
    }
    let lx = lap.as_matrix() * x.as_matrix();
    let e = x.as_matrix().dot(&lx);
    clamp_energy(e, x)
}

fn clamp_energy(e: f64, x: &Embedding) -> Result<f64> {
    if e >= 0.0 {
        return Ok(e);
    }
    let slack = 1e-12 * (2.0 * x.norm_squared()).max(1.0);
    if e >= -slack {
        log::debug!("clamped negative Dirichlet energy {e:e} to zero");
        Ok(0.0)
    } else {
        Err(Error::Numeric(format!(
            "negative Dirichlet energy {e:e}; Laplacian is not positive semi-definite"
        )))
    }
}

/// Edge-sum form with augmented weighted degrees `d̃_i = 1 + d_i`.
pub fn dirichlet_energy_edge_sum(x: &Embedding, g: &Graph) -> Result<f64> {
    if x.rows() != g.node_count() {
        return Err(Error::validation(format!(
            "embedding has {} rows but the graph has {} nodes",
            x.rows(),
            g.node_count()
        )));
    }
    let inv_sqrt: Vec<f64> = g
        .augmented_degrees()
        .iter()
        .map(|d| 1.0 / d.sqrt())
        .collect();
    let m = x.as_matrix();
    let mut total = 0.0;
    for e in g.edges() {
        let mut acc = 0.0;
        for c in 0..m.ncols() {
            let diff = m[(e.u, c)] * inv_sqrt[e.u] - m[(e.v, c)] * inv_sqrt[e.v];
            acc += diff * diff;
        }
        total += e.w * acc;
    }
    Ok(total)
}

/// `tr(Xᵀ Δ̃ X) / tr(XᵀX)`. Diagnostic only; scale invariant.
pub fn rayleigh_quotient(x: &Embedding, lap: &DenseSymMatrix) -> Result<f64> {
    let norm = x.norm_squared();
    if norm <= 0.0 {
        return Err(Error::validation("Rayleigh quotient of a zero embedding"));
    }
    Ok(dirichlet_energy(x, lap)? / norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GraphKind};
    use proptest::prelude::*;

    fn k2() -> Graph {
        generate(GraphKind::Path, 2, 0).unwrap()
    }

    fn p3() -> Graph {
        generate(GraphKind::Path, 3, 0).unwrap()
    }

    #[test]
    fn trace_form_examples() {
        let lap = k2().augmented_normalized_laplacian();
        let x = Embedding::column(&[1.0, 0.0]).unwrap();
        assert_eq!(dirichlet_energy(&x, &lap).unwrap(), 0.5);

        let lap = p3().augmented_normalized_laplacian();
        let kernel = Embedding::column(&[2f64.sqrt(), 3f64.sqrt(), 2f64.sqrt()]).unwrap();
        assert!(dirichlet_energy(&kernel, &lap).unwrap() < 1e-15);
        assert_eq!(
            dirichlet_energy(&Embedding::zeros(3, 4), &lap).unwrap(),
            0.0
        );
    }

    #[test]
    fn edge_sum_examples() {
        let g = k2();
        let x = Embedding::column(&[1.0, 0.0]).unwrap();
        assert!((dirichlet_energy_edge_sum(&x, &g).unwrap() - 0.5).abs() < 1e-15);
        let x = Embedding::column(&[1.0, -1.0]).unwrap();
        assert!((dirichlet_energy_edge_sum(&x, &g).unwrap() - 2.0).abs() < 1e-15);
        let single = Graph::empty(1).unwrap();
        let x = Embedding::column(&[3.0]).unwrap();
        assert_eq!(dirichlet_energy_edge_sum(&x, &single).unwrap(), 0.0);
    }

    #[test]
    fn rayleigh_examples() {
        let lap = p3().augmented_normalized_laplacian();
        let kernel = Embedding::column(&[2f64.sqrt(), 3f64.sqrt(), 2f64.sqrt()]).unwrap();
        assert!(rayleigh_quotient(&kernel, &lap).unwrap() < 1e-15);

        let lap = k2().augmented_normalized_laplacian();
        let h = 0.5f64.sqrt();
        let top = Embedding::column(&[h, -h]).unwrap();
        assert!((rayleigh_quotient(&top, &lap).unwrap() - 1.0).abs() < 1e-15);
        assert!(rayleigh_quotient(&Embedding::zeros(2, 1), &lap).is_err());
    }

    #[test]
    fn dimension_mismatch() {
        let g = p3();
        let x = Embedding::zeros(2, 1);
        assert!(dirichlet_energy(&x, &g.augmented_normalized_laplacian()).is_err());
        assert!(dirichlet_energy_edge_sum(&x, &g).is_err());
    }

    #[test]
    fn non_psd_matrix_is_numeric_error() {
        let neg = DenseSymMatrix::new(DMatrix::from_element(1, 1, -1.0)).unwrap();
        let x = Embedding::column(&[1.0]).unwrap();
        assert!(matches!(dirichlet_energy(&x, &neg), Err(Error::Numeric(_))));
        let tiny = DenseSymMatrix::new(DMatrix::from_element(1, 1, -1e-14)).unwrap();
        assert_eq!(dirichlet_energy(&x, &tiny).unwrap(), 0.0);
    }

    #[test]
    fn csv_parsing() {
        let x = Embedding::from_csv("# x\n1, 2\n3,4 # tail\n\n5,6\n").unwrap();
        assert_eq!((x.rows(), x.cols()), (3, 2));
        assert_eq!(x.as_matrix()[(1, 1)], 4.0);
        assert!(matches!(
            Embedding::from_csv("1,2\n3\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(Embedding::from_csv("1,x\n").is_err());
        assert!(Embedding::from_csv("1,inf\n").is_err());
        assert!(Embedding::from_csv("# nothing\n").is_err());
    }

    #[test]
    fn hstack_and_checksum() {
        let a = Embedding::gaussian(4, 2, 1);
        let b = Embedding::gaussian(4, 3, 2);
        let ab = a.hstack(&b).unwrap();
        assert_eq!(ab.cols(), 5);
        assert_eq!(ab.as_matrix()[(3, 4)], b.as_matrix()[(3, 2)]);
        assert_eq!(a.checksum(), Embedding::gaussian(4, 2, 1).checksum());
        assert_ne!(a.checksum(), Embedding::gaussian(4, 2, 3).checksum());
        assert!(a.hstack(&Embedding::zeros(3, 1)).is_err());
    }

    proptest! {
        #[test]
        fn scale_and_additivity(seed in any::<u64>(), n in 2usize..25, c in 0.1f64..10.0) {
            let g = generate(GraphKind::ErdosRenyi { p: 0.3 }, n, seed).unwrap();
            let lap = g.augmented_normalized_laplacian();
            let x1 = Embedding::gaussian(n, 2, seed ^ 1);
            let x2 = Embedding::gaussian(n, 3, seed ^ 2);
            let e1 = dirichlet_energy(&x1, &lap).unwrap();
            let e2 = dirichlet_energy(&x2, &lap).unwrap();
            let e12 = dirichlet_energy(&x1.hstack(&x2).unwrap(), &lap).unwrap();
            prop_assert!((e12 - e1 - e2).abs() <= 1e-10 * e12.max(1e-300) + 1e-15);
            let ec = dirichlet_energy(&x1.scaled(c), &lap).unwrap();
            prop_assert!((ec - c * c * e1).abs() <= 1e-10 * (c * c * e1).max(1e-300) + 1e-15);
            prop_assert!(e1 >= 0.0);
        }
    }
}
