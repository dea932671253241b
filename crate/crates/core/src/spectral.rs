//! Symmetric eigendecomposition, contraction factors and polynomial filters.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::graph::DenseSymMatrix;

/// Relative factor of the default zero tolerance: `1e-8 · max(1, |λ_max|)`.
pub const DEFAULT_ZERO_TOL_FACTOR: f64 = 1e-8;

/// Ascending eigenvalues with aligned orthonormal eigenvectors (columns).
#[derive(Debug, Clone)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<f64>,
    zero_tol: f64,
}

impl Spectrum {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    pub fn zero_tol(&self) -> f64 {
        self.zero_tol
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_zero(&self, lambda: f64) -> bool {
        lambda.abs() <= self.zero_tol
    }

    pub fn kernel_dim(&self) -> usize {
        self.eigenvalues
            .iter()
            .filter(|l| self.is_zero(**l))
            .count()
    }

    /// Eigenvalues classified nonzero, ascending.
    pub fn nonzero(&self) -> impl Iterator<Item = f64> + '_ {
        self.eigenvalues
            .iter()
            .copied()
            .filter(|l| !self.is_zero(*l))
    }

    /// Smallest eigenvalue classified nonzero.
    pub fn min_nonzero(&self) -> Option<f64> {
        self.nonzero().next()
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// `V · diag(f(λ)) · Vᵀ`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> DenseSymMatrix {
        let v = &self.eigenvectors;
        let d = DVector::from_iterator(self.dim(), self.eigenvalues.iter().map(|&l| f(l)));
        let mut scaled = v.clone();
        for (j, mut col) in scaled.column_iter_mut().enumerate() {
            col *= d[j];
        }
        DenseSymMatrix::symmetrized(scaled * v.transpose())
    }

    /// `V · diag(λ) · Vᵀ`.
    pub fn reconstruct(&self) -> DenseSymMatrix {
        self.map(|l| l)
    }
}

/// Full eigendecomposition of a symmetric matrix.
///
/// `zero_tol = None` selects `1e-8 · max(1, |λ_max|)`.
pub fn eigendecompose(m: &DenseSymMatrix, zero_tol: Option<f64>) -> Result<Spectrum> {
    // re-check: a DenseSymMatrix may wrap a matrix built by arithmetic
    let m = DenseSymMatrix::new(m.as_matrix().clone())?;
    if let Some(t) = zero_tol {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::validation(format!(
                "zero tolerance {t} must be >= 0"
            )));
        }
    }
    let n = m.dim();
    if n == 0 {
        return Err(Error::validation("cannot decompose an empty matrix"));
    }
    let eig = SymmetricEigen::try_new(m.into_matrix(), f64::EPSILON, 1000 * n.max(10))
        .ok_or_else(|| Error::Numeric("symmetric eigensolver did not converge".into()))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let eigenvectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    if eigenvalues.iter().any(|l| !l.is_finite()) {
        return Err(Error::Numeric("non-finite eigenvalue".into()));
    }

    let lmax = eigenvalues.iter().fold(0.0f64, |a, l| a.max(l.abs()));
    let zero_tol = zero_tol.unwrap_or(DEFAULT_ZERO_TOL_FACTOR * lmax.max(1.0));
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
        zero_tol,
    })
}

/// Contraction factors of a Laplacian spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContractionFactors {
    /// Smallest eigenvalue classified nonzero.
    pub lambda_min_nonzero: f64,
    /// `(1 − λ)²` at the smallest nonzero eigenvalue.
    pub lambda_bar_min: f64,
    /// `max (1 − λ_i)²` over all nonzero eigenvalues.
    pub lambda_bar_safe: f64,
    pub kernel_dim: usize,
}

pub fn contraction_factors(s: &Spectrum) -> Result<ContractionFactors> {
    let lambda = s.min_nonzero().ok_or(Error::DegenerateSpectrum)?;
    let safe = s.nonzero().map(|l| (1.0 - l).powi(2)).fold(0.0, f64::max);
    Ok(ContractionFactors {
        lambda_min_nonzero: lambda,
        lambda_bar_min: (1.0 - lambda).powi(2),
        lambda_bar_safe: safe,
        kernel_dim: s.kernel_dim(),
    })
}

/// Polynomial `a_0 + a_1 x + … + a_k x^k`, applied to a Laplacian as a spectral filter.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialFilter {
    coefficients: Vec<f64>,
}

impl PolynomialFilter {
    pub fn new(coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::validation("filter needs at least one coefficient"));
        }
        if coefficients.iter().any(|c| !c.is_finite()) {
            return Err(Error::validation("filter coefficients must be finite"));
        }
        Ok(PolynomialFilter { coefficients })
    }

    /// `1 − x`, i.e. the plain GCN propagation `P = I − Δ̃`.
    pub fn propagation() -> Self {
        PolynomialFilter {
            coefficients: vec![1.0, -1.0],
        }
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Horner evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        horner(&self.coefficients, x)
    }

    /// `V · diag(P(λ_i)) · Vᵀ`.
    pub fn eval_matrix(&self, s: &Spectrum) -> DenseSymMatrix {
        s.map(|l| self.eval(l))
    }

    pub fn derivative(&self) -> Option<PolynomialFilter> {
        let d = derivative(&self.coefficients);
        if d.is_empty() {
            None
        } else {
            Some(PolynomialFilter { coefficients: d })
        }
    }

    /// Decides whether `P` is non-increasing on `[lo, hi]`.
    ///
    /// `P′` is evaluated on a uniform grid of 10 001 points and at every real
    /// root of `P″` inside the interval (the interior maxima of `P′`).
    pub fn check_monotone_decreasing(&self, lo: f64, hi: f64) -> Result<Monotonicity> {
        if lo >= hi || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::validation(format!("invalid interval [{lo}, {hi}]")));
        }
        let d1 = derivative(&self.coefficients);
        if d1.is_empty() {
            return Ok(Monotonicity {
                decreasing: true,
                witness: None,
            });
        }
        let d2 = derivative(&d1);
        let mut points: Vec<f64> = (0..=GRID_STEPS)
            .map(|i| lo + (hi - lo) * i as f64 / GRID_STEPS as f64)
            .collect();
        points.extend(
            real_roots(&d2)
                .into_iter()
                .filter(|r| (lo..=hi).contains(r)),
        );

        let scale = lo.abs().max(hi.abs()).max(1.0);
        let tol = 1e-12
            * d1.iter()
                .enumerate()
                .map(|(j, c)| c.abs() * scale.powi(j as i32))
                .sum::<f64>();
        let worst = points
            .into_iter()
            .map(|x| (x, horner(&d1, x)))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("grid is nonempty");
        if worst.1 > tol {
            Ok(Monotonicity {
                decreasing: false,
                witness: Some(worst.0),
            })
        } else {
            Ok(Monotonicity {
                decreasing: true,
                witness: None,
            })
        }
    }
}

const GRID_STEPS: usize = 10_000;

/// Outcome of a monotonicity check; `witness` is a point with `P′(x) > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Monotonicity {
    pub decreasing: bool,
    pub witness: Option<f64>,
}

/// Contraction of a filter over a Laplacian spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterContraction {
    /// `P(λ)²` at the smallest nonzero eigenvalue.
    pub at_min: f64,
    /// `max P(λ_i)²` over all nonzero eigenvalues.
    pub safe: f64,
}

pub fn filter_contraction(f: &PolynomialFilter, s: &Spectrum) -> Result<FilterContraction> {
    let lambda = s.min_nonzero().ok_or(Error::DegenerateSpectrum)?;
    let safe = s.nonzero().map(|l| f.eval(l).powi(2)).fold(0.0, f64::max);
    Ok(FilterContraction {
        at_min: f.eval(lambda).powi(2),
        safe,
    })
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, a| acc * x + a)
}

fn derivative(c: &[f64]) -> Vec<f64> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(j, a)| j as f64 * a)
        .collect()
}

/// Real roots of a polynomial via companion-matrix eigenvalues, polished by Newton steps.
fn real_roots(c: &[f64]) -> Vec<f64> {
    let mut c = c.to_vec();
    let lead_scale = c.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    while c.last().is_some_and(|x| x.abs() <= 1e-14 * lead_scale) {
        c.pop();
    }
    let k = c.len().saturating_sub(1);
    match k {
        0 => vec![],
        1 => vec![-c[0] / c[1]],
        _ => {
            let lead = c[k];
            let mut comp = DMatrix::zeros(k, k);
            for i in 1..k {
                comp[(i, i - 1)] = 1.0;
            }
            for i in 0..k {
                comp[(i, k - 1)] = -c[i] / lead;
            }
            let d = derivative(&c);
            comp.complex_eigenvalues()
                .iter()
                .filter(|z| z.im.abs() <= 1e-8 * (1.0 + z.re.abs()))
                .map(|z| {
                    let mut x = z.re;
                    for _ in 0..3 {
                        let dx = horner(&d, x);
                        if dx != 0.0 {
                            x -= horner(&c, x) / dx;
                        }
                    }
                    x
                })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Graph, GraphKind};

    fn spec_of(g: &Graph) -> Spectrum {
        eigendecompose(&g.augmented_normalized_laplacian(), None).unwrap()
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn known_spectra() {
        let k2 = generate(GraphKind::Path, 2, 0).unwrap();
        assert!(close(spec_of(&k2).eigenvalues(), &[0.0, 1.0], 1e-12));
        let p3 = generate(GraphKind::Path, 3, 0).unwrap();
        assert!(close(
            spec_of(&p3).eigenvalues(),
            &[0.0, 0.5, 7.0 / 6.0],
            1e-12
        ));
        let c4 = generate(GraphKind::Ring, 4, 0).unwrap();
        let want = [0.0, 2.0 / 3.0, 2.0 / 3.0, 4.0 / 3.0];
        assert!(close(spec_of(&c4).eigenvalues(), &want, 1e-12));
    }

    #[test]
    fn decomposition_invariants() {
        let g = generate(GraphKind::ErdosRenyi { p: 0.2 }, 40, 5).unwrap();
        let lap = g.augmented_normalized_laplacian();
        let s = eigendecompose(&lap, None).unwrap();
        assert!(s.eigenvalues().windows(2).all(|w| w[0] <= w[1]));
        let rec = s.reconstruct();
        let err = (rec.as_matrix() - lap.as_matrix()).norm() / lap.as_matrix().norm();
        assert!(err < 1e-9);
        let v = s.eigenvectors();
        let gram = v.transpose() * v;
        assert!((gram - DMatrix::identity(40, 40)).amax() < 1e-10);
    }

    #[test]
    fn rejects_negative_zero_tol() {
        let asym = DenseSymMatrix::symmetrized(DMatrix::identity(2, 2));
        assert!(eigendecompose(&asym, Some(-1.0)).is_err());
    }

    #[test]
    fn contraction_examples() {
        let k2 = spec_of(&generate(GraphKind::Path, 2, 0).unwrap());
        let c = contraction_factors(&k2).unwrap();
        assert!((c.lambda_min_nonzero - 1.0).abs() < 1e-12);
        assert!(c.lambda_bar_min < 1e-24 && c.lambda_bar_safe < 1e-24);
        assert_eq!(c.kernel_dim, 1);

        let p3 = spec_of(&generate(GraphKind::Path, 3, 0).unwrap());
        let c = contraction_factors(&p3).unwrap();
        assert!((c.lambda_min_nonzero - 0.5).abs() < 1e-12);
        assert!((c.lambda_bar_min - 0.25).abs() < 1e-12);
        assert!((c.lambda_bar_safe - 0.25).abs() < 1e-12);

        let two = Graph::new(4, [(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        let c = contraction_factors(&spec_of(&two)).unwrap();
        assert_eq!(c.kernel_dim, 2);
        assert!((c.lambda_min_nonzero - 1.0).abs() < 1e-12);

        let empty = spec_of(&Graph::empty(3).unwrap());
        assert!(matches!(
            contraction_factors(&empty),
            Err(Error::DegenerateSpectrum)
        ));
    }

    #[test]
    fn scalar_filter_examples() {
        let f = PolynomialFilter::new(vec![1.0, -1.0]).unwrap();
        assert_eq!(f.eval(0.5), 0.5);
        assert_eq!(PolynomialFilter::new(vec![1.0]).unwrap().eval(123.0), 1.0);
        assert_eq!(
            PolynomialFilter::new(vec![0.0, 0.0, 1.0])
                .unwrap()
                .eval(1.5),
            2.25
        );
        assert!(PolynomialFilter::new(vec![]).is_err());
        assert!(PolynomialFilter::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn matrix_filter_examples() {
        let k2 = generate(GraphKind::Path, 2, 0).unwrap();
        let p = PolynomialFilter::propagation().eval_matrix(&spec_of(&k2));
        assert!((p.as_matrix() - k2.propagation_matrix().as_matrix()).amax() < 1e-12);

        let k3 = generate(GraphKind::Complete, 3, 0).unwrap();
        let s = spec_of(&k3);
        let id = PolynomialFilter::new(vec![1.0]).unwrap().eval_matrix(&s);
        assert!((id.as_matrix() - DMatrix::identity(3, 3)).amax() < 1e-12);
        let x = PolynomialFilter::new(vec![0.0, 1.0])
            .unwrap()
            .eval_matrix(&s);
        let lap = k3.augmented_normalized_laplacian();
        assert!((x.as_matrix() - lap.as_matrix()).amax() < 1e-12);
    }

    #[test]
    fn monotonicity_examples() {
        let dec = PolynomialFilter::propagation()
            .check_monotone_decreasing(0.0, 2.0)
            .unwrap();
        assert!(dec.decreasing && dec.witness.is_none());

        let inc = PolynomialFilter::new(vec![0.0, 1.0]).unwrap();
        let m = inc.check_monotone_decreasing(0.0, 2.0).unwrap();
        assert!(!m.decreasing);
        assert!(m.witness.is_some());

        let bump = PolynomialFilter::new(vec![0.0, 2.0, -1.0]).unwrap();
        let m = bump.check_monotone_decreasing(0.0, 2.0).unwrap();
        let w = m.witness.unwrap();
        assert!(!m.decreasing && (0.0..1.0).contains(&w));

        let constant = PolynomialFilter::new(vec![0.5]).unwrap();
        assert!(
            constant
                .check_monotone_decreasing(0.0, 2.0)
                .unwrap()
                .decreasing
        );
        assert!(constant.check_monotone_decreasing(1.0, 1.0).is_err());
    }

    #[test]
    fn narrow_bump_between_grid_points_is_found() {
        // P'(x) = -(x - c)^2 + 1e-10 is positive only within 1e-5 of c,
        // narrower than the grid spacing; the P'' root at c catches it.
        let c: f64 = 0.123_456_7;
        let eps = 1e-10;
        // P(x) = -(x-c)^3/3 + eps x
        let coeffs = vec![c.powi(3) / 3.0, -c * c + eps, c, -1.0 / 3.0];
        let f = PolynomialFilter::new(coeffs).unwrap();
        let m = f.check_monotone_decreasing(0.0, 1.0).unwrap();
        assert!(!m.decreasing);
        assert!((m.witness.unwrap() - c).abs() < 1e-6);
    }

    #[test]
    fn roots_of_cubic() {
        // (x-1)(x-2)(x+3) = x^3 - 7x + 6
        let mut r = real_roots(&[6.0, -7.0, 0.0, 1.0]);
        r.sort_by(f64::total_cmp);
        assert!(close(&r, &[-3.0, 1.0, 2.0], 1e-10));
        assert!(real_roots(&[1.0, 0.0, 1.0]).is_empty());
    }

    #[test]
    fn filter_contraction_examples() {
        let p3 = spec_of(&generate(GraphKind::Path, 3, 0).unwrap());
        let c = filter_contraction(&PolynomialFilter::propagation(), &p3).unwrap();
        assert!((c.at_min - 0.25).abs() < 1e-12 && (c.safe - 0.25).abs() < 1e-12);
        let k2 = spec_of(&generate(GraphKind::Path, 2, 0).unwrap());
        let c = filter_contraction(&PolynomialFilter::propagation(), &k2).unwrap();
        assert!(c.at_min < 1e-24 && c.safe < 1e-24);
        let c = filter_contraction(&PolynomialFilter::new(vec![0.5]).unwrap(), &p3).unwrap();
        assert_eq!((c.at_min, c.safe), (0.25, 0.25));
    }
}
