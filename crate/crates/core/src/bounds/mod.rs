//! Checks of the energy-contraction inequalities on concrete instances.
//!
//! Every check produces a [`BoundReport`]. Where the contraction factor
//! depends on the spectrum, two right-hand sides are reported: the one
//! built from the smallest nonzero eigenvalue (`rhs_min`) and the one
//! built from the worst nonzero eigenvalue (`rhs_safe`). Only the safe bound
//! is guaranteed in exact arithmetic; misses of the smallest-eigenvalue bound are recorded as
//! findings, never treated as failures.

pub mod suite;

use std::fmt;

use crate::energy::{dirichlet_energy, Embedding};
use crate::error::{Error, Result};
use crate::gcn::{
    apply_activation, layer_forward, run_network, top_singular_value, Activation, LayerSpec,
    Trajectory,
};
use crate::graph::{DenseSymMatrix, Graph};
use crate::spectral::{
    contraction_factors, eigendecompose, filter_contraction, PolynomialFilter, Spectrum,
};

/// Relative slack of every inequality check.
pub const REL_TOL: f64 = 1e-9;
/// Absolute slack of every inequality check.
pub const ABS_TOL: f64 = 1e-12;
/// Relative slack of the multi-layer decay checks.
pub const DECAY_REL_TOL: f64 = 1e-6;

/// `lhs ≤ rhs·(1 + rel) + 1e-12`.
pub fn within(lhs: f64, rhs: f64, rel: f64) -> bool {
    lhs <= rhs * (1.0 + rel) + ABS_TOL
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Statement {
    /// `E(PX) ≤ (1 − λ)² E(X)`
    Propagation,
    /// `E(XW) ≤ ‖W‖₂² E(X)`
    Weights,
    /// `E(σ(X)) ≤ E(X)`
    Activation,
    /// `E(f_l(X)) ≤ s_l λ̄ E(X)`
    Layer,
    /// `E(X^(L)) ≤ (s λ̄)^L E(X^(0))`
    Decay,
    /// `E(P_l(Δ̃)X) ≤ P_l(λ)² E(X)`
    Filter,
    /// Exponential decay under per-layer polynomial filters.
    FilterDecay,
}

impl Statement {
    pub const ALL: [Statement; 7] = [
        Statement::Propagation,
        Statement::Weights,
        Statement::Activation,
        Statement::Layer,
        Statement::Decay,
        Statement::Filter,
        Statement::FilterDecay,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            Statement::Propagation => "propagation",
            Statement::Weights => "weights",
            Statement::Activation => "activation",
            Statement::Layer => "layer",
            Statement::Decay => "decay",
            Statement::Filter => "filter",
            Statement::FilterDecay => "filter-decay",
        }
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// One inequality instance `lhs ≤ rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub statement: Statement,
    pub lhs: f64,
    pub rhs_min: f64,
    pub rhs_safe: Option<f64>,
    /// `rhs − lhs`, using the safe right-hand side when there is one.
    pub margin: f64,
    pub holds_min: bool,
    pub holds_safe: Option<bool>,
    /// The input energy was zero, so the bound holds trivially.
    pub vacuous: bool,
    /// False for informational checks that theory does not guarantee
    /// (e.g. tanh on a non-regular graph).
    pub asserted: bool,
    pub context: String,
}

impl BoundReport {
    fn build(
        statement: Statement,
        lhs: f64,
        rhs_min: f64,
        rhs_safe: Option<f64>,
        vacuous: bool,
        rel: f64,
        context: String,
    ) -> Self {
        BoundReport {
            statement,
            lhs,
            rhs_min,
            rhs_safe,
            margin: rhs_safe.unwrap_or(rhs_min) - lhs,
            holds_min: within(lhs, rhs_min, rel),
            holds_safe: rhs_safe.map(|r| within(lhs, r, rel)),
            vacuous,
            asserted: true,
            context,
        }
    }

    fn informational(mut self) -> Self {
        self.asserted = false;
        self
    }

    /// Whether the guaranteed bound holds (the safe one when present).
    pub fn holds(&self) -> bool {
        self.holds_safe.unwrap_or(self.holds_min)
    }

    /// False only for asserted checks that fail.
    pub fn passes(&self) -> bool {
        !self.asserted || self.holds()
    }

    /// The safe bound holds but the smallest-eigenvalue bound does not.
    pub fn min_bound_violation(&self) -> bool {
        self.holds_safe == Some(true) && !self.holds_min
    }

    /// `margin / max(|rhs|, ABS_TOL)`.
    pub fn relative_margin(&self) -> f64 {
        let rhs = self.rhs_safe.unwrap_or(self.rhs_min);
        self.margin / rhs.abs().max(ABS_TOL)
    }
}

fn laplacian_and_spectrum(g: &Graph) -> Result<(DenseSymMatrix, Spectrum)> {
    let lap = g.augmented_normalized_laplacian();
    let s = eigendecompose(&lap, None)?;
    Ok((lap, s))
}

fn describe(g: &Graph) -> String {
    format!("n={} m={}", g.node_count(), g.edge_count())
}

/// `E(PX) ≤ (1 − λ)² E(X)` with `P = I − Δ̃`.
pub fn verify_propagation(g: &Graph, x: &Embedding) -> Result<BoundReport> {
    let (lap, s) = laplacian_and_spectrum(g)?;
    let cf = contraction_factors(&s)?;
    let e = dirichlet_energy(x, &lap)?;
    let px = Embedding::new(g.propagation_matrix().as_matrix() * x.as_matrix())?;
    let lhs = dirichlet_energy(&px, &lap)?;
    Ok(BoundReport::build(
        Statement::Propagation,
        lhs,
        cf.lambda_bar_min * e,
        Some(cf.lambda_bar_safe * e),
        e == 0.0,
        REL_TOL,
        format!(
            "{} C={} lambda={:.6}",
            describe(g),
            x.cols(),
            cf.lambda_min_nonzero
        ),
    ))
}

/// `E(XW) ≤ σ_max(W)² E(X)` for any (possibly rectangular) `W`.
pub fn verify_weights(
    x: &Embedding,
    w: &nalgebra::DMatrix<f64>,
    lap: &DenseSymMatrix,
) -> Result<BoundReport> {
    if x.cols() != w.nrows() {
        return Err(Error::validation(format!(
            "embedding has {} channels but W has {} rows",
            x.cols(),
            w.nrows()
        )));
    }
    let e = dirichlet_energy(x, lap)?;
    let xw = Embedding::new(x.as_matrix() * w)?;
    let lhs = dirichlet_energy(&xw, lap)?;
    let s = top_singular_value(w);
    Ok(BoundReport::build(
        Statement::Weights,
        lhs,
        s * s * e,
        None,
        e == 0.0,
        REL_TOL,
        format!("n={} W={}x{} s={s:.6}", x.rows(), w.nrows(), w.ncols()),
    ))
}

/// `E(σ(X)) ≤ E(X)`. Asserted for ReLU-type activations everywhere and for
/// tanh/sigmoid only on regular graphs; otherwise informational.
pub fn verify_activation(g: &Graph, x: &Embedding, act: Activation) -> Result<BoundReport> {
    let lap = g.augmented_normalized_laplacian();
    let e = dirichlet_energy(x, &lap)?;
    let lhs = dirichlet_energy(&apply_activation(x, act), &lap)?;
    let report = BoundReport::build(
        Statement::Activation,
        lhs,
        e,
        None,
        e == 0.0,
        REL_TOL,
        format!(
            "{} C={} act={act} regular={}",
            describe(g),
            x.cols(),
            g.is_regular()
        ),
    );
    Ok(if act.contracts_energy_on(g) {
        report
    } else {
        report.informational()
    })
}

/// `E(f_l(X)) ≤ s_l · c · E(X)` where `s_l` is the layer's energy gain and
/// `c` the filter contraction (`(1 − λ)²` for the plain propagation filter).
pub fn verify_layer(g: &Graph, x: &Embedding, spec: &LayerSpec) -> Result<BoundReport> {
    let (lap, s) = laplacian_and_spectrum(g)?;
    let fc = filter_contraction(&spec.filter, &s)?;
    let gain = spec.energy_gain();
    let e = dirichlet_energy(x, &lap)?;
    let lhs = dirichlet_energy(&layer_forward(x, spec, &s)?, &lap)?;
    let report = BoundReport::build(
        Statement::Layer,
        lhs,
        gain * fc.at_min * e,
        Some(gain * fc.safe * e),
        e == 0.0,
        REL_TOL,
        format!(
            "{} H={} gain={gain:.6} act={} placement={:?}",
            describe(g),
            spec.weights().len(),
            spec.activation,
            spec.placement
        ),
    );
    Ok(if spec.activation.contracts_energy_on(g) {
        report
    } else {
        report.informational()
    })
}

/// `E(P_l(Δ̃)X) ≤ P_l(λ)² E(X)` (smallest eigenvalue) and `≤ max P_l(λ_i)² E(X)` (safe).
pub fn verify_filter(g: &Graph, x: &Embedding, filter: &PolynomialFilter) -> Result<BoundReport> {
    let (lap, s) = laplacian_and_spectrum(g)?;
    let fc = filter_contraction(filter, &s)?;
    let e = dirichlet_energy(x, &lap)?;
    let fx = Embedding::new(filter.eval_matrix(&s).as_matrix() * x.as_matrix())?;
    let lhs = dirichlet_energy(&fx, &lap)?;
    let monotone = filter
        .check_monotone_decreasing(0.0, s.max_eigenvalue().max(1e-12))?
        .decreasing;
    Ok(BoundReport::build(
        Statement::Filter,
        lhs,
        fc.at_min * e,
        Some(fc.safe * e),
        e == 0.0,
        REL_TOL,
        format!(
            "{} degree={} monotone={monotone}",
            describe(g),
            filter.degree()
        ),
    ))
}

/// Result of the multi-layer decay check.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayReport {
    /// `lhs = E(X^(L))`, `rhs = Π_l ρ_l · E(X^(0))`.
    pub report: BoundReport,
    /// Least-squares slope of `ln E(X^(l))` over the layers with `E > 1e-300`.
    pub slope: Option<f64>,
    /// `ln max_l ρ_l`.
    pub log_rho: f64,
    pub slope_ok: bool,
}

/// Decay check on a trajectory whose per-layer safe factors are all below 1.
///
/// Requires every layer to carry a bound; fails with a precondition error
/// when some factor is `≥ 1`.
pub fn verify_decay(traj: &Trajectory) -> Result<DecayReport> {
    let factors: Vec<f64> = traj.records[1..]
        .iter()
        .map(|r| r.bound_safe.ok_or(Error::DegenerateSpectrum))
        .collect::<Result<_>>()?;
    let rho = factors.iter().copied().fold(0.0, f64::max);
    if rho >= 1.0 {
        return Err(Error::Precondition(format!(
            "contraction factor {rho} >= 1; exponential decay is not implied"
        )));
    }
    let energies = traj.energies();
    let e0 = energies[0];
    let product: f64 = factors.iter().product();
    let lhs = *energies.last().unwrap();
    let report = BoundReport::build(
        Statement::Decay,
        lhs,
        product * e0,
        Some(product * e0),
        e0 == 0.0,
        DECAY_REL_TOL,
        format!("L={} rho={rho:.6}", traj.depth()),
    );
    let log_rho = rho.ln();
    let slope = log_energy_slope(&energies);
    let slope_ok = match slope {
        Some(s) if log_rho.is_finite() => s <= log_rho + 1e-6,
        _ => true,
    };
    Ok(DecayReport {
        report,
        slope,
        log_rho,
        slope_ok,
    })
}

/// Least-squares slope of `ln E` against depth over the leading run of
/// energies above `1e-300`. `None` with fewer than two such points.
pub fn log_energy_slope(energies: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = energies
        .iter()
        .take_while(|e| **e > 1e-300)
        .enumerate()
        .map(|(l, e)| (l as f64, e.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}

#[derive(Debug, Clone, PartialEq)]
pub enum FilterDecayVerdict {
    /// Every per-layer safe bound and the `(1 − ε)^l` decay hold.
    Holds,
    /// Preconditions hold but some asserted bound failed.
    Violated,
    /// The proposition does not apply; this is a verdict, not an error.
    PreconditionFailed {
        layer: usize,
        reason: String,
        witness: Option<f64>,
    },
}

#[derive(Debug, Clone)]
pub struct FilterDecayOutcome {
    pub verdict: FilterDecayVerdict,
    /// One report per layer: `E(f_l X) ≤ s_l P_l(λ)² E(X)`.
    pub layer_reports: Vec<BoundReport>,
    /// Tightest layer of `E(X^(l)) ≤ (1 − ε)^l E(X^(0))`.
    pub decay: Option<BoundReport>,
    pub trajectory: Option<Trajectory>,
}

/// Preconditions of the polynomial-filter decay statement for a fixed spectrum.
///
/// Checks that every filter is non-increasing on `[0, λ_max]` and that
/// `s_l · P_l(λ_i)² < 1 − ε` for every nonzero eigenvalue.
pub fn filter_decay_preconditions(
    layers: &[LayerSpec],
    s: &Spectrum,
    epsilon: f64,
) -> Result<Option<FilterDecayVerdict>> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::validation(format!(
            "epsilon {epsilon} outside (0, 1)"
        )));
    }
    let lmax = s.max_eigenvalue();
    if s.min_nonzero().is_none() {
        return Err(Error::DegenerateSpectrum);
    }
    for (l, spec) in layers.iter().enumerate() {
        let m = spec.filter.check_monotone_decreasing(0.0, lmax)?;
        if !m.decreasing {
            return Ok(Some(FilterDecayVerdict::PreconditionFailed {
                layer: l,
                reason: "filter is not monotonically decreasing".into(),
                witness: m.witness,
            }));
        }
        let gain = spec.energy_gain();
        if let Some(worst) = s
            .nonzero()
            .map(|lam| (lam, gain * spec.filter.eval(lam).powi(2)))
            .max_by(|a, b| a.1.total_cmp(&b.1))
        {
            if worst.1 >= 1.0 - epsilon {
                return Ok(Some(FilterDecayVerdict::PreconditionFailed {
                    layer: l,
                    reason: format!(
                        "s_l * P_l(lambda_i)^2 = {} >= 1 - epsilon at lambda_i = {}",
                        worst.1, worst.0
                    ),
                    witness: Some(worst.0),
                }));
            }
        }
    }
    Ok(None)
}

/// Runs the layers from `x0` and checks the per-layer bounds and the
/// uniform `(1 − ε)^l` decay.
pub fn verify_filter_decay(
    g: &Graph,
    x0: &Embedding,
    layers: &[LayerSpec],
    epsilon: f64,
) -> Result<FilterDecayOutcome> {
    let (_, s) = laplacian_and_spectrum(g)?;
    if let Some(verdict) = filter_decay_preconditions(layers, &s, epsilon)? {
        return Ok(FilterDecayOutcome {
            verdict,
            layer_reports: vec![],
            decay: None,
            trajectory: None,
        });
    }
    let traj = run_network(x0, layers, &s)?;
    let energies = traj.energies();
    let mut layer_reports = Vec::with_capacity(layers.len());
    for (l, spec) in layers.iter().enumerate() {
        let fc = filter_contraction(&spec.filter, &s)?;
        let gain = spec.energy_gain();
        let e = energies[l];
        let r = BoundReport::build(
            Statement::FilterDecay,
            energies[l + 1],
            gain * fc.at_min * e,
            Some(gain * fc.safe * e),
            e == 0.0,
            REL_TOL,
            format!(
                "layer={l} {} gain={gain:.6} act={}",
                describe(g),
                spec.activation
            ),
        );
        layer_reports.push(if spec.activation.contracts_energy_on(g) {
            r
        } else {
            r.informational()
        });
    }
    let e0 = energies[0];
    let decay = energies
        .iter()
        .enumerate()
        .skip(1)
        .map(|(l, &e)| {
            BoundReport::build(
                Statement::FilterDecay,
                e,
                (1.0 - epsilon).powi(l as i32) * e0,
                None,
                e0 == 0.0,
                DECAY_REL_TOL,
                format!("decay layer={l} epsilon={epsilon} {}", describe(g)),
            )
        })
        .min_by(|a, b| a.relative_margin().total_cmp(&b.relative_margin()));
    let ok =
        layer_reports.iter().all(BoundReport::passes) && decay.as_ref().is_none_or(|d| d.holds());
    Ok(FilterDecayOutcome {
        verdict: if ok {
            FilterDecayVerdict::Holds
        } else {
            FilterDecayVerdict::Violated
        },
        layer_reports,
        decay,
        trajectory: Some(traj),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gcn::make_weights;
    use crate::graph::{generate, GraphKind};
    use nalgebra::DMatrix;

    fn k2() -> Graph {
        generate(GraphKind::Path, 2, 0).unwrap()
    }

    fn p3() -> Graph {
        generate(GraphKind::Path, 3, 0).unwrap()
    }

    #[test]
    fn propagation_examples() {
        let r = verify_propagation(&k2(), &Embedding::column(&[1.0, 0.0]).unwrap()).unwrap();
        assert!(r.lhs < 1e-24 && r.rhs_min < 1e-24 && r.holds_min && r.holds());

        let x = Embedding::column(&[1.0, 0.0, 0.0]).unwrap();
        let r = verify_propagation(&p3(), &x).unwrap();
        let e = dirichlet_energy(&x, &p3().augmented_normalized_laplacian()).unwrap();
        assert!((r.rhs_min - 0.25 * e).abs() < 1e-12);
        assert!(r.holds_min && r.holds());

        let kernel = Embedding::column(&[2f64.sqrt(), 3f64.sqrt(), 2f64.sqrt()]).unwrap();
        let r = verify_propagation(&p3(), &kernel).unwrap();
        assert!(r.holds());

        assert!(matches!(
            verify_propagation(&Graph::empty(2).unwrap(), &Embedding::zeros(2, 1)),
            Err(Error::DegenerateSpectrum)
        ));
    }

    #[test]
    fn weights_equality_cases() {
        let g = generate(GraphKind::ErdosRenyi { p: 0.4 }, 12, 3).unwrap();
        let lap = g.augmented_normalized_laplacian();
        let x = Embedding::gaussian(12, 1, 1);
        let r = verify_weights(&x, &DMatrix::from_element(1, 1, 2.0), &lap).unwrap();
        assert!((r.lhs - r.rhs_min).abs() <= 1e-12);
        let x = Embedding::gaussian(12, 3, 1);
        let r = verify_weights(&x, &DMatrix::identity(3, 3), &lap).unwrap();
        assert!((r.lhs - r.rhs_min).abs() <= 1e-12);
        assert!(verify_weights(&x, &DMatrix::identity(2, 2), &lap).is_err());
    }

    #[test]
    fn activation_examples() {
        let x = Embedding::column(&[1.0, -1.0]).unwrap();
        let r = verify_activation(&k2(), &x, Activation::Relu).unwrap();
        assert!((r.lhs - 0.5).abs() < 1e-12 && (r.rhs_min - 2.0).abs() < 1e-12 && r.holds());

        let g = generate(GraphKind::ErdosRenyi { p: 0.3 }, 15, 2).unwrap();
        let x = Embedding::new(Embedding::gaussian(15, 2, 4).as_matrix().abs()).unwrap();
        let r = verify_activation(&g, &x, Activation::Relu).unwrap();
        assert_eq!(r.lhs, r.rhs_min);

        let ring = generate(GraphKind::Ring, 6, 0).unwrap();
        let x = Embedding::gaussian(6, 2, 8).scaled(3.0);
        let r = verify_activation(&ring, &x, Activation::Sigmoid).unwrap();
        assert!(r.asserted && r.holds());

        let path = generate(GraphKind::Path, 6, 0).unwrap();
        let r = verify_activation(&path, &x, Activation::Tanh).unwrap();
        assert!(!r.asserted && r.passes());
    }

    #[test]
    fn layer_examples() {
        let k3 = generate(GraphKind::Complete, 3, 0).unwrap();
        let spec = LayerSpec::new(
            PolynomialFilter::propagation(),
            vec![DMatrix::identity(2, 2)],
            Activation::Identity,
        )
        .unwrap();
        let r = verify_layer(&k3, &Embedding::gaussian(3, 2, 1), &spec).unwrap();
        assert!(r.lhs < 1e-14 && r.holds());

        let zero = LayerSpec::new(
            PolynomialFilter::propagation(),
            vec![DMatrix::zeros(2, 2)],
            Activation::Relu,
        )
        .unwrap();
        let r = verify_layer(&p3(), &Embedding::gaussian(3, 2, 1), &zero).unwrap();
        assert_eq!(r.lhs, 0.0);
        assert!(r.holds());

        let w1 = make_weights(2, 3, 1.5, 10).unwrap();
        let w2 = make_weights(3, 2, 0.5, 11).unwrap();
        let spec = LayerSpec::new(
            PolynomialFilter::propagation(),
            vec![w1, w2],
            Activation::Relu,
        )
        .unwrap();
        assert!((spec.singular_value_product() - 0.75).abs() < 1e-9);
        let r = verify_layer(&p3(), &Embedding::gaussian(3, 2, 2), &spec).unwrap();
        assert!(r.holds() && r.holds_min);
    }

    #[test]
    fn decay_precondition_and_slope() {
        let g = p3();
        let s = eigendecompose(&g.augmented_normalized_laplacian(), None).unwrap();
        let w = vec![DMatrix::from_element(1, 1, 3.0)];
        let spec =
            LayerSpec::new(PolynomialFilter::propagation(), w, Activation::Identity).unwrap();
        let t = run_network(&Embedding::gaussian(3, 1, 0), &vec![spec; 4], &s).unwrap();
        assert!(matches!(verify_decay(&t), Err(Error::Precondition(_))));

        assert_eq!(log_energy_slope(&[1.0, 0.0, 0.0]), None);
        let geo: Vec<f64> = (0..6).map(|l| 0.5f64.powi(l)).collect();
        assert!((log_energy_slope(&geo).unwrap() - 0.5f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn decay_on_p3() {
        let g = p3();
        let s = eigendecompose(&g.augmented_normalized_laplacian(), None).unwrap();
        let spec = LayerSpec::new(
            PolynomialFilter::propagation(),
            vec![DMatrix::identity(2, 2)],
            Activation::Relu,
        )
        .unwrap();
        let x0 = Embedding::gaussian(3, 2, 6);
        let t = run_network(&x0, &vec![spec; 20], &s).unwrap();
        let d = verify_decay(&t).unwrap();
        assert!(d.report.holds() && d.slope_ok);
        assert!(
            t.records[20].energy <= 0.25f64.powi(20) * t.records[0].energy * (1.0 + 1e-6) + 1e-12
        );

        let zero = run_network(&Embedding::zeros(3, 2), &[t_layer()], &s).unwrap();
        let d = verify_decay(&zero).unwrap();
        assert!(d.report.vacuous && d.report.holds());
    }

    fn t_layer() -> LayerSpec {
        LayerSpec::new(
            PolynomialFilter::propagation(),
            vec![DMatrix::identity(2, 2)],
            Activation::Relu,
        )
        .unwrap()
    }

    #[test]
    fn filter_decay_examples() {
        let g = p3();
        let x0 = Embedding::gaussian(3, 2, 3);
        let layers = vec![t_layer(); 12];
        let out = verify_filter_decay(&g, &x0, &layers, 0.5).unwrap();
        assert_eq!(out.verdict, FilterDecayVerdict::Holds);
        assert_eq!(out.layer_reports.len(), 12);

        let inc = LayerSpec::new(
            PolynomialFilter::new(vec![0.0, 1.0]).unwrap(),
            vec![DMatrix::identity(2, 2)],
            Activation::Relu,
        )
        .unwrap();
        let out = verify_filter_decay(&g, &x0, &[inc], 0.5).unwrap();
        match out.verdict {
            FilterDecayVerdict::PreconditionFailed { layer, witness, .. } => {
                assert_eq!(layer, 0);
                assert!(witness.is_some());
            }
            v => panic!("{v:?}"),
        }

        let constant = LayerSpec::new(
            PolynomialFilter::new(vec![0.9]).unwrap(),
            vec![DMatrix::identity(2, 2)],
            Activation::Relu,
        )
        .unwrap();
        let out = verify_filter_decay(&g, &x0, &vec![constant; 10], 0.1).unwrap();
        assert_eq!(out.verdict, FilterDecayVerdict::Holds);
        let traj = out.trajectory.unwrap();
        for (l, e) in traj.energies().iter().enumerate() {
            assert!(*e <= 0.9f64.powi(l as i32) * traj.records[0].energy * (1.0 + 1e-6) + 1e-12);
        }

        assert!(verify_filter_decay(&g, &x0, &[t_layer()], 1.5).is_err());
    }

    #[test]
    fn filter_decay_gain_precondition() {
        let g = p3();
        let loud = LayerSpec::new(
            PolynomialFilter::propagation(),
            vec![DMatrix::identity(2, 2) * 1.5],
            Activation::Relu,
        )
        .unwrap();
        let out = verify_filter_decay(&g, &Embedding::gaussian(3, 2, 1), &[loud], 0.5).unwrap();
        assert!(matches!(
            out.verdict,
            FilterDecayVerdict::PreconditionFailed { .. }
        ));
    }
}
