//! Seeded random verification suites, one per inequality.
//!
//! Trial `t` of suite `S` draws its instance from
//! `derive_seed(derive_seed(seed, S), t)`, so a single trial can be
//! reproduced from the seed listed in a summary, and `all` yields exactly the
//! union of the individual suites.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::RngExt;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{
    verify_activation, verify_decay, verify_filter, verify_filter_decay, verify_layer,
    verify_propagation, verify_weights, BoundReport, FilterDecayVerdict, Statement,
};
use crate::energy::Embedding;
use crate::error::{Error, Result};
use crate::gcn::{make_weights, run_network, Activation, LayerSpec, Placement};
use crate::graph::{generate, perturb, Graph, GraphKind, PerturbationPlan};
use crate::seed::{self, derive_seed};
use crate::spectral::{eigendecompose, filter_contraction, PolynomialFilter};

/// Suites selectable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteSelection {
    One(Statement),
    All,
}

impl SuiteSelection {
    pub fn statements(&self) -> Vec<Statement> {
        match self {
            SuiteSelection::One(s) => vec![*s],
            SuiteSelection::All => Statement::ALL.to_vec(),
        }
    }
}

impl FromStr for SuiteSelection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "all" {
            return Ok(SuiteSelection::All);
        }
        Statement::ALL
            .into_iter()
            .find(|st| st.id() == s)
            .map(SuiteSelection::One)
            .ok_or_else(|| Error::validation(format!("unknown suite `{s}`")))
    }
}

impl fmt::Display for SuiteSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SuiteSelection::All => f.write_str("all"),
            SuiteSelection::One(s) => f.write_str(s.id()),
        }
    }
}

/// A report tagged with the trial that produced it.
#[derive(Debug, Clone)]
pub struct TrialReport {
    pub trial: usize,
    pub seed: u64,
    pub report: BoundReport,
}

/// Instance on which a smallest-eigenvalue bound failed while the safe bound held.
#[derive(Debug, Clone)]
pub struct Counterexample {
    pub statement: Statement,
    pub trial: usize,
    pub seed: u64,
    pub graph: Graph,
    pub context: String,
}

impl Counterexample {
    /// Edge-list fixture with the reproduction data in its comment header.
    pub fn to_fixture(&self) -> String {
        format!(
            "# statement {}\n# trial {} seed {}\n# {}\n{}",
            self.statement,
            self.trial,
            self.seed,
            self.context,
            self.graph.to_edge_list()
        )
    }
}

#[derive(Debug, Clone)]
pub struct SuiteRun {
    pub statement: Statement,
    pub trials: usize,
    pub seed: u64,
    pub reports: Vec<TrialReport>,
    pub counterexamples: Vec<Counterexample>,
    /// Trials whose instance did not meet the statement's preconditions.
    pub skipped: Vec<u64>,
}

/// Aggregate counts of one suite.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SuiteSummary {
    pub statement: String,
    pub trials: usize,
    pub reports: usize,
    /// Asserted, non-vacuous checks that held.
    pub passed: usize,
    /// Asserted checks that failed.
    pub failed: usize,
    pub vacuous: usize,
    /// Checks not guaranteed by theory (reported only).
    pub informational: usize,
    pub skipped: usize,
    /// Smallest `rhs − lhs` over asserted, non-vacuous checks.
    pub worst_margin: f64,
    pub worst_relative_margin: f64,
    /// Checks where the smallest-eigenvalue bound failed but the safe bound held.
    pub min_bound_violations: usize,
    pub counterexample_seeds: Vec<u64>,
    pub failure_seeds: Vec<u64>,
}

impl SuiteRun {
    pub fn summary(&self) -> SuiteSummary {
        let asserted: Vec<&TrialReport> =
            self.reports.iter().filter(|r| r.report.asserted).collect();
        let counted: Vec<&&TrialReport> = asserted.iter().filter(|r| !r.report.vacuous).collect();
        let mut failure_seeds: Vec<u64> = asserted
            .iter()
            .filter(|r| !r.report.holds())
            .map(|r| r.seed)
            .collect();
        failure_seeds.dedup();
        let mut counterexample_seeds: Vec<u64> =
            self.counterexamples.iter().map(|c| c.seed).collect();
        counterexample_seeds.dedup();
        SuiteSummary {
            statement: self.statement.id().to_string(),
            trials: self.trials,
            reports: self.reports.len(),
            passed: counted.iter().filter(|r| r.report.holds()).count(),
            failed: asserted.iter().filter(|r| !r.report.holds()).count(),
            vacuous: asserted.iter().filter(|r| r.report.vacuous).count(),
            informational: self.reports.len() - asserted.len(),
            skipped: self.skipped.len(),
            worst_margin: counted
                .iter()
                .map(|r| r.report.margin)
                .fold(f64::INFINITY, f64::min),
            worst_relative_margin: counted
                .iter()
                .map(|r| r.report.relative_margin())
                .fold(f64::INFINITY, f64::min),
            min_bound_violations: asserted
                .iter()
                .filter(|r| r.report.min_bound_violation())
                .count(),
            counterexample_seeds,
            failure_seeds,
        }
    }

    /// True when no asserted check failed.
    pub fn all_pass(&self) -> bool {
        self.reports.iter().all(|r| r.report.passes())
    }
}

/// Seed of trial `trial` of `statement` under the suite seed `seed`.
pub fn trial_seed(statement: Statement, seed: u64, trial: usize) -> u64 {
    let idx = Statement::ALL.iter().position(|s| *s == statement).unwrap() as u64;
    derive_seed(derive_seed(seed, idx), trial as u64)
}

/// Runs `trials` random instances of `statement`.
pub fn run_suite(statement: Statement, trials: usize, seed: u64) -> Result<SuiteRun> {
    if trials == 0 {
        return Err(Error::validation("at least one trial is required"));
    }
    let mut run = SuiteRun {
        statement,
        trials,
        seed,
        reports: Vec::new(),
        counterexamples: Vec::new(),
        skipped: Vec::new(),
    };
    for trial in 0..trials {
        let ts = trial_seed(statement, seed, trial);
        let Some(instance) = run_trial(statement, ts)? else {
            run.skipped.push(ts);
            continue;
        };
        for report in instance.reports {
            if report.asserted && report.min_bound_violation() {
                run.counterexamples.push(Counterexample {
                    statement,
                    trial,
                    seed: ts,
                    graph: instance.graph.clone(),
                    context: report.context.clone(),
                });
            }
            run.reports.push(TrialReport {
                trial,
                seed: ts,
                report,
            });
        }
    }
    Ok(run)
}

struct TrialOutcome {
    graph: Graph,
    reports: Vec<BoundReport>,
}

/// Builds and checks the instance of one trial. `None` when the drawn
/// instance does not satisfy the statement's preconditions.
pub fn trial_reports(
    statement: Statement,
    trial_seed: u64,
) -> Result<Option<(Graph, Vec<BoundReport>)>> {
    Ok(run_trial(statement, trial_seed)?.map(|t| (t.graph, t.reports)))
}

fn run_trial(statement: Statement, ts: u64) -> Result<Option<TrialOutcome>> {
    let mut rng = seed::rng(ts);
    let g = random_graph(&mut rng)?;
    let n = g.node_count();
    let c = rng.random_range(1..=8usize);
    let x = random_embedding(&mut rng, n, c);

    let reports = match statement {
        Statement::Propagation => vec![verify_propagation(&g, &x)?],
        Statement::Weights => {
            let out = rng.random_range(1..=8usize);
            let w = make_weights(c, out, rng.random_range(0.1..3.0), rng.random())?;
            vec![verify_weights(&x, &w, &g.augmented_normalized_laplacian())?]
        }
        Statement::Activation => {
            let mut reports = Vec::new();
            for act in [
                Activation::Relu,
                Activation::LeakyRelu(0.01),
                Activation::LeakyRelu(0.2),
                Activation::LeakyRelu(0.5),
                Activation::LeakyRelu(0.99),
                Activation::Tanh,
                Activation::Sigmoid,
            ] {
                reports.push(verify_activation(&g, &x, act)?);
            }
            let reg = random_regular(&mut rng)?;
            let xr = random_embedding(&mut rng, reg.node_count(), c);
            for act in [Activation::Tanh, Activation::Sigmoid] {
                reports.push(verify_activation(&reg, &xr, act)?);
            }
            reports
        }
        Statement::Layer => {
            let spec = random_layer(&mut rng, PolynomialFilter::propagation(), c, None)?;
            vec![verify_layer(&g, &x, &spec)?]
        }
        Statement::Filter => {
            let degree = rng.random_range(0..=4usize);
            let coeffs = (0..=degree).map(|_| rng.random_range(-1.5..1.5)).collect();
            vec![verify_filter(&g, &x, &PolynomialFilter::new(coeffs)?)?]
        }
        Statement::Decay => {
            let s = eigendecompose(&g.augmented_normalized_laplacian(), None)?;
            let safe = filter_contraction(&PolynomialFilter::propagation(), &s)?.safe;
            let rho = rng.random_range(0.2..0.95);
            let gain = if safe > 1e-12 { rho / safe } else { 1.0 };
            let depth = 10;
            let act = random_relu_family(&mut rng);
            let layers = (0..depth)
                .map(|_| {
                    let w = make_weights(c, c, gain.sqrt(), rng.random())?;
                    LayerSpec::new(PolynomialFilter::propagation(), vec![w], act)
                })
                .collect::<Result<Vec<_>>>()?;
            let traj = run_network(&x, &layers, &s)?;
            let decay = verify_decay(&traj)?;
            let mut report = decay.report;
            report.holds_safe = Some(report.holds() && decay.slope_ok);
            report.context = format!(
                "{} act={act} slope={} log_rho={}",
                report.context,
                decay.slope.map_or("none".into(), |s| format!("{s:.6}")),
                decay.log_rho
            );
            vec![report]
        }
        Statement::FilterDecay => {
            let s = eigendecompose(&g.augmented_normalized_laplacian(), None)?;
            let lmax = s.max_eigenvalue();
            let epsilon = rng.random_range(0.1..0.6);
            let depth = 8;
            let mut layers = Vec::with_capacity(depth);
            for _ in 0..depth {
                let filter = random_decreasing_filter(&mut rng, lmax)?;
                let worst = s
                    .nonzero()
                    .map(|l| filter.eval(l).powi(2))
                    .fold(0.0, f64::max);
                let target = (1.0 - epsilon) * rng.random_range(0.3..0.95);
                let gain = if worst > 1e-12 { target / worst } else { 1.0 };
                layers.push(random_layer(&mut rng, filter, c, Some(gain))?);
            }
            let out = verify_filter_decay(&g, &x, &layers, epsilon)?;
            if matches!(out.verdict, FilterDecayVerdict::PreconditionFailed { .. }) {
                return Ok(None);
            }
            let mut reports = out.layer_reports;
            reports.extend(out.decay);
            reports
        }
    };
    Ok(Some(TrialOutcome { graph: g, reports }))
}

/// Random connected-or-not graph with at least one edge: Erdős–Rényi,
/// ring, circulant regular or path, with some edges boosted in a third of
/// the draws.
pub fn random_graph(rng: &mut ChaCha8Rng) -> Result<Graph> {
    loop {
        let g = match rng.random_range(0..4u8) {
            0 => {
                let n = rng.random_range(5..=60usize);
                let p = rng.random_range(0.05..0.5);
                generate(GraphKind::ErdosRenyi { p }, n, rng.random())?
            }
            1 => generate(GraphKind::Ring, rng.random_range(3..=60usize), 0)?,
            2 => return random_regular(rng).and_then(|g| maybe_boost(rng, g)),
            _ => generate(GraphKind::Path, rng.random_range(2..=60usize), 0)?,
        };
        if g.edge_count() > 0 {
            return maybe_boost(rng, g);
        }
    }
}

fn maybe_boost(rng: &mut ChaCha8Rng, g: Graph) -> Result<Graph> {
    if rng.random_range(0..3u8) != 0 {
        return Ok(g);
    }
    let factor = [10.0, 100.0, 10_000.0][rng.random_range(0..3usize)];
    let count = rng.random_range(1..=g.edge_count().min(5));
    perturb(
        &g,
        &PerturbationPlan::BoostEdges {
            count,
            factor,
            seed: rng.random(),
        },
    )
}

fn random_regular(rng: &mut ChaCha8Rng) -> Result<Graph> {
    let n = rng.random_range(5..=60usize);
    let kmax = ((n - 1) / 2).min(4);
    let k = 2 * rng.random_range(1..=kmax);
    generate(GraphKind::KRegular { k }, n, 0)
}

/// Gaussian embedding with a random overall scale in `[0.1, 5)`.
fn random_embedding(rng: &mut ChaCha8Rng, n: usize, c: usize) -> Embedding {
    let scale = rng.random_range(0.1..5.0);
    Embedding::gaussian(n, c, rng.random()).scaled(scale)
}

fn random_relu_family(rng: &mut ChaCha8Rng) -> Activation {
    if rng.random_range(0..2u8) == 0 {
        Activation::Relu
    } else {
        Activation::LeakyRelu(rng.random_range(0.01..0.99))
    }
}

/// Layer with 1–3 rectangular weights. With `gain`, the stack ends at `c`
/// channels and its energy gain equals `gain`.
fn random_layer(
    rng: &mut ChaCha8Rng,
    filter: PolynomialFilter,
    c: usize,
    gain: Option<f64>,
) -> Result<LayerSpec> {
    let h = rng.random_range(1..=3usize);
    let mut dims = vec![c];
    for i in 0..h {
        let last = i + 1 == h;
        dims.push(if last && gain.is_some() {
            c
        } else {
            rng.random_range(1..=8usize)
        });
    }
    let targets: Vec<f64> = match gain {
        Some(g) => vec![g.sqrt().powf(1.0 / h as f64); h],
        None => (0..h).map(|_| rng.random_range(0.2..2.5)).collect(),
    };
    let weights: Vec<DMatrix<f64>> = (0..h)
        .map(|i| make_weights(dims[i], dims[i + 1], targets[i], rng.random()))
        .collect::<Result<_>>()?;
    let placement = if rng.random_range(0..2u8) == 0 {
        Placement::Full
    } else {
        Placement::Conventional
    };
    Ok(LayerSpec::new(filter, weights, random_relu_family(rng))?.with_placement(placement))
}

/// Linear or quadratic filter that is non-increasing on `[0, lmax]`.
fn random_decreasing_filter(rng: &mut ChaCha8Rng, lmax: f64) -> Result<PolynomialFilter> {
    let a0 = rng.random_range(-1.0..1.0);
    let a1 = rng.random_range(0.2..1.5);
    if rng.random_range(0..2u8) == 0 {
        PolynomialFilter::new(vec![a0, -a1])
    } else {
        // P'(x) = -a1 + 2 a2 x <= 0 on [0, lmax] when a2 <= a1 / (2 lmax)
        let a2 = rng.random_range(-0.5..a1 / (2.0 * lmax.max(1e-9)));
        PolynomialFilter::new(vec![a0, -a1, a2])
    }
}
