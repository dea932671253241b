//! Edge-drop and weight-boost sweeps.
//!
//! Each trial perturbs the same base graph with every configured operation
//! and records how the smallest nonzero eigenvalue, the safe contraction
//! factor and the Dirichlet energy of a probe field change. The probe field
//! is drawn once per trial and evaluated on both the base and the perturbed
//! graph, so energy differences come from the graph alone.
//!
//! Seeds: trial `t` uses `derive_seed(base_seed, t)`; operation `k` of that
//! trial perturbs with `derive_seed(trial_seed, k + 1)`; the probe field is
//! drawn from `derive_seed(derive_seed(trial_seed, 0), probe_seed)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::energy::{dirichlet_energy, Embedding};
use crate::error::{Error, Result};
use crate::graph::{drop_count, perturb, Graph, GraphSource, PerturbationPlan};
use crate::output::float;
use crate::seed::derive_seed;
use crate::spectral::{contraction_factors, eigendecompose};

/// Signal whose energy is tracked across a perturbation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Probe {
    /// One Gaussian `N × channels` field per trial.
    FixedField {
        channels: usize,
        #[serde(default)]
        seed: u64,
    },
    /// Eigenvalues only; energy columns are NaN.
    SpectrumOnly,
}

fn default_boost_factor() -> f64 {
    10_000.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub graph: GraphSource,
    #[serde(default)]
    pub drop_ratios: Vec<f64>,
    #[serde(default)]
    pub boost_counts: Vec<usize>,
    #[serde(default = "default_boost_factor")]
    pub boost_factor: f64,
    pub trials: usize,
    #[serde(default)]
    pub base_seed: u64,
    pub probe: Probe,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::validation("sweep needs at least one trial"));
        }
        if self.drop_ratios.is_empty() && self.boost_counts.is_empty() {
            return Err(Error::validation(
                "sweep needs at least one drop ratio or boost count",
            ));
        }
        if let Some(r) = self.drop_ratios.iter().find(|r| !(0.0..=1.0).contains(*r)) {
            return Err(Error::validation(format!("drop ratio {r} outside [0, 1]")));
        }
        if self.boost_counts.contains(&0) {
            return Err(Error::validation("boost counts must be positive"));
        }
        if !(self.boost_factor.is_finite() && self.boost_factor >= 1.0) {
            return Err(Error::validation(format!(
                "boost factor {} must be >= 1",
                self.boost_factor
            )));
        }
        if let Probe::FixedField { channels: 0, .. } = self.probe {
            return Err(Error::validation("probe needs at least one channel"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepOp {
    Drop(f64),
    Boost(usize),
}

impl SweepOp {
    pub fn name(&self) -> &'static str {
        match self {
            SweepOp::Drop(_) => "drop",
            SweepOp::Boost(_) => "boost",
        }
    }

    fn param(&self) -> String {
        match self {
            SweepOp::Drop(r) => float(*r),
            SweepOp::Boost(k) => k.to_string(),
        }
    }
}

impl fmt::Display for SweepOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.name(), self.param())
    }
}

/// One perturbation of one trial. Undefined quantities are NaN.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub trial: usize,
    pub seed: u64,
    pub op: SweepOp,
    pub edges_before: usize,
    pub edges_after: usize,
    pub lambda_min_before: f64,
    pub lambda_min_after: f64,
    pub lambda_bar_safe_before: f64,
    pub lambda_bar_safe_after: f64,
    pub energy_before: f64,
    pub energy_after: f64,
    /// No edges are left, so the smallest nonzero eigenvalue is undefined.
    pub degenerate: bool,
    pub probe_checksum: Option<u64>,
}

pub const SWEEP_HEADER: &str = "trial,seed,op,param,edges_before,edges_after,lambda_min_before,lambda_min_after,lambda_bar_safe_before,lambda_bar_safe_after,energy_before,energy_after";

impl SweepRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.trial,
            self.seed,
            self.op.name(),
            self.op.param(),
            self.edges_before,
            self.edges_after,
            float(self.lambda_min_before),
            float(self.lambda_min_after),
            float(self.lambda_bar_safe_before),
            float(self.lambda_bar_safe_after),
            float(self.energy_before),
            float(self.energy_after)
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub rows: Vec<SweepRow>,
    pub base_edges: usize,
    pub base_components: usize,
}

impl Sweep {
    pub fn to_csv(&self) -> String {
        let mut s = String::from(SWEEP_HEADER);
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.to_csv());
            s.push('\n');
        }
        s
    }
}

struct SpectralSummary {
    lambda_min: f64,
    lambda_bar_safe: f64,
}

fn summarize(g: &Graph) -> Result<SpectralSummary> {
    let s = eigendecompose(&g.augmented_normalized_laplacian(), None)?;
    Ok(match contraction_factors(&s) {
        Ok(c) => SpectralSummary {
            lambda_min: c.lambda_min_nonzero,
            lambda_bar_safe: c.lambda_bar_safe,
        },
        Err(Error::DegenerateSpectrum) => SpectralSummary {
            lambda_min: f64::NAN,
            lambda_bar_safe: f64::NAN,
        },
        Err(e) => return Err(e),
    })
}

/// Loads the configured base graph and runs the sweep on it.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Sweep> {
    run_sweep_on(&cfg.graph.load()?, cfg)
}

/// Runs the sweep on an already loaded base graph (the `graph` field of `cfg` is ignored).
pub fn run_sweep_on(base: &Graph, cfg: &SweepConfig) -> Result<Sweep> {
    cfg.validate()?;
    let ops: Vec<SweepOp> = cfg
        .drop_ratios
        .iter()
        .map(|r| SweepOp::Drop(*r))
        .chain(cfg.boost_counts.iter().map(|k| SweepOp::Boost(*k)))
        .collect();
    let m = base.edge_count();
    if let Some(k) = cfg.boost_counts.iter().find(|k| **k > m) {
        return Err(Error::validation(format!(
            "cannot boost {k} edges of a graph with {m}"
        )));
    }
    let before = summarize(base)?;
    let base_lap = base.augmented_normalized_laplacian();

    let mut rows = Vec::with_capacity(cfg.trials * ops.len());
    for trial in 0..cfg.trials {
        let ts = derive_seed(cfg.base_seed, trial as u64);
        let probe = match cfg.probe {
            Probe::FixedField { channels, seed } => Some(Embedding::gaussian(
                base.node_count(),
                channels,
                derive_seed(derive_seed(ts, 0), seed),
            )),
            Probe::SpectrumOnly => None,
        };
        let energy_before = match &probe {
            Some(x) => dirichlet_energy(x, &base_lap)?,
            None => f64::NAN,
        };
        for (k, op) in ops.iter().enumerate() {
            let op_seed = derive_seed(ts, k as u64 + 1);
            let plan = match *op {
                SweepOp::Drop(ratio) => PerturbationPlan::DropEdges {
                    ratio,
                    seed: op_seed,
                },
                SweepOp::Boost(count) => PerturbationPlan::BoostEdges {
                    count,
                    factor: cfg.boost_factor,
                    seed: op_seed,
                },
            };
            let g = perturb(base, &plan)?;
            let after = summarize(&g)?;
            let energy_after = match &probe {
                Some(x) => dirichlet_energy(x, &g.augmented_normalized_laplacian())?,
                None => f64::NAN,
            };
            rows.push(SweepRow {
                trial,
                seed: ts,
                op: *op,
                edges_before: m,
                edges_after: g.edge_count(),
                lambda_min_before: before.lambda_min,
                lambda_min_after: after.lambda_min,
                lambda_bar_safe_before: before.lambda_bar_safe,
                lambda_bar_safe_after: after.lambda_bar_safe,
                energy_before,
                energy_after,
                degenerate: g.edge_count() == 0,
                probe_checksum: probe.as_ref().map(Embedding::checksum),
            });
        }
    }
    Ok(Sweep {
        rows,
        base_edges: m,
        base_components: base.connected_components().len(),
    })
}

/// Expected edge count after an operation on `edges` edges.
pub fn expected_edges_after(op: SweepOp, edges: usize) -> usize {
    match op {
        SweepOp::Drop(r) => edges - drop_count(r, edges),
        SweepOp::Boost(_) => edges,
    }
}

/// Mean gaps between a boost and a drop operation, paired by trial.
#[derive(Debug, Clone, PartialEq)]
pub struct DualityEntry {
    pub boost_count: usize,
    pub drop_ratio: f64,
    /// Trials where both rows were non-degenerate.
    pub trials: usize,
    /// Mean of `|Δλ_min(drop) − Δλ_min(boost)|`.
    pub mean_abs_lambda_gap: f64,
    /// Mean of `|ΔE(drop) − ΔE(boost)|`; NaN without an energy probe.
    pub mean_abs_energy_gap: f64,
}

pub const DUALITY_HEADER: &str =
    "boost_count,drop_ratio,trials,mean_abs_lambda_gap,mean_abs_energy_gap";

impl DualityEntry {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.boost_count,
            float(self.drop_ratio),
            self.trials,
            float(self.mean_abs_lambda_gap),
            float(self.mean_abs_energy_gap)
        )
    }
}

/// Pairs every boost count with every drop ratio. No verdict is attached.
pub fn duality_report(rows: &[SweepRow]) -> Result<Vec<DualityEntry>> {
    let mut ratios: Vec<f64> = Vec::new();
    let mut counts: Vec<usize> = Vec::new();
    for r in rows {
        match r.op {
            SweepOp::Drop(x) if !ratios.contains(&x) => ratios.push(x),
            SweepOp::Boost(k) if !counts.contains(&k) => counts.push(k),
            _ => {}
        }
    }
    if ratios.is_empty() || counts.is_empty() {
        return Err(Error::validation(
            "duality report needs both drop and boost rows",
        ));
    }
    let trials: Vec<usize> = {
        let mut t: Vec<usize> = rows.iter().map(|r| r.trial).collect();
        t.dedup();
        t
    };
    let find = |trial: usize, op: SweepOp| rows.iter().find(|r| r.trial == trial && r.op == op);

    let mut out = Vec::new();
    for &k in &counts {
        for &ratio in &ratios {
            let mut n = 0usize;
            let mut lam = 0.0;
            let mut energy = 0.0;
            for &t in &trials {
                let (Some(d), Some(b)) =
                    (find(t, SweepOp::Drop(ratio)), find(t, SweepOp::Boost(k)))
                else {
                    continue;
                };
                if d.degenerate || b.degenerate {
                    continue;
                }
                n += 1;
                let dl_drop = d.lambda_min_after - d.lambda_min_before;
                let dl_boost = b.lambda_min_after - b.lambda_min_before;
                lam += (dl_drop - dl_boost).abs();
                let de_drop = d.energy_after - d.energy_before;
                let de_boost = b.energy_after - b.energy_before;
                energy += (de_drop - de_boost).abs();
            }
            let mean = |s: f64| if n == 0 { f64::NAN } else { s / n as f64 };
            out.push(DualityEntry {
                boost_count: k,
                drop_ratio: ratio,
                trials: n,
                mean_abs_lambda_gap: mean(lam),
                mean_abs_energy_gap: mean(energy),
            });
        }
    }
    Ok(out)
}

/// Share of drop trials whose probe energy increased, per drop ratio.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyIncrease {
    pub drop_ratio: f64,
    pub increased: usize,
    pub total: usize,
}

impl EnergyIncrease {
    pub fn fraction(&self) -> f64 {
        self.increased as f64 / self.total as f64
    }
}

pub fn energy_increase_fractions(rows: &[SweepRow]) -> Vec<EnergyIncrease> {
    let mut out: Vec<EnergyIncrease> = Vec::new();
    for r in rows {
        let SweepOp::Drop(ratio) = r.op else { continue };
        if r.energy_before.is_nan() {
            continue;
        }
        let idx = match out.iter().position(|e| e.drop_ratio == ratio) {
            Some(i) => i,
            None => {
                out.push(EnergyIncrease {
                    drop_ratio: ratio,
                    increased: 0,
                    total: 0,
                });
                out.len() - 1
            }
        };
        out[idx].total += 1;
        if r.energy_after > r.energy_before {
            out[idx].increased += 1;
        }
    }
    out
}
