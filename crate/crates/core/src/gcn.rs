//! Forward simulation of deep GCNs with per-layer polynomial filters.
//!
//! Layer `l` computes `MLP_l(P_l(Δ̃) X)` where
//! `MLP_l(Y) = σ(… σ(σ(Y) W_1) W_2 … W_H)`. Under
//! [`Placement::Full`] the activation is applied to the filtered input and
//! after every weight (`H + 1` times); [`Placement::Conventional`] applies it
//! only after each weight.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::energy::{dirichlet_energy, rayleigh_quotient, Embedding};
use crate::error::{Error, Result};
use crate::graph::{DenseSymMatrix, Graph};
use crate::seed;
use crate::spectral::{filter_contraction, PolynomialFilter, Spectrum};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Activation {
    Relu,
    /// Slope `a ∈ (0, 1)` on the non-positive half-line.
    LeakyRelu(f64),
    Tanh,
    Sigmoid,
    Identity,
}

impl Activation {
    pub fn leaky_relu(a: f64) -> Result<Self> {
        if a > 0.0 && a < 1.0 {
            Ok(Activation::LeakyRelu(a))
        } else {
            Err(Error::validation(format!(
                "leaky ReLU slope {a} outside (0, 1)"
            )))
        }
    }

    pub fn apply_scalar(&self, x: f64) -> f64 {
        match *self {
            Activation::Relu => x.max(0.0),
            Activation::LeakyRelu(a) => {
                if x > 0.0 {
                    x
                } else {
                    a * x
                }
            }
            Activation::Tanh => x.tanh(),
            Activation::Sigmoid => 1.0 / (1.0 + (-x).exp()),
            Activation::Identity => x,
        }
    }

    /// ReLU, leaky ReLU and the identity never increase Dirichlet energy on
    /// any graph; tanh and sigmoid only do so on regular graphs.
    pub fn contracts_energy_on(&self, g: &Graph) -> bool {
        match self {
            Activation::Relu | Activation::LeakyRelu(_) | Activation::Identity => true,
            Activation::Tanh | Activation::Sigmoid => g.is_regular(),
        }
    }
}

impl fmt::Display for Activation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Activation::Relu => write!(f, "relu"),
            Activation::LeakyRelu(a) => write!(f, "leaky_relu:{a}"),
            Activation::Tanh => write!(f, "tanh"),
            Activation::Sigmoid => write!(f, "sigmoid"),
            Activation::Identity => write!(f, "identity"),
        }
    }
}

impl FromStr for Activation {
    type Err = Error;

    /// `relu`, `leaky_relu:<a>`, `tanh`, `sigmoid` or `identity`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "relu" => Ok(Activation::Relu),
            "tanh" => Ok(Activation::Tanh),
            "sigmoid" => Ok(Activation::Sigmoid),
            "identity" => Ok(Activation::Identity),
            _ => match s.strip_prefix("leaky_relu:") {
                Some(a) => Activation::leaky_relu(
                    a.parse()
                        .map_err(|_| Error::validation(format!("bad leaky ReLU slope `{a}`")))?,
                ),
                None => Err(Error::validation(format!("unknown activation `{s}`"))),
            },
        }
    }
}

/// Elementwise activation.
pub fn apply_activation(x: &Embedding, act: Activation) -> Embedding {
    Embedding::new(x.as_matrix().map(|v| act.apply_scalar(v)))
        .expect("activations map finite values to finite values")
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Placement {
    #[default]
    Full,
    Conventional,
}

/// One GCN layer: spectral filter, weight stack and activation.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerSpec {
    pub filter: PolynomialFilter,
    weights: Vec<DMatrix<f64>>,
    pub activation: Activation,
    pub placement: Placement,
}

impl LayerSpec {
    /// Checks that the weight stack is nonempty, finite and chains
    /// (`cols(W_h) = rows(W_{h+1})`).
    pub fn new(
        filter: PolynomialFilter,
        weights: Vec<DMatrix<f64>>,
        activation: Activation,
    ) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::validation("layer needs at least one weight matrix"));
        }
        for (h, w) in weights.iter().enumerate() {
            if w.nrows() == 0 || w.ncols() == 0 {
                return Err(Error::validation(format!("weight {h} is empty")));
            }
            if w.iter().any(|x| !x.is_finite()) {
                return Err(Error::validation(format!(
                    "weight {h} has non-finite entries"
                )));
            }
        }
        if let Some(h) = weights
            .windows(2)
            .position(|p| p[0].ncols() != p[1].nrows())
        {
            return Err(Error::validation(format!(
                "weight {h} has {} columns but weight {} has {} rows",
                weights[h].ncols(),
                h + 1,
                weights[h + 1].nrows()
            )));
        }
        Ok(LayerSpec {
            filter,
            weights,
            activation,
            placement: Placement::Full,
        })
    }

    pub fn with_placement(mut self, placement: Placement) -> Self {
        self.placement = placement;
        self
    }

    pub fn weights(&self) -> &[DMatrix<f64>] {
        &self.weights
    }

    pub fn input_channels(&self) -> usize {
        self.weights[0].nrows()
    }

    pub fn output_channels(&self) -> usize {
        self.weights[self.weights.len() - 1].ncols()
    }

    /// Product of the top singular values of the weights.
    pub fn singular_value_product(&self) -> f64 {
        self.weights.iter().map(top_singular_value).product()
    }

    /// Energy gain `s_l`: product of the squared top singular values, the
    /// factor by which the weight stack can scale Dirichlet energy.
    pub fn energy_gain(&self) -> f64 {
        self.singular_value_product().powi(2)
    }
}

/// Largest singular value (operator 2-norm).
pub fn top_singular_value(w: &DMatrix<f64>) -> f64 {
    w.singular_values().iter().fold(0.0, |a: f64, &s| a.max(s))
}

/// Seeded Gaussian `rows × cols` matrix rescaled to top singular value `target`.
pub fn make_weights(rows: usize, cols: usize, target: f64, seed: u64) -> Result<DMatrix<f64>> {
    if rows == 0 || cols == 0 {
        return Err(Error::validation("weight dimensions must be positive"));
    }
    if !(target > 0.0 && target.is_finite()) {
        return Err(Error::validation(format!(
            "target singular value {target} must be > 0"
        )));
    }
    let mut rng = seed::rng(seed);
    loop {
        let w = DMatrix::from_fn(rows, cols, |_, _| StandardNormal.sample(&mut rng));
        let s = top_singular_value(&w);
        if s > 0.0 {
            return Ok(w * (target / s));
        }
    }
}

/// Computes `f_l(X) = MLP_l(P_l(Δ̃) X)`.
pub fn layer_forward(
    x: &Embedding,
    spec: &LayerSpec,
    lap_spectrum: &Spectrum,
) -> Result<Embedding> {
    let filtered = spec.filter.eval_matrix(lap_spectrum);
    forward_with_filter(x, spec, &filtered)
}

fn forward_with_filter(
    x: &Embedding,
    spec: &LayerSpec,
    filter: &DenseSymMatrix,
) -> Result<Embedding> {
    if x.rows() != filter.dim() {
        return Err(Error::validation(format!(
            "embedding has {} rows but the graph has {} nodes",
            x.rows(),
            filter.dim()
        )));
    }
    if x.cols() != spec.input_channels() {
        return Err(Error::validation(format!(
            "embedding has {} channels but the layer expects {}",
            x.cols(),
            spec.input_channels()
        )));
    }
    let sigma = |m: DMatrix<f64>| m.map(|v| spec.activation.apply_scalar(v));
    let mut y = filter.as_matrix() * x.as_matrix();
    if spec.placement == Placement::Full {
        y = sigma(y);
    }
    for w in &spec.weights {
        y = sigma(y * w);
    }
    Embedding::new(y)
}

/// Energy record of one depth.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerRecord {
    pub layer: usize,
    pub energy: f64,
    /// `None` for an all-zero embedding.
    pub rayleigh: Option<f64>,
    pub channels: usize,
    /// Energy gain `s_l` of the layer that produced this record.
    pub gain: Option<f64>,
    /// `s_l · P_l(λ)²` at the smallest nonzero eigenvalue.
    pub bound_min: Option<f64>,
    /// `s_l · max P_l(λ_i)²` over nonzero eigenvalues.
    pub bound_safe: Option<f64>,
}

/// Energies of `X^(0) … X^(L)` and the per-layer contraction factors.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub records: Vec<LayerRecord>,
    pub embeddings: Vec<Embedding>,
}

impl Trajectory {
    pub fn depth(&self) -> usize {
        self.records.len() - 1
    }

    pub fn energies(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.energy).collect()
    }

    /// `sup_l s_l · (safe contraction)`, if every layer has a bound.
    pub fn max_safe_factor(&self) -> Option<f64> {
        self.records[1..]
            .iter()
            .map(|r| r.bound_safe)
            .try_fold(0.0f64, |acc, b| b.map(|b| acc.max(b)))
    }

    pub fn output(&self) -> &Embedding {
        self.embeddings.last().expect("trajectory holds X^(0)")
    }
}

/// Runs `f_L ∘ … ∘ f_1` from `x0` and records the energy at every depth.
///
/// Bounds are `None` when the spectrum has no nonzero eigenvalue.
pub fn run_network(
    x0: &Embedding,
    layers: &[LayerSpec],
    lap_spectrum: &Spectrum,
) -> Result<Trajectory> {
    if layers.is_empty() {
        return Err(Error::validation("network needs at least one layer"));
    }
    if x0.rows() != lap_spectrum.dim() {
        return Err(Error::validation(format!(
            "embedding has {} rows but the graph has {} nodes",
            x0.rows(),
            lap_spectrum.dim()
        )));
    }
    let mut channels = x0.cols();
    for (l, spec) in layers.iter().enumerate() {
        if spec.input_channels() != channels {
            return Err(Error::validation(format!(
                "layer {l} expects {} input channels but receives {channels}",
                spec.input_channels()
            )));
        }
        channels = spec.output_channels();
    }

    let lap = lap_spectrum.reconstruct();
    let record = |layer: usize, x: &Embedding| -> Result<LayerRecord> {
        let energy = dirichlet_energy(x, &lap)?;
        let rayleigh = if x.norm_squared() > 0.0 {
            Some(rayleigh_quotient(x, &lap)?)
        } else {
            None
        };
        Ok(LayerRecord {
            layer,
            energy,
            rayleigh,
            channels: x.cols(),
            gain: None,
            bound_min: None,
            bound_safe: None,
        })
    };

    let mut filters: HashMap<Vec<u64>, DenseSymMatrix> = HashMap::new();
    let mut records = vec![record(0, x0)?];
    let mut embeddings = vec![x0.clone()];
    for (l, spec) in layers.iter().enumerate() {
        let key: Vec<u64> = spec
            .filter
            .coefficients()
            .iter()
            .map(|c| c.to_bits())
            .collect();
        let filter = filters
            .entry(key)
            .or_insert_with(|| spec.filter.eval_matrix(lap_spectrum));
        let next = forward_with_filter(embeddings.last().unwrap(), spec, filter)?;
        let mut rec = record(l + 1, &next)?;
        let gain = spec.energy_gain();
        rec.gain = Some(gain);
        if let Ok(c) = filter_contraction(&spec.filter, lap_spectrum) {
            rec.bound_min = Some(gain * c.at_min);
            rec.bound_safe = Some(gain * c.safe);
        }
        records.push(rec);
        embeddings.push(next);
    }
    Ok(Trajectory {
        records,
        embeddings,
    })
}
