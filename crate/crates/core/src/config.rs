//! TOML configuration for network runs and sweeps.
//!
//! ```toml
//! graph = "gen:erdos-renyi:50:0.2:1"
//! seed = 42
//! activation_placement = "full"
//! epsilon = 0.5
//! channels = 4
//!
//! [[layers]]
//! repeat = 10
//! filter = [1.0, -1.0]
//! activation = "relu"
//! weights = [{ rows = 4, cols = 4, top_singular = 0.9 }]
//! ```
//!
//! Relative graph and input paths resolve against the config file's directory.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::energy::Embedding;
use crate::error::{Error, Result};
use crate::experiments::SweepConfig;
use crate::gcn::{make_weights, Activation, LayerSpec, Placement};
use crate::graph::{Graph, GraphSource};
use crate::seed::derive_seed;
use crate::spectral::PolynomialFilter;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightConfig {
    pub rows: usize,
    pub cols: usize,
    pub top_singular: f64,
}

fn one() -> usize {
    1
}

fn propagation() -> Vec<f64> {
    vec![1.0, -1.0]
}

fn relu() -> String {
    "relu".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayerConfig {
    #[serde(default = "one")]
    pub repeat: usize,
    /// Coefficients `[c0, c1, …]` of `P(λ) = c0 + c1 λ + …`.
    #[serde(default = "propagation")]
    pub filter: Vec<f64>,
    #[serde(default = "relu")]
    pub activation: String,
    pub weights: Vec<WeightConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub graph: GraphSource,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub activation_placement: Placement,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    /// Input channels of a Gaussian `X^(0)`; defaults to the first layer's rows.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub channels: Option<usize>,
    /// CSV file holding `X^(0)`; overrides `channels`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    pub layers: Vec<LayerConfig>,
}

/// Everything a run needs, built from a [`RunConfig`].
#[derive(Debug, Clone)]
pub struct RunSetup {
    pub graph: Graph,
    pub x0: Embedding,
    pub layers: Vec<LayerSpec>,
    pub epsilon: Option<f64>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn parse_toml<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    toml::from_str(text).map_err(|e| Error::Parse {
        line: e
            .span()
            .map_or(0, |s| text[..s.start].lines().count().max(1)),
        message: e.message().to_string(),
    })
}

fn base_dir(path: &Path) -> &Path {
    path.parent().unwrap_or(Path::new("."))
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        parse_toml(text)
    }

    /// Reads a config and resolves its relative paths against the file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let mut cfg = Self::from_toml(&read(path)?)?;
        let base = base_dir(path);
        cfg.graph = cfg.graph.relative_to(base);
        if let Some(p) = cfg.input.as_mut().filter(|p| p.is_relative()) {
            *p = base.join(&*p);
        }
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run config serializes")
    }

    /// Total depth after expanding `repeat`.
    pub fn depth(&self) -> usize {
        self.layers.iter().map(|l| l.repeat).sum()
    }

    /// Layer specs with seeded weights. Weight `h` of layer `l` is drawn from
    /// `derive_seed(derive_seed(seed, l + 1), h)`.
    pub fn build_layers(&self) -> Result<Vec<LayerSpec>> {
        if self.depth() == 0 {
            return Err(Error::validation("config defines no layers"));
        }
        let mut out = Vec::with_capacity(self.depth());
        for (block, lc) in self.layers.iter().enumerate() {
            let filter = PolynomialFilter::new(lc.filter.clone())
                .map_err(|e| Error::validation(format!("layers[{block}]: {e}")))?;
            let activation: Activation = lc
                .activation
                .parse()
                .map_err(|e| Error::validation(format!("layers[{block}]: {e}")))?;
            for _ in 0..lc.repeat {
                let l = out.len() as u64;
                let ls = derive_seed(self.seed, l + 1);
                let weights = lc
                    .weights
                    .iter()
                    .enumerate()
                    .map(|(h, w)| {
                        make_weights(w.rows, w.cols, w.top_singular, derive_seed(ls, h as u64))
                    })
                    .collect::<Result<Vec<_>>>()
                    .map_err(|e| Error::validation(format!("layers[{block}]: {e}")))?;
                let spec = LayerSpec::new(filter.clone(), weights, activation)
                    .map_err(|e| Error::validation(format!("layers[{block}]: {e}")))?;
                out.push(spec.with_placement(self.activation_placement));
            }
        }
        Ok(out)
    }

    /// Loads the graph, draws or reads `X^(0)` and builds the layers.
    pub fn build(&self) -> Result<RunSetup> {
        if let Some(eps) = self.epsilon {
            if !(eps > 0.0 && eps < 1.0) {
                return Err(Error::validation(format!("epsilon {eps} outside (0, 1)")));
            }
        }
        let layers = self.build_layers()?;
        let graph = self.graph.load()?;
        let x0 = match &self.input {
            Some(p) => Embedding::from_csv(&read(p)?)?,
            None => {
                let c = self.channels.unwrap_or_else(|| layers[0].input_channels());
                Embedding::gaussian(graph.node_count(), c, derive_seed(self.seed, 0))
            }
        };
        Ok(RunSetup {
            graph,
            x0,
            layers,
            epsilon: self.epsilon,
        })
    }
}

impl SweepConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: SweepConfig = parse_toml(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let mut cfg = Self::from_toml(&read(path)?)?;
        cfg.graph = cfg.graph.relative_to(base_dir(path));
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("sweep config serializes")
    }
}
