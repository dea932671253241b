//! Dirichlet-energy analysis of over-smoothing in deep graph convolutional networks.
//!
//! The energy of node embeddings `X` on a graph is `tr(Xᵀ Δ̃ X)` with the
//! augmented normalized Laplacian `Δ̃ = I − D̃^-1/2 (A + I) D̃^-1/2`. The crate
//! builds graphs, computes spectra and energies, runs GCN layers, and checks
//! the energy-contraction inequalities on concrete and random instances.
//!
//! ```
//! use oversmooth::bounds::verify_propagation;
//! use oversmooth::energy::Embedding;
//! use oversmooth::graph::{generate, GraphKind};
//!
//! let g = generate(GraphKind::Path, 3, 0).unwrap();
//! let x = Embedding::gaussian(3, 2, 1);
//! let report = verify_propagation(&g, &x).unwrap();
//! assert!(report.holds());
//! ```
//!
//! Modules:
//! - [`graph`]: weighted undirected graphs, generators, edge-list parsing, perturbations
//! - [`spectral`]: eigendecomposition, contraction factors, polynomial filters
//! - [`energy`]: embeddings and the two energy forms
//! - [`gcn`]: layers, activations, network runs
//! - [`bounds`]: inequality checks and seeded random suites
//! - [`experiments`]: edge-drop and weight-boost sweeps
//! - [`config`], [`output`], [`cli`]: the `oversmooth` binary
pub mod bounds;
pub mod cli;
pub mod config;
pub mod energy;
pub mod error;
pub mod experiments;
pub mod gcn;
pub mod graph;
pub mod output;
pub mod seed;
pub mod spectral;

pub use error::{Error, Result};
