use rand::seq::index;

use super::Graph;
use crate::error::{Error, Result};
use crate::seed;

/// A seeded random edge operation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PerturbationPlan {
    /// Remove `drop_count(ratio, |E|)` edges chosen uniformly at random.
    DropEdges { ratio: f64, seed: u64 },
    /// Multiply the weights of `count` uniformly chosen edges by `factor`.
    BoostEdges {
        count: usize,
        factor: f64,
        seed: u64,
    },
}

/// Number of edges removed by a drop of `ratio` on `edges` edges: `⌈ratio·edges⌉`.
///
/// Products within `1e-9` of an integer are rounded first so that e.g.
/// `0.1 · 100` drops 10 edges rather than 11.
pub fn drop_count(ratio: f64, edges: usize) -> usize {
    let x = ratio * edges as f64;
    let r = x.round();
    if (x - r).abs() <= 1e-9 * r.max(1.0) {
        r as usize
    } else {
        x.ceil() as usize
    }
}

/// Applies `plan` to `g`. Node count never changes; boosting never changes
/// the edge set. Selection is uniform and reproducible per seed.
pub fn perturb(g: &Graph, plan: &PerturbationPlan) -> Result<Graph> {
    let m = g.edge_count();
    match *plan {
        PerturbationPlan::DropEdges { ratio, seed } => {
            if !(0.0..=1.0).contains(&ratio) {
                return Err(Error::validation(format!(
                    "drop ratio {ratio} outside [0, 1]"
                )));
            }
            let k = drop_count(ratio, m);
            let mut keep = vec![true; m];
            for i in index::sample(&mut seed::rng(seed), m, k) {
                keep[i] = false;
            }
            let edges = g
                .edges()
                .iter()
                .zip(&keep)
                .filter(|(_, &k)| k)
                .map(|(e, _)| *e)
                .collect();
            Ok(Graph::from_sorted_unchecked(g.node_count(), edges))
        }
        PerturbationPlan::BoostEdges {
            count,
            factor,
            seed,
        } => {
            if !(factor.is_finite() && factor >= 1.0) {
                return Err(Error::validation(format!(
                    "boost factor {factor} must be >= 1"
                )));
            }
            if count > m {
                return Err(Error::validation(format!(
                    "cannot boost {count} edges of a graph with {m}"
                )));
            }
            let mut edges = g.edges().to_vec();
            for i in index::sample(&mut seed::rng(seed), m, count) {
                edges[i].w *= factor;
            }
            Ok(Graph::from_sorted_unchecked(g.node_count(), edges))
        }
    }
}
