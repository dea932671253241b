use rand::RngExt;

use super::{Edge, Graph};
use crate::error::{Error, Result};
use crate::seed;

/// Graph families with unit edge weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GraphKind {
    /// G(n, p): each pair is an edge independently with probability `p`.
    ErdosRenyi {
        p: f64,
    },
    Ring,
    /// Circulant graph joining `i` to `i ± 1, …, i ± k/2`; `k` even, `k < n`.
    KRegular {
        k: usize,
    },
    Complete,
    Path,
}

/// Generates a graph of the given family. Deterministic for fixed `(kind, n, seed)`;
/// only the Erdős–Rényi family consumes randomness.
pub fn generate(kind: GraphKind, n: usize, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(Error::validation("generator needs n >= 1"));
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    match kind {
        GraphKind::ErdosRenyi { p } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::validation(format!(
                    "edge probability {p} outside [0, 1]"
                )));
            }
            let mut rng = seed::rng(seed);
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.random::<f64>() < p {
                        pairs.push((u, v));
                    }
                }
            }
        }
        GraphKind::Ring => {
            for i in 0..n {
                let j = (i + 1) % n;
                if i != j {
                    pairs.push(ordered(i, j));
                }
            }
        }
        GraphKind::KRegular { k } => {
            if k % 2 != 0 || k >= n {
                return Err(Error::validation(format!(
                    "no circulant {k}-regular graph on {n} nodes (need k even and k < n)"
                )));
            }
            for i in 0..n {
                for off in 1..=k / 2 {
                    pairs.push(ordered(i, (i + off) % n));
                }
            }
        }
        GraphKind::Complete => {
            for u in 0..n {
                for v in (u + 1)..n {
                    pairs.push((u, v));
                }
            }
        }
        GraphKind::Path => {
            for i in 1..n {
                pairs.push((i - 1, i));
            }
        }
    }
    pairs.sort_unstable();
    pairs.dedup();
    let edges = pairs
        .into_iter()
        .map(|(u, v)| Edge { u, v, w: 1.0 })
        .collect();
    Ok(Graph::from_sorted_unchecked(n, edges))
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}
