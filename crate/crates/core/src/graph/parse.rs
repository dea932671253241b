use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::{check_edge, generate, Edge, Graph, GraphKind};
use crate::error::{Error, Result};

/// Parses an edge-list document.
///
/// Each non-empty line is `u v` or `u v w` separated by whitespace; `#`
/// starts a comment. LF and CRLF line endings are accepted. Reversed
/// duplicates are merged by summing weights; the weight defaults to 1.0.
/// The node count is `max id + 1`, or `n_hint` when that is larger.
pub fn from_edge_list(text: &str, n_hint: Option<usize>) -> Result<Graph> {
    let mut merged: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    let mut max_id: Option<usize> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.len() != 2 && tokens.len() != 3 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected `u v` or `u v w`, found {} fields", tokens.len()),
            });
        }
        let node = |t: &str| {
            t.parse::<usize>().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("invalid node id `{t}`"),
            })
        };
        let u = node(tokens[0])?;
        let v = node(tokens[1])?;
        let w = match tokens.get(2) {
            Some(t) => t.parse::<f64>().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("invalid weight `{t}`"),
            })?,
            None => 1.0,
        };
        let edge = check_edge(usize::MAX, u, v, w).map_err(|e| match e {
            Error::Validation(m) => Error::Validation(format!("line {line_no}: {m}")),
            other => other,
        })?;
        max_id = Some(max_id.map_or(edge.v, |m| m.max(edge.v)));
        *merged.entry((edge.u, edge.v)).or_insert(0.0) += edge.w;
    }

    let n = max_id.map_or(0, |m| m + 1).max(n_hint.unwrap_or(0));
    if n == 0 {
        return Err(Error::validation("edge list defines no nodes"));
    }
    let edges = merged
        .into_iter()
        .map(|((u, v), w)| Edge { u, v, w })
        .collect();
    Ok(Graph::from_sorted_unchecked(n, edges))
}

/// Where a graph comes from: an edge-list file or a generator mini-spec.
///
/// Generator specs have the form `gen:<kind>:<args>`:
///
/// ```text
/// gen:ring:N            gen:path:N           gen:complete:N
/// gen:kregular:N:K      gen:erdos-renyi:N:P[:SEED]   (alias gen:er)
/// ```
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum GraphSource {
    Generator {
        kind: GraphKind,
        n: usize,
        seed: u64,
    },
    File(PathBuf),
}

impl GraphSource {
    pub fn load(&self) -> Result<Graph> {
        match self {
            GraphSource::Generator { kind, n, seed } => generate(*kind, *n, *seed),
            GraphSource::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
                    path: path.display().to_string(),
                    source,
                })?;
                from_edge_list(&text, None)
            }
        }
    }

    /// Resolves a relative file path against `base`.
    pub fn relative_to(self, base: &Path) -> Self {
        match self {
            GraphSource::File(p) if p.is_relative() => GraphSource::File(base.join(p)),
            other => other,
        }
    }

    /// Seed used by the generator, if any.
    pub fn seed(&self) -> Option<u64> {
        match self {
            GraphSource::Generator { seed, .. } => Some(*seed),
            GraphSource::File(_) => None,
        }
    }
}

impl FromStr for GraphSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let Some(spec) = s.strip_prefix("gen:") else {
            return Ok(GraphSource::File(PathBuf::from(s)));
        };
        let parts: Vec<&str> = spec.split(':').collect();
        let bad = || Error::validation(format!("malformed generator spec `{s}`"));
        let int = |t: &str| t.parse::<usize>().map_err(|_| bad());
        let (kind, n, seed) = match parts.as_slice() {
            ["ring", n] => (GraphKind::Ring, int(n)?, 0),
            ["path", n] => (GraphKind::Path, int(n)?, 0),
            ["complete", n] => (GraphKind::Complete, int(n)?, 0),
            ["kregular", n, k] => (GraphKind::KRegular { k: int(k)? }, int(n)?, 0),
            ["er" | "erdos-renyi", n, p, rest @ ..] if rest.len() <= 1 => {
                let p = p.parse::<f64>().map_err(|_| bad())?;
                let seed = match rest {
                    [seed] => seed.parse::<u64>().map_err(|_| bad())?,
                    _ => 0,
                };
                (GraphKind::ErdosRenyi { p }, int(n)?, seed)
            }
            _ => return Err(bad()),
        };
        Ok(GraphSource::Generator { kind, n, seed })
    }
}

impl TryFrom<String> for GraphSource {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<GraphSource> for String {
    fn from(s: GraphSource) -> String {
        s.to_string()
    }
}

impl fmt::Display for GraphSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSource::File(p) => write!(f, "{}", p.display()),
            GraphSource::Generator { kind, n, seed } => match kind {
                GraphKind::Ring => write!(f, "gen:ring:{n}"),
                GraphKind::Path => write!(f, "gen:path:{n}"),
                GraphKind::Complete => write!(f, "gen:complete:{n}"),
                GraphKind::KRegular { k } => write!(f, "gen:kregular:{n}:{k}"),
                GraphKind::ErdosRenyi { p } => write!(f, "gen:erdos-renyi:{n}:{p}:{seed}"),
            },
        }
    }
}
