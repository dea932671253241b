//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when `verify` finds a failed check, 2 for bad
//! input (parse, validation, io, unmet preconditions), 3 for numerical failures.
//! Bound verdicts of `run` are data and never change the exit code.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::bounds::suite::{run_suite, SuiteRun, SuiteSelection, SuiteSummary};
use crate::bounds::{verify_decay, verify_filter_decay, FilterDecayVerdict};
use crate::config::RunConfig;
use crate::energy::{dirichlet_energy, dirichlet_energy_edge_sum, rayleigh_quotient, Embedding};
use crate::error::{Error, Result};
use crate::experiments::{
    duality_report, energy_increase_fractions, run_sweep, SweepConfig, DUALITY_HEADER,
};
use crate::gcn::{run_network, Trajectory};
use crate::graph::GraphSource;
use crate::output::{body, float, header, opt_float, write_file};
use crate::spectral::{contraction_factors, eigendecompose};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "oversmooth",
    version,
    about = "Dirichlet-energy analysis of deep GCNs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RunMode {
    Standard,
    FilterDecay,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues and contraction factors of the augmented normalized Laplacian.
    Spectrum {
        /// Edge-list file or generator spec such as gen:erdos-renyi:100:0.1:7.
        #[arg(long)]
        graph: GraphSource,
        /// Eigenvalue CSV; printed to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Eigenvalues at or below this are treated as zero.
        #[arg(long)]
        zero_tol: Option<f64>,
    },
    /// Dirichlet energy of a signal on a graph.
    Energy {
        #[arg(long)]
        graph: GraphSource,
        /// CSV file (one row per node) or random:CHANNELS:SEED.
        #[arg(long)]
        signal: String,
    },
    /// Runs a network from a TOML config and records the energy at every depth.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "standard")]
        mode: RunMode,
        /// Overrides the config's epsilon (filter-decay mode).
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Checks the energy bounds on seeded random instances.
    Verify {
        /// propagation, weights, activation, layer, decay, filter, filter-decay or all.
        #[arg(long, default_value = "all")]
        suite: SuiteSelection,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Directory for per-suite CSVs, summary.toml and counterexample fixtures.
        #[arg(long)]
        out: PathBuf,
    },
    /// Edge-drop and weight-boost sweep from a TOML config.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Duality CSV; defaults to the rows file with extension `duality.csv`.
        #[arg(long)]
        duality: Option<PathBuf>,
    },
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_numeric() {
        EXIT_NUMERIC
    } else {
        EXIT_INPUT
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Runs the process: reads `std::env::args` and writes to stdout and stderr.
pub fn main() -> i32 {
    run(
        std::env::args_os(),
        &mut std::io::stdout(),
        &mut std::io::stderr(),
    )
}

fn io_err(e: std::io::Error) -> Error {
    Error::Io {
        path: "<stdout>".into(),
        source: e,
    }
}

fn execute(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Spectrum {
            graph,
            out: path,
            zero_tol,
        } => spectrum(&graph, path.as_deref(), zero_tol, out, err),
        Command::Energy { graph, signal } => energy(&graph, &signal, out),
        Command::Run {
            config,
            out: path,
            mode,
            epsilon,
        } => run_config(&config, &path, mode, epsilon, out, err),
        Command::Verify {
            suite,
            trials,
            seed,
            out: dir,
        } => verify(suite, trials, seed, &dir, out),
        Command::Sweep {
            config,
            out: path,
            duality,
        } => sweep(&config, &path, duality, out, err),
    }
}

fn spectrum(
    source: &GraphSource,
    path: Option<&Path>,
    zero_tol: Option<f64>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    let g = source.load()?;
    let s = eigendecompose(&g.augmented_normalized_laplacian(), zero_tol)?;
    let resolved = format!(
        "command = \"spectrum\"\ngraph = \"{source}\"\nzero_tol = {}\n",
        float(s.zero_tol())
    );
    let mut text = header(&resolved, source.seed());
    text.push_str("index,eigenvalue,is_zero\n");
    for (i, l) in s.eigenvalues().iter().enumerate() {
        text.push_str(&format!("{i},{},{}\n", float(*l), s.is_zero(*l)));
    }
    for l in s.eigenvalues() {
        if *l < -s.zero_tol() || *l >= 2.0 {
            writeln!(err, "warning: eigenvalue {l:e} outside [0, 2)").map_err(io_err)?;
        }
    }
    let components = g.connected_components().len();
    let summary = match contraction_factors(&s) {
        Ok(c) => {
            if c.kernel_dim != components {
                writeln!(
                    err,
                    "warning: kernel dimension {} differs from component count {components}",
                    c.kernel_dim
                )
                .map_err(io_err)?;
            }
            if c.lambda_bar_safe >= 1.0 {
                writeln!(
                    err,
                    "warning: safe contraction factor {} >= 1",
                    c.lambda_bar_safe
                )
                .map_err(io_err)?;
            }
            format!(
                "nodes={} edges={} components={components} kernel_dim={} lambda_min_nonzero={} lambda_bar_min={} lambda_bar_safe={}",
                g.node_count(),
                g.edge_count(),
                c.kernel_dim,
                float(c.lambda_min_nonzero),
                float(c.lambda_bar_min),
                float(c.lambda_bar_safe)
            )
        }
        Err(Error::DegenerateSpectrum) => format!(
            "nodes={} edges={} components={components} kernel_dim={} lambda_min_nonzero=undefined",
            g.node_count(),
            g.edge_count(),
            s.kernel_dim()
        ),
        Err(e) => return Err(e),
    };
    match path {
        Some(p) => write_file(p, &text)?,
        None => out.write_all(text.as_bytes()).map_err(io_err)?,
    }
    writeln!(out, "{summary}").map_err(io_err)?;
    Ok(EXIT_OK)
}

/// Reads `random:C:SEED` or a CSV path.
fn load_signal(spec: &str, rows: usize) -> Result<Embedding> {
    if let Some(rest) = spec.strip_prefix("random:") {
        let parts: Vec<&str> = rest.split(':').collect();
        let bad = || Error::Validation(format!("signal {spec:?}: expected random:CHANNELS:SEED"));
        let [c, seed] = parts.as_slice() else {
            return Err(bad());
        };
        let c: usize = c.parse().map_err(|_| bad())?;
        let seed: u64 = seed.parse().map_err(|_| bad())?;
        if c == 0 {
            return Err(bad());
        }
        return Ok(Embedding::gaussian(rows, c, seed));
    }
    let text = std::fs::read_to_string(spec).map_err(|source| Error::Io {
        path: spec.into(),
        source,
    })?;
    Embedding::from_csv(&text)
}

fn energy(source: &GraphSource, signal: &str, out: &mut dyn Write) -> Result<i32> {
    let g = source.load()?;
    let x = load_signal(signal, g.node_count())?;
    let lap = g.augmented_normalized_laplacian();
    let e = dirichlet_energy(&x, &lap)?;
    let e_edges = dirichlet_energy_edge_sum(&x, &g)?;
    let rq = if x.norm_squared() > 0.0 {
        float(rayleigh_quotient(&x, &lap)?)
    } else {
        "undefined".into()
    };
    writeln!(
        out,
        "nodes={} channels={} energy={} energy_edge_sum={} rayleigh={rq}",
        x.rows(),
        x.cols(),
        float(e),
        float(e_edges)
    )
    .map_err(io_err)?;
    Ok(EXIT_OK)
}

fn trajectory_csv(traj: Option<&Trajectory>) -> String {
    let mut s = String::from("layer,energy,rayleigh,bound_min,bound_safe,channels\n");
    for r in traj.map(|t| t.records.as_slice()).unwrap_or_default() {
        s.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.layer,
            float(r.energy),
            opt_float(r.rayleigh),
            opt_float(r.bound_min),
            opt_float(r.bound_safe),
            r.channels
        ));
    }
    s
}

fn standard_summary(traj: &Trajectory) -> Result<Vec<String>> {
    let energies = traj.energies();
    let mut lines = vec![format!(
        "depth={} energy_0={} energy_L={}",
        traj.depth(),
        float(energies[0]),
        float(*energies.last().unwrap())
    )];
    match traj.max_safe_factor() {
        None => lines.push("max_factor=undefined decay=not_checked".into()),
        Some(rho) if rho >= 1.0 => {
            lines.push(format!("max_factor={} decay=not_implied", float(rho)));
        }
        Some(rho) => {
            let d = verify_decay(traj)?;
            lines.push(format!(
                "max_factor={} decay_bound={} rhs={} slope={} log_rho={} slope_ok={}",
                float(rho),
                if d.report.holds() {
                    "holds"
                } else {
                    "violated"
                },
                float(d.report.rhs_min),
                d.slope.map(float).unwrap_or_else(|| "undefined".into()),
                float(d.log_rho),
                d.slope_ok
            ));
        }
    }
    Ok(lines)
}

fn run_config(
    config: &Path,
    path: &Path,
    mode: RunMode,
    epsilon: Option<f64>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    let mut cfg = RunConfig::load(config)?;
    if epsilon.is_some() {
        cfg.epsilon = epsilon;
    }
    let setup = cfg.build()?;
    for (l, spec) in setup.layers.iter().enumerate() {
        if !spec.activation.contracts_energy_on(&setup.graph) {
            writeln!(
                err,
                "warning: layer {l}: {} is not guaranteed to contract energy on this graph",
                spec.activation
            )
            .map_err(io_err)?;
        }
    }
    let (traj, summary) = match mode {
        RunMode::Standard => {
            let s = eigendecompose(&setup.graph.augmented_normalized_laplacian(), None)?;
            let traj = run_network(&setup.x0, &setup.layers, &s)?;
            let summary = standard_summary(&traj)?;
            (Some(traj), summary)
        }
        RunMode::FilterDecay => {
            let eps = setup.epsilon.ok_or_else(|| {
                Error::Validation("filter-decay mode needs epsilon (config or --epsilon)".into())
            })?;
            let o = verify_filter_decay(&setup.graph, &setup.x0, &setup.layers, eps)?;
            let line = match &o.verdict {
                FilterDecayVerdict::Holds => "verdict=holds".to_string(),
                FilterDecayVerdict::Violated => "verdict=violated".to_string(),
                FilterDecayVerdict::PreconditionFailed {
                    layer,
                    reason,
                    witness,
                } => format!(
                    "verdict=precondition_failed layer={layer} witness={} reason=\"{reason}\"",
                    witness.map(float).unwrap_or_else(|| "none".into())
                ),
            };
            let mut lines = vec![format!("epsilon={} {line}", float(eps))];
            if let Some(d) = &o.decay {
                lines.push(format!(
                    "decay_check={} worst_relative_margin={}",
                    if d.holds() { "holds" } else { "violated" },
                    float(d.relative_margin())
                ));
            }
            if let Some(t) = &o.trajectory {
                lines.extend(standard_summary(t)?.into_iter().take(1));
            }
            (o.trajectory, lines)
        }
    };
    let mut text = header(&cfg.to_toml(), Some(cfg.seed));
    text.push_str(&trajectory_csv(traj.as_ref()));
    for l in &summary {
        text.push_str(&format!("# summary: {l}\n"));
    }
    write_file(path, &text)?;
    for l in &summary {
        writeln!(out, "{l}").map_err(io_err)?;
    }
    Ok(EXIT_OK)
}

const REPORT_HEADER: &str =
    "statement,trial,seed,lhs,rhs_min,rhs_safe,margin,holds_min,holds_safe,vacuous,asserted,context";

fn suite_csv(run: &SuiteRun) -> String {
    let mut s = String::from(REPORT_HEADER);
    s.push('\n');
    for t in &run.reports {
        let r = &t.report;
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.statement,
            t.trial,
            t.seed,
            float(r.lhs),
            float(r.rhs_min),
            opt_float(r.rhs_safe),
            float(r.margin),
            r.holds_min,
            r.holds_safe.map(|b| b.to_string()).unwrap_or_default(),
            r.vacuous,
            r.asserted,
            r.context.replace(',', ";")
        ));
    }
    s
}

#[derive(serde::Serialize)]
struct SummaryFile {
    suite: Vec<SuiteSummary>,
}

fn verify(
    selection: SuiteSelection,
    trials: usize,
    seed: u64,
    dir: &Path,
    out: &mut dyn Write,
) -> Result<i32> {
    let resolved = format!(
        "command = \"verify\"\nsuite = \"{selection}\"\ntrials = {trials}\nseed = {seed}\n"
    );
    let mut summaries = Vec::new();
    let mut ok = true;
    for statement in selection.statements() {
        let run = run_suite(statement, trials, seed)?;
        let id = statement.id();
        write_file(
            &dir.join(format!("{id}.csv")),
            &(header(&resolved, Some(seed)) + &suite_csv(&run)),
        )?;
        for (i, c) in run.counterexamples.iter().enumerate() {
            write_file(
                &dir.join("counterexamples")
                    .join(format!("{id}-{:04}-{i}.txt", c.trial)),
                &c.to_fixture(),
            )?;
        }
        let s = run.summary();
        writeln!(
            out,
            "{} passed={} failed={} vacuous={} informational={} skipped={} min_bound_violations={} worst_relative_margin={}",
            s.statement,
            s.passed,
            s.failed,
            s.vacuous,
            s.informational,
            s.skipped,
            s.min_bound_violations,
            float(s.worst_relative_margin)
        )
        .map_err(io_err)?;
        ok &= run.all_pass();
        summaries.push(s);
    }
    let toml_text = toml::to_string(&SummaryFile { suite: summaries })
        .map_err(|e| Error::Validation(format!("summary serialization: {e}")))?;
    write_file(
        &dir.join("summary.toml"),
        &(header(&resolved, Some(seed)) + &toml_text),
    )?;
    writeln!(out, "result={}", if ok { "pass" } else { "fail" }).map_err(io_err)?;
    Ok(if ok { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn sweep(
    config: &Path,
    path: &Path,
    duality: Option<PathBuf>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    let cfg = SweepConfig::load(config)?;
    let result = run_sweep(&cfg)?;
    let resolved = cfg.to_toml() + "edge_selection = \"uniform\"\n";
    let head = header(&resolved, Some(cfg.base_seed));
    write_file(path, &(head.clone() + &result.to_csv()))?;
    writeln!(
        out,
        "rows={} base_edges={} base_components={}",
        result.rows.len(),
        result.base_edges,
        result.base_components
    )
    .map_err(io_err)?;
    let degenerate = result.rows.iter().filter(|r| r.degenerate).count();
    if degenerate > 0 {
        writeln!(err, "warning: {degenerate} perturbations left no edges").map_err(io_err)?;
    }
    for f in energy_increase_fractions(&result.rows) {
        writeln!(
            out,
            "drop_ratio={} energy_increased={}/{}",
            float(f.drop_ratio),
            f.increased,
            f.total
        )
        .map_err(io_err)?;
        if f.fraction() <= 0.5 {
            writeln!(
                err,
                "warning: dropping {} of the edges raised the probe energy in only {} of {} trials",
                f.drop_ratio, f.increased, f.total
            )
            .map_err(io_err)?;
        }
    }
    if !cfg.drop_ratios.is_empty() && !cfg.boost_counts.is_empty() {
        let entries = duality_report(&result.rows)?;
        let mut text = head + DUALITY_HEADER + "\n";
        for e in &entries {
            text.push_str(&e.to_csv());
            text.push('\n');
        }
        let dpath = duality.unwrap_or_else(|| path.with_extension("duality.csv"));
        write_file(&dpath, &text)?;
        writeln!(out, "duality={}", dpath.display()).map_err(io_err)?;
    }
    Ok(EXIT_OK)
}

/// Output files of a verify run with comment lines removed, keyed by relative path.
pub fn verify_bodies(dir: &Path) -> Result<Vec<(String, String)>> {
    let mut files = Vec::new();
    collect(dir, dir, &mut files)?;
    files.sort();
    files
        .into_iter()
        .map(|(rel, p)| {
            let text = std::fs::read_to_string(&p).map_err(|source| Error::Io {
                path: p.display().to_string(),
                source,
            })?;
            Ok((rel, body(&text)))
        })
        .collect()
}

fn collect(root: &Path, dir: &Path, files: &mut Vec<(String, PathBuf)>) -> Result<()> {
    let entries = std::fs::read_dir(dir).map_err(|source| Error::Io {
        path: dir.display().to_string(),
        source,
    })?;
    for entry in entries {
        let entry = entry.map_err(|source| Error::Io {
            path: dir.display().to_string(),
            source,
        })?;
        let p = entry.path();
        if p.is_dir() {
            collect(root, &p, files)?;
        } else {
            let rel = p.strip_prefix(root).unwrap_or(&p).display().to_string();
            files.push((rel, p));
        }
    }
    Ok(())
}
