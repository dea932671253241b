//! Randomized checks of every energy inequality.
//!
//! ```bash
//! cargo run --release --example verify_bounds -- 200
//! ```

use oversmooth::bounds::suite::run_suite;
use oversmooth::bounds::Statement;

fn main() -> oversmooth::Result<()> {
    let trials = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(25);
    for statement in Statement::ALL {
        let run = run_suite(statement, trials, 42)?;
        let s = run.summary();
        println!(
            "{:5} passed={:4} failed={} informational={:3} min_bound_violations={:3} worst_rel_margin={:.3e}",
            s.statement, s.passed, s.failed, s.informational, s.min_bound_violations, s.worst_relative_margin
        );
        if let Some(c) = run.counterexamples.first() {
            println!(
                "      e.g. trial {} seed {}: {}",
                c.trial, c.seed, c.context
            );
        }
    }
    Ok(())
}
