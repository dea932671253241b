//! Drop random edges or boost a few weights and watch the spectrum and the
//! energy of a fixed probe field move.

use oversmooth::experiments::{
    duality_report, energy_increase_fractions, run_sweep, Probe, SweepConfig,
};

fn main() -> oversmooth::Result<()> {
    let cfg = SweepConfig {
        graph: "gen:erdos-renyi:80:0.1:3".parse()?,
        drop_ratios: vec![0.1, 0.3, 0.5],
        boost_counts: vec![5, 20],
        boost_factor: 10_000.0,
        trials: 10,
        base_seed: 1,
        probe: Probe::FixedField {
            channels: 4,
            seed: 0,
        },
    };
    let sweep = run_sweep(&cfg)?;
    println!(
        "base: {} edges, {} components",
        sweep.base_edges, sweep.base_components
    );

    for f in energy_increase_fractions(&sweep.rows) {
        println!(
            "drop {:.1}: energy rose in {}/{} trials",
            f.drop_ratio, f.increased, f.total
        );
    }
    for d in duality_report(&sweep.rows)? {
        println!(
            "boost {:2} vs drop {:.1}: |dlambda gap| {:.4e}  |dE gap| {:.4e}",
            d.boost_count, d.drop_ratio, d.mean_abs_lambda_gap, d.mean_abs_energy_gap
        );
    }
    Ok(())
}
