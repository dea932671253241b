//! Load an edge list and a run config from disk, then run the network.
//!
//! ```bash
//! cargo run --example from_config -- crates/core/examples/data/run.toml
//! ```

use std::path::PathBuf;

use oversmooth::config::RunConfig;
use oversmooth::gcn::run_network;
use oversmooth::spectral::eigendecompose;

fn main() -> oversmooth::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/data/run.toml")
        });
    let cfg = RunConfig::load(&path)?;
    let setup = cfg.build()?;
    println!(
        "graph {}: {} nodes, {} edges, {} layers",
        cfg.graph,
        setup.graph.node_count(),
        setup.graph.edge_count(),
        setup.layers.len()
    );
    let s = eigendecompose(&setup.graph.augmented_normalized_laplacian(), None)?;
    let traj = run_network(&setup.x0, &setup.layers, &s)?;
    for r in &traj.records {
        println!("{:2} {:.6e} channels={}", r.layer, r.energy, r.channels);
    }
    Ok(())
}
