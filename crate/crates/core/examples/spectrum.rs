//! Eigenvalues and contraction factors of a few small graphs.
//!
//! ```bash
//! cargo run --example spectrum
//! ```

use oversmooth::graph::{generate, GraphKind};
use oversmooth::spectral::{contraction_factors, eigendecompose};

fn main() -> oversmooth::Result<()> {
    let graphs = [
        ("path(3)", generate(GraphKind::Path, 3, 0)?),
        ("ring(8)", generate(GraphKind::Ring, 8, 0)?),
        ("complete(5)", generate(GraphKind::Complete, 5, 0)?),
        (
            "er(40, 0.1)",
            generate(GraphKind::ErdosRenyi { p: 0.1 }, 40, 7)?,
        ),
    ];
    for (name, g) in &graphs {
        let s = eigendecompose(&g.augmented_normalized_laplacian(), None)?;
        let c = contraction_factors(&s)?;
        println!(
            "{name:12} components={} kernel={} lambda_min={:.6} lambda_max={:.6} at_min={:.6} safe={:.6}",
            g.connected_components().len(),
            c.kernel_dim,
            c.lambda_min_nonzero,
            s.max_eigenvalue(),
            c.lambda_bar_min,
            c.lambda_bar_safe
        );
    }
    Ok(())
}
