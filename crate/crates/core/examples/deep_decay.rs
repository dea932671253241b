//! Energy of a 30-layer ReLU network decays at least as fast as the
//! product of its per-layer contraction factors.

use oversmooth::bounds::verify_decay;
use oversmooth::energy::Embedding;
use oversmooth::gcn::{make_weights, run_network, Activation, LayerSpec};
use oversmooth::graph::{generate, GraphKind};
use oversmooth::seed::derive_seed;
use oversmooth::spectral::{eigendecompose, PolynomialFilter};

fn main() -> oversmooth::Result<()> {
    let g = generate(GraphKind::ErdosRenyi { p: 0.15 }, 60, 3)?;
    let spectrum = eigendecompose(&g.augmented_normalized_laplacian(), None)?;
    let channels = 8;

    let layers = (0..30)
        .map(|l| {
            let w = make_weights(channels, channels, 1.1, derive_seed(5, l))?;
            LayerSpec::new(PolynomialFilter::propagation(), vec![w], Activation::Relu)
        })
        .collect::<oversmooth::Result<Vec<_>>>()?;

    let traj = run_network(&Embedding::gaussian(60, channels, 1), &layers, &spectrum)?;
    for r in traj.records.iter().step_by(5) {
        println!(
            "layer {:2}  energy {:.6e}  bound {:?}",
            r.layer, r.energy, r.bound_safe
        );
    }
    match traj.max_safe_factor() {
        Some(rho) if rho < 1.0 => {
            let d = verify_decay(&traj)?;
            println!(
                "rho {rho:.4}  holds {}  slope {:?} <= ln rho {:.4}",
                d.report.holds(),
                d.slope,
                d.log_rho
            );
        }
        other => println!("per-layer factor {other:?}; decay is not implied"),
    }
    Ok(())
}
