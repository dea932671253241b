//! Polynomial filters: monotonicity gate, contraction factors and the
//! uniform `(1 - eps)^l` decay check.

use oversmooth::bounds::{verify_filter_decay, FilterDecayVerdict};
use oversmooth::energy::Embedding;
use oversmooth::gcn::{make_weights, Activation, LayerSpec};
use oversmooth::graph::{generate, GraphKind};
use oversmooth::spectral::{eigendecompose, filter_contraction, PolynomialFilter};

fn layers(filter: &PolynomialFilter, depth: usize) -> oversmooth::Result<Vec<LayerSpec>> {
    (0..depth)
        .map(|l| {
            LayerSpec::new(
                filter.clone(),
                vec![make_weights(2, 2, 1.0, l as u64)?],
                Activation::Relu,
            )
        })
        .collect()
}

fn main() -> oversmooth::Result<()> {
    let g = generate(GraphKind::Ring, 12, 0)?;
    let s = eigendecompose(&g.augmented_normalized_laplacian(), None)?;
    let x0 = Embedding::gaussian(12, 2, 4);

    for coeffs in [vec![1.0, -1.0], vec![1.0, -0.9, 0.2], vec![0.0, 1.0]] {
        let f = PolynomialFilter::new(coeffs.clone())?;
        let mono = f.check_monotone_decreasing(0.0, s.max_eigenvalue())?;
        let fc = filter_contraction(&f, &s)?;
        let outcome = verify_filter_decay(&g, &x0, &layers(&f, 15)?, 0.1)?;
        let verdict = match &outcome.verdict {
            FilterDecayVerdict::Holds => "holds".to_string(),
            FilterDecayVerdict::Violated => "violated".to_string(),
            FilterDecayVerdict::PreconditionFailed { layer, reason, .. } => {
                format!("n/a (layer {layer}: {reason})")
            }
        };
        println!(
            "{coeffs:?}: decreasing={} at_min={:.4} safe={:.4} -> {verdict}",
            mono.decreasing, fc.at_min, fc.safe
        );
    }
    Ok(())
}
