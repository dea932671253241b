//! Which activations can raise Dirichlet energy.
//!
//! ReLU and leaky ReLU never do. Tanh and sigmoid are only guaranteed not to
//! on regular graphs; on a star they can.

use oversmooth::bounds::verify_activation;
use oversmooth::energy::Embedding;
use oversmooth::gcn::Activation;
use oversmooth::graph::{generate, Graph, GraphKind};

fn main() -> oversmooth::Result<()> {
    let ring = generate(GraphKind::Ring, 10, 0)?;
    let star = Graph::new(6, (1..6).map(|v| (0, v, 1.0)))?;
    let acts = [
        Activation::Relu,
        Activation::leaky_relu(0.2)?,
        Activation::Tanh,
        Activation::Sigmoid,
    ];

    for (name, g) in [("ring", &ring), ("star", &star)] {
        let x = Embedding::gaussian(g.node_count(), 3, 9).scaled(3.0);
        for act in acts {
            let r = verify_activation(g, &x, act)?;
            println!(
                "{name} {act:14} E(sigma X)={:.4} E(X)={:.4} holds={} guaranteed={}",
                r.lhs,
                r.rhs_min,
                r.holds(),
                r.asserted
            );
        }
    }
    Ok(())
}
