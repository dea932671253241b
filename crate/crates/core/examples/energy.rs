//! Dirichlet energy computed as a trace and as an edge sum.

use oversmooth::energy::{
    dirichlet_energy, dirichlet_energy_edge_sum, rayleigh_quotient, Embedding,
};
use oversmooth::graph::Graph;

fn main() -> oversmooth::Result<()> {
    // weighted triangle with a pendant node
    let g = Graph::new(4, [(0, 1, 1.0), (1, 2, 2.0), (0, 2, 0.5), (2, 3, 1.0)])?;
    let lap = g.augmented_normalized_laplacian();

    let x = Embedding::gaussian(4, 3, 11);
    println!("trace form     {:.12}", dirichlet_energy(&x, &lap)?);
    println!("edge sum       {:.12}", dirichlet_energy_edge_sum(&x, &g)?);
    println!("rayleigh       {:.12}", rayleigh_quotient(&x, &lap)?);

    // sqrt of the augmented degrees spans the kernel of a connected graph
    let kernel: Vec<f64> = g.augmented_degrees().iter().map(|d| d.sqrt()).collect();
    let k = Embedding::column(&kernel)?;
    println!("kernel energy  {:.3e}", dirichlet_energy(&k, &lap)?);
    Ok(())
}
