mod common;

use nalgebra::DMatrix;
use oversmooth::bounds::suite::random_graph;
use oversmooth::energy::{dirichlet_energy, dirichlet_energy_edge_sum, Embedding};
use oversmooth::gcn::{make_weights, top_singular_value};
use oversmooth::seed::{derive_seed, rng};
use oversmooth::spectral::{eigendecompose, PolynomialFilter};

#[test]
fn eigenvalues_match_jacobi() {
    let mut r = rng(101);
    for _ in 0..60 {
        let g = random_graph(&mut r).unwrap();
        if g.node_count() > 40 {
            continue;
        }
        let ours = eigendecompose(&g.augmented_normalized_laplacian(), None).unwrap();
        let reference = common::jacobi_eigenvalues(&common::laplacian(&g));
        for (a, b) in ours.eigenvalues().iter().zip(&reference) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }
}

#[test]
fn laplacian_matches_reference_entries() {
    let mut r = rng(5);
    for _ in 0..30 {
        let g = random_graph(&mut r).unwrap();
        let ours = g.augmented_normalized_laplacian();
        let reference = common::laplacian(&g);
        for (i, row) in reference.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                assert!((ours.get(i, j) - v).abs() < 1e-14);
            }
        }
    }
}

#[test]
fn top_singular_value_matches_power_iteration() {
    for s in 0..200u64 {
        let rows = 1 + (derive_seed(s, 1) % 8) as usize;
        let cols = 1 + (derive_seed(s, 2) % 8) as usize;
        let w = DMatrix::from_fn(rows, cols, |i, j| {
            ((derive_seed(s, (i * 31 + j) as u64 + 10) % 2001) as f64 - 1000.0) / 300.0
        });
        let a = top_singular_value(&w);
        let b = common::power_top_singular(&w);
        assert!((a - b).abs() <= 1e-6 * a.max(1e-12), "seed {s}: {a} vs {b}");
    }
}

#[test]
fn generated_weights_hit_their_target() {
    for s in 0..50u64 {
        let target = 0.1 + (s as f64) * 0.07;
        let w = make_weights(3 + (s % 4) as usize, 2 + (s % 5) as usize, target, s).unwrap();
        assert!((common::power_top_singular(&w) - target).abs() < 1e-6 * target);
    }
}

#[test]
fn energy_matches_triple_loop() {
    let mut r = rng(77);
    for t in 0..100u64 {
        let g = random_graph(&mut r).unwrap();
        let x = Embedding::gaussian(g.node_count(), 1 + (t % 5) as usize, t);
        let reference = common::energy(x.as_matrix(), &common::laplacian(&g));
        let trace = dirichlet_energy(&x, &g.augmented_normalized_laplacian()).unwrap();
        let edges = dirichlet_energy_edge_sum(&x, &g).unwrap();
        let tol = 1e-10 * reference.abs().max(1.0);
        assert!((trace - reference).abs() <= tol);
        assert!((edges - reference).abs() <= tol);
    }
}

#[test]
fn components_match_union_find() {
    let mut r = rng(9);
    for _ in 0..100 {
        let g = random_graph(&mut r).unwrap();
        assert_eq!(g.connected_components().len(), common::component_count(&g));
    }
}

#[test]
fn filter_matrix_matches_horner_on_matrices() {
    // P(Δ̃) by explicit matrix powers against the spectral form
    let mut r = rng(3);
    let f = PolynomialFilter::new(vec![0.5, -1.2, 0.3, 0.1]).unwrap();
    for _ in 0..20 {
        let g = random_graph(&mut r).unwrap();
        let lap = g.augmented_normalized_laplacian();
        let s = eigendecompose(&lap, None).unwrap();
        let l = lap.as_matrix();
        let n = l.nrows();
        let mut acc = DMatrix::<f64>::zeros(n, n);
        let mut pow = DMatrix::<f64>::identity(n, n);
        for c in f.coefficients() {
            acc += &pow * *c;
            pow = &pow * l;
        }
        let spectral = f.eval_matrix(&s);
        assert!((spectral.as_matrix() - acc).amax() < 1e-10);
    }
}
