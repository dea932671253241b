//! Independent reference implementations used to cross-check the library.
//! Plain `Vec` arithmetic only; nothing here calls into nalgebra.
#![allow(dead_code)]

use oversmooth::graph::Graph;

pub type Dense = Vec<Vec<f64>>;

/// `I - D^-1/2 (A + I) D^-1/2` built directly from the edge list.
pub fn laplacian(g: &Graph) -> Dense {
    let n = g.node_count();
    let mut a = vec![vec![0.0; n]; n];
    for e in g.edges() {
        a[e.u][e.v] += e.w;
        a[e.v][e.u] += e.w;
    }
    let d: Vec<f64> = (0..n).map(|i| 1.0 + a[i].iter().sum::<f64>()).collect();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let aij = a[i][j] + if i == j { 1.0 } else { 0.0 };
            l[i][j] = if i == j { 1.0 } else { 0.0 } - aij / (d[i] * d[j]).sqrt();
        }
    }
    l
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn jacobi_eigenvalues(m: &Dense) -> Vec<f64> {
    let n = m.len();
    let mut a = m.clone();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |j| *j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        let scale: f64 = (0..n).map(|i| a[i][i] * a[i][i]).sum::<f64>().max(1e-300);
        if off <= 1e-30 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (akp, akq) = (row[p], row[q]);
                    row[p] = c * akp - s * akq;
                    row[q] = s * akp + c * akq;
                }
                let (rp, rq) = (a[p].clone(), a[q].clone());
                for (k, (apk, aqk)) in rp.into_iter().zip(rq).enumerate() {
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Largest singular value by power iteration on `WᵀW`.
pub fn power_top_singular(w: &nalgebra::DMatrix<f64>) -> f64 {
    let (r, c) = (w.nrows(), w.ncols());
    let rows: Dense = (0..r)
        .map(|i| (0..c).map(|j| w[(i, j)]).collect())
        .collect();
    // deterministic, generic start vector
    let mut v: Vec<f64> = (0..c)
        .map(|j| 1.0 + 0.37 * j as f64 + (j as f64).sin())
        .collect();
    let mut sigma2 = 0.0;
    for _ in 0..20_000 {
        let wv: Vec<f64> = rows
            .iter()
            .map(|row| row.iter().zip(&v).map(|(a, b)| a * b).sum())
            .collect();
        let mut wtwv = vec![0.0; c];
        for (i, row) in rows.iter().enumerate() {
            for j in 0..c {
                wtwv[j] += row[j] * wv[i];
            }
        }
        let norm = wtwv.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        let vnorm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let next = norm / vnorm;
        v = wtwv.iter().map(|x| x / norm).collect();
        if (next - sigma2).abs() <= 1e-15 * next {
            sigma2 = next;
            break;
        }
        sigma2 = next;
    }
    sigma2.sqrt()
}

/// `tr(Xᵀ L X)` by explicit triple loop.
pub fn energy(x: &nalgebra::DMatrix<f64>, l: &Dense) -> f64 {
    let n = l.len();
    let mut e = 0.0;
    for c in 0..x.ncols() {
        for i in 0..n {
            for j in 0..n {
                e += x[(i, c)] * l[i][j] * x[(j, c)];
            }
        }
    }
    e
}

/// Component count by union-find.
pub fn component_count(g: &Graph) -> usize {
    let n = g.node_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for e in g.edges() {
        let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
        if a != b {
            parent[a] = b;
        }
    }
    (0..n).filter(|&i| find(&mut parent, i) == i).count()
}
