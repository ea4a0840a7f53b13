//! Cyclic Jacobi eigensolver for small dense symmetric matrices.
//!
//! PSD blocks in this artifact are at most a few dozen rows, where Jacobi
//! rotations give eigenpairs to near machine precision deterministically.

/// Eigenvalues (ascending) and matching orthonormal eigenvectors.
pub fn symmetric_eigen(a: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    debug_assert!(a.iter().all(|r| r.len() == n));
    if n == 0 {
        return (vec![], vec![]);
    }
    if n == 1 {
        return (vec![a[0][0]], vec![vec![1.0]]);
    }
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let scale = m
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |acc, x| acc.max(x.abs()))
        .max(1e-300);
    let tol = 1e-15 * scale;
    for _sweep in 0..64 {
        let mut off = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                off = off.max(m[i][j].abs());
            }
        }
        if off <= tol {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p][q];
                if apq.abs() <= tol * 1e-2 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[k][p], m[k][q]);
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[p][k], m[q][k]);
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[k][p], v[k][q]);
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i][i].partial_cmp(&m[j][j]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| m[i][i]).collect();
    let vecs: Vec<Vec<f64>> = order
        .iter()
        .map(|&col| (0..n).map(|row| v[row][col]).collect())
        .collect();
    (vals, vecs)
}

/// Minimum eigenvalue and a unit eigenvector.
pub fn min_eigenpair(a: &[Vec<f64>]) -> (f64, Vec<f64>) {
    let (vals, vecs) = symmetric_eigen(a);
    (vals[0], vecs.into_iter().next().unwrap_or_default())
}
