//! Cyclic Jacobi eigen-solver for small symmetric and Hermitian matrices.

use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 64;

/// Off-diagonal Frobenius norm, relative to the full norm, at which a sweep stops.
pub const JACOBI_TOLERANCE: f64 = 1e-13;

/// Eigenvalues (ascending) and column eigenvectors of a real symmetric matrix.
#[derive(Clone, Debug)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    /// `vectors[k][j]` is component `k` of eigenvector `j`.
    pub vectors: Vec<Vec<f64>>,
}

pub fn symmetric_eigen(matrix: &[Vec<f64>]) -> Result<SymmetricEigen> {
    let n = matrix.len();
    if matrix.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidInput("matrix is not square".into()));
    }
    let mut a: Vec<Vec<f64>> = matrix.to_vec();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let total: f64 = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
            .map(|(p, q)| 2.0 * a[p][q] * a[p][q])
            .sum::<f64>()
            .sqrt();
        if off <= JACOBI_TOLERANCE * total || off == 0.0 {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (theta * theta + 1.0).sqrt())
                } else {
                    -1.0 / (-theta + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (kp, kq) = (row[p], row[q]);
                    row[p] = c * kp - s * kq;
                    row[q] = s * kp + c * kq;
                }
                #[allow(clippy::needless_range_loop)]
                for k in 0..n {
                    let (pk, qk) = (a[p][k], a[q][k]);
                    a[p][k] = c * pk - s * qk;
                    a[q][k] = s * pk + c * qk;
                }
                for row in v.iter_mut() {
                    let (kp, kq) = (row[p], row[q]);
                    row[p] = c * kp - s * kq;
                    row[q] = s * kp + c * kq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::EigenFailure { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i][i].total_cmp(&a[j][j]));
    Ok(SymmetricEigen {
        values: order.iter().map(|&i| a[i][i]).collect(),
        vectors: (0..n)
            .map(|k| order.iter().map(|&j| v[k][j]).collect())
            .collect(),
    })
}

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// `H = X + iY` is embedded as the real symmetric `[[X, −Y], [Y, X]]`, whose
/// spectrum is that of `H` with every eigenvalue doubled.
pub fn hermitian_eigenvalues<const N: usize>(h: &[[Complex64; N]; N]) -> Result<Vec<f64>> {
    let mut embedded = vec![vec![0.0; 2 * N]; 2 * N];
    for i in 0..N {
        for j in 0..N {
            // Symmetrise so rounding in the input cannot break the real embedding.
            let z = 0.5 * (h[i][j] + h[j][i].conj());
            embedded[i][j] = z.re;
            embedded[i + N][j + N] = z.re;
            embedded[i][j + N] = -z.im;
            embedded[i + N][j] = z.im;
        }
    }
    let eig = symmetric_eigen(&embedded)?;
    Ok(eig.values.chunks(2).map(|pair| 0.5 * (pair[0] + pair[1])).collect())
}

pub(crate) fn is_hermitian<const N: usize>(m: &[[Complex64; N]; N], tol: f64) -> bool {
    (0..N).all(|i| (0..N).all(|j| (m[i][j] - m[j][i].conj()).norm() <= tol))
}

pub(crate) fn trace<const N: usize>(m: &[[Complex64; N]; N]) -> Complex64 {
    (0..N).map(|i| m[i][i]).sum()
}

pub(crate) fn matmul<const N: usize>(
    a: &[[Complex64; N]; N],
    b: &[[Complex64; N]; N],
) -> [[Complex64; N]; N] {
    let mut out = [[Complex64::new(0.0, 0.0); N]; N];
    for i in 0..N {
        for j in 0..N {
            out[i][j] = (0..N).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

/// Row-major `[re, im]` pairs, the JSON layout for density matrices.
pub(crate) fn complex_rows<const N: usize>(m: &[[Complex64; N]; N]) -> Vec<Vec<[f64; 2]>> {
    m.iter()
        .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
        .collect()
}
