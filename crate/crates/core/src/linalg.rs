//! Dense complex linear algebra: a cyclic Jacobi eigensolver for Hermitian
//! matrices plus the small helpers the representation code leans on.

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

pub type CMatrix = DMatrix<Complex64>;

pub const MAX_SWEEPS: usize = 100;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },
    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector for `eigenvalues[k]`.
    pub eigenvectors: CMatrix,
    pub sweeps: usize,
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `max |H - H†|`.
pub fn hermiticity_residual(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for j in 0..n {
        for i in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi diagonalization of a complex Hermitian matrix.
///
/// Sweeps visit pairs `(p, q)` with `p < q` in row-major order. Each
/// rotation first removes the phase of `a_pq` and then applies the real
/// symmetric Jacobi rotation, so the off-diagonal pair is zeroed exactly.
/// Stops once the off-diagonal Frobenius norm is below `1e-12 · ‖H‖_F`.
pub fn hermitian_eigen(h: &CMatrix) -> Result<HermitianEigen, LinalgError> {
    let n = h.nrows();
    if n != h.ncols() {
        return Err(LinalgError::NotSquare {
            rows: n,
            cols: h.ncols(),
        });
    }
    let scale = max_abs(h).max(1.0);
    let residual = hermiticity_residual(h);
    if residual > 1e-10 * scale {
        return Err(LinalgError::NotHermitian { residual });
    }

    let mut a = h.clone();
    for i in 0..n {
        a[(i, i)] = Complex64::new(a[(i, i)].re, 0.0);
    }
    let mut v = identity(n);
    let target = 1e-12 * frobenius(&a).max(f64::MIN_POSITIVE);
    let mut sweeps = 0;

    while off_diagonal_norm(&a) > target {
        if sweeps == MAX_SWEEPS {
            return Err(LinalgError::NoConvergence {
                sweeps,
                off_norm: off_diagonal_norm(&a),
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let phase = apq / r;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * r);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                // V = diag(1, e^{-iφ}) · [[c, s], [-s, c]]
                let vpp = Complex64::new(c, 0.0);
                let vpq = Complex64::new(s, 0.0);
                let vqp = -phase.conj() * s;
                let vqq = phase.conj() * c;

                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * vpp + akq * vqp;
                    a[(k, q)] = akp * vpq + akq * vqq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = vpp.conj() * apk + vqp.conj() * aqk;
                    a[(q, k)] = vpq.conj() * apk + vqq.conj() * aqk;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * vpp + vkq * vqp;
                    v[(k, q)] = vkp * vpq + vkq * vqq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re).then(i.cmp(&j)));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors,
        sweeps,
    })
}

/// Orthonormal basis for the column space of `m`, by modified Gram-Schmidt
/// with two orthogonalization passes. Columns whose residual norm falls
/// below `tol` are dropped. Intended for projectors, whose columns are
/// either well inside the range or numerically zero after projection.
pub fn orthonormal_range(m: &CMatrix, tol: f64) -> CMatrix {
    let mut basis: Vec<nalgebra::DVector<Complex64>> = Vec::new();
    for j in 0..m.ncols() {
        let mut col = m.column(j).into_owned();
        for _ in 0..2 {
            for b in &basis {
                let overlap = b.dotc(&col);
                col -= b * overlap;
            }
        }
        let norm = col.norm();
        if norm > tol {
            basis.push(col / Complex64::new(norm, 0.0));
        }
        if basis.len() == m.nrows() {
            break;
        }
    }
    if basis.is_empty() {
        return CMatrix::zeros(m.nrows(), 0);
    }
    CMatrix::from_columns(&basis)
}
