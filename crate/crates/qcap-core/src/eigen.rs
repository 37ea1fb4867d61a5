//! Hermitian eigenvalues via cyclic Jacobi rotations.
//!
//! A Hermitian matrix H = A + iB embeds into the real symmetric matrix
//! [[A, −B], [B, A]] whose spectrum is that of H with every eigenvalue
//! doubled. Jacobi on the embedding is slower than tridiagonalization but
//! unconditionally convergent, which is all that matters at the dimensions
//! (≤ 32 after embedding) this crate works with.

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// Hermiticity tolerance demanded of inputs: ‖M − M†‖_max ≤ 1e-10.
pub const HERMITICITY_TOL: f64 = 1e-10;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues of a Hermitian matrix, sorted in descending order.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let embedded = embed(m)?;
    let n = 2 * m.dim();
    let (values, _) = jacobi(embedded, n)?;
    Ok(collapse_pairs(values))
}

/// Builds the 2d×2d real-symmetric embedding of (M + M†)/2.
fn embed(m: &ComplexMatrix) -> Result<Vec<f64>> {
    if !m.is_square() {
        return Err(Error::Shape(format!(
            "eigensolver expects a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if m.hermiticity_defect() > HERMITICITY_TOL {
        return Err(Error::Precondition(format!(
            "matrix is not Hermitian within {HERMITICITY_TOL:e} (defect {:.3e})",
            m.hermiticity_defect()
        )));
    }
    let d = m.dim();
    let n = 2 * d;
    let mut s = vec![0.0f64; n * n];
    for i in 0..d {
        for j in 0..d {
            // Symmetrize to strip the allowed hermiticity defect.
            let h = (m.get(i, j) + m.get(j, i).conj()) * 0.5;
            s[i * n + j] = h.re;
            s[i * n + (j + d)] = -h.im;
            s[(i + d) * n + j] = h.im;
            s[(i + d) * n + (j + d)] = h.re;
        }
    }
    Ok(s)
}

/// Cyclic Jacobi on a dense symmetric matrix. Returns eigenvalues
/// (descending) and the accumulated rotation matrix (columns are
/// eigenvectors, same order).
fn jacobi(mut s: Vec<f64>, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut v = vec![0.0f64; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale = (0..n * n).map(|k| s[k] * s[k]).sum::<f64>().sqrt().max(1.0);

    for _sweep in 0..MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += 2.0 * s[p * n + q] * s[p * n + q];
            }
        }
        if off.sqrt() <= 1e-14 * scale {
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| s[b * n + b].partial_cmp(&s[a * n + a]).unwrap());
            let values: Vec<f64> = order.iter().map(|&i| s[i * n + i]).collect();
            let mut vectors = vec![0.0f64; n * n];
            for (new_col, &old_col) in order.iter().enumerate() {
                for r in 0..n {
                    vectors[r * n + new_col] = v[r * n + old_col];
                }
            }
            return Ok((values, vectors));
        }

        for p in 0..n {
            for q in (p + 1)..n {
                let apq = s[p * n + q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let app = s[p * n + p];
                let aqq = s[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * c;

                for k in 0..n {
                    let t1 = s[k * n + p];
                    let t2 = s[k * n + q];
                    s[k * n + p] = c * t1 - sn * t2;
                    s[k * n + q] = sn * t1 + c * t2;
                }
                for k in 0..n {
                    let t1 = s[p * n + k];
                    let t2 = s[q * n + k];
                    s[p * n + k] = c * t1 - sn * t2;
                    s[q * n + k] = sn * t1 + c * t2;
                }
                for k in 0..n {
                    let t1 = v[k * n + p];
                    let t2 = v[k * n + q];
                    v[k * n + p] = c * t1 - sn * t2;
                    v[k * n + q] = sn * t1 + c * t2;
                }
            }
        }
    }
    Err(Error::Numerical(format!(
        "Jacobi failed to converge within {MAX_SWEEPS} sweeps"
    )))
}

/// The embedding doubles every eigenvalue; average the adjacent pairs of the
/// descending list to undo it.
fn collapse_pairs(values: Vec<f64>) -> Vec<f64> {
    values
        .chunks_exact(2)
        .map(|pair| 0.5 * (pair[0] + pair[1]))
        .collect()
}
