//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.
//!
//! Each rotation diagonalizes one 2×2 Hermitian block in closed form and
//! applies the resulting unitary to the full matrix and to the accumulated
//! eigenvector matrix. Off-diagonal mass decreases monotonically, so the
//! sweep converges unconditionally; the eigenvector matrix is a product of
//! unitaries and therefore orthonormal to machine precision, including for
//! degenerate spectra. Every returned eigenpair is checked against a strict
//! residual contract before being handed to callers.

use nalgebra::{Complex, DMatrix, DVector};
use thiserror::Error;

/// Complex scalar used throughout the crate.
pub type C64 = Complex<f64>;
/// Dense complex matrix used throughout the crate.
pub type CMatrix = DMatrix<C64>;
/// Dense complex vector used throughout the crate.
pub type CVector = DVector<C64>;

/// Errors raised by the eigendecomposition layer.
#[derive(Debug, Error)]
pub enum EigenError {
    /// Input matrix was not square.
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    /// Input deviated from its Hermitian part by more than the allowed tolerance.
    #[error("matrix is not Hermitian: asymmetry {asymmetry:.3e} exceeds tolerance {tolerance:.3e}")]
    NotHermitian { asymmetry: f64, tolerance: f64 },
    /// Recovered basis failed the residual contract `‖Av - λv‖ ≤ 1e-10·‖A‖`.
    #[error("eigenpair residual {residual:.3e} exceeds {tolerance:.3e}")]
    ResidualTooLarge { residual: f64, tolerance: f64 },
}

/// Relative residual bound every returned eigenpair must satisfy.
pub const RESIDUAL_TOL: f64 = 1e-10;

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues are sorted in descending order and `vectors.column(j)` is a
/// unit eigenvector for `values[j]`; the columns are mutually orthonormal.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermitianEigen {
    /// Orthogonal projection onto the span of the selected eigenvectors.
    pub fn projection(&self, indices: &[usize]) -> CMatrix {
        let n = self.vectors.nrows();
        let mut p = CMatrix::zeros(n, n);
        for &j in indices {
            let v = self.vectors.column(j);
            // p += v v*
            for r in 0..n {
                for c in 0..n {
                    p[(r, c)] += v[r] * v[c].conj();
                }
            }
        }
        p
    }

    /// Indices of eigenvalues strictly below `s`, using `tol` as the equality margin.
    pub fn indices_below(&self, s: f64, tol: f64) -> Vec<usize> {
        (0..self.values.len())
            .filter(|&j| self.values[j] < s - tol)
            .collect()
    }

    /// Indices of eigenvalues equal to or below `s`, using `tol` as the equality margin.
    pub fn indices_at_or_below(&self, s: f64, tol: f64) -> Vec<usize> {
        (0..self.values.len())
            .filter(|&j| self.values[j] <= s + tol)
            .collect()
    }
}

/// Frobenius norm of a complex matrix.
pub fn fro_norm(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Hermitian part `(A + A*)/2`.
pub fn hermitian_part(a: &CMatrix) -> CMatrix {
    (a + a.adjoint()) * C64::new(0.5, 0.0)
}

/// Anti-Hermitian part divided by `i`, i.e. `(A - A*)/(2i)`; Hermitian for any input.
pub fn antihermitian_part(a: &CMatrix) -> CMatrix {
    (a - a.adjoint()) * C64::new(0.0, -0.5)
}

/// How far `a` is from being Hermitian, in Frobenius norm.
pub fn asymmetry(a: &CMatrix) -> f64 {
    fro_norm(&(a - a.adjoint()))
}

/// Cyclic Jacobi diagonalization of a Hermitian matrix (assumed Hermitian;
/// callers symmetrize first). Returns the unsorted diagonal and, on request,
/// the accumulated unitary whose columns are the eigenvectors.
fn jacobi(mut m: CMatrix, want_vectors: bool) -> (Vec<f64>, Option<CMatrix>) {
    let n = m.nrows();
    let mut v = if want_vectors {
        Some(CMatrix::identity(n, n))
    } else {
        None
    };
    let scale = fro_norm(&m).max(f64::MIN_POSITIVE);
    let stop = 1e-14 * scale;
    let skip = 0.1 * stop / n as f64;
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[(p, q)].norm_sqr();
            }
        }
        if (2.0 * off).sqrt() <= stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let g = m[(p, q)];
                let gn = g.norm();
                if gn <= skip {
                    continue;
                }
                // Closed-form eigenvectors of the 2×2 block [[α, g], [ḡ, β]].
                let alpha = m[(p, p)].re;
                let beta = m[(q, q)].re;
                let avg = 0.5 * (alpha + beta);
                let r = f64::hypot(0.5 * (alpha - beta), gn);
                let mu1 = avg + r;
                let mu2 = avg - r;
                // Top eigenvector, taking the algebraic form whose dominant
                // real component is the larger of μ1−α and μ1−β (≥ r > 0).
                let (a, b) = if beta >= alpha {
                    (g, C64::new(mu1 - alpha, 0.0))
                } else {
                    (C64::new(mu1 - beta, 0.0), g.conj())
                };
                let nrm = f64::hypot(a.norm(), b.norm());
                let j11 = a / nrm;
                let j21 = b / nrm;
                let j12 = -j21.conj();
                let j22 = j11.conj();
                // M ← J* M J, touching only rows/columns p and q.
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = mkp * j11 + mkq * j21;
                    m[(k, q)] = mkp * j12 + mkq * j22;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = j11.conj() * mpk + j21.conj() * mqk;
                    m[(q, k)] = j12.conj() * mpk + j22.conj() * mqk;
                }
                // The rotated block is diagonal by construction; write it
                // exactly to keep rounding from re-seeding the off-diagonal.
                m[(p, q)] = C64::new(0.0, 0.0);
                m[(q, p)] = C64::new(0.0, 0.0);
                m[(p, p)] = C64::new(mu1, 0.0);
                m[(q, q)] = C64::new(mu2, 0.0);
                if let Some(vm) = v.as_mut() {
                    for k in 0..n {
                        let vkp = vm[(k, p)];
                        let vkq = vm[(k, q)];
                        vm[(k, p)] = vkp * j11 + vkq * j21;
                        vm[(k, q)] = vkp * j12 + vkq * j22;
                    }
                }
            }
        }
    }
    let values: Vec<f64> = (0..n).map(|j| m[(j, j)].re).collect();
    (values, v)
}

/// Eigenvalues of a Hermitian matrix in descending order (no eigenvectors).
///
/// The input is symmetrized as `(A + A*)/2` before decomposition, so callers
/// may pass matrices that are Hermitian only up to rounding.
pub fn eigenvalues_descending(a: &CMatrix) -> Result<Vec<f64>, EigenError> {
    if a.nrows() != a.ncols() {
        return Err(EigenError::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    if a.nrows() == 0 {
        return Ok(Vec::new());
    }
    let (mut values, _) = jacobi(hermitian_part(a), false);
    values.sort_by(|x, y| y.partial_cmp(x).unwrap());
    Ok(values)
}

/// Full eigendecomposition of a Hermitian matrix.
///
/// The input is symmetrized as `(A + A*)/2` first. Returns eigenvalues in
/// descending order with an orthonormal eigenbasis; every returned pair is
/// checked against the residual contract `‖Av - λv‖ ≤ 1e-10·‖A‖`.
pub fn eigh(a: &CMatrix) -> Result<HermitianEigen, EigenError> {
    if a.nrows() != a.ncols() {
        return Err(EigenError::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    let n = a.nrows();
    if n == 0 {
        return Ok(HermitianEigen {
            values: Vec::new(),
            vectors: CMatrix::zeros(0, 0),
        });
    }
    let h = hermitian_part(a);
    let (raw_values, raw_vectors) = jacobi(h.clone(), true);
    let basis = raw_vectors.expect("vectors requested");

    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| raw_values[j].partial_cmp(&raw_values[i]).unwrap());
    let values: Vec<f64> = idx.iter().map(|&i| raw_values[i]).collect();
    let vectors = CMatrix::from_columns(
        &idx.iter()
            .map(|&i| basis.column(i).into_owned())
            .collect::<Vec<_>>(),
    );

    // Residual contract: ‖Hv - λv‖ ≤ 1e-10·‖H‖ for every returned pair,
    // measured against the operator norm max|λ|.
    let op_norm = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = RESIDUAL_TOL * op_norm;
    for (j, &value) in values.iter().enumerate() {
        let v = vectors.column(j);
        let mut res = &h * v;
        res.axpy(C64::new(-value, 0.0), &v, C64::new(1.0, 0.0));
        let r = res.norm();
        if r > tol && r > 1e-300 {
            return Err(EigenError::ResidualTooLarge {
                residual: r,
                tolerance: tol,
            });
        }
    }

    Ok(HermitianEigen { values, vectors })
}

/// Checks `a` against Hermitian-ness within `tol` (Frobenius), then decomposes.
pub fn eigh_checked(a: &CMatrix, tol: f64) -> Result<HermitianEigen, EigenError> {
    let asym = asymmetry(a);
    if asym > tol {
        return Err(EigenError::NotHermitian {
            asymmetry: asym,
            tolerance: tol,
        });
    }
    eigh(a)
}
