//! Operator model construction and transformations.
//!
//! All higher-level geometry is driven by the Cartesian decomposition
//! `c = b1 + i·b2` of an n×n complex matrix together with the normalized
//! trace `τ = Tr/n`. The model stores both Hermitian parts and recomposes
//! `c` from them, so the decomposition identity is bit-consistent.

use crate::eigen::{asymmetry, hermitian_part, antihermitian_part, CMatrix, CVector, C64};
use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::str::FromStr;
use thiserror::Error;

/// Default cap on the dimension `n·m` produced by [`tensor_inflate`].
pub const DEFAULT_SIZE_LIMIT: usize = 512;

/// Errors raised while building or transforming operator models.
#[derive(Debug, Error)]
pub enum OperatorError {
    /// Input matrix was not square.
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    /// Input matrix was empty (n = 0).
    #[error("matrix must have dimension at least 1")]
    Empty,
    /// An entry was NaN or infinite.
    #[error("non-finite entry at ({row},{col})")]
    NonFinite { row: usize, col: usize },
    /// A tensor inflation would exceed the configured dimension cap.
    #[error("inflated dimension {requested} exceeds limit {limit}")]
    SizeLimit { requested: usize, limit: usize },
    /// Random-model kind string not recognized.
    #[error("unknown model kind {0:?}; expected generic, hermitian, normal, unitary, or nilpotent")]
    UnknownKind(String),
}

/// Immutable operator model: the matrix, its Cartesian decomposition, and τ(c).
///
/// `c == b1 + i·b2` holds exactly (c is recomposed from the parts) and
/// `trace_mean == Tr(b1)/n + i·Tr(b2)/n`.
#[derive(Debug, Clone)]
pub struct OperatorModel {
    n: usize,
    c: CMatrix,
    b1: CMatrix,
    b2: CMatrix,
    trace_mean: C64,
}

impl OperatorModel {
    /// Matrix dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    /// The operator itself (recomposed as b1 + i·b2).
    pub fn c(&self) -> &CMatrix {
        &self.c
    }

    /// Hermitian part (c + c*)/2.
    pub fn b1(&self) -> &CMatrix {
        &self.b1
    }

    /// Anti-Hermitian part over i: (c − c*)/(2i); Hermitian.
    pub fn b2(&self) -> &CMatrix {
        &self.b2
    }

    /// Normalized trace τ(c) = Tr(c)/n.
    pub fn trace_mean(&self) -> C64 {
        self.trace_mean
    }

    /// The Hermitian combination t1·b1 + t2·b2.
    pub fn combine(&self, t1: f64, t2: f64) -> CMatrix {
        &self.b1 * C64::new(t1, 0.0) + &self.b2 * C64::new(t2, 0.0)
    }

    /// The Hermitian part of e^{−iθ}c, i.e. cos θ·b1 + sin θ·b2.
    pub fn rotated_part(&self, theta: f64) -> CMatrix {
        self.combine(theta.cos(), theta.sin())
    }

    /// Normalized trace of a·c, the complex coordinate of Ψ(a).
    pub fn trace_pairing(&self, a: &CMatrix) -> C64 {
        let n = self.n as f64;
        // Tr(a·c) without forming the product: Σ_{jk} a[j,k]·c[k,j].
        let mut s = C64::new(0.0, 0.0);
        for j in 0..self.n {
            for k in 0..self.n {
                s += a[(j, k)] * self.c[(k, j)];
            }
        }
        s / C64::new(n, 0.0)
    }

    /// Frobenius distance of cc* from c*c; zero exactly when c is normal.
    pub fn commutator_norm(&self) -> f64 {
        let cc = &self.c * self.c.adjoint();
        let cs = self.c.adjoint() * &self.c;
        crate::eigen::fro_norm(&(cc - cs))
    }

    /// Whether c is normal within `tol` (Frobenius norm of the commutator).
    pub fn is_normal(&self, tol: f64) -> bool {
        self.commutator_norm() <= tol
    }

    /// Frobenius distance of c*c from the identity; zero exactly when c is unitary.
    pub fn unitarity_defect(&self) -> f64 {
        let g = self.c.adjoint() * &self.c - CMatrix::identity(self.n, self.n);
        crate::eigen::fro_norm(&g)
    }

    /// Whether c is unitary within `tol`.
    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }
}

/// Builds the model for an n×n complex matrix.
///
/// Computes b1 = (c+c*)/2 and b2 = (c−c*)/(2i), re-composes c = b1 + i·b2,
/// and sets trace_mean = Tr(b1)/n + i·Tr(b2)/n.
pub fn build_model(matrix: &CMatrix) -> Result<OperatorModel, OperatorError> {
    if matrix.nrows() != matrix.ncols() {
        return Err(OperatorError::NotSquare {
            rows: matrix.nrows(),
            cols: matrix.ncols(),
        });
    }
    let n = matrix.nrows();
    if n == 0 {
        return Err(OperatorError::Empty);
    }
    for r in 0..n {
        for c in 0..n {
            let z = matrix[(r, c)];
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(OperatorError::NonFinite { row: r, col: c });
            }
        }
    }
    let mut b1 = hermitian_part(matrix);
    let mut b2 = antihermitian_part(matrix);
    // Both parts are Hermitian by construction up to rounding; pin the upper
    // triangle as the source of truth so they are Hermitian exactly.
    for m in [&mut b1, &mut b2] {
        for r in 0..n {
            m[(r, r)] = C64::new(m[(r, r)].re, 0.0);
            for c in (r + 1)..n {
                m[(c, r)] = m[(r, c)].conj();
            }
        }
    }
    let c = &b1 + &b2 * C64::new(0.0, 1.0);
    let n_f = n as f64;
    let trace_mean = C64::new(
        (0..n).map(|j| b1[(j, j)].re).sum::<f64>() / n_f,
        (0..n).map(|j| b2[(j, j)].re).sum::<f64>() / n_f,
    );
    Ok(OperatorModel {
        n,
        c,
        b1,
        b2,
        trace_mean,
    })
}

/// Model of e^{iθ}(c − λ·1): translation by λ followed by rotation by θ.
pub fn translate_rotate(
    model: &OperatorModel,
    lambda: C64,
    theta: f64,
) -> Result<OperatorModel, OperatorError> {
    let n = model.n;
    let phase = C64::new(theta.cos(), theta.sin());
    let shifted = model.c() - CMatrix::identity(n, n) * lambda;
    build_model(&(shifted * phase))
}

/// Model of c ⊗ 1_m on dimension n·m, capped at [`DEFAULT_SIZE_LIMIT`].
pub fn tensor_inflate(model: &OperatorModel, m: usize) -> Result<OperatorModel, OperatorError> {
    tensor_inflate_with_limit(model, m, DEFAULT_SIZE_LIMIT)
}

/// Model of c ⊗ 1_m with an explicit dimension cap.
pub fn tensor_inflate_with_limit(
    model: &OperatorModel,
    m: usize,
    limit: usize,
) -> Result<OperatorModel, OperatorError> {
    if m == 0 {
        return Err(OperatorError::Empty);
    }
    let requested = model.n * m;
    if requested > limit {
        return Err(OperatorError::SizeLimit { requested, limit });
    }
    let big = model.c().kronecker(&CMatrix::identity(m, m));
    let mut out = build_model(&big)?;
    // Inflation duplicates each diagonal entry m times, so the normalized
    // trace is unchanged; copy it to preserve the value exactly rather than
    // re-summing in a different order.
    out.trace_mean = model.trace_mean;
    Ok(out)
}

/// Families of reproducible pseudo-random instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    /// Dense complex Gaussian entries.
    Generic,
    /// Hermitian part of a generic draw.
    Hermitian,
    /// U·diag(λ)·U* with complex Gaussian λ and Haar-like U.
    Normal,
    /// U·diag(e^{iφ})·U* with uniform phases and Haar-like U.
    Unitary,
    /// Strictly upper triangular Gaussian entries.
    Nilpotent,
}

impl FromStr for ModelKind {
    type Err = OperatorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "generic" => Ok(Self::Generic),
            "hermitian" => Ok(Self::Hermitian),
            "normal" => Ok(Self::Normal),
            "unitary" => Ok(Self::Unitary),
            "nilpotent" => Ok(Self::Nilpotent),
            other => Err(OperatorError::UnknownKind(other.to_string())),
        }
    }
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Self::Generic => "generic",
            Self::Hermitian => "hermitian",
            Self::Normal => "normal",
            Self::Unitary => "unitary",
            Self::Nilpotent => "nilpotent",
        };
        f.write_str(s)
    }
}

fn gaussian_complex(rng: &mut ChaCha8Rng, scale: f64) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re * scale, im * scale)
}

fn gaussian_matrix(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| gaussian_complex(rng, scale))
}

/// Haar-like unitary from the QR decomposition of a Gaussian matrix,
/// with the R diagonal's phases absorbed so the distribution is phase-fixed.
fn haar_like_unitary(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    let g = gaussian_matrix(rng, n, 1.0);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / C64::new(d.norm(), 0.0)
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Reproducible pseudo-random model of the requested class.
pub fn random_model(kind: ModelKind, n: usize, seed: u64) -> Result<OperatorModel, OperatorError> {
    if n == 0 {
        return Err(OperatorError::Empty);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = 1.0 / (2.0 * n as f64).sqrt();
    let c = match kind {
        ModelKind::Generic => gaussian_matrix(&mut rng, n, scale),
        ModelKind::Hermitian => hermitian_part(&gaussian_matrix(&mut rng, n, scale)),
        ModelKind::Normal => {
            let lambda =
                CVector::from_fn(n, |_, _| gaussian_complex(&mut rng, 1.0 / 2f64.sqrt()));
            let u = haar_like_unitary(&mut rng, n);
            &u * CMatrix::from_diagonal(&lambda) * u.adjoint()
        }
        ModelKind::Unitary => {
            let lambda = CVector::from_fn(n, |_, _| {
                let phi = rng.gen_range(0.0..std::f64::consts::TAU);
                C64::new(phi.cos(), phi.sin())
            });
            let u = haar_like_unitary(&mut rng, n);
            &u * CMatrix::from_diagonal(&lambda) * u.adjoint()
        }
        ModelKind::Nilpotent => {
            let mut m = CMatrix::zeros(n, n);
            for r in 0..n {
                for c in (r + 1)..n {
                    m[(r, c)] = gaussian_complex(&mut rng, scale);
                }
            }
            m
        }
    };
    build_model(&c)
}

/// Model of the n×n nilpotent Jordan block (ones on the superdiagonal).
pub fn jordan_block(n: usize) -> Result<OperatorModel, OperatorError> {
    if n == 0 {
        return Err(OperatorError::Empty);
    }
    let mut m = CMatrix::zeros(n, n);
    for r in 0..n.saturating_sub(1) {
        m[(r, r + 1)] = C64::new(1.0, 0.0);
    }
    build_model(&m)
}

/// Model from a diagonal of complex values.
pub fn diagonal_model(values: &[C64]) -> Result<OperatorModel, OperatorError> {
    let v = CVector::from_column_slice(values);
    build_model(&DMatrix::from_diagonal(&v))
}

/// Entrywise Frobenius distance between c and its model reassembly b1 + i·b2.
pub fn reassembly_defect(model: &OperatorModel) -> f64 {
    let re = model.b1() + model.b2() * C64::new(0.0, 1.0);
    crate::eigen::fro_norm(&(re - model.c()))
}

/// How far b1 and b2 are from Hermitian (max of the two Frobenius asymmetries).
pub fn hermitian_defect(model: &OperatorModel) -> f64 {
    asymmetry(model.b1()).max(asymmetry(model.b2()))
}
