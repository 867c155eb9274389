//! The spectral scale: a compact convex body in `R × C` attached to a matrix.
//!
//! For an `n×n` matrix `c` with Hermitian parts `b1`, `b2` and normalized
//! trace `τ = Tr/n`, the body is the image of the positive unit-ball slice
//! `{a : 0 ≤ a ≤ 1}` under the moment map `Ψ(a) = (τ(a), τ(a·c))`. Identifying
//! `C` with `R²` this is a convex body in `R³` whose geometry encodes the
//! joint spectral data of `(b1, b2)`:
//!
//! * its support function in direction `u = (s, t1, t2)` is the trace of the
//!   positive part of `s·1 + t1·b1 + t2·b2` divided by `n`, so every support
//!   value is one Hermitian eigenvalue problem;
//! * the face exposed by `u` is the `Ψ`-image of an order interval
//!   `[p⁻, p⁺]` of spectral projections of `b_t = t1·b1 + t2·b2`, so faces
//!   are enumerable level by level;
//! * one-dimensional faces carry a complex slope `Δz/Δx`, and for normal `c`
//!   the body is a zonotope whose edge slopes are exactly the eigenvalues
//!   of `c`.
//!
//! [`build_body`] samples the boundary with cumulative spectral projections
//! over an azimuth grid, [`membership`](SpectralScaleBody::membership) tests
//! points against the sampled (and adaptively refined) support inequalities,
//! and [`enumerate_faces`] detects flat boundary pieces either exactly (the
//! normal-matrix zonotope route) or by clustering contact points.

use nalgebra::Normed;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use thiserror::Error;

use crate::eigen::{self, C64, CMatrix, EigenError, HermitianEigen};
use crate::operators::OperatorModel;

/// Eigenvalue-equality tolerance for spectral projections, relative to `‖b_t‖`.
pub const LEVEL_TOL_FACTOR: f64 = 1e-9;
/// Slack allowed on the spectrum of a test operator before it is rejected.
pub const CONTRACTION_TOL: f64 = 1e-10;
/// Commutator norm below which a matrix is treated as normal (zonotope route).
pub const NORMALITY_TOL: f64 = 1e-10;
/// Smallest accepted azimuth grid for [`build_body`].
pub const MIN_DIRECTION_GRID: usize = 64;
/// Default clustering tolerance for face detection.
pub const DEFAULT_FACE_TOL: f64 = 1e-8;

/// Errors raised by spectral-scale computations.
#[derive(Debug, Error)]
pub enum ScaleError {
    /// A test operator had an eigenvalue outside `[0, 1]` beyond tolerance.
    #[error("test operator must satisfy 0 <= a <= 1; eigenvalue {value} is out of range")]
    NotContraction { value: f64 },
    /// A test operator did not match the model dimension.
    #[error("test operator must be {n}x{n}, got {rows}x{cols}")]
    ShapeMismatch { n: usize, rows: usize, cols: usize },
    /// The face direction `(t1, t2)` was zero.
    #[error("face direction (t1, t2) must be nonzero")]
    ZeroDirection,
    /// A membership/support direction was zero or non-finite.
    #[error("direction must be a nonzero finite vector")]
    BadDirection,
    /// The azimuth grid was too coarse to honour the sampling guarantees.
    #[error("direction grid must have at least {min} azimuths, got {got}")]
    GridTooCoarse { min: usize, got: usize },
    /// A tolerance parameter was non-positive or non-finite.
    #[error("tolerance must be positive and finite, got {0}")]
    BadTolerance(f64),
    /// An eigenvalue route that requires normality was called on a
    /// non-normal model.
    #[error("model is not normal: commutator norm {defect:.3e} exceeds {tolerance:.3e}")]
    NotNormal { defect: f64, tolerance: f64 },
    /// The underlying eigensolver failed.
    #[error(transparent)]
    Eigen(#[from] EigenError),
}

/// A point `(x, z)` of the body: `x = τ(a)` and `z = τ(a·c)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalePoint {
    /// Normalized trace of the test operator; lies in `[0, 1]`.
    pub x: f64,
    /// Normalized trace pairing `τ(a·c)`.
    pub z: C64,
}

impl ScalePoint {
    pub fn new(x: f64, z: C64) -> Self {
        ScalePoint { x, z }
    }

    /// Coordinates in `R³` as `[x, Re z, Im z]`.
    pub fn coords(&self) -> [f64; 3] {
        [self.x, self.z.re, self.z.im]
    }

    /// Euclidean distance in `R³`.
    pub fn distance(&self, other: &ScalePoint) -> f64 {
        let a = self.coords();
        let b = other.coords();
        ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
    }
}

fn dot3(u: [f64; 3], v: [f64; 3]) -> f64 {
    u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
}

fn norm3(u: [f64; 3]) -> f64 {
    dot3(u, u).sqrt()
}

fn normalize3(u: [f64; 3]) -> Result<[f64; 3], ScaleError> {
    let nrm = norm3(u);
    if !nrm.is_finite() || nrm == 0.0 {
        return Err(ScaleError::BadDirection);
    }
    Ok([u[0] / nrm, u[1] / nrm, u[2] / nrm])
}

/// Moment-map image of a single test operator: `Ψ(a) = (τ(a), τ(a·c))`.
///
/// `a` must be Hermitian with spectrum in `[0, 1]` (up to
/// [`CONTRACTION_TOL`]); anything else is rejected rather than clamped.
pub fn psi(model: &OperatorModel, a: &CMatrix) -> Result<ScalePoint, ScaleError> {
    let n = model.n();
    if a.nrows() != n || a.ncols() != n {
        return Err(ScaleError::ShapeMismatch {
            n,
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    let eigs = eigen::eigenvalues_descending(a)?;
    for &value in &eigs {
        if !(-CONTRACTION_TOL..=1.0 + CONTRACTION_TOL).contains(&value) {
            return Err(ScaleError::NotContraction { value });
        }
    }
    let x = a.trace().re / n as f64;
    let z = model.trace_pairing(a);
    Ok(ScalePoint::new(x, z))
}

/// Support function of the body in direction `u = (s, t1, t2)`:
/// the normalized trace of the positive part of `s·1 + t1·b1 + t2·b2`.
///
/// Positively homogeneous in `u`; pass unit vectors when support values are
/// compared against tolerances.
pub fn support(model: &OperatorModel, u: [f64; 3]) -> Result<f64, ScaleError> {
    if u.iter().any(|v| !v.is_finite()) || u == [0.0; 3] {
        return Err(ScaleError::BadDirection);
    }
    let n = model.n();
    let mut m = model.combine(u[1], u[2]);
    for j in 0..n {
        m[(j, j)] += C64::new(u[0], 0.0);
    }
    let eigs = eigen::eigenvalues_descending(&m)?;
    Ok(eigs.iter().map(|&e| e.max(0.0)).sum::<f64>() / n as f64)
}

/// The exposed face of the body cut out by the affine functional
/// `(x, z) ↦ t1·Re z + t2·Im z − s·x` at level `s` in direction `t`.
///
/// The face is the `Ψ`-image of the order interval `[p⁻, p⁺]`, where `p⁻`
/// (resp. `p⁺`) projects onto the eigenvectors of `b_t = t1·b1 + t2·b2` with
/// eigenvalue strictly below `s` (resp. at most `s`), equality being read at
/// [`LEVEL_TOL_FACTOR`]`·‖b_t‖`.
#[derive(Debug, Clone, Serialize)]
pub struct ExposedFaceDescriptor {
    /// The direction `(t1, t2)` of the defining functional.
    pub direction: (f64, f64),
    /// The eigenvalue level `s`.
    pub level: f64,
    /// Indices (into the descending eigenbasis of `b_t`) below the level.
    pub p_minus_indices: Vec<usize>,
    /// Indices at or below the level; always contains `p_minus_indices`.
    pub p_plus_indices: Vec<usize>,
    /// `Ψ(p⁻)`, the low endpoint of the face.
    pub psi_minus: ScalePoint,
    /// `Ψ(p⁺)`, the high endpoint of the face.
    pub psi_plus: ScalePoint,
    /// Affine dimension of the face: 0, 1, or 2.
    pub dim: usize,
}

/// Sum of `⟨x_j, c·x_j⟩` over the selected eigenvector columns, divided by `n`.
fn psi_of_indices(model: &OperatorModel, eig: &HermitianEigen, idx: &[usize]) -> ScalePoint {
    let n = model.n();
    let mut z = C64::new(0.0, 0.0);
    for &j in idx {
        let v = eig.vectors.column(j);
        z += v.dotc(&(model.c() * v));
    }
    ScalePoint::new(idx.len() as f64 / n as f64, z / n as f64)
}

/// Columns of the eigenbasis selected by `idx`, as an `n×m` matrix.
fn subbasis(eig: &HermitianEigen, idx: &[usize]) -> CMatrix {
    CMatrix::from_fn(eig.vectors.nrows(), idx.len(), |r, k| {
        eig.vectors[(r, idx[k])]
    })
}

/// Decide whether the compression of `c` to the span of the selected
/// eigenvectors is (numerically) a scalar. Returns the affine dimension of
/// the corresponding face piece: 1 when scalar (all of `Ψ[p⁻+ a']` lies on a
/// line, whose slope is the scalar), otherwise 2.
fn face_dim_from_compression(model: &OperatorModel, eig: &HermitianEigen, level_idx: &[usize]) -> usize {
    let m = level_idx.len();
    let basis = subbasis(eig, level_idx);
    let comp = basis.adjoint() * model.c() * &basis;
    let lambda = comp.trace() / m as f64;
    let mut spread_sq = 0.0;
    for i in 0..m {
        for j in 0..m {
            let mut d = comp[(i, j)];
            if i == j {
                d -= lambda;
            }
            spread_sq += d.norm_sqr();
        }
    }
    let scale = eigen::fro_norm(model.c()).max(1.0);
    if spread_sq.sqrt() <= 1e-9 * scale {
        1
    } else {
        2
    }
}

/// Compute the exposed face of the body for direction `t = (t1, t2)` and
/// level `s`. See [`ExposedFaceDescriptor`].
pub fn exposed_face(
    model: &OperatorModel,
    t: (f64, f64),
    s: f64,
) -> Result<ExposedFaceDescriptor, ScaleError> {
    if !(t.0.is_finite() && t.1.is_finite() && s.is_finite()) || (t.0 == 0.0 && t.1 == 0.0) {
        return Err(ScaleError::ZeroDirection);
    }
    let bt = model.combine(t.0, t.1);
    let eig = eigen::eigh(&bt)?;
    let op_norm = eig.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = LEVEL_TOL_FACTOR * op_norm.max(f64::MIN_POSITIVE);
    let n = model.n();
    let p_minus_indices: Vec<usize> = (0..n).filter(|&j| eig.values[j] < s - tol).collect();
    let p_plus_indices: Vec<usize> = (0..n).filter(|&j| eig.values[j] <= s + tol).collect();
    let psi_minus = psi_of_indices(model, &eig, &p_minus_indices);
    let psi_plus = psi_of_indices(model, &eig, &p_plus_indices);
    let dim = if p_minus_indices.len() == p_plus_indices.len() {
        0
    } else {
        let level_idx: Vec<usize> = (0..n)
            .filter(|&j| (eig.values[j] - s).abs() <= tol)
            .collect();
        face_dim_from_compression(model, &eig, &level_idx)
    };
    Ok(ExposedFaceDescriptor {
        direction: t,
        level: s,
        p_minus_indices,
        p_plus_indices,
        psi_minus,
        psi_plus,
        dim,
    })
}

/// A flat boundary piece detected on the body.
#[derive(Debug, Clone, Serialize)]
pub struct DetectedFace {
    /// Affine dimension: 1 for an edge, 2 for a two-dimensional facet.
    pub dim: usize,
    /// Outward unit direction `(s, t1, t2)` that exposes the face.
    pub direction: [f64; 3],
    /// For edges: the complex slope `Δz/Δx` along the face.
    pub slope: Option<C64>,
    /// Extreme points of the contact set: 2 for an edge, ≥ 3 for a facet.
    pub vertices: Vec<ScalePoint>,
    /// Set when the contact cluster only closes up at the detection
    /// tolerance, so the face may be a curvature artifact of the sampling
    /// density rather than an exactly flat piece.
    pub tentative: bool,
}

/// Membership verdict for a point tested against the body.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Membership {
    Interior,
    Boundary,
    Outside,
}

/// The sampled spectral-scale body of an operator model.
///
/// Holds the exact model (so support values can always be recomputed), a
/// vertex cloud of moment-map images of cumulative spectral projections over
/// an azimuth grid, the flat faces detected at the default tolerance, and —
/// when the matrix is normal — the zonotope generators `(1/n)·(1, λ_j)`.
#[derive(Debug, Clone)]
pub struct SpectralScaleBody {
    model: OperatorModel,
    direction_grid: usize,
    vertex_cloud: Vec<ScalePoint>,
    edges: Vec<DetectedFace>,
    two_faces: Vec<DetectedFace>,
    zonotope_generators: Option<Vec<ScalePoint>>,
}

impl SpectralScaleBody {
    pub fn model(&self) -> &OperatorModel {
        &self.model
    }

    pub fn direction_grid(&self) -> usize {
        self.direction_grid
    }

    /// Moment-map images of the cumulative spectral projections sampled at
    /// build time. Always contains `(0, 0)` and `(1, τ(c))`.
    pub fn vertex_cloud(&self) -> &[ScalePoint] {
        &self.vertex_cloud
    }

    /// One-dimensional faces detected at build time ([`DEFAULT_FACE_TOL`]).
    pub fn edges(&self) -> &[DetectedFace] {
        &self.edges
    }

    /// Two-dimensional faces detected at build time ([`DEFAULT_FACE_TOL`]).
    pub fn two_faces(&self) -> &[DetectedFace] {
        &self.two_faces
    }

    /// Zonotope generators `(1/n)·(1, λ_j)`, present exactly when the matrix
    /// is normal within [`NORMALITY_TOL`].
    pub fn zonotope_generators(&self) -> Option<&[ScalePoint]> {
        self.zonotope_generators.as_deref()
    }

    /// Exact support value in direction `u`; see [`support`].
    pub fn support(&self, u: [f64; 3]) -> Result<f64, ScaleError> {
        support(&self.model, u)
    }

    /// Classify a point against the body.
    ///
    /// The margin `⟨u, p⟩ − h(u)` is maximized as in [`point_margin`] with
    /// this body's azimuth grid. The point is `Outside` when the best margin
    /// exceeds `tol`, `Boundary` when it lies within `±tol`, and `Interior`
    /// otherwise.
    pub fn membership(&self, p: ScalePoint, tol: f64) -> Result<Membership, ScaleError> {
        if !(tol.is_finite() && tol > 0.0) {
            return Err(ScaleError::BadTolerance(tol));
        }
        let margin = point_margin(&self.model, p, self.direction_grid)?;
        if margin > tol {
            Ok(Membership::Outside)
        } else if margin >= -tol {
            Ok(Membership::Boundary)
        } else {
            Ok(Membership::Interior)
        }
    }
}

/// Largest violation of the sampled support inequalities by a point:
/// `max over unit u of ⟨u, p⟩ − h(u)`.
///
/// The margin is maximized over the construction directions of a
/// `grid`-azimuth sweep (azimuth × spectral levels, plus the two poles and
/// the outward ray from the body center). Every flat boundary piece is
/// exposed by a level-form direction at some azimuth, and the normalized
/// margin is not quasiconcave on the direction sphere, so a single local
/// search can stall in the wrong basin; instead, the per-azimuth level-max
/// profile is golden-refined around each of its best discrete local maxima,
/// followed by a round of shrinking-stencil polish. Nonpositive (within
/// tolerance) exactly when `p` lies in the body; `≈ 0` on the boundary.
pub fn point_margin(
    model: &OperatorModel,
    p: ScalePoint,
    grid: usize,
) -> Result<f64, ScaleError> {
    let grid = grid.max(16);
    let pc = p.coords();
    let margin_of = |u: [f64; 3]| -> Result<(f64, [f64; 3]), ScaleError> {
        let un = normalize3(u)?;
        Ok((dot3(un, pc) - support(model, un)?, un))
    };

    let mut best = margin_of([1.0, 0.0, 0.0])?;
    let consider = |cand: (f64, [f64; 3]), best: &mut (f64, [f64; 3])| {
        if cand.0 > best.0 {
            *best = cand;
        }
    };
    consider(margin_of([-1.0, 0.0, 0.0])?, &mut best);
    // Outward ray from the body center (1/2, τ(c)/2): a natural support
    // direction candidate for points straight out of a round patch.
    let tau = model.trace_mean();
    let ray = [pc[0] - 0.5, pc[1] - tau.re / 2.0, pc[2] - tau.im / 2.0];
    if norm3(ray) > 1e-14 {
        consider(margin_of(ray)?, &mut best);
    }
    // Construction directions: one eigendecomposition per azimuth gives
    // the margins of every level direction of that azimuth.
    let level_max = |phi: f64| -> Result<(f64, [f64; 3]), ScaleError> {
        let eig = eigen::eigh(&model.rotated_part(phi))?;
        let n = eig.values.len() as f64;
        let mut loc = (f64::NEG_INFINITY, [1.0, 0.0, 0.0]);
        for &mu in &eig.values {
            let v = [-mu, phi.cos(), phi.sin()];
            let nrm = norm3(v);
            let h = eig
                .values
                .iter()
                .map(|&w| (w - mu).max(0.0))
                .sum::<f64>()
                / (n * nrm);
            let margin = dot3(v, pc) / nrm - h;
            if margin > loc.0 {
                loc = (margin, [v[0] / nrm, v[1] / nrm, v[2] / nrm]);
            }
        }
        Ok(loc)
    };
    let mut profile = Vec::with_capacity(grid);
    for i in 0..grid {
        let cand = level_max(TAU * i as f64 / grid as f64)?;
        consider(cand, &mut best);
        profile.push(cand.0);
    }
    // Golden refinement of the azimuth profile around its best discrete
    // local maxima; the profile peaks exactly at the exposing azimuth of
    // whichever face (if any) contains `p`.
    let spacing = TAU / grid as f64;
    let mut starts: Vec<(f64, usize)> = (0..grid)
        .filter(|&i| {
            profile[i] >= profile[(i + 1) % grid] && profile[i] >= profile[(i + grid - 1) % grid]
        })
        .map(|i| (profile[i], i))
        .collect();
    starts.sort_by(|a, b| b.0.partial_cmp(&a.0).expect("finite margins"));
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    for &(_, i) in starts.iter().take(8) {
        let center = TAU * i as f64 / grid as f64;
        let (mut lo, mut hi) = (center - spacing, center + spacing);
        let mut x1 = hi - INV_PHI * (hi - lo);
        let mut x2 = lo + INV_PHI * (hi - lo);
        let mut f1 = level_max(x1)?;
        let mut f2 = level_max(x2)?;
        for _ in 0..70 {
            if f1.0 >= f2.0 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - INV_PHI * (hi - lo);
                f1 = level_max(x1)?;
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + INV_PHI * (hi - lo);
                f2 = level_max(x2)?;
            }
        }
        consider(if f1.0 >= f2.0 { f1 } else { f2 }, &mut best);
    }
    // Local refinement around the best sampled direction.
    let offsets: [[f64; 3]; 6] = [
        [1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, -1.0, 0.0],
        [0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0],
    ];
    let mut step = TAU / grid as f64;
    for _ in 0..32 {
        let center = best.1;
        for off in offsets {
            let cand = [
                center[0] + step * off[0],
                center[1] + step * off[1],
                center[2] + step * off[2],
            ];
            consider(margin_of(cand)?, &mut best);
        }
        step *= 0.6;
    }
    Ok(best.0)
}

/// Eigenvalues of a normal matrix, recovered from its commuting Hermitian
/// parts: diagonalize `b1`, compress `b2` onto each (generously clustered)
/// eigenspace, and pair every `b2` eigenvector with its exact `b1` value.
///
/// Rejects models whose commutator norm exceeds [`NORMALITY_TOL`].
pub fn normal_eigenvalues(model: &OperatorModel) -> Result<Vec<C64>, ScaleError> {
    let defect = model.commutator_norm();
    if defect > NORMALITY_TOL {
        return Err(ScaleError::NotNormal {
            defect,
            tolerance: NORMALITY_TOL,
        });
    }
    let n = model.n();
    let e1 = eigen::eigh(model.b1())?;
    let scale1 = e1.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    // Generous consecutive-gap clustering is safe here: for a genuinely
    // normal matrix, b2 has no off-diagonal coupling between distinct
    // b1-eigenspaces, so over-merging clusters never mixes eigenvalues.
    let ctol = 1e-8 * scale1.max(1.0);
    let mut out = Vec::with_capacity(n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (e1.values[end - 1] - e1.values[end]).abs() <= ctol {
            end += 1;
        }
        let idx: Vec<usize> = (start..end).collect();
        let basis = subbasis(&e1, &idx);
        let comp = basis.adjoint() * model.b2() * &basis;
        let e2 = eigen::eigh(&comp)?;
        for k in 0..idx.len() {
            let w = e2.vectors.column(k);
            let mu1: f64 = (0..idx.len())
                .map(|j| w[j].norm_sqr() * e1.values[start + j])
                .sum();
            out.push(C64::new(mu1, e2.values[k]));
        }
        start = end;
    }
    Ok(out)
}

/// Build the sampled body of a model.
///
/// For each of `direction_grid ≥ 64` azimuths `φ`, the Hermitian combination
/// `b_φ = cos φ·b1 + sin φ·b2` is diagonalized and the moment-map images of
/// its cumulative spectral projections (one per distinct eigenvalue level)
/// are added to the vertex cloud. Faces are detected at
/// [`DEFAULT_FACE_TOL`], and zonotope generators are attached when the
/// matrix is normal.
pub fn build_body(
    model: &OperatorModel,
    direction_grid: usize,
) -> Result<SpectralScaleBody, ScaleError> {
    if direction_grid < MIN_DIRECTION_GRID {
        return Err(ScaleError::GridTooCoarse {
            min: MIN_DIRECTION_GRID,
            got: direction_grid,
        });
    }
    let n = model.n();
    let mut cloud: Vec<ScalePoint> = Vec::with_capacity(direction_grid * (n + 1));
    for i in 0..direction_grid {
        let phi = TAU * i as f64 / direction_grid as f64;
        let eig = eigen::eigh(&model.rotated_part(phi))?;
        let op_norm = eig.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let ltol = LEVEL_TOL_FACTOR * op_norm.max(f64::MIN_POSITIVE);
        // Walk the spectrum from the bottom, accumulating Ψ of the
        // cumulative projections Q_0 = 0 ⊂ Q_1 ⊂ … ⊂ Q_d = 1.
        cloud.push(ScalePoint::new(0.0, C64::new(0.0, 0.0)));
        let mut zsum = C64::new(0.0, 0.0);
        let mut j = n;
        while j > 0 {
            let level = eig.values[j - 1];
            let mut k = j;
            while k > 0 && (eig.values[k - 1] - level).abs() <= ltol {
                let v = eig.vectors.column(k - 1);
                zsum += v.dotc(&(model.c() * v));
                k -= 1;
            }
            cloud.push(ScalePoint::new(
                (n - k) as f64 / n as f64,
                zsum / n as f64,
            ));
            j = k;
        }
    }
    dedup_points(&mut cloud, 1e-12 * (1.0 + eigen::fro_norm(model.c())));

    let zonotope_generators = if model.is_normal(NORMALITY_TOL) {
        let mut gens: Vec<ScalePoint> = normal_eigenvalues(model)?
            .into_iter()
            .map(|lam| ScalePoint::new(1.0 / n as f64, lam / n as f64))
            .collect();
        gens.sort_by(|a, b| {
            (a.z.re, a.z.im)
                .partial_cmp(&(b.z.re, b.z.im))
                .expect("finite generator coordinates")
        });
        Some(gens)
    } else {
        None
    };

    let mut body = SpectralScaleBody {
        model: model.clone(),
        direction_grid,
        vertex_cloud: cloud,
        edges: Vec::new(),
        two_faces: Vec::new(),
        zonotope_generators,
    };
    let faces = enumerate_faces(&body, DEFAULT_FACE_TOL)?;
    for face in faces {
        if face.dim == 1 {
            body.edges.push(face);
        } else {
            body.two_faces.push(face);
        }
    }
    Ok(body)
}

/// Sort points lexicographically and drop near-duplicates.
fn dedup_points(pts: &mut Vec<ScalePoint>, tol: f64) {
    pts.sort_by(|a, b| {
        (a.x, a.z.re, a.z.im)
            .partial_cmp(&(b.x, b.z.re, b.z.im))
            .expect("finite cloud coordinates")
    });
    let mut kept: Vec<ScalePoint> = Vec::with_capacity(pts.len());
    for p in pts.iter() {
        if kept.last().is_none_or(|q| p.distance(q) > tol) {
            kept.push(*p);
        }
    }
    *pts = kept;
}

/// Detect the flat faces of the body.
///
/// Dispatches to the exact zonotope route when the matrix is normal (the
/// generators are attached to the body), otherwise clusters vertex-cloud
/// contact sets; `tol` is the contact tolerance of the clustering route.
pub fn enumerate_faces(
    body: &SpectralScaleBody,
    tol: f64,
) -> Result<Vec<DetectedFace>, ScaleError> {
    if body.zonotope_generators.is_some() {
        zonotope_faces(body.model())
    } else {
        enumerate_faces_clustered(body, tol)
    }
}

/// Face detection by contact clustering, regardless of normality.
///
/// For each azimuth `φ` of the body grid and each distinct eigenvalue `μ` of
/// `b_φ`, the direction `u ∝ (−μ, cos φ, sin φ)` supports the body along the
/// face at level `μ`; every vertex-cloud point within `tol` of the support
/// plane joins the contact cluster, whose affine rank decides the face
/// dimension. Clusters that only close up at the tolerance (rather than at
/// machine precision) are flagged `tentative`.
pub fn enumerate_faces_clustered(
    body: &SpectralScaleBody,
    tol: f64,
) -> Result<Vec<DetectedFace>, ScaleError> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(ScaleError::BadTolerance(tol));
    }
    let model = body.model();
    let n = model.n();
    let cloud = body.vertex_cloud();
    let grid = body.direction_grid;
    let mut found: Vec<DetectedFace> = Vec::new();
    for i in 0..grid {
        let phi = TAU * i as f64 / grid as f64;
        let eig = eigen::eigh(&model.rotated_part(phi))?;
        let op_norm = eig.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let ltol = LEVEL_TOL_FACTOR * op_norm.max(f64::MIN_POSITIVE);
        let mut levels: Vec<f64> = Vec::new();
        for &v in &eig.values {
            if levels.last().is_none_or(|&l| (l - v).abs() > ltol) {
                levels.push(v);
            }
        }
        for &mu in &levels {
            let v = [-mu, phi.cos(), phi.sin()];
            let nrm = norm3(v);
            let u = [v[0] / nrm, v[1] / nrm, v[2] / nrm];
            let h = eig
                .values
                .iter()
                .map(|&w| (w - mu).max(0.0))
                .sum::<f64>()
                / (n as f64 * nrm);
            if let Some(face) = cluster_face(cloud, u, h, tol) {
                found.push(face);
            }
        }
    }
    dedup_faces(&mut found);
    Ok(found)
}

/// Build one face record from the contact cluster of direction `u`, or
/// `None` when the contact set has no extent (a vertex).
fn cluster_face(cloud: &[ScalePoint], u: [f64; 3], h: f64, tol: f64) -> Option<DetectedFace> {
    let mut pts: Vec<ScalePoint> = Vec::new();
    let mut max_gap = 0.0f64;
    for p in cloud {
        let gap = h - dot3(u, p.coords());
        if gap <= tol {
            pts.push(*p);
            max_gap = max_gap.max(gap.max(0.0));
        }
    }
    if pts.len() < 2 {
        return None;
    }
    let tentative = max_gap > tol / 100.0;
    // Affine geometry of the cluster: farthest point from the first spans
    // the candidate line; the residuals off that line decide the rank.
    let base = pts[0].coords();
    let (far, far_d) = pts
        .iter()
        .map(|p| {
            let d = p.coords();
            (
                *p,
                ((d[0] - base[0]).powi(2) + (d[1] - base[1]).powi(2) + (d[2] - base[2]).powi(2))
                    .sqrt(),
            )
        })
        .fold((pts[0], 0.0f64), |acc, c| if c.1 > acc.1 { c } else { acc });
    if far_d <= 1e-12 * (1.0 + norm3(base)) {
        return None;
    }
    let fc = far.coords();
    let dir = [
        (fc[0] - base[0]) / far_d,
        (fc[1] - base[1]) / far_d,
        (fc[2] - base[2]) / far_d,
    ];
    let mut resid = 0.0f64;
    let mut far_off = pts[0];
    for p in &pts {
        let d = p.coords();
        let rel = [d[0] - base[0], d[1] - base[1], d[2] - base[2]];
        let along = dot3(rel, dir);
        let off = [
            rel[0] - along * dir[0],
            rel[1] - along * dir[1],
            rel[2] - along * dir[2],
        ];
        let r = norm3(off);
        if r > resid {
            resid = r;
            far_off = *p;
        }
    }
    let eps_line = (10.0 * max_gap).max(1e-9 * (1.0 + far_d));
    if resid <= eps_line {
        // Edge: endpoints are the parameter extremes along the line.
        let (lo, hi) = pts.iter().fold((pts[0], pts[0]), |(lo, hi), p| {
            let t = dot3(
                [
                    p.coords()[0] - base[0],
                    p.coords()[1] - base[1],
                    p.coords()[2] - base[2],
                ],
                dir,
            );
            let tlo = dot3(
                [
                    lo.coords()[0] - base[0],
                    lo.coords()[1] - base[1],
                    lo.coords()[2] - base[2],
                ],
                dir,
            );
            let thi = dot3(
                [
                    hi.coords()[0] - base[0],
                    hi.coords()[1] - base[1],
                    hi.coords()[2] - base[2],
                ],
                dir,
            );
            (
                if t < tlo { *p } else { lo },
                if t > thi { *p } else { hi },
            )
        });
        let (lo, hi) = if lo.x <= hi.x { (lo, hi) } else { (hi, lo) };
        let dx = hi.x - lo.x;
        if dx.abs() < 1e-9 {
            // No trace extent: not a face of the moment body (a contraction
            // family along a face always gains trace), so treat as noise.
            return None;
        }
        let slope = (hi.z - lo.z) / dx;
        Some(DetectedFace {
            dim: 1,
            direction: u,
            slope: Some(slope),
            vertices: vec![lo, hi],
            tentative,
        })
    } else {
        // Facet: report the extreme points of the planar contact set.
        let oc = far_off.coords();
        let orel = [oc[0] - base[0], oc[1] - base[1], oc[2] - base[2]];
        let along = dot3(orel, dir);
        let mut e2 = [
            orel[0] - along * dir[0],
            orel[1] - along * dir[1],
            orel[2] - along * dir[2],
        ];
        let e2n = norm3(e2);
        e2 = [e2[0] / e2n, e2[1] / e2n, e2[2] / e2n];
        let planar: Vec<(f64, f64)> = pts
            .iter()
            .map(|p| {
                let d = p.coords();
                let rel = [d[0] - base[0], d[1] - base[1], d[2] - base[2]];
                (dot3(rel, dir), dot3(rel, e2))
            })
            .collect();
        let hull = convex_hull_indices(&planar);
        let vertices: Vec<ScalePoint> = hull.into_iter().map(|k| pts[k]).collect();
        Some(DetectedFace {
            dim: 2,
            direction: u,
            slope: None,
            vertices,
            tentative,
        })
    }
}

/// Indices of the convex hull of a planar point set, counter-clockwise
/// (Andrew's monotone chain).
fn convex_hull_indices(pts: &[(f64, f64)]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_by(|&a, &b| {
        pts[a]
            .partial_cmp(&pts[b])
            .expect("finite planar coordinates")
    });
    order.dedup_by(|&mut a, &mut b| {
        (pts[a].0 - pts[b].0).abs() < 1e-14 && (pts[a].1 - pts[b].1).abs() < 1e-14
    });
    if order.len() <= 2 {
        return order;
    }
    let cross = |o: usize, a: usize, b: usize| -> f64 {
        (pts[a].0 - pts[o].0) * (pts[b].1 - pts[o].1)
            - (pts[a].1 - pts[o].1) * (pts[b].0 - pts[o].0)
    };
    let mut hull: Vec<usize> = Vec::with_capacity(order.len() + 1);
    for &idx in order.iter().chain(order.iter().rev().skip(1)) {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], idx) <= 0.0 {
            hull.pop();
        }
        hull.push(idx);
    }
    hull.pop();
    hull
}

/// Merge face records that describe the same geometric face (the same face
/// is exposed by a whole cone of directions, so the azimuth sweep finds it
/// repeatedly, always with the identical vertex set from the fixed cloud).
fn dedup_faces(faces: &mut Vec<DetectedFace>) {
    type VertexKey = Vec<(i64, i64, i64)>;
    let key_of = |f: &DetectedFace| -> VertexKey {
        let q = |v: f64| (v / 3e-7).round() as i64;
        let mut key: VertexKey = f
            .vertices
            .iter()
            .map(|p| (q(p.x), q(p.z.re), q(p.z.im)))
            .collect();
        key.sort_unstable();
        key
    };
    let mut seen: Vec<(usize, VertexKey)> = Vec::new();
    let mut kept: Vec<DetectedFace> = Vec::new();
    for face in faces.drain(..) {
        let key = key_of(&face);
        if let Some((at, _)) = seen.iter().find(|(_, k)| *k == key) {
            // Prefer the confident record over a tentative duplicate.
            if kept[*at].tentative && !face.tentative {
                kept[*at] = face;
            }
            continue;
        }
        seen.push((kept.len(), key));
        kept.push(face);
    }
    *faces = kept;
}

/// Exact face detection for normal matrices: the body is the zonotope
/// generated by `(1/n)·(1, λ_j)`, so each distinct eigenvalue `λ` yields
/// edges of slope exactly `λ`. One representative edge per distinct
/// eigenvalue is produced, computed as an exposed face at an azimuth that
/// separates the eigenvalue levels.
fn zonotope_faces(model: &OperatorModel) -> Result<Vec<DetectedFace>, ScaleError> {
    let lambdas = normal_eigenvalues(model)?;
    let scale = lambdas.iter().map(|l| l.norm()).fold(0.0f64, f64::max);
    let mut distinct: Vec<C64> = Vec::new();
    for lam in &lambdas {
        if !distinct
            .iter()
            .any(|d| (d - lam).norm() <= 1e-10 * scale.max(1.0))
        {
            distinct.push(*lam);
        }
    }
    // Find one azimuth separating every pair of distinct eigenvalue levels.
    let gap_at = |phi: f64| -> f64 {
        let mut gap = f64::INFINITY;
        for (i, a) in distinct.iter().enumerate() {
            for b in distinct.iter().skip(i + 1) {
                let d = a - b;
                gap = gap.min((phi.cos() * d.re + phi.sin() * d.im).abs());
            }
        }
        gap
    };
    let mut phi = 0.0;
    if distinct.len() > 1 {
        let golden = TAU * 0.381_966_011_250_105;
        let mut best_gap = -1.0;
        for k in 0..257 {
            let cand = 0.123_456 + golden * k as f64;
            let g = gap_at(cand);
            if g > best_gap {
                best_gap = g;
                phi = cand;
            }
            if g > 1e-6 * scale.max(1.0) {
                phi = cand;
                break;
            }
        }
    }
    let t = (phi.cos(), phi.sin());
    let mut out = Vec::with_capacity(distinct.len());
    for lam in &distinct {
        let s = t.0 * lam.re + t.1 * lam.im;
        let face = exposed_face(model, t, s)?;
        let v = [-s, t.0, t.1];
        let nrm = norm3(v);
        out.push(DetectedFace {
            dim: 1,
            direction: [v[0] / nrm, v[1] / nrm, v[2] / nrm],
            slope: Some(*lam),
            vertices: vec![face.psi_minus, face.psi_plus],
            tentative: false,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{self, ModelKind};
    use approx::assert_abs_diff_eq;

    fn diag(entries: &[C64]) -> OperatorModel {
        operators::diagonal_model(entries).expect("diagonal model")
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn one_i_minus_one() -> OperatorModel {
        diag(&[c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0)])
    }

    #[test]
    fn psi_maps_basic_test_operators() {
        let model = one_i_minus_one();
        let zero = CMatrix::zeros(3, 3);
        let p = psi(&model, &zero).unwrap();
        assert_abs_diff_eq!(p.x, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.z.norm(), 0.0, epsilon = 1e-15);

        let id = CMatrix::identity(3, 3);
        let p = psi(&model, &id).unwrap();
        assert_abs_diff_eq!(p.x, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.z.re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.z.im, 1.0 / 3.0, epsilon = 1e-15);

        let mut e00 = CMatrix::zeros(3, 3);
        e00[(0, 0)] = c(1.0, 0.0);
        let p = psi(&model, &e00).unwrap();
        assert_abs_diff_eq!(p.x, 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.z.re, 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.z.im, 0.0, epsilon = 1e-15);

        let doubled = CMatrix::identity(3, 3) * c(2.0, 0.0);
        assert!(matches!(
            psi(&model, &doubled),
            Err(ScaleError::NotContraction { .. })
        ));
        let small = CMatrix::identity(2, 2);
        assert!(matches!(
            psi(&model, &small),
            Err(ScaleError::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn support_values_match_closed_forms() {
        let zero = diag(&[c(0.0, 0.0), c(0.0, 0.0)]);
        assert_abs_diff_eq!(
            support(&zero, [1.0, 0.0, 0.0]).unwrap(),
            1.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            support(&zero, [-1.0, 0.0, 0.0]).unwrap(),
            0.0,
            epsilon = 1e-15
        );

        let j2 = operators::jordan_block(2).expect("jordan block");
        assert_abs_diff_eq!(
            support(&j2, [0.0, 1.0, 0.0]).unwrap(),
            0.25,
            epsilon = 1e-12
        );
        // Positive homogeneity.
        let u = [0.3, -0.4, 0.5];
        let h1 = support(&j2, u).unwrap();
        let h2 = support(&j2, [2.0 * u[0], 2.0 * u[1], 2.0 * u[2]]).unwrap();
        assert_abs_diff_eq!(h2, 2.0 * h1, epsilon = 1e-12);

        assert!(matches!(
            support(&j2, [0.0, 0.0, 0.0]),
            Err(ScaleError::BadDirection)
        ));
    }

    #[test]
    fn exposed_face_splits_spectrum_at_level() {
        let model = one_i_minus_one();
        let face = exposed_face(&model, (1.0, 0.0), 0.0).unwrap();
        // Descending eigenvalues of b1 are [1, 0, -1].
        assert_eq!(face.p_minus_indices, vec![2]);
        assert_eq!(face.p_plus_indices, vec![1, 2]);
        assert_abs_diff_eq!(face.psi_minus.x, 1.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(face.psi_minus.z.re, -1.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(face.psi_minus.z.im, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(face.psi_plus.x, 2.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(face.psi_plus.z.re, -1.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(face.psi_plus.z.im, 1.0 / 3.0, epsilon = 1e-12);
        assert_eq!(face.dim, 1);
    }

    #[test]
    fn exposed_face_degenerate_and_full_cases() {
        // Level above the whole spectrum: both projections are the identity.
        let j2 = operators::jordan_block(2).expect("jordan block");
        let face = exposed_face(&j2, (1.0, 0.0), 1.0).unwrap();
        assert_eq!(face.p_minus_indices, vec![0, 1]);
        assert_eq!(face.p_plus_indices, vec![0, 1]);
        assert_eq!(face.dim, 0);
        assert_abs_diff_eq!(face.psi_minus.x, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(face.psi_plus.x, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(face.psi_plus.z.norm(), 0.0, epsilon = 1e-15);

        // Zero matrix: the whole body is the exposed face of any level-0 cut.
        let zero = diag(&[c(0.0, 0.0), c(0.0, 0.0)]);
        let face = exposed_face(&zero, (1.0, 0.0), 0.0).unwrap();
        assert!(face.p_minus_indices.is_empty());
        assert_eq!(face.p_plus_indices, vec![0, 1]);
        assert_abs_diff_eq!(face.psi_plus.x, 1.0, epsilon = 1e-15);
        assert_eq!(face.dim, 1);

        assert!(matches!(
            exposed_face(&zero, (0.0, 0.0), 0.0),
            Err(ScaleError::ZeroDirection)
        ));
    }

    #[test]
    fn body_of_zero_matrix_is_a_segment() {
        let zero = diag(&[c(0.0, 0.0), c(0.0, 0.0)]);
        let body = build_body(&zero, 64).unwrap();
        assert_eq!(body.vertex_cloud().len(), 2);
        assert_abs_diff_eq!(body.vertex_cloud()[0].x, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(body.vertex_cloud()[1].x, 1.0, epsilon = 1e-15);
        assert!(build_body(&zero, 32).is_err());
    }

    #[test]
    fn body_endpoints_and_symmetry_invariants() {
        for seed in [1u64, 2, 3] {
            let model = operators::random_model(ModelKind::Generic, 4, seed).unwrap();
            let body = build_body(&model, 64).unwrap();
            let tau = model.trace_mean();
            let cloud = body.vertex_cloud();
            // (0,0) and (1, τ(c)) are always present.
            assert!(cloud
                .iter()
                .any(|p| p.x.abs() < 1e-12 && p.z.norm() < 1e-12));
            assert!(cloud
                .iter()
                .any(|p| (p.x - 1.0).abs() < 1e-12 && (p.z - tau).norm() < 1e-12));
            // Central symmetry of the support function.
            for k in 0..40 {
                let a = 2.399963 * k as f64;
                let b = 1.618 * k as f64;
                let u = normalize3([(a).cos() * (b).sin(), (a).sin() * (b).sin(), (b).cos()])
                    .unwrap();
                let h = support(&model, u).unwrap();
                let hneg = support(&model, [-u[0], -u[1], -u[2]]).unwrap();
                let affine = u[0] + u[1] * tau.re + u[2] * tau.im;
                assert_abs_diff_eq!(h, affine + hneg, epsilon = 1e-10);
            }
            // Every cloud point satisfies every sampled support inequality.
            for p in cloud {
                for k in 0..60 {
                    let a = 0.71 * k as f64;
                    let b = 2.09 * k as f64 + 0.3;
                    let u =
                        normalize3([(a).cos() * (b).sin(), (a).sin() * (b).sin(), (b).cos()])
                            .unwrap();
                    let h = support(&model, u).unwrap();
                    assert!(dot3(u, p.coords()) <= h + 1e-10);
                }
            }
        }
    }

    #[test]
    fn translation_covariance_of_cloud() {
        let model = operators::random_model(ModelKind::Generic, 3, 9).unwrap();
        let lambda = c(0.4, -0.7);
        let shifted = operators::translate_rotate(&model, lambda, 0.0).unwrap();
        let body = build_body(&model, 64).unwrap();
        let shifted_body = build_body(&shifted, 64).unwrap();
        // Same grid, same eigenvectors: clouds correspond point-by-point
        // under (x, z) ↦ (x, z − λ·x).
        for p in body.vertex_cloud() {
            let image = ScalePoint::new(p.x, p.z - lambda * p.x);
            let hit = shifted_body
                .vertex_cloud()
                .iter()
                .any(|q| q.distance(&image) <= 1e-9);
            assert!(hit, "missing translate of {:?}", p);
        }
    }

    #[test]
    fn zonotope_generators_for_normal_models() {
        let model = one_i_minus_one();
        let body = build_body(&model, 64).unwrap();
        let gens = body.zonotope_generators().expect("normal model");
        assert_eq!(gens.len(), 3);
        for lam in [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0)] {
            assert!(gens.iter().any(|g| {
                (g.x - 1.0 / 3.0).abs() < 1e-12 && (g.z - lam / 3.0).norm() < 1e-10
            }));
        }
        // Zonotope support must equal body support exactly.
        for k in 0..50 {
            let a = 1.234 * k as f64;
            let b = 0.777 * k as f64 + 0.1;
            let u = normalize3([(a).cos() * (b).sin(), (a).sin() * (b).sin(), (b).cos()])
                .unwrap();
            let h = support(&model, u).unwrap();
            let hz: f64 = gens
                .iter()
                .map(|g| dot3(u, g.coords()).max(0.0))
                .sum();
            assert_abs_diff_eq!(h, hz, epsilon = 1e-10);
        }

        let j2 = operators::jordan_block(2).expect("jordan block");
        let body = build_body(&j2, 64).unwrap();
        assert!(body.zonotope_generators().is_none());
    }

    #[test]
    fn jordan_block_slice_has_disk_radius_quarter() {
        let j2 = operators::jordan_block(2).expect("jordan block");
        let body = build_body(&j2, 128).unwrap();
        let mids: Vec<&ScalePoint> = body
            .vertex_cloud()
            .iter()
            .filter(|p| (p.x - 0.5).abs() < 1e-12)
            .collect();
        assert!(mids.len() >= 64);
        for p in &mids {
            assert_abs_diff_eq!(p.z.norm(), 0.25, epsilon = 1e-6);
        }
    }

    #[test]
    fn membership_classifies_spec_points() {
        let model = one_i_minus_one();
        let body = build_body(&model, 64).unwrap();
        let tol = 1e-9;
        assert_eq!(
            body.membership(ScalePoint::new(0.0, c(0.0, 0.0)), tol).unwrap(),
            Membership::Boundary
        );
        assert_eq!(
            body.membership(ScalePoint::new(1.0 / 3.0, c(1.0 / 3.0, 0.0)), tol)
                .unwrap(),
            Membership::Boundary
        );
        let tau = model.trace_mean();
        assert_eq!(
            body.membership(ScalePoint::new(0.5, tau / 2.0), tol).unwrap(),
            Membership::Interior
        );
        assert_eq!(
            body.membership(ScalePoint::new(-0.05, c(0.0, 0.0)), tol).unwrap(),
            Membership::Outside
        );
        assert_eq!(
            body.membership(ScalePoint::new(0.5, c(0.7, 0.0)), tol).unwrap(),
            Membership::Outside
        );

        let j2 = operators::jordan_block(2).expect("jordan block");
        let body = build_body(&j2, 64).unwrap();
        assert_eq!(
            body.membership(ScalePoint::new(0.5, c(0.0, 0.0)), tol).unwrap(),
            Membership::Interior
        );
        assert_eq!(
            body.membership(ScalePoint::new(0.5, c(0.25, 0.0)), tol).unwrap(),
            Membership::Boundary
        );
    }

    #[test]
    fn face_slopes_of_normal_models_are_eigenvalues() {
        let model = one_i_minus_one();
        let body = build_body(&model, 64).unwrap();
        let expected = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0)];

        // Fast path: one edge per distinct eigenvalue, slopes exact.
        let fast = enumerate_faces(&body, DEFAULT_FACE_TOL).unwrap();
        let fast_slopes: Vec<C64> = fast
            .iter()
            .filter(|f| f.dim == 1)
            .map(|f| f.slope.unwrap())
            .collect();
        assert_eq!(fast_slopes.len(), 3);
        for lam in expected {
            assert!(fast_slopes.iter().any(|s| (s - lam).norm() < 1e-10));
        }

        // Clustered route: distinct slope values must agree within 1e-7.
        let clustered = enumerate_faces_clustered(&body, DEFAULT_FACE_TOL).unwrap();
        let firm: Vec<&DetectedFace> = clustered
            .iter()
            .filter(|f| f.dim == 1 && !f.tentative)
            .collect();
        assert!(!firm.is_empty());
        for f in &firm {
            assert!(
                expected.iter().any(|lam| (f.slope.unwrap() - lam).norm() < 1e-7),
                "unexpected slope {:?}",
                f.slope
            );
        }
        for lam in expected {
            assert!(firm
                .iter()
                .any(|f| (f.slope.unwrap() - lam).norm() < 1e-7));
        }
    }

    #[test]
    fn face_slopes_of_hermitian_model_are_real() {
        let model = diag(&[c(1.0, 0.0), c(0.5, 0.0), c(1.0 / 3.0, 0.0)]);
        let body = build_body(&model, 64).unwrap();
        let faces = enumerate_faces(&body, DEFAULT_FACE_TOL).unwrap();
        let slopes: Vec<C64> = faces
            .iter()
            .filter(|f| f.dim == 1)
            .map(|f| f.slope.unwrap())
            .collect();
        assert_eq!(slopes.len(), 3);
        for s in &slopes {
            assert_abs_diff_eq!(s.im, 0.0, epsilon = 1e-10);
        }
        for want in [1.0, 0.5, 1.0 / 3.0] {
            assert!(slopes.iter().any(|s| (s.re - want).abs() < 1e-10));
        }
    }

    #[test]
    fn jordan_block_cone_rulings_are_detected_edges() {
        // The body of the 2×2 nilpotent Jordan block is a double cone whose
        // lateral boundary is ruled by segments joining the poles (0,0) and
        // (1,0) to the mid-slice circle |z| = 1/4; each ruling is a genuine
        // one-dimensional face with slope of modulus 1/2.
        let j2 = operators::jordan_block(2).expect("jordan block");
        let body = build_body(&j2, 64).unwrap();
        let faces = enumerate_faces_clustered(&body, DEFAULT_FACE_TOL).unwrap();
        let edges: Vec<&DetectedFace> = faces
            .iter()
            .filter(|f| f.dim == 1 && !f.tentative)
            .collect();
        assert!(!edges.is_empty());
        for e in &edges {
            assert_abs_diff_eq!(e.slope.unwrap().norm(), 0.5, epsilon = 1e-9);
            let touches_pole = e.vertices.iter().any(|v| {
                (v.x.abs() < 1e-9 && v.z.norm() < 1e-9)
                    || ((v.x - 1.0).abs() < 1e-9 && v.z.norm() < 1e-9)
            });
            assert!(touches_pole);
        }
    }

    #[test]
    fn normal_eigenvalues_match_diagonal_and_reject_nonnormal() {
        let model = one_i_minus_one();
        let mut lams = normal_eigenvalues(&model).unwrap();
        lams.sort_by(|a, b| (b.re, b.im).partial_cmp(&(a.re, a.im)).unwrap());
        assert_eq!(lams.len(), 3);
        assert!((lams[0] - c(1.0, 0.0)).norm() < 1e-12);
        assert!((lams[1] - c(0.0, 1.0)).norm() < 1e-12);
        assert!((lams[2] - c(-1.0, 0.0)).norm() < 1e-12);

        for seed in [5u64, 11] {
            let m = operators::random_model(ModelKind::Normal, 5, seed).unwrap();
            let lams = normal_eigenvalues(&m).unwrap();
            assert_eq!(lams.len(), 5);
            // Each recovered eigenvalue is an actual eigenvalue of c:
            // c − λ is singular, detected via a tiny smallest singular value
            // of the Hermitian square.
            for lam in &lams {
                let n = m.n();
                let shifted = m.c() - CMatrix::identity(n, n) * *lam;
                let gram = shifted.adjoint() * &shifted;
                let eigs = eigen::eigenvalues_descending(&gram).unwrap();
                assert!(eigs[n - 1].abs() < 1e-13 * (1.0 + eigs[0]));
            }
        }

        let j2 = operators::jordan_block(2).expect("jordan block");
        assert!(matches!(
            normal_eigenvalues(&j2),
            Err(ScaleError::NotNormal { .. })
        ));
    }
}
