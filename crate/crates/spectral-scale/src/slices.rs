//! Horizontal geometry of the body: isotrace slices, the ray map Δ and its
//! scaled regions Δ_t, radial complex slopes at the origin, origin-anchored
//! boundary segments, and origin-containing two-dimensional faces.
//!
//! The slice at trace level `t` is `I_t = {z : (t, z) ∈ B}`; its support in
//! direction θ is a fractional Ky Fan sum of `b_θ = cos θ·b1 + sin θ·b2`, so
//! every slice is computable angle by angle. The ray map `Δ(x, z) = z/x` is
//! constant on rays through the origin of the body, which turns boundary
//! rays into complex slopes: the slope profile at the origin recovers the
//! boundary of the numerical range, segments through the origin certify
//! attained boundary points, and for normal matrices the one-dimensional
//! face slopes recover the spectrum.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use thiserror::Error;

use crate::eigen::{self, C64, EigenError};
use crate::numrange::{self, ConvexRegion2D, NumRangeError, RadialEvaluator};
use crate::operators::{self, OperatorError, OperatorModel};
use crate::scale::{self, ScaleError, ScalePoint};

/// Two endpoint margins larger than this reject a chord endpoint as
/// off-boundary; segment certificates use the same scale.
pub const BOUNDARY_CERT_TOL: f64 = 1e-7;
/// Smallest ray extent accepted as a genuine origin segment.
pub const MIN_SEGMENT_EXTENT: f64 = 1e-9;
/// Relative second-moment threshold below which the body counts as planar.
pub const PLANARITY_RATIO: f64 = 1e-12;

/// Errors raised by slice and slope computations.
#[derive(Debug, Error)]
pub enum SliceError {
    /// The trace level was outside the open interval (0, 1).
    #[error("trace level t must lie in (0, 1), got {0}")]
    TOutOfRange(f64),
    /// Fewer than four angles requested.
    #[error("angle grid must have at least 4 angles, got {0}")]
    TooFewAngles(usize),
    /// The t-sequence violated its contract.
    #[error("t-sequence must be strictly decreasing inside (0, 1) with last element <= 1/n: {0}")]
    BadSequence(String),
    /// The ray map Δ is undefined on the fiber x = 0.
    #[error("the ray map is undefined at x = {0}; it requires x > 0")]
    DeltaUndefined(f64),
    /// The ratio r_{t,θ}/t failed to grow as t decreased: a numerical
    /// integrity failure, since slice nesting forces monotonicity.
    #[error(
        "radial ratio at angle {theta} decreased from {ratio_hi} (t = {t_hi}) to {ratio_lo} (t = {t_lo})"
    )]
    MonotoneViolation {
        theta: f64,
        t_hi: f64,
        ratio_hi: f64,
        t_lo: f64,
        ratio_lo: f64,
    },
    /// A chord endpoint was not on the numerical-range boundary.
    #[error("endpoint {lambda} is off the numerical-range boundary by {margin:.3e}")]
    EndpointNotOnBoundary { lambda: C64, margin: f64 },
    /// The two chord endpoints coincide.
    #[error("chord endpoints must be distinct")]
    EndpointsCoincide,
    /// An eigenvalue route that requires normality was called on a
    /// non-normal model.
    #[error("model is not normal: commutator norm {defect:.3e} exceeds {tolerance:.3e}")]
    NotNormal { defect: f64, tolerance: f64 },
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Scale(#[from] ScaleError),
    #[error(transparent)]
    Range(#[from] NumRangeError),
    #[error(transparent)]
    Eigen(#[from] EigenError),
}

/// The slice `I_t = {z : (t, z) ∈ B}` of the body at trace level `t`,
/// parametrized radially around its central-axis point `t·τ(c)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IsotraceSlice {
    /// Trace level in (0, 1).
    pub t: f64,
    /// The central-axis point `t·τ(c)`, always in the relative interior.
    pub center: C64,
    /// Pairs `(θ, r_{t,θ})`: distance from the center to the boundary along
    /// direction θ.
    pub radii: Vec<(f64, f64)>,
    /// Boundary polyline; entry i equals `center + r_i·e^{iθ_i}`.
    pub boundary: Vec<C64>,
}

/// Radial complex slopes of the body at the origin.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RadialSlopeProfile {
    /// The central slope τ(c) — the slope of the central axis itself.
    pub central_slope: C64,
    /// Pairs `(θ, r_θ)` where `r_θ = lim_{t↓0} r_{t,θ}/t`, evaluated exactly
    /// at `t = 1/n`.
    pub profile: Vec<(f64, f64)>,
    /// The complex slopes `r_θ·e^{iθ} + τ(c)`, parallel to `profile`.
    pub slopes: Vec<C64>,
    /// Set when the body is planar (the matrix is Hermitian after rotation
    /// and translation); then exactly two directions carry the profile.
    pub planar: bool,
}

/// A boundary segment of the body lying on the ray `{(t, t·λ)}`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SegmentAtOrigin {
    /// The complex slope λ of the ray.
    pub slope: C64,
    /// Largest t with `(t, t·λ)` still on the boundary.
    pub t_max: f64,
}

/// A two-dimensional face of the body containing the origin, spanned by the
/// origin segments over a boundary chord of the numerical range.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TwoFaceAtOrigin {
    /// The chord endpoints (λ0, λ1) on the numerical-range boundary.
    pub endpoints: (C64, C64),
    /// The origin segments found along the sampled chord slopes.
    pub samples: Vec<SegmentAtOrigin>,
    /// Whether the segment of λ0 (resp. λ1) itself exists, i.e. the
    /// endpoint belongs to the face.
    pub endpoint_in_face: (bool, bool),
    /// Largest distance of a segment tip from the best-fit plane through the
    /// origin, relative to the largest tip norm; near zero certifies that
    /// all sampled segments span a single plane.
    pub planarity_residual: f64,
}

fn check_angles(angles: usize) -> Result<(), SliceError> {
    if angles < 4 {
        return Err(SliceError::TooFewAngles(angles));
    }
    Ok(())
}

fn check_t(t: f64) -> Result<(), SliceError> {
    if !(t.is_finite() && t > 0.0 && t < 1.0) {
        return Err(SliceError::TOutOfRange(t));
    }
    Ok(())
}

/// Support of the slice `I_t` in direction θ: `(1/n)·S_{t·n}(b_θ)`, the
/// fractional Ky Fan sum of `b_θ` — the maximum of `τ(a·b_θ)` over positive
/// contractions with `τ(a) = t`.
pub fn slice_support(model: &OperatorModel, t: f64, theta: f64) -> Result<f64, SliceError> {
    check_t(t)?;
    let n = model.n();
    let eigs = eigen::eigenvalues_descending(&model.rotated_part(theta))?;
    Ok(numrange::ky_fan_sum(&eigs, t * n as f64) / n as f64)
}

/// Infallible slice-support closure for radial evaluation. The caller must
/// have probed `slice_support` once on the same model so that an eigensolver
/// integrity failure surfaces as an error rather than a panic.
fn slice_support_fn(model: &OperatorModel, t: f64) -> impl Fn(f64) -> f64 + Sync + '_ {
    move |theta| {
        slice_support(model, t, theta)
            .expect("slice support after a successful probe of the same model")
    }
}

/// Compute the isotrace slice at level `t` on a uniform angle grid, radially
/// parametrized around the central-axis point `t·τ(c)`.
pub fn isotrace_slice(
    model: &OperatorModel,
    t: f64,
    angles: usize,
) -> Result<IsotraceSlice, SliceError> {
    check_t(t)?;
    check_angles(angles)?;
    let center = model.trace_mean() * t;
    // Probe once so eigensolver failures surface as errors.
    slice_support(model, t, 0.0)?;
    let evaluator = RadialEvaluator::new(slice_support_fn(model, t), center, angles);
    let radii: Vec<(f64, f64)> = numrange::angle_grid(angles)
        .into_par_iter()
        .map(|theta| (theta, evaluator.radial(theta)))
        .collect();
    let boundary = radii
        .iter()
        .map(|&(theta, r)| center + C64::new(r * theta.cos(), r * theta.sin()))
        .collect();
    Ok(IsotraceSlice {
        t,
        center,
        radii,
        boundary,
    })
}

/// The ray map `Δ(x, z) = z/x`, defined for `x > 0`. Constant on rays
/// through the origin: `Δ(t, t·λ) = λ`.
pub fn delta(p: ScalePoint) -> Result<C64, SliceError> {
    if !(p.x.is_finite() && p.x > 0.0) {
        return Err(SliceError::DeltaUndefined(p.x));
    }
    Ok(p.z / p.x)
}

/// The region `Δ_t = Δ(I_t) = (1/t)·I_t`, assembled from exact support
/// values and Ky Fan maximizer contacts on a uniform angle grid.
///
/// The support samples satisfy `h_{Δ_t}(θ) = S_{t·n}(b_θ)/(n·t)` exactly,
/// so two regions on the same grid compare at machine precision.
pub fn delta_region(
    model: &OperatorModel,
    t: f64,
    angles: usize,
) -> Result<ConvexRegion2D, SliceError> {
    check_t(t)?;
    check_angles(angles)?;
    let n = model.n();
    let kappa = t * n as f64;
    let samples: Vec<Result<(f64, f64, C64), SliceError>> = numrange::angle_grid(angles)
        .into_par_iter()
        .map(|theta| {
            let eig = eigen::eigh(&model.rotated_part(theta))?;
            let support = numrange::ky_fan_sum(&eig.values, kappa) / (n as f64 * t);
            // Contact point: Ψ-image of the Ky Fan maximizer, scaled by 1/t.
            let whole = (kappa.floor() as usize).min(n);
            let frac = kappa - whole as f64;
            let mut z = C64::new(0.0, 0.0);
            for j in 0..whole {
                let v = eig.vectors.column(j).into_owned();
                z += v.dotc(&(model.c() * &v));
            }
            if frac > 0.0 && whole < n {
                let v = eig.vectors.column(whole).into_owned();
                z += v.dotc(&(model.c() * &v)) * frac;
            }
            Ok((theta, support, z / (n as f64 * t)))
        })
        .collect();
    let mut support_samples = Vec::with_capacity(angles);
    let mut boundary: Vec<C64> = Vec::with_capacity(angles);
    let scale = 1.0 + eigen::fro_norm(model.c());
    for s in samples {
        let (theta, support, contact) = s?;
        support_samples.push((theta, support));
        if boundary
            .last()
            .is_none_or(|last| (last - contact).norm() > 1e-12 * scale)
        {
            boundary.push(contact);
        }
    }
    if boundary.len() > 1 && (boundary[0] - boundary[boundary.len() - 1]).norm() <= 1e-12 * scale {
        boundary.pop();
    }
    Ok(ConvexRegion2D {
        support_samples,
        boundary,
        closed: true,
    })
}

/// 3×3 second-moment (covariance) spectrum of the vertex cloud, descending.
fn cloud_covariance_spectrum(cloud: &[ScalePoint]) -> Result<(Vec<f64>, Vec<[f64; 3]>), SliceError> {
    let n = cloud.len().max(1) as f64;
    let mut mean = [0.0f64; 3];
    for p in cloud {
        let c = p.coords();
        for (m, v) in mean.iter_mut().zip(c) {
            *m += v / n;
        }
    }
    let mut cov = crate::eigen::CMatrix::zeros(3, 3);
    for p in cloud {
        let c = p.coords();
        let d = [c[0] - mean[0], c[1] - mean[1], c[2] - mean[2]];
        for i in 0..3 {
            for j in 0..3 {
                cov[(i, j)] += C64::new(d[i] * d[j] / n, 0.0);
            }
        }
    }
    let eig = eigen::eigh(&cov)?;
    let vectors = (0..3)
        .map(|k| {
            let col = eig.vectors.column(k);
            [col[0].re, col[1].re, col[2].re]
        })
        .collect();
    Ok((eig.values.clone(), vectors))
}

/// Radial complex slopes of the body at the origin.
///
/// The matrix is recentered (`c' = c − τ(c)·1`) so the origin ray structure
/// is probed around the central axis; the limit `r_θ = lim_{t↓0} r_{t,θ}/t`
/// is evaluated exactly at `t = 1/n` (below the minimal trace of a nonzero
/// projection the ratio is constant), while the supplied decreasing
/// `t_sequence` is used to assert the monotone growth of the ratio as a
/// numerical integrity check. Planar bodies report exactly two in-plane
/// directions; a scalar matrix reports the single slope τ(c) at direction 0.
pub fn radial_slopes(
    model: &OperatorModel,
    angles: usize,
    t_sequence: &[f64],
) -> Result<RadialSlopeProfile, SliceError> {
    check_angles(angles)?;
    let n = model.n();
    let base_t = 1.0 / n as f64;
    if t_sequence.is_empty() {
        return Err(SliceError::BadSequence("sequence is empty".into()));
    }
    for &t in t_sequence {
        if !(t.is_finite() && t > 0.0 && t < 1.0) {
            return Err(SliceError::BadSequence(format!("element {t} outside (0, 1)")));
        }
    }
    for w in t_sequence.windows(2) {
        if w[1] >= w[0] {
            return Err(SliceError::BadSequence(format!(
                "not strictly decreasing at {} -> {}",
                w[0], w[1]
            )));
        }
    }
    let last = *t_sequence.last().expect("nonempty sequence");
    if last > base_t + 1e-12 {
        return Err(SliceError::BadSequence(format!(
            "last element {last} exceeds 1/n = {base_t}"
        )));
    }

    let tau = model.trace_mean();
    let shifted = operators::translate_rotate(model, tau, 0.0)?;
    let scale = 1.0 + eigen::fro_norm(model.c());

    // Scalar matrix: the body is a segment on the central axis; by
    // convention the profile is the single slope τ(c) at direction 0.
    if eigen::fro_norm(shifted.c()) <= 1e-13 * scale {
        return Ok(RadialSlopeProfile {
            central_slope: tau,
            profile: vec![(0.0, 0.0)],
            slopes: vec![tau],
            planar: true,
        });
    }

    // Planarity of the recentered body via the vertex-cloud second moment.
    let body = scale::build_body(&shifted, scale::MIN_DIRECTION_GRID)?;
    let (cov_eigs, cov_vecs) = cloud_covariance_spectrum(body.vertex_cloud())?;
    let planar = cov_eigs[2] < PLANARITY_RATIO * cov_eigs[0].max(f64::MIN_POSITIVE);

    let thetas: Vec<f64> = if planar {
        // In-plane z-direction: the plane contains the x-axis, so the normal
        // ν has the form (≈0, ν_re, ν_im) and the slice line runs along
        // (−ν_im, ν_re) in the z-plane.
        let nu = cov_vecs[2];
        let psi = nu[1].atan2(-nu[2]);
        let base = psi.rem_euclid(TAU);
        vec![base, (base + std::f64::consts::PI).rem_euclid(TAU)]
    } else {
        numrange::angle_grid(angles)
    };

    // Probe the slice supports once so closure failures cannot panic.
    slice_support(&shifted, base_t, 0.0)?;
    let base_eval = RadialEvaluator::new(
        slice_support_fn(&shifted, base_t),
        C64::new(0.0, 0.0),
        angles.max(64),
    );
    let seq_evals: Vec<(f64, RadialEvaluator<_>)> = t_sequence
        .iter()
        .map(|&t| {
            (
                t,
                RadialEvaluator::new(
                    slice_support_fn(&shifted, t),
                    C64::new(0.0, 0.0),
                    angles.max(64),
                ),
            )
        })
        .collect();

    let rows: Vec<Result<(f64, f64), SliceError>> = thetas
        .par_iter()
        .map(|&theta| {
            // Integrity check: r_{t,θ}/t must not decrease as t decreases.
            let mut prev: Option<(f64, f64)> = None;
            for (t, ev) in &seq_evals {
                let ratio = ev.radial(theta) / t;
                if let Some((t_hi, ratio_hi)) = prev {
                    if ratio < ratio_hi - 1e-10 {
                        return Err(SliceError::MonotoneViolation {
                            theta,
                            t_hi,
                            ratio_hi,
                            t_lo: *t,
                            ratio_lo: ratio,
                        });
                    }
                }
                prev = Some((*t, ratio));
            }
            Ok((theta, base_eval.radial(theta) / base_t))
        })
        .collect();

    let mut profile = Vec::with_capacity(thetas.len());
    let mut slopes = Vec::with_capacity(thetas.len());
    for row in rows {
        let (theta, r) = row?;
        profile.push((theta, r));
        slopes.push(tau + C64::new(r * theta.cos(), r * theta.sin()));
    }
    Ok(RadialSlopeProfile {
        central_slope: tau,
        profile,
        slopes,
        planar,
    })
}

/// How far the ray `{(t, t·λ)}` stays inside the body: the support ratio
/// `t_λ = inf h(u)/⟨u, (1, Re λ, Im λ)⟩` over directions with positive
/// denominator, sampled over an azimuth-level grid and sharpened by a local
/// refinement pass.
fn ray_extent(model: &OperatorModel, lambda: C64) -> Result<f64, SliceError> {
    let v = [1.0, lambda.re, lambda.im];
    let n = model.n() as f64;
    const GRID: usize = 720;
    // Directions nearly orthogonal to the ray amplify eigensolver noise in
    // the ratio by 1/den, so they can dip below the true infimum; a floor
    // relative to ‖v‖ caps that amplification at ~1e-11 while keeping every
    // direction that can actually expose the exit face (those have den on
    // the order of the face's angular offset from the ray, far above 1e-4).
    let den_floor = 1e-4 * (1.0 + lambda.norm());
    let mut best: (f64, [f64; 3]) = (1.0, [1.0, 0.0, 0.0]); // pole: ratio = h/1 = 1
    for i in 0..GRID {
        let phi = TAU * i as f64 / GRID as f64;
        let eig = eigen::eigh(&model.rotated_part(phi))?;
        for &mu in &eig.values {
            let dir = [-mu, phi.cos(), phi.sin()];
            let nrm = (mu * mu + 1.0).sqrt();
            let den = (dot3(dir, v)) / nrm;
            if den <= den_floor {
                continue;
            }
            let h = eig.values.iter().map(|&w| (w - mu).max(0.0)).sum::<f64>() / (n * nrm);
            let ratio = h / den;
            if ratio < best.0 {
                best = (ratio, [dir[0] / nrm, dir[1] / nrm, dir[2] / nrm]);
            }
        }
    }
    // Shrinking-stencil refinement with fresh support evaluations.
    let offsets: [[f64; 3]; 6] = [
        [1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, -1.0, 0.0],
        [0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0],
    ];
    let mut step = TAU / GRID as f64;
    for _ in 0..48 {
        let center = best.1;
        for off in offsets {
            let cand = [
                center[0] + step * off[0],
                center[1] + step * off[1],
                center[2] + step * off[2],
            ];
            let nrm = dot3(cand, cand).sqrt();
            if nrm < 1e-14 {
                continue;
            }
            let u = [cand[0] / nrm, cand[1] / nrm, cand[2] / nrm];
            let den = dot3(u, v);
            if den <= den_floor {
                continue;
            }
            let ratio = scale::support(model, u)? / den;
            if ratio < best.0 {
                best = (ratio, u);
            }
        }
        step *= 0.6;
    }
    Ok(best.0.max(0.0))
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Find the boundary segment of the body along the ray of slope λ, if one
/// exists.
///
/// The ray extent `t_λ` comes from the support-ratio formula; the result is
/// a segment only when `t_λ` is nontrivial **and** the ray midpoint
/// `(t_λ/2, λ·t_λ/2)` certifies as a boundary point (margin within
/// [`BOUNDARY_CERT_TOL`]), which happens exactly when λ is an attained
/// boundary point of the numerical range. Absence is a valid outcome.
pub fn segment_at_origin(
    model: &OperatorModel,
    lambda: C64,
) -> Result<Option<SegmentAtOrigin>, SliceError> {
    let t_max = ray_extent(model, lambda)?;
    if t_max <= MIN_SEGMENT_EXTENT {
        return Ok(None);
    }
    let mid = ScalePoint::new(t_max / 2.0, lambda * (t_max / 2.0));
    let margin = scale::point_margin(model, mid, 128)?;
    if margin.abs() <= BOUNDARY_CERT_TOL {
        Ok(Some(SegmentAtOrigin {
            slope: lambda,
            t_max,
        }))
    } else {
        Ok(None)
    }
}

/// Look for the two-dimensional face of the body over a boundary chord
/// `[λ0, λ1]` of the numerical range.
///
/// The chord is sampled at `s ∈ {0, 1/4, 1/2, 3/4, 1}` (`λ_s = s·λ0 +
/// (1−s)·λ1`); the face exists when every interior sample carries an origin
/// segment. Endpoints are flagged as belonging to the face exactly when
/// their own segments exist.
pub fn two_face_at_origin(
    model: &OperatorModel,
    endpoints: (C64, C64),
) -> Result<Option<TwoFaceAtOrigin>, SliceError> {
    let (l0, l1) = endpoints;
    let scale_z = 1.0 + l0.norm().max(l1.norm());
    if (l0 - l1).norm() <= 1e-12 * scale_z {
        return Err(SliceError::EndpointsCoincide);
    }
    for lambda in [l0, l1] {
        let (_, margin) = numrange::boundary_margin(model, lambda)?;
        if margin.abs() > BOUNDARY_CERT_TOL {
            return Err(SliceError::EndpointNotOnBoundary { lambda, margin });
        }
    }
    let fractions = [0.0, 0.25, 0.5, 0.75, 1.0];
    let mut segments: Vec<Option<SegmentAtOrigin>> = Vec::with_capacity(fractions.len());
    for &s in &fractions {
        let lam = l0 * s + l1 * (1.0 - s);
        segments.push(segment_at_origin(model, lam)?);
    }
    if segments[1..4].iter().any(|s| s.is_none()) {
        return Ok(None);
    }
    let samples: Vec<SegmentAtOrigin> = segments.iter().flatten().copied().collect();
    // Planarity: the segment tips t·(1, Re λ, Im λ) must span a plane
    // through the origin. The best-fit normal is the smallest eigenvector of
    // the tip Gram matrix; the defect is then measured linearly, tip by tip,
    // as the out-of-plane component. (Reading the defect off the smallest
    // Gram *eigenvalue* instead would square it and bottom out near
    // sqrt(machine epsilon).)
    let tips: Vec<[f64; 3]> = samples
        .iter()
        .map(|seg| {
            [
                seg.t_max,
                seg.t_max * seg.slope.re,
                seg.t_max * seg.slope.im,
            ]
        })
        .collect();
    let mut gram = crate::eigen::CMatrix::zeros(3, 3);
    for tip in &tips {
        for i in 0..3 {
            for j in 0..3 {
                gram[(i, j)] += C64::new(tip[i] * tip[j], 0.0);
            }
        }
    }
    let decomp = eigen::eigh(&gram)?;
    let col = [
        decomp.vectors[(0, 2)],
        decomp.vectors[(1, 2)],
        decomp.vectors[(2, 2)],
    ];
    // The Gram matrix is real, so the eigenvector is real up to a unit
    // phase; strip the phase of its largest component before projecting.
    let lead = col
        .iter()
        .copied()
        .max_by(|a, b| a.norm().partial_cmp(&b.norm()).expect("finite entries"))
        .expect("three components");
    let phase = if lead.norm() > 0.0 {
        lead / lead.norm()
    } else {
        C64::new(1.0, 0.0)
    };
    let normal = [
        (col[0] * phase.conj()).re,
        (col[1] * phase.conj()).re,
        (col[2] * phase.conj()).re,
    ];
    let tip_scale = tips
        .iter()
        .map(|t| (t[0] * t[0] + t[1] * t[1] + t[2] * t[2]).sqrt())
        .fold(f64::MIN_POSITIVE, f64::max);
    let planarity_residual = tips
        .iter()
        .map(|t| (t[0] * normal[0] + t[1] * normal[1] + t[2] * normal[2]).abs())
        .fold(0.0f64, f64::max)
        / tip_scale;
    Ok(Some(TwoFaceAtOrigin {
        endpoints,
        samples,
        endpoint_in_face: (segments[4].is_some(), segments[0].is_some()),
        planarity_residual,
    }))
}

/// Recover the spectrum of a normal matrix from the geometry of its body:
/// the distinct complex slopes of the detected one-dimensional faces.
///
/// Rejects non-normal input (for non-normal matrices the face slopes do not
/// enumerate the spectrum). The detection runs the clustering route, so the
/// result is a genuinely geometric readout rather than a diagonalization.
pub fn eigenvalues_from_faces(model: &OperatorModel) -> Result<Vec<C64>, SliceError> {
    if !model.is_normal(scale::NORMALITY_TOL) {
        return Err(SliceError::NotNormal {
            defect: model.commutator_norm(),
            tolerance: scale::NORMALITY_TOL,
        });
    }
    let body = scale::build_body(model, scale::MIN_DIRECTION_GRID)?;
    let faces = scale::enumerate_faces_clustered(&body, scale::DEFAULT_FACE_TOL)?;
    let mut slopes: Vec<C64> = Vec::new();
    for face in faces {
        if face.dim != 1 || face.tentative {
            continue;
        }
        let s = face.slope.expect("dim-1 faces carry a slope");
        if !slopes.iter().any(|t| (t - s).norm() <= 1e-7) {
            slopes.push(s);
        }
    }
    slopes.sort_by(|a, b| {
        (a.re, a.im)
            .partial_cmp(&(b.re, b.im))
            .expect("finite slopes")
    });
    Ok(slopes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numrange::{boundary_w, hausdorff};
    use crate::operators::{build_model, diagonal_model, jordan_block, random_model, ModelKind};
    use approx::assert_abs_diff_eq;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn triangle() -> OperatorModel {
        diagonal_model(&[c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0)]).unwrap()
    }

    #[test]
    fn slice_support_closed_forms() {
        let j2 = jordan_block(2).unwrap();
        for k in 0..12 {
            let theta = TAU * k as f64 / 12.0;
            assert_abs_diff_eq!(
                slice_support(&j2, 0.5, theta).unwrap(),
                0.25,
                epsilon = 1e-12
            );
        }
        let tri = triangle();
        // At t = 1/n the slice support is h_W/n.
        let w = boundary_w(&tri, 90).unwrap();
        for &(theta, h) in &w.support_samples {
            assert_abs_diff_eq!(
                slice_support(&tri, 1.0 / 3.0, theta).unwrap(),
                h / 3.0,
                epsilon = 1e-12
            );
        }
        assert!(matches!(
            slice_support(&tri, 0.0, 0.0),
            Err(SliceError::TOutOfRange(_))
        ));
        assert!(matches!(
            slice_support(&tri, 1.0, 0.0),
            Err(SliceError::TOutOfRange(_))
        ));
    }

    #[test]
    fn isotrace_slice_radial_consistency() {
        let model = random_model(ModelKind::Generic, 4, 17).unwrap();
        let slice = isotrace_slice(&model, 0.4, 90).unwrap();
        assert_abs_diff_eq!(slice.center.re, 0.4 * model.trace_mean().re, epsilon = 1e-15);
        assert_eq!(slice.radii.len(), 90);
        assert_eq!(slice.boundary.len(), 90);
        for ((theta, r), b) in slice.radii.iter().zip(&slice.boundary) {
            assert!(*r >= 0.0);
            let expect = slice.center + c(r * theta.cos(), r * theta.sin());
            assert!((b - expect).norm() <= 1e-10);
        }
        assert!(numrange::is_convex_polyline(&slice.boundary, 1e-8));
    }

    #[test]
    fn delta_is_the_ray_map() {
        let p = ScalePoint::new(0.5, c(3.0, 4.0));
        assert_eq!(delta(p).unwrap(), c(6.0, 8.0));
        let tau = c(0.3, -0.2);
        assert!((delta(ScalePoint::new(1.0, tau)).unwrap() - tau).norm() < 1e-15);
        let lam = c(-0.7, 0.4);
        for t in [0.1, 0.25, 0.8] {
            let p = ScalePoint::new(t, lam * t);
            assert!((delta(p).unwrap() - lam).norm() <= 1e-15);
        }
        assert!(matches!(
            delta(ScalePoint::new(0.0, c(1.0, 0.0))),
            Err(SliceError::DeltaUndefined(_))
        ));
    }

    #[test]
    fn delta_at_bottom_scale_is_the_numerical_range() {
        let tri = triangle();
        let region = delta_region(&tri, 1.0 / 3.0, 180).unwrap();
        let w = boundary_w(&tri, 180).unwrap();
        assert!(hausdorff(&region, &w) <= 1e-9);

        let j2 = jordan_block(2).unwrap();
        let region = delta_region(&j2, 0.5, 180).unwrap();
        for &(_, h) in &region.support_samples {
            assert_abs_diff_eq!(h, 0.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn delta_region_midpoint_hull_example() {
        // At t = 2/3 the region is the hull of the pairwise eigenvalue
        // midpoints {(1+i)/2, (i-1)/2, 0}.
        let tri = triangle();
        let region = delta_region(&tri, 2.0 / 3.0, 180).unwrap();
        let mids = [c(0.5, 0.5), c(-0.5, 0.5), c(0.0, 0.0)];
        for &(theta, h) in &region.support_samples {
            let e = c(theta.cos(), theta.sin());
            let hull: f64 = mids
                .iter()
                .map(|m| m.re * e.re + m.im * e.im)
                .fold(f64::NEG_INFINITY, f64::max);
            assert_abs_diff_eq!(h, hull, epsilon = 1e-12);
        }
    }

    #[test]
    fn delta_region_contains_random_fixed_trace_contractions() {
        // Brute-force oracle: Ψ-images of random positive contractions with
        // trace 2 land inside Δ_{2/3} of the triangle model.
        let tri = triangle();
        let region = delta_region(&tri, 2.0 / 3.0, 360).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut produced = 0usize;
        while produced < 50 {
            let raw: [f64; 3] = [rng.gen(), rng.gen(), rng.gen()];
            let sum: f64 = raw.iter().sum();
            if sum <= 1e-9 {
                continue;
            }
            let d: Vec<f64> = raw.iter().map(|x| 2.0 * x / sum).collect();
            if d.iter().any(|&x| x > 1.0) {
                continue;
            }
            let u = random_model(ModelKind::Unitary, 3, 1000 + produced as u64)
                .unwrap()
                .c()
                .clone();
            let mut a = crate::eigen::CMatrix::zeros(3, 3);
            for j in 0..3 {
                a[(j, j)] = c(d[j], 0.0);
            }
            let a = &u * a * u.adjoint();
            let z = tri.trace_pairing(&a) / (2.0 / 3.0);
            assert!(region.margin(z) <= 1e-9, "point {z} escaped the region");
            produced += 1;
        }
    }

    #[test]
    fn delta_regions_nest_as_t_grows() {
        for seed in [3u64, 14] {
            let model = random_model(ModelKind::Generic, 4, seed).unwrap();
            let outer = delta_region(&model, 0.25, 120).unwrap();
            let inner = delta_region(&model, 0.5, 120).unwrap();
            for (o, i) in outer.support_samples.iter().zip(&inner.support_samples) {
                assert!(i.1 <= o.1 + 1e-10);
            }
        }
    }

    #[test]
    fn radial_slopes_of_jordan_block_trace_the_circle() {
        let j2 = jordan_block(2).unwrap();
        let prof = radial_slopes(&j2, 90, &[0.5]).unwrap();
        assert!(!prof.planar);
        assert_eq!(prof.profile.len(), 90);
        for &(_, r) in &prof.profile {
            assert_abs_diff_eq!(r, 0.5, epsilon = 1e-8);
        }
        for s in &prof.slopes {
            assert_abs_diff_eq!(s.norm(), 0.5, epsilon = 1e-8);
        }
    }

    #[test]
    fn radial_slopes_planar_hermitian_gives_spectral_endpoints() {
        let model = diagonal_model(&[c(1.0, 0.0), c(0.5, 0.0), c(1.0 / 3.0, 0.0)]).unwrap();
        let prof = radial_slopes(&model, 90, &[0.4, 1.0 / 3.0]).unwrap();
        assert!(prof.planar);
        assert_eq!(prof.slopes.len(), 2);
        let mut got: Vec<f64> = prof.slopes.iter().map(|s| s.re).collect();
        got.sort_by(f64::total_cmp);
        assert_abs_diff_eq!(got[0], 1.0 / 3.0, epsilon = 1e-8);
        assert_abs_diff_eq!(got[1], 1.0, epsilon = 1e-8);
        for s in &prof.slopes {
            assert_abs_diff_eq!(s.im, 0.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn radial_slopes_of_scalar_matrix_degenerate() {
        let model = diagonal_model(&[c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        let prof = radial_slopes(&model, 90, &[0.5]).unwrap();
        assert!(prof.planar);
        assert_eq!(prof.slopes.len(), 1);
        assert!(prof.slopes[0].norm() < 1e-14);
        assert_eq!(prof.profile[0], (0.0, 0.0));
    }

    #[test]
    fn radial_slopes_sequence_validation() {
        let j2 = jordan_block(2).unwrap();
        assert!(matches!(
            radial_slopes(&j2, 90, &[]),
            Err(SliceError::BadSequence(_))
        ));
        assert!(matches!(
            radial_slopes(&j2, 90, &[0.2, 0.3]),
            Err(SliceError::BadSequence(_))
        ));
        assert!(matches!(
            radial_slopes(&j2, 90, &[0.9, 0.8]),
            Err(SliceError::BadSequence(_))
        ));
        assert!(matches!(
            radial_slopes(&j2, 90, &[1.2, 0.4]),
            Err(SliceError::BadSequence(_))
        ));
    }

    #[test]
    fn segment_at_origin_examples() {
        let tri = triangle();
        let seg = segment_at_origin(&tri, c(0.0, 1.0)).unwrap().unwrap();
        assert_abs_diff_eq!(seg.t_max, 1.0 / 3.0, epsilon = 1e-9);

        let j2 = jordan_block(2).unwrap();
        let seg = segment_at_origin(&j2, c(0.5, 0.0)).unwrap().unwrap();
        assert_abs_diff_eq!(seg.t_max, 0.5, epsilon = 1e-9);

        // A slope on the flat bottom edge [−1, 1] of the triangle: the ray
        // runs inside the bottom two-face of the body and exits where the
        // first generator coefficient saturates, at t = 5/9.
        let seg = segment_at_origin(&tri, c(0.2, 0.0)).unwrap().unwrap();
        assert_abs_diff_eq!(seg.t_max, 5.0 / 9.0, epsilon = 1e-9);

        // Genuinely interior slopes: the ray leaves the boundary at once.
        assert!(segment_at_origin(&tri, c(0.2, 0.3)).unwrap().is_none());
        assert!(segment_at_origin(&j2, c(0.2, 0.0)).unwrap().is_none());
        // Slope far outside the numerical range: no extent at all.
        assert!(segment_at_origin(&tri, c(2.0, 2.0)).unwrap().is_none());
    }

    #[test]
    fn segment_certificates_match_boundary_classification() {
        let tri = triangle();
        let lam = c(0.0, 1.0);
        let seg = segment_at_origin(&tri, lam).unwrap();
        assert!(seg.is_some());
        let cls = numrange::classify_boundary_point(&tri, lam).unwrap();
        assert!(cls.case != numrange::BoundaryCase::NotAttained);
    }

    #[test]
    fn two_face_over_imaginary_chord() {
        let model = diagonal_model(&[c(0.0, 1.0), c(0.0, -1.0), c(1.0, 0.0)]).unwrap();
        let face = two_face_at_origin(&model, (c(0.0, 1.0), c(0.0, -1.0)))
            .unwrap()
            .expect("two-face present");
        assert_eq!(face.endpoint_in_face, (true, true));
        assert_eq!(face.samples.len(), 5);
        assert!(face.planarity_residual <= 1e-9);
        for seg in &face.samples {
            if (seg.slope.norm() - 1.0).abs() < 1e-12 {
                assert_abs_diff_eq!(seg.t_max, 1.0 / 3.0, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn two_face_absent_for_strictly_convex_range() {
        let j2 = jordan_block(2).unwrap();
        let face = two_face_at_origin(&j2, (c(0.5, 0.0), c(0.0, 0.5))).unwrap();
        assert!(face.is_none());
    }

    #[test]
    fn two_face_on_triangle_edge() {
        let tri = triangle();
        let face = two_face_at_origin(&tri, (c(1.0, 0.0), c(0.0, 1.0)))
            .unwrap()
            .expect("edge face present");
        assert_eq!(face.endpoint_in_face, (true, true));
        assert!(face.planarity_residual <= 1e-9);
    }

    #[test]
    fn two_face_preconditions() {
        let tri = triangle();
        // The centroid i/3 is interior to the triangle.
        assert!(matches!(
            two_face_at_origin(&tri, (c(0.0, 1.0 / 3.0), c(0.0, 1.0))),
            Err(SliceError::EndpointNotOnBoundary { .. })
        ));
        assert!(matches!(
            two_face_at_origin(&tri, (c(0.0, 1.0), c(0.0, 1.0))),
            Err(SliceError::EndpointsCoincide)
        ));
    }

    #[test]
    fn eigenvalues_from_faces_recovers_spectra() {
        let tri = triangle();
        let got = eigenvalues_from_faces(&tri).unwrap();
        assert_eq!(got.len(), 3);
        for lam in [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0)] {
            assert!(got.iter().any(|s| (s - lam).norm() <= 1e-7));
        }

        // Multiplicity does not multiply slopes.
        let twos = diagonal_model(&[c(2.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]).unwrap();
        let got = eigenvalues_from_faces(&twos).unwrap();
        assert_eq!(got.len(), 2);
        assert!(got.iter().any(|s| (s - c(2.0, 0.0)).norm() <= 1e-7));
        assert!(got.iter().any(|s| (s - c(3.0, 0.0)).norm() <= 1e-7));

        // Conjugated diagonal: a genuinely non-diagonal normal matrix.
        let u = random_model(ModelKind::Unitary, 3, 7).unwrap().c().clone();
        let mut d = crate::eigen::CMatrix::zeros(3, 3);
        d[(0, 0)] = c(1.0, 1.0);
        d[(1, 1)] = c(-1.0, 0.0);
        let m = build_model(&(&u * d * u.adjoint())).unwrap();
        let got = eigenvalues_from_faces(&m).unwrap();
        assert_eq!(got.len(), 3);
        for lam in [c(1.0, 1.0), c(-1.0, 0.0), c(0.0, 0.0)] {
            assert!(got.iter().any(|s| (s - lam).norm() <= 1e-7));
        }

        let j2 = jordan_block(2).unwrap();
        assert!(matches!(
            eigenvalues_from_faces(&j2),
            Err(SliceError::NotNormal { .. })
        ));
    }
}
