//! Numerical ranges, k-numerical ranges, boundary classification, and convex
//! region utilities.
//!
//! Everything here is computed by the supporting-line method from the rotated
//! Hermitian parts of the operator, independently of the spectral-scale body;
//! the two computation paths cross-check each other in the verification suite.

use crate::eigen::{eigenvalues_descending, eigh, CMatrix, CVector, EigenError, C64};
use crate::operators::OperatorModel;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};
use thiserror::Error;

/// Errors raised by the numerical-range layer.
#[derive(Debug, Error)]
pub enum NumRangeError {
    /// Too few support angles requested.
    #[error("need at least 3 angles, got {0}")]
    TooFewAngles(usize),
    /// k outside [1, n].
    #[error("k = {k} out of range for dimension {n}")]
    KOutOfRange { k: usize, n: usize },
    /// The queried point is not on the boundary of the numerical range.
    #[error("point ({re}, {im}) is {distance:.3e} away from the boundary (allowed {allowed:.1e})")]
    NotOnBoundary {
        re: f64,
        im: f64,
        distance: f64,
        allowed: f64,
    },
    /// Operator is not unitary within tolerance.
    #[error("operator is not unitary: defect {defect:.3e} exceeds {tolerance:.1e}")]
    NotUnitary { defect: f64, tolerance: f64 },
    /// Empty region where one was required.
    #[error("empty region")]
    EmptyRegion,
    /// Underlying eigendecomposition failed.
    #[error(transparent)]
    Eigen(#[from] EigenError),
}

/// A convex planar region sampled by support angles with a closed boundary
/// polyline (boundary may carry more points than angles at flat spots).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConvexRegion2D {
    /// (θ, h(θ)) pairs over the sampled angle grid.
    pub support_samples: Vec<(f64, f64)>,
    /// Convex closed polyline of boundary contact points, ordered with θ.
    pub boundary: Vec<C64>,
    /// Whether the region is closed (always true in finite dimension).
    pub closed: bool,
}

impl ConvexRegion2D {
    /// Support value at an arbitrary angle: exact at sampled angles, else the
    /// support of the inner boundary polygon (accurate to grid resolution).
    pub fn support_at(&self, theta: f64) -> f64 {
        let norm = normalize_angle(theta);
        for &(a, h) in &self.support_samples {
            if (a - norm).abs() < 1e-12 {
                return h;
            }
        }
        let (c, s) = (theta.cos(), theta.sin());
        self.boundary
            .iter()
            .map(|p| p.re * c + p.im * s)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Whether `p` satisfies every sampled support inequality within `tol`.
    pub fn contains(&self, p: C64, tol: f64) -> bool {
        self.support_samples
            .iter()
            .all(|&(a, h)| p.re * a.cos() + p.im * a.sin() <= h + tol)
    }

    /// Signed distance-like margin: max over samples of ⟨u_θ, p⟩ − h(θ)
    /// (positive means outside).
    pub fn margin(&self, p: C64) -> f64 {
        self.support_samples
            .iter()
            .map(|&(a, h)| p.re * a.cos() + p.im * a.sin() - h)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

fn normalize_angle(theta: f64) -> f64 {
    let mut a = theta % TAU;
    if a < 0.0 {
        a += TAU;
    }
    a
}

/// Fractional Ky Fan sum: the ⌊κ⌋ largest values plus (κ−⌊κ⌋) times the next.
///
/// Equals the maximum of Tr(a·h) over positive contractions with Tr(a) = κ,
/// where the input lists h's eigenvalues in descending order.
pub fn ky_fan_sum(eigs_desc: &[f64], kappa: f64) -> f64 {
    let n = eigs_desc.len();
    debug_assert!(kappa >= 0.0 && kappa <= n as f64 + 1e-9);
    let whole = (kappa.floor() as usize).min(n);
    let mut s: f64 = eigs_desc[..whole].iter().sum();
    let frac = kappa - whole as f64;
    if frac > 0.0 && whole < n {
        s += frac * eigs_desc[whole];
    }
    s
}

/// The uniform angle grid θ_i = 2πi/angles used by all region constructors.
pub fn angle_grid(angles: usize) -> Vec<f64> {
    (0..angles).map(|i| TAU * i as f64 / angles as f64).collect()
}

struct AngleSample {
    theta: f64,
    support: f64,
    contacts: Vec<C64>,
}

/// Expectation ⟨A x, x⟩ for a Hermitian-in-role matrix and a unit vector.
fn expectation(a: &CMatrix, x: &CVector) -> C64 {
    let ax = a * x;
    x.dotc(&ax)
}

/// Computes one support angle of the k-numerical range with flat-spot
/// handling: when the k-th and (k+1)-th eigenvalues tie, the contact set is a
/// segment and both extreme contact points are emitted (low-tangent first).
fn wk_angle_sample(model: &OperatorModel, k: usize, theta: f64) -> Result<AngleSample, EigenError> {
    let n = model.n();
    let b = model.rotated_part(theta);
    let e = eigh(&b)?;
    let support = ky_fan_sum(&e.values, k as f64) / k as f64;

    let scale = e.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tie_tol = 1e-9 * scale.max(1.0);
    let level = e.values[k - 1];
    let tied = k < n && e.values[k] >= level - tie_tol;

    let kc = C64::new(k as f64, 0.0);
    if !tied {
        // Unique maximizer: the rank-k spectral projection.
        let mut z = C64::new(0.0, 0.0);
        for j in 0..k {
            z += expectation(model.c(), &e.vectors.column(j).into_owned());
        }
        return Ok(AngleSample {
            theta,
            support,
            contacts: vec![z / kc],
        });
    }

    // Tie at the cut: maximizers are p_above + a' with a' in the tied
    // eigenspace of dimension m and trace κ. The contact extremes along the
    // tangent direction optimize the compressed tangent part.
    let above: Vec<usize> = (0..n).filter(|&j| e.values[j] > level + tie_tol).collect();
    let tied_idx: Vec<usize> = (0..n)
        .filter(|&j| (e.values[j] - level).abs() <= tie_tol)
        .collect();
    let kappa = k - above.len();
    let mut z_above = C64::new(0.0, 0.0);
    for &j in &above {
        z_above += expectation(model.c(), &e.vectors.column(j).into_owned());
    }

    let m = tied_idx.len();
    let basis = CMatrix::from_columns(
        &tied_idx
            .iter()
            .map(|&j| e.vectors.column(j).into_owned())
            .collect::<Vec<_>>(),
    );
    let tangent = model.rotated_part(theta + PI / 2.0);
    let compressed = basis.adjoint() * &tangent * &basis;
    let te = eigh(&compressed)?;

    let contact_from = |indices: &[usize]| -> C64 {
        let mut z = z_above;
        for &i in indices {
            let x = &basis * te.vectors.column(i);
            z += expectation(model.c(), &x);
        }
        z / kc
    };
    // Top-κ eigenvectors of the tangent compression give the max-tangent
    // contact; bottom-κ give the min. Emit in boundary walk order (low first).
    let top: Vec<usize> = (0..kappa).collect();
    let bottom: Vec<usize> = (m - kappa..m).collect();
    let z_hi = contact_from(&top);
    let z_lo = contact_from(&bottom);
    let contacts = if (z_hi - z_lo).norm() < 1e-13 * scale.max(1.0) {
        vec![z_lo]
    } else {
        vec![z_lo, z_hi]
    };
    Ok(AngleSample {
        theta,
        support,
        contacts,
    })
}

fn assemble_region(mut samples: Vec<AngleSample>) -> ConvexRegion2D {
    samples.sort_by(|a, b| a.theta.partial_cmp(&b.theta).unwrap());
    samples.dedup_by(|a, b| (a.theta - b.theta).abs() < 1e-12);
    let mut support_samples = Vec::with_capacity(samples.len());
    let mut boundary: Vec<C64> = Vec::with_capacity(samples.len());
    let scale = samples
        .iter()
        .map(|s| s.support.abs())
        .fold(0.0f64, f64::max)
        .max(1e-30);
    for s in &samples {
        support_samples.push((s.theta, s.support));
        for &p in &s.contacts {
            if boundary.last().is_none_or(|q| (p - q).norm() > 1e-12 * scale) {
                boundary.push(p);
            }
        }
    }
    // Close up: drop trailing duplicates of the first point.
    while boundary.len() > 1
        && (boundary[boundary.len() - 1] - boundary[0]).norm() < 1e-12 * scale
    {
        boundary.pop();
    }
    ConvexRegion2D {
        support_samples,
        boundary,
        closed: true,
    }
}

/// Numerical range W(c) by the supporting-line method over a uniform grid.
///
/// Per angle, h(θ) = λ_max(cos θ·b1 + sin θ·b2) and the contact point is
/// ⟨cx, x⟩ for a top eigenvector x; at flat spots (top eigenvalue multiplicity
/// above one) both extreme contact points are emitted.
pub fn boundary_w(model: &OperatorModel, angles: usize) -> Result<ConvexRegion2D, NumRangeError> {
    w_k(model, 1, angles)
}

/// k-numerical range W_k(c): support (1/k)·(sum of the k largest eigenvalues
/// of the rotated part), attained by rank-k spectral projections.
///
/// After the uniform sweep, a refinement pass probes the outward normal of
/// every consecutive contact chord. Where the boundary has a genuine flat
/// piece this hits the exact segment normal, so the tie handler emits both
/// endpoints and the segment's own support angle joins the samples; over
/// curved arcs the probe just densifies the sampling.
pub fn w_k(model: &OperatorModel, k: usize, angles: usize) -> Result<ConvexRegion2D, NumRangeError> {
    if angles < 3 {
        return Err(NumRangeError::TooFewAngles(angles));
    }
    if k == 0 || k > model.n() {
        return Err(NumRangeError::KOutOfRange { k, n: model.n() });
    }
    let grid = angle_grid(angles);
    let mut samples: Vec<AngleSample> = grid
        .par_iter()
        .map(|&theta| wk_angle_sample(model, k, theta))
        .collect::<Result<_, EigenError>>()?;
    samples.sort_by(|a, b| a.theta.partial_cmp(&b.theta).unwrap());

    let scale = samples
        .iter()
        .map(|s| s.support.abs())
        .fold(0.0f64, f64::max)
        .max(1e-30);
    let mut probes: Vec<f64> = Vec::new();
    for i in 0..samples.len() {
        let p = *samples[i].contacts.last().unwrap();
        let q = samples[(i + 1) % samples.len()].contacts[0];
        if (q - p).norm() > 1e-10 * scale {
            probes.push(normalize_angle((q - p).arg() - PI / 2.0));
        }
    }
    let extra: Vec<AngleSample> = probes
        .par_iter()
        .map(|&theta| wk_angle_sample(model, k, theta))
        .collect::<Result<_, EigenError>>()?;
    samples.extend(extra);
    Ok(assemble_region(samples))
}

/// Exact support function of W(c) at one angle (fresh eigenvalue computation).
pub fn w_support(model: &OperatorModel, theta: f64) -> Result<f64, NumRangeError> {
    let e = eigenvalues_descending(&model.rotated_part(theta))?;
    Ok(e[0])
}

/// Exact support function of W_k(c) at one angle.
pub fn wk_support(model: &OperatorModel, k: usize, theta: f64) -> Result<f64, NumRangeError> {
    if k == 0 || k > model.n() {
        return Err(NumRangeError::KOutOfRange { k, n: model.n() });
    }
    let e = eigenvalues_descending(&model.rotated_part(theta))?;
    Ok(ky_fan_sum(&e, k as f64) / k as f64)
}

/// Golden-section maximization of a smooth-enough function on [lo, hi].
fn golden_max(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..80 {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
        if hi - lo < 1e-13 {
            break;
        }
    }
    let mid = 0.5 * (lo + hi);
    (mid, f(mid))
}

/// Maximum over θ of Re(e^{−iθ}λ) − h_W(θ) and its maximizing angle.
///
/// Positive margin means λ lies outside W; |margin| is the distance scale to
/// the boundary. The maximizer is the supporting-line angle for boundary λ.
pub fn boundary_margin(model: &OperatorModel, lambda: C64) -> Result<(f64, f64), NumRangeError> {
    let coarse = 720;
    let mut best_theta = 0.0;
    let mut best = f64::NEG_INFINITY;
    let margins: Vec<(f64, f64)> = angle_grid(coarse)
        .par_iter()
        .map(|&theta| {
            let h = w_support(model, theta).unwrap_or(f64::INFINITY);
            (theta, lambda.re * theta.cos() + lambda.im * theta.sin() - h)
        })
        .collect();
    for (theta, m) in margins {
        if m > best {
            best = m;
            best_theta = theta;
        }
    }
    let step = TAU / coarse as f64;
    let f = |theta: f64| {
        let h = w_support(model, theta).unwrap_or(f64::INFINITY);
        lambda.re * theta.cos() + lambda.im * theta.sin() - h
    };
    let (theta, margin) = golden_max(best_theta - step, best_theta + step, f);
    Ok((normalize_angle(theta), margin))
}

/// Lemma-style classification of a numerical-range boundary point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BoundaryCase {
    /// λ ∈ ∂W_ab but λ ∉ W (possible only as a tolerance artifact here).
    NotAttained,
    /// The boundary face through λ inside W is the single point λ.
    Singleton,
    /// λ is an endpoint of a one-dimensional boundary face of W.
    SegmentEndpoint,
    /// λ is interior to a one-dimensional boundary face of W.
    SegmentInterior,
}

/// Result of classifying a boundary point λ of W(c).
///
/// After translating λ to the origin and rotating the supporting line onto
/// the imaginary axis (operator d with d1 ≥ 0), `r_rank` is the nullity of
/// d1 and `q_rank` the nullity of the compression of d2 to that null space.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundaryClassification {
    pub lambda: C64,
    pub case: BoundaryCase,
    pub r_rank: usize,
    pub q_rank: usize,
    /// Outward normal angle θ of the supporting line through λ.
    pub face_direction: f64,
}

/// Classifies λ on ∂W(c) by the null-space ranks of the normalized operator.
///
/// Precondition: λ within 1e-8 of the boundary (checked via support margins).
///
/// When several lines support W at λ (λ a corner), the case analysis is read
/// off the line exposing the smallest face; that angle is located through the
/// contact-distance function g(θ) = |contact(θ) − λ|. Where contacts reach λ,
/// the set {g ≈ 0} is exactly the normal cone of λ, and its midpoint is far
/// from both cone edges, where the ranks are stable: a hair inside the cone
/// the null space of d₁ is the attaining space of λ alone, but exactly on an
/// edge it swallows the adjacent face. Where contacts never get near λ (λ
/// interior to a flat face, whose contacts sit at the face's endpoints), the
/// supporting angle is unique and the margin peak — a sharp V there — gives
/// it to machine precision.
pub fn classify_boundary_point(
    model: &OperatorModel,
    lambda: C64,
) -> Result<BoundaryClassification, NumRangeError> {
    const BOUNDARY_TOL: f64 = 1e-8;
    let (theta_zero, margin) = boundary_margin(model, lambda)?;
    if margin.abs() > BOUNDARY_TOL {
        return Err(NumRangeError::NotOnBoundary {
            re: lambda.re,
            im: lambda.im,
            distance: margin.abs(),
            allowed: BOUNDARY_TOL,
        });
    }
    let g = |theta: f64| -> f64 {
        contact_at(model, theta)
            .map(|z| (z - lambda).norm())
            .unwrap_or(f64::INFINITY)
    };
    let window = 2.0 * TAU / 720.0;
    let (theta_one, neg_gmin) = golden_max(theta_zero - window, theta_zero + window, |t| -g(t));
    let g_min = -neg_gmin;
    let lam_scale = 1.0 + lambda.norm();
    let face_angle = if g_min <= 1e-6 * lam_scale {
        // Contacts attain λ; take the midpoint of the plateau {g ≤ thr},
        // which matches the normal cone up to ~thr/curvature.
        let thr = 2.0 * g_min + 1e-12 * lam_scale;
        let edge = |dir: f64| -> f64 {
            if g(theta_one + dir * (PI / 2.0)) <= thr {
                return PI / 2.0;
            }
            let (mut lo, mut hi) = (0.0f64, PI / 2.0);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if g(theta_one + dir * mid) <= thr {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            lo
        };
        theta_one + 0.5 * (edge(1.0) - edge(-1.0))
    } else {
        theta_zero
    };
    let theta_star = normalize_angle(face_angle);

    // Normalize: d = e^{i(π−θ*)}(c − λ) puts W(d) in the right half plane
    // with the supporting line through 0 on the imaginary axis, so d1 ≥ 0.
    let d = crate::operators::translate_rotate(model, lambda, PI - theta_star)
        .expect("translate_rotate of a valid model cannot fail");
    let e1 = eigh(d.b1())?;
    let scale1 = e1.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let null_tol = 1e-9 * scale1.max(1e-30);
    let null_idx: Vec<usize> = (0..d.n())
        .filter(|&j| e1.values[j].abs() <= null_tol)
        .collect();
    let r_rank = null_idx.len();
    if r_rank == 0 {
        return Ok(BoundaryClassification {
            lambda,
            case: BoundaryCase::NotAttained,
            r_rank: 0,
            q_rank: 0,
            face_direction: theta_star,
        });
    }

    let basis = CMatrix::from_columns(
        &null_idx
            .iter()
            .map(|&j| e1.vectors.column(j).into_owned())
            .collect::<Vec<_>>(),
    );
    let compressed = basis.adjoint() * d.b2() * &basis;
    let e2 = eigh(&compressed)?;
    // Null detection relative to the uncompressed tangent part, so an almost
    // vanishing compression reads as all-null rather than as noise-rank.
    let d2_scale = eigenvalues_descending(d.b2())?
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let tol2 = 1e-9 * d2_scale.max(1e-30);
    let q_rank = e2.values.iter().filter(|v| v.abs() <= tol2).count();
    let pos = e2.values.iter().any(|&v| v > tol2);
    let neg = e2.values.iter().any(|&v| v < -tol2);

    let case = if !pos && !neg {
        BoundaryCase::Singleton
    } else if pos && neg {
        BoundaryCase::SegmentInterior
    } else {
        BoundaryCase::SegmentEndpoint
    };
    Ok(BoundaryClassification {
        lambda,
        case,
        r_rank,
        q_rank: if case == BoundaryCase::Singleton {
            r_rank
        } else {
            q_rank
        },
        face_direction: theta_star,
    })
}

/// Single contact point of W at angle θ (first top eigenvector; used by the
/// corner search, where exact flat-spot handling is not needed).
fn contact_at(model: &OperatorModel, theta: f64) -> Result<C64, NumRangeError> {
    let e = eigh(&model.rotated_part(theta))?;
    Ok(expectation(model.c(), &e.vectors.column(0).into_owned()))
}

/// Spectrum of a unitary operator read off the numerical range: the extreme
/// boundary points of modulus ≥ 1 − tol.
///
/// Corner candidates from a 720-angle sweep are polished by re-evaluating the
/// contact at their own argument (for a unitary, a corner's normal cone
/// contains its radial direction), then arcs between neighbors are refined
/// recursively so corners with narrow normal cones are not missed.
pub fn unitary_spectrum_from_range(
    model: &OperatorModel,
    tol: f64,
) -> Result<Vec<C64>, NumRangeError> {
    const UNITARY_TOL: f64 = 1e-8;
    let defect = model.unitarity_defect();
    if defect > UNITARY_TOL {
        return Err(NumRangeError::NotUnitary {
            defect,
            tolerance: UNITARY_TOL,
        });
    }

    let region = boundary_w(model, 720)?;
    let dedup_tol = 1e-7;
    let mut corners: Vec<C64> = Vec::new();
    let push = |z: C64, corners: &mut Vec<C64>| {
        if z.norm() >= 1.0 - tol && !corners.iter().any(|c| (c - z).norm() < dedup_tol) {
            corners.push(z);
        }
    };
    for &p in &region.boundary {
        if p.norm() >= 1.0 - 10.0 * tol.max(1e-6) {
            let polished = contact_at(model, p.arg())?;
            push(polished, &mut corners);
        }
    }
    if corners.is_empty() {
        // Fall back to probing the four cardinal directions.
        for theta in [0.0, PI / 2.0, PI, 1.5 * PI] {
            let z = contact_at(model, theta)?;
            push(z, &mut corners);
        }
    }
    corners.sort_by(|a, b| a.arg().partial_cmp(&b.arg()).unwrap());

    // Arc refinement: probe between adjacent corners; any genuinely new
    // contact splits the arc. Normal cones are arcs, so this finds every
    // corner whose cone lies between existing probes.
    let mut stack: Vec<(f64, f64)> = Vec::new();
    let m = corners.len();
    for i in 0..m {
        let a = corners[i].arg();
        let b = corners[(i + 1) % m].arg() + if i + 1 == m { TAU } else { 0.0 };
        stack.push((a, b));
    }
    if m == 1 {
        stack.clear();
        let a = corners[0].arg();
        stack.push((a, a + TAU));
    }
    let mut depth_budget = 20_000usize;
    while let Some((a, b)) = stack.pop() {
        if b - a < 1e-7 || depth_budget == 0 {
            continue;
        }
        depth_budget -= 1;
        let mid = 0.5 * (a + b);
        let z = contact_at(model, mid)?;
        let is_new = z.norm() >= 1.0 - tol && !corners.iter().any(|c| (c - z).norm() < dedup_tol);
        if is_new {
            let polished = contact_at(model, z.arg())?;
            push(polished, &mut corners);
            stack.push((a, mid));
            stack.push((mid, b));
        } else {
            // No new corner at the midpoint: the arc can still hide corners
            // only if the midpoint contact differs from both endpoints'
            // corners; detect by proximity and recurse on the far side(s).
            let near_a = corners
                .iter()
                .min_by(|x, y| (x.arg() - a).abs().partial_cmp(&(y.arg() - a).abs()).unwrap())
                .copied();
            if let Some(za) = near_a {
                if (z - za).norm() > dedup_tol {
                    stack.push((a, mid));
                }
            }
            let near_b_arg = if b >= TAU { b - TAU } else { b };
            let near_b = corners
                .iter()
                .min_by(|x, y| {
                    (x.arg() - near_b_arg)
                        .abs()
                        .partial_cmp(&(y.arg() - near_b_arg).abs())
                        .unwrap()
                })
                .copied();
            if let Some(zb) = near_b {
                if (z - zb).norm() > dedup_tol {
                    stack.push((mid, b));
                }
            }
        }
    }
    corners.sort_by(|a, b| a.arg().partial_cmp(&b.arg()).unwrap());
    Ok(corners)
}

/// Pointwise support containment: A ⊆ B within tol.
///
/// Regions on identical angle grids compare sample-by-sample; otherwise B is
/// resampled onto A's grid through its boundary polygon.
pub fn containment(a: &ConvexRegion2D, b: &ConvexRegion2D, tol: f64) -> bool {
    a.support_samples
        .iter()
        .all(|&(theta, ha)| ha <= b.support_at(theta) + tol)
}

/// Hausdorff distance between convex regions: sup over angles of |h_A − h_B|.
pub fn hausdorff(a: &ConvexRegion2D, b: &ConvexRegion2D) -> f64 {
    let same_grid = a.support_samples.len() == b.support_samples.len()
        && a.support_samples
            .iter()
            .zip(&b.support_samples)
            .all(|(x, y)| (x.0 - y.0).abs() < 1e-12);
    if same_grid {
        a.support_samples
            .iter()
            .zip(&b.support_samples)
            .map(|(x, y)| (x.1 - y.1).abs())
            .fold(0.0, f64::max)
    } else {
        let mut d = 0.0f64;
        for &(theta, ha) in &a.support_samples {
            d = d.max((ha - b.support_at(theta)).abs());
        }
        for &(theta, hb) in &b.support_samples {
            d = d.max((hb - a.support_at(theta)).abs());
        }
        d
    }
}

/// Boundary polyline vertices that are genuine corners: points farther than
/// `tol` from the chord joining their neighbors.
pub fn extreme_points(region: &ConvexRegion2D, tol: f64) -> Vec<C64> {
    let pts = &region.boundary;
    let n = pts.len();
    if n <= 2 {
        return pts.clone();
    }
    let mut out = Vec::new();
    for i in 0..n {
        let prev = pts[(i + n - 1) % n];
        let next = pts[(i + 1) % n];
        if point_chord_distance(pts[i], prev, next) > tol {
            out.push(pts[i]);
        }
    }
    out
}

fn point_chord_distance(p: C64, a: C64, b: C64) -> f64 {
    let ab = b - a;
    let len = ab.norm();
    if len < 1e-300 {
        return (p - a).norm();
    }
    // Perpendicular distance via the cross product magnitude.
    ((ab.re * (p.im - a.im) - ab.im * (p.re - a.re)) / len).abs()
}

/// Straight pieces of the boundary, reported as endpoint pairs.
///
/// A chord between consecutive boundary points counts as flat when both of
/// its endpoints attain the sampled support nearest the chord's outward
/// normal within `tol`; adjacent flat chords sharing a line merge into one
/// segment. The regions built here insert a support sample at every contact
/// chord's normal, so genuine segments attain exactly while chords across
/// curved arcs fall short by the curvature gap (≈ r·Δθ²/8, well above any
/// tol ≤ 1e-6 on the default grid).
pub fn boundary_segments(region: &ConvexRegion2D, tol: f64) -> Vec<(C64, C64)> {
    let pts = &region.boundary;
    let n = pts.len();
    if n < 2 {
        return Vec::new();
    }
    if n == 2 {
        return vec![(pts[0], pts[1])];
    }
    let nearest_sample = |angle: f64| -> (f64, f64) {
        let mut best = region.support_samples[0];
        let mut dist = f64::INFINITY;
        for &(theta, h) in &region.support_samples {
            let mut d = (theta - angle).abs() % TAU;
            if d > PI {
                d = TAU - d;
            }
            if d < dist {
                dist = d;
                best = (theta, h);
            }
        }
        best
    };
    let flat: Vec<bool> = (0..n)
        .map(|i| {
            let p = pts[i];
            let q = pts[(i + 1) % n];
            let normal = normalize_angle((q - p).arg() - PI / 2.0);
            let (theta, h) = nearest_sample(normal);
            let (cs, sn) = (theta.cos(), theta.sin());
            p.re * cs + p.im * sn >= h - tol && q.re * cs + q.im * sn >= h - tol
        })
        .collect();
    let merges_into_next = |i: usize| -> bool {
        let j = (i + 1) % n;
        flat[i] && flat[j] && point_chord_distance(pts[j], pts[i], pts[(j + 1) % n]) <= tol
    };
    let mut starts: Vec<usize> = (0..n)
        .filter(|&i| flat[i] && !merges_into_next((i + n - 1) % n))
        .collect();
    if starts.is_empty() && flat.iter().any(|&f| f) {
        starts.push(flat.iter().position(|&f| f).unwrap());
    }
    let mut segments = Vec::new();
    for s in starts {
        let mut e = s;
        while merges_into_next(e) && (e + 1) % n != s {
            e = (e + 1) % n;
        }
        segments.push((pts[s], pts[(e + 1) % n]));
    }
    segments
}

/// Whether the closed boundary polyline turns consistently in one direction
/// (cross products of consecutive edges all one sign within `tol`·scale).
pub fn is_convex_polyline(pts: &[C64], tol: f64) -> bool {
    let n = pts.len();
    if n <= 2 {
        return true;
    }
    let scale = pts
        .iter()
        .map(|p| p.norm())
        .fold(0.0f64, f64::max)
        .max(1e-30);
    let mut sign = 0.0f64;
    for i in 0..n {
        let a = pts[i];
        let b = pts[(i + 1) % n];
        let c = pts[(i + 2) % n];
        let cross = (b.re - a.re) * (c.im - b.im) - (b.im - a.im) * (c.re - b.re);
        if cross.abs() <= tol * scale * scale {
            continue;
        }
        if sign == 0.0 {
            sign = cross.signum();
        } else if cross.signum() != sign {
            return false;
        }
    }
    true
}

/// Radial distance evaluator: recovers the radial function of a convex set
/// from its exact support function by minimizing over supporting lines.
///
/// A coarse pass over a precomputed support grid brackets the minimizing
/// angle; golden-section with fresh support evaluations then refines it well
/// below grid resolution.
pub struct RadialEvaluator<F: Fn(f64) -> f64> {
    support: F,
    center: C64,
    grid: Vec<(f64, f64)>,
}

impl<F: Fn(f64) -> f64> RadialEvaluator<F> {
    /// Precomputes `grid_size` support samples of the set around `center`.
    pub fn new(support: F, center: C64, grid_size: usize) -> Self {
        let grid = angle_grid(grid_size.max(16))
            .into_iter()
            .map(|phi| {
                let h = support(phi) - (center.re * phi.cos() + center.im * phi.sin());
                (phi, h)
            })
            .collect();
        Self {
            support,
            center,
            grid,
        }
    }

    fn relative_support(&self, phi: f64) -> f64 {
        (self.support)(phi) - (self.center.re * phi.cos() + self.center.im * phi.sin())
    }

    /// Distance from the center to the boundary along direction θ.
    pub fn radial(&self, theta: f64) -> f64 {
        // r(θ) = inf over |φ−θ| < π/2 of h_rel(φ)/cos(φ−θ).
        // The window stops 1e-6 short of ±π/2: there the denominator is
        // ~1e-6 and the fl(π) argument offset between the support's cos(φ)
        // and the denominator's cos(φ−θ) would otherwise be amplified to a
        // phantom ~1e-7 relative dip that the refinement chases on flat
        // ratio profiles. The exclusion changes the true infimum only at
        // O(1e-12) relative for a convex set.
        let mut best_phi = theta;
        let mut best = f64::INFINITY;
        for &(phi, h) in &self.grid {
            for shift in [-TAU, 0.0, TAU] {
                let d = phi + shift - theta;
                if d.abs() < PI / 2.0 - 1e-6 {
                    let v = h / d.cos();
                    if v < best {
                        best = v;
                        best_phi = phi + shift;
                    }
                }
            }
        }
        if !best.is_finite() {
            return 0.0;
        }
        let step = TAU / self.grid.len() as f64;
        let lo = (best_phi - step).max(theta - PI / 2.0 + 1e-6);
        let hi = (best_phi + step).min(theta + PI / 2.0 - 1e-6);
        let f = |phi: f64| -(self.relative_support(phi) / (phi - theta).cos());
        let (_, neg_min) = golden_max(lo, hi, f);
        (-neg_min).max(0.0)
    }
}
