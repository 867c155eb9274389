//! File formats: matrix input (JSON with a plain-text fallback), region and
//! slice/profile JSON, and body meshes (OBJ and JSON).
//!
//! All emitters are deterministic — identical inputs give byte-identical
//! files — and numeric round-trips are entrywise exact (floats are printed
//! in shortest round-trip form).

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;
use std::path::Path;
use thiserror::Error;

use crate::eigen::{C64, CMatrix};
use crate::numrange::ConvexRegion2D;
use crate::operators::{self, OperatorError, OperatorModel};
use crate::scale::{self, ScaleError};
use crate::slices::{self, IsotraceSlice, RadialSlopeProfile, SliceError};

/// Errors raised by parsing and emission.
#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    /// Structurally invalid matrix input.
    #[error("malformed matrix input: {0}")]
    Malformed(String),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Scale(#[from] ScaleError),
    #[error(transparent)]
    Slice(#[from] SliceError),
}

// ---------------------------------------------------------------------------
// Matrix input/output
// ---------------------------------------------------------------------------

/// Matrix file payload: `{"n": int, "re": [[...]], "im": [[...]]}` with
/// row-major n×n arrays; `im` may be omitted for real matrices.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub n: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

fn check_rows(name: &str, rows: &[Vec<f64>], n: usize) -> Result<(), IoError> {
    if rows.len() != n {
        return Err(IoError::Malformed(format!(
            "{name} has {} rows, expected n = {n}",
            rows.len()
        )));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(IoError::Malformed(format!(
                "{name} row {i} has {} entries, expected n = {n}",
                row.len()
            )));
        }
    }
    Ok(())
}

/// Parse the JSON matrix format into a complex matrix.
pub fn matrix_from_json(text: &str) -> Result<CMatrix, IoError> {
    let parsed: MatrixJson = serde_json::from_str(text)?;
    if parsed.n == 0 {
        return Err(IoError::Malformed("n must be at least 1".into()));
    }
    check_rows("re", &parsed.re, parsed.n)?;
    if let Some(im) = &parsed.im {
        check_rows("im", im, parsed.n)?;
    }
    Ok(CMatrix::from_fn(parsed.n, parsed.n, |i, j| {
        let re = parsed.re[i][j];
        let im = parsed.im.as_ref().map_or(0.0, |m| m[i][j]);
        C64::new(re, im)
    }))
}

/// Serialize a complex matrix to the JSON matrix format (exact round-trip).
pub fn matrix_to_json(c: &CMatrix) -> String {
    let n = c.nrows();
    let payload = MatrixJson {
        n,
        re: (0..n)
            .map(|i| (0..n).map(|j| c[(i, j)].re).collect())
            .collect(),
        im: Some(
            (0..n)
                .map(|i| (0..n).map(|j| c[(i, j)].im).collect())
                .collect(),
        ),
    };
    serde_json::to_string_pretty(&payload).expect("matrix payload serializes")
}

/// Parse one `a+bi` token: a real part, an imaginary part, or both, with
/// exponents allowed (`1.5e-3-2e+1i`). A bare `i` means `0+1i`.
pub fn parse_complex_token(token: &str) -> Result<C64, IoError> {
    let bad = || IoError::Malformed(format!("cannot parse complex token {token:?}"));
    let s = token.trim();
    if s.is_empty() {
        return Err(bad());
    }
    let parse_real = |part: &str| -> Result<f64, IoError> {
        part.parse::<f64>().map_err(|_| bad())
    };
    // Coefficient of i, accepting the implicit ±1 of bare signs.
    let parse_imag = |part: &str| -> Result<f64, IoError> {
        match part {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            other => parse_real(other),
        }
    };
    if let Some(body) = s.strip_suffix(['i', 'I']) {
        // Split at the last sign that is not an exponent sign and not leading.
        let bytes = body.as_bytes();
        let split = (1..bytes.len()).rev().find(|&k| {
            (bytes[k] == b'+' || bytes[k] == b'-')
                && bytes[k - 1] != b'e'
                && bytes[k - 1] != b'E'
        });
        match split {
            Some(k) => Ok(C64::new(parse_real(&body[..k])?, parse_imag(&body[k..])?)),
            None => Ok(C64::new(0.0, parse_imag(body)?)),
        }
    } else {
        Ok(C64::new(parse_real(s)?, 0.0))
    }
}

fn format_complex_token(z: C64) -> String {
    if z.im < 0.0 || z.im.is_sign_negative() {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

/// Parse the plain-text fallback format: a line with `n`, then n lines of n
/// whitespace-separated `a+bi` tokens.
pub fn matrix_from_text(text: &str) -> Result<CMatrix, IoError> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let n: usize = lines
        .next()
        .ok_or_else(|| IoError::Malformed("empty matrix text".into()))?
        .trim()
        .parse()
        .map_err(|_| IoError::Malformed("first line must be the dimension n".into()))?;
    if n == 0 {
        return Err(IoError::Malformed("n must be at least 1".into()));
    }
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        let line = lines
            .next()
            .ok_or_else(|| IoError::Malformed(format!("missing matrix row {i}")))?;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != n {
            return Err(IoError::Malformed(format!(
                "row {i} has {} tokens, expected n = {n}",
                tokens.len()
            )));
        }
        for tok in tokens {
            entries.push(parse_complex_token(tok)?);
        }
    }
    Ok(CMatrix::from_fn(n, n, |i, j| entries[i * n + j]))
}

/// Serialize a complex matrix to the plain-text format (exact round-trip).
pub fn matrix_to_text(c: &CMatrix) -> String {
    let n = c.nrows();
    let mut out = format!("{n}\n");
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| format_complex_token(c[(i, j)])).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Read a matrix source: JSON when the content starts with `{`, else the
/// plain-text format; the result is wrapped in an operator model.
pub fn read_model(path: &Path) -> Result<OperatorModel, IoError> {
    let text = std::fs::read_to_string(path)?;
    let matrix = if text.trim_start().starts_with('{') {
        matrix_from_json(&text)?
    } else {
        matrix_from_text(&text)?
    };
    Ok(operators::build_model(&matrix)?)
}

// ---------------------------------------------------------------------------
// Region, slice, and profile JSON
// ---------------------------------------------------------------------------

/// Planar region payload: support samples plus the boundary polyline.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegionJson {
    pub angles: Vec<f64>,
    pub support: Vec<f64>,
    pub boundary: Vec<[f64; 2]>,
    pub closed: bool,
}

impl RegionJson {
    pub fn from_region(region: &ConvexRegion2D) -> Self {
        Self {
            angles: region.support_samples.iter().map(|&(a, _)| a).collect(),
            support: region.support_samples.iter().map(|&(_, h)| h).collect(),
            boundary: region.boundary.iter().map(|z| [z.re, z.im]).collect(),
            closed: region.closed,
        }
    }

    pub fn to_region(&self) -> ConvexRegion2D {
        ConvexRegion2D {
            support_samples: self
                .angles
                .iter()
                .zip(&self.support)
                .map(|(&a, &h)| (a, h))
                .collect(),
            boundary: self.boundary.iter().map(|p| C64::new(p[0], p[1])).collect(),
            closed: self.closed,
        }
    }
}

/// Isotrace slice payload: a region plus the trace level and its center.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SliceJson {
    pub t: f64,
    pub center: [f64; 2],
    pub angles: Vec<f64>,
    pub support: Vec<f64>,
    pub boundary: Vec<[f64; 2]>,
    pub closed: bool,
}

impl SliceJson {
    /// Package a computed slice; supports are the slice's exact support
    /// values at the slice's own angle grid.
    pub fn from_slice(model: &OperatorModel, slice: &IsotraceSlice) -> Result<Self, IoError> {
        let mut support = Vec::with_capacity(slice.radii.len());
        for &(theta, _) in &slice.radii {
            support.push(slices::slice_support(model, slice.t, theta)?);
        }
        Ok(Self {
            t: slice.t,
            center: [slice.center.re, slice.center.im],
            angles: slice.radii.iter().map(|&(a, _)| a).collect(),
            support,
            boundary: slice.boundary.iter().map(|z| [z.re, z.im]).collect(),
            closed: true,
        })
    }
}

/// Radial slope profile payload.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProfileJson {
    pub theta: Vec<f64>,
    pub r: Vec<f64>,
    pub slopes: Vec<[f64; 2]>,
}

impl ProfileJson {
    pub fn from_profile(profile: &RadialSlopeProfile) -> Self {
        Self {
            theta: profile.profile.iter().map(|&(a, _)| a).collect(),
            r: profile.profile.iter().map(|&(_, r)| r).collect(),
            slopes: profile.slopes.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

// ---------------------------------------------------------------------------
// Body meshes
// ---------------------------------------------------------------------------

/// Triangulated boundary mesh of the body in `(x, Re z, Im z)` coordinates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BodyMesh {
    pub vertices: Vec<[f64; 3]>,
    pub edges: Vec<[usize; 2]>,
    pub faces: Vec<[usize; 3]>,
}

/// Sample the body's boundary on a latitude/longitude direction grid and
/// triangulate it. Vertices are support-attaining contact points, so every
/// vertex lies exactly on the boundary; `grid` controls the resolution (the
/// same parameter as the body constructor's direction grid).
pub fn body_mesh(model: &OperatorModel, grid: usize) -> Result<BodyMesh, IoError> {
    let rings = (grid / 8).max(8);
    let lons = (grid / 2).max(16);
    let tau = model.trace_mean();
    // Poles: the full trace gives the apex (1, τ(c)); the zero projection
    // gives the origin.
    let mut vertices: Vec<[f64; 3]> = vec![[1.0, tau.re, tau.im], [0.0, 0.0, 0.0]];
    for i in 1..rings {
        let polar = PI * i as f64 / rings as f64;
        for j in 0..lons {
            let azimuth = TAU * j as f64 / lons as f64;
            let level = -polar.cos();
            let dir = (polar.sin() * azimuth.cos(), polar.sin() * azimuth.sin());
            let face = scale::exposed_face(model, dir, level)?;
            let p = face.psi_plus;
            vertices.push([p.x, p.z.re, p.z.im]);
        }
    }
    let idx = |i: usize, j: usize| 2 + (i - 1) * lons + (j % lons);
    let mut faces: Vec<[usize; 3]> = Vec::new();
    for j in 0..lons {
        faces.push([0, idx(1, j), idx(1, j + 1)]);
    }
    for i in 1..rings - 1 {
        for j in 0..lons {
            faces.push([idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)]);
            faces.push([idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)]);
        }
    }
    for j in 0..lons {
        faces.push([1, idx(rings - 1, j + 1), idx(rings - 1, j)]);
    }
    let mut edge_set: BTreeSet<[usize; 2]> = BTreeSet::new();
    for f in &faces {
        for (a, b) in [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])] {
            edge_set.insert([a.min(b), a.max(b)]);
        }
    }
    Ok(BodyMesh {
        vertices,
        edges: edge_set.into_iter().collect(),
        faces,
    })
}

/// Wavefront OBJ text for a body mesh (1-based indices, deterministic).
pub fn mesh_to_obj(mesh: &BodyMesh) -> String {
    let mut out = String::new();
    for v in &mesh.vertices {
        writeln!(out, "v {} {} {}", v[0], v[1], v[2]).expect("string write");
    }
    for f in &mesh.faces {
        writeln!(out, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1).expect("string write");
    }
    out
}
