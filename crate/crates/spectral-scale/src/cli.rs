//! Command-line surface: one subcommand per engine, shared matrix input,
//! deterministic file emission, and a verification suite runner.

use clap::{Args, Parser, Subcommand};
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use thiserror::Error;

use crate::eigen::C64;
use crate::io::{self, IoError};
use crate::numrange::{self, NumRangeError};
use crate::operators::{self, ModelKind, OperatorError, OperatorModel};
use crate::scale::{self, ScaleError};
use crate::slices::{self, SliceError};
use crate::svg::{self, Drawable, SvgError};
use crate::verify::{self, SuiteConfig, VerifyError};

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("conflicting outputs: {0} is used twice")]
    ConflictingOutputs(PathBuf),
    #[error("input file {0} does not exist")]
    MissingInput(PathBuf),
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    File(#[from] std::io::Error),
    #[error(transparent)]
    Svg(#[from] SvgError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Scale(#[from] ScaleError),
    #[error(transparent)]
    Range(#[from] NumRangeError),
    #[error(transparent)]
    Slice(#[from] SliceError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Spectral scale bodies, numerical ranges, isotrace slices, and radial
/// slope profiles for finite-dimensional operators.
#[derive(Parser)]
#[command(name = "spectral-scale", version, about, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Matrix source shared by every geometry subcommand.
#[derive(Args)]
struct InputArgs {
    /// Matrix file (JSON {"n","re","im"} or text fallback), or
    /// `random:KIND:N` with KIND one of generic, hermitian, normal,
    /// unitary, nilpotent
    #[arg(long)]
    input: String,
    /// Seed for `random:` inputs
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl InputArgs {
    fn resolve(&self) -> Result<OperatorModel, CliError> {
        if let Some(spec) = self.input.strip_prefix("random:") {
            let (kind_str, n_str) = spec.split_once(':').ok_or_else(|| {
                CliError::Usage(format!(
                    "random input must be random:KIND:N, got {:?}",
                    self.input
                ))
            })?;
            let kind = ModelKind::from_str(kind_str).map_err(CliError::Operator)?;
            let n: usize = n_str
                .parse()
                .map_err(|_| CliError::Usage(format!("bad dimension {n_str:?}")))?;
            return Ok(operators::random_model(kind, n, self.seed)?);
        }
        let path = Path::new(&self.input);
        if !path.exists() {
            return Err(CliError::MissingInput(path.to_path_buf()));
        }
        Ok(io::read_model(path)?)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build the spectral scale body and export its boundary mesh
    Scale {
        #[command(flatten)]
        input: InputArgs,
        /// Direction grid resolution
        #[arg(long, default_value_t = 64)]
        grid: usize,
        /// Write the mesh as JSON {"vertices","edges","faces"}
        #[arg(long)]
        json: Option<PathBuf>,
        /// Write the mesh as Wavefront OBJ
        #[arg(long)]
        mesh: Option<PathBuf>,
    },
    /// Compute the numerical range boundary
    Numrange {
        #[command(flatten)]
        input: InputArgs,
        /// Number of support angles
        #[arg(long, default_value_t = 360)]
        angles: usize,
        /// Write the region as JSON
        #[arg(long)]
        json: Option<PathBuf>,
        /// Write an SVG plot
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Compute the k-averaged numerical range
    Wk {
        #[command(flatten)]
        input: InputArgs,
        /// Averaging order k
        #[arg(long)]
        k: usize,
        /// Number of support angles
        #[arg(long, default_value_t = 360)]
        angles: usize,
        /// Write the region as JSON
        #[arg(long)]
        json: Option<PathBuf>,
        /// Write an SVG plot
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Cut the body at a fixed trace level
    Slices {
        #[command(flatten)]
        input: InputArgs,
        /// Trace level t in (0, 1)
        #[arg(long)]
        t: f64,
        /// Number of radial angles
        #[arg(long, default_value_t = 360)]
        angles: usize,
        /// Write the slice as JSON
        #[arg(long)]
        json: Option<PathBuf>,
        /// Write an SVG plot
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Radial slopes of the body at the origin
    Slopes {
        #[command(flatten)]
        input: InputArgs,
        /// Number of radial angles
        #[arg(long, default_value_t = 360)]
        angles: usize,
        /// Write the profile as JSON
        #[arg(long)]
        json: Option<PathBuf>,
        /// Write an SVG overlay of the numerical range and the slope curve
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Enumerate flat boundary faces of the body
    Faces {
        #[command(flatten)]
        input: InputArgs,
        /// Direction grid resolution
        #[arg(long, default_value_t = 64)]
        grid: usize,
        /// Flatness detection tolerance
        #[arg(long, default_value_t = scale::DEFAULT_FACE_TOL)]
        face_tol: f64,
        /// Write the face list as JSON
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Test for a boundary segment over the ray of slope lambda
    Segment {
        #[command(flatten)]
        input: InputArgs,
        /// Ray slope as "re,im"
        #[arg(long)]
        lambda: String,
        /// Write the result as JSON
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run registered verification checks
    Verify {
        /// Which checks: "all", "normal" (normal-family checks only), or a
        /// comma-separated list of check ids (e.g. "T2.5,T2.10")
        #[arg(long, default_value = "all")]
        suite: String,
        /// Write the full report as JSON
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

fn parse_lambda(text: &str) -> Result<C64, CliError> {
    let (re, im) = text
        .split_once(',')
        .ok_or_else(|| CliError::Usage(format!("lambda must be \"re,im\", got {text:?}")))?;
    let re: f64 = re
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("bad real part {re:?}")))?;
    let im: f64 = im
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("bad imaginary part {im:?}")))?;
    Ok(C64::new(re, im))
}

fn check_distinct_outputs(paths: &[Option<&PathBuf>]) -> Result<(), CliError> {
    let given: Vec<&PathBuf> = paths.iter().filter_map(|p| *p).collect();
    for (i, a) in given.iter().enumerate() {
        for b in &given[i + 1..] {
            if a == b {
                return Err(CliError::ConflictingOutputs((*a).clone()));
            }
        }
    }
    Ok(())
}

fn write_file(path: &Path, content: &str, summary: &str) -> Result<(), CliError> {
    std::fs::write(path, content)?;
    println!("wrote {}: {summary}", path.display());
    Ok(())
}

/// Cap the global thread pool from `SPECTRAL_SCALE_THREADS`, when set.
fn init_threads() {
    if let Ok(value) = std::env::var("SPECTRAL_SCALE_THREADS") {
        if let Ok(threads) = value.parse::<usize>() {
            if threads >= 1 {
                // A second initialization attempt in one process is fine to
                // ignore; the first cap stays in effect.
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build_global();
            }
        }
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Scale {
            input,
            grid,
            json,
            mesh,
        } => {
            check_distinct_outputs(&[json.as_ref(), mesh.as_ref()])?;
            let model = input.resolve()?;
            let body = scale::build_body(&model, grid)?;
            let mesh_data = io::body_mesh(&model, grid)?;
            println!(
                "spectral scale body: n = {}, {} support directions, {} mesh vertices",
                model.n(),
                body.vertex_cloud().len(),
                mesh_data.vertices.len()
            );
            if let Some(path) = json {
                write_file(
                    &path,
                    &serde_json::to_string(&mesh_data)?,
                    &format!(
                        "body mesh JSON ({} vertices, {} faces)",
                        mesh_data.vertices.len(),
                        mesh_data.faces.len()
                    ),
                )?;
            }
            if let Some(path) = mesh {
                write_file(
                    &path,
                    &io::mesh_to_obj(&mesh_data),
                    &format!(
                        "body mesh OBJ ({} vertices, {} triangles)",
                        mesh_data.vertices.len(),
                        mesh_data.faces.len()
                    ),
                )?;
            }
            Ok(0)
        }
        Command::Numrange {
            input,
            angles,
            json,
            svg,
        } => {
            check_distinct_outputs(&[json.as_ref(), svg.as_ref()])?;
            let model = input.resolve()?;
            let region = numrange::boundary_w(&model, angles)?;
            println!(
                "numerical range: n = {}, {} support samples, {} boundary points",
                model.n(),
                region.support_samples.len(),
                region.boundary.len()
            );
            if let Some(path) = json {
                let payload = io::RegionJson::from_region(&region);
                write_file(&path, &serde_json::to_string(&payload)?, "region JSON")?;
            }
            if let Some(path) = svg {
                let doc = svg::emit_svg(&[Drawable::region("numerical range", &region)])?;
                write_file(&path, &doc, "region SVG")?;
            }
            Ok(0)
        }
        Command::Wk {
            input,
            k,
            angles,
            json,
            svg,
        } => {
            check_distinct_outputs(&[json.as_ref(), svg.as_ref()])?;
            let model = input.resolve()?;
            let region = numrange::w_k(&model, k, angles)?;
            println!(
                "k-averaged range: n = {}, k = {k}, {} support samples",
                model.n(),
                region.support_samples.len()
            );
            if let Some(path) = json {
                let payload = io::RegionJson::from_region(&region);
                write_file(&path, &serde_json::to_string(&payload)?, "region JSON")?;
            }
            if let Some(path) = svg {
                let label = format!("{k}-averaged range");
                let doc = svg::emit_svg(&[Drawable::region(label, &region)])?;
                write_file(&path, &doc, "region SVG")?;
            }
            Ok(0)
        }
        Command::Slices {
            input,
            t,
            angles,
            json,
            svg,
        } => {
            check_distinct_outputs(&[json.as_ref(), svg.as_ref()])?;
            let model = input.resolve()?;
            let slice = slices::isotrace_slice(&model, t, angles)?;
            println!(
                "isotrace slice: n = {}, t = {t}, center ({}, {})",
                model.n(),
                slice.center.re,
                slice.center.im
            );
            if let Some(path) = json {
                let payload = io::SliceJson::from_slice(&model, &slice)?;
                write_file(&path, &serde_json::to_string(&payload)?, "slice JSON")?;
            }
            if let Some(path) = svg {
                let label = format!("slice at t = {t}");
                let doc = svg::emit_svg(&[Drawable::curve(label, slice.boundary.clone(), true)])?;
                write_file(&path, &doc, "slice SVG")?;
            }
            Ok(0)
        }
        Command::Slopes {
            input,
            angles,
            json,
            svg,
        } => {
            check_distinct_outputs(&[json.as_ref(), svg.as_ref()])?;
            let model = input.resolve()?;
            let base_t = 1.0 / model.n() as f64;
            let mut t_sequence = Vec::new();
            for v in [0.45, 0.3] {
                if v > base_t + 1e-9 {
                    t_sequence.push(v);
                }
            }
            t_sequence.push(base_t);
            let profile = slices::radial_slopes(&model, angles, &t_sequence)?;
            println!(
                "radial slopes: n = {}, {} directions, central slope ({}, {}){}",
                model.n(),
                profile.profile.len(),
                profile.central_slope.re,
                profile.central_slope.im,
                if profile.planar { ", planar body" } else { "" }
            );
            if let Some(path) = json {
                let payload = io::ProfileJson::from_profile(&profile);
                write_file(&path, &serde_json::to_string(&payload)?, "profile JSON")?;
            }
            if let Some(path) = svg {
                let w = numrange::boundary_w(&model, angles)?;
                let doc = svg::emit_svg(&[
                    Drawable::region("numerical range", &w),
                    Drawable::curve("radial slopes", profile.slopes.clone(), !profile.planar),
                ])?;
                write_file(&path, &doc, "overlay SVG")?;
            }
            Ok(0)
        }
        Command::Faces {
            input,
            grid,
            face_tol,
            json,
        } => {
            let model = input.resolve()?;
            let body = scale::build_body(&model, grid)?;
            let faces = scale::enumerate_faces_clustered(&body, face_tol)?;
            let dim1 = faces.iter().filter(|f| f.dim == 1).count();
            let dim2 = faces.iter().filter(|f| f.dim == 2).count();
            println!(
                "faces: n = {}, {} detected ({dim1} edges, {dim2} facets)",
                model.n(),
                faces.len()
            );
            if let Some(path) = json {
                write_file(
                    &path,
                    &serde_json::to_string(&faces)?,
                    &format!("face list JSON ({} faces)", faces.len()),
                )?;
            }
            Ok(0)
        }
        Command::Segment {
            input,
            lambda,
            json,
        } => {
            let model = input.resolve()?;
            let slope = parse_lambda(&lambda)?;
            let segment = slices::segment_at_origin(&model, slope)?;
            match &segment {
                Some(seg) => println!(
                    "segment present: slope ({}, {}), extends to t = {}",
                    slope.re, slope.im, seg.t_max
                ),
                None => println!("segment absent: slope ({}, {})", slope.re, slope.im),
            }
            if let Some(path) = json {
                let payload = serde_json::json!({
                    "lambda": [slope.re, slope.im],
                    "present": segment.is_some(),
                    "tMax": segment.map(|s| s.t_max),
                });
                write_file(&path, &serde_json::to_string(&payload)?, "segment JSON")?;
            }
            Ok(0)
        }
        Command::Verify { suite, report } => {
            let config = match suite.as_str() {
                "all" => SuiteConfig::default(),
                "normal" => SuiteConfig {
                    theorem_ids: None,
                    kinds: Some(vec![verify::FamilyKind::Normal]),
                },
                ids => SuiteConfig {
                    theorem_ids: Some(ids.split(',').map(|s| s.trim().to_string()).collect()),
                    kinds: None,
                },
            };
            let outcomes = verify::run_all(&config)?;
            print!("{}", verify::summary_table(&outcomes));
            if let Some(path) = report {
                write_file(
                    &path,
                    &serde_json::to_string_pretty(&outcomes)?,
                    &format!("verification report ({} entries)", outcomes.len()),
                )?;
            }
            Ok(if verify::all_passed(&outcomes) { 0 } else { 1 })
        }
    }
}

/// Parse arguments and execute; returns the process exit status.
///
/// Exit codes: 0 success, 1 verification failure, 2 usage or runtime error.
pub fn parse_and_run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    init_threads();
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // Help/version requests are successful exits; real parse errors
            // report through clap's formatter.
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli) {
        Ok(status) => status,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_parsing() {
        assert_eq!(parse_lambda("0.5,0").unwrap(), C64::new(0.5, 0.0));
        assert_eq!(parse_lambda(" -1 , 2.5 ").unwrap(), C64::new(-1.0, 2.5));
        assert!(parse_lambda("1").is_err());
        assert!(parse_lambda("a,b").is_err());
    }

    #[test]
    fn conflicting_outputs_detected() {
        let a = PathBuf::from("out.json");
        let b = PathBuf::from("out.json");
        assert!(check_distinct_outputs(&[Some(&a), Some(&b)]).is_err());
        let c = PathBuf::from("other.json");
        assert!(check_distinct_outputs(&[Some(&a), Some(&c), None]).is_ok());
    }

    #[test]
    fn random_input_resolves() {
        let args = InputArgs {
            input: "random:normal:3".into(),
            seed: 9,
        };
        let model = args.resolve().unwrap();
        assert_eq!(model.n(), 3);
        let bad = InputArgs {
            input: "random:banana:3".into(),
            seed: 0,
        };
        assert!(bad.resolve().is_err());
        let missing = InputArgs {
            input: "no/such/file.json".into(),
            seed: 0,
        };
        assert!(matches!(missing.resolve(), Err(CliError::MissingInput(_))));
    }
}
