//! Build the spectral scale body of a small matrix and inspect its geometry:
//! support values, the vertex cloud, and an OBJ export of the boundary.

use num_complex::Complex64 as C64;
use spectral_scale::{io, operators, scale};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // A normal 3×3 matrix with eigenvalues 1, i, −1: the body is a zonotope
    // built from one segment generator per eigenvalue.
    let model = operators::diagonal_model(&[
        C64::new(1.0, 0.0),
        C64::new(0.0, 1.0),
        C64::new(-1.0, 0.0),
    ])?;
    let body = scale::build_body(&model, 64)?;

    println!("body of diag(1, i, -1):");
    println!("  {} boundary vertices sampled", body.vertex_cloud().len());

    // Supports in a few directions (x, Re z, Im z): the first coordinate is
    // the trace axis, so the support at the pole (1,0,0) is 1 = trace of
    // the identity projection, normalized.
    for (name, u) in [
        ("  trace axis", [1.0, 0.0, 0.0]),
        ("  real axis", [0.0, 1.0, 0.0]),
        ("  diagonal", [0.5, 0.5, 0.0]),
    ] {
        println!("{name}: h = {:.6}", scale::support(&model, u)?);
    }

    // Every point of the body is the trace pairing of some positive
    // contraction; the center of symmetry is the half-trace point.
    let center = scale::ScalePoint::new(0.5, model.trace_mean() * 0.5);
    let margin = scale::point_margin(&model, center, 64)?;
    println!("  center margin: {margin:.3e} (negative = interior)");

    let mesh = io::body_mesh(&model, 64)?;
    let path = std::env::temp_dir().join("scale_body.obj");
    std::fs::write(&path, io::mesh_to_obj(&mesh))?;
    println!(
        "  wrote {} ({} vertices, {} triangles)",
        path.display(),
        mesh.vertices.len(),
        mesh.faces.len()
    );
    Ok(())
}
