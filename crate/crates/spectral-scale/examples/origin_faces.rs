//! Boundary segments of the body through the origin, and the ray extents
//! that measure them.
//!
//! For a normal matrix the ray `{(t, t·λ)}` stays on the boundary exactly
//! when λ lies on the boundary of the numerical range, and the extent of the
//! segment is decided by the eigenvalue weights that expose λ.

use num_complex::Complex64 as C64;
use spectral_scale::{operators, slices};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // diag(1, i, -1): the numerical range is the triangle with those corners.
    let model = operators::diagonal_model(&[
        C64::new(1.0, 0.0),
        C64::new(0.0, 1.0),
        C64::new(-1.0, 0.0),
    ])?;

    // A corner of the triangle: the segment runs out to t = mult/n = 1/3.
    let corner = C64::new(0.0, 1.0);
    let seg = slices::segment_at_origin(&model, corner)?.expect("corner segment");
    println!("lambda = i      -> t_max = {:.6} (expected 1/3)", seg.t_max);
    assert!((seg.t_max - 1.0 / 3.0).abs() < 1e-6);

    // A point in the interior of the bottom edge [-1, 1]. Writing
    // 0.2 = 0.4*(-1) + 0.6*(+1), the extent is the smaller of
    // (1/3)/0.6 and (1/3)/0.4, i.e. 5/9.
    let edge = C64::new(0.2, 0.0);
    let seg = slices::segment_at_origin(&model, edge)?.expect("edge segment");
    println!("lambda = 0.2    -> t_max = {:.6} (expected 5/9)", seg.t_max);
    assert!((seg.t_max - 5.0 / 9.0).abs() < 1e-6);

    // Strictly inside the triangle no boundary segment exists: the ray
    // leaves the boundary immediately above t = 0.
    let inside = C64::new(0.0, 1.0 / 3.0);
    let seg = slices::segment_at_origin(&model, inside)?;
    println!("lambda = i/3    -> segment present: {}", seg.is_some());
    assert!(seg.is_none());

    // The segments over a whole boundary chord sweep out a flat two-face.
    let chord = (C64::new(1.0, 0.0), C64::new(0.0, 1.0));
    let face = slices::two_face_at_origin(&model, chord)?.expect("two-face over the chord");
    println!(
        "chord [1, i]    -> {} sampled segments, endpoints in face: {:?}",
        face.samples.len(),
        face.endpoint_in_face
    );
    println!("                   planarity residual: {:.3e}", face.planarity_residual);
    assert!(face.endpoint_in_face == (true, true));
    assert!(face.planarity_residual < 1e-9);
    Ok(())
}
