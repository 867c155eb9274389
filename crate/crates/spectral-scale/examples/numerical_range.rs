//! Compute the numerical range of a Jordan block and classify boundary
//! points: the range is a closed disk, so every boundary point is a
//! singleton contact with no flat pieces.

use num_complex::Complex64 as C64;
use spectral_scale::{numrange, operators};
use std::f64::consts::PI;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 3;
    let model = operators::jordan_block(n)?;
    let region = numrange::boundary_w(&model, 360)?;

    // The range of the n×n nilpotent Jordan block is the disk of radius
    // cos(π/(n+1)) about the origin.
    let radius = (PI / (n as f64 + 1.0)).cos();
    println!("numerical range of the {n}x{n} Jordan block:");
    println!("  expected radius {radius:.12}");
    let max_dev = region
        .boundary
        .iter()
        .map(|z| (z.norm() - radius).abs())
        .fold(0.0f64, f64::max);
    println!("  boundary radius deviation: {max_dev:.3e}");

    // Boundary classification: a disk has singleton contact everywhere.
    let point = C64::new(radius, 0.0);
    let cls = numrange::classify_boundary_point(&model, point)?;
    println!("  point {point}: {:?}", cls.case);

    // An interior point has strictly negative margin.
    let inside = C64::new(0.2, 0.1);
    let margin = region.margin(inside);
    println!("  margin of {inside}: {margin:.4} (negative = interior)");
    Ok(())
}
