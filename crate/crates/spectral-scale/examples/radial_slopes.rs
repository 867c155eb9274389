//! The radial slopes of the body at the origin trace the boundary of the
//! numerical range: each direction's slope is a boundary point.

use spectral_scale::{numrange, operators, slices};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = operators::jordan_block(2)?;
    // Slope limits are evaluated along a decreasing trace sequence ending at
    // the bottom scale 1/n; here n = 2, so the sequence descends to 1/2.
    let profile = slices::radial_slopes(&model, 180, &[0.9, 0.7, 0.5])?;

    println!("radial slopes of the 2x2 Jordan block at the origin:");
    println!("  central slope: {}", profile.central_slope);
    println!("  planar: {}", profile.planar);

    // The range is the disk of radius 1/2 about 0, so every slope has
    // modulus 1/2.
    let deviation = profile
        .slopes
        .iter()
        .map(|s| (s.norm() - 0.5).abs())
        .fold(0.0f64, f64::max);
    println!("  max | |slope| - 1/2 | = {deviation:.3e}");

    // Cross-check a few directions against the numerical range boundary.
    let region = numrange::boundary_w(&model, 720)?;
    let worst = profile
        .slopes
        .iter()
        .map(|s| region.margin(*s).abs())
        .fold(0.0f64, f64::max);
    println!("  max boundary margin over all slopes: {worst:.3e}");
    Ok(())
}
