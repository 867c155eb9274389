//! Slice the body at fixed trace levels: rescaled by 1/t, the slices nest
//! downward in t, and at (or below) t = 1/n the rescaled slice is exactly
//! the numerical range.

use spectral_scale::{numrange, operators, slices};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 3;
    let model = operators::random_model(operators::ModelKind::Generic, n, 11)?;
    let angles = 360;

    println!("rescaled isotrace slices of a generic {n}x{n} matrix:");
    let w = numrange::boundary_w(&model, angles)?;
    for t in [0.8, 0.5, 1.0 / n as f64] {
        let region = slices::delta_region(&model, t, angles)?;
        let gap = numrange::hausdorff(&region, &w);
        println!("  t = {t:.4}: Hausdorff distance to the numerical range = {gap:.9}");
    }

    // The raw slice at the bottom scale, radially parametrized about its
    // central-axis point.
    let t = 1.0 / n as f64;
    let slice = slices::isotrace_slice(&model, t, angles)?;
    let r_min = slice.radii.iter().map(|&(_, r)| r).fold(f64::INFINITY, f64::min);
    let r_max = slice.radii.iter().map(|&(_, r)| r).fold(0.0f64, f64::max);
    println!(
        "  slice at t = 1/{n}: center ({:.4}, {:.4}), radial extent [{r_min:.4}, {r_max:.4}]",
        slice.center.re, slice.center.im
    );
    Ok(())
}
