//! For a unitary matrix the numerical range is the convex hull of the
//! spectrum, so the extreme points of the range sit on the unit circle and
//! recover the eigenvalues exactly.

use spectral_scale::operators::ModelKind;
use spectral_scale::{numrange, operators, scale};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = operators::random_model(ModelKind::Unitary, 5, 9)?;

    let region = numrange::boundary_w(&model, 720)?;
    let extremes: Vec<_> = numrange::extreme_points(&region, 1e-7)
        .into_iter()
        .filter(|z| z.norm() >= 1.0 - 1e-6)
        .collect();
    let spectrum = scale::normal_eigenvalues(&model)?;

    println!("random 5x5 unitary:");
    println!("  extreme points on the unit circle: {}", extremes.len());
    println!("  eigenvalues:                       {}", spectrum.len());

    // Every eigenvalue is an extreme point of the range and conversely.
    let worst_forward = spectrum
        .iter()
        .map(|a| {
            extremes
                .iter()
                .map(|g| (a - g).norm())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0f64, f64::max);
    let worst_backward = extremes
        .iter()
        .map(|g| {
            spectrum
                .iter()
                .map(|a| (a - g).norm())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0f64, f64::max);

    println!("  max distance spectrum -> extremes: {worst_forward:.3e}");
    println!("  max distance extremes -> spectrum: {worst_backward:.3e}");
    assert!(worst_forward < 1e-5 && worst_backward < 1e-5);

    for z in &spectrum {
        println!("    {:+.6}{:+.6}i  (|z| = {:.9})", z.re, z.im, z.norm());
    }
    Ok(())
}
