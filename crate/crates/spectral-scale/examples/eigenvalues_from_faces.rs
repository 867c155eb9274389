//! Recovering the spectrum of a normal matrix from the geometry of the body
//! alone: the slopes of the origin segments are exactly the eigenvalues.

use spectral_scale::operators::ModelKind;
use spectral_scale::{operators, scale, slices};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = operators::random_model(ModelKind::Normal, 5, 42)?;

    let algebraic = scale::normal_eigenvalues(&model)?;
    let geometric = slices::eigenvalues_from_faces(&model)?;

    println!("eigenvalues of a random normal 5x5 matrix:");
    println!("  algebraic (diagonalization): {}", algebraic.len());
    println!("  geometric (origin segments): {}", geometric.len());

    // Match the two sets: every algebraic eigenvalue must appear among the
    // geometric ones and vice versa.
    let worst_forward = algebraic
        .iter()
        .map(|a| {
            geometric
                .iter()
                .map(|g| (a - g).norm())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0f64, f64::max);
    let worst_backward = geometric
        .iter()
        .map(|g| {
            algebraic
                .iter()
                .map(|a| (a - g).norm())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0f64, f64::max);

    println!("  max distance algebraic -> geometric: {worst_forward:.3e}");
    println!("  max distance geometric -> algebraic: {worst_backward:.3e}");
    assert_eq!(algebraic.len(), geometric.len());
    assert!(worst_forward < 1e-7 && worst_backward < 1e-7);

    for z in &geometric {
        println!("    {:+.6}{:+.6}i", z.re, z.im);
    }
    Ok(())
}
