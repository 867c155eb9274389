//! Spectral scale bodies and numerical ranges for finite-dimensional operators.

pub mod eigen;
pub mod numrange;
pub mod operators;
pub mod scale;
pub mod cli;
pub mod io;
pub mod slices;
pub mod svg;
pub mod verify;
