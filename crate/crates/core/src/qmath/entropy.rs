use super::eigen::hermitian_eigen;
use super::matrix::DensityMatrix;
use crate::{Error, Result};

/// Eigenvalues this close below zero are rounding noise and count as zero.
const CLIP_TOL: f64 = 1e-10;

/// −Σ λ log₂ λ over a spectrum, with 0·log 0 = 0.
pub fn entropy_of_spectrum(eigenvalues: &[f64]) -> f64 {
    let s: f64 = eigenvalues
        .iter()
        .map(|&l| if l >= -CLIP_TOL { l.clamp(0.0, 1.0) } else { l })
        .filter(|&l| l > 0.0)
        .map(|l| -l * l.log2())
        .sum();
    s.max(0.0)
}

/// von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let eig = hermitian_eigen(&rho.as_operator())?;
    Ok(entropy_of_spectrum(eig.eigenvalues()))
}

/// H₂(p) in bits.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!("probability {p} outside [0, 1]")));
    }
    let term = |x: f64| if x > 0.0 { -x * x.log2() } else { 0.0 };
    Ok(term(p) + term(1.0 - p))
}
