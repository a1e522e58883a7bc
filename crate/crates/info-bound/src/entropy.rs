//! Discrete Shannon entropy of binned densities.
//!
//! The probability mass of a grid node is its density value times the node's
//! cell measure (half-width cells at the grid ends, matching the trapezoidal
//! normalization). Masses are renormalized to sum to one before the entropy
//! sum, and `0 ln 0 = 0`.

use crate::kde::{Density1d, Density2d};

/// Entropy in nats of the binned mass of a 1-D density.
pub fn histogram_entropy_1d(density: &Density1d) -> f64 {
    let n = density.grid.len();
    let masses = density.pdf.iter().enumerate().map(|(i, p)| {
        let cell = if i == 0 || i + 1 == n {
            0.5 * density.step
        } else {
            density.step
        };
        p * cell
    });
    entropy_of_masses(masses)
}

/// Entropy in nats of the binned mass of a 2-D density.
pub fn histogram_entropy_2d(density: &Density2d) -> f64 {
    let (nx, ny) = (density.grid_x.len(), density.grid_y.len());
    let masses = density.pdf.iter().enumerate().map(|(idx, p)| {
        let (ix, iy) = (idx / ny, idx % ny);
        let cx = if ix == 0 || ix + 1 == nx {
            0.5 * density.step_x
        } else {
            density.step_x
        };
        let cy = if iy == 0 || iy + 1 == ny {
            0.5 * density.step_y
        } else {
            density.step_y
        };
        p * cx * cy
    });
    entropy_of_masses(masses)
}

fn entropy_of_masses(masses: impl Iterator<Item = f64>) -> f64 {
    let masses: Vec<f64> = masses.collect();
    let total: f64 = masses.iter().sum();
    if total <= 0.0 {
        return 0.0;
    }
    let mut h = 0.0;
    for m in masses {
        let p = m / total;
        if p > 0.0 {
            h -= p * p.ln();
        }
    }
    h
}
