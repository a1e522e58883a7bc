//! Information-theoretic cancellation bound.
//!
//! Estimates the marginal and joint distributions of the disturbance `d` and
//! cancellation signal `y` with frame-averaged Gaussian KDE on shared grids,
//! derives discrete entropies and mutual information from the normalized
//! histograms, and turns the captured-information fraction
//! `alpha = I(y; d) / H(d)` into a lower bound on the achievable NMSE.

mod bound;
mod entropy;
mod error;
mod kde;
mod mi;

pub use bound::{info_bound_db, path_energy, EpMode, InfoBoundVariant};
pub use entropy::{histogram_entropy_1d, histogram_entropy_2d};
pub use error::InfoError;
pub use kde::{
    density1d_to_csv, density2d_to_csv, kde_pdf_1d, kde_pdf_2d, Density1d, Density2d, GridAxis,
    KdeConfig,
};
pub use mi::{mutual_information, InfoQuantities, ALPHA_CEIL_EPS};
