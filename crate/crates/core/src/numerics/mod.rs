//! Special functions, adaptive quadrature, bracketed root finding and
//! scalar maximization. Everything here is a pure function of its inputs.

mod optimize;
mod quadrature;
mod roots;
mod special;

pub use optimize::{maximize_scalar, try_maximize_scalar, PRE_GRID_POINTS};
pub use quadrature::{integrate, integrate_piecewise, Interval, Quadrature};
pub use roots::{find_root, try_find_root, RootError};
pub use special::{
    chi_square_pdf, chi_square_sf, ln_gamma, regularized_gamma_p, regularized_gamma_q,
    std_normal_cdf, std_normal_pdf, std_normal_quantile, std_normal_sf, two_sided_p_value,
};

/// Default relative tolerance for quadrature.
pub const QUAD_TOL: f64 = 1e-8;
/// Default absolute tolerance for root finding.
pub const ROOT_TOL: f64 = 1e-8;
/// Default tolerance on the argument for scalar maximization.
pub const OPT_TOL: f64 = 1e-4;
