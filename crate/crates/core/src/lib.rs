//! Adaptive sign-error-rate control for simultaneous inference in the
//! normal-means model `Y_i ~ N(theta_i, 1)`, `theta_i ~ G`.

pub mod dataset;
pub mod distributions;
pub mod error;
pub mod error_rates;
pub mod numerics;
pub mod procedures;
pub mod simulation;
pub mod table1;

pub use dataset::Dataset;
pub use error::{Error, Result};
