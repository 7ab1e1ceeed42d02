//! Coverage probability and area spectral efficiency of small-cell networks
//! whose base stations form a homogeneous Poisson point process and whose
//! links switch probabilistically between line-of-sight and
//! non-line-of-sight path loss.
//!
//! * [`model`]: piecewise LoS/NLoS path loss and the stock environments.
//! * [`special`]: `2F1` on the negative axis and the truncated interference
//!   integrals `rho1`/`rho2`.
//! * [`analytic`]: coverage (general quadrature engine and closed-form
//!   two-segment path) and ASE.
//! * [`simulator`]: seeded Monte Carlo ground truth.
//! * [`thresholds`]: coverage peak `lambda0` and ASE recovery `lambda1`.

pub mod analytic;
pub mod config;
pub mod error;
pub mod model;
pub mod quadrature;
pub mod simulator;
pub mod special;
pub mod thresholds;

pub use error::{Error, Result};
