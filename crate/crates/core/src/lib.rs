//! `l^p`-anisotropic total variation denoising and certified bilevel learning
//! of the regularization weight `alpha` and the Euclidean order `p`.
//!
//! Module map:
//!
//! - [`lp`]: exponents, norms, dual-ball projections, skewed metrics
//! - [`grid`], [`tv`]: grid functions, gradient/divergence, `TV_p`
//! - [`denoise`]: the primal-dual Level-2 solver and a smoothed cross-check
//! - [`oracle1d`]: exact 1D solutions on step signals and the non-convex
//!   assessment landscape
//! - [`trainer`]: `alpha_U`, finite training grounds, the sweep, the error
//!   certificate and the relaxation pipeline
//! - [`io`]: PGM / signal files, JSON reports, CSV landscapes
//! - [`cli`]: the `tvp` command-line front end

pub mod cli;
pub mod denoise;
pub mod error;
pub mod grid;
pub mod io;
pub mod lp;
pub mod oracle1d;
pub mod trainer;
pub mod tv;

pub use denoise::{denoise, denoise_from, denoise_smoothed, denoise_warm, DenoiseParams, DenoiseResult};
pub use error::{Error, Result};
pub use grid::{mean_value, ImageGrid};
pub use lp::{
    dual_exponent, equivalence_factor, lp_norm, metric_dual_project, metric_eval, project_dual_ball,
    AnisotropicMetric, PExponent,
};
pub use tv::{divergence, gradient, tv_p, tv_p_smoothed, DualField};
