//! Bayesian variable selection for right-censored Weibull survival regression
//! with a shrinkage prior induced by a Beta law on the model R².
//!
//! The crate is organised around the stages of an analysis:
//!
//! - [`model`] — survival data containers, covariate standardization, the
//!   censored Weibull log-likelihood and the shape MLE.
//! - [`prior`] — the R² ↔ global-variance transform, the exact induced prior
//!   density, and its Generalized Beta Prime approximation.
//! - [`dists`] — exact samplers for the non-standard full conditionals
//!   (generalized inverse Gaussian, truncated normal, shifted exponential).
//! - [`engine`] — Metropolis-within-Gibbs chains: the R2D2 sampler, a
//!   Horseshoe variant, a fixed-Gaussian Weibull chain, and Bayesian
//!   logistic/linear mediator models.
//! - [`metrics`] — estimation error, selection accuracy, coverage and
//!   concordance metrics.
//! - [`sim`] — the synthetic benchmark harness (AR(1) designs, fixed
//!   right-censoring, method sweeps).
//! - [`mediation`] — PCA exposure projection and direct/indirect/total
//!   effect decomposition.
//!
//! Everything is deterministic given a seed: RNG streams are derived from a
//! single master seed, and replicate-level parallelism (enabled by the
//! default `parallel` feature) reduces into index-ordered buffers so thread
//! count never changes numerical output.

pub mod dists;
pub mod engine;
pub mod error;
pub mod exec;
pub mod mediation;
pub mod metrics;
pub mod model;
pub mod numeric;
pub mod prior;
pub mod sim;

pub use error::{Error, Result};
