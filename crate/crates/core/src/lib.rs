//! Chronologies for recent sediments from lead-210 measurements.
//!
//! The crate dates sediment cores two ways from the same input data:
//!
//! * [`crs`] — the classical constant-rate-of-supply (CRS) model: cumulative
//!   unsupported inventories, logarithmic ages, Monte Carlo error propagation.
//! * [`inference`] + [`twalk`] — a Bayesian model in which the age-depth
//!   function (piecewise linear over equal sections, gamma-autoregressive
//!   slopes), the supply rate, and the supported activity are all parameters,
//!   sampled with the self-adjusting t-walk MCMC algorithm.
//!
//! [`simulator`] regenerates synthetic cores with a known true chronology so
//! both models can be checked against ground truth, and [`summary`] turns
//! posterior ensembles into quantile bands and convergence diagnostics.
//! The [`cli`] module is the command-line front end (`pbchron` binary).

pub mod agedepth;
pub mod cli;
pub mod crs;
pub mod data;
mod error;
pub mod fixtures;
pub mod inference;
pub mod physics;
pub mod simulator;
mod stats;
pub mod summary;
pub mod twalk;

pub use error::{Error, Result};
