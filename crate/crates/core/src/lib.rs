//! Topological break detection for weakly dependent point-cloud time series.
//!
//! The crate is organised as a pipeline:
//!
//! - [`geometry`]: box domains, point clouds and the Vietoris–Rips / Čech
//!   filtration functions.
//! - [`persistence`]: filtered complexes, persistence diagrams over the
//!   two-element field and fixed-length feature vectors.
//! - [`stability`]: computable proxies of the perturbation radius of a
//!   filtration and Monte Carlo estimates of its sublevel-set exponent.
//! - [`procgen`]: Bernoulli-shift point-cloud series, m-dependent couplings
//!   and break injection.
//! - [`changepoint`]: CUSUM process, long-run covariance, the Λ/Ω statistics
//!   with simulated limit laws and the change-point estimator.
//! - [`harness`]: declarative experiment configs and reproducible batch runs.

pub mod changepoint;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod persistence;
pub mod procgen;
pub mod rng;
pub mod stability;

pub use error::{Error, Result};
