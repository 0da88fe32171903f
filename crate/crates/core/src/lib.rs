//! Coherent feed-forward quantum neural networks (CFFQNN) and the baselines
//! they are measured against, on an exact statevector simulator.
//!
//! Layers:
//! - [`qsim`]: statevector and gate kernels.
//! - [`circuit`]: gate lists, text form, depth and resource counts.
//! - [`models`]: CFFQNN, its frozen-encoder variant, and the ZZ feature map +
//!   RealAmplitudes baseline.
//! - [`optimize`]: derivative-free trust-region minimizer and training loop.
//! - [`mlp`]: classical feed-forward baseline.
//! - [`data`]: CSV ingestion, balancing, splitting, PCA and angle scaling.
//! - [`metrics`]: confusion counts and the comparison report.
//! - [`workflow`]: the file-based pipeline behind the command-line tool.

pub mod artifact;
pub mod circuit;
pub mod config;
pub mod data;
pub mod error;
pub mod metrics;
pub mod mlp;
pub mod models;
pub mod optimize;
pub mod qsim;
pub mod seed;
pub mod workflow;

pub use error::{Error, Result};
