//! Pseudospectral laboratory for the Novikov equation and its Camassa-Holm
//! family relatives.
//!
//! The real line is approximated by the torus `[-L, L)`. Fields are sampled
//! on a uniform [`spectral::Grid`]; derivatives and the Helmholtz inverse
//! `(1 - d_xx)^{-1}` are Fourier multipliers.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiments;
pub mod lp;
pub mod par;
pub mod pde;
pub mod peakon;
pub mod quadrature;
pub mod report;
pub mod spectral;

pub use error::{Error, Result};
pub use par::Execution;
