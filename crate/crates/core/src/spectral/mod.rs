//! Periodic grid, discrete Fourier transform and spectral multipliers.
//!
//! The line is approximated by the torus `[-L, L)`; data used throughout the
//! crate decays like `exp(-|x|)`, so wrap-around is below round-off for the
//! default `L = 32`.

mod field;
mod grid;
mod ops;

pub(crate) use field::{forward_in_place, inverse_in_place};
pub use field::{forward_transform, inverse_transform, GridFunction, SpectralField};
pub use grid::Grid;
pub(crate) use ops::{check_fraction, lp_norm_unchecked};
pub use ops::{
    dealias, dealias_spectrum, derivative, dx_helmholtz_inverse, helmholtz_inverse, helmholtz_symbol, integrate,
    lp_norm, sup_norm,
};

/// Default half-length of the periodic box.
pub const DEFAULT_HALF_LENGTH: f64 = 32.0;
