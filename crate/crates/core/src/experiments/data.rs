//! Initial data used by the experiments.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::{plateau_bump, SpaceParams};
use crate::pde::DEFAULT_DEALIAS;
use crate::spectral::{derivative, Grid, GridFunction, SpectralField};

/// Plateau of the bump's Fourier transform.
pub const BUMP_PLATEAU: f64 = 0.25;
/// Support radius of the bump's Fourier transform.
pub const BUMP_SUPPORT: f64 = 0.5;

/// Real, even field whose Fourier transform is a smooth bump, 1 on
/// `|xi| <= 1/4` and 0 on `|xi| >= 1/2`.
#[derive(Clone, Debug)]
pub struct BumpProfile {
    pub phi: GridFunction,
}

impl BumpProfile {
    pub fn new(grid: &Grid) -> Self {
        let scale = 1.0 / grid.length();
        let spec = SpectralField::from_fn(grid, |k| Complex64::new(Self::symbol(k) * scale, 0.0));
        BumpProfile { phi: spec.to_real() }
    }

    /// The prescribed Fourier transform.
    pub fn symbol(xi: f64) -> f64 {
        plateau_bump(xi, BUMP_PLATEAU, BUMP_SUPPORT)
    }

    pub fn grid(&self) -> &Grid {
        self.phi.grid()
    }
}

/// Wavenumber `(17/12) 2^n` moved to the nearest grid wavenumber.
pub fn fn_wavenumber(grid: &Grid, n: u32) -> f64 {
    grid.snap_wavenumber(17.0 / 12.0 * 2f64.powi(n as i32))
}

/// `f_n = 2^{-ns} phi(x) sin(k_n x)` with `k_n` the grid wavenumber nearest
/// `(17/12) 2^n`.
pub fn build_fn(n: u32, s: f64, phi: &BumpProfile) -> Result<GridFunction> {
    build_fn_with(n, s, phi, DEFAULT_DEALIAS)
}

/// As [`build_fn`]; rejects `n` whose frequency band reaches the dealias
/// cutoff `fraction * k_nyquist`.
pub fn build_fn_with(n: u32, s: f64, phi: &BumpProfile, fraction: f64) -> Result<GridFunction> {
    if n < 1 {
        return Err(Error::invalid("n must be at least 1"));
    }
    let grid = phi.grid();
    let k = fn_wavenumber(grid, n);
    let cutoff = fraction * grid.k_nyquist();
    if k + BUMP_SUPPORT >= cutoff {
        return Err(Error::Resolution(format!(
            "f_{n} excites k = {k:.3} + {BUMP_SUPPORT}, at or above the dealias cutoff {cutoff:.3}; increase N"
        )));
    }
    let amp = 2f64.powf(-(n as f64) * s);
    let vals = grid.points().zip(phi.phi.values()).map(|(x, p)| amp * p * (k * x).sin()).collect();
    GridFunction::new(grid, vals)
}

/// `g_n = 2^{-n/2} phi(x)`.
pub fn build_gn(n: u32, phi: &BumpProfile) -> GridFunction {
    phi.phi.scale(2f64.powf(-(n as f64) / 2.0))
}

/// `||g_n^2 d_x f_n||_{F^s_{p,inf}}`.
pub fn interaction_norm(n: u32, s: f64, p: f64, phi: &BumpProfile) -> Result<f64> {
    let f = build_fn(n, s, phi)?;
    let g = build_gn(n, phi);
    SpaceParams::triebel_lizorkin(s, p, f64::INFINITY).norm(&g.mul(&g).mul(&derivative(&f)))
}

/// Named initial data, buildable on any grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Datum {
    /// `amplitude * exp(-(x - center)^2 / (2 width^2))`.
    Gaussian {
        amplitude: f64,
        #[serde(default = "one")]
        width: f64,
        #[serde(default)]
        center: f64,
    },
    /// `amplitude * sin(pi m x / L)`.
    Mode { m: i64, amplitude: f64 },
    /// `amplitude * sin(k x)`; `k` must lie on the wavenumber ladder.
    Sine { k: f64, amplitude: f64 },
    /// `sign sqrt(c) exp(-|x - center|)` convolved with a Gaussian of width
    /// `sigma`, built from its Fourier transform.
    MollifiedPeakon {
        c: f64,
        sigma: f64,
        #[serde(default)]
        center: f64,
        #[serde(default = "one")]
        sign: f64,
    },
    /// `amplitude * (G * G)`, Fourier transform `amplitude / (1 + k^2)^2`.
    HelmholtzBump { amplitude: f64 },
}

fn one() -> f64 {
    1.0
}

impl Datum {
    pub fn build(&self, grid: &Grid) -> Result<GridFunction> {
        match *self {
            Datum::Gaussian { amplitude, width, center } => {
                if !(width > 0.0) {
                    return Err(Error::invalid(format!("Gaussian width must be positive, got {width}")));
                }
                Ok(gaussian(grid, amplitude, width, center))
            }
            Datum::Mode { m, amplitude } => {
                let k = m as f64 * grid.wavenumber_spacing();
                if k.abs() >= grid.k_nyquist() {
                    return Err(Error::Resolution(format!("mode {m} is not below Nyquist")));
                }
                Ok(GridFunction::from_fn(grid, |x| amplitude * (k * x).sin()))
            }
            Datum::Sine { k, amplitude } => {
                let m = k / grid.wavenumber_spacing();
                if (m - m.round()).abs() > 1e-9 {
                    return Err(Error::invalid(format!(
                        "k = {k} is not on the wavenumber ladder (spacing {})",
                        grid.wavenumber_spacing()
                    )));
                }
                Datum::Mode { m: m.round() as i64, amplitude }.build(grid)
            }
            Datum::MollifiedPeakon { c, sigma, center, sign } => mollified_peakon(grid, c, sigma, center, sign),
            Datum::HelmholtzBump { amplitude } => Ok(helmholtz_bump(grid, amplitude)),
        }
    }
}

pub fn gaussian(grid: &Grid, amplitude: f64, width: f64, center: f64) -> GridFunction {
    GridFunction::from_fn(grid, |x| amplitude * (-(x - center).powi(2) / (2.0 * width * width)).exp())
}

/// Default smooth datum of the PDE experiments.
pub fn smooth_bump(grid: &Grid) -> GridFunction {
    gaussian(grid, 0.5, 1.0, 0.0)
}

/// Periodized `sign sqrt(c) exp(-|x - center|)` convolved with a Gaussian of
/// standard deviation `sigma`. `sigma = 0` gives the band-limited peakon.
pub fn mollified_peakon(grid: &Grid, c: f64, sigma: f64, center: f64, sign: f64) -> Result<GridFunction> {
    if !(c > 0.0) || !(sigma >= 0.0) {
        return Err(Error::invalid(format!("need c > 0 and sigma >= 0, got c = {c}, sigma = {sigma}")));
    }
    let amp = sign * c.sqrt() / grid.length();
    let spec = SpectralField::from_fn(grid, |k| {
        let mag = amp * 2.0 / (1.0 + k * k) * (-0.5 * sigma * sigma * k * k).exp();
        Complex64::from_polar(mag, -k * center)
    });
    Ok(spec.to_real())
}

/// `amplitude * (G * G)` on the torus.
pub fn helmholtz_bump(grid: &Grid, amplitude: f64) -> GridFunction {
    let scale = amplitude / grid.length();
    SpectralField::from_fn(grid, |k| Complex64::new(scale / (1.0 + k * k).powi(2), 0.0)).to_real()
}
