use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::Grid;
use crate::error::{Error, Result};

/// Real samples of a field on a [`Grid`].
#[derive(Clone, Debug)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<f64>,
}

/// Complex Fourier amplitudes of a field, stored in FFT slot order.
///
/// Normalization: the forward transform carries `1/N`, so `coeff(m)`
/// approximates `(1/2L) * integral of f(x) exp(-i k_m x) dx` over one period.
#[derive(Clone, Debug)]
pub struct SpectralField {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

// Samples start at x_0 = -L, so exp(i k_m x_j) = (-1)^m exp(2 pi i m j / N).
#[inline]
fn phase(m: i64) -> f64 {
    if m & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Physical samples to coefficients, in place.
pub(crate) fn forward_in_place(grid: &Grid, buf: &mut [Complex64]) {
    grid.fft_forward().process(buf);
    let inv_n = 1.0 / grid.n() as f64;
    for (c, &m) in buf.iter_mut().zip(grid.modes()) {
        *c *= phase(m) * inv_n;
    }
}

/// Coefficients to complex physical samples, in place.
pub(crate) fn inverse_in_place(grid: &Grid, buf: &mut [Complex64]) {
    for (c, &m) in buf.iter_mut().zip(grid.modes()) {
        *c *= phase(m);
    }
    grid.fft_inverse().process(buf);
}

impl GridFunction {
    /// Wraps samples, rejecting wrong lengths and non-finite entries.
    pub fn new(grid: &Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::GridMismatch(format!("expected {} samples, got {}", grid.n(), values.len())));
        }
        let f = GridFunction { grid: grid.clone(), values };
        f.check_finite("GridFunction::new")?;
        Ok(f)
    }

    pub(crate) fn from_vec_unchecked(grid: &Grid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.n());
        GridFunction { grid: grid.clone(), values }
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn constant(grid: &Grid, c: f64) -> Self {
        GridFunction { grid: grid.clone(), values: vec![c; grid.n()] }
    }

    /// Samples `f` at the grid points. Finiteness is not checked here; the
    /// transforms and solvers reject non-finite fields.
    pub fn from_fn(grid: &Grid, f: impl Fn(f64) -> f64) -> Self {
        GridFunction { grid: grid.clone(), values: grid.points().map(f).collect() }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn check_finite(&self, context: &'static str) -> Result<()> {
        match self.values.iter().position(|v| !v.is_finite()) {
            Some(index) => Err(Error::NonFinite { context, index }),
            None => Ok(()),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        GridFunction { grid: self.grid.clone(), values: self.values.iter().map(|&v| f(v)).collect() }
    }

    /// Pointwise combination. Panics if the grids differ.
    pub fn zip_map(&self, other: &GridFunction, f: impl Fn(f64, f64) -> f64) -> Self {
        assert!(self.grid.same_as(&other.grid), "grid mismatch in pointwise operation");
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect();
        GridFunction { grid: self.grid.clone(), values }
    }

    /// Pointwise product.
    pub fn mul(&self, other: &GridFunction) -> Self {
        self.zip_map(other, |a, b| a * b)
    }

    /// `self + a * other`
    pub fn axpy(&self, a: f64, other: &GridFunction) -> Self {
        self.zip_map(other, |x, y| x + a * y)
    }

    pub fn scale(&self, a: f64) -> Self {
        self.map(|v| a * v)
    }

    /// Forward transform; rejects non-finite input.
    pub fn forward(&self) -> Result<SpectralField> {
        self.check_finite("forward transform")?;
        Ok(self.spectrum())
    }

    pub(crate) fn spectrum(&self) -> SpectralField {
        let mut buf: Vec<Complex64> = self.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        forward_in_place(&self.grid, &mut buf);
        SpectralField { grid: self.grid.clone(), coeffs: buf }
    }
}

impl SpectralField {
    pub fn zeros(grid: &Grid) -> Self {
        SpectralField { grid: grid.clone(), coeffs: vec![Complex64::new(0.0, 0.0); grid.n()] }
    }

    /// Wraps coefficients given in FFT slot order.
    pub fn from_coeffs(grid: &Grid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.n() {
            return Err(Error::GridMismatch(format!("expected {} coefficients, got {}", grid.n(), coeffs.len())));
        }
        Ok(SpectralField { grid: grid.clone(), coeffs })
    }

    /// Builds coefficients from a function of the wavenumber.
    pub fn from_fn(grid: &Grid, f: impl Fn(f64) -> Complex64) -> Self {
        SpectralField { grid: grid.clone(), coeffs: grid.wavenumbers().iter().map(|&k| f(k)).collect() }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    /// Amplitude of mode `m` (wavenumber `pi m / L`); zero outside the ladder.
    pub fn coeff(&self, m: i64) -> Complex64 {
        self.grid.slot(m).map_or(Complex64::new(0.0, 0.0), |i| self.coeffs[i])
    }

    pub fn set_coeff(&mut self, m: i64, value: Complex64) {
        if let Some(i) = self.grid.slot(m) {
            self.coeffs[i] = value;
        }
    }

    /// Multiplies every coefficient by a real symbol `sigma(k)`.
    pub fn apply_real(&mut self, sigma: impl Fn(f64) -> f64) {
        for (c, &k) in self.coeffs.iter_mut().zip(self.grid.wavenumbers()) {
            *c *= sigma(k);
        }
    }

    /// Multiplies by `i k sigma(k)`. The Nyquist slot is zeroed because an
    /// odd symbol has no real representative there.
    pub fn apply_odd(&mut self, sigma: impl Fn(f64) -> f64) {
        let nyq = self.grid.n() / 2;
        for (i, (c, &k)) in self.coeffs.iter_mut().zip(self.grid.wavenumbers()).enumerate() {
            if i == nyq {
                *c = Complex64::new(0.0, 0.0);
            } else {
                *c *= Complex64::new(0.0, k * sigma(k));
            }
        }
    }

    /// Sum of `|c_m|^2`; the L2 norm squared is `2L` times this.
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn is_conjugate_symmetric(&self, tol: f64) -> bool {
        let half = (self.grid.n() / 2) as i64;
        (0..=half).all(|m| {
            let a = self.coeff(m);
            let b = if m == half || m == 0 { a } else { self.coeff(-m) };
            (a - b.conj()).norm() <= tol * (1.0 + a.norm())
        })
    }

    /// Inverse transform to complex samples.
    pub fn inverse_complex(&self) -> Result<Vec<Complex64>> {
        if let Some(index) = self.coeffs.iter().position(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::NonFinite { context: "inverse transform", index });
        }
        Ok(self.samples())
    }

    /// Inverse transform; the imaginary part (round-off for real fields) is
    /// discarded.
    pub fn inverse(&self) -> Result<GridFunction> {
        let s = self.inverse_complex()?;
        Ok(GridFunction::from_vec_unchecked(&self.grid, s.into_iter().map(|c| c.re).collect()))
    }

    pub(crate) fn samples(&self) -> Vec<Complex64> {
        let mut buf = self.coeffs.clone();
        inverse_in_place(&self.grid, &mut buf);
        buf
    }

    pub(crate) fn to_real(&self) -> GridFunction {
        GridFunction::from_vec_unchecked(&self.grid, self.samples().into_iter().map(|c| c.re).collect())
    }
}

/// `forward_transform`
pub fn forward_transform(f: &GridFunction) -> Result<SpectralField> {
    f.forward()
}

/// `inverse_transform`
pub fn inverse_transform(f: &SpectralField) -> Result<GridFunction> {
    f.inverse()
}

impl Add for &GridFunction {
    type Output = GridFunction;
    fn add(self, rhs: &GridFunction) -> GridFunction {
        self.zip_map(rhs, |a, b| a + b)
    }
}

impl Sub for &GridFunction {
    type Output = GridFunction;
    fn sub(self, rhs: &GridFunction) -> GridFunction {
        self.zip_map(rhs, |a, b| a - b)
    }
}

impl Neg for &GridFunction {
    type Output = GridFunction;
    fn neg(self) -> GridFunction {
        self.map(|v| -v)
    }
}

impl Mul<f64> for &GridFunction {
    type Output = GridFunction;
    fn mul(self, rhs: f64) -> GridFunction {
        self.scale(rhs)
    }
}

impl Mul<&GridFunction> for f64 {
    type Output = GridFunction;
    fn mul(self, rhs: &GridFunction) -> GridFunction {
        rhs.scale(self)
    }
}
