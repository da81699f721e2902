//! Fourier multipliers and quadrature norms.

use super::{GridFunction, SpectralField};
use crate::error::{Error, Result};

/// Symbol of the Helmholtz inverse `(1 - d_xx)^{-1}`.
#[inline]
pub fn helmholtz_symbol(k: f64) -> f64 {
    1.0 / (1.0 + k * k)
}

/// Spectral `d/dx`. Exact on trigonometric polynomials below Nyquist.
pub fn derivative(f: &GridFunction) -> GridFunction {
    let mut s = f.spectrum();
    s.apply_odd(|_| 1.0);
    s.to_real()
}

/// `Lambda^{-2} f`, i.e. convolution with the periodization of
/// `G(x) = exp(-|x|) / 2`.
pub fn helmholtz_inverse(f: &GridFunction) -> GridFunction {
    let mut s = f.spectrum();
    s.apply_real(helmholtz_symbol);
    s.to_real()
}

/// `d_x Lambda^{-2} f`.
pub fn dx_helmholtz_inverse(f: &GridFunction) -> GridFunction {
    let mut s = f.spectrum();
    s.apply_odd(helmholtz_symbol);
    s.to_real()
}

/// Zeroes every coefficient with `|k| > fraction * k_nyquist`.
pub fn dealias_spectrum(s: &mut SpectralField, fraction: f64) {
    let cutoff = fraction * s.grid().k_nyquist();
    s.apply_real(|k| if k.abs() > cutoff { 0.0 } else { 1.0 });
}

pub fn dealias(f: &GridFunction, fraction: f64) -> Result<GridFunction> {
    check_fraction(fraction)?;
    let mut s = f.spectrum();
    dealias_spectrum(&mut s, fraction);
    Ok(s.to_real())
}

pub(crate) fn check_fraction(fraction: f64) -> Result<()> {
    if fraction > 0.0 && fraction <= 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("dealias fraction must be in (0, 1], got {fraction}")))
    }
}

/// Rectangle-rule `L^p` norm, `p` in `(1, inf)`.
pub fn lp_norm(f: &GridFunction, p: f64) -> Result<f64> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::invalid(format!("L^p exponent must be in (1, inf), got {p}")));
    }
    Ok(lp_norm_unchecked(f.values(), p, f.grid().dx()))
}

pub(crate) fn lp_norm_unchecked(values: &[f64], p: f64, dx: f64) -> f64 {
    if p == 2.0 {
        return (values.iter().map(|v| v * v).sum::<f64>() * dx).sqrt();
    }
    // scale by the max to avoid overflow in |v|^p
    let m = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if m == 0.0 {
        return 0.0;
    }
    let s: f64 = values.iter().map(|v| (v.abs() / m).powf(p)).sum();
    m * (s * dx).powf(1.0 / p)
}

pub fn sup_norm(f: &GridFunction) -> f64 {
    f.max_abs()
}

/// Integral over one period by the rectangle rule.
pub fn integrate(f: &GridFunction) -> f64 {
    f.values().iter().sum::<f64>() * f.grid().dx()
}
