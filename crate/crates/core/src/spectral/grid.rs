use std::fmt;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Uniform periodic grid on `[-L, L)` with `N = 2^m` points.
///
/// Cloning is cheap: the FFT plans and the wavenumber ladder live behind an
/// `Arc` and are shared read-only between threads.
#[derive(Clone)]
pub struct Grid(Arc<GridInner>);

struct GridInner {
    half_length: f64,
    n: usize,
    dx: f64,
    /// Signed mode index `m` for each FFT slot, in `(-N/2, N/2]`.
    modes: Vec<i64>,
    /// `k_m = pi m / L` for each FFT slot.
    wavenumbers: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Grid {
    pub fn new(half_length: f64, n: usize) -> Result<Self> {
        if !(half_length.is_finite() && half_length > 0.0) {
            return Err(Error::InvalidGrid(format!("half-length must be positive and finite, got {half_length}")));
        }
        if n < 4 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!("size must be a power of two >= 4, got {n}")));
        }
        let half = (n / 2) as i64;
        let modes: Vec<i64> = (0..n as i64).map(|i| if i <= half { i } else { i - n as i64 }).collect();
        let scale = std::f64::consts::PI / half_length;
        let wavenumbers = modes.iter().map(|&m| m as f64 * scale).collect();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        Ok(Grid(Arc::new(GridInner {
            half_length,
            n,
            dx: 2.0 * half_length / n as f64,
            modes,
            wavenumbers,
            forward,
            inverse,
        })))
    }

    pub fn half_length(&self) -> f64 {
        self.0.half_length
    }

    /// Period `2L`.
    pub fn length(&self) -> f64 {
        2.0 * self.0.half_length
    }

    pub fn n(&self) -> usize {
        self.0.n
    }

    pub fn dx(&self) -> f64 {
        self.0.dx
    }

    pub fn x(&self, i: usize) -> f64 {
        -self.0.half_length + i as f64 * self.0.dx
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.0.n).map(move |i| self.x(i))
    }

    /// Wavenumbers in FFT slot order.
    pub fn wavenumbers(&self) -> &[f64] {
        &self.0.wavenumbers
    }

    /// Signed mode indices in FFT slot order.
    pub fn modes(&self) -> &[i64] {
        &self.0.modes
    }

    /// FFT slot holding mode `m`, if `m` is in `(-N/2, N/2]`.
    pub fn slot(&self, m: i64) -> Option<usize> {
        let half = (self.0.n / 2) as i64;
        if m > half || m <= -half {
            return None;
        }
        Some(if m >= 0 { m as usize } else { (m + self.0.n as i64) as usize })
    }

    pub fn wavenumber_spacing(&self) -> f64 {
        std::f64::consts::PI / self.0.half_length
    }

    pub fn k_nyquist(&self) -> f64 {
        self.0.n as f64 / 2.0 * self.wavenumber_spacing()
    }

    /// Nearest wavenumber on the ladder.
    pub fn snap_wavenumber(&self, k: f64) -> f64 {
        (k / self.wavenumber_spacing()).round() * self.wavenumber_spacing()
    }

    pub(crate) fn fft_forward(&self) -> &dyn Fft<f64> {
        self.0.forward.as_ref()
    }

    pub(crate) fn fft_inverse(&self) -> &dyn Fft<f64> {
        self.0.inverse.as_ref()
    }

    pub fn same_as(&self, other: &Grid) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self == other
    }

    pub(crate) fn ensure_same(&self, other: &Grid) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!("{self:?} vs {other:?}")))
        }
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.0.n == other.0.n && self.0.half_length == other.0.half_length
    }
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid").field("half_length", &self.0.half_length).field("n", &self.0.n).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_sizes() {
        assert!(Grid::new(32.0, 100).is_err());
        assert!(Grid::new(0.0, 64).is_err());
        assert!(Grid::new(f64::NAN, 64).is_err());
        assert!(Grid::new(32.0, 64).is_ok());
    }

    #[test]
    fn spacing_and_ladder() {
        let g = Grid::new(32.0, 256).unwrap();
        assert_eq!(g.dx() * g.n() as f64, 64.0);
        let ks = g.wavenumbers();
        assert_eq!(ks[0], 0.0);
        assert_eq!(g.modes()[128], 128);
        assert_eq!(g.modes()[129], -127);
        // symmetric except the Nyquist slot
        for m in 1..128 {
            let pos = ks[g.slot(m).unwrap()];
            let neg = ks[g.slot(-m).unwrap()];
            assert_eq!(pos, -neg);
        }
        assert!(g.slot(-128).is_none());
        assert!((g.k_nyquist() - 128.0 * std::f64::consts::PI / 32.0).abs() < 1e-12);
    }
}
