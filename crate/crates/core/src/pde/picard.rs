//! The approximation scheme
//! `u^{n+1}_t + (u^n)^2 u^{n+1}_x = P(u^n)`, `u^{n+1}(0) = S_{n+1} u0`, `u^0 = 0`.

use serde::Serialize;

use super::equation::{nonlocal_part, EquationKind};
use super::solver::SolveConfig;
use super::trajectory::Trajectory;
use super::transport::{transport_solve, TransportCoefficients};
use crate::error::{Error, Result};
use crate::lp::{besov_norm, low_freq, SpaceParams};
use crate::spectral::GridFunction;

/// Coefficients `((u^n)^2, P(u^n))` of the next iterate, with `u^n`
/// interpolated in time.
pub struct PicardCoefficients<'a> {
    pub previous: &'a Trajectory,
}

impl TransportCoefficients for PicardCoefficients<'_> {
    fn at(&self, t: f64) -> (GridFunction, GridFunction) {
        let u = self.previous.interpolate(t);
        (u.mul(&u), nonlocal_part(&u, EquationKind::Ne))
    }
}

#[derive(Clone, Debug)]
pub struct PicardResult {
    /// `u^1, ..., u^{n_max}`.
    pub iterates: Vec<Trajectory>,
    /// `b_n = ||u^{n+1}(T) - u^n(T)||_{B^{s-1}_{p,inf}}` for `n = 1..n_max-1`.
    pub increments: Vec<f64>,
}

/// Runs `n_max` iterations of the scheme on `[0, cfg.t_final]`.
pub fn picard_iterate(u0: &GridFunction, n_max: usize, cfg: &SolveConfig, s: f64, p: f64) -> Result<PicardResult> {
    if n_max < 1 {
        return Err(Error::invalid("n_max must be at least 1"));
    }
    cfg.validate()?;
    let first = low_freq(1, u0);
    let mut iterates = vec![Trajectory::constant(&first, cfg.t_final)];
    let mut increments = Vec::with_capacity(n_max - 1);
    for n in 1..n_max {
        let data = low_freq(n as i32 + 1, u0);
        let next = transport_solve(&PicardCoefficients { previous: &iterates[n - 1] }, &data, cfg)?;
        let diff = next.final_state() - iterates[n - 1].final_state();
        increments.push(besov_norm(&diff, s - 1.0, p, f64::INFINITY)?);
        iterates.push(next);
    }
    Ok(PicardResult { iterates, increments })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct UniformBound {
    /// Smallest `C` for which the envelope bounds every iterate, if one exists
    /// inside the admissible range `4 C^3 ||u0||^2 T < 1`.
    pub constant: Option<f64>,
    /// `1 - C / C_max`, where `C_max` is the end of the admissible range.
    pub margin: f64,
    pub u0_norm: f64,
}

impl UniformBound {
    pub fn holds(&self) -> bool {
        self.constant.is_some()
    }
}

/// Envelope `C ||u0|| / sqrt(1 - 4 C^3 ||u0||^2 t)`.
pub fn uniform_envelope(c: f64, u0_norm: f64, t: f64) -> f64 {
    let d = 1.0 - 4.0 * c.powi(3) * u0_norm * u0_norm * t;
    if d <= 0.0 {
        f64::INFINITY
    } else {
        c * u0_norm / d.sqrt()
    }
}

/// Fits the smallest constant in `||u^n(t)|| <= C ||u0|| / sqrt(1 - 4 C^3 ||u0||^2 t)`
/// over all iterates and recorded times.
pub fn uniform_bound_check(iterates: &[Trajectory], u0: &GridFunction, params: &SpaceParams) -> Result<UniformBound> {
    let u0_norm = params.norm(u0)?;
    let mut samples = Vec::new();
    for tr in iterates {
        for (t, norm) in tr.times().iter().zip(tr.norm_series(params)?) {
            samples.push((*t, norm));
        }
    }
    let t_max = samples.iter().map(|s| s.0).fold(0.0, f64::max);
    if u0_norm == 0.0 {
        let ok = samples.iter().all(|s| s.1 == 0.0);
        return Ok(UniformBound { constant: ok.then_some(0.0), margin: 1.0, u0_norm });
    }
    let c_max = if t_max > 0.0 { (1.0 / (4.0 * u0_norm * u0_norm * t_max)).cbrt() } else { f64::INFINITY };
    let ok = |c: f64| samples.iter().all(|&(t, n)| n <= uniform_envelope(c, u0_norm, t));
    // C >= sup ||u^n(0)|| / ||u0|| is necessary
    let mut lo = samples.iter().filter(|s| s.0 == 0.0).map(|s| s.1 / u0_norm).fold(0.0, f64::max);
    if c_max.is_infinite() {
        return Ok(UniformBound { constant: Some(lo), margin: 1.0, u0_norm });
    }
    let mut hi = c_max * (1.0 - 1e-12);
    if !ok(hi) {
        return Ok(UniformBound { constant: None, margin: 0.0, u0_norm });
    }
    if ok(lo) {
        hi = lo;
    }
    for _ in 0..200 {
        if hi - lo <= 1e-13 * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(UniformBound { constant: Some(hi), margin: 1.0 - hi / c_max, u0_norm })
}
