//! Explicit RK4 time stepping for the nonlocal equations.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::equation::{EquationKind, Rhs, StageInfo, Terms, DEFAULT_DEALIAS};
use super::trajectory::Trajectory;
use crate::error::{Error, Result};
use crate::spectral::{check_fraction, GridFunction, SpectralField};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolveConfig {
    /// Requested step; the run uses `T / ceil(T / dt)` so it lands on `T`.
    pub dt: f64,
    #[serde(rename = "T")]
    pub t_final: f64,
    pub cfl_safety: f64,
    pub dealias_fraction: f64,
    /// Blow-up is declared once `max|u_x|` exceeds this multiple of
    /// `max|u0_x|` (slopes below 1e-6 are never flagged).
    pub blowup_slope_factor: f64,
    pub record_every: usize,
    /// Also store `du/dt` at each recorded time.
    pub record_rates: bool,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            dt: 1e-3,
            t_final: 1.0,
            cfl_safety: 0.5,
            dealias_fraction: DEFAULT_DEALIAS,
            blowup_slope_factor: 50.0,
            record_every: 1,
            record_rates: false,
        }
    }
}

impl SolveConfig {
    pub fn new(dt: f64, t_final: f64) -> Self {
        SolveConfig { dt, t_final, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::invalid(m));
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad(format!("dt must be positive, got {}", self.dt));
        }
        if !(self.t_final >= 0.0 && self.t_final.is_finite()) {
            return bad(format!("T must be non-negative, got {}", self.t_final));
        }
        if !(self.cfl_safety > 0.0 && self.cfl_safety <= 1.0) {
            return bad(format!("cfl_safety must be in (0, 1], got {}", self.cfl_safety));
        }
        if !(self.blowup_slope_factor > 1.0) {
            return bad(format!("blowup_slope_factor must exceed 1, got {}", self.blowup_slope_factor));
        }
        if self.record_every == 0 {
            return bad("record_every must be at least 1".into());
        }
        check_fraction(self.dealias_fraction)
    }

    /// Largest step allowed by the CFL rule for a state with sup norm `max_u`.
    pub fn cfl_limit(&self, dx: f64, max_u: f64, eq: EquationKind) -> f64 {
        self.cfl_safety * dx / eq.advection_speed(max_u).max(1.0)
    }
}

/// Number of equal steps covering `span` with steps no longer than `dt`.
pub(crate) fn step_count(span: f64, dt: f64) -> usize {
    ((span / dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize
}

pub(crate) struct Rk4 {
    rhs: Rhs,
    k1: Vec<Complex64>,
    k2: Vec<Complex64>,
    k3: Vec<Complex64>,
    k4: Vec<Complex64>,
    tmp: Vec<Complex64>,
}

impl Rk4 {
    pub fn new(u: &GridFunction, eq: EquationKind, fraction: f64) -> Result<Self> {
        let n = u.grid().n();
        let z = vec![Complex64::new(0.0, 0.0); n];
        Ok(Rk4 {
            rhs: Rhs::new(u.grid(), eq, fraction)?,
            k1: z.clone(),
            k2: z.clone(),
            k3: z.clone(),
            k4: z.clone(),
            tmp: z,
        })
    }

    /// Evaluates `k1` only; returns the stage information of `uh`.
    pub fn rate(&mut self, uh: &[Complex64]) -> (StageInfo, &[Complex64]) {
        let info = self.rhs.eval(uh, &mut self.k1, Terms::Full);
        (info, &self.k1)
    }

    /// Stage 1 is evaluated first and handed to `check`, which may veto the
    /// step before the remaining stages run.
    pub fn step(
        &mut self,
        uh: &mut [Complex64],
        dt: f64,
        check: impl FnOnce(StageInfo, &[Complex64]) -> Result<()>,
    ) -> Result<StageInfo> {
        let info = self.rhs.eval(uh, &mut self.k1, Terms::Full);
        check(info, &self.k1)?;
        let half = 0.5 * dt;
        for ((t, u), k) in self.tmp.iter_mut().zip(uh.iter()).zip(&self.k1) {
            *t = u + k * half;
        }
        self.rhs.eval(&self.tmp, &mut self.k2, Terms::Full);
        for ((t, u), k) in self.tmp.iter_mut().zip(uh.iter()).zip(&self.k2) {
            *t = u + k * half;
        }
        self.rhs.eval(&self.tmp, &mut self.k3, Terms::Full);
        for ((t, u), k) in self.tmp.iter_mut().zip(uh.iter()).zip(&self.k3) {
            *t = u + k * dt;
        }
        self.rhs.eval(&self.tmp, &mut self.k4, Terms::Full);
        let w = dt / 6.0;
        for (i, u) in uh.iter_mut().enumerate() {
            *u += (self.k1[i] + (self.k2[i] + self.k3[i]) * 2.0 + self.k4[i]) * w;
        }
        Ok(info)
    }
}

fn coeffs_finite(c: &[Complex64]) -> bool {
    c.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

fn to_field(u: &GridFunction, c: &[Complex64]) -> GridFunction {
    SpectralField::from_coeffs(u.grid(), c.to_vec()).expect("length matches").to_real()
}

/// One classical RK4 step with per-stage dealiasing (fraction 1/2).
pub fn step_rk4(u: &GridFunction, dt: f64, eq: EquationKind) -> Result<GridFunction> {
    step_rk4_with(u, dt, eq, DEFAULT_DEALIAS)
}

pub fn step_rk4_with(u: &GridFunction, dt: f64, eq: EquationKind, fraction: f64) -> Result<GridFunction> {
    u.check_finite("step input")?;
    if !(dt >= 0.0 && dt.is_finite()) {
        return Err(Error::invalid(format!("dt must be non-negative, got {dt}")));
    }
    if dt == 0.0 {
        return Ok(u.clone());
    }
    let mut rk = Rk4::new(u, eq, fraction)?;
    let mut uh = u.spectrum().coeffs().to_vec();
    rk.step(&mut uh, dt, |_, _| Ok(()))?;
    let out = to_field(u, &uh);
    if !coeffs_finite(&uh) || !out.is_finite() {
        let mut partial = Trajectory::new(u.grid());
        partial.push(0.0, u.clone());
        return Err(Error::BlowUp { t: dt, max_slope: f64::NAN, partial: Box::new(partial) });
    }
    Ok(out)
}

enum Recording {
    /// Every `n`-th step plus the final time.
    Every(usize),
    /// Only at segment ends.
    Targets,
}

/// Integrates `u0` to `cfg.t_final`.
pub fn solve(u0: &GridFunction, cfg: &SolveConfig, eq: EquationKind) -> Result<Trajectory> {
    cfg.validate()?;
    let targets = if cfg.t_final > 0.0 { vec![cfg.t_final] } else { vec![] };
    integrate(u0, cfg, eq, &targets, Recording::Every(cfg.record_every))
}

/// Integrates through the given increasing positive times, landing on each
/// exactly; the trajectory holds `t = 0` and those times only.
pub fn solve_at(u0: &GridFunction, cfg: &SolveConfig, eq: EquationKind, times: &[f64]) -> Result<Trajectory> {
    cfg.validate()?;
    if times.iter().any(|t| !(t.is_finite() && *t > 0.0)) || times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("output times must be positive and strictly increasing"));
    }
    integrate(u0, cfg, eq, times, Recording::Targets)
}

fn integrate(
    u0: &GridFunction,
    cfg: &SolveConfig,
    eq: EquationKind,
    targets: &[f64],
    recording: Recording,
) -> Result<Trajectory> {
    u0.check_finite("initial data")?;
    let grid = u0.grid().clone();
    let dx = grid.dx();
    let mut rk = Rk4::new(u0, eq, cfg.dealias_fraction)?;
    let mut uh = u0.spectrum().coeffs().to_vec();
    let mut traj = Trajectory::new(&grid);
    traj.push(0.0, u0.clone());
    let mut rate_pending = cfg.record_rates;

    let slope0 = crate::spectral::derivative(u0).max_abs();
    let threshold = cfg.blowup_slope_factor * slope0.max(1e-6);

    let mut t_start = 0.0;
    let mut step_index = 0usize;
    for &t_end in targets {
        let n = step_count(t_end - t_start, cfg.dt);
        let h = (t_end - t_start) / n as f64;
        for i in 0..n {
            let t = t_start + i as f64 * h;
            let pending = rate_pending;
            let traj_ref = &mut traj;
            let res = rk.step(&mut uh, h, |info, k1| {
                if pending {
                    traj_ref.push_rate(to_field(u0, k1));
                }
                let limit = cfg.cfl_limit(dx, info.max_u, eq);
                if h > limit {
                    return Err(Error::CflViolation { t, dt: h, limit });
                }
                if info.max_ux > threshold {
                    return Err(Error::BlowUp { t, max_slope: info.max_ux, partial: Box::new(Trajectory::new(&grid)) });
                }
                Ok(())
            });
            rate_pending = false;
            match res {
                Ok(_) => {}
                Err(Error::BlowUp { t, max_slope, .. }) => {
                    return Err(Error::BlowUp { t, max_slope, partial: Box::new(traj) });
                }
                Err(e) => return Err(e),
            }
            step_index += 1;
            let t_next = if i + 1 == n { t_end } else { t_start + (i + 1) as f64 * h };
            if !coeffs_finite(&uh) {
                return Err(Error::BlowUp { t: t_next, max_slope: f64::NAN, partial: Box::new(traj) });
            }
            let record = match recording {
                Recording::Every(every) => step_index.is_multiple_of(every) || i + 1 == n,
                Recording::Targets => i + 1 == n,
            };
            if record {
                let u = to_field(u0, &uh);
                if !u.is_finite() {
                    return Err(Error::BlowUp { t: t_next, max_slope: f64::NAN, partial: Box::new(traj) });
                }
                traj.push(t_next, u);
                rate_pending = cfg.record_rates;
            }
        }
        t_start = t_end;
    }

    if rate_pending {
        let (_, k1) = rk.rate(&uh);
        traj.push_rate(to_field(u0, k1));
    }
    let last = traj.diagnostics().last().expect("initial state recorded").max_ux;
    if last > threshold {
        return Err(Error::BlowUp { t: traj.final_time(), max_slope: last, partial: Box::new(traj) });
    }
    Ok(traj)
}
