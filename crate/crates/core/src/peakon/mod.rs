//! Peakon profiles and the NE multi-peakon ODE
//! `q_j' = u(q_j)^2`, `p_j' = -u(q_j) u_x(q_j) p_j`, with
//! `u(x) = sum p_j exp(-|x - q_j|)`.
//!
//! `u_x` at a crest uses `sgn(0) = 0`, the average of the one-sided slopes.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::report::fmt_f64;
use crate::spectral::{Grid, GridFunction};

/// Gap below which two peakons count as collided.
pub const COLLISION_GAP: f64 = 1e-8;

/// `sign * sqrt(c) * exp(-|x - c t|)`.
pub fn peakon_profile(c: f64, sign: f64, x: f64, t: f64) -> Result<f64> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::invalid(format!("peakon speed must be positive, got {c}")));
    }
    if sign != 1.0 && sign != -1.0 {
        return Err(Error::invalid(format!("peakon sign must be +1 or -1, got {sign}")));
    }
    Ok(sign * c.sqrt() * (-(x - c * t).abs()).exp())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PeakonState {
    pub t: f64,
    pub q: Vec<f64>,
    pub p: Vec<f64>,
}

fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

impl PeakonState {
    pub fn new(t: f64, q: Vec<f64>, p: Vec<f64>) -> Result<Self> {
        let s = PeakonState { t, q, p };
        s.validate()?;
        Ok(s)
    }

    /// A single NE peakon of speed `c` with crest at `q0`.
    pub fn single(c: f64, q0: f64) -> Result<Self> {
        if !(c > 0.0) {
            return Err(Error::invalid(format!("peakon speed must be positive, got {c}")));
        }
        Self::new(0.0, vec![q0], vec![c.sqrt()])
    }

    pub fn validate(&self) -> Result<()> {
        if self.q.is_empty() || self.q.len() != self.p.len() {
            return Err(Error::invalid(format!(
                "need n >= 1 positions and matching momenta, got {} and {}",
                self.q.len(),
                self.p.len()
            )));
        }
        if !self.t.is_finite() || self.q.iter().chain(&self.p).any(|v| !v.is_finite()) {
            return Err(Error::PeakonNonFinite { t: self.t });
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    /// Strictly increasing positions with all momenta positive.
    pub fn is_ordered_positive(&self) -> bool {
        self.q.windows(2).all(|w| w[0] < w[1]) && self.p.iter().all(|&p| p > 0.0)
    }

    pub fn min_gap(&self) -> f64 {
        self.q.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
    }

    /// Samples `u` on a grid, with the crest kinks resolved only as far as
    /// the grid allows.
    pub fn sample(&self, grid: &Grid) -> GridFunction {
        GridFunction::from_fn(grid, |x| multipeakon_eval(self, x).0)
    }
}

/// `(u(x), u_x(x))` for the multi-peakon ansatz.
pub fn multipeakon_eval(s: &PeakonState, x: f64) -> (f64, f64) {
    let mut u = 0.0;
    let mut ux = 0.0;
    for (&q, &p) in s.q.iter().zip(&s.p) {
        let e = p * (-(x - q).abs()).exp();
        u += e;
        ux -= sgn(x - q) * e;
    }
    (u, ux)
}

/// Right-hand side `(dq, dp)` of the 2n-dimensional system.
pub fn multipeakon_rhs(s: &PeakonState) -> (Vec<f64>, Vec<f64>) {
    let mut dq = Vec::with_capacity(s.len());
    let mut dp = Vec::with_capacity(s.len());
    for (&q, &p) in s.q.iter().zip(&s.p) {
        let (u, ux) = multipeakon_eval(s, q);
        dq.push(u * u);
        dp.push(-u * ux * p);
    }
    (dq, dp)
}

/// Closed form of `int u^2 + u_x^2 dx`: `2 sum_{j,k} p_j p_k exp(-|q_j - q_k|)`.
pub fn multipeakon_h1(s: &PeakonState) -> f64 {
    let mut acc = 0.0;
    for (&qj, &pj) in s.q.iter().zip(&s.p) {
        for (&qk, &pk) in s.q.iter().zip(&s.p) {
            acc += pj * pk * (-(qj - qk).abs()).exp();
        }
    }
    2.0 * acc
}

/// `int u^2 + u_x^2 dx` by composite Gauss-Legendre between the kinks, over
/// `[min q - tail, max q + tail]`.
pub fn multipeakon_h1_quadrature(s: &PeakonState, tail: f64) -> f64 {
    let mut knots: Vec<f64> = s.q.clone();
    knots.sort_by(f64::total_cmp);
    knots.dedup();
    let mut edges = vec![knots[0] - tail];
    edges.extend(&knots);
    edges.push(knots[knots.len() - 1] + tail);
    let f = |x: f64| {
        let (u, ux) = multipeakon_eval(s, x);
        u * u + ux * ux
    };
    edges
        .windows(2)
        .map(|w| {
            let panels = ((w[1] - w[0]) * 4.0).ceil().max(1.0) as usize;
            crate::quadrature::integrate(f, w[0], w[1], panels, 20)
        })
        .sum()
}

/// Output of [`multipeakon_solve`].
#[derive(Clone, Debug)]
pub struct PeakonTrajectory {
    pub states: Vec<PeakonState>,
    /// Closed-form H1 energy at each state.
    pub h1: Vec<f64>,
}

impl PeakonTrajectory {
    pub fn final_state(&self) -> &PeakonState {
        self.states.last().expect("trajectory holds the initial state")
    }

    /// Largest `|H(t) - H(0)| / H(0)`.
    pub fn max_h1_drift(&self) -> f64 {
        let h0 = self.h1[0];
        self.h1.iter().map(|h| (h - h0).abs() / h0.abs()).fold(0.0, f64::max)
    }

    /// Rows `t,q1..qn,p1..pn,h1_sq`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let n = self.states.first().map_or(0, PeakonState::len);
        let mut head = vec!["t".to_string()];
        head.extend((1..=n).map(|j| format!("q{j}")));
        head.extend((1..=n).map(|j| format!("p{j}")));
        head.push("h1_sq".into());
        writeln!(w, "{}", head.join(","))?;
        for (s, h) in self.states.iter().zip(&self.h1) {
            let mut row = vec![fmt_f64(s.t)];
            row.extend(s.q.iter().map(|v| fmt_f64(*v)));
            row.extend(s.p.iter().map(|v| fmt_f64(*v)));
            row.push(fmt_f64(*h));
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }
}

fn shifted(s: &PeakonState, dt: f64, k: &(Vec<f64>, Vec<f64>)) -> PeakonState {
    PeakonState {
        t: s.t + dt,
        q: s.q.iter().zip(&k.0).map(|(q, d)| q + dt * d).collect(),
        p: s.p.iter().zip(&k.1).map(|(p, d)| p + dt * d).collect(),
    }
}

/// Fixed-step RK4 on `[t0, t0 + T]`; every step is kept. Ordered
/// positive-momentum configurations are watched for collisions.
pub fn multipeakon_solve(s0: &PeakonState, t_final: f64, dt: f64) -> Result<PeakonTrajectory> {
    s0.validate()?;
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::invalid(format!("dt must be positive, got {dt}")));
    }
    if !(t_final >= 0.0 && t_final.is_finite()) {
        return Err(Error::invalid(format!("T must be non-negative, got {t_final}")));
    }
    let watch = s0.is_ordered_positive();
    let n = if t_final > 0.0 { crate::pde::step_count(t_final, dt) } else { 0 };
    let h = if n > 0 { t_final / n as f64 } else { 0.0 };
    let mut states = vec![s0.clone()];
    let mut h1 = vec![multipeakon_h1(s0)];
    let mut s = s0.clone();
    for i in 0..n {
        let k1 = multipeakon_rhs(&s);
        let k2 = multipeakon_rhs(&shifted(&s, 0.5 * h, &k1));
        let k3 = multipeakon_rhs(&shifted(&s, 0.5 * h, &k2));
        let k4 = multipeakon_rhs(&shifted(&s, h, &k3));
        let w = h / 6.0;
        let next = PeakonState {
            t: s0.t + (i + 1) as f64 * h,
            q: (0..s.len()).map(|j| s.q[j] + w * (k1.0[j] + 2.0 * (k2.0[j] + k3.0[j]) + k4.0[j])).collect(),
            p: (0..s.len()).map(|j| s.p[j] + w * (k1.1[j] + 2.0 * (k2.1[j] + k3.1[j]) + k4.1[j])).collect(),
        };
        if next.q.iter().chain(&next.p).any(|v| !v.is_finite()) {
            return Err(Error::PeakonNonFinite { t: next.t });
        }
        if watch && s.len() > 1 {
            let gap = next.min_gap();
            if gap < COLLISION_GAP {
                return Err(Error::Collision { t: next.t, gap });
            }
        }
        h1.push(multipeakon_h1(&next));
        states.push(next.clone());
        s = next;
    }
    Ok(PeakonTrajectory { states, h1 })
}
