//! Recorded solver output and its CSV / binary export.

use std::io::{Read, Write};

use serde::Serialize;

use super::equation::h1_energy;
use crate::error::{Error, Result};
use crate::lp::SpaceParams;
use crate::report::fmt_f64;
use crate::spectral::{derivative, Grid, GridFunction};

const MAGIC: &[u8; 8] = b"NVTRAJ01";

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Diagnostics {
    /// `int u^2 + u_x^2`.
    pub h1_sq: f64,
    pub max_u: f64,
    pub max_ux: f64,
}

impl Diagnostics {
    pub fn of(u: &GridFunction) -> Self {
        Diagnostics { h1_sq: h1_energy(u), max_u: u.max_abs(), max_ux: derivative(u).max_abs() }
    }
}

/// Time-indexed states of one run.
///
/// When `rates` is non-empty it holds `du/dt` at every recorded time, which
/// enables cubic Hermite interpolation between samples.
#[derive(Clone, Debug)]
pub struct Trajectory {
    grid: Grid,
    times: Vec<f64>,
    states: Vec<GridFunction>,
    diagnostics: Vec<Diagnostics>,
    rates: Vec<GridFunction>,
}

impl Trajectory {
    pub fn new(grid: &Grid) -> Self {
        Trajectory { grid: grid.clone(), times: vec![], states: vec![], diagnostics: vec![], rates: vec![] }
    }

    /// A trajectory that stays at `u` for all times in `[0, t_end]`.
    pub fn constant(u: &GridFunction, t_end: f64) -> Self {
        let mut tr = Trajectory::new(u.grid());
        let zero = GridFunction::zeros(u.grid());
        tr.push_with_rate(0.0, u.clone(), zero.clone());
        if t_end > 0.0 {
            tr.push_with_rate(t_end, u.clone(), zero);
        }
        tr
    }

    pub(crate) fn push(&mut self, t: f64, u: GridFunction) {
        debug_assert!(self.times.last().is_none_or(|&last| t > last));
        self.diagnostics.push(Diagnostics::of(&u));
        self.times.push(t);
        self.states.push(u);
    }

    pub(crate) fn push_rate(&mut self, rate: GridFunction) {
        self.rates.push(rate);
    }

    pub(crate) fn push_with_rate(&mut self, t: f64, u: GridFunction, rate: GridFunction) {
        self.push(t, u);
        self.rates.push(rate);
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[GridFunction] {
        &self.states
    }

    pub fn diagnostics(&self) -> &[Diagnostics] {
        &self.diagnostics
    }

    pub fn rates(&self) -> &[GridFunction] {
        &self.rates
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_time(&self) -> f64 {
        self.times.last().copied().unwrap_or(0.0)
    }

    pub fn final_state(&self) -> &GridFunction {
        self.states.last().expect("trajectory is non-empty")
    }

    /// State recorded at `t` (exact match up to 1e-12 relative).
    pub fn state_at(&self, t: f64) -> Option<&GridFunction> {
        let tol = 1e-12 * t.abs().max(1.0);
        self.times.iter().position(|&s| (s - t).abs() <= tol).map(|i| &self.states[i])
    }

    /// State at an arbitrary `t` inside the recorded range: cubic Hermite
    /// interpolation when rates are stored, linear otherwise. Times outside
    /// the range are clamped.
    pub fn interpolate(&self, t: f64) -> GridFunction {
        assert!(!self.is_empty(), "cannot interpolate an empty trajectory");
        let n = self.times.len();
        if n == 1 || t <= self.times[0] {
            return self.states[0].clone();
        }
        if t >= self.times[n - 1] {
            return self.states[n - 1].clone();
        }
        let i = self.times.partition_point(|&s| s <= t) - 1;
        let (t0, t1) = (self.times[i], self.times[i + 1]);
        let h = t1 - t0;
        let s = (t - t0) / h;
        if s == 0.0 {
            return self.states[i].clone();
        }
        let (u0, u1) = (&self.states[i], &self.states[i + 1]);
        if self.rates.len() == n {
            let (d0, d1) = (&self.rates[i], &self.rates[i + 1]);
            let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
            let h10 = s * (1.0 - s) * (1.0 - s);
            let h01 = s * s * (3.0 - 2.0 * s);
            let h11 = s * s * (s - 1.0);
            let vals = (0..u0.values().len())
                .map(|j| {
                    h00 * u0.values()[j] + h * h10 * d0.values()[j] + h01 * u1.values()[j] + h * h11 * d1.values()[j]
                })
                .collect();
            GridFunction::from_vec_unchecked(&self.grid, vals)
        } else {
            u0.zip_map(u1, |a, b| (1.0 - s) * a + s * b)
        }
    }

    /// Norm of every recorded state.
    pub fn norm_series(&self, params: &SpaceParams) -> Result<Vec<f64>> {
        self.states.iter().map(|u| params.norm(u)).collect()
    }

    /// Rows `t,h1_sq,max_u,max_ux[,label...]`, one per recorded time.
    pub fn write_csv<W: Write>(&self, mut w: W, norms: &[(String, SpaceParams)]) -> Result<()> {
        let series: Vec<Vec<f64>> = norms.iter().map(|(_, p)| self.norm_series(p)).collect::<Result<_>>()?;
        write!(w, "t,h1_sq,max_u,max_ux")?;
        for (label, _) in norms {
            write!(w, ",{label}")?;
        }
        writeln!(w)?;
        for (i, (t, d)) in self.times.iter().zip(&self.diagnostics).enumerate() {
            write!(w, "{},{},{},{}", fmt_f64(*t), fmt_f64(d.h1_sq), fmt_f64(d.max_u), fmt_f64(d.max_ux))?;
            for s in &series {
                write!(w, ",{}", fmt_f64(s[i]))?;
            }
            writeln!(w)?;
        }
        Ok(())
    }

    /// Binary dump: `NVTRAJ01`, `L: f64`, `N: u64`, `count: u64`, then per
    /// state `t: f64` and `N` samples, all little-endian.
    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&self.grid.half_length().to_le_bytes())?;
        w.write_all(&(self.grid.n() as u64).to_le_bytes())?;
        w.write_all(&(self.times.len() as u64).to_le_bytes())?;
        for (t, u) in self.times.iter().zip(&self.states) {
            w.write_all(&t.to_le_bytes())?;
            for v in u.values() {
                w.write_all(&v.to_le_bytes())?;
            }
        }
        Ok(())
    }

    /// Reads a dump written by [`Trajectory::write_binary`]; diagnostics are
    /// recomputed.
    pub fn read_binary<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(Error::Format("bad magic".into()));
        }
        let mut b = [0u8; 8];
        let mut next = |r: &mut R| -> Result<[u8; 8]> {
            r.read_exact(&mut b).map_err(|e| Error::Format(format!("truncated: {e}")))?;
            Ok(b)
        };
        let l = f64::from_le_bytes(next(&mut r)?);
        let n = u64::from_le_bytes(next(&mut r)?) as usize;
        let count = u64::from_le_bytes(next(&mut r)?) as usize;
        let grid = Grid::new(l, n).map_err(|e| Error::Format(e.to_string()))?;
        let mut tr = Trajectory::new(&grid);
        for _ in 0..count {
            let t = f64::from_le_bytes(next(&mut r)?);
            if tr.times.last().is_some_and(|&last| t <= last) {
                return Err(Error::Format("times are not increasing".into()));
            }
            let mut vals = Vec::with_capacity(n);
            for _ in 0..n {
                vals.push(f64::from_le_bytes(next(&mut r)?));
            }
            tr.push(t, GridFunction::new(&grid, vals).map_err(|e| Error::Format(e.to_string()))?);
        }
        Ok(tr)
    }
}
