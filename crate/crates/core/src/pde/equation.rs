//! Right-hand sides of the nonlocal CH/DP/NE forms.
//!
//! Everything is evaluated in spectral space. A real pair `(a, b)` is packed
//! into one complex FFT as `a + i b` and separated afterwards, so the NE
//! right-hand side costs three transforms and CH/DP two.

use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{
    check_fraction, forward_in_place, helmholtz_symbol, inverse_in_place, Grid, GridFunction, SpectralField,
};

/// Dealias fraction for cubic nonlinearities.
pub const DEFAULT_DEALIAS: f64 = 0.5;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EquationKind {
    /// Camassa-Holm.
    Ch,
    /// Degasperis-Procesi.
    Dp,
    /// Novikov.
    #[default]
    Ne,
}

impl EquationKind {
    /// Transport speed for the CFL bound: `max|u|^2` for NE, `max|u|` otherwise.
    pub fn advection_speed(self, max_u: f64) -> f64 {
        match self {
            EquationKind::Ne => max_u * max_u,
            _ => max_u,
        }
    }

    /// Whether `int u^2 + u_x^2` is a conserved quantity.
    pub fn conserves_h1(self) -> bool {
        self != EquationKind::Dp
    }

    pub fn name(self) -> &'static str {
        match self {
            EquationKind::Ch => "ch",
            EquationKind::Dp => "dp",
            EquationKind::Ne => "ne",
        }
    }
}

impl FromStr for EquationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ch" => Ok(EquationKind::Ch),
            "dp" => Ok(EquationKind::Dp),
            "ne" | "novikov" => Ok(EquationKind::Ne),
            other => Err(Error::invalid(format!("unknown equation '{other}' (expected ch, dp or ne)"))),
        }
    }
}

impl std::fmt::Display for EquationKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Sup norms of `u` and `u_x` seen while evaluating a right-hand side.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub(crate) struct StageInfo {
    pub max_u: f64,
    pub max_ux: f64,
}

/// Which terms of the right-hand side to assemble.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Terms {
    Full,
    /// Only `P(u)`, without the local transport term.
    Nonlocal,
}

/// Reusable evaluator of the spectral right-hand side.
pub(crate) struct Rhs {
    grid: Grid,
    eq: EquationKind,
    cutoff: f64,
    work: Vec<Complex64>,
    pair: Vec<Complex64>,
    single: Vec<Complex64>,
}

// Separates the transforms of two real signals packed as a + i b.
#[inline]
fn unpack(z: &[Complex64], i: usize) -> (Complex64, Complex64) {
    let n = z.len();
    let zc = z[(n - i) % n].conj();
    let a = (z[i] + zc) * 0.5;
    let b = (z[i] - zc) * Complex64::new(0.0, -0.5);
    (a, b)
}

impl Rhs {
    pub fn new(grid: &Grid, eq: EquationKind, fraction: f64) -> Result<Self> {
        check_fraction(fraction)?;
        let n = grid.n();
        let zero = Complex64::new(0.0, 0.0);
        Ok(Rhs {
            grid: grid.clone(),
            eq,
            cutoff: fraction * grid.k_nyquist(),
            work: vec![zero; n],
            pair: vec![zero; n],
            single: vec![zero; n],
        })
    }

    /// Writes the transform of the right-hand side for state `uh` into `out`.
    pub fn eval(&mut self, uh: &[Complex64], out: &mut [Complex64], terms: Terms) -> StageInfo {
        let grid = &self.grid;
        let ks = grid.wavenumbers();
        let nyq = grid.n() / 2;
        // u + i u_x in one inverse transform
        for (i, (w, (&c, &k))) in self.work.iter_mut().zip(uh.iter().zip(ks)).enumerate() {
            let ik = if i == nyq { 0.0 } else { k };
            *w = c + Complex64::new(0.0, 1.0) * Complex64::new(0.0, ik) * c;
        }
        inverse_in_place(grid, &mut self.work);

        let mut info = StageInfo::default();
        for z in &self.work {
            info.max_u = info.max_u.max(z.re.abs());
            info.max_ux = info.max_ux.max(z.im.abs());
        }

        // pair = (local, helmholtz-smoothed) products, single = flux under d_x Lambda^-2
        for ((p, s), z) in self.pair.iter_mut().zip(self.single.iter_mut()).zip(&self.work) {
            let (u, ux) = (z.re, z.im);
            let (local, smooth, flux) = match self.eq {
                EquationKind::Ne => (u * u * ux, ux * ux * ux, 1.5 * u * ux * ux + u * u * u),
                EquationKind::Ch => (u * ux, 0.0, u * u + 0.5 * ux * ux),
                EquationKind::Dp => (u * ux, 0.0, 1.5 * u * u),
            };
            if self.eq == EquationKind::Ne {
                *p = Complex64::new(local, smooth);
                *s = Complex64::new(flux, 0.0);
            } else {
                *p = Complex64::new(local, flux);
            }
        }
        forward_in_place(grid, &mut self.pair);
        if self.eq == EquationKind::Ne {
            forward_in_place(grid, &mut self.single);
        }

        let local_sign = if terms == Terms::Full { -1.0 } else { 0.0 };
        for (i, (o, &k)) in out.iter_mut().zip(ks).enumerate() {
            if k.abs() > self.cutoff {
                *o = Complex64::new(0.0, 0.0);
                continue;
            }
            let h = helmholtz_symbol(k);
            let ik = Complex64::new(0.0, if i == nyq { 0.0 } else { k });
            *o = match self.eq {
                EquationKind::Ne => {
                    let (local, smooth) = unpack(&self.pair, i);
                    local * local_sign - smooth * (0.5 * h) - ik * self.single[i] * h
                }
                _ => {
                    let (local, flux) = unpack(&self.pair, i);
                    local * local_sign - ik * flux * h
                }
            };
        }
        info
    }

    pub fn eval_field(&mut self, u: &GridFunction, terms: Terms) -> GridFunction {
        let uh = u.spectrum();
        let mut out = vec![Complex64::new(0.0, 0.0); self.grid.n()];
        self.eval(uh.coeffs(), &mut out, terms);
        SpectralField::from_coeffs(&self.grid, out).expect("length matches").to_real()
    }
}

/// `P_1(u) = -1/2 Lambda^{-2} (u_x^3)`, dealiased.
pub fn p1(u: &GridFunction) -> GridFunction {
    let ux = crate::spectral::derivative(u);
    let mut s = ux.map(|v| v * v * v).spectrum();
    let cutoff = DEFAULT_DEALIAS * u.grid().k_nyquist();
    s.apply_real(|k| if k.abs() > cutoff { 0.0 } else { -0.5 * helmholtz_symbol(k) });
    s.to_real()
}

/// `P_2(u) = -d_x Lambda^{-2} (3/2 u u_x^2 + u^3)`, dealiased.
pub fn p2(u: &GridFunction) -> GridFunction {
    let ux = crate::spectral::derivative(u);
    let arg = u.zip_map(&ux, |a, b| 1.5 * a * b * b + a * a * a);
    let mut s = arg.spectrum();
    let cutoff = DEFAULT_DEALIAS * u.grid().k_nyquist();
    s.apply_odd(|k| if k.abs() > cutoff { 0.0 } else { -helmholtz_symbol(k) });
    s.to_real()
}

/// Nonlocal part `P(u)` of the equation (for NE, `p1 + p2`), dealiased.
pub fn nonlocal_part(u: &GridFunction, eq: EquationKind) -> GridFunction {
    Rhs::new(u.grid(), eq, DEFAULT_DEALIAS).expect("default fraction is valid").eval_field(u, Terms::Nonlocal)
}

/// `u_t` for the chosen equation, dealiased with fraction 1/2.
pub fn rhs(u: &GridFunction, eq: EquationKind) -> Result<GridFunction> {
    rhs_with(u, eq, DEFAULT_DEALIAS)
}

pub fn rhs_with(u: &GridFunction, eq: EquationKind, fraction: f64) -> Result<GridFunction> {
    u.check_finite("rhs input")?;
    let out = Rhs::new(u.grid(), eq, fraction)?.eval_field(u, Terms::Full);
    if let Some(i) = out.values().iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { context: "rhs", index: i });
    }
    Ok(out)
}

/// `int u^2 + u_x^2 dx`.
pub fn h1_energy(u: &GridFunction) -> f64 {
    let ux = crate::spectral::derivative(u);
    let s: f64 = u.values().iter().zip(ux.values()).map(|(a, b)| a * a + b * b).sum();
    s * u.grid().dx()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{derivative, dx_helmholtz_inverse};

    fn grid() -> Grid {
        Grid::new(32.0, 1024).unwrap()
    }

    fn bump(g: &Grid) -> GridFunction {
        GridFunction::from_fn(g, |x| 0.6 * (-(x - 0.3).powi(2) / 2.0).exp())
    }

    #[test]
    fn constants_are_steady() {
        let g = grid();
        for eq in [EquationKind::Ch, EquationKind::Dp, EquationKind::Ne] {
            let r = rhs(&GridFunction::constant(&g, 0.8), eq).unwrap();
            assert!(r.max_abs() < 1e-13, "{eq}: {}", r.max_abs());
        }
        assert!(p1(&GridFunction::constant(&g, 2.0)).max_abs() < 1e-13);
        assert!(p2(&GridFunction::constant(&g, 2.0)).max_abs() < 1e-12);
    }

    #[test]
    fn packed_evaluation_matches_direct_formulas() {
        let g = grid();
        let u = bump(&g);
        let ux = derivative(&u);
        let direct_ne = &(&u.mul(&u).mul(&ux) * -1.0) + &(&p1(&u) + &p2(&u));
        let packed = rhs(&u, EquationKind::Ne).unwrap();
        assert!((&packed - &direct_ne).max_abs() < 1e-12);

        let ch_arg = u.zip_map(&ux, |a, b| a * a + 0.5 * b * b);
        let direct_ch = &(&u.mul(&ux) * -1.0) - &dx_helmholtz_inverse(&ch_arg);
        assert!((&rhs(&u, EquationKind::Ch).unwrap() - &direct_ch).max_abs() < 1e-12);

        let direct_dp = &(&u.mul(&ux) * -1.0) - &dx_helmholtz_inverse(&u.map(|a| 1.5 * a * a));
        assert!((&rhs(&u, EquationKind::Dp).unwrap() - &direct_dp).max_abs() < 1e-12);

        let p = nonlocal_part(&u, EquationKind::Ne);
        assert!((&p - &(&p1(&u) + &p2(&u))).max_abs() < 1e-12);
    }

    #[test]
    fn parity_of_nonlocal_terms() {
        let g = grid();
        let odd = GridFunction::from_fn(&g, |x| x * (-x * x).exp());
        let even = GridFunction::from_fn(&g, |x| (-x * x).exp());
        let n = g.n();
        // x_i and x_{N-i} are mirror points; x_0 = -L pairs with itself
        let check = |f: &GridFunction, sign: f64| {
            (1..n).map(|i| (f.values()[i] - sign * f.values()[n - i]).abs()).fold(0.0, f64::max)
        };
        assert!(check(&p1(&odd), 1.0) < 1e-14);
        assert!(check(&p2(&even), -1.0) < 1e-14);
    }

    #[test]
    fn reflection_reverses_time() {
        // u(x, t) -> u(-x, -t) maps solutions to solutions, so the rhs of the
        // mirrored field is minus the mirrored rhs
        let g = grid();
        let u = bump(&g);
        let n = g.n();
        let mirror =
            |f: &GridFunction| GridFunction::new(&g, (0..n).map(|i| f.values()[(n - i) % n]).collect()).unwrap();
        for eq in [EquationKind::Ch, EquationKind::Dp, EquationKind::Ne] {
            let lhs = rhs(&mirror(&u), eq).unwrap();
            let r = mirror(&rhs(&u, eq).unwrap());
            assert!((&lhs + &r).max_abs() < 1e-13, "{eq}");
        }
    }

    #[test]
    fn p1_p2_match_kernel_quadrature() {
        use crate::quadrature::helmholtz_quadrature;
        let g = grid();
        let u = bump(&g);
        let a = |x: f64| 0.6 * (-(x - 0.3).powi(2) / 2.0).exp();
        let ax = |x: f64| -(x - 0.3) * a(x);
        let (pu1, pu2) = (p1(&u), p2(&u));
        for i in [0, 300, 512, 530, 700] {
            let x = g.x(i);
            let e1 = -0.5 * helmholtz_quadrature(|y| ax(y).powi(3), x, 32.0, 256);
            assert!((pu1.values()[i] - e1).abs() < 1e-8, "p1 at i={i}: {} vs {e1}", pu1.values()[i]);
            // d_x (G * h) = G * h'
            let hp = |y: f64| {
                let (v, vx) = (a(y), ax(y));
                let vxx = ((y - 0.3).powi(2) - 1.0) * v;
                1.5 * vx * vx * vx + 3.0 * v * vx * vxx + 3.0 * v * v * vx
            };
            let e2 = -helmholtz_quadrature(hp, x, 32.0, 256);
            assert!((pu2.values()[i] - e2).abs() < 1e-8, "p2 at i={i}");
        }
    }

    #[test]
    fn h1_energy_of_mode() {
        let g = Grid::new(32.0, 256).unwrap();
        let k = 5.0 * g.wavenumber_spacing();
        let u = GridFunction::from_fn(&g, |x| (k * x).sin());
        assert!((h1_energy(&u) - 32.0 * (1.0 + k * k)).abs() < 1e-9);
        assert_eq!(h1_energy(&GridFunction::zeros(&g)), 0.0);
    }

    #[test]
    fn parses_names() {
        assert_eq!("NE".parse::<EquationKind>().unwrap(), EquationKind::Ne);
        assert!("kdv".parse::<EquationKind>().is_err());
        assert_eq!(EquationKind::default(), EquationKind::Ne);
    }
}
