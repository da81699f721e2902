use serde::{Deserialize, Serialize};

use super::blocks::{BlockDecomposition, BlockKind};
use crate::error::{Error, Result};
use crate::par::Execution;
use crate::spectral::{lp_norm_unchecked, GridFunction};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    Besov,
    TriebelLizorkin,
    Sobolev,
}

/// Selects one of the function-space norms.
///
/// `q` is the inner summability index (`r` for Besov); `f64::INFINITY`
/// selects the supremum. Sobolev ignores `p`, `q` and `homogeneous`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpaceParams {
    pub family: Family,
    pub s: f64,
    pub p: f64,
    pub q: f64,
    pub homogeneous: bool,
}

impl SpaceParams {
    pub fn besov(s: f64, p: f64, q: f64) -> Self {
        SpaceParams { family: Family::Besov, s, p, q, homogeneous: false }
    }

    pub fn triebel_lizorkin(s: f64, p: f64, q: f64) -> Self {
        SpaceParams { family: Family::TriebelLizorkin, s, p, q, homogeneous: false }
    }

    pub fn homogeneous_triebel_lizorkin(s: f64, p: f64, q: f64) -> Self {
        SpaceParams { homogeneous: true, ..Self::triebel_lizorkin(s, p, q) }
    }

    pub fn sobolev(s: f64) -> Self {
        SpaceParams { family: Family::Sobolev, s, p: 2.0, q: 2.0, homogeneous: false }
    }

    /// Same family and indices at another regularity.
    pub fn with_s(self, s: f64) -> Self {
        SpaceParams { s, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.s.is_finite() {
            return Err(Error::invalid(format!("regularity s must be finite, got {}", self.s)));
        }
        if self.family == Family::Sobolev {
            return Ok(());
        }
        if !(self.p > 1.0 && self.p.is_finite()) {
            return Err(Error::invalid(format!("p must be in (1, inf), got {}", self.p)));
        }
        if !(self.q > 1.0) {
            return Err(Error::invalid(format!("q must be in (1, inf], got {}", self.q)));
        }
        Ok(())
    }

    /// Message when `s <= max(3/2, 1 + 1/p)`, the range where the
    /// well-posedness theory does not apply. Not an error.
    pub fn well_posedness_warning(&self) -> Option<String> {
        let p = if self.family == Family::Sobolev { 2.0 } else { self.p };
        let threshold = f64::max(1.5, 1.0 + 1.0 / p);
        (self.s <= threshold).then(|| format!("s = {} does not exceed max(3/2, 1 + 1/p) = {threshold}", self.s))
    }

    pub fn norm(&self, f: &GridFunction) -> Result<f64> {
        self.norm_with(f, Execution::default())
    }

    pub fn norm_with(&self, f: &GridFunction, exec: Execution) -> Result<f64> {
        self.validate()?;
        Ok(match self.family {
            Family::Sobolev => sobolev_norm(f, self.s),
            _ => {
                let kind = if self.homogeneous { BlockKind::Homogeneous } else { BlockKind::Inhomogeneous };
                self.norm_of(&BlockDecomposition::with(f, kind, exec))?
            }
        })
    }

    /// Norm from a precomputed decomposition of matching kind.
    pub fn norm_of(&self, d: &BlockDecomposition) -> Result<f64> {
        self.validate()?;
        let want = if self.homogeneous { BlockKind::Homogeneous } else { BlockKind::Inhomogeneous };
        if d.kind() != want {
            return Err(Error::invalid("decomposition kind does not match the norm"));
        }
        Ok(match self.family {
            Family::Besov => besov_from_blocks(d, self.s, self.p, self.q),
            Family::TriebelLizorkin => tl_from_blocks(d, self.s, self.p, self.q),
            Family::Sobolev => {
                return Err(Error::invalid("the Sobolev norm is computed from the spectrum"));
            }
        })
    }
}

fn check_pq(p: f64, q: f64) -> Result<()> {
    SpaceParams::besov(0.0, p, q).validate()
}

fn combine(terms: impl Iterator<Item = f64>, q: f64) -> f64 {
    if q.is_infinite() {
        terms.fold(0.0, f64::max)
    } else {
        terms.map(|t| t.powf(q)).sum::<f64>().powf(1.0 / q)
    }
}

fn besov_from_blocks(d: &BlockDecomposition, s: f64, p: f64, q: f64) -> f64 {
    let dx = d.block(d.first_index()).map(|b| b.grid().dx()).unwrap_or(1.0);
    combine(d.iter().map(|(j, b)| 2f64.powf(s * j as f64) * lp_norm_unchecked(b.values(), p, dx)), q)
}

// Inhomogeneous TL: the j = -1 block (= S_0 f) carries weight 1, not 2^{-s}.
fn tl_from_blocks(d: &BlockDecomposition, s: f64, p: f64, q: f64) -> f64 {
    let first = d.block(d.first_index()).expect("decomposition has blocks");
    let grid = first.grid();
    let inhomogeneous = d.kind() == BlockKind::Inhomogeneous;
    let weight = |j: i32| if inhomogeneous && j == -1 { 1.0 } else { 2f64.powf(s * j as f64) };
    let mut acc = vec![0.0; grid.n()];
    for (j, b) in d.iter() {
        let w = weight(j);
        if q.is_infinite() {
            for (a, v) in acc.iter_mut().zip(b.values()) {
                *a = f64::max(*a, w * v.abs());
            }
        } else {
            for (a, v) in acc.iter_mut().zip(b.values()) {
                *a += (w * v.abs()).powf(q);
            }
        }
    }
    if q.is_finite() {
        for a in acc.iter_mut() {
            *a = a.powf(1.0 / q);
        }
    }
    lp_norm_unchecked(&acc, p, grid.dx())
}

/// Inhomogeneous Besov norm `B^s_{p,q}`.
pub fn besov_norm(f: &GridFunction, s: f64, p: f64, q: f64) -> Result<f64> {
    check_pq(p, q)?;
    Ok(besov_from_blocks(&BlockDecomposition::new(f), s, p, q))
}

/// Triebel-Lizorkin norm `F^s_{p,q}` (homogeneous variant drops the mean and
/// sums over all integer scales).
pub fn triebel_lizorkin_norm(f: &GridFunction, s: f64, p: f64, q: f64, homogeneous: bool) -> Result<f64> {
    check_pq(p, q)?;
    let d = if homogeneous { BlockDecomposition::homogeneous(f) } else { BlockDecomposition::new(f) };
    Ok(tl_from_blocks(&d, s, p, q))
}

/// `H^s` norm from the spectrum, `(2L sum (1+k^2)^s |c_k|^2)^{1/2}`.
pub fn sobolev_norm(f: &GridFunction, s: f64) -> f64 {
    let spec = f.spectrum();
    let sum: f64 =
        spec.coeffs().iter().zip(f.grid().wavenumbers()).map(|(c, &k)| (1.0 + k * k).powf(s) * c.norm_sqr()).sum();
    (f.grid().length() * sum).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{lp_norm, Grid};
    use std::f64::consts::PI;

    fn ladder() -> (Grid, GridFunction) {
        let g = Grid::new(10.0 * PI, 256).unwrap();
        let f = GridFunction::from_fn(&g, |x| (2.8 * x).sin());
        (g, f)
    }

    #[test]
    fn zero_field() {
        let g = Grid::new(32.0, 128).unwrap();
        let z = GridFunction::zeros(&g);
        assert_eq!(besov_norm(&z, 2.0, 2.0, 2.0).unwrap(), 0.0);
        assert_eq!(triebel_lizorkin_norm(&z, 2.0, 3.0, 2.0, false).unwrap(), 0.0);
        assert_eq!(sobolev_norm(&z, 1.0), 0.0);
    }

    #[test]
    fn single_block_closed_forms() {
        let (g, f) = ladder();
        let root_l = g.half_length().sqrt();
        for s in [-1.0, 0.5, 2.0, 3.0] {
            let b = besov_norm(&f, s, 2.0, f64::INFINITY).unwrap();
            assert!((b - 2f64.powf(s) * root_l).abs() < 1e-10 * b.max(1.0));
            let b2 = besov_norm(&f, s, 2.0, 2.0).unwrap();
            assert!((b2 - b).abs() < 1e-10 * b.max(1.0));
            for p in [1.5, 2.0, 3.0] {
                let tl = triebel_lizorkin_norm(&f, s, p, 2.0, false).unwrap();
                let want = 2f64.powf(s) * lp_norm(&f, p).unwrap();
                assert!((tl - want).abs() < 1e-10 * want, "s={s} p={p}");
            }
        }
    }

    #[test]
    fn sobolev_examples() {
        let (_, f) = ladder();
        let l = 10.0 * PI;
        for s in [0.0, 1.0, 2.5] {
            let want = (1.0 + 2.8f64 * 2.8).powf(s / 2.0) * l.sqrt();
            assert!((sobolev_norm(&f, s) - want).abs() < 1e-10 * want);
        }
        let g = Grid::new(32.0, 512).unwrap();
        let h = GridFunction::from_fn(&g, |x| (-(x - 0.3).powi(2)).exp() * (1.0 + x.sin()));
        assert!((sobolev_norm(&h, 0.0) - lp_norm(&h, 2.0).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn homogeneity_and_validation() {
        let (_, f) = ladder();
        let two = f.scale(2.0);
        let a = besov_norm(&f, 1.5, 2.0, 2.0).unwrap();
        assert!((besov_norm(&two, 1.5, 2.0, 2.0).unwrap() - 2.0 * a).abs() < 1e-12 * a);
        assert!(besov_norm(&f, 1.0, 1.0, 2.0).is_err());
        assert!(triebel_lizorkin_norm(&f, 1.0, 2.0, 0.5, false).is_err());
        assert!(SpaceParams::triebel_lizorkin(2.0, 2.0, 2.0).well_posedness_warning().is_none());
        assert!(SpaceParams::triebel_lizorkin(1.2, 2.0, 2.0).well_posedness_warning().is_some());
        assert!(SpaceParams::besov(1.8, 1.1, 2.0).well_posedness_warning().is_some());
    }

    #[test]
    fn params_dispatch_matches_free_functions() {
        let g = Grid::new(32.0, 512).unwrap();
        let f = GridFunction::from_fn(&g, |x| (-(x * x) / 2.0).exp());
        let p = SpaceParams::triebel_lizorkin(2.0, 3.0, f64::INFINITY);
        assert_eq!(p.norm(&f).unwrap(), triebel_lizorkin_norm(&f, 2.0, 3.0, f64::INFINITY, false).unwrap());
        assert_eq!(SpaceParams::sobolev(1.0).norm(&f).unwrap(), sobolev_norm(&f, 1.0));
    }
}
