use super::blocks::BlockDecomposition;
use crate::spectral::GridFunction;

/// Paraproduct split `uv = T_u v + T_v u + R(u, v)`.
#[derive(Clone, Debug)]
pub struct BonyParts {
    /// `T_u v = sum_j S_{j-1} u * Delta_j v`
    pub t_u_v: GridFunction,
    /// `T_v u = sum_j S_{j-1} v * Delta_j u`
    pub t_v_u: GridFunction,
    /// `R(u, v) = sum_{|j-k| <= 1} Delta_j u * Delta_k v`
    pub remainder: GridFunction,
}

impl BonyParts {
    pub fn sum(&self) -> GridFunction {
        &(&self.t_u_v + &self.t_v_u) + &self.remainder
    }
}

fn paraproduct(low: &BlockDecomposition, high: &BlockDecomposition) -> Vec<f64> {
    let n = high.block(-1).map_or(0, |b| b.values().len());
    let mut acc = vec![0.0; n];
    // running S_{j-1} of the low-frequency factor
    let mut partial = vec![0.0; n];
    for (j, hb) in high.iter() {
        if let Some(lb) = low.block(j - 2) {
            for (p, v) in partial.iter_mut().zip(lb.values()) {
                *p += v;
            }
        }
        for ((a, p), h) in acc.iter_mut().zip(&partial).zip(hb.values()) {
            *a += p * h;
        }
    }
    acc
}

pub fn bony_parts(u: &GridFunction, v: &GridFunction) -> BonyParts {
    let du = BlockDecomposition::new(u);
    let dv = BlockDecomposition::new(v);
    let grid = u.grid();
    let n = grid.n();
    let t_u_v = paraproduct(&du, &dv);
    let t_v_u = paraproduct(&dv, &du);
    let mut rem = vec![0.0; n];
    for (j, ub) in du.iter() {
        for k in j - 1..=j + 1 {
            if let Some(vb) = dv.block(k) {
                for ((r, a), b) in rem.iter_mut().zip(ub.values()).zip(vb.values()) {
                    *r += a * b;
                }
            }
        }
    }
    BonyParts {
        t_u_v: GridFunction::from_vec_unchecked(grid, t_u_v),
        t_v_u: GridFunction::from_vec_unchecked(grid, t_v_u),
        remainder: GridFunction::from_vec_unchecked(grid, rem),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::dyadic_block;
    use crate::spectral::Grid;
    use std::f64::consts::PI;

    #[test]
    fn zero_factor() {
        let g = Grid::new(32.0, 256).unwrap();
        let z = GridFunction::zeros(&g);
        let v = GridFunction::from_fn(&g, |x| (-(x * x)).exp());
        let parts = bony_parts(&z, &v);
        assert_eq!(parts.t_u_v.max_abs(), 0.0);
        assert_eq!(parts.t_v_u.max_abs(), 0.0);
        assert_eq!(parts.remainder.max_abs(), 0.0);
    }

    #[test]
    fn sine_squared() {
        let g = Grid::new(10.0 * PI, 256).unwrap();
        let u = GridFunction::from_fn(&g, |x| (2.8 * x).sin());
        let parts = bony_parts(&u, &u);
        assert!((&parts.sum() - &u.mul(&u)).max_abs() < 1e-12);
        // single block at j = 1: everything lands in the remainder
        assert!(parts.t_u_v.max_abs() < 1e-13);
    }

    #[test]
    fn constant_factor() {
        let g = Grid::new(32.0, 512).unwrap();
        let c = GridFunction::constant(&g, 1.7);
        let v = GridFunction::from_fn(&g, |x| (-(x * x) / 3.0).exp() * (2.0 * x).cos());
        let parts = bony_parts(&c, &v);
        assert!(parts.t_v_u.max_abs() < 1e-14);
        let expect_r = &(&dyadic_block(-1, &v) + &dyadic_block(0, &v)) * 1.7;
        assert!((&parts.remainder - &expect_r).max_abs() < 1e-12);
        assert!((&parts.sum() - &v.scale(1.7)).max_abs() < 1e-12);
    }
}
