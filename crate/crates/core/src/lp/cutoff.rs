/// `exp(-1/t)` for `t > 0`, zero otherwise.
fn flat_exp(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

/// C-infinity step: 0 for `t <= 0`, 1 for `t >= 1`, strictly increasing between.
pub fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if t >= 1.0 {
        return 1.0;
    }
    let a = flat_exp(t);
    a / (a + flat_exp(1.0 - t))
}

/// Radial bump equal to 1 on `|xi| <= inner` and 0 on `|xi| >= outer`.
pub fn plateau_bump(xi: f64, inner: f64, outer: f64) -> f64 {
    smooth_step((outer - xi.abs()) / (outer - inner))
}

pub const THETA_PLATEAU: f64 = 3.0 / 4.0;
pub const THETA_SUPPORT: f64 = 4.0 / 3.0;

/// The Littlewood-Paley cutoff pair.
///
/// `theta` is 1 on `|xi| <= 3/4` and vanishes for `|xi| >= 4/3`;
/// `phi(xi) = theta(xi/2) - theta(xi)` is then supported in
/// `3/4 <= |xi| <= 8/3`, equals 1 on `4/3 <= |xi| <= 3/2`, and
/// `theta(xi) + sum_{j>=0} phi(2^-j xi) = 1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CutoffPair;

pub fn make_cutoffs() -> CutoffPair {
    CutoffPair
}

impl CutoffPair {
    pub fn theta(&self, xi: f64) -> f64 {
        plateau_bump(xi, THETA_PLATEAU, THETA_SUPPORT)
    }

    pub fn phi(&self, xi: f64) -> f64 {
        self.theta(xi / 2.0) - self.theta(xi)
    }

    /// Symbol of the inhomogeneous block `Delta_j`.
    pub fn block_symbol(&self, j: i32, xi: f64) -> f64 {
        match j {
            j if j <= -2 => 0.0,
            -1 => self.theta(xi),
            j => self.phi(xi / 2f64.powi(j)),
        }
    }

    /// Symbol of the homogeneous block, defined for every integer `j`.
    pub fn homogeneous_symbol(&self, j: i32, xi: f64) -> f64 {
        self.phi(xi / 2f64.powi(j))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plateau_and_support() {
        let c = make_cutoffs();
        assert_eq!(c.theta(0.5), 1.0);
        assert_eq!(c.theta(0.75), 1.0);
        assert_eq!(c.theta(2.0), 0.0);
        assert_eq!(c.theta(4.0 / 3.0), 0.0);
        let mid = c.theta(1.0);
        assert!(mid > 0.0 && mid < 1.0);
        let mut prev = 1.0;
        for i in 0..=200 {
            let xi = 0.75 + (4.0 / 3.0 - 0.75) * i as f64 / 200.0;
            let v = c.theta(xi);
            assert!(v <= prev && (0.0..=1.0).contains(&v));
            prev = v;
        }
        assert_eq!(c.theta(-0.5), 1.0);
    }

    #[test]
    fn phi_support_and_plateau() {
        let c = make_cutoffs();
        for i in 0..=1000 {
            let xi = 4.0 * i as f64 / 1000.0;
            let v = c.phi(xi);
            if !(0.75..=8.0 / 3.0).contains(&xi) {
                assert_eq!(v, 0.0, "xi={xi}");
            }
            if (4.0 / 3.0..=1.5).contains(&xi) {
                assert_eq!(v, 1.0, "xi={xi}");
            }
            assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn block_symbols() {
        let c = make_cutoffs();
        assert_eq!(c.block_symbol(-3, 0.0), 0.0);
        assert_eq!(c.block_symbol(-1, 0.0), 1.0);
        assert_eq!(c.block_symbol(1, 2.8), 1.0);
        assert_eq!(c.block_symbol(0, 2.8), 0.0);
        assert_eq!(c.block_symbol(2, 2.8), 0.0);
    }
}
