use super::cutoff::{make_cutoffs, THETA_PLATEAU, THETA_SUPPORT};
use crate::par::Execution;
use crate::spectral::{Grid, GridFunction, SpectralField};

/// Largest inhomogeneous block index kept on `grid`.
///
/// `ceil(log2(k_nyq * (4/3) / (3/4)))`; every block above it vanishes on the
/// grid, so truncating there is exact.
pub fn max_block_index(grid: &Grid) -> i32 {
    (grid.k_nyquist() * THETA_SUPPORT / THETA_PLATEAU).log2().ceil() as i32
}

/// Smallest homogeneous block index that can see the lowest nonzero mode.
pub fn min_homogeneous_index(grid: &Grid) -> i32 {
    (grid.wavenumber_spacing() / THETA_SUPPORT).log2().floor() as i32
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockKind {
    /// `Delta_{-1} = theta(D)`, `Delta_j = phi(2^-j D)` for `j >= 0`.
    Inhomogeneous,
    /// `Delta_j = phi(2^-j D)` for all `j`; the mean is dropped.
    Homogeneous,
}

/// All nonvanishing dyadic blocks of a field.
#[derive(Clone, Debug)]
pub struct BlockDecomposition {
    kind: BlockKind,
    first: i32,
    blocks: Vec<GridFunction>,
}

fn block_from_spectrum(spec: &SpectralField, symbol: impl Fn(f64) -> f64) -> GridFunction {
    let mut s = spec.clone();
    s.apply_real(symbol);
    s.to_real()
}

impl BlockDecomposition {
    pub fn new(f: &GridFunction) -> Self {
        Self::with(f, BlockKind::Inhomogeneous, Execution::default())
    }

    pub fn homogeneous(f: &GridFunction) -> Self {
        Self::with(f, BlockKind::Homogeneous, Execution::default())
    }

    pub fn with(f: &GridFunction, kind: BlockKind, exec: Execution) -> Self {
        let grid = f.grid();
        let cut = make_cutoffs();
        let first = match kind {
            BlockKind::Inhomogeneous => -1,
            BlockKind::Homogeneous => min_homogeneous_index(grid),
        };
        let indices: Vec<i32> = (first..=max_block_index(grid)).collect();
        let spec = f.spectrum();
        let blocks = exec.map(&indices, |&j| match kind {
            BlockKind::Inhomogeneous => block_from_spectrum(&spec, |k| cut.block_symbol(j, k)),
            BlockKind::Homogeneous => block_from_spectrum(&spec, |k| cut.homogeneous_symbol(j, k)),
        });
        BlockDecomposition { kind, first, blocks }
    }

    pub fn kind(&self) -> BlockKind {
        self.kind
    }

    pub fn first_index(&self) -> i32 {
        self.first
    }

    pub fn last_index(&self) -> i32 {
        self.first + self.blocks.len() as i32 - 1
    }

    pub fn indices(&self) -> std::ops::RangeInclusive<i32> {
        self.first..=self.last_index()
    }

    /// Block `j`, or `None` when it is identically zero by construction.
    pub fn block(&self, j: i32) -> Option<&GridFunction> {
        if j < self.first {
            return None;
        }
        self.blocks.get((j - self.first) as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, &GridFunction)> {
        self.blocks.iter().enumerate().map(move |(i, b)| (self.first + i as i32, b))
    }

    /// Sum of all blocks.
    pub fn reconstruct(&self) -> GridFunction {
        let grid = self.blocks[0].grid();
        let mut acc = vec![0.0; grid.n()];
        for b in &self.blocks {
            for (a, v) in acc.iter_mut().zip(b.values()) {
                *a += v;
            }
        }
        GridFunction::from_vec_unchecked(grid, acc)
    }

    /// Partial sum `S_j = sum_{q <= j-1} Delta_q`.
    pub fn low_freq(&self, j: i32) -> GridFunction {
        let grid = self.blocks[0].grid();
        let mut acc = vec![0.0; grid.n()];
        for (q, b) in self.iter() {
            if q > j - 1 {
                break;
            }
            for (a, v) in acc.iter_mut().zip(b.values()) {
                *a += v;
            }
        }
        GridFunction::from_vec_unchecked(grid, acc)
    }
}

/// `Delta_j f`; zero for `j <= -2`.
pub fn dyadic_block(j: i32, f: &GridFunction) -> GridFunction {
    if j <= -2 || j > max_block_index(f.grid()) {
        return GridFunction::zeros(f.grid());
    }
    let cut = make_cutoffs();
    block_from_spectrum(&f.spectrum(), |k| cut.block_symbol(j, k))
}

/// Homogeneous `Delta_j f` for any integer `j`.
pub fn homogeneous_block(j: i32, f: &GridFunction) -> GridFunction {
    let cut = make_cutoffs();
    block_from_spectrum(&f.spectrum(), |k| cut.homogeneous_symbol(j, k))
}

/// `S_j f = sum_{-1 <= q <= j-1} Delta_q f`, applied as the single multiplier
/// `theta(2^-j D)` (telescoped partition of unity). Zero for `j <= -1`.
pub fn low_freq(j: i32, f: &GridFunction) -> GridFunction {
    if j <= -1 {
        return GridFunction::zeros(f.grid());
    }
    if j > max_block_index(f.grid()) {
        return f.clone();
    }
    let cut = make_cutoffs();
    let scale = 2f64.powi(j);
    block_from_spectrum(&f.spectrum(), |k| cut.theta(k / scale))
}
