//! Littlewood-Paley decomposition and the function-space norms built on it.

mod blocks;
mod bony;
mod cutoff;
pub mod harness;
mod norms;

pub use blocks::{
    dyadic_block, homogeneous_block, low_freq, max_block_index, min_homogeneous_index, BlockDecomposition, BlockKind,
};
pub use bony::{bony_parts, BonyParts};
pub use cutoff::{make_cutoffs, plateau_bump, smooth_step, CutoffPair};
pub use harness::{verify_commutator, verify_moser, verify_product_law, HarnessReport, ProductLawRatios};
pub use norms::{besov_norm, sobolev_norm, triebel_lizorkin_norm, Family, SpaceParams};
