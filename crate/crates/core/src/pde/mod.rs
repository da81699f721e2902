//! Nonlocal CH/DP/NE right-hand sides, time stepping, linear transport and
//! the Picard scheme.

mod equation;
mod picard;
mod solver;
mod trajectory;
mod transport;

pub use equation::{h1_energy, nonlocal_part, p1, p2, rhs, rhs_with, EquationKind, DEFAULT_DEALIAS};
pub use picard::{
    picard_iterate, uniform_bound_check, uniform_envelope, PicardCoefficients, PicardResult, UniformBound,
};
pub(crate) use solver::step_count;
pub use solver::{solve, solve_at, step_rk4, step_rk4_with, SolveConfig};
pub use trajectory::{Diagnostics, Trajectory};
pub use transport::{
    transport_solve, verify_transport_estimate, FrozenCoefficients, TrajectoryCoefficients, TransportCoefficients,
};
