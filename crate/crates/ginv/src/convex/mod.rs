//! Self-contained convex machinery: the standard-form problem encoding, a
//! dense primal-dual interior-point solver for LP/QP, the affine projector
//! for the ah-symmetric generalized-inverse constraint set, proximal
//! operators, and a consensus-ADMM splitting engine for the nuclear-norm
//! subproblem.

mod ipm;
mod problem;
mod projector;
mod prox;
mod splitting;

pub use ipm::{solve, IpmOptions, Solution, SolveStatus, StatusKind};
pub use problem::{ConvexProblem, LinearConstraint, ProblemError};
pub use projector::AffineProjector;
pub use prox::{prox_l1, prox_nuclear};
pub use splitting::{
    solve_splitting, SplittingError, SplittingOptions, SplittingProblem, SplittingSolution,
};
