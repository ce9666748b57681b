//! Construction and analysis of ah-symmetric generalized inverses.
//!
//! Given a rank-deficient matrix `A`, a generalized inverse `H` satisfying
//! `AHA = A` with `AH` symmetric solves least-squares systems through
//! `x = Hb`. Minimizing the entrywise 1-norm of `H` gives sparse,
//! well-conditioned inverses but tends to inflate the rank; forcing
//! reflexivity (`HAH = H`) gives minimum rank at the cost of a larger
//! 1-norm. This crate implements several iterative schemes that walk between
//! those two extremes, plus everything needed to run them end to end:
//!
//! - [`linalg`]: dense matrices, Jacobi SVD, QR, pseudoinverse, ranks, norms
//! - [`convex`]: interior-point LP/QP solver and an ADMM splitting engine
//! - [`formulations`]: the optimization-problem encodings
//! - [`instances`]: seeded test-matrix generation and persistence
//! - [`methods`]: the iterative trade-off methods with per-iteration traces
//! - [`analysis`]: Pareto fronts, rank-threshold tables, CSV emission

pub mod analysis;
pub mod convex;
pub mod formulations;
pub mod instances;
pub mod linalg;
pub mod methods;
