//! Consensus ADMM for the nuclear-norm subproblem
//!
//! ```text
//! minimize ||H||_1 + w ||H||_*   over   H in C
//! ```
//!
//! where `C` is the ah-symmetric generalized-inverse affine set handled by
//! [`AffineProjector`]. Three copies are kept in consensus: an l1-prox copy,
//! a nuclear-prox copy, and an affine-projection copy. The returned matrix is
//! the affine copy, so constraint feasibility holds to projector accuracy
//! regardless of how tight the consensus got.

use crate::linalg::{svd, DenseMatrix, LinalgError};

use super::projector::AffineProjector;
use super::prox::{prox_l1, prox_nuclear};

#[derive(Debug, Clone)]
pub struct SplittingOptions {
    /// ADMM penalty.
    pub rho: f64,
    /// Residual tolerance, relative to `max(1, ||H||_F)`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SplittingOptions {
    fn default() -> Self {
        Self { rho: 1.0, tol: 1e-7, max_iter: 5000 }
    }
}

/// One nuclear-norm subproblem: minimize `||H||_1 + nuclear_weight * ||H||_*`
/// over the projector's constraint set.
#[derive(Debug)]
pub struct SplittingProblem<'a> {
    pub projector: &'a AffineProjector,
    pub nuclear_weight: f64,
}

#[derive(Debug, Clone)]
pub struct SplittingSolution {
    pub h: DenseMatrix,
    pub iterations: usize,
    pub objective: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
}

#[derive(Debug, thiserror::Error)]
pub enum SplittingError {
    #[error(
        "splitting engine stalled: residuals ({primal:.3e}, {dual:.3e}) after {iterations} iterations"
    )]
    NonConvergence { iterations: usize, primal: f64, dual: f64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub fn solve_splitting(
    p: &SplittingProblem<'_>,
    opts: &SplittingOptions,
) -> Result<SplittingSolution, SplittingError> {
    assert!(p.nuclear_weight >= 0.0);
    assert!(opts.rho > 0.0);
    let (n, m) = p.projector.shape();

    let mut hbar = p.projector.project(&DenseMatrix::zeros(n, m));
    let mut u1 = DenseMatrix::zeros(n, m);
    let mut u2 = DenseMatrix::zeros(n, m);
    let mut u3 = DenseMatrix::zeros(n, m);

    let l1_t = 1.0 / opts.rho;
    let nuc_t = p.nuclear_weight / opts.rho;

    let mut primal = f64::INFINITY;
    let mut dual = f64::INFINITY;
    for it in 0..opts.max_iter {
        let x1 = prox_l1(&hbar.sub(&u1), l1_t);
        let x2 = if nuc_t > 0.0 {
            prox_nuclear(&hbar.sub(&u2), nuc_t)?
        } else {
            hbar.sub(&u2)
        };
        let x3 = p.projector.project(&hbar.sub(&u3));

        let mut next = x1.add(&u1).add(&x2.add(&u2)).add(&x3.add(&u3)).scaled(1.0 / 3.0);
        std::mem::swap(&mut hbar, &mut next);
        let prev = next; // old hbar after the swap

        u1 = u1.add(&x1.sub(&hbar));
        u2 = u2.add(&x2.sub(&hbar));
        u3 = u3.add(&x3.sub(&hbar));

        primal = x1
            .sub(&hbar)
            .frob_norm()
            .max(x2.sub(&hbar).frob_norm())
            .max(x3.sub(&hbar).frob_norm());
        dual = opts.rho * 3.0f64.sqrt() * hbar.sub(&prev).frob_norm();
        let scale = hbar.frob_norm().max(1.0);
        if primal <= opts.tol * scale && dual <= opts.tol * scale {
            let objective = objective_of(&x3, p.nuclear_weight)?;
            return Ok(SplittingSolution {
                h: x3,
                iterations: it + 1,
                objective,
                primal_residual: primal,
                dual_residual: dual,
            });
        }
    }
    Err(SplittingError::NonConvergence { iterations: opts.max_iter, primal, dual })
}

fn objective_of(h: &DenseMatrix, w: f64) -> Result<f64, LinalgError> {
    let nuclear: f64 = svd(h)?.sigma.iter().sum();
    Ok(h.sum_abs() + w * nuclear)
}
