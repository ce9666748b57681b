//! Euclidean projection onto the affine set of ah-symmetric generalized
//! inverses of a fixed matrix `A`:
//!
//! ```text
//! C = { H : A H A = A,  (A H)^T = A H }
//! ```
//!
//! With `A = U S V^T` and the change of coordinates `Ht = V^T H U` (which
//! preserves the Frobenius norm), the set becomes "leading r x r block equals
//! S_r^{-1}, top-right block zero, bottom rows free". Projection is therefore
//! a block overwrite between two orthogonal changes of basis.

use crate::linalg::{svd, DenseMatrix, LinalgError};

#[derive(Debug, Clone)]
pub struct AffineProjector {
    u: DenseMatrix,
    v: DenseMatrix,
    inv_sigma: Vec<f64>,
    rank: usize,
}

impl AffineProjector {
    /// Builds the cache from one SVD of `a`. Singular values below
    /// `1e-10 * sigma_max` are treated as zero when deciding the rank.
    pub fn new(a: &DenseMatrix) -> Result<Self, LinalgError> {
        let s = svd(a)?;
        let smax = s.sigma.first().copied().unwrap_or(0.0);
        let cut = 1e-10 * smax;
        let rank = s.sigma.iter().filter(|&&x| x > cut && x > 0.0).count();
        let inv_sigma = s.sigma[..rank].iter().map(|&x| 1.0 / x).collect();
        Ok(Self { u: s.u, v: s.v, inv_sigma, rank })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Input-space dimensions of the matrices being projected (n x m for an
    /// m x n input matrix).
    pub fn shape(&self) -> (usize, usize) {
        (self.v.rows(), self.u.rows())
    }

    /// Frobenius-norm projection of `x0` onto the constraint set.
    pub fn project(&self, x0: &DenseMatrix) -> DenseMatrix {
        let (n, m) = self.shape();
        assert_eq!((x0.rows(), x0.cols()), (n, m), "projector shape mismatch");
        let mut ht = self.v.transpose().mul(&x0.mul(&self.u));
        for i in 0..self.rank {
            for j in 0..self.rank {
                ht.set(i, j, if i == j { self.inv_sigma[i] } else { 0.0 });
            }
            for j in self.rank..m {
                ht.set(i, j, 0.0);
            }
        }
        self.v.mul(&ht.mul(&self.u.transpose()))
    }

    /// Max-norm residual of the defining constraints at `h`; diagnostic.
    pub fn constraint_residual(&self, a: &DenseMatrix, h: &DenseMatrix) -> f64 {
        let aha = a.mul(h).mul(a);
        let ah = a.mul(h);
        aha.max_abs_diff(a).max(ah.asymmetry())
    }
}
