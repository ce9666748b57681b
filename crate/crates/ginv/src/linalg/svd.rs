//! One-sided Jacobi SVD and everything derived from it: Moore-Penrose
//! pseudoinverse, numerical rank, and the norm bundle used by the trade-off
//! analysis. Jacobi is slow compared to LAPACK but accurate and simple, which
//! is all that is needed at the matrix sizes this crate targets (<= ~200).

use super::matrix::DenseMatrix;
use super::LinalgError;

/// Full singular value decomposition `a = u * diag(sigma) * v^T`.
///
/// `u` is rows x rows orthogonal, `v` is cols x cols orthogonal, and `sigma`
/// holds min(rows, cols) nonincreasing nonnegative values.
#[derive(Debug, Clone)]
pub struct SvdResult {
    pub u: DenseMatrix,
    pub sigma: Vec<f64>,
    pub v: DenseMatrix,
}

impl SvdResult {
    /// Rebuilds `u * diag(sigma) * v^T`; used by tests and diagnostics.
    pub fn reconstruct(&self) -> DenseMatrix {
        let m = self.u.rows();
        let n = self.v.rows();
        let mut out = DenseMatrix::zeros(m, n);
        for (k, &s) in self.sigma.iter().enumerate() {
            if s == 0.0 {
                continue;
            }
            for i in 0..m {
                let uis = self.u.get(i, k) * s;
                if uis == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.set(i, j, out.get(i, j) + uis * self.v.get(j, k));
                }
            }
        }
        out
    }
}

const JACOBI_TOL: f64 = 1e-13;
const MAX_SWEEPS: usize = 96;

pub fn svd(a: &DenseMatrix) -> Result<SvdResult, LinalgError> {
    if a.rows() >= a.cols() {
        jacobi_tall(a)
    } else {
        let t = jacobi_tall(&a.transpose())?;
        Ok(SvdResult { u: t.v, sigma: t.sigma, v: t.u })
    }
}

fn jacobi_tall(a: &DenseMatrix) -> Result<SvdResult, LinalgError> {
    let m = a.rows();
    let n = a.cols();
    debug_assert!(m >= n);
    let mut w = a.clone();
    let mut v = DenseMatrix::identity(n);

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let mut app = 0.0;
                let mut aqq = 0.0;
                let mut apq = 0.0;
                for i in 0..m {
                    let wp = w.get(i, p);
                    let wq = w.get(i, q);
                    app += wp * wp;
                    aqq += wq * wq;
                    apq += wp * wq;
                }
                if app == 0.0 || aqq == 0.0 {
                    continue;
                }
                if apq.abs() <= JACOBI_TOL * (app * aqq).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (aqq - app) / (2.0 * apq);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let wp = w.get(i, p);
                    let wq = w.get(i, q);
                    w.set(i, p, c * wp - s * wq);
                    w.set(i, q, s * wp + c * wq);
                }
                for i in 0..n {
                    let vp = v.get(i, p);
                    let vq = v.get(i, q);
                    v.set(i, p, c * vp - s * vq);
                    v.set(i, q, s * vp + c * vq);
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(LinalgError::NonConvergence { sweeps: MAX_SWEEPS });
    }

    // Column norms are the singular values; sort them nonincreasing.
    let mut norms: Vec<f64> = (0..n)
        .map(|j| (0..m).map(|i| w.get(i, j) * w.get(i, j)).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| norms[y].partial_cmp(&norms[x]).unwrap().then(x.cmp(&y)));

    let sigma: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    norms = sigma.clone();
    let smax = norms.first().copied().unwrap_or(0.0);
    let zero_cut = smax * 1e-13;

    let mut u = DenseMatrix::zeros(m, m);
    let v_sorted = DenseMatrix::from_fn(n, n, |i, j| v.get(i, order[j]));
    let mut filled = vec![false; m];
    for (k, &j) in order.iter().enumerate() {
        let s = norms[k];
        if s > zero_cut && s > 0.0 {
            for i in 0..m {
                u.set(i, k, w.get(i, j) / s);
            }
            filled[k] = true;
        }
    }
    complete_orthonormal(&mut u, &filled);

    Ok(SvdResult { u, sigma, v: v_sorted })
}

/// Fills the unfilled columns of `u` with an orthonormal completion of the
/// filled ones. Candidates are identity basis vectors; at every step the one
/// with the largest residual after projection is taken, which is both
/// deterministic and never degenerate.
fn complete_orthonormal(u: &mut DenseMatrix, filled: &[bool]) {
    let m = u.rows();
    let mut have: Vec<usize> = (0..m).filter(|&k| filled[k]).collect();
    let missing: Vec<usize> = (0..m).filter(|&k| !filled[k]).collect();
    if missing.is_empty() {
        return;
    }
    let mut resid = vec![0.0; m];
    for slot in missing {
        let mut best_norm = -1.0;
        let mut best = vec![0.0; m];
        for cand in 0..m {
            for (i, r) in resid.iter_mut().enumerate() {
                *r = if i == cand { 1.0 } else { 0.0 };
            }
            // two rounds of classical Gram-Schmidt for orthogonality
            for _ in 0..2 {
                for &col in &have {
                    let dot: f64 = (0..m).map(|i| resid[i] * u.get(i, col)).sum();
                    for (i, r) in resid.iter_mut().enumerate() {
                        *r -= dot * u.get(i, col);
                    }
                }
            }
            let nrm: f64 = resid.iter().map(|x| x * x).sum::<f64>().sqrt();
            if nrm > best_norm {
                best_norm = nrm;
                best.copy_from_slice(&resid);
            }
        }
        debug_assert!(best_norm > 0.0);
        for i in 0..m {
            u.set(i, slot, best[i] / best_norm);
        }
        have.push(slot);
    }
}

/// Moore-Penrose pseudoinverse via SVD. Singular values at or below
/// `sigma_tol` times the largest one are treated as zero.
pub fn pinv(a: &DenseMatrix, sigma_tol: f64) -> Result<DenseMatrix, LinalgError> {
    let SvdResult { u, sigma, v } = svd(a)?;
    let m = a.rows();
    let n = a.cols();
    let cutoff = sigma_tol * sigma.first().copied().unwrap_or(0.0);
    let mut out = DenseMatrix::zeros(n, m);
    for (k, &s) in sigma.iter().enumerate() {
        if s <= cutoff || s == 0.0 {
            continue;
        }
        let inv = 1.0 / s;
        for i in 0..n {
            let vik = v.get(i, k) * inv;
            if vik == 0.0 {
                continue;
            }
            for j in 0..m {
                out.set(i, j, out.get(i, j) + vik * u.get(j, k));
            }
        }
    }
    Ok(out)
}

pub const DEFAULT_SIGMA_TOL: f64 = 1e-5;
pub const DEFAULT_RANK_TOL: f64 = 1e-5;
pub const DEFAULT_ZERO_TOL: f64 = 1e-6;

/// Number of singular values strictly above the absolute threshold
/// `rank_tol`.
pub fn numerical_rank(h: &DenseMatrix, rank_tol: f64) -> Result<usize, LinalgError> {
    let s = svd(h)?;
    Ok(s.sigma.iter().filter(|&&x| x > rank_tol).count())
}

/// Relative-threshold variant: counts singular values above
/// `rel_tol * sigma_max`.
pub fn numerical_rank_relative(h: &DenseMatrix, rel_tol: f64) -> Result<usize, LinalgError> {
    let s = svd(h)?;
    let cut = rel_tol * s.sigma.first().copied().unwrap_or(0.0);
    Ok(s.sigma.iter().filter(|&&x| x > cut && x > 0.0).count())
}

/// The norm bundle reported for a candidate generalized inverse.
#[derive(Debug, Clone, PartialEq)]
pub struct Norms {
    /// Entrywise 1-norm, `sum |h_ij|`.
    pub l1: f64,
    /// Number of entries with magnitude above the zero threshold.
    pub l0: usize,
    pub frob: f64,
    /// Sum of singular values.
    pub nuclear: f64,
}

pub fn matrix_norms(h: &DenseMatrix, zero_tol: f64) -> Result<Norms, LinalgError> {
    let s = svd(h)?;
    Ok(Norms {
        l1: h.sum_abs(),
        l0: h.count_abs_above(zero_tol),
        frob: h.frob_norm(),
        nuclear: s.sigma.iter().sum(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn penrose_residuals(a: &DenseMatrix, h: &DenseMatrix) -> [f64; 4] {
        let aha = a.mul(h).mul(a);
        let hah = h.mul(a).mul(h);
        let ah = a.mul(h);
        let ha = h.mul(a);
        [
            aha.max_abs_diff(a),
            hah.max_abs_diff(h),
            ah.asymmetry(),
            ha.asymmetry(),
        ]
    }

    #[test]
    fn svd_identity() {
        let s = svd(&DenseMatrix::identity(3)).unwrap();
        for k in 0..3 {
            assert!((s.sigma[k] - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn svd_single_entry() {
        let a = DenseMatrix::from_rows(&[vec![0.0, 2.0], vec![0.0, 0.0]]).unwrap();
        let s = svd(&a).unwrap();
        assert!((s.sigma[0] - 2.0).abs() < 1e-14);
        assert!(s.sigma[1].abs() < 1e-14);
        assert!(s.reconstruct().max_abs_diff(&a) < 1e-12);
    }

    #[test]
    fn svd_zero_matrix() {
        let a = DenseMatrix::zeros(3, 2);
        let s = svd(&a).unwrap();
        assert!(s.sigma.iter().all(|&x| x == 0.0));
        assert!(s.u.transpose().mul(&s.u).max_abs_diff(&DenseMatrix::identity(3)) < 1e-12);
    }

    #[test]
    fn svd_wide_matrix() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 2.0, 3.0], vec![-1.0, 0.5, 2.0]]).unwrap();
        let s = svd(&a).unwrap();
        assert_eq!(s.u.rows(), 2);
        assert_eq!(s.v.rows(), 3);
        assert_eq!(s.sigma.len(), 2);
        assert!(s.reconstruct().max_abs_diff(&a) < 1e-12);
        assert!(s.v.transpose().mul(&s.v).max_abs_diff(&DenseMatrix::identity(3)) < 1e-12);
    }

    #[test]
    fn pinv_diagonal() {
        let a = DenseMatrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 0.0]]).unwrap();
        let h = pinv(&a, DEFAULT_SIGMA_TOL).unwrap();
        let want = DenseMatrix::from_rows(&[vec![0.5, 0.0], vec![0.0, 0.0]]).unwrap();
        assert!(h.max_abs_diff(&want) < 1e-12);
    }

    #[test]
    fn pinv_rank_one() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let h = pinv(&a, DEFAULT_SIGMA_TOL).unwrap();
        let want = DenseMatrix::from_rows(&[vec![0.25, 0.25], vec![0.25, 0.25]]).unwrap();
        assert!(h.max_abs_diff(&want) < 1e-12);
        let res = penrose_residuals(&a, &h);
        assert!(res.iter().all(|&r| r < 1e-12), "{res:?}");
    }

    #[test]
    fn pinv_zero_matrix() {
        let a = DenseMatrix::zeros(3, 2);
        let h = pinv(&a, DEFAULT_SIGMA_TOL).unwrap();
        assert_eq!((h.rows(), h.cols()), (2, 3));
        assert_eq!(h.max_abs(), 0.0);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(numerical_rank(&DenseMatrix::identity(4), 1e-5).unwrap(), 4);
        let ones = DenseMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert_eq!(numerical_rank(&ones, 1e-5).unwrap(), 1);
        assert_eq!(numerical_rank(&DenseMatrix::zeros(2, 3), 1e-5).unwrap(), 0);
    }

    #[test]
    fn norms_examples() {
        let n = matrix_norms(&DenseMatrix::identity(3), DEFAULT_ZERO_TOL).unwrap();
        assert_eq!(n.l1, 3.0);
        assert_eq!(n.l0, 3);
        assert!((n.frob - 3.0f64.sqrt()).abs() < 1e-14);
        assert!((n.nuclear - 3.0).abs() < 1e-12);

        let q = DenseMatrix::from_fn(2, 2, |_, _| 0.25);
        let n = matrix_norms(&q, DEFAULT_ZERO_TOL).unwrap();
        assert_eq!(n.l1, 1.0);
        assert_eq!(n.l0, 4);
        assert!((n.frob - 0.5).abs() < 1e-14);
        assert!((n.nuclear - 0.5).abs() < 1e-12);

        let t = DenseMatrix::from_rows(&[vec![1e-7, 2.0], vec![0.0, 0.0]]).unwrap();
        assert_eq!(matrix_norms(&t, DEFAULT_ZERO_TOL).unwrap().l0, 1);
    }

    #[test]
    fn pinv_penrose_on_random_shapes() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for trial in 0..40 {
            let m = rng.gen_range(2..=9);
            let n = rng.gen_range(2..=9);
            let k = rng.gen_range(1..=m.min(n));
            let left = DenseMatrix::from_fn(m, k, |_, _| rng.gen_range(-1.0..1.0));
            let right = DenseMatrix::from_fn(k, n, |_, _| rng.gen_range(-1.0..1.0));
            let a = left.mul(&right);
            let s = svd(&a).unwrap();
            let h = pinv(&a, DEFAULT_SIGMA_TOL).unwrap();
            let tol = 1e-8 * s.sigma[0].max(1.0);
            let res = penrose_residuals(&a, &h);
            assert!(res.iter().all(|&r| r < tol), "trial {trial}: {res:?} tol {tol}");
        }
    }
}
