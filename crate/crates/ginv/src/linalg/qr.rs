//! Householder QR, plain and column-pivoted. The plain factorization backs
//! the random-orthogonal-factor generator; the pivoted variant is the
//! rank-revealing presolve used to drop dependent equality rows.

use super::matrix::DenseMatrix;

/// Full Householder QR: `a = q * r` with `q` square orthogonal (rows x rows)
/// and `r` upper triangular in its leading block.
pub fn householder_qr(a: &DenseMatrix) -> (DenseMatrix, DenseMatrix) {
    let m = a.rows();
    let n = a.cols();
    let mut r = a.clone();
    let mut q = DenseMatrix::identity(m);
    let steps = n.min(m.saturating_sub(1));
    let mut v = vec![0.0; m];

    for k in 0..steps {
        let norm: f64 = (k..m).map(|i| r.get(i, k) * r.get(i, k)).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let rkk = r.get(k, k);
        let alpha = if rkk >= 0.0 { -norm } else { norm };
        v[k] = rkk - alpha;
        for i in (k + 1)..m {
            v[i] = r.get(i, k);
        }
        let vtv: f64 = (k..m).map(|i| v[i] * v[i]).sum();
        if vtv == 0.0 {
            continue;
        }
        let beta = 2.0 / vtv;

        r.set(k, k, alpha);
        for i in (k + 1)..m {
            r.set(i, k, 0.0);
        }
        for j in (k + 1)..n {
            let dot: f64 = (k..m).map(|i| v[i] * r.get(i, j)).sum();
            let scale = beta * dot;
            for i in k..m {
                r.set(i, j, r.get(i, j) - scale * v[i]);
            }
        }
        // q <- q * H_k, acting on columns k..m of every row
        for i in 0..m {
            let dot: f64 = (k..m).map(|c| q.get(i, c) * v[c]).sum();
            let scale = beta * dot;
            for c in k..m {
                q.set(i, c, q.get(i, c) - scale * v[c]);
            }
        }
    }
    (q, r)
}

/// Column-pivoted Householder QR used only for rank detection.
///
/// Returns the pivot order (original column indices, strongest first) and the
/// numerical rank: the number of diagonal entries above `rel_tol` times the
/// first pivot magnitude.
pub fn column_pivot_rank(a: &DenseMatrix, rel_tol: f64) -> (Vec<usize>, usize) {
    let m = a.rows();
    let n = a.cols();
    let mut r = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut v = vec![0.0; m];
    let mut first_pivot = 0.0f64;
    let mut rank = 0usize;

    for k in 0..n.min(m) {
        // pivot: remaining column with largest trailing norm
        let mut best = k;
        let mut best_norm = -1.0f64;
        for j in k..n {
            let nj: f64 = (k..m).map(|i| r.get(i, j) * r.get(i, j)).sum();
            if nj > best_norm {
                best_norm = nj;
                best = j;
            }
        }
        if best != k {
            for i in 0..m {
                let tmp = r.get(i, k);
                r.set(i, k, r.get(i, best));
                r.set(i, best, tmp);
            }
            perm.swap(k, best);
        }
        let norm = best_norm.max(0.0).sqrt();
        if k == 0 {
            first_pivot = norm;
        }
        if norm <= rel_tol * first_pivot || norm == 0.0 {
            break;
        }
        rank = k + 1;

        let rkk = r.get(k, k);
        let alpha = if rkk >= 0.0 { -norm } else { norm };
        v[k] = rkk - alpha;
        for i in (k + 1)..m {
            v[i] = r.get(i, k);
        }
        let vtv: f64 = (k..m).map(|i| v[i] * v[i]).sum();
        if vtv == 0.0 {
            continue;
        }
        let beta = 2.0 / vtv;
        r.set(k, k, alpha);
        for i in (k + 1)..m {
            r.set(i, k, 0.0);
        }
        for j in (k + 1)..n {
            let dot: f64 = (k..m).map(|i| v[i] * r.get(i, j)).sum();
            let scale = beta * dot;
            for i in k..m {
                r.set(i, j, r.get(i, j) - scale * v[i]);
            }
        }
    }
    (perm, rank)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qr_reconstructs() {
        let a = DenseMatrix::from_rows(&[
            vec![2.0, -1.0, 0.5],
            vec![1.0, 3.0, -2.0],
            vec![0.0, 1.0, 1.0],
            vec![4.0, 0.0, 1.0],
        ])
        .unwrap();
        let (q, r) = householder_qr(&a);
        let qr = q.mul(&r);
        assert!(qr.max_abs_diff(&a) < 1e-12);
        let qtq = q.transpose().mul(&q);
        assert!(qtq.max_abs_diff(&DenseMatrix::identity(4)) < 1e-12);
    }

    #[test]
    fn pivoted_rank_detects_deficiency() {
        // rank-2: third column = col0 + col1
        let a = DenseMatrix::from_rows(&[
            vec![1.0, 0.0, 1.0],
            vec![0.0, 1.0, 1.0],
            vec![1.0, 1.0, 2.0],
            vec![2.0, -1.0, 1.0],
        ])
        .unwrap();
        let (_, rank) = column_pivot_rank(&a, 1e-10);
        assert_eq!(rank, 2);
        let (_, full) = column_pivot_rank(&DenseMatrix::identity(3), 1e-10);
        assert_eq!(full, 3);
        let (_, zero) = column_pivot_rank(&DenseMatrix::zeros(3, 2), 1e-10);
        assert_eq!(zero, 0);
    }
}
