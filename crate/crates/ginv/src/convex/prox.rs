//! Proximal operators for the splitting engine: entrywise soft-thresholding
//! for the 1-norm and singular-value soft-thresholding for the nuclear norm.

use crate::linalg::{svd, DenseMatrix, LinalgError};

/// `prox_{t ||.||_1}(x)`: entrywise soft threshold by `t`.
pub fn prox_l1(x: &DenseMatrix, t: f64) -> DenseMatrix {
    assert!(t > 0.0, "prox parameter must be positive");
    let mut out = x.clone();
    for v in out.data_mut() {
        *v = if *v > t {
            *v - t
        } else if *v < -t {
            *v + t
        } else {
            0.0
        };
    }
    out
}

/// `prox_{t ||.||_*}(x)`: soft threshold on the singular values.
pub fn prox_nuclear(x: &DenseMatrix, t: f64) -> Result<DenseMatrix, LinalgError> {
    assert!(t > 0.0, "prox parameter must be positive");
    let s = svd(x)?;
    let mut out = DenseMatrix::zeros(x.rows(), x.cols());
    for (k, &sv) in s.sigma.iter().enumerate() {
        let shrunk = sv - t;
        if shrunk <= 0.0 {
            continue;
        }
        for i in 0..x.rows() {
            let uis = s.u.get(i, k) * shrunk;
            if uis == 0.0 {
                continue;
            }
            for j in 0..x.cols() {
                out.set(i, j, out.get(i, j) + uis * s.v.get(j, k));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l1_examples() {
        let x = DenseMatrix::from_rows(&[vec![2.0, -0.5]]).unwrap();
        let out = prox_l1(&x, 1.0);
        assert_eq!(out.get(0, 0), 1.0);
        assert_eq!(out.get(0, 1), 0.0);
    }

    #[test]
    fn nuclear_diagonal() {
        let x = DenseMatrix::from_rows(&[vec![3.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let out = prox_nuclear(&x, 2.0).unwrap();
        let want = DenseMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 0.0]]).unwrap();
        assert!(out.max_abs_diff(&want) < 1e-12);
    }

    #[test]
    fn nuclear_rank_one_block() {
        // 0.25 * J has sigma_1 = 0.5; shrinking by 0.1 keeps the singular
        // vectors and rescales to sigma = 0.4, i.e. 0.2 * J.
        let x = DenseMatrix::from_fn(2, 2, |_, _| 0.25);
        let out = prox_nuclear(&x, 0.1).unwrap();
        let want = DenseMatrix::from_fn(2, 2, |_, _| 0.2);
        assert!(out.max_abs_diff(&want) < 1e-12);
        assert_eq!(crate::linalg::numerical_rank(&out, 1e-8).unwrap(), 1);
    }

    #[test]
    fn prox_operators_are_nonexpansive() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..25 {
            let x = DenseMatrix::from_fn(4, 3, |_, _| rng.gen_range(-2.0..2.0));
            let y = DenseMatrix::from_fn(4, 3, |_, _| rng.gen_range(-2.0..2.0));
            let d = x.sub(&y).frob_norm();
            let t = rng.gen_range(0.05..1.5);
            let dl1 = prox_l1(&x, t).sub(&prox_l1(&y, t)).frob_norm();
            assert!(dl1 <= d + 1e-12);
            let dnuc = prox_nuclear(&x, t)
                .unwrap()
                .sub(&prox_nuclear(&y, t).unwrap())
                .frob_norm();
            assert!(dnuc <= d + 1e-10);
        }
    }
}
