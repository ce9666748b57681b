//! Encodings of the generalized-inverse optimization problems.
//!
//! All problems share one variable layout over a fixed `m x n` input matrix
//! `A` with pseudoinverse `A+`: the candidate inverse `H` (n x m, row-major)
//! followed by its absolute-value majorant `Z`, so `num_vars = 2nm`. The
//! 1-norm objective is `sum Z_ij` under `Z >= H >= -Z`. The base constraint
//! set is
//!
//! ```text
//! A H A = A             (mn equality rows)
//! (A H)^T = A H         (m(m-1)/2 equality rows, strict upper triangle)
//! ```
//!
//! Reflexivity is handled through its linearization `H A A+ = H`, one scalar
//! equation per entry of `H`; those equations are what the iterative methods
//! gradually enforce, penalize, or dualize.

use std::collections::BTreeSet;

use crate::convex::{AffineProjector, ConvexProblem, LinearConstraint, SplittingProblem};
use crate::linalg::{DenseMatrix, LinalgError};

#[derive(Debug, thiserror::Error)]
pub enum FormulationError {
    #[error("input matrix must be nonzero")]
    ZeroMatrix,
    #[error("pseudoinverse has shape {got:?}, expected {want:?}")]
    PinvShape { got: (usize, usize), want: (usize, usize) },
    #[error("supplied pseudoinverse violates a Penrose property (residual {0:.3e})")]
    BadPinv(f64),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Cut identity for one linearized-reflexivity equation, canonically keyed by
/// `(j, i)`: the equation `H_{i.} A (A+)_{.j} = H_{ij}`.
pub type CutKey = (usize, usize);

/// One violated linearized-reflexivity equation. Indices are zero-based; the
/// violation is the signed residual `(H A A+ - H)_{ij}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct P2Cut {
    pub i: usize,
    pub j: usize,
    pub violation: f64,
}

impl P2Cut {
    pub fn key(&self) -> CutKey {
        (self.j, self.i)
    }
}

/// Shared problem data: the input matrix, its pseudoinverse, the reflexivity
/// residual map `K = A A+ - I`, and the affine projector for the splitting
/// backend.
#[derive(Debug, Clone)]
pub struct GinvFormulation {
    a: DenseMatrix,
    a_pinv: DenseMatrix,
    /// `K = A A+ - I` (m x m, symmetric); `H K` is the reflexivity residual.
    k: DenseMatrix,
    /// `K K^T = I - A A+`, the quadratic-penalty block.
    k_sq: DenseMatrix,
    projector: AffineProjector,
    m: usize,
    n: usize,
}

impl GinvFormulation {
    pub fn new(a: DenseMatrix) -> Result<Self, FormulationError> {
        let a_pinv = crate::linalg::pinv(&a, crate::linalg::DEFAULT_SIGMA_TOL)?;
        Self::from_parts(a, a_pinv)
    }

    /// Builds from an already-computed pseudoinverse, verifying it actually
    /// is one (all four Penrose residuals near zero).
    pub fn from_parts(a: DenseMatrix, a_pinv: DenseMatrix) -> Result<Self, FormulationError> {
        if a.max_abs() == 0.0 {
            return Err(FormulationError::ZeroMatrix);
        }
        let (m, n) = (a.rows(), a.cols());
        if (a_pinv.rows(), a_pinv.cols()) != (n, m) {
            return Err(FormulationError::PinvShape {
                got: (a_pinv.rows(), a_pinv.cols()),
                want: (n, m),
            });
        }
        let scale = 1.0 + a.max_abs().max(a_pinv.max_abs());
        let aha = a.mul(&a_pinv).mul(&a);
        let hah = a_pinv.mul(&a).mul(&a_pinv);
        let worst = aha
            .max_abs_diff(&a)
            .max(hah.max_abs_diff(&a_pinv))
            .max(a.mul(&a_pinv).asymmetry())
            .max(a_pinv.mul(&a).asymmetry());
        if worst > 1e-7 * scale {
            return Err(FormulationError::BadPinv(worst));
        }

        let mut k = a.mul(&a_pinv);
        let mut k_sq = DenseMatrix::identity(m);
        for p in 0..m {
            for q in 0..m {
                k_sq.set(p, q, k_sq.get(p, q) - k.get(p, q));
            }
            k.set(p, p, k.get(p, p) - 1.0);
        }
        let projector = AffineProjector::new(&a)?;
        Ok(Self { a, a_pinv, k, k_sq, projector, m, n })
    }

    pub fn a(&self) -> &DenseMatrix {
        &self.a
    }

    pub fn a_pinv(&self) -> &DenseMatrix {
        &self.a_pinv
    }

    pub fn projector(&self) -> &AffineProjector {
        &self.projector
    }

    /// Input dimensions `(m, n)` of `A`; candidate inverses are `n x m`.
    pub fn dims(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    pub fn num_vars(&self) -> usize {
        2 * self.n * self.m
    }

    /// Equality rows of the base problem before any cuts: the product
    /// constraint rows plus the symmetry rows.
    pub fn base_eq_count(&self) -> usize {
        self.m * self.n + self.m * (self.m - 1) / 2
    }

    #[inline]
    pub fn h_index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.n && j < self.m);
        i * self.m + j
    }

    #[inline]
    pub fn z_index(&self, i: usize, j: usize) -> usize {
        self.n * self.m + self.h_index(i, j)
    }

    /// Extracts `H` from a solver point.
    pub fn h_from_solution(&self, x: &[f64]) -> DenseMatrix {
        DenseMatrix::new(self.n, self.m, x[..self.n * self.m].to_vec())
            .expect("solver returned non-finite H")
    }

    /// Reflexivity residual `H A A+ - H = H K`.
    pub fn p2_residual(&self, h: &DenseMatrix) -> DenseMatrix {
        h.mul(&self.k)
    }

    /// The violated linearized-reflexivity equations, sorted by `(j, i)`.
    pub fn p2_violations(&self, h: &DenseMatrix, p2_tol: f64) -> Vec<P2Cut> {
        let r = self.p2_residual(h);
        let mut cuts = Vec::new();
        for j in 0..self.m {
            for i in 0..self.n {
                let v = r.get(i, j);
                if v.abs() > p2_tol {
                    cuts.push(P2Cut { i, j, violation: v });
                }
            }
        }
        cuts
    }

    fn base_problem(&self) -> ConvexProblem {
        let (m, n) = (self.m, self.n);
        let nm = n * m;
        let mut p = ConvexProblem::new_lp(2 * nm);
        for idx in 0..nm {
            p.objective_linear[nm + idx] = 1.0;
        }
        // Z - H >= 0 and Z + H >= 0, one pair per entry
        p.ineq_constraints.reserve(2 * nm);
        for i in 0..n {
            for j in 0..m {
                let h = self.h_index(i, j);
                let z = self.z_index(i, j);
                p.ineq_constraints.push(LinearConstraint::new(vec![(h, 1.0), (z, -1.0)], 0.0));
                p.ineq_constraints.push(LinearConstraint::new(vec![(h, -1.0), (z, -1.0)], 0.0));
            }
        }
        // (A H A)_{pq} = A_{pq}
        p.eq_constraints.reserve(self.base_eq_count());
        for row_p in 0..m {
            for col_q in 0..n {
                let mut coeffs = Vec::new();
                for i in 0..n {
                    let api = self.a.get(row_p, i);
                    if api == 0.0 {
                        continue;
                    }
                    for j in 0..m {
                        let ajq = self.a.get(j, col_q);
                        if ajq == 0.0 {
                            continue;
                        }
                        coeffs.push((self.h_index(i, j), api * ajq));
                    }
                }
                p.eq_constraints.push(LinearConstraint::new(coeffs, self.a.get(row_p, col_q)));
            }
        }
        // (A H)_{pq} = (A H)_{qp} for p < q
        for row_p in 0..m {
            for row_q in (row_p + 1)..m {
                let mut coeffs = Vec::new();
                for i in 0..n {
                    let api = self.a.get(row_p, i);
                    if api != 0.0 {
                        coeffs.push((self.h_index(i, row_q), api));
                    }
                    let aqi = self.a.get(row_q, i);
                    if aqi != 0.0 {
                        coeffs.push((self.h_index(i, row_p), -aqi));
                    }
                }
                p.eq_constraints.push(LinearConstraint::new(coeffs, 0.0));
            }
        }
        p
    }

    fn cut_row(&self, key: CutKey) -> LinearConstraint {
        let (j, i) = key;
        let mut coeffs = Vec::with_capacity(self.m);
        for kk in 0..self.m {
            let v = self.k.get(kk, j);
            if v != 0.0 {
                coeffs.push((self.h_index(i, kk), v));
            }
        }
        LinearConstraint::new(coeffs, 0.0)
    }

    /// Minimum-1-norm ah-symmetric generalized inverse LP.
    pub fn build_p13(&self) -> ConvexProblem {
        self.base_problem()
    }

    /// Base LP plus a set of linearized-reflexivity cuts, appended in
    /// canonical `(j, i)` order.
    pub fn build_p13_with_cuts(&self, cuts: &BTreeSet<CutKey>) -> ConvexProblem {
        let mut p = self.base_problem();
        for &key in cuts {
            p.eq_constraints.push(self.cut_row(key));
        }
        p
    }

    /// Minimum-1-norm ah-symmetric *reflexive* generalized inverse LP: every
    /// linearized-reflexivity equation is enforced.
    pub fn build_p123(&self) -> ConvexProblem {
        let all: BTreeSet<CutKey> =
            (0..self.m).flat_map(|j| (0..self.n).map(move |i| (j, i))).collect();
        self.build_p13_with_cuts(&all)
    }

    /// Augmented-Lagrangian subproblem: base constraints with objective
    /// `sum Z + <lambda, HK> + mu/2 * ||HK||_F^2`.
    pub fn build_auglag_qp(&self, lambda: &DenseMatrix, mu: f64) -> ConvexProblem {
        assert_eq!((lambda.rows(), lambda.cols()), (self.n, self.m), "lambda shape");
        assert!(mu >= 0.0);
        let mut p = self.base_problem();
        let lk = lambda.mul(&self.k);
        for i in 0..self.n {
            for j in 0..self.m {
                p.objective_linear[self.h_index(i, j)] += lk.get(i, j);
            }
        }
        if mu > 0.0 {
            self.push_quadratic_penalty(&mut p, mu);
        }
        p
    }

    /// Quadratic-penalty subproblem: `sum Z + mu * ||HK||_F^2` over the base
    /// constraints.
    pub fn build_penalty_frob_qp(&self, mu: f64) -> ConvexProblem {
        assert!(mu >= 0.0);
        let mut p = self.base_problem();
        if mu > 0.0 {
            self.push_quadratic_penalty(&mut p, 2.0 * mu);
        }
        p
    }

    /// 1-norm-penalty LP: slack entries `S >= |HK|` with objective
    /// `sum Z + mu * sum S`.
    pub fn build_penalty_l1_lp(&self, mu: f64) -> ConvexProblem {
        assert!(mu >= 0.0);
        let (m, n) = (self.m, self.n);
        let nm = n * m;
        let mut p = self.base_problem();
        p.num_vars = 3 * nm;
        p.objective_linear.resize(3 * nm, 0.0);
        for idx in 0..nm {
            p.objective_linear[2 * nm + idx] = mu;
        }
        for i in 0..n {
            for j in 0..m {
                let s = 2 * nm + i * m + j;
                let base = self.cut_row((j, i));
                let mut up = base.coeffs.clone();
                up.push((s, -1.0));
                p.ineq_constraints.push(LinearConstraint::new(up, 0.0));
                let mut down: Vec<(usize, f64)> =
                    base.coeffs.iter().map(|&(c, v)| (c, -v)).collect();
                down.push((s, -1.0));
                p.ineq_constraints.push(LinearConstraint::new(down, 0.0));
            }
        }
        p
    }

    /// Nuclear-norm subproblem `min ||H||_1 + mu ||H||_*` over the base
    /// constraint set, handed to the splitting engine.
    ///
    /// The same problem admits a semidefinite encoding through auxiliary
    /// blocks `W1` (n x n) and `W2` (m x m): minimize
    /// `sum Z + mu/2 (tr W1 + tr W2)` subject to `[[W1, H], [H^T, W2]] >= 0`
    /// and the base constraints. That route needs a semidefinite solver and
    /// is intentionally not implemented; the splitting engine covers the same
    /// subproblem.
    pub fn build_nuclear_subproblem(&self, mu: f64) -> SplittingProblem<'_> {
        assert!(mu >= 0.0);
        SplittingProblem { projector: &self.projector, nuclear_weight: mu }
    }

    /// Adds `coef/2 * ||HK||_F^2` as `1/2 x^T Q x` triplets: one `K K^T`
    /// block per row of `H`.
    fn push_quadratic_penalty(&self, p: &mut ConvexProblem, coef: f64) {
        for i in 0..self.n {
            for k1 in 0..self.m {
                for k2 in 0..self.m {
                    let v = self.k_sq.get(k1, k2);
                    if v != 0.0 {
                        p.objective_quadratic.push((
                            self.h_index(i, k1),
                            self.h_index(i, k2),
                            coef * v,
                        ));
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::{solve, IpmOptions, StatusKind};

    fn solve_h(form: &GinvFormulation, p: &ConvexProblem) -> (DenseMatrix, f64) {
        let sol = solve(p, &IpmOptions::default());
        assert_eq!(sol.status.kind, StatusKind::Optimal);
        (form.h_from_solution(&sol.x), sol.status.primal_obj)
    }

    fn diag_2_0() -> GinvFormulation {
        let a = DenseMatrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 0.0]]).unwrap();
        GinvFormulation::new(a).unwrap()
    }

    fn ones_2x2() -> GinvFormulation {
        let a = DenseMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        GinvFormulation::new(a).unwrap()
    }

    #[test]
    fn p13_diag_example() {
        let form = diag_2_0();
        let (h, obj) = solve_h(&form, &form.build_p13());
        let want = DenseMatrix::from_rows(&[vec![0.5, 0.0], vec![0.0, 0.0]]).unwrap();
        assert!(h.max_abs_diff(&want) < 1e-7, "{h:?}");
        assert!((obj - 0.5).abs() < 1e-8);
    }

    #[test]
    fn p13_ones_objective() {
        let form = ones_2x2();
        let (_, obj) = solve_h(&form, &form.build_p13());
        assert!((obj - 1.0).abs() < 1e-7);
    }

    #[test]
    fn p13_invertible_forces_inverse() {
        let a = DenseMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 3.0]]).unwrap();
        let ainv = crate::linalg::pinv(&a, 1e-5).unwrap();
        let form = GinvFormulation::new(a).unwrap();
        let (h, obj) = solve_h(&form, &form.build_p13());
        assert!(h.max_abs_diff(&ainv) < 1e-7);
        assert!((obj - ainv.sum_abs()).abs() < 1e-7);
    }

    #[test]
    fn p123_examples() {
        let form = diag_2_0();
        let (h, obj) = solve_h(&form, &form.build_p123());
        let want = DenseMatrix::from_rows(&[vec![0.5, 0.0], vec![0.0, 0.0]]).unwrap();
        assert!(h.max_abs_diff(&want) < 1e-7);
        assert!((obj - 0.5).abs() < 1e-8);
        assert!(form.p2_residual(&h).max_abs() < 1e-7);

        let form = ones_2x2();
        let (h, obj) = solve_h(&form, &form.build_p123());
        assert!((obj - 1.0).abs() < 1e-7);
        assert!(form.p2_residual(&h).max_abs() < 1e-7);
    }

    #[test]
    fn violations_sorted_by_j_then_i() {
        // K for diag(2,0) is diag(0, -1): the residual (HK)_{ij} is -H_{i1}
        // on column j=1 only, so a dense H violates at (j=1, i=0) and
        // (j=1, i=1) in that order.
        let form = diag_2_0();
        let h = DenseMatrix::from_rows(&[vec![0.5, 3.0], vec![0.0, 2.0]]).unwrap();
        let cuts = form.p2_violations(&h, 1e-6);
        assert_eq!(cuts.len(), 2);
        assert_eq!((cuts[0].i, cuts[0].j), (0, 1));
        assert_eq!((cuts[1].i, cuts[1].j), (1, 1));
        assert!((cuts[0].violation + 3.0).abs() < 1e-12);

        let ok = form.a_pinv().clone();
        assert!(form.p2_violations(&ok, 1e-6).is_empty());
    }

    #[test]
    fn auglag_mu_zero_matches_p13_encoding() {
        let form = ones_2x2();
        let lambda = DenseMatrix::zeros(2, 2);
        assert_eq!(form.build_auglag_qp(&lambda, 0.0), form.build_p13());
    }

    #[test]
    fn auglag_penalty_vanishes_at_p13_optimum_of_diag() {
        let form = diag_2_0();
        let lambda = DenseMatrix::zeros(2, 2);
        let p = form.build_auglag_qp(&lambda, 1.0);
        p.validate().unwrap();
        let sol = solve(&p, &IpmOptions::default());
        let h = form.h_from_solution(&sol.x);
        let want = DenseMatrix::from_rows(&[vec![0.5, 0.0], vec![0.0, 0.0]]).unwrap();
        assert!(h.max_abs_diff(&want) < 1e-6);
    }

    #[test]
    fn quadratic_term_vanishes_at_pseudoinverse() {
        let a = DenseMatrix::from_rows(&[
            vec![1.0, 2.0, 0.0],
            vec![0.0, 1.0, 1.0],
            vec![1.0, 3.0, 1.0],
        ])
        .unwrap();
        let form = GinvFormulation::new(a).unwrap();
        let p = form.build_penalty_frob_qp(3.0);
        p.validate().unwrap();
        let mut x = vec![0.0; p.num_vars];
        for i in 0..3 {
            for j in 0..3 {
                x[form.h_index(i, j)] = form.a_pinv().get(i, j);
            }
        }
        let quad: f64 = p.objective_quadratic.iter().map(|&(i, j, v)| v * x[i] * x[j]).sum();
        assert!(quad.abs() < 1e-12);
    }

    #[test]
    fn penalty_l1_mu_zero_matches_p13_value() {
        let form = ones_2x2();
        let p = form.build_penalty_l1_lp(0.0);
        let sol = solve(&p, &IpmOptions::default());
        assert_eq!(sol.status.kind, StatusKind::Optimal);
        assert!((sol.status.primal_obj - 1.0).abs() < 1e-7);
    }

    #[test]
    fn penalty_l1_large_mu_recovers_p123() {
        let a = DenseMatrix::from_rows(&[
            vec![1.0, 0.0, 1.0],
            vec![0.0, 1.0, 1.0],
            vec![1.0, 1.0, 2.0],
        ])
        .unwrap();
        let form = GinvFormulation::new(a).unwrap();
        let sol = solve(&form.build_penalty_l1_lp(1e6), &IpmOptions::default());
        assert_eq!(sol.status.kind, StatusKind::Optimal);
        let h = form.h_from_solution(&sol.x);
        assert!(form.p2_residual(&h).max_abs() < 1e-6);
        let (_, z123) = solve_h(&form, &form.build_p123());
        assert!((sol.status.primal_obj - z123).abs() < 1e-5 * (1.0 + z123));
    }

    #[test]
    fn penalty_l1_diag_insensitive_to_mu() {
        let form = diag_2_0();
        for mu in [0.0, 0.5, 100.0] {
            let sol = solve(&form.build_penalty_l1_lp(mu), &IpmOptions::default());
            let h = form.h_from_solution(&sol.x);
            let want = DenseMatrix::from_rows(&[vec![0.5, 0.0], vec![0.0, 0.0]]).unwrap();
            assert!(h.max_abs_diff(&want) < 1e-6, "mu={mu}");
        }
    }

    #[test]
    fn relaxation_chain_on_random_instance() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let left = DenseMatrix::from_fn(5, 3, |_, _| rng.gen_range(-1.0..1.0));
        let right = DenseMatrix::from_fn(3, 5, |_, _| rng.gen_range(-1.0..1.0));
        let a = left.mul(&right);
        let form = GinvFormulation::new(a).unwrap();
        let (h13, z13) = solve_h(&form, &form.build_p13());
        let (h123, z123) = solve_h(&form, &form.build_p123());
        let ap_l1 = form.a_pinv().sum_abs();
        assert!(z13 <= z123 + 1e-6);
        assert!(z123 <= ap_l1 + 1e-6);
        let ra = crate::linalg::numerical_rank(form.a(), 1e-5).unwrap();
        assert_eq!(crate::linalg::numerical_rank(&h123, 1e-5).unwrap(), ra);
        assert!(crate::linalg::numerical_rank(&h13, 1e-5).unwrap() >= ra);
        // first Penrose property and ah-symmetry hold at both optima
        for h in [&h13, &h123] {
            assert!(form.a().mul(h).mul(form.a()).max_abs_diff(form.a()) < 1e-6);
            assert!(form.a().mul(h).asymmetry() < 1e-6);
        }
        // implied: A H = A A+ at any optimum of the base problem
        let aap = form.a().mul(form.a_pinv());
        assert!(form.a().mul(&h13).max_abs_diff(&aap) < 1e-5);
    }

    #[test]
    fn cut_subsets_interpolate_objectives() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let left = DenseMatrix::from_fn(4, 2, |_, _| rng.gen_range(-1.0..1.0));
        let right = DenseMatrix::from_fn(2, 4, |_, _| rng.gen_range(-1.0..1.0));
        let form = GinvFormulation::new(left.mul(&right)).unwrap();
        let (_, z13) = solve_h(&form, &form.build_p13());
        let (_, z123) = solve_h(&form, &form.build_p123());
        let all: Vec<CutKey> = (0..4).flat_map(|j| (0..4).map(move |i| (j, i))).collect();
        let mut prev = z13;
        for take in [4usize, 8, 12, 16] {
            let subset: BTreeSet<CutKey> = all[..take].iter().copied().collect();
            let (_, z) = solve_h(&form, &form.build_p13_with_cuts(&subset));
            assert!(z >= prev - 1e-7 * (1.0 + prev.abs()), "take={take}");
            assert!(z <= z123 + 1e-6);
            prev = z;
        }
        assert!((prev - z123).abs() < 1e-6 * (1.0 + z123));
    }

    #[test]
    fn nuclear_subproblem_mu_zero_matches_p13_value() {
        use crate::convex::{solve_splitting, SplittingOptions};
        let form = ones_2x2();
        let sub = form.build_nuclear_subproblem(0.0);
        let sol = solve_splitting(&sub, &SplittingOptions::default()).unwrap();
        assert!((sol.h.sum_abs() - 1.0).abs() < 1e-5);
    }
}
