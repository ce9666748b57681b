use serde::{Deserialize, Serialize};

use crate::linalg::DenseMatrix;

/// One linear row, stored sparse: `sum coeffs[k].1 * x[coeffs[k].0]` compared
/// against `rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearConstraint {
    pub coeffs: Vec<(usize, f64)>,
    pub rhs: f64,
}

impl LinearConstraint {
    pub fn new(coeffs: Vec<(usize, f64)>, rhs: f64) -> Self {
        Self { coeffs, rhs }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().map(|&(j, v)| v * x[j]).sum()
    }
}

/// Standard-form convex problem:
///
/// ```text
/// minimize    c^T x + 1/2 x^T Q x
/// subject to  eq_constraints:   row * x  = rhs
///             ineq_constraints: row * x <= rhs
///             bounds (optional per variable)
/// ```
///
/// `objective_quadratic` lists the entries of the symmetric PSD matrix `Q` as
/// `(i, j, value)` triplets; off-diagonal entries appear for both index
/// orders.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexProblem {
    pub num_vars: usize,
    pub objective_linear: Vec<f64>,
    pub objective_quadratic: Vec<(usize, usize, f64)>,
    pub eq_constraints: Vec<LinearConstraint>,
    pub ineq_constraints: Vec<LinearConstraint>,
    /// Empty means unbounded variables; otherwise one `(lower, upper)` pair
    /// per variable.
    pub bounds: Vec<(Option<f64>, Option<f64>)>,
}

#[derive(Debug, thiserror::Error)]
pub enum ProblemError {
    #[error("problem must have at least one variable")]
    NoVariables,
    #[error("objective length {got} does not match num_vars {want}")]
    ObjectiveLength { got: usize, want: usize },
    #[error("coefficient index {idx} out of range in {what}")]
    IndexOutOfRange { what: &'static str, idx: usize },
    #[error("non-finite coefficient in {0}")]
    NonFinite(&'static str),
    #[error("bounds must be empty or one pair per variable")]
    BoundsLength,
    #[error("lower bound exceeds upper bound for variable {0}")]
    BoundOrder(usize),
    #[error("quadratic term is not symmetric (defect {0:.3e})")]
    NotSymmetric(f64),
    #[error("quadratic term is not positive semidefinite (pivot {0:.3e})")]
    NotPsd(f64),
}

impl ConvexProblem {
    /// A fresh LP shell with a zero objective and no constraints.
    pub fn new_lp(num_vars: usize) -> Self {
        Self {
            num_vars,
            objective_linear: vec![0.0; num_vars],
            objective_quadratic: Vec::new(),
            eq_constraints: Vec::new(),
            ineq_constraints: Vec::new(),
            bounds: Vec::new(),
        }
    }

    pub fn has_quadratic(&self) -> bool {
        !self.objective_quadratic.is_empty()
    }

    /// Assembles the dense quadratic matrix `Q` (only meaningful when
    /// triplets are present).
    pub fn quadratic_dense(&self) -> DenseMatrix {
        let mut q = DenseMatrix::zeros(self.num_vars, self.num_vars);
        for &(i, j, v) in &self.objective_quadratic {
            q.set(i, j, q.get(i, j) + v);
        }
        q
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        let lin: f64 = self.objective_linear.iter().zip(x).map(|(c, xi)| c * xi).sum();
        let quad: f64 = self
            .objective_quadratic
            .iter()
            .map(|&(i, j, v)| v * x[i] * x[j])
            .sum();
        lin + 0.5 * quad
    }

    /// Full invariant check, including an attempted Cholesky (with pivot
    /// tolerance) to certify the quadratic term PSD. Intended for problem
    /// construction sites and tests; the solver itself only asserts the cheap
    /// structural parts.
    pub fn validate(&self) -> Result<(), ProblemError> {
        self.validate_structure()?;
        if self.has_quadratic() {
            let q = self.quadratic_dense();
            let defect = q.asymmetry();
            let scale = q.max_abs().max(1.0);
            if defect > 1e-10 * scale {
                return Err(ProblemError::NotSymmetric(defect));
            }
            psd_check(&q)?;
        }
        Ok(())
    }

    pub fn validate_structure(&self) -> Result<(), ProblemError> {
        let n = self.num_vars;
        if n == 0 {
            return Err(ProblemError::NoVariables);
        }
        if self.objective_linear.len() != n {
            return Err(ProblemError::ObjectiveLength { got: self.objective_linear.len(), want: n });
        }
        if !self.objective_linear.iter().all(|v| v.is_finite()) {
            return Err(ProblemError::NonFinite("objective"));
        }
        for &(i, j, v) in &self.objective_quadratic {
            if i >= n || j >= n {
                return Err(ProblemError::IndexOutOfRange { what: "quadratic", idx: i.max(j) });
            }
            if !v.is_finite() {
                return Err(ProblemError::NonFinite("quadratic"));
            }
        }
        for (what, rows) in [("equality", &self.eq_constraints), ("inequality", &self.ineq_constraints)] {
            for row in rows.iter() {
                if !row.rhs.is_finite() {
                    return Err(ProblemError::NonFinite("constraint rhs"));
                }
                for &(j, v) in &row.coeffs {
                    if j >= n {
                        return Err(ProblemError::IndexOutOfRange {
                            what: if what == "equality" { "equality row" } else { "inequality row" },
                            idx: j,
                        });
                    }
                    if !v.is_finite() {
                        return Err(ProblemError::NonFinite("constraint coefficient"));
                    }
                }
            }
        }
        if !self.bounds.is_empty() {
            if self.bounds.len() != n {
                return Err(ProblemError::BoundsLength);
            }
            for (i, (lo, hi)) in self.bounds.iter().enumerate() {
                if let (Some(l), Some(h)) = (lo, hi) {
                    if l > h {
                        return Err(ProblemError::BoundOrder(i));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Cholesky attempt that tolerates semidefiniteness: pivots within
/// `-tol..tol` are treated as zero (their column must then vanish too).
fn psd_check(q: &DenseMatrix) -> Result<(), ProblemError> {
    let n = q.rows();
    let scale = q.max_abs().max(1.0);
    let tol = 1e-9 * scale;
    let mut l = q.clone();
    for j in 0..n {
        let mut d = l.get(j, j);
        for k in 0..j {
            let ljk = l.get(j, k);
            d -= ljk * ljk;
        }
        if d < -tol {
            return Err(ProblemError::NotPsd(d));
        }
        if d <= tol {
            // semidefinite direction: the rest of the column must be ~0
            for i in (j + 1)..n {
                let mut v = l.get(i, j);
                for k in 0..j {
                    v -= l.get(i, k) * l.get(j, k);
                }
                if v.abs() > tol.sqrt() * scale.sqrt() {
                    return Err(ProblemError::NotPsd(d));
                }
                l.set(i, j, 0.0);
            }
            l.set(j, j, 0.0);
            continue;
        }
        let dj = d.sqrt();
        l.set(j, j, dj);
        for i in (j + 1)..n {
            let mut v = l.get(i, j);
            for k in 0..j {
                v -= l.get(i, k) * l.get(j, k);
            }
            l.set(i, j, v / dj);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_catches_structure_errors() {
        let mut p = ConvexProblem::new_lp(2);
        p.objective_linear = vec![1.0];
        assert!(matches!(p.validate(), Err(ProblemError::ObjectiveLength { .. })));

        let mut p = ConvexProblem::new_lp(2);
        p.eq_constraints.push(LinearConstraint::new(vec![(5, 1.0)], 0.0));
        assert!(matches!(p.validate(), Err(ProblemError::IndexOutOfRange { .. })));
    }

    #[test]
    fn psd_validation() {
        let mut p = ConvexProblem::new_lp(2);
        p.objective_quadratic = vec![(0, 0, 2.0), (1, 1, 2.0), (0, 1, 1.0), (1, 0, 1.0)];
        assert!(p.validate().is_ok());

        // indefinite
        p.objective_quadratic = vec![(0, 0, 1.0), (1, 1, -1.0)];
        assert!(matches!(p.validate(), Err(ProblemError::NotPsd(_))));

        // semidefinite (rank one) is fine
        p.objective_quadratic = vec![(0, 0, 1.0), (1, 1, 1.0), (0, 1, 1.0), (1, 0, 1.0)];
        assert!(p.validate().is_ok());

        // asymmetric
        p.objective_quadratic = vec![(0, 1, 1.0)];
        assert!(matches!(p.validate(), Err(ProblemError::NotSymmetric(_))));
    }
}
