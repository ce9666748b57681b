//! Dense primal-dual interior-point method (Mehrotra predictor-corrector)
//! for LPs and convex QPs in the `ConvexProblem` standard form.
//!
//! Free variables are handled natively; inequalities get slacks `s > 0` with
//! duals `z > 0`. Each iteration eliminates (s, z) and factors the reduced
//! quasi-definite KKT system
//!
//! ```text
//! [ Q + G^T W G + dI    A^T  ] [dx]   [rhs_x]
//! [ A                  -dI   ] [dy] = [rhs_y],   W = diag(z/s)
//! ```
//!
//! with a no-pivot LDL^T (sign-enforced pivots) plus iterative refinement
//! against the unregularized matrix. Once complementarity is small the
//! active set is read off and the solution is polished by one equality-KKT
//! solve, which delivers residuals at machine precision instead of grinding
//! the barrier parameter into the conditioning wall. Dependent equality rows
//! are dropped up front by a rank-revealing QR presolve and re-checked at the
//! solution. Infeasibility and unboundedness are detected through scaled
//! Farkas / recession-ray certificates, with a phase-1 feasibility solve as
//! fallback when the main iteration runs out of budget.

use crate::linalg::{column_pivot_rank, DenseMatrix};

use super::problem::{ConvexProblem, LinearConstraint};

#[derive(Debug, Clone)]
pub struct IpmOptions {
    /// Relative tolerance on KKT residuals and complementarity.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for IpmOptions {
    fn default() -> Self {
        Self { tol: 1e-9, max_iter: 200 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum StatusKind {
    Optimal,
    Infeasible,
    Unbounded,
    MaxIterations,
    NumericalFailure,
}

#[derive(Debug, Clone)]
pub struct SolveStatus {
    pub kind: StatusKind,
    pub iterations: usize,
    /// Objective of the problem as posed (linear + quadratic part).
    pub primal_obj: f64,
    /// |primal objective - dual objective| at the final iterate.
    pub duality_gap: f64,
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub x: Vec<f64>,
    pub status: SolveStatus,
    /// One multiplier per equality row of the input problem (zeros for rows
    /// the presolve dropped as dependent).
    pub duals_eq: Vec<f64>,
    /// Multipliers for the inequality rows, followed by any rows synthesized
    /// from variable bounds (lowers first, then uppers, in variable order).
    pub duals_ineq: Vec<f64>,
}

impl Solution {
    pub fn is_optimal(&self) -> bool {
        self.status.kind == StatusKind::Optimal
    }
}

const PRESOLVE_TOL: f64 = 1e-10;
const STATIC_REG: f64 = 1e-11;
const PIVOT_FLOOR: f64 = 1e-12;
const STEP_FRACTION: f64 = 0.9995;
const DROPPED_ROW_TOL: f64 = 1e-7;
/// Relative complementarity level at which active-set polishing is tried;
/// much looser and the tight/slack split is still too fuzzy to read.
const POLISH_TRIGGER: f64 = 1e-8;

pub fn solve(problem: &ConvexProblem, opts: &IpmOptions) -> Solution {
    problem
        .validate_structure()
        .unwrap_or_else(|e| panic!("invalid ConvexProblem passed to solve: {e}"));
    let sp = standardize(problem);
    let mut raw = run_with_fallback(&sp, opts, true);

    // Dependent rows were dropped assuming consistency; verify now.
    if raw.kind == StatusKind::Optimal {
        for &r in &sp.dropped_eq {
            let row = &problem.eq_constraints[r];
            if (row.eval(&raw.x) - row.rhs).abs() > DROPPED_ROW_TOL * (1.0 + row.rhs.abs()) {
                raw.kind = StatusKind::Infeasible;
            }
        }
    }

    let mut duals_eq = vec![0.0; problem.eq_constraints.len()];
    for (slot, &orig) in sp.kept_eq.iter().enumerate() {
        duals_eq[orig] = raw.y[slot] * sp.obj_scale;
    }
    let primal_obj = problem.objective_value(&raw.x);
    Solution {
        status: SolveStatus {
            kind: raw.kind,
            iterations: raw.iterations,
            primal_obj,
            duality_gap: raw.gap * sp.obj_scale,
        },
        x: raw.x,
        duals_eq,
        duals_ineq: raw.z.iter().map(|z| z * sp.obj_scale).collect(),
    }
}

// ---------------------------------------------------------------------------
// standardized form

struct StdLp {
    nv: usize,
    c: Vec<f64>,
    q: Option<DenseMatrix>,
    eq_rows: Vec<LinearConstraint>,
    ineq_rows: Vec<LinearConstraint>,
    kept_eq: Vec<usize>,
    dropped_eq: Vec<usize>,
    /// Factor the original objective was divided by; duals and objective
    /// values scale back up by it.
    obj_scale: f64,
}

fn standardize(p: &ConvexProblem) -> StdLp {
    let nv = p.num_vars;
    let mut ineq_rows = p.ineq_constraints.clone();
    if !p.bounds.is_empty() {
        for (i, (lo, _)) in p.bounds.iter().enumerate() {
            if let Some(l) = lo {
                ineq_rows.push(LinearConstraint::new(vec![(i, -1.0)], -l));
            }
        }
        for (i, (_, hi)) in p.bounds.iter().enumerate() {
            if let Some(h) = hi {
                ineq_rows.push(LinearConstraint::new(vec![(i, 1.0)], *h));
            }
        }
    }

    // Normalizing the objective keeps the duals O(1) even for huge penalty
    // coefficients, which the complementarity arithmetic needs in f64.
    let q_max = p.objective_quadratic.iter().fold(0.0f64, |m, &(_, _, v)| m.max(v.abs()));
    let obj_scale = max_abs(&p.objective_linear).max(q_max).max(1.0);
    let c: Vec<f64> = p.objective_linear.iter().map(|v| v / obj_scale).collect();

    let q = if p.has_quadratic() {
        let qd = p.quadratic_dense();
        // symmetrize against harmless triplet asymmetry
        let mut qs = DenseMatrix::zeros(nv, nv);
        for i in 0..nv {
            for j in 0..nv {
                qs.set(i, j, 0.5 * (qd.get(i, j) + qd.get(j, i)) / obj_scale);
            }
        }
        Some(qs)
    } else {
        None
    };

    let ne0 = p.eq_constraints.len();
    let (kept_eq, dropped_eq) = if ne0 == 0 {
        (Vec::new(), Vec::new())
    } else {
        // columns of `at` are the equality rows; pivoted QR keeps an
        // independent subset
        let mut at = DenseMatrix::zeros(nv, ne0);
        for (r, row) in p.eq_constraints.iter().enumerate() {
            for &(j, v) in &row.coeffs {
                at.set(j, r, at.get(j, r) + v);
            }
        }
        let (perm, rank) = column_pivot_rank(&at, PRESOLVE_TOL);
        let mut kept: Vec<usize> = perm[..rank].to_vec();
        kept.sort_unstable();
        let kept_set: std::collections::HashSet<usize> = kept.iter().copied().collect();
        let dropped: Vec<usize> = (0..ne0).filter(|r| !kept_set.contains(r)).collect();
        (kept, dropped)
    };

    let eq_rows: Vec<LinearConstraint> =
        kept_eq.iter().map(|&r| p.eq_constraints[r].clone()).collect();

    StdLp { nv, c, q, eq_rows, ineq_rows, kept_eq, dropped_eq, obj_scale }
}

// ---------------------------------------------------------------------------
// shared LDL^T kernels (quasi-definite: first `npos` pivots positive, rest
// negative)

fn ldl_factor_inplace(a: &mut [f64], d: &mut [f64], dim: usize, npos: usize) -> bool {
    // Element growth beyond this means the factor is numerically useless even
    // if finite; the caller escalates regularization instead.
    const GROWTH_LIMIT: f64 = 1e11;
    let mut tmp = vec![0.0; dim];
    for j in 0..dim {
        let rowj = j * dim;
        for k in 0..j {
            tmp[k] = a[rowj + k] * d[k];
        }
        let mut dj = a[rowj + j];
        for k in 0..j {
            dj -= a[rowj + k] * tmp[k];
        }
        if !dj.is_finite() {
            return false;
        }
        let sign = if j < npos { 1.0 } else { -1.0 };
        if dj * sign < PIVOT_FLOOR {
            dj = sign * PIVOT_FLOOR;
        }
        d[j] = dj;
        let mut growth = 0.0f64;
        for i in (j + 1)..dim {
            let rowi = i * dim;
            let mut v = a[rowi + j];
            let (ri, tj) = (&a[rowi..rowi + j], &tmp[..j]);
            for k in 0..j {
                v -= ri[k] * tj[k];
            }
            let lij = v / dj;
            a[rowi + j] = lij;
            growth = growth.max(lij.abs());
        }
        if growth > GROWTH_LIMIT {
            return false;
        }
    }
    a.iter().all(|v| v.is_finite())
}

fn ldl_solve_inplace(a: &[f64], d: &[f64], dim: usize, x: &mut [f64]) {
    for i in 0..dim {
        let rowi = i * dim;
        let mut v = x[i];
        for k in 0..i {
            v -= a[rowi + k] * x[k];
        }
        x[i] = v;
    }
    for i in 0..dim {
        x[i] /= d[i];
    }
    for i in (0..dim).rev() {
        let rowi = i * dim;
        let xi = x[i];
        if xi != 0.0 {
            for k in 0..i {
                x[k] -= a[rowi + k] * xi;
            }
        }
    }
}

fn dense_matvec(a: &[f64], dim: usize, x: &[f64], out: &mut [f64]) {
    for i in 0..dim {
        let row = &a[i * dim..(i + 1) * dim];
        out[i] = row.iter().zip(x).map(|(a, b)| a * b).sum();
    }
}

/// LDL solve plus iterative refinement against the unregularized matrix,
/// reverting a round that makes things worse. Several rounds are needed when
/// the factorization ran on the upper regularization ladder.
fn solve_refined(exact: &[f64], fac: &[f64], d: &[f64], dim: usize, rhs: &[f64]) -> Vec<f64> {
    let mut x = rhs.to_vec();
    ldl_solve_inplace(fac, d, dim, &mut x);
    let mut res = vec![0.0; dim];
    let mut ax = vec![0.0; dim];
    let rhs_scale = 1.0 + max_abs(rhs);
    for _ in 0..10 {
        dense_matvec(exact, dim, &x, &mut ax);
        for i in 0..dim {
            res[i] = rhs[i] - ax[i];
        }
        let rn = max_abs(&res);
        if rn <= 1e-14 * rhs_scale || !rn.is_finite() {
            break;
        }
        let mut dx = res.clone();
        ldl_solve_inplace(fac, d, dim, &mut dx);
        let candidate: Vec<f64> = x.iter().zip(&dx).map(|(a, b)| a + b).collect();
        dense_matvec(exact, dim, &candidate, &mut ax);
        for i in 0..dim {
            res[i] = rhs[i] - ax[i];
        }
        if max_abs(&res) < rn {
            x = candidate;
        } else {
            break;
        }
    }
    x
}

/// Hessian block of a saddle system.
enum Hess<'a> {
    Zero,
    Unit,
    Dense(&'a DenseMatrix),
}

/// Builds and solves the saddle system
/// `[[Q + dI, E^T], [E, -dI]] (x, y) = rhs` for an arbitrary row set `E`.
fn solve_saddle(q: Hess<'_>, nv: usize, rows: &[&LinearConstraint], rhs: &[f64]) -> Option<Vec<f64>> {
    let dim = nv + rows.len();
    debug_assert_eq!(rhs.len(), dim);
    let mut exact = vec![0.0; dim * dim];
    match q {
        Hess::Zero => {}
        Hess::Unit => {
            for i in 0..nv {
                exact[i * dim + i] = 1.0;
            }
        }
        Hess::Dense(q) => {
            for i in 0..nv {
                exact[i * dim..i * dim + nv].copy_from_slice(q.row(i));
            }
        }
    }
    for (r, row) in rows.iter().enumerate() {
        let k = nv + r;
        for &(j, v) in &row.coeffs {
            exact[k * dim + j] += v;
            exact[j * dim + k] += v;
        }
    }
    // Dependent rows are expected here (degenerate active sets); walk up the
    // regularization ladder until the factorization holds together and lean
    // on refinement for accuracy.
    let mut fac = vec![0.0; dim * dim];
    let mut d = vec![0.0; dim];
    for reg in [STATIC_REG, 1e-8, 1e-5] {
        fac.copy_from_slice(&exact);
        for j in 0..dim {
            fac[j * dim + j] += if j < nv { reg } else { -reg };
        }
        if !ldl_factor_inplace(&mut fac, &mut d, dim, nv) {
            continue;
        }
        let x = solve_refined(&exact, &fac, &d, dim, rhs);
        if x.iter().all(|v| v.is_finite()) {
            return Some(x);
        }
    }
    None
}

// ---------------------------------------------------------------------------
// core iteration

struct RawSolution {
    kind: StatusKind,
    iterations: usize,
    x: Vec<f64>,
    y: Vec<f64>,
    z: Vec<f64>,
    gap: f64,
    last_pobj: f64,
}

fn run_with_fallback(sp: &StdLp, opts: &IpmOptions, allow_fallback: bool) -> RawSolution {
    let mut raw =
        if sp.ineq_rows.is_empty() { solve_equality_only(sp, opts) } else { mehrotra(sp, opts) };

    if allow_fallback
        && matches!(raw.kind, StatusKind::MaxIterations | StatusKind::NumericalFailure)
        && !sp.ineq_rows.is_empty()
    {
        let scale = 1.0 + max_abs(&sp.eq_rows.iter().map(|r| r.rhs).collect::<Vec<_>>())
            + max_abs(&sp.ineq_rows.iter().map(|r| r.rhs).collect::<Vec<_>>());
        if let Some(violation) = phase1_min_violation(sp, opts) {
            if violation > 1e-7 * scale {
                raw.kind = StatusKind::Infeasible;
            } else if raw.last_pobj < -1e10 * (1.0 + max_abs(&sp.c)) {
                raw.kind = StatusKind::Unbounded;
            }
        }
    }
    raw
}

/// Minimum total constraint violation, via an always-feasible elastic LP.
fn phase1_min_violation(sp: &StdLp, opts: &IpmOptions) -> Option<f64> {
    let nv = sp.nv;
    let ne = sp.eq_rows.len();
    let ni = sp.ineq_rows.len();
    let total = nv + 2 * ne + ni;
    let mut c = vec![0.0; total];
    for v in c.iter_mut().skip(nv) {
        *v = 1.0;
    }
    let mut eq_rows = Vec::with_capacity(ne);
    for (r, row) in sp.eq_rows.iter().enumerate() {
        let mut coeffs = row.coeffs.clone();
        coeffs.push((nv + r, 1.0));
        coeffs.push((nv + ne + r, -1.0));
        eq_rows.push(LinearConstraint::new(coeffs, row.rhs));
    }
    let mut ineq_rows = Vec::with_capacity(2 * ni + 2 * ne);
    for (r, row) in sp.ineq_rows.iter().enumerate() {
        let mut coeffs = row.coeffs.clone();
        coeffs.push((nv + 2 * ne + r, -1.0));
        ineq_rows.push(LinearConstraint::new(coeffs, row.rhs));
    }
    for t in nv..total {
        ineq_rows.push(LinearConstraint::new(vec![(t, -1.0)], 0.0));
    }
    let elastic = StdLp {
        nv: total,
        c,
        q: None,
        eq_rows,
        ineq_rows,
        kept_eq: Vec::new(),
        dropped_eq: Vec::new(),
        obj_scale: 1.0,
    };
    let opts = IpmOptions { tol: opts.tol.max(1e-10), max_iter: opts.max_iter.max(100) };
    let raw = mehrotra(&elastic, &opts);
    (raw.kind == StatusKind::Optimal).then_some(raw.last_pobj)
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

fn solve_equality_only(sp: &StdLp, opts: &IpmOptions) -> RawSolution {
    let nv = sp.nv;
    let ne = sp.eq_rows.len();
    let rows: Vec<&LinearConstraint> = sp.eq_rows.iter().collect();
    let mut rhs = vec![0.0; nv + ne];
    for j in 0..nv {
        rhs[j] = -sp.c[j];
    }
    for (r, row) in sp.eq_rows.iter().enumerate() {
        rhs[nv + r] = row.rhs;
    }
    let hess = match &sp.q {
        Some(q) => Hess::Dense(q),
        None => Hess::Zero,
    };
    let Some(sol) = solve_saddle(hess, nv, &rows, &rhs) else {
        return RawSolution {
            kind: StatusKind::NumericalFailure,
            iterations: 0,
            x: vec![0.0; nv],
            y: vec![0.0; ne],
            z: Vec::new(),
            gap: f64::INFINITY,
            last_pobj: 0.0,
        };
    };
    let x = sol[..nv].to_vec();
    let y = sol[nv..].to_vec();

    let qx = apply_quadratic(sp, &x);
    let mut rd = vec![0.0; nv];
    for j in 0..nv {
        rd[j] = qx[j] + sp.c[j];
    }
    for (r, row) in sp.eq_rows.iter().enumerate() {
        for &(j, v) in &row.coeffs {
            rd[j] += v * y[r];
        }
    }
    let rp: Vec<f64> = sp.eq_rows.iter().map(|row| row.eval(&x) - row.rhs).collect();
    let pobj = objective(sp, &x, &qx);
    let tol = opts.tol.max(1e-8);
    let rd_ok = max_abs(&rd) <= tol * (1.0 + max_abs(&sp.c) + max_abs(&qx));
    let rp_ok = max_abs(&rp)
        <= tol * (1.0 + max_abs(&sp.eq_rows.iter().map(|r| r.rhs).collect::<Vec<_>>()));
    let kind = if rd_ok && rp_ok {
        StatusKind::Optimal
    } else if rp_ok {
        // objective improves without limit along a feasible ray
        StatusKind::Unbounded
    } else {
        StatusKind::NumericalFailure
    };
    RawSolution { kind, iterations: 1, x, y, z: Vec::new(), gap: 0.0, last_pobj: pobj }
}

fn apply_quadratic(sp: &StdLp, x: &[f64]) -> Vec<f64> {
    let mut qx = vec![0.0; sp.nv];
    if let Some(q) = &sp.q {
        for i in 0..sp.nv {
            let row = q.row(i);
            qx[i] = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }
    qx
}

fn objective(sp: &StdLp, x: &[f64], qx: &[f64]) -> f64 {
    let lin: f64 = sp.c.iter().zip(x).map(|(c, xi)| c * xi).sum();
    let quad: f64 = qx.iter().zip(x).map(|(a, b)| a * b).sum();
    lin + 0.5 * quad
}

/// Residual-based optimality test shared by the interior iterates and the
/// polished candidates.
struct Criteria {
    bnorm: f64,
    hnorm: f64,
    cnorm: f64,
    tol: f64,
}

impl Criteria {
    fn ok(&self, rp: f64, rg: f64, rd: f64, qx_norm: f64, comp: f64, gap: f64, pobj: f64) -> bool {
        let obj_scale = 1.0 + pobj.abs();
        rp <= self.tol * (1.0 + self.bnorm)
            && rg <= self.tol * (1.0 + self.hnorm)
            && rd <= self.tol * (1.0 + self.cnorm + qx_norm)
            && comp <= self.tol * obj_scale
            && gap <= self.tol * obj_scale
    }
}

fn mehrotra(sp: &StdLp, opts: &IpmOptions) -> RawSolution {
    let nv = sp.nv;
    let ne = sp.eq_rows.len();
    let ni = sp.ineq_rows.len();
    let ni_f = ni as f64;

    let b: Vec<f64> = sp.eq_rows.iter().map(|r| r.rhs).collect();
    let h: Vec<f64> = sp.ineq_rows.iter().map(|r| r.rhs).collect();
    let crit =
        Criteria { bnorm: max_abs(&b), hnorm: max_abs(&h), cnorm: max_abs(&sp.c), tol: opts.tol };

    let mut ws = KktWorkspace::new(sp);

    // Least-squares starting point with unit scaling weights.
    ws.assemble(&vec![1.0; ni]);
    let mut x = vec![0.0; nv];
    let mut y = vec![0.0; ne];
    if ws.factor() {
        let mut rhs = vec![0.0; nv + ne];
        for j in 0..nv {
            rhs[j] = -sp.c[j];
        }
        for (r, row) in sp.ineq_rows.iter().enumerate() {
            for &(j, v) in &row.coeffs {
                rhs[j] += v * h[r];
            }
        }
        for r in 0..ne {
            rhs[nv + r] = b[r];
        }
        let sol = ws.solve_refined(&rhs);
        x.copy_from_slice(&sol[..nv]);
        y.copy_from_slice(&sol[nv..]);
        if !x.iter().all(|v| v.is_finite()) || !y.iter().all(|v| v.is_finite()) {
            x.iter_mut().for_each(|v| *v = 0.0);
            y.iter_mut().for_each(|v| *v = 0.0);
        }
    }
    let x0_mag = max_abs(&x);

    let mut s = vec![0.0; ni];
    let mut z = vec![1.0; ni];
    for (i, row) in sp.ineq_rows.iter().enumerate() {
        let slack = h[i] - row.eval(&x);
        s[i] = slack.max(1.0);
    }

    let mut gx = vec![0.0; ni];
    let mut rg = vec![0.0; ni];
    let mut rp = vec![0.0; ne];
    let mut rd = vec![0.0; nv];
    let mut w = vec![0.0; ni];
    let mut rc = vec![0.0; ni];
    let mut f = vec![0.0; ni];
    let mut ds = vec![0.0; ni];
    let mut dz = vec![0.0; ni];
    let mut ds_aff = vec![0.0; ni];
    let mut dz_aff = vec![0.0; ni];
    let mut rhs = vec![0.0; nv + ne];
    let mut gap = f64::INFINITY;
    let mut pobj = 0.0;
    let mut polish_attempts = 0usize;

    for it in 0..opts.max_iter {
        for (i, row) in sp.ineq_rows.iter().enumerate() {
            gx[i] = row.eval(&x);
            rg[i] = gx[i] + s[i] - h[i];
        }
        for (r, row) in sp.eq_rows.iter().enumerate() {
            rp[r] = row.eval(&x) - b[r];
        }
        let qx = apply_quadratic(sp, &x);
        for j in 0..nv {
            rd[j] = qx[j] + sp.c[j];
        }
        for (r, row) in sp.eq_rows.iter().enumerate() {
            for &(j, v) in &row.coeffs {
                rd[j] += v * y[r];
            }
        }
        for (i, row) in sp.ineq_rows.iter().enumerate() {
            for &(j, v) in &row.coeffs {
                rd[j] += v * z[i];
            }
        }

        pobj = objective(sp, &x, &qx);
        let quad: f64 = qx.iter().zip(&x).map(|(a, b)| a * b).sum();
        let by: f64 = b.iter().zip(&y).map(|(a, b)| a * b).sum();
        let hz: f64 = h.iter().zip(&z).map(|(a, b)| a * b).sum();
        let dobj = -0.5 * quad - by - hz;
        gap = (pobj - dobj).abs();
        let comp = s.iter().zip(&z).fold(0.0f64, |m, (si, zi)| m.max(si * zi));
        let mu = s.iter().zip(&z).map(|(si, zi)| si * zi).sum::<f64>() / ni_f;

        if std::env::var_os("GINV_IPM_TRACE").is_some() {
            eprintln!(
                "ipm it={it} pobj={pobj:.6e} mu={mu:.3e} comp={comp:.3e} gap={gap:.3e} rp={:.3e} rg={:.3e} rd={:.3e} xmax={:.3e} zmax={:.3e}",
                max_abs(&rp), max_abs(&rg), max_abs(&rd), max_abs(&x), max_abs(&z)
            );
        }

        let finite = x.iter().chain(&y).chain(&z).chain(&s).all(|v| v.is_finite());
        if !finite {
            return RawSolution {
                kind: StatusKind::NumericalFailure,
                iterations: it,
                x,
                y,
                z,
                gap,
                last_pobj: pobj,
            };
        }

        if crit.ok(max_abs(&rp), max_abs(&rg), max_abs(&rd), max_abs(&qx), comp, gap, pobj) {
            return RawSolution { kind: StatusKind::Optimal, iterations: it, x, y, z, gap, last_pobj: pobj };
        }

        // Near convergence the active set is readable; one equality-KKT
        // solve then beats fighting the barrier conditioning.
        if comp <= POLISH_TRIGGER * (1.0 + pobj.abs()) && polish_attempts < 5 {
            polish_attempts += 1;
            if let Some(p) = try_polish(sp, &crit, &x, &y, &s, &z) {
                return RawSolution {
                    kind: StatusKind::Optimal,
                    iterations: it,
                    x: p.x,
                    y: p.y,
                    z: p.z,
                    gap: p.gap,
                    last_pobj: p.pobj,
                };
            }
        }

        // Farkas-style infeasibility certificate from diverging duals.
        let dual_mag = max_abs(&y).max(max_abs(&z));
        if dual_mag > 1e7 * (1.0 + crit.bnorm + crit.hnorm + crit.cnorm) {
            let inv = 1.0 / dual_mag;
            // A^T y + G^T z = rd - c - Qx
            let mut ray_res = 0.0f64;
            for j in 0..nv {
                ray_res = ray_res.max((rd[j] - sp.c[j] - qx[j]).abs());
            }
            if ray_res * inv <= 1e-8 && (by + hz) * inv < -1e-8 {
                return RawSolution {
                    kind: StatusKind::Infeasible,
                    iterations: it,
                    x,
                    y,
                    z,
                    gap,
                    last_pobj: pobj,
                };
            }
        }
        // Recession-ray certificate for unboundedness.
        let xmag = max_abs(&x);
        if xmag > 1e7 * (1.0 + x0_mag) {
            let inv = 1.0 / xmag;
            let ax_max = rp.iter().zip(&b).fold(0.0f64, |m, (r, bi)| m.max((r + bi).abs()));
            let gx_max = gx.iter().fold(f64::NEG_INFINITY, |m, v| m.max(*v));
            let cx: f64 = sp.c.iter().zip(&x).map(|(a, b)| a * b).sum();
            if max_abs(&qx) * inv <= 1e-8
                && ax_max * inv <= 1e-8
                && gx_max * inv <= 1e-8
                && cx * inv < -1e-8
            {
                return RawSolution {
                    kind: StatusKind::Unbounded,
                    iterations: it,
                    x,
                    y,
                    z,
                    gap,
                    last_pobj: pobj,
                };
            }
        }
        if mu > 1e18 || xmag > 1e18 {
            return RawSolution {
                kind: StatusKind::MaxIterations,
                iterations: it,
                x,
                y,
                z,
                gap,
                last_pobj: pobj,
            };
        }

        for i in 0..ni {
            w[i] = (z[i] / s[i]).clamp(1e-16, 1e16);
        }
        ws.assemble(&w);
        if !ws.factor() {
            if let Some(p) = try_polish(sp, &crit, &x, &y, &s, &z) {
                return RawSolution {
                    kind: StatusKind::Optimal,
                    iterations: it,
                    x: p.x,
                    y: p.y,
                    z: p.z,
                    gap: p.gap,
                    last_pobj: p.pobj,
                };
            }
            return RawSolution {
                kind: StatusKind::NumericalFailure,
                iterations: it,
                x,
                y,
                z,
                gap,
                last_pobj: pobj,
            };
        }

        // predictor (affine scaling) direction
        for i in 0..ni {
            rc[i] = s[i] * z[i];
        }
        let (dx_a, _dy_a) = newton_step(sp, &mut ws, &rd, &rp, &rg, &rc, &s, &z, &mut rhs, &mut f);
        recover_ineq_direction(sp, &dx_a, &rg, &rc, &s, &z, &mut ds_aff, &mut dz_aff);
        let alpha_p_aff = max_step(&s, &ds_aff).min(1.0);
        let alpha_d_aff = max_step(&z, &dz_aff).min(1.0);
        let mu_aff = s
            .iter()
            .zip(&ds_aff)
            .zip(z.iter().zip(&dz_aff))
            .map(|((si, dsi), (zi, dzi))| (si + alpha_p_aff * dsi) * (zi + alpha_d_aff * dzi))
            .sum::<f64>()
            / ni_f;
        let sigma = if mu > 0.0 { ((mu_aff / mu).max(0.0)).powi(3).min(1.0) } else { 0.0 };

        // corrector
        for i in 0..ni {
            rc[i] = s[i] * z[i] + ds_aff[i] * dz_aff[i] - sigma * mu;
        }
        let (dx, dy) = newton_step(sp, &mut ws, &rd, &rp, &rg, &rc, &s, &z, &mut rhs, &mut f);
        recover_ineq_direction(sp, &dx, &rg, &rc, &s, &z, &mut ds, &mut dz);

        let dir_finite = dx.iter().chain(&dy).chain(ds.iter()).chain(dz.iter()).all(|v| v.is_finite())
            && ds_aff.iter().chain(dz_aff.iter()).all(|v| v.is_finite());
        if !dir_finite {
            // conditioning wall: the current iterate is still good, so try to
            // polish it before giving up
            if let Some(p) = try_polish(sp, &crit, &x, &y, &s, &z) {
                return RawSolution {
                    kind: StatusKind::Optimal,
                    iterations: it,
                    x: p.x,
                    y: p.y,
                    z: p.z,
                    gap: p.gap,
                    last_pobj: p.pobj,
                };
            }
            return RawSolution {
                kind: StatusKind::NumericalFailure,
                iterations: it,
                x,
                y,
                z,
                gap,
                last_pobj: pobj,
            };
        }

        let alpha_p = (STEP_FRACTION * max_step(&s, &ds)).min(1.0);
        let alpha_d = (STEP_FRACTION * max_step(&z, &dz)).min(1.0);
        for j in 0..nv {
            x[j] += alpha_p * dx[j];
        }
        for i in 0..ni {
            s[i] += alpha_p * ds[i];
        }
        for r in 0..ne {
            y[r] += alpha_d * dy[r];
        }
        for i in 0..ni {
            z[i] += alpha_d * dz[i];
        }
    }

    // Out of budget: one last polish attempt from the final iterate.
    if let Some(p) = try_polish(sp, &crit, &x, &y, &s, &z) {
        return RawSolution {
            kind: StatusKind::Optimal,
            iterations: opts.max_iter,
            x: p.x,
            y: p.y,
            z: p.z,
            gap: p.gap,
            last_pobj: p.pobj,
        };
    }

    RawSolution {
        kind: StatusKind::MaxIterations,
        iterations: opts.max_iter,
        x,
        y,
        z,
        gap,
        last_pobj: pobj,
    }
}

struct Polished {
    x: Vec<f64>,
    y: Vec<f64>,
    z: Vec<f64>,
    gap: f64,
    pobj: f64,
}

/// Greedy selection of rows that are linearly independent of `basis` (and of
/// each other), by two-pass Gram-Schmidt. Returns indices into `rows`.
fn select_independent_rows(
    basis_rows: &[LinearConstraint],
    rows: &[&LinearConstraint],
    nv: usize,
) -> Vec<usize> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut push_row = |coeffs: &[(usize, f64)], basis: &mut Vec<Vec<f64>>| -> bool {
        let mut v = vec![0.0; nv];
        let mut norm0 = 0.0;
        for &(j, val) in coeffs {
            v[j] += val;
            norm0 += val * val;
        }
        let norm0 = norm0.sqrt();
        if norm0 == 0.0 {
            return false;
        }
        for _ in 0..2 {
            for b in basis.iter() {
                let dot: f64 = b.iter().zip(&v).map(|(a, c)| a * c).sum();
                if dot != 0.0 {
                    for (vi, bi) in v.iter_mut().zip(b) {
                        *vi -= dot * bi;
                    }
                }
            }
        }
        let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm <= 1e-8 * norm0 {
            return false;
        }
        for vi in v.iter_mut() {
            *vi /= norm;
        }
        basis.push(v);
        true
    };
    for row in basis_rows {
        push_row(&row.coeffs, &mut basis);
    }
    let mut kept = Vec::new();
    for (idx, row) in rows.iter().enumerate() {
        if push_row(&row.coeffs, &mut basis) {
            kept.push(idx);
        }
    }
    kept
}

/// Polishes a nearly-converged iterate: projects the primal point onto the
/// face spanned by the tight rows (so tight slacks become exact zeros), keeps
/// the iterate's duals on those rows, and truncates the slack-row duals to
/// zero. A candidate is accepted only if the full KKT conditions check out,
/// so a misread active set just means "keep iterating". Weakly-active rows
/// (both s and z small, neither clearly ahead) are handled by retrying with
/// progressively wider slack thresholds.
fn try_polish(
    sp: &StdLp,
    crit: &Criteria,
    x_cur: &[f64],
    y_cur: &[f64],
    s: &[f64],
    z: &[f64],
) -> Option<Polished> {
    // First preference: keep every iterate dual (cheapest on dual residual);
    // truncation variants follow for iterates whose slack-row duals have not
    // decayed yet.
    for (truncate, tau) in
        [(false, 0.0), (true, 0.0), (true, 1e-6), (true, 1e-4), (true, 1e-2)]
    {
        if let Some(p) = polish_with_threshold(sp, crit, x_cur, y_cur, s, z, truncate, tau) {
            return Some(p);
        }
    }
    None
}

#[allow(clippy::too_many_arguments)]
fn polish_with_threshold(
    sp: &StdLp,
    crit: &Criteria,
    x_cur: &[f64],
    y_cur: &[f64],
    s: &[f64],
    z: &[f64],
    truncate: bool,
    tau: f64,
) -> Option<Polished> {
    let nv = sp.nv;
    let ni = sp.ineq_rows.len();
    let trace = std::env::var_os("GINV_IPM_TRACE").is_some();
    let tight: Vec<usize> = (0..ni).filter(|&i| z[i] > s[i] || s[i] <= tau).collect();
    // The projection system only needs an independent spanning subset of the
    // tight rows; the rest are satisfied by consistency.
    let tight_refs: Vec<&LinearConstraint> = tight.iter().map(|&i| &sp.ineq_rows[i]).collect();
    let kept = select_independent_rows(&sp.eq_rows, &tight_refs, nv);
    let active: Vec<usize> = kept.into_iter().map(|k| tight[k]).collect();

    let mut rows: Vec<&LinearConstraint> = sp.eq_rows.iter().collect();
    rows.extend(active.iter().map(|&i| &sp.ineq_rows[i]));
    let dim = nv + rows.len();
    let ne = sp.eq_rows.len();
    let mut rhs = vec![0.0; dim];
    for (slot, row) in rows.iter().enumerate() {
        rhs[nv + slot] = row.rhs;
    }

    let mut z_full = if truncate {
        let mut zt = vec![0.0; ni];
        for &i in &tight {
            zt[i] = z[i];
        }
        zt
    } else {
        z.to_vec()
    };
    let x;
    let mut y = y_cur.to_vec();

    if sp.q.is_some() {
        // Quadratic objective: the face optimum is a point, so solve the
        // equality-constrained QP on the face outright, holding the duals of
        // the remaining rows fixed.
        let active_set: std::collections::HashSet<usize> = active.iter().copied().collect();
        for j in 0..nv {
            rhs[j] = -sp.c[j];
        }
        for (i, row) in sp.ineq_rows.iter().enumerate() {
            if active_set.contains(&i) || z_full[i] == 0.0 {
                continue;
            }
            for &(j, v) in &row.coeffs {
                rhs[j] -= v * z_full[i];
            }
        }
        let q = sp.q.as_ref().expect("checked above");
        let Some(sol) = solve_saddle(Hess::Dense(q), nv, &rows, &rhs) else {
            if trace {
                eprintln!("polish: face QP factorization failed ({} tight rows)", active.len());
            }
            return None;
        };
        x = sol[..nv].to_vec();
        y.copy_from_slice(&sol[nv..nv + ne]);
        for (slot, &i) in active.iter().enumerate() {
            let zi = sol[nv + ne + slot];
            if zi < -1e-7 * (1.0 + crit.cnorm) {
                if trace {
                    eprintln!("polish: face QP multiplier went negative ({zi:.3e}) on row {i}");
                }
                return None;
            }
            z_full[i] = zi.max(0.0);
        }
    } else {
        // Linear objective: project the iterate onto the face
        // (min 1/2 ||x - x_cur||^2 over the tight rows), then refit the
        // duals of the pinned rows by least squares so the dual objective
        // sheds the leftover interior slack.
        rhs[..nv].copy_from_slice(x_cur);
        let Some(sol) = solve_saddle(Hess::Unit, nv, &rows, &rhs) else {
            if trace {
                eprintln!("polish: projection factorization failed ({} tight rows)", active.len());
            }
            return None;
        };
        x = sol[..nv].to_vec();

        let active_set: std::collections::HashSet<usize> = active.iter().copied().collect();
        let mut ls_rhs = vec![0.0; dim];
        for j in 0..nv {
            ls_rhs[j] = -sp.c[j];
        }
        for (i, row) in sp.ineq_rows.iter().enumerate() {
            if active_set.contains(&i) || z_full[i] == 0.0 {
                continue;
            }
            for &(j, v) in &row.coeffs {
                ls_rhs[j] -= v * z_full[i];
            }
        }
        let Some(refit) = solve_saddle(Hess::Unit, nv, &rows, &ls_rhs) else {
            return None;
        };
        y.copy_from_slice(&refit[nv..nv + ne]);
        for (slot, &i) in active.iter().enumerate() {
            let zi = refit[nv + ne + slot];
            if zi < -1e-7 * (1.0 + crit.cnorm) {
                if trace {
                    eprintln!("polish: dual refit went negative ({zi:.3e}) on row {i}");
                }
                return None;
            }
            z_full[i] = zi.max(0.0);
        }
    }

    // full KKT check of the polished candidate
    let qx = apply_quadratic(sp, &x);
    let mut rd = vec![0.0; nv];
    for j in 0..nv {
        rd[j] = qx[j] + sp.c[j];
    }
    for (r, row) in sp.eq_rows.iter().enumerate() {
        for &(j, v) in &row.coeffs {
            rd[j] += v * y[r];
        }
    }
    for (i, row) in sp.ineq_rows.iter().enumerate() {
        if z_full[i] == 0.0 {
            continue;
        }
        for &(j, v) in &row.coeffs {
            rd[j] += v * z_full[i];
        }
    }
    let rp_max = sp
        .eq_rows
        .iter()
        .map(|row| (row.eval(&x) - row.rhs).abs())
        .fold(0.0f64, f64::max);
    let mut rg_max = 0.0f64;
    let mut comp = 0.0f64;
    let mut hz = 0.0;
    let mut s_new = vec![0.0; ni];
    for (i, row) in sp.ineq_rows.iter().enumerate() {
        let slack = row.rhs - row.eval(&x);
        // infeasible beyond tolerance: reject
        rg_max = rg_max.max((-slack).max(0.0));
        s_new[i] = slack.max(0.0);
        comp = comp.max(s_new[i] * z_full[i]);
        hz += row.rhs * z_full[i];
    }
    let pobj = objective(sp, &x, &qx);
    let quad: f64 = qx.iter().zip(&x).map(|(a, b)| a * b).sum();
    let by: f64 = sp.eq_rows.iter().zip(&y).map(|(row, yi)| row.rhs * yi).sum();
    let dobj = -0.5 * quad - by - hz;
    let gap = (pobj - dobj).abs();

    let ok = crit.ok(rp_max, rg_max, max_abs(&rd), max_abs(&qx), comp, gap, pobj);
    if trace && !ok {
        eprintln!(
            "polish: kkt check failed rp={rp_max:.3e} rg={rg_max:.3e} rd={:.3e} comp={comp:.3e} gap={gap:.3e} pobj={pobj:.6e}",
            max_abs(&rd)
        );
    }
    ok.then_some(Polished { x, y, z: z_full, gap, pobj })
}

/// Solves the reduced KKT system for one right-hand side built from the
/// residuals and the complementarity target `rc`.
#[allow(clippy::too_many_arguments)]
fn newton_step(
    sp: &StdLp,
    ws: &mut KktWorkspace,
    rd: &[f64],
    rp: &[f64],
    rg: &[f64],
    rc: &[f64],
    s: &[f64],
    z: &[f64],
    rhs: &mut [f64],
    f: &mut [f64],
) -> (Vec<f64>, Vec<f64>) {
    let nv = sp.nv;
    let ne = sp.eq_rows.len();
    for (i, fi) in f.iter_mut().enumerate() {
        *fi = (rc[i] - z[i] * rg[i]) / s[i];
    }
    for j in 0..nv {
        rhs[j] = -rd[j];
    }
    for (i, row) in sp.ineq_rows.iter().enumerate() {
        let fi = f[i];
        if fi == 0.0 {
            continue;
        }
        for &(j, v) in &row.coeffs {
            rhs[j] += v * fi;
        }
    }
    for r in 0..ne {
        rhs[nv + r] = -rp[r];
    }
    let sol = ws.solve_refined(rhs);
    (sol[..nv].to_vec(), sol[nv..].to_vec())
}

fn recover_ineq_direction(
    sp: &StdLp,
    dx: &[f64],
    rg: &[f64],
    rc: &[f64],
    s: &[f64],
    z: &[f64],
    ds: &mut [f64],
    dz: &mut [f64],
) {
    for (i, row) in sp.ineq_rows.iter().enumerate() {
        let gdx = row.eval(dx);
        dz[i] = (-rc[i] + z[i] * rg[i] + z[i] * gdx) / s[i];
        ds[i] = -rg[i] - gdx;
    }
}

/// Largest step in [0, inf) keeping `v + alpha * dv` nonnegative.
fn max_step(v: &[f64], dv: &[f64]) -> f64 {
    let mut alpha = f64::INFINITY;
    for (vi, dvi) in v.iter().zip(dv) {
        if *dvi < 0.0 {
            alpha = alpha.min(-vi / dvi);
        }
    }
    alpha
}

// ---------------------------------------------------------------------------
// KKT workspace for the weighted reduced system

struct KktWorkspace {
    dim: usize,
    nv: usize,
    /// exact (unregularized) KKT, row-major
    exact: Vec<f64>,
    /// factor storage: strictly lower part holds L, `d` the pivots
    fac: Vec<f64>,
    d: Vec<f64>,
    q: Option<DenseMatrix>,
    eq_rows: Vec<LinearConstraint>,
    ineq_rows: Vec<LinearConstraint>,
}

impl KktWorkspace {
    fn new(sp: &StdLp) -> Self {
        let dim = sp.nv + sp.eq_rows.len();
        Self {
            dim,
            nv: sp.nv,
            exact: vec![0.0; dim * dim],
            fac: vec![0.0; dim * dim],
            d: vec![0.0; dim],
            q: sp.q.clone(),
            eq_rows: sp.eq_rows.clone(),
            ineq_rows: sp.ineq_rows.clone(),
        }
    }

    fn assemble(&mut self, w: &[f64]) {
        let dim = self.dim;
        let nv = self.nv;
        self.exact.fill(0.0);
        if let Some(q) = &self.q {
            for i in 0..nv {
                self.exact[i * dim..i * dim + nv].copy_from_slice(q.row(i));
            }
        }
        for (r, row) in self.ineq_rows.iter().enumerate() {
            let wr = w[r];
            if wr == 0.0 {
                continue;
            }
            for &(c1, v1) in &row.coeffs {
                let scaled = wr * v1;
                for &(c2, v2) in &row.coeffs {
                    self.exact[c1 * dim + c2] += scaled * v2;
                }
            }
        }
        for (r, row) in self.eq_rows.iter().enumerate() {
            let k = nv + r;
            for &(j, v) in &row.coeffs {
                self.exact[k * dim + j] += v;
                self.exact[j * dim + k] += v;
            }
        }
    }

    fn factor(&mut self) -> bool {
        let dim = self.dim;
        let nv = self.nv;
        for reg in [STATIC_REG, 1e-8, 1e-5] {
            self.fac.copy_from_slice(&self.exact);
            for j in 0..dim {
                self.fac[j * dim + j] += if j < nv { reg } else { -reg };
            }
            if ldl_factor_inplace(&mut self.fac, &mut self.d, dim, nv) {
                return true;
            }
        }
        false
    }

    fn solve_refined(&mut self, rhs: &[f64]) -> Vec<f64> {
        solve_refined(&self.exact, &self.fac, &self.d, self.dim, rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::problem::{ConvexProblem, LinearConstraint};

    fn lp(
        c: Vec<f64>,
        eq: Vec<(Vec<(usize, f64)>, f64)>,
        ineq: Vec<(Vec<(usize, f64)>, f64)>,
    ) -> ConvexProblem {
        let n = c.len();
        let mut p = ConvexProblem::new_lp(n);
        p.objective_linear = c;
        p.eq_constraints = eq.into_iter().map(|(c, r)| LinearConstraint::new(c, r)).collect();
        p.ineq_constraints = ineq.into_iter().map(|(c, r)| LinearConstraint::new(c, r)).collect();
        p
    }

    #[test]
    fn min_x_nonnegative() {
        // min x s.t. x >= 0
        let p = lp(vec![1.0], vec![], vec![(vec![(0, -1.0)], 0.0)]);
        let sol = solve(&p, &IpmOptions::default());
        assert_eq!(sol.status.kind, StatusKind::Optimal);
        assert!(sol.x[0].abs() < 1e-8);
        assert!(sol.status.primal_obj.abs() < 1e-8);
    }

    #[test]
    fn forced_by_equality() {
        // min x1 + x2 s.t. x1 + x2 = 1, x >= 0
        let p = lp(
            vec![1.0, 1.0],
            vec![(vec![(0, 1.0), (1, 1.0)], 1.0)],
            vec![(vec![(0, -1.0)], 0.0), (vec![(1, -1.0)], 0.0)],
        );
        let sol = solve(&p, &IpmOptions::default());
        assert_eq!(sol.status.kind, StatusKind::Optimal);
        assert!((sol.status.primal_obj - 1.0).abs() < 1e-8);
    }

    #[test]
    fn detects_infeasible() {
        // min 0 s.t. x >= 1 and x <= 0
        let p = lp(vec![0.0], vec![], vec![(vec![(0, -1.0)], -1.0), (vec![(0, 1.0)], 0.0)]);
        let sol = solve(&p, &IpmOptions::default());
        assert_eq!(sol.status.kind, StatusKind::Infeasible);
    }

    #[test]
    fn detects_unbounded() {
        // min -x s.t. x >= 0
        let p = lp(vec![-1.0], vec![], vec![(vec![(0, -1.0)], 0.0)]);
        let sol = solve(&p, &IpmOptions::default());
        assert_eq!(sol.status.kind, StatusKind::Unbounded);
    }

    #[test]
    fn detects_inconsistent_equalities() {
        // x + y = 1 and x + y = 2 share coefficients but not rhs
        let p = lp(
            vec![1.0, 1.0],
            vec![(vec![(0, 1.0), (1, 1.0)], 1.0), (vec![(0, 1.0), (1, 1.0)], 2.0)],
            vec![(vec![(0, -1.0)], 0.0), (vec![(1, -1.0)], 0.0)],
        );
        let sol = solve(&p, &IpmOptions::default());
        assert_eq!(sol.status.kind, StatusKind::Infeasible);
    }

    #[test]
    fn simple_qp() {
        // min (x-1)^2 + (y-2)^2 restricted to x + y = 1
        // = min x^2 + y^2 - 2x - 4y + const
        let mut p = lp(
            vec![-2.0, -4.0],
            vec![(vec![(0, 1.0), (1, 1.0)], 1.0)],
            vec![(vec![(0, -1.0)], 5.0)],
        );
        p.objective_quadratic = vec![(0, 0, 2.0), (1, 1, 2.0)];
        let sol = solve(&p, &IpmOptions::default());
        assert_eq!(sol.status.kind, StatusKind::Optimal);
        // analytic optimum x = 0, y = 1
        assert!((sol.x[0] - 0.0).abs() < 1e-7, "{:?}", sol.x);
        assert!((sol.x[1] - 1.0).abs() < 1e-7);
    }

    #[test]
    fn bounds_are_folded() {
        // min -x - y with 0 <= x <= 2, 0 <= y <= 3
        let mut p = lp(vec![-1.0, -1.0], vec![], vec![]);
        p.bounds = vec![(Some(0.0), Some(2.0)), (Some(0.0), Some(3.0))];
        let sol = solve(&p, &IpmOptions::default());
        assert_eq!(sol.status.kind, StatusKind::Optimal);
        assert!((sol.x[0] - 2.0).abs() < 1e-7);
        assert!((sol.x[1] - 3.0).abs() < 1e-7);
        assert_eq!(sol.duals_ineq.len(), 4);
        assert!(sol.duals_ineq.iter().all(|&z| z >= 0.0));
    }

    #[test]
    fn redundant_equalities_are_dropped() {
        // the same equality twice, plus its double
        let p = lp(
            vec![1.0, 1.0],
            vec![
                (vec![(0, 1.0), (1, 1.0)], 1.0),
                (vec![(0, 1.0), (1, 1.0)], 1.0),
                (vec![(0, 2.0), (1, 2.0)], 2.0),
            ],
            vec![(vec![(0, -1.0)], 0.0), (vec![(1, -1.0)], 0.0)],
        );
        let sol = solve(&p, &IpmOptions::default());
        assert_eq!(sol.status.kind, StatusKind::Optimal);
        assert!((sol.status.primal_obj - 1.0).abs() < 1e-8);
        assert_eq!(sol.duals_eq.len(), 3);
    }

    #[test]
    fn degenerate_lp_high_accuracy() {
        // min |x| style LP: min z s.t. z >= x, z >= -x, x = 0.25
        let p = lp(
            vec![0.0, 1.0],
            vec![(vec![(0, 1.0)], 0.25)],
            vec![(vec![(0, 1.0), (1, -1.0)], 0.0), (vec![(0, -1.0), (1, -1.0)], 0.0)],
        );
        let sol = solve(&p, &IpmOptions::default());
        assert_eq!(sol.status.kind, StatusKind::Optimal);
        assert!((sol.status.primal_obj - 0.25).abs() < 1e-9);
        assert!(sol.status.duality_gap <= 1e-9 * (1.0 + sol.status.primal_obj.abs()));
    }

    #[test]
    fn equality_only_problems() {
        // min x^2 + y^2 s.t. x + y = 2 -> (1, 1)
        let mut p = lp(vec![0.0, 0.0], vec![(vec![(0, 1.0), (1, 1.0)], 2.0)], vec![]);
        p.objective_quadratic = vec![(0, 0, 2.0), (1, 1, 2.0)];
        let sol = solve(&p, &IpmOptions::default());
        assert_eq!(sol.status.kind, StatusKind::Optimal);
        assert!((sol.x[0] - 1.0).abs() < 1e-8);

        // min x s.t. x + y = 2 is unbounded
        let p = lp(vec![1.0, 0.0], vec![(vec![(0, 1.0), (1, 1.0)], 2.0)], vec![]);
        let sol = solve(&p, &IpmOptions::default());
        assert_eq!(sol.status.kind, StatusKind::Unbounded);
    }
}
