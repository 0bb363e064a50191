//! Dense two-phase primal simplex, plus the two wrappers the rest of the
//! crate needs: balanced transportation problems and max-min margin programs.
//!
//! Problems here are tiny (tens of variables), so the implementation favors
//! auditability over speed: a dense tableau, Bland's anti-cycling rule, and
//! reduced costs recomputed from the basis each pivot.

use crate::{Error, Result};

/// Feasibility and reduced-cost tolerance.  A phase-1 optimum above this is
/// reported as infeasible; reduced costs within it count as optimal.
pub const LP_TOL: f64 = 1e-9;

/// Pivot elements smaller than this are treated as zero.
const PIVOT_TOL: f64 = 1e-10;

/// A linear program in standard form: minimize `objective . x` subject to
/// `rows[i] . x = rhs[i]` and `x >= 0`.
#[derive(Debug, Clone)]
pub struct StandardForm {
    /// Cost coefficients, one per structural variable.
    pub objective: Vec<f64>,
    /// Constraint matrix rows, each the same length as `objective`.
    pub rows: Vec<Vec<f64>>,
    /// Right-hand sides, one per row (any sign; rows are normalized internally).
    pub rhs: Vec<f64>,
}

/// Outcome of [`solve`].
#[derive(Debug, Clone, PartialEq)]
pub enum LpSolution {
    /// Finite optimum with an attaining point.
    Optimal {
        /// Optimal objective value.
        objective: f64,
        /// Primal solution, one entry per structural variable.
        x: Vec<f64>,
    },
    /// No feasible point.
    Infeasible,
    /// Feasible but the objective decreases without bound.
    Unbounded,
}

struct Tableau {
    /// rows x (n_total + 1); last column is the rhs.
    t: Vec<Vec<f64>>,
    basis: Vec<usize>,
    n_total: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> f64 {
        self.t[i][self.n_total]
    }

    /// One simplex phase: minimize `cost . x_all` over the current basis.
    /// `banned` columns never enter.  Returns false on unboundedness.
    fn run(&mut self, cost: &[f64], banned: &[bool]) -> bool {
        loop {
            // Reduced costs from the current basis.
            let mut entering = None;
            for j in 0..self.n_total {
                if banned[j] || self.basis.contains(&j) {
                    continue;
                }
                let mut red = cost[j];
                for (i, &b) in self.basis.iter().enumerate() {
                    red -= cost[b] * self.t[i][j];
                }
                if red < -LP_TOL {
                    entering = Some(j);
                    break; // Bland: smallest eligible index.
                }
            }
            let Some(j) = entering else { return true };

            // Ratio test, ties broken by smallest basic variable index (Bland).
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.t.len() {
                let a = self.t[i][j];
                if a > PIVOT_TOL {
                    let ratio = self.rhs(i) / a;
                    match leave {
                        None => leave = Some((i, ratio)),
                        Some((li, lr)) => {
                            if ratio < lr - PIVOT_TOL
                                || ((ratio - lr).abs() <= PIVOT_TOL
                                    && self.basis[i] < self.basis[li])
                            {
                                leave = Some((i, ratio));
                            }
                        }
                    }
                }
            }
            let Some((i, _)) = leave else { return false };
            self.pivot(i, j);
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.t[row][col];
        for v in self.t[row].iter_mut() {
            *v /= p;
        }
        for i in 0..self.t.len() {
            if i != row {
                let f = self.t[i][col];
                if f != 0.0 {
                    for j in 0..=self.n_total {
                        self.t[i][j] -= f * self.t[row][j];
                    }
                }
            }
        }
        self.basis[row] = col;
    }
}

/// Solve a standard-form LP with the two-phase primal simplex.
///
/// # Errors
/// Returns [`Error::InvalidInput`] on shape mismatches or non-finite entries.
pub fn solve(lp: &StandardForm) -> Result<LpSolution> {
    let n = lp.objective.len();
    let m = lp.rows.len();
    if lp.rhs.len() != m {
        return Err(Error::invalid("rhs length must match row count"));
    }
    for r in &lp.rows {
        if r.len() != n {
            return Err(Error::invalid("row length must match objective length"));
        }
    }
    let finite = lp.objective.iter().all(|v| v.is_finite())
        && lp.rhs.iter().all(|v| v.is_finite())
        && lp.rows.iter().flatten().all(|v| v.is_finite());
    if !finite {
        return Err(Error::invalid("LP coefficients must be finite"));
    }

    let n_total = n + m;
    let mut t = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = vec![0.0; n_total + 1];
        let flip = if lp.rhs[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            row[j] = flip * lp.rows[i][j];
        }
        row[n + i] = 1.0; // artificial
        row[n_total] = flip * lp.rhs[i];
        t.push(row);
    }
    let mut tab = Tableau {
        t,
        basis: (n..n_total).collect(),
        n_total,
    };

    // Phase 1: minimize the sum of artificials.
    let mut cost1 = vec![0.0; n_total];
    for c in cost1.iter_mut().skip(n) {
        *c = 1.0;
    }
    let banned_none = vec![false; n_total];
    if !tab.run(&cost1, &banned_none) {
        // Phase 1 is bounded below by 0; unbounded here means a bug.
        return Err(Error::Internal("phase 1 reported unbounded".into()));
    }
    let phase1: f64 = tab
        .basis
        .iter()
        .enumerate()
        .filter(|(_, &b)| b >= n)
        .map(|(i, _)| tab.rhs(i))
        .sum();
    if phase1 > LP_TOL {
        return Ok(LpSolution::Infeasible);
    }

    // Pivot zero-level artificials out where possible; ban all artificials.
    for i in 0..m {
        if tab.basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| tab.t[i][j].abs() > PIVOT_TOL) {
                tab.pivot(i, j);
            }
            // A fully zero structural row is redundant; its artificial stays
            // basic at level zero and is banned from moving.
        }
    }
    let mut banned = vec![false; n_total];
    for b in banned.iter_mut().skip(n) {
        *b = true;
    }

    // Phase 2 with the real objective.
    let mut cost2 = vec![0.0; n_total];
    cost2[..n].copy_from_slice(&lp.objective);
    if !tab.run(&cost2, &banned) {
        return Ok(LpSolution::Unbounded);
    }

    let mut x = vec![0.0; n];
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < n {
            x[b] = tab.rhs(i);
        }
    }
    let objective = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    Ok(LpSolution::Optimal { objective, x })
}

/// Minimum-cost transportation plan between two finitely supported measures
/// with equal total mass.
///
/// Returns the optimal cost and the plan as a `supply.len() x demand.len()`
/// matrix.
///
/// # Errors
/// Returns [`Error::InvalidInput`] if masses are negative, totals differ by
/// more than `1e-9`, or shapes mismatch; [`Error::Internal`] if the solver
/// fails on what is by construction a feasible bounded problem.
pub fn transportation(
    cost: &[Vec<f64>],
    supply: &[f64],
    demand: &[f64],
) -> Result<(f64, Vec<Vec<f64>>)> {
    let nr = supply.len();
    let nc = demand.len();
    if nr == 0 || nc == 0 {
        return Err(Error::invalid("transportation requires nonempty marginals"));
    }
    if cost.len() != nr || cost.iter().any(|r| r.len() != nc) {
        return Err(Error::invalid("cost matrix shape must match marginals"));
    }
    if supply.iter().chain(demand).any(|&v| v < 0.0) {
        return Err(Error::invalid("marginal masses must be nonnegative"));
    }
    let (ts, td): (f64, f64) = (supply.iter().sum(), demand.iter().sum());
    if (ts - td).abs() > 1e-9 {
        return Err(Error::invalid(format!(
            "marginal totals differ: {ts} vs {td}"
        )));
    }

    let nv = nr * nc;
    let mut rows = Vec::with_capacity(nr + nc);
    let mut rhs = Vec::with_capacity(nr + nc);
    for i in 0..nr {
        let mut r = vec![0.0; nv];
        for j in 0..nc {
            r[i * nc + j] = 1.0;
        }
        rows.push(r);
        rhs.push(supply[i]);
    }
    for j in 0..nc {
        let mut r = vec![0.0; nv];
        for i in 0..nr {
            r[i * nc + j] = 1.0;
        }
        rows.push(r);
        rhs.push(demand[j]);
    }
    let objective: Vec<f64> = (0..nv).map(|k| cost[k / nc][k % nc]).collect();
    match solve(&StandardForm { objective, rows, rhs })? {
        LpSolution::Optimal { objective, x } => {
            let plan = (0..nr)
                .map(|i| x[i * nc..(i + 1) * nc].to_vec())
                .collect();
            Ok((objective, plan))
        }
        other => Err(Error::Internal(format!(
            "transportation problem not solved: {other:?}"
        ))),
    }
}

/// Value of the max-min margin program used by best-reply certificates.
///
/// Choose one probability vector `sigma_t` over `n_cols` columns for each
/// support index `t` (weights `w_t >= 0`), to maximize the minimum over
/// alternatives `a` of
///
/// ```text
///   sum_t w_t sum_col sigma_t[col] * diffs[a][col][t]
/// ```
///
/// Returns `+inf` when there are no alternatives (nothing to beat).
///
/// # Errors
/// Returns [`Error::InvalidInput`] on shape mismatches or when there are no
/// columns; [`Error::Internal`] if the LP solver fails on this always-feasible
/// bounded program.
pub fn max_min_margin(weights: &[f64], diffs: &[Vec<Vec<f64>>]) -> Result<f64> {
    let nt = weights.len();
    if nt == 0 {
        return Err(Error::invalid("max_min_margin requires nonempty weights"));
    }
    if diffs.is_empty() {
        return Ok(f64::INFINITY);
    }
    let nc = diffs[0].len();
    if nc == 0 {
        return Err(Error::invalid("max_min_margin requires at least one column"));
    }
    for d in diffs {
        if d.len() != nc || d.iter().any(|col| col.len() != nt) {
            return Err(Error::invalid("diffs shape must be [alts][cols][support]"));
        }
    }

    // Shift the free margin variable: s = u - bound, u >= 0.  Any attainable
    // margin is within [-bound, bound] because weights sum to at most 1 per
    // unit and diffs are bounded.
    let bound = 1.0
        + diffs
            .iter()
            .flatten()
            .flatten()
            .fold(0.0f64, |m, &v| m.max(v.abs()));

    let na = diffs.len();
    // Variables: sigma[t*nc + col] (nt*nc), u (1), slack per alternative (na).
    let nv = nt * nc + 1 + na;
    let u_ix = nt * nc;
    let mut rows = Vec::with_capacity(nt + na);
    let mut rhs = Vec::with_capacity(nt + na);
    for t in 0..nt {
        let mut r = vec![0.0; nv];
        for col in 0..nc {
            r[t * nc + col] = 1.0;
        }
        rows.push(r);
        rhs.push(1.0);
    }
    for (a, d) in diffs.iter().enumerate() {
        // sum_t w_t sum_col sigma d - u - slack_a = -bound
        let mut r = vec![0.0; nv];
        for (col, per_t) in d.iter().enumerate() {
            for (t, &v) in per_t.iter().enumerate() {
                r[t * nc + col] = weights[t] * v;
            }
        }
        r[u_ix] = -1.0;
        r[u_ix + 1 + a] = -1.0;
        rows.push(r);
        rhs.push(-bound);
    }
    let mut objective = vec![0.0; nv];
    objective[u_ix] = -1.0; // maximize u
    match solve(&StandardForm { objective, rows, rhs })? {
        LpSolution::Optimal { x, .. } => Ok(x[u_ix] - bound),
        other => Err(Error::Internal(format!(
            "max-min margin program not solved: {other:?}"
        ))),
    }
}
