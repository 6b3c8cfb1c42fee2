//! Self-contained dense LP solver: minimize c'x subject to rows
//! `a'x {<=, =, >=} b` and per-variable bounds `[lo, hi]` with `lo`
//! defaulting to 0 and `hi` to +inf.
//!
//! Two-phase primal simplex on a dense tableau. Dantzig pricing with a
//! switch to Bland's rule after 5(m+n) iterations; rows scaled to unit
//! inf-norm (the parameter LPs mix O(1) and O(1/b^2) coefficients); for
//! small problems the tableau is periodically rebuilt from the basis to
//! shed accumulated rounding. Duals are read off the final tableau so
//! optima can be certified by weak duality.

use crate::error::Error;
use crate::Result;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl Relation {
    fn flipped(self) -> Relation {
        match self {
            Relation::Le => Relation::Ge,
            Relation::Eq => Relation::Eq,
            Relation::Ge => Relation::Le,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        }
    }
}

/// A dense LP in minimization form.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub rows: Vec<(Vec<f64>, Relation, f64)>,
    /// Per-variable [lo, hi]; missing entries mean [0, +inf).
    pub bounds: Vec<(f64, f64)>,
}

impl LinearProgram {
    pub fn new(objective: Vec<f64>) -> Self {
        let n = objective.len();
        LinearProgram {
            objective,
            rows: Vec::new(),
            bounds: vec![(0.0, f64::INFINITY); n],
        }
    }

    pub fn n_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_row(&mut self, coeffs: Vec<f64>, rel: Relation, rhs: f64) {
        self.rows.push((coeffs, rel, rhs));
    }

    pub fn set_bounds(&mut self, var: usize, lo: f64, hi: f64) {
        self.bounds[var] = (lo, hi);
    }

    fn validate(&self) -> Result<()> {
        let n = self.n_vars();
        if n == 0 {
            return Err(Error::MalformedLp("no variables".into()));
        }
        for (i, (coeffs, _, rhs)) in self.rows.iter().enumerate() {
            if coeffs.len() != n {
                return Err(Error::MalformedLp(format!(
                    "row {i} has width {} but the objective has {n}",
                    coeffs.len()
                )));
            }
            if !rhs.is_finite() {
                return Err(Error::MalformedLp(format!("row {i} has non-finite rhs")));
            }
            if coeffs.iter().any(|c| !c.is_finite()) {
                return Err(Error::MalformedLp(format!(
                    "row {i} has a non-finite coefficient"
                )));
            }
        }
        for (v, &(lo, hi)) in self.bounds.iter().enumerate() {
            if !lo.is_finite() {
                return Err(Error::MalformedLp(format!(
                    "variable {v} has a non-finite lower bound (free variables unsupported)"
                )));
            }
            if hi < lo {
                return Err(Error::MalformedLp(format!("variable {v} has hi < lo")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub objective_value: f64,
    pub iterations: usize,
    /// One multiplier per original row (zeros unless Optimal).
    pub dual: Vec<f64>,
    pub warnings: Vec<String>,
}

const PIVOT_TOL: f64 = 1e-10;
const FEAS_TOL: f64 = 1e-9;
/// Tableau rebuilds are O(m^2 (m + n)); only worth it on small problems.
const REFACTOR_MAX_ROWS: usize = 400;
const REFACTOR_EVERY: usize = 100;

/// Internal standardized problem: min c'x, Ax = b, x >= 0, b >= 0.
struct StandardLp {
    n_user: usize,
    n_cols: usize,
    m: usize,
    a: Vec<f64>, // m x n_cols, row-major
    b: Vec<f64>,
    c: Vec<f64>,
    artificial_from: usize,
    /// (original row index, scale, sign, slack/artificial column) data for
    /// recovering duals: column used, sign flip, scale divisor.
    row_recover: Vec<(usize, f64, f64, usize)>,
    shift: Vec<f64>,
    obj_constant: f64,
    warnings: Vec<String>,
}

fn standardize(lp: &LinearProgram) -> Result<StandardLp> {
    lp.validate()?;
    let n = lp.n_vars();
    let mut warnings = Vec::new();

    // Shift variables by their lower bounds and turn finite upper bounds
    // into extra rows.
    let shift: Vec<f64> = lp.bounds.iter().map(|&(lo, _)| lo).collect();
    let mut rows: Vec<(Vec<f64>, Relation, f64, usize)> = Vec::new();
    for (i, (coeffs, rel, rhs)) in lp.rows.iter().enumerate() {
        let adj: f64 = coeffs.iter().zip(&shift).map(|(a, s)| a * s).sum();
        rows.push((coeffs.clone(), *rel, rhs - adj, i));
    }
    for (v, &(lo, hi)) in lp.bounds.iter().enumerate() {
        if hi.is_finite() {
            let mut coeffs = vec![0.0; n];
            coeffs[v] = 1.0;
            rows.push((coeffs, Relation::Le, hi - lo, usize::MAX));
        }
    }
    let obj_constant: f64 = lp.objective.iter().zip(&shift).map(|(c, s)| c * s).sum();

    // Scale rows to unit inf-norm, flip negative rhs, drop empty rows.
    let mut scaled: Vec<(Vec<f64>, Relation, f64, usize, f64, f64)> = Vec::new();
    for (coeffs, rel, rhs, orig) in rows {
        let maxabs = coeffs.iter().fold(0.0f64, |m, &c| m.max(c.abs()));
        if maxabs < 1e-13 {
            let ok = match rel {
                Relation::Le => rhs >= -FEAS_TOL,
                Relation::Ge => rhs <= FEAS_TOL,
                Relation::Eq => rhs.abs() <= FEAS_TOL,
            };
            if ok {
                // 0-row that is trivially satisfied.
                if orig != usize::MAX {
                    warnings.push(format!("dropped empty row {orig}"));
                }
                continue;
            }
            // 0 = nonzero: fall through so phase 1 sees the contradiction
            // through an unremovable artificial.
        }
        let scale = maxabs.max(1e-13);
        let mut coeffs: Vec<f64> = coeffs.into_iter().map(|c| c / scale).collect();
        let mut rhs = rhs / scale;
        let mut rel = rel;
        let mut sign = 1.0;
        if rhs < 0.0 {
            for c in coeffs.iter_mut() {
                *c = -*c;
            }
            rhs = -rhs;
            rel = rel.flipped();
            sign = -1.0;
        }
        scaled.push((coeffs, rel, rhs, orig, scale, sign));
    }

    let m = scaled.len();
    let n_slack: usize = scaled
        .iter()
        .filter(|r| matches!(r.1, Relation::Le | Relation::Ge))
        .count();
    let n_art: usize = scaled
        .iter()
        .filter(|r| matches!(r.1, Relation::Ge | Relation::Eq))
        .count();
    let n_cols = n + n_slack + n_art;
    let artificial_from = n + n_slack;

    let mut a = vec![0.0; m * n_cols];
    let mut b = vec![0.0; m];
    let mut row_recover = Vec::with_capacity(m);
    let mut slack_idx = n;
    let mut art_idx = artificial_from;
    for (r, (coeffs, rel, rhs, orig, scale, sign)) in scaled.into_iter().enumerate() {
        a[r * n_cols..r * n_cols + n].copy_from_slice(&coeffs);
        b[r] = rhs;
        let recover_col = match rel {
            Relation::Le => {
                a[r * n_cols + slack_idx] = 1.0;
                let col = slack_idx;
                slack_idx += 1;
                col
            }
            Relation::Ge => {
                a[r * n_cols + slack_idx] = -1.0;
                a[r * n_cols + art_idx] = 1.0;
                slack_idx += 1;
                let col = art_idx;
                art_idx += 1;
                col
            }
            Relation::Eq => {
                a[r * n_cols + art_idx] = 1.0;
                let col = art_idx;
                art_idx += 1;
                col
            }
        };
        row_recover.push((orig, scale, sign, recover_col));
    }

    let mut c = vec![0.0; n_cols];
    c[..n].copy_from_slice(&lp.objective);

    Ok(StandardLp {
        n_user: n,
        n_cols,
        m,
        a,
        b,
        c,
        artificial_from,
        row_recover,
        shift,
        obj_constant,
        warnings,
        kept_rows: m,
    })
}

struct Tableau {
    /// (m + 1) x (n_cols + 1); last row is reduced costs, last column rhs.
    data: Vec<f64>,
    m: usize,
    width: usize,
    basis: Vec<usize>,
    iterations: usize,
}

impl Tableau {
    fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.width + c]
    }

    fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.width..(r + 1) * self.width]
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let w = self.width;
        let pval = self.data[pr * w + pc];
        let inv = 1.0 / pval;
        for j in 0..w {
            self.data[pr * w + j] *= inv;
        }
        self.data[pr * w + pc] = 1.0;
        let pivot_row: Vec<f64> = self.row(pr).to_vec();
        for r in 0..=self.m {
            if r == pr {
                continue;
            }
            let factor = self.data[r * w + pc];
            if factor == 0.0 {
                continue;
            }
            let base = r * w;
            for j in 0..w {
                self.data[base + j] -= factor * pivot_row[j];
            }
            self.data[base + pc] = 0.0;
        }
        self.basis[pr] = pc;
        self.iterations += 1;
    }
}

enum PhaseOutcome {
    Done,
    Unbounded,
}

/// Run the simplex loop until no eligible column improves the objective.
fn run_simplex(
    t: &mut Tableau,
    eligible: &dyn Fn(usize) -> bool,
    std: &StandardLp,
    rebuild_cost: Option<&[f64]>,
    max_iters: usize,
) -> Result<PhaseOutcome> {
    let w = t.width;
    let bland_after = t.iterations + 5 * (t.m + std.n_cols);
    let mut since_refactor = 0usize;
    loop {
        if t.iterations >= max_iters {
            return Err(Error::LpIterationLimit {
                iterations: t.iterations,
            });
        }
        let obj_base = t.m * w;
        // Entering column: Dantzig first, Bland once degeneracy drags on.
        let bland = t.iterations >= bland_after;
        let mut enter: Option<usize> = None;
        let mut best = -PIVOT_TOL;
        for j in 0..w - 1 {
            if !eligible(j) {
                continue;
            }
            let rc = t.data[obj_base + j];
            if bland {
                if rc < -PIVOT_TOL {
                    enter = Some(j);
                    break;
                }
            } else if rc < best {
                best = rc;
                enter = Some(j);
            }
        }
        let Some(pc) = enter else {
            return Ok(PhaseOutcome::Done);
        };
        // Ratio test; ties break toward the smallest basis variable.
        let mut leave: Option<usize> = None;
        let mut best_ratio = f64::INFINITY;
        for r in 0..t.m {
            let coeff = t.at(r, pc);
            if coeff > PIVOT_TOL {
                let ratio = t.at(r, w - 1) / coeff;
                let better = match leave {
                    None => true,
                    Some(prev) => {
                        ratio < best_ratio - 1e-12
                            || (ratio < best_ratio + 1e-12 && t.basis[r] < t.basis[prev])
                    }
                };
                if better {
                    best_ratio = ratio;
                    leave = Some(r);
                }
            }
        }
        let Some(pr) = leave else {
            return Ok(PhaseOutcome::Unbounded);
        };
        t.pivot(pr, pc);
        since_refactor += 1;
        if t.m <= REFACTOR_MAX_ROWS && since_refactor >= REFACTOR_EVERY {
            if let Some(cost) = rebuild_cost {
                rebuild_from_basis(t, std, cost);
                since_refactor = 0;
            }
        }
    }
}

/// Rebuild the tableau from the original standardized data given the
/// current basis (Gauss-Jordan on the basis columns), discarding
/// accumulated floating-point drift.
fn rebuild_from_basis(t: &mut Tableau, std: &StandardLp, cost: &[f64]) {
    let w = t.width;
    let m = t.m;
    // Load [A | b].
    for r in 0..m {
        for j in 0..std.n_cols {
            t.data[r * w + j] = std.a[r * std.n_cols + j];
        }
        t.data[r * w + std.n_cols] = std.b[r];
    }
    // Eliminate so that basis column j of row r becomes e_r.
    for r in 0..m {
        let bc = t.basis[r];
        // Partial pivot within the remaining rows on column bc.
        let mut best = r;
        let mut best_abs = t.at(r, bc).abs();
        for rr in r + 1..m {
            let v = t.at(rr, bc).abs();
            if v > best_abs {
                best_abs = v;
                best = rr;
            }
        }
        if best != r {
            for j in 0..w {
                t.data.swap(r * w + j, best * w + j);
            }
            t.basis.swap(r, best);
        }
        let pval = t.at(r, bc);
        if pval.abs() < 1e-13 {
            continue; // singular basis column; leave as-is
        }
        let inv = 1.0 / pval;
        for j in 0..w {
            t.data[r * w + j] *= inv;
        }
        let pivot_row: Vec<f64> = t.row(r).to_vec();
        for rr in 0..m {
            if rr == r {
                continue;
            }
            let factor = t.at(rr, bc);
            if factor == 0.0 {
                continue;
            }
            for j in 0..w {
                t.data[rr * w + j] -= factor * pivot_row[j];
            }
        }
    }
    // Objective row: c - c_B B^-1 A.
    for j in 0..w {
        t.data[m * w + j] = if j < std.n_cols { cost[j] } else { 0.0 };
    }
    for r in 0..m {
        let cb = cost[t.basis[r]];
        if cb == 0.0 {
            continue;
        }
        let base = r * w;
        for j in 0..w {
            t.data[m * w + j] -= cb * t.data[base + j];
        }
    }
}

/// Solve the LP. Optimal solutions satisfy the primal-feasibility and
/// duality-gap invariants checked by [`verify_certificates`]; numerical
/// failure surfaces as an explicit error, never a silent wrong answer.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution> {
    let std = standardize(lp)?;
    let m = std.m;
    let w = std.n_cols + 1;

    let mut t = Tableau {
        data: vec![0.0; (m + 1) * w],
        m,
        width: w,
        basis: vec![0; m],
        iterations: 0,
    };
    for r in 0..m {
        for j in 0..std.n_cols {
            t.data[r * w + j] = std.a[r * std.n_cols + j];
        }
        t.data[r * w + std.n_cols] = std.b[r];
        // Initial basis: the recovery column is the +1 slack for <= rows
        // and the +1 artificial for >= and = rows, a feasible start either way.
        t.basis[r] = std.row_recover[r].3;
    }

    // Phase 1: minimize the artificial sum.
    let phase1_cost: Vec<f64> = (0..std.n_cols)
        .map(|j| if j >= std.artificial_from { 1.0 } else { 0.0 })
        .collect();
    for j in 0..std.n_cols {
        t.data[m * w + j] = phase1_cost[j];
    }
    for r in 0..m {
        if t.basis[r] >= std.artificial_from {
            for j in 0..w {
                t.data[m * w + j] -= t.data[r * w + j];
            }
        }
    }
    let max_iters = 50 * (m + std.n_cols) + 10_000;
    match run_simplex(&mut t, &|_| true, &std, Some(&phase1_cost), max_iters)? {
        PhaseOutcome::Unbounded => {
            return Err(Error::MalformedLp(
                "phase 1 unbounded; should be impossible".into(),
            ))
        }
        PhaseOutcome::Done => {}
    }
    let phase1_obj = -t.at(m, w - 1);
    if phase1_obj > 1e-7 {
        return Ok(LpSolution {
            status: LpStatus::Infeasible,
            x: vec![0.0; std.n_user],
            objective_value: f64::NAN,
            iterations: t.iterations,
            dual: vec![0.0; lp.rows.len()],
            warnings: std.warnings,
        });
    }

    // Drive out artificials still basic at level zero.
    for r in 0..m {
        if t.basis[r] >= std.artificial_from {
            let pc = (0..std.artificial_from).find(|&j| t.at(r, j).abs() > 1e-7);
            if let Some(pc) = pc {
                t.pivot(r, pc);
            }
        }
    }

    // Phase 2: the real objective over the current basis.
    for j in 0..w {
        t.data[m * w + j] = if j < std.n_cols { std.c[j] } else { 0.0 };
    }
    {
        let mut adjust: Vec<(usize, f64)> = Vec::new();
        for r in 0..m {
            let cb = std.c[t.basis[r]];
            if cb != 0.0 {
                adjust.push((r, cb));
            }
        }
        for (r, cb) in adjust {
            for j in 0..w {
                t.data[m * w + j] -= cb * t.data[r * w + j];
            }
        }
    }
    let artificial_from = std.artificial_from;
    let still_basic_artificial: Vec<usize> = t
        .basis
        .iter()
        .copied()
        .filter(|&c| c >= artificial_from)
        .collect();
    let eligible = move |j: usize| j < artificial_from;
    match run_simplex(&mut t, &eligible, &std, Some(&std.c), max_iters)? {
        PhaseOutcome::Unbounded => {
            return Ok(LpSolution {
                status: LpStatus::Unbounded,
                x: vec![0.0; std.n_user],
                objective_value: f64::NEG_INFINITY,
                iterations: t.iterations,
                dual: vec![0.0; lp.rows.len()],
                warnings: std.warnings,
            });
        }
        PhaseOutcome::Done => {}
    }
    let mut warnings = std.warnings.clone();
    if !still_basic_artificial.is_empty() {
        warnings.push(format!(
            "{} redundant rows kept an artificial basic at level 0",
            still_basic_artificial.len()
        ));
    }

    // Extract the primal point.
    let mut x_std = vec![0.0; std.n_cols];
    for r in 0..m {
        x_std[t.basis[r]] = t.at(r, w - 1);
    }
    let x: Vec<f64> = (0..std.n_user)
        .map(|j| x_std[j] + std.shift[j])
        .collect();
    let objective_value = lp
        .objective
        .iter()
        .zip(&x_std[..std.n_user])
        .map(|(c, v)| c * v)
        .sum::<f64>()
        + std.obj_constant;

    // Duals from the reduced costs of each row's slack/artificial column:
    // rc(col) = c_col - y . A_col, with c_col = 0 and A_col = +-e_r.
    let mut dual = vec![0.0; lp.rows.len()];
    for (r, &(orig, scale, sign, col)) in std.row_recover.iter().enumerate() {
        if orig == usize::MAX {
            continue; // internal bound row
        }
        let a_col = std.a[r * std.n_cols + col];
        let rc = t.at(m, col);
        let y_scaled = -rc / a_col;
        dual[orig] = sign * y_scaled / scale;
    }

    Ok(LpSolution {
        status: LpStatus::Optimal,
        x,
        objective_value,
        iterations: t.iterations,
        dual,
        warnings,
    })
}

/// Check an Optimal solution's certificates against the LP: primal
/// feasibility within 1e-7 (1 + |b|_inf), dual sign feasibility, reduced
/// costs, and the duality gap within 1e-7 (1 + |obj|).
pub fn verify_certificates(lp: &LinearProgram, sol: &LpSolution) -> Result<()> {
    if sol.status != LpStatus::Optimal {
        return Err(Error::Domain("certificates only exist for Optimal".into()));
    }
    let b_inf = lp
        .rows
        .iter()
        .map(|r| r.2.abs())
        .fold(0.0f64, f64::max);
    let feas_tol = 1e-7 * (1.0 + b_inf);
    for (i, (coeffs, rel, rhs)) in lp.rows.iter().enumerate() {
        let lhs: f64 = coeffs.iter().zip(&sol.x).map(|(a, x)| a * x).sum();
        let ok = match rel {
            Relation::Le => lhs <= rhs + feas_tol,
            Relation::Ge => lhs >= rhs - feas_tol,
            Relation::Eq => (lhs - rhs).abs() <= feas_tol,
        };
        if !ok {
            return Err(Error::Domain(format!(
                "row {i} violated: lhs = {lhs}, rhs = {rhs}"
            )));
        }
        let y = sol.dual[i];
        let sign_ok = match rel {
            Relation::Le => y <= feas_tol,
            Relation::Ge => y >= -feas_tol,
            Relation::Eq => true,
        };
        if !sign_ok {
            return Err(Error::Domain(format!(
                "dual multiplier {y} for row {i} has the wrong sign"
            )));
        }
    }
    for (v, &(lo, hi)) in lp.bounds.iter().enumerate() {
        if sol.x[v] < lo - feas_tol || sol.x[v] > hi + feas_tol {
            return Err(Error::Domain(format!(
                "variable {v} = {} violates bounds [{lo}, {hi}]",
                sol.x[v]
            )));
        }
    }
    // Weak duality on the shifted problem (all lower bounds folded in).
    // With finite upper bounds the internal bound rows carry duals we do
    // not surface; restrict the gap check to LPs without them.
    if lp.bounds.iter().all(|&(_, hi)| !hi.is_finite()) {
        let shift_obj: f64 = lp
            .objective
            .iter()
            .zip(lp.bounds.iter())
            .map(|(c, &(lo, _))| c * lo)
            .sum();
        let dual_obj: f64 = sol
            .dual
            .iter()
            .zip(&lp.rows)
            .map(|(y, (coeffs, _, rhs))| {
                let adj: f64 = coeffs
                    .iter()
                    .zip(lp.bounds.iter())
                    .map(|(a, &(lo, _))| a * lo)
                    .sum();
                y * (rhs - adj)
            })
            .sum::<f64>()
            + shift_obj;
        let gap = (sol.objective_value - dual_obj).abs();
        if gap > 1e-7 * (1.0 + sol.objective_value.abs()) {
            return Err(Error::Domain(format!(
                "duality gap {gap} between primal {} and dual {dual_obj}",
                sol.objective_value
            )));
        }
    }
    Ok(())
}

/// Export in the plain text format:
/// first line `min c...`, then one row per line `rel rhs coeffs...`,
/// then optional `bnd var lo hi` lines for non-default bounds.
pub fn to_text(lp: &LinearProgram) -> String {
    let mut out = String::from("min");
    for c in &lp.objective {
        out.push_str(&format!(" {c}"));
    }
    out.push('\n');
    for (coeffs, rel, rhs) in &lp.rows {
        out.push_str(rel.symbol());
        out.push_str(&format!(" {rhs}"));
        for c in coeffs {
            out.push_str(&format!(" {c}"));
        }
        out.push('\n');
    }
    for (v, &(lo, hi)) in lp.bounds.iter().enumerate() {
        if lo != 0.0 || hi.is_finite() {
            out.push_str(&format!("bnd {v} {lo} {hi}\n"));
        }
    }
    out
}

/// Import the text format written by [`to_text`].
pub fn from_text(text: &str) -> Result<LinearProgram> {
    let mut lp: Option<LinearProgram> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let head = fields.next().unwrap();
        let parse = |f: &str| -> Result<f64> {
            if f == "inf" {
                return Ok(f64::INFINITY);
            }
            f.parse().map_err(|_| Error::Parse {
                line: idx + 1,
                message: format!("bad number `{f}`"),
            })
        };
        match head {
            "min" => {
                let obj: Result<Vec<f64>> = fields.map(parse).collect();
                lp = Some(LinearProgram::new(obj?));
            }
            "<=" | "=" | ">=" => {
                let lp = lp.as_mut().ok_or(Error::Parse {
                    line: idx + 1,
                    message: "row before the objective line".into(),
                })?;
                let rel = match head {
                    "<=" => Relation::Le,
                    "=" => Relation::Eq,
                    _ => Relation::Ge,
                };
                let vals: Result<Vec<f64>> = fields.map(parse).collect();
                let vals = vals?;
                if vals.len() != lp.n_vars() + 1 {
                    return Err(Error::Parse {
                        line: idx + 1,
                        message: format!(
                            "expected rhs + {} coefficients, got {}",
                            lp.n_vars(),
                            vals.len()
                        ),
                    });
                }
                lp.add_row(vals[1..].to_vec(), rel, vals[0]);
            }
            "bnd" => {
                let lp = lp.as_mut().ok_or(Error::Parse {
                    line: idx + 1,
                    message: "bounds before the objective line".into(),
                })?;
                let vals: Vec<&str> = fields.collect();
                if vals.len() != 3 {
                    return Err(Error::Parse {
                        line: idx + 1,
                        message: "expected `bnd var lo hi`".into(),
                    });
                }
                let var: usize = vals[0].parse().map_err(|_| Error::Parse {
                    line: idx + 1,
                    message: format!("bad index `{}`", vals[0]),
                })?;
                lp.set_bounds(var, parse(vals[1])?, parse(vals[2])?);
            }
            other => {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: format!("unknown directive `{other}`"),
                });
            }
        }
    }
    lp.ok_or(Error::Parse {
        line: 0,
        message: "empty program".into(),
    })
}
