//! Desk-scale cutting-plane solver.
//!
//! Kelley outer approximation over a bounded-variable simplex core:
//! perspective records contribute gradient cuts of the closed perspective,
//! PSD blocks contribute eigenvector cuts `v' M(x) v >= 0`. Compactness
//! comes from an artificial box on unbounded variables; when the box binds
//! at termination, a recession subproblem decides between a genuine
//! unbounded verdict and an honest `BoxBinding` flag.

pub mod eig;
pub mod simplex;

pub use eig::{min_eigenpair, symmetric_eigen};

use crate::funcs::{perspective_cut, perspective_eval, EPS_PERSP};
use crate::hulls::model::{ConvexModel, LinExpr, ModelError, RowOp};
use serde::{Deserialize, Serialize};
use simplex::{LpStatus, SimplexLp};
use std::fmt;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub tol_feas: f64,
    pub tol_gap: f64,
    pub max_iter: usize,
    /// Artificial box half-width for unbounded variables; default is ten
    /// times the model data scale.
    pub box_radius: Option<f64>,
    pub eig_tol: f64,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol_feas: 1e-7,
            tol_gap: 1e-6,
            max_iter: 5000,
            box_radius: None,
            eig_tol: 1e-8,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Optimal,
    Unbounded,
    IterLimit,
    BoxBinding,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveReport {
    pub status: SolveStatus,
    /// Lower bound on the relaxation optimum (negative infinity when
    /// unbounded). Valid whenever no artificial box binds.
    pub value: f64,
    pub point: Vec<f64>,
    pub var_names: Vec<String>,
    pub cuts_persp: usize,
    pub cuts_psd: usize,
    pub max_violation: f64,
    pub iterations: usize,
    /// Names of artificially boxed variables that terminated on the box.
    pub box_binding: Vec<String>,
    /// Certified recession direction when status is Unbounded.
    pub ray: Option<Vec<f64>>,
}

#[derive(Debug)]
pub enum SolveError {
    LpInfeasible,
    Model(ModelError),
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::LpInfeasible => write!(f, "the model's constraints are contradictory"),
            SolveError::Model(e) => write!(f, "invalid model: {e}"),
        }
    }
}

impl std::error::Error for SolveError {}

impl From<ModelError> for SolveError {
    fn from(e: ModelError) -> Self {
        SolveError::Model(e)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum CutKind {
    Persp,
    Psd,
}

struct CutRow {
    row: usize,
    kind: CutKind,
    inactive_age: usize,
}

/// A reusable solve session: the accumulated cuts are valid for the model's
/// feasible set and carry over across objective changes, which makes
/// repeated certification solves on one model cheap.
pub struct Session {
    model: ConvexModel,
    cfg: SolverConfig,
    lp: SimplexLp,
    n: usize,
    art_lo: Vec<bool>,
    art_hi: Vec<bool>,
    work_lo: Vec<f64>,
    work_hi: Vec<f64>,
    cuts: Vec<CutRow>,
    lift_floor: Vec<f64>,
    cuts_persp: usize,
    cuts_psd: usize,
    /// Disables the unboundedness certification (used inside the recession
    /// solve itself, which is fully boxed).
    certify_unbounded: bool,
    last_purge_iter: usize,
}

const MAX_LIVE_ROWS: usize = 20_000;
const PURGE_AGE: usize = 50;
const MAX_PSD_CUTS_PER_ITER: usize = 60;

impl Session {
    pub fn new(model: &ConvexModel, cfg: &SolverConfig) -> Result<Self, SolveError> {
        model.validate()?;
        let n = model.n_vars();
        let scale = model.data_scale();
        let radius = cfg.box_radius.unwrap_or(10.0 * scale);
        let mut work_lo = Vec::with_capacity(n);
        let mut work_hi = Vec::with_capacity(n);
        let mut art_lo = vec![false; n];
        let mut art_hi = vec![false; n];
        for (j, v) in model.variables.iter().enumerate() {
            if v.lb.is_finite() {
                work_lo.push(v.lb);
            } else {
                work_lo.push(-radius);
                art_lo[j] = true;
            }
            if v.ub.is_finite() {
                work_hi.push(v.ub);
            } else {
                work_hi.push(radius);
                art_hi[j] = true;
            }
        }
        let mut cost = vec![0.0; n];
        for &(j, c) in &model.objective.terms {
            cost[j] += c;
        }
        let mut lp = SimplexLp::new(work_lo.clone(), work_hi.clone(), cost);
        for row in &model.linear {
            lp.add_row(&row.terms, row.op, row.rhs);
        }
        let lift = vec![1e-2; model.persp.len()];
        Ok(Self {
            model: model.clone(),
            cfg: cfg.clone(),
            lp,
            n,
            art_lo,
            art_hi,
            work_lo,
            work_hi,
            cuts: Vec::new(),
            lift_floor: lift,
            cuts_persp: 0,
            cuts_psd: 0,
            certify_unbounded: true,
            last_purge_iter: 0,
        })
    }

    /// Solve with the model's own objective.
    pub fn solve_current(&mut self) -> Result<SolveReport, SolveError> {
        let obj = self.model.objective.clone();
        self.solve_with_objective(&obj)
    }

    /// Solve with a replacement linear objective, reusing accumulated cuts.
    pub fn solve_with_objective(&mut self, obj: &LinExpr) -> Result<SolveReport, SolveError> {
        let mut cost = vec![0.0; self.n];
        for &(j, c) in &obj.terms {
            assert!(j < self.n, "objective references unknown variable");
            cost[j] += c;
        }
        self.lp.set_objective(&cost);

        let (mut converged, mut iterations, mut max_violation) = self.run_kelley()?;
        let mut point: Vec<f64> = self.lp.values()[..self.n].to_vec();
        let mut value = self.lp.objective_value() + obj.constant;
        let names: Vec<String> = self.model.variables.iter().map(|v| v.name.clone()).collect();

        let mut binding = if converged { self.binding_names(&point) } else { vec![] };
        if converged && !binding.is_empty() && self.certify_unbounded {
            // The optimal face may merely touch the artificial box (the
            // optimum need not be unique). Widen the box and re-solve warm:
            // if the value does not move, the contact is spurious.
            for _ in 0..3 {
                let prev = value;
                self.widen_artificial_boxes(4.0);
                let (c2, it2, mv2) = self.run_kelley()?;
                iterations += it2;
                max_violation = mv2;
                if !c2 {
                    converged = false;
                    binding.clear();
                    break;
                }
                point = self.lp.values()[..self.n].to_vec();
                value = self.lp.objective_value() + obj.constant;
                binding = self.binding_names(&point);
                if binding.is_empty() {
                    break;
                }
                if (prev - value).abs() <= self.cfg.tol_gap * prev.abs().max(1.0) {
                    binding.clear(); // value indifferent to the box
                    break;
                }
            }
        }

        if !converged {
            return Ok(SolveReport {
                status: SolveStatus::IterLimit,
                value,
                point,
                var_names: names,
                cuts_persp: self.cuts_persp,
                cuts_psd: self.cuts_psd,
                max_violation,
                iterations,
                box_binding: vec![],
                ray: None,
            });
        }

        if binding.is_empty() || !self.certify_unbounded {
            return Ok(SolveReport {
                status: if binding.is_empty() {
                    SolveStatus::Optimal
                } else {
                    SolveStatus::BoxBinding
                },
                value,
                point,
                var_names: names,
                cuts_persp: self.cuts_persp,
                cuts_psd: self.cuts_psd,
                max_violation,
                iterations,
                box_binding: binding,
                ray: None,
            });
        }

        // The box binds: decide Unbounded vs BoxBinding via the recession
        // problem min c.d over the asymptotic feasible directions.
        let (rec_value, ray) = self.recession_value(obj)?;
        let tol_unb = self.cfg.tol_gap.max(1e-6) * obj.max_abs_coeff().max(1.0);
        if rec_value < -tol_unb {
            return Ok(SolveReport {
                status: SolveStatus::Unbounded,
                value: f64::NEG_INFINITY,
                point,
                var_names: names,
                cuts_persp: self.cuts_persp,
                cuts_psd: self.cuts_psd,
                max_violation,
                iterations,
                box_binding: binding,
                ray,
            });
        }
        Ok(SolveReport {
            status: SolveStatus::BoxBinding,
            value,
            point,
            var_names: names,
            cuts_persp: self.cuts_persp,
            cuts_psd: self.cuts_psd,
            max_violation,
            iterations,
            box_binding: binding,
            ray: None,
        })
    }

    /// The Kelley loop: solve, cut, purge, until feasible or out of budget.
    fn run_kelley(&mut self) -> Result<(bool, usize, f64), SolveError> {
        let mut iterations = 0;
        let mut max_violation = f64::INFINITY;
        let mut best_violation = f64::INFINITY;
        let mut stall = 0usize;
        while iterations < self.cfg.max_iter {
            iterations += 1;
            match self.lp.solve() {
                LpStatus::Optimal => {}
                LpStatus::Infeasible => return Err(SolveError::LpInfeasible),
                LpStatus::Unbounded => {
                    unreachable!("all working variables have finite boxes")
                }
            }
            let point: Vec<f64> = self.lp.values()[..self.n].to_vec();
            self.age_and_purge(iterations);
            max_violation = self.violations_and_cuts(&point);
            if max_violation <= self.cfg.tol_feas {
                return Ok((true, iterations, max_violation));
            }
            if max_violation < best_violation * (1.0 - 1e-12) {
                best_violation = max_violation;
                stall = 0;
            } else {
                stall += 1;
                if stall > 120 {
                    break; // no progress; report the sound bound as IterLimit
                }
            }
        }
        Ok((false, iterations, max_violation))
    }

    /// Names of artificially boxed variables sitting on the box.
    fn binding_names(&self, point: &[f64]) -> Vec<String> {
        let mut binding = Vec::new();
        for j in 0..self.n {
            let tol = 1e-6 * self.work_lo[j].abs().max(self.work_hi[j].abs()).max(1.0);
            if (self.art_lo[j] && (point[j] - self.work_lo[j]).abs() <= tol)
                || (self.art_hi[j] && (point[j] - self.work_hi[j]).abs() <= tol)
            {
                binding.push(self.model.variables[j].name.clone());
            }
        }
        binding
    }

    fn widen_artificial_boxes(&mut self, factor: f64) {
        for j in 0..self.n {
            if self.art_lo[j] {
                self.work_lo[j] *= factor;
            }
            if self.art_hi[j] {
                self.work_hi[j] *= factor;
            }
            if self.art_lo[j] || self.art_hi[j] {
                self.lp.set_col_bounds(j, self.work_lo[j], self.work_hi[j]);
            }
        }
    }

    /// Evaluate all nonlinear constraints at the point; add cuts for the
    /// violated ones. Returns the maximum violation.
    fn violations_and_cuts(&mut self, point: &[f64]) -> f64 {
        let mut maxviol: f64 = 0.0;
        let tol = self.cfg.tol_feas;
        let mut new_rows: Vec<(Vec<(usize, f64)>, RowOp, f64, CutKind)> = Vec::new();

        for r in 0..self.model.persp.len() {
            let rec = &self.model.persp[r];
            let x = rec.x_expr.eval(point);
            let zraw = rec.z_expr.eval(point).max(0.0);
            let t = point[rec.t_var];
            let zc = zraw.max(EPS_PERSP);
            let val = perspective_eval(&rec.f, x, zc).expect("scale clamped positive");
            let viol = val - t;
            maxviol = maxviol.max(viol);
            if viol <= tol {
                continue;
            }
            // Lift near-zero scales before anchoring; the lift floor shrinks
            // toward EPS_PERSP so the cut slopes grow only as needed.
            let z0 = if zraw < self.lift_floor[r] {
                let f = self.lift_floor[r];
                self.lift_floor[r] = (f * 0.1).max(EPS_PERSP);
                f
            } else {
                zraw
            };
            let cut = perspective_cut(&rec.f, x, z0);
            // Row: slope_x * x_expr + slope_z * z_expr - t <= 0, normalized.
            let mut terms: Vec<(usize, f64)> = Vec::new();
            for &(j, c) in &rec.x_expr.terms {
                terms.push((j, cut.slope_x * c));
            }
            for &(j, c) in &rec.z_expr.terms {
                terms.push((j, cut.slope_z * c));
            }
            terms.push((rec.t_var, -1.0));
            let rhs = -(cut.slope_x * rec.x_expr.constant + cut.slope_z * rec.z_expr.constant);
            let norm = terms
                .iter()
                .map(|&(_, c)| c.abs())
                .fold(rhs.abs(), f64::max)
                .max(1.0);
            let terms: Vec<(usize, f64)> = terms.into_iter().map(|(j, c)| (j, c / norm)).collect();
            new_rows.push((terms, RowOp::Le, rhs / norm, CutKind::Persp));
        }

        if !self.model.psd.is_empty() {
            let mut candidates: Vec<(f64, usize, Vec<f64>)> = Vec::new();
            for (b, block) in self.model.psd.iter().enumerate() {
                let m = block.eval(point);
                let (vals, vecs) = symmetric_eigen(&m);
                if let Some(&lmin) = vals.first() {
                    maxviol = maxviol.max(-lmin);
                }
                for (k, &lam) in vals.iter().enumerate() {
                    if lam < -self.cfg.eig_tol {
                        candidates.push((lam, b, vecs[k].clone()));
                    } else {
                        break;
                    }
                }
            }
            candidates.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            for (_, b, v) in candidates.into_iter().take(MAX_PSD_CUTS_PER_ITER) {
                let block = &self.model.psd[b];
                // v' M(x) v >= 0 is linear in x.
                let mut expr = LinExpr::zero();
                for i in 0..block.dim {
                    for jj in 0..block.dim {
                        let w = v[i] * v[jj];
                        if w == 0.0 {
                            continue;
                        }
                        let e = &block.entries[i][jj];
                        expr.constant += w * e.constant;
                        for &(col, c) in &e.terms {
                            expr.add_term(col, w * c);
                        }
                    }
                }
                expr.normalize();
                let norm = expr.max_abs_coeff().max(1e-12);
                let terms: Vec<(usize, f64)> =
                    expr.terms.iter().map(|&(j, c)| (j, c / norm)).collect();
                new_rows.push((terms, RowOp::Ge, -expr.constant / norm, CutKind::Psd));
            }
        }

        if maxviol > tol {
            for (terms, op, rhs, kind) in new_rows {
                let row = self.lp.add_row(&terms, op, rhs);
                match kind {
                    CutKind::Persp => self.cuts_persp += 1,
                    CutKind::Psd => self.cuts_psd += 1,
                }
                self.cuts.push(CutRow {
                    row,
                    kind,
                    inactive_age: 0,
                });
                assert!(self.lp.n_rows() <= MAX_LIVE_ROWS, "cut storage exhausted");
            }
        }
        maxviol
    }

    /// Age cut rows by slack activity and purge long-inactive ones.
    fn age_and_purge(&mut self, iteration: usize) {
        for cut in self.cuts.iter_mut() {
            let slack = self.lp.row_slack(cut.row).abs();
            if slack > 1e-7 {
                cut.inactive_age += 1;
            } else {
                cut.inactive_age = 0;
            }
        }
        if iteration < self.last_purge_iter + 25 {
            return;
        }
        let mut eligible: Vec<usize> = self
            .cuts
            .iter()
            .filter(|c| c.inactive_age >= PURGE_AGE)
            .map(|c| c.row)
            .collect();
        if eligible.len() < 20 && self.lp.n_rows() < MAX_LIVE_ROWS / 2 {
            return;
        }
        eligible.sort_unstable();
        let removed = self.lp.purge_rows(&eligible);
        if removed.is_empty() {
            return;
        }
        self.last_purge_iter = iteration;
        let removed_set: std::collections::HashSet<usize> = removed.iter().copied().collect();
        self.cuts.retain(|c| !removed_set.contains(&c.row));
        for cut in self.cuts.iter_mut() {
            let shift = removed.iter().filter(|&&r| r < cut.row).count();
            cut.row -= shift;
        }
    }

    /// Minimum of the objective over the asymptotic feasible directions,
    /// normalized to the unit box. Epigraph variables that are free, cost
    /// zero and appear nowhere else can absorb superlinear growth, so their
    /// records drop out of the recession system.
    fn recession_value(&self, obj: &LinExpr) -> Result<(f64, Option<Vec<f64>>), SolveError> {
        let absorbed = self.absorbable_records(obj);
        let mut rec = ConvexModel::new();
        for v in &self.model.variables {
            let lb = if v.lb.is_finite() {
                0.0
            } else {
                f64::NEG_INFINITY
            };
            let ub = if v.ub.is_finite() { 0.0 } else { f64::INFINITY };
            rec.add_var(v.name.clone(), lb, ub);
        }
        for row in &self.model.linear {
            rec.linear.push(crate::hulls::model::LinearConstraint {
                terms: row.terms.clone(),
                op: row.op,
                rhs: 0.0,
            });
        }
        for (r, p) in self.model.persp.iter().enumerate() {
            if absorbed[r] {
                continue;
            }
            rec.persp.push(crate::hulls::model::PerspConstraint {
                f: p.f,
                x_expr: p.x_expr.homogeneous(),
                z_expr: p.z_expr.homogeneous(),
                t_var: p.t_var,
            });
        }
        for block in &self.model.psd {
            rec.psd.push(crate::hulls::model::PsdBlock {
                dim: block.dim,
                entries: block
                    .entries
                    .iter()
                    .map(|row| row.iter().map(|e| e.homogeneous()).collect())
                    .collect(),
            });
        }
        rec.objective = obj.homogeneous();
        let cfg = SolverConfig {
            box_radius: Some(1.0),
            max_iter: self.cfg.max_iter.min(2000),
            ..self.cfg.clone()
        };
        let mut session = Session::new(&rec, &cfg)?;
        session.certify_unbounded = false;
        let report = session.solve_current()?;
        match report.status {
            SolveStatus::Optimal | SolveStatus::BoxBinding => {
                Ok((report.value, Some(report.point)))
            }
            // Inconclusive: do not certify unboundedness from a loose bound.
            _ => Ok((0.0, None)),
        }
    }

    /// Records whose epigraph variable can grow superlinearly at no cost:
    /// a nonnegative combination u of free variables with c.u <= 0 that
    /// satisfies the homogeneous rows, avoids every nonlinear expression,
    /// and puts positive mass on the record's epigraph variable.
    fn absorbable_records(&self, obj: &LinExpr) -> Vec<bool> {
        let nr = self.model.persp.len();
        if nr == 0 {
            return vec![];
        }
        let n = self.n;
        let mut eligible = vec![true; n];
        for (j, v) in self.model.variables.iter().enumerate() {
            if v.ub.is_finite() {
                eligible[j] = false;
            }
        }
        for p in &self.model.persp {
            for &(j, _) in &p.x_expr.terms {
                eligible[j] = false;
            }
            for &(j, _) in &p.z_expr.terms {
                eligible[j] = false;
            }
        }
        for block in &self.model.psd {
            for row in &block.entries {
                for e in row {
                    for &(j, _) in &e.terms {
                        eligible[j] = false;
                    }
                }
            }
        }
        // Variables u in [0,1]^n (0 where ineligible) plus sigma_r in [0,1];
        // maximize sum sigma subject to homogeneous rows, c.u <= 0 and
        // sigma_r <= u_{t_r}.
        let mut lo = vec![0.0; n + nr];
        let mut hi = vec![0.0; n + nr];
        let mut cost = vec![0.0; n + nr];
        for j in 0..n {
            hi[j] = if eligible[j] { 1.0 } else { 0.0 };
        }
        for r in 0..nr {
            hi[n + r] = 1.0;
            cost[n + r] = -1.0;
        }
        lo.iter_mut().for_each(|v| *v = 0.0);
        let mut lp = SimplexLp::new(lo, hi, cost);
        for row in &self.model.linear {
            lp.add_row(&row.terms, row.op, 0.0);
        }
        if !obj.terms.is_empty() {
            lp.add_row(&obj.terms, RowOp::Le, 0.0);
        }
        for (r, p) in self.model.persp.iter().enumerate() {
            lp.add_row(&[(n + r, 1.0), (p.t_var, -1.0)], RowOp::Le, 0.0);
        }
        if lp.solve() != LpStatus::Optimal {
            return vec![false; nr];
        }
        (0..nr).map(|r| lp.values()[n + r] > 1e-6).collect()
    }
}

/// One-shot solve of a model with the given configuration.
pub fn solve(model: &ConvexModel, cfg: &SolverConfig) -> Result<SolveReport, SolveError> {
    Session::new(model, cfg)?.solve_current()
}

/// Minimum of a linear expression over the model's linear rows and boxes
/// (unbounded sides clipped to the data-scale box).
pub fn min_expr_over_linear(model: &ConvexModel, expr: &LinExpr) -> Result<f64, SolveError> {
    let n = model.n_vars();
    let radius = 10.0 * model.data_scale();
    let lo: Vec<f64> = model
        .variables
        .iter()
        .map(|v| if v.lb.is_finite() { v.lb } else { -radius })
        .collect();
    let hi: Vec<f64> = model
        .variables
        .iter()
        .map(|v| if v.ub.is_finite() { v.ub } else { radius })
        .collect();
    let mut cost = vec![0.0; n];
    for &(j, c) in &expr.terms {
        cost[j] += c;
    }
    let mut lp = SimplexLp::new(lo, hi, cost);
    for row in &model.linear {
        lp.add_row(&row.terms, row.op, row.rhs);
    }
    match lp.solve() {
        LpStatus::Optimal => Ok(lp.objective_value() + expr.constant),
        LpStatus::Infeasible => Err(SolveError::LpInfeasible),
        LpStatus::Unbounded => Ok(f64::NEG_INFINITY),
    }
}

/// LP check that every perspective record's scale expression is nonnegative
/// over the linear constraints (with a cheap sign-based fast path).
pub fn check_scale_exprs(model: &ConvexModel) -> Result<(), SolveError> {
    for (r, rec) in model.persp.iter().enumerate() {
        let obviously_nonneg = rec.z_expr.constant >= 0.0
            && rec.z_expr.terms.iter().all(|&(j, c)| {
                (c >= 0.0 && model.variables[j].lb >= 0.0)
                    || (c <= 0.0 && model.variables[j].ub <= 0.0)
            });
        if obviously_nonneg {
            continue;
        }
        let min = min_expr_over_linear(model, &rec.z_expr)?;
        if min < -1e-7 * model.data_scale() {
            return Err(SolveError::Model(ModelError::NegativeScaleExpr {
                record: r,
                min,
            }));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcs::ScalarConvex;
    use crate::hulls::model::{PerspConstraint, PsdBlock};

    /// Proposition-2 style model for p=1: f(b) <= t, z f(b/z) <= t, z in [0,1].
    fn prop2_p1() -> ConvexModel {
        let mut m = ConvexModel::new();
        let z = m.add_var("z1", 0.0, 1.0);
        let b = m.add_var("b1", f64::NEG_INFINITY, f64::INFINITY);
        let t = m.add_var("t", f64::NEG_INFINITY, f64::INFINITY);
        m.persp.push(PerspConstraint {
            f: ScalarConvex::Quadratic,
            x_expr: LinExpr::var(b),
            z_expr: LinExpr::constant(1.0),
            t_var: t,
        });
        m.persp.push(PerspConstraint {
            f: ScalarConvex::Quadratic,
            x_expr: LinExpr::var(b),
            z_expr: LinExpr::var(z),
            t_var: t,
        });
        m.objective = LinExpr {
            terms: vec![(z, 0.5), (b, -2.0), (t, 1.0)],
            constant: 0.0,
        };
        m
    }

    #[test]
    fn perspective_hull_point_p1() {
        // min 0.5 z - 2 b + t = a z - f*(-b) at z=1: 0.5 - 1 = -0.5.
        let m = prop2_p1();
        let report = solve(&m, &SolverConfig::default()).unwrap();
        assert_eq!(report.status, SolveStatus::Optimal);
        assert!(
            (report.value + 0.5).abs() < 1e-6,
            "value {} != -0.5",
            report.value
        );
        assert!((report.point[0] - 1.0).abs() < 5e-3, "z {}", report.point[0]);
        assert!((report.point[1] - 1.0).abs() < 5e-3, "b {}", report.point[1]);
    }

    #[test]
    fn constant_indefinite_psd_block_is_infeasible() {
        let mut m = ConvexModel::new();
        let x = m.add_var("x", 0.0, 1.0);
        m.psd.push(PsdBlock {
            dim: 2,
            entries: vec![
                vec![LinExpr::constant(1.0), LinExpr::constant(2.0)],
                vec![LinExpr::constant(2.0), LinExpr::constant(1.0)],
            ],
        });
        m.objective = LinExpr::var(x);
        let err = solve(&m, &SolverConfig::default());
        assert!(matches!(err, Err(SolveError::LpInfeasible)));
    }

    #[test]
    fn negative_cost_on_epigraph_is_unbounded() {
        let mut m = prop2_p1();
        let t = m.var_index("t").unwrap();
        m.objective = LinExpr::term(t, -1.0);
        let report = solve(&m, &SolverConfig::default()).unwrap();
        assert_eq!(report.status, SolveStatus::Unbounded);
        assert!(report.value.is_infinite() && report.value < 0.0);
    }

    #[test]
    fn zero_epigraph_cost_with_beta_objective_is_unbounded() {
        // c = 0, b != 0: the epigraph variable absorbs the superlinear
        // growth, so the problem is unbounded along beta.
        let mut m = prop2_p1();
        let b = m.var_index("b1").unwrap();
        m.objective = LinExpr::term(b, 1.0);
        let report = solve(&m, &SolverConfig::default()).unwrap();
        assert_eq!(report.status, SolveStatus::Unbounded);
    }

    #[test]
    fn psd_2x2_reproduces_rotated_cone() {
        // Block [[z, b], [b, B]] >= 0: minimizing B - b under z <= 1
        // converges to the rotated-cone boundary b^2 = z B.
        let mut m = ConvexModel::new();
        let z = m.add_var("z", 0.0, 1.0);
        let b = m.add_var("b", f64::NEG_INFINITY, f64::INFINITY);
        let bb = m.add_var("B", 0.0, 10.0);
        m.psd.push(PsdBlock {
            dim: 2,
            entries: vec![
                vec![LinExpr::var(z), LinExpr::var(b)],
                vec![LinExpr::var(b), LinExpr::var(bb)],
            ],
        });
        m.objective = LinExpr {
            terms: vec![(bb, 1.0), (b, -1.0)],
            constant: 0.0,
        };
        let report = solve(&m, &SolverConfig::default()).unwrap();
        assert_eq!(report.status, SolveStatus::Optimal);
        // min B - b s.t. b^2 <= zB, z <= 1 attains -1/4 at z=1, b=1/2, B=1/4.
        assert!((report.value + 0.25).abs() < 1e-5, "value {}", report.value);
        let p = &report.point;
        assert!(p[1] * p[1] <= p[0] * p[2] + 1e-5, "b^2 <= zB violated");
    }

    #[test]
    fn deterministic_reports() {
        let m = prop2_p1();
        let r1 = solve(&m, &SolverConfig::default()).unwrap();
        let r2 = solve(&m, &SolverConfig::default()).unwrap();
        assert_eq!(r1.value, r2.value);
        assert_eq!(r1.point, r2.point);
        assert_eq!(r1.iterations, r2.iterations);
        assert_eq!(r1.cuts_persp, r2.cuts_persp);
    }

    #[test]
    fn anytime_bound_is_sound() {
        // With any iteration budget the reported value never exceeds the
        // true relaxation optimum (-0.5).
        let m = prop2_p1();
        for cap in [1usize, 2, 3, 5, 8, 13] {
            let cfg = SolverConfig {
                max_iter: cap,
                ..SolverConfig::default()
            };
            let report = solve(&m, &cfg).unwrap();
            assert!(
                report.value <= -0.5 + 1e-6,
                "anytime bound {} exceeds optimum",
                report.value
            );
        }
    }

    #[test]
    fn session_reuses_cuts_across_objectives() {
        let m = prop2_p1();
        let mut session = Session::new(&m, &SolverConfig::default()).unwrap();
        let r1 = session.solve_current().unwrap();
        let cuts_after_first = r1.cuts_persp;
        let obj2 = LinExpr {
            terms: vec![(0, -0.3), (1, 2.0), (2, 1.0)],
            constant: 0.0,
        };
        let r2 = session.solve_with_objective(&obj2).unwrap();
        assert_eq!(r2.status, SolveStatus::Optimal);
        // min -0.3 z + 2 b + t attains -0.3 - f*(-2) = -1.3 at z=1, b=-1.
        assert!((r2.value + 1.3).abs() < 1e-6, "value {}", r2.value);
        assert!(r2.cuts_persp >= cuts_after_first);
    }

    #[test]
    fn check_scale_exprs_flags_negative() {
        let mut m = ConvexModel::new();
        let z = m.add_var("z", 0.0, 1.0);
        let b = m.add_var("b", f64::NEG_INFINITY, f64::INFINITY);
        let t = m.add_var("t", f64::NEG_INFINITY, f64::INFINITY);
        m.persp.push(PerspConstraint {
            f: ScalarConvex::Quadratic,
            x_expr: LinExpr::var(b),
            z_expr: LinExpr {
                terms: vec![(z, 1.0)],
                constant: -0.5,
            },
            t_var: t,
        });
        m.objective = LinExpr::var(t);
        assert!(check_scale_exprs(&m).is_err());
        // z - 0.5 >= 0 once the row z >= 0.5 exists.
        m.linear.push(crate::hulls::model::LinearConstraint {
            terms: vec![(z, 1.0)],
            op: RowOp::Ge,
            rhs: 0.5,
        });
        assert!(check_scale_exprs(&m).is_ok());
    }
}
