//! Relaxation instances: linear constraints, perspective-epigraph records,
//! PSD blocks, box bounds and a linear objective.
//!
//! A `ConvexModel` is immutable once built and is the interchange format of
//! the `relax solve` command (see the JSON schema in the README).

use crate::funcs::{perspective_eval, ScalarConvex};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Affine expression over model variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct LinExpr {
    pub terms: Vec<(usize, f64)>,
    #[serde(default)]
    pub constant: f64,
}

impl LinExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        Self {
            terms: vec![],
            constant: c,
        }
    }

    pub fn var(j: usize) -> Self {
        Self {
            terms: vec![(j, 1.0)],
            constant: 0.0,
        }
    }

    pub fn term(j: usize, c: f64) -> Self {
        Self {
            terms: vec![(j, c)],
            constant: 0.0,
        }
    }

    pub fn add_term(&mut self, j: usize, c: f64) -> &mut Self {
        if c != 0.0 {
            self.terms.push((j, c));
        }
        self
    }

    pub fn eval(&self, point: &[f64]) -> f64 {
        self.constant + self.terms.iter().map(|&(j, c)| c * point[j]).sum::<f64>()
    }

    /// Combine duplicate indices and sort; keeps comparisons structural.
    pub fn normalize(&mut self) {
        self.terms.sort_by_key(|&(j, _)| j);
        let mut out: Vec<(usize, f64)> = Vec::with_capacity(self.terms.len());
        for &(j, c) in &self.terms {
            match out.last_mut() {
                Some((lj, lc)) if *lj == j => *lc += c,
                _ => out.push((j, c)),
            }
        }
        out.retain(|&(_, c)| c != 0.0);
        self.terms = out;
    }

    /// The homogeneous part (constant dropped), for recession analysis.
    pub fn homogeneous(&self) -> Self {
        Self {
            terms: self.terms.clone(),
            constant: 0.0,
        }
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms
            .iter()
            .map(|&(_, c)| c.abs())
            .fold(self.constant.abs(), f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowOp {
    Le,
    Eq,
    Ge,
}

/// `terms . v  op  rhs`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearConstraint {
    pub terms: Vec<(usize, f64)>,
    pub op: RowOp,
    pub rhs: f64,
}

impl LinearConstraint {
    pub fn violation(&self, point: &[f64]) -> f64 {
        let lhs: f64 = self.terms.iter().map(|&(j, c)| c * point[j]).sum();
        match self.op {
            RowOp::Le => (lhs - self.rhs).max(0.0),
            RowOp::Ge => (self.rhs - lhs).max(0.0),
            RowOp::Eq => (lhs - self.rhs).abs(),
        }
    }
}

/// Perspective epigraph record: `z_expr * f(x_expr / z_expr) <= t_var`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerspConstraint {
    pub f: ScalarConvex,
    pub x_expr: LinExpr,
    pub z_expr: LinExpr,
    pub t_var: usize,
}

/// Symbol-indexed symmetric matrix of affine expressions, constrained PSD.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsdBlock {
    pub dim: usize,
    pub entries: Vec<Vec<LinExpr>>,
}

impl PsdBlock {
    /// Evaluate to a dense symmetric matrix at a point.
    pub fn eval(&self, point: &[f64]) -> Vec<Vec<f64>> {
        self.entries
            .iter()
            .map(|row| row.iter().map(|e| e.eval(point)).collect())
            .collect()
    }
}

fn lb_default() -> f64 {
    f64::NEG_INFINITY
}
fn ub_default() -> f64 {
    f64::INFINITY
}

/// Named variable with (possibly infinite) box bounds. Infinite bounds
/// serialize as null.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    #[serde(
        default = "lb_default",
        serialize_with = "ser_bound",
        deserialize_with = "de_lb"
    )]
    pub lb: f64,
    #[serde(
        default = "ub_default",
        serialize_with = "ser_bound",
        deserialize_with = "de_ub"
    )]
    pub ub: f64,
}

fn ser_bound<S: serde::Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_some(v)
    } else {
        s.serialize_none()
    }
}

fn de_lb<'de, D: serde::Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NEG_INFINITY))
}

fn de_ub<'de, D: serde::Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelError {
    BadVariableRef { what: &'static str, index: usize },
    AsymmetricPsd { block: usize },
    BadBounds { var: usize },
    NegativeScaleExpr { record: usize, min: f64 },
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::BadVariableRef { what, index } => {
                write!(f, "{what} references unknown variable {index}")
            }
            ModelError::AsymmetricPsd { block } => write!(f, "psd block {block} is not symmetric"),
            ModelError::BadBounds { var } => write!(f, "variable {var} has lb > ub"),
            ModelError::NegativeScaleExpr { record, min } => write!(
                f,
                "perspective record {record} has scale expression with minimum {min} < 0 \
                 over the linear constraints"
            ),
        }
    }
}

impl std::error::Error for ModelError {}

/// A relaxation instance. Built by the `hulls`, `sdpreg` and `logit`
/// builders; solved by `solver::solve`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct ConvexModel {
    pub variables: Vec<Variable>,
    pub linear: Vec<LinearConstraint>,
    pub persp: Vec<PerspConstraint>,
    pub psd: Vec<PsdBlock>,
    pub objective: LinExpr,
}

impl ConvexModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, name: impl Into<String>, lb: f64, ub: f64) -> usize {
        self.variables.push(Variable {
            name: name.into(),
            lb,
            ub,
        });
        self.variables.len() - 1
    }

    pub fn n_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    pub fn add_le(&mut self, terms: Vec<(usize, f64)>, rhs: f64) {
        self.linear.push(LinearConstraint {
            terms,
            op: RowOp::Le,
            rhs,
        });
    }

    pub fn add_eq(&mut self, terms: Vec<(usize, f64)>, rhs: f64) {
        self.linear.push(LinearConstraint {
            terms,
            op: RowOp::Eq,
            rhs,
        });
    }

    /// Structural validation: references resolve, bounds ordered, PSD blocks
    /// symmetric. The LP nonnegativity check for perspective scales lives in
    /// `solver::check_scale_exprs` (it needs the LP core).
    pub fn validate(&self) -> Result<(), ModelError> {
        let n = self.n_vars();
        let check_expr = |e: &LinExpr, what: &'static str| -> Result<(), ModelError> {
            for &(j, _) in &e.terms {
                if j >= n {
                    return Err(ModelError::BadVariableRef { what, index: j });
                }
            }
            Ok(())
        };
        for (i, v) in self.variables.iter().enumerate() {
            if v.lb > v.ub {
                return Err(ModelError::BadBounds { var: i });
            }
        }
        for row in &self.linear {
            for &(j, _) in &row.terms {
                if j >= n {
                    return Err(ModelError::BadVariableRef {
                        what: "linear row",
                        index: j,
                    });
                }
            }
        }
        for rec in &self.persp {
            check_expr(&rec.x_expr, "perspective x expression")?;
            check_expr(&rec.z_expr, "perspective scale expression")?;
            if rec.t_var >= n {
                return Err(ModelError::BadVariableRef {
                    what: "perspective epigraph variable",
                    index: rec.t_var,
                });
            }
        }
        for (b, block) in self.psd.iter().enumerate() {
            if block.entries.len() != block.dim
                || block.entries.iter().any(|r| r.len() != block.dim)
            {
                return Err(ModelError::AsymmetricPsd { block: b });
            }
            for i in 0..block.dim {
                for j in 0..block.dim {
                    check_expr(&block.entries[i][j], "psd entry")?;
                    let mut a = block.entries[i][j].clone();
                    let mut bb = block.entries[j][i].clone();
                    a.normalize();
                    bb.normalize();
                    if a != bb {
                        return Err(ModelError::AsymmetricPsd { block: b });
                    }
                }
            }
        }
        check_expr(&self.objective, "objective")?;
        Ok(())
    }

    /// Maximum constraint violation of a point (box, linear, perspective,
    /// PSD via Gershgorin-free exact eigenvalues is left to the solver; here
    /// PSD violation uses the most negative Rayleigh quotient over
    /// coordinate pairs, adequate for validity spot-checks in tests).
    pub fn feasibility_violation(&self, point: &[f64]) -> f64 {
        let mut v: f64 = 0.0;
        for (j, var) in self.variables.iter().enumerate() {
            v = v.max(var.lb - point[j]).max(point[j] - var.ub);
        }
        for row in &self.linear {
            v = v.max(row.violation(point));
        }
        for rec in &self.persp {
            let x = rec.x_expr.eval(point);
            let z = rec.z_expr.eval(point).max(0.0);
            let t = point[rec.t_var];
            let g = perspective_eval(&rec.f, x, z).expect("z clamped nonnegative");
            if g.is_infinite() {
                return f64::INFINITY;
            }
            v = v.max(g - t);
        }
        for block in &self.psd {
            let m = block.eval(point);
            v = v.max(-crate::solver::min_eigenpair(&m).0);
        }
        v
    }

    /// Scale of the numeric data, used to derive the default Kelley box.
    pub fn data_scale(&self) -> f64 {
        let mut s: f64 = 1.0;
        for row in &self.linear {
            for &(_, c) in &row.terms {
                s = s.max(c.abs());
            }
            s = s.max(row.rhs.abs());
        }
        for v in &self.variables {
            if v.lb.is_finite() {
                s = s.max(v.lb.abs());
            }
            if v.ub.is_finite() {
                s = s.max(v.ub.abs());
            }
        }
        s = s.max(self.objective.max_abs_coeff());
        for rec in &self.persp {
            s = s.max(rec.x_expr.max_abs_coeff());
            s = s.max(rec.z_expr.max_abs_coeff());
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("model serialization cannot fail")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, String> {
        let m: ConvexModel = serde_json::from_value(v.clone()).map_err(|e| e.to_string())?;
        m.validate().map_err(|e| e.to_string())?;
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_catches_bad_reference() {
        let mut m = ConvexModel::new();
        let z = m.add_var("z", 0.0, 1.0);
        m.add_le(vec![(z, 1.0), (7, 1.0)], 1.0);
        assert!(matches!(
            m.validate(),
            Err(ModelError::BadVariableRef { .. })
        ));
    }

    #[test]
    fn validate_catches_asymmetric_psd() {
        let mut m = ConvexModel::new();
        let a = m.add_var("a", 0.0, 1.0);
        let b = m.add_var("b", 0.0, 1.0);
        m.psd.push(PsdBlock {
            dim: 2,
            entries: vec![
                vec![LinExpr::var(a), LinExpr::var(a)],
                vec![LinExpr::var(b), LinExpr::var(b)],
            ],
        });
        assert!(matches!(m.validate(), Err(ModelError::AsymmetricPsd { .. })));
    }

    #[test]
    fn json_round_trip_with_infinite_bounds() {
        let mut m = ConvexModel::new();
        let z = m.add_var("z", 0.0, 1.0);
        let b = m.add_var("beta", f64::NEG_INFINITY, f64::INFINITY);
        let t = m.add_var("t", f64::NEG_INFINITY, f64::INFINITY);
        m.add_le(vec![(z, 1.0)], 1.0);
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
        let j = m.to_json();
        assert!(j["variables"][1]["lb"].is_null());
        let back = ConvexModel::from_json(&j).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn linexpr_normalize_combines() {
        let mut e = LinExpr {
            terms: vec![(2, 1.0), (0, 2.0), (2, -1.0), (1, 3.0)],
            constant: 1.5,
        };
        e.normalize();
        assert_eq!(e.terms, vec![(0, 2.0), (1, 3.0)]);
    }
}
