//! Relaxation builders realizing the hull descriptions.
//!
//! Each builder returns the closed convex hull of
//! `Z_Q = {(z, b, t) : z in Q, f(h.b) <= t, b_i (1 - z_i) = 0}` for its
//! case: the connected conflict graph in the original space, the
//! disjunctive extended formulation when the graph splits, the separable
//! case, and the facet-block extended formulation.

pub mod model;

pub use model::{
    ConvexModel, LinExpr, LinearConstraint, ModelError, PerspConstraint, PsdBlock, RowOp, Variable,
};

use crate::combinatorics::{
    binary_points, facet_family_from_points, ComboError, FacetBlock, FacetFamily, Family,
    IndicatorSet,
};
use crate::funcs::ScalarConvex;
use crate::rational::rat_to_f64;
use crate::solver;
use std::fmt;

#[derive(Debug)]
pub enum HullError {
    NotConnected { components: usize },
    NotDisconnected,
    PartitionInvalid(String),
    EmptyBlocks,
    ZeroCoefficient { index: usize },
    /// Theorem preconditions violated (0 not in a component set, or an
    /// empty component facet family).
    Preconditions(String),
    Combo(ComboError),
    Invalid(String),
}

impl fmt::Display for HullError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HullError::NotConnected { components } => write!(
                f,
                "conflict graph has {components} components; use the disconnected builder"
            ),
            HullError::NotDisconnected => {
                write!(f, "conflict graph is connected; use the connected builder")
            }
            HullError::PartitionInvalid(msg) => write!(f, "blocks do not partition: {msg}"),
            HullError::EmptyBlocks => write!(f, "facet block list is empty"),
            HullError::ZeroCoefficient { index } => {
                write!(f, "h_{} = 0; remove the coordinate first", index + 1)
            }
            HullError::Preconditions(msg) => write!(f, "{msg}"),
            HullError::Combo(e) => write!(f, "{e}"),
            HullError::Invalid(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for HullError {}

impl From<ComboError> for HullError {
    fn from(e: ComboError) -> Self {
        HullError::Combo(e)
    }
}

/// A built relaxation plus the indices of the canonical variables.
#[derive(Debug, Clone)]
pub struct HullModel {
    pub model: ConvexModel,
    pub z: Vec<usize>,
    pub beta: Vec<usize>,
    pub t: usize,
}

impl HullModel {
    /// Linear objective `a.z + b.beta + c t`.
    pub fn objective_for(&self, a: &[f64], b: &[f64], c: f64) -> LinExpr {
        assert_eq!(a.len(), self.z.len());
        assert_eq!(b.len(), self.beta.len());
        let mut e = LinExpr::zero();
        for (&zi, &ai) in self.z.iter().zip(a) {
            e.add_term(zi, ai);
        }
        for (&bi, &ci) in self.beta.iter().zip(b) {
            e.add_term(bi, ci);
        }
        e.add_term(self.t, c);
        e
    }
}

fn check_h(h: &[f64]) -> Result<(), HullError> {
    for (i, &hi) in h.iter().enumerate() {
        if hi == 0.0 || !hi.is_finite() {
            return Err(HullError::ZeroCoefficient { index: i });
        }
    }
    Ok(())
}

fn h_dot_beta(h: &[f64], beta: &[usize]) -> LinExpr {
    let mut e = LinExpr::zero();
    for (&b, &hi) in beta.iter().zip(h) {
        e.add_term(b, hi);
    }
    e
}

fn pi_dot(pi: &[crate::rational::Rat], vars: &[usize]) -> LinExpr {
    let mut e = LinExpr::zero();
    for (&v, c) in vars.iter().zip(pi) {
        e.add_term(v, rat_to_f64(c));
    }
    e
}

/// Closed-form `conv(Q)` rows over the given z variables (the unit box is
/// carried by the variable bounds). The generic family uses its exact facet
/// description.
fn add_conv_rows(m: &mut ConvexModel, q: &IndicatorSet, z: &[usize]) -> Result<(), HullError> {
    let p = q.p();
    match q.family() {
        Family::Unconstrained => {}
        Family::Cardinality(k) => {
            m.add_le(z.iter().map(|&j| (j, 1.0)).collect(), *k as f64);
        }
        Family::CardinalityOne => {
            m.add_le(z.iter().map(|&j| (j, 1.0)).collect(), 1.0);
        }
        Family::StrongHierarchy => {
            for i in 0..p - 1 {
                m.add_le(vec![(z[p - 1], 1.0), (z[i], -1.0)], 0.0);
            }
        }
        Family::WeakHierarchy => {
            let mut terms: Vec<(usize, f64)> = vec![(z[p - 1], 1.0)];
            for i in 0..p - 1 {
                terms.push((z[i], -1.0));
            }
            m.add_le(terms, 0.0);
        }
        Family::ExplicitLinear { .. } => {
            let h = q.conv_hull_hrep()?;
            for (a, b) in &h.ineqs {
                let terms: Vec<(usize, f64)> = a
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !num::Zero::is_zero(*c))
                    .map(|(i, c)| (z[i], rat_to_f64(c)))
                    .collect();
                m.add_le(terms, rat_to_f64(b));
            }
            for (a, b) in &h.eqs {
                let terms: Vec<(usize, f64)> = a
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !num::Zero::is_zero(*c))
                    .map(|(i, c)| (z[i], rat_to_f64(c)))
                    .collect();
                m.add_eq(terms, rat_to_f64(b));
            }
        }
    }
    Ok(())
}

fn finish(
    model: ConvexModel,
    z: Vec<usize>,
    beta: Vec<usize>,
    t: usize,
) -> Result<HullModel, HullError> {
    model
        .validate()
        .map_err(|e| HullError::Invalid(e.to_string()))?;
    solver::check_scale_exprs(&model).map_err(|e| HullError::Invalid(e.to_string()))?;
    Ok(HullModel { model, z, beta, t })
}

/// Theorem-1 formulation: `z in conv(Q)`, the base epigraph, and one
/// perspective constraint per facet vector. Requires a connected conflict
/// graph.
pub fn build_connected(
    f: ScalarConvex,
    h: &[f64],
    q: &IndicatorSet,
    fam: &FacetFamily,
) -> Result<HullModel, HullError> {
    let p = q.p();
    assert_eq!(h.len(), p);
    check_h(h)?;
    let graph = q.conflict_graph()?;
    if !graph.is_connected() {
        return Err(HullError::NotConnected {
            components: graph.components.len(),
        });
    }
    let mut m = ConvexModel::new();
    let z: Vec<usize> = (0..p)
        .map(|i| m.add_var(format!("z{}", i + 1), 0.0, 1.0))
        .collect();
    let beta: Vec<usize> = (0..p)
        .map(|i| m.add_var(format!("b{}", i + 1), f64::NEG_INFINITY, f64::INFINITY))
        .collect();
    let t = m.add_var("t", f64::NEG_INFINITY, f64::INFINITY);
    add_conv_rows(&mut m, q, &z)?;
    let x = h_dot_beta(h, &beta);
    m.persp.push(PerspConstraint {
        f,
        x_expr: x.clone(),
        z_expr: LinExpr::constant(1.0),
        t_var: t,
    });
    for pi in &fam.rows {
        m.persp.push(PerspConstraint {
            f,
            x_expr: x.clone(),
            z_expr: pi_dot(pi, &z),
            t_var: t,
        });
    }
    finish(m, z, beta, t)
}

/// Cardinality-constrained hull: the Theorem-1 model with `F = {1}` for
/// `q >= 2`, the separable perspective model for `q = 1`.
pub fn build_cardinality(
    f: ScalarConvex,
    h: &[f64],
    p: usize,
    q: u32,
) -> Result<HullModel, HullError> {
    let set = IndicatorSet::new(p, Family::Cardinality(q))?;
    if q >= 2 || p == 1 {
        let fam = set.facet_family()?;
        return build_connected(f, h, &set, &fam);
    }
    check_h(h)?;
    assert_eq!(h.len(), p);
    let mut m = ConvexModel::new();
    let z: Vec<usize> = (0..p)
        .map(|i| m.add_var(format!("z{}", i + 1), 0.0, 1.0))
        .collect();
    let beta: Vec<usize> = (0..p)
        .map(|i| m.add_var(format!("b{}", i + 1), f64::NEG_INFINITY, f64::INFINITY))
        .collect();
    let t = m.add_var("t", f64::NEG_INFINITY, f64::INFINITY);
    let taux: Vec<usize> = (0..p)
        .map(|i| m.add_var(format!("th{}", i + 1), f64::NEG_INFINITY, f64::INFINITY))
        .collect();
    m.add_le(z.iter().map(|&j| (j, 1.0)).collect(), 1.0);
    // sum_i z_i f(h_i b_i / z_i) <= t via per-term epigraphs.
    let mut sum_terms: Vec<(usize, f64)> = taux.iter().map(|&j| (j, 1.0)).collect();
    sum_terms.push((t, -1.0));
    m.add_le(sum_terms, 0.0);
    for i in 0..p {
        m.persp.push(PerspConstraint {
            f,
            x_expr: LinExpr::term(beta[i], h[i]),
            z_expr: LinExpr::var(z[i]),
            t_var: taux[i],
        });
    }
    finish(m, z, beta, t)
}

/// Weak-hierarchy hull: `z_p <= sum_{i<p} z_i` with the perspective
/// constraint scaled by `sum_{i<p} z_i`.
pub fn build_weak_hierarchy(f: ScalarConvex, h: &[f64], p: usize) -> Result<HullModel, HullError> {
    if p < 2 {
        return Err(HullError::Combo(ComboError::UnreachableIndex { index: 0 }));
    }
    let set = IndicatorSet::new(p, Family::WeakHierarchy)?;
    let fam = set.facet_family()?;
    build_connected(f, h, &set, &fam)
}

/// Strong-hierarchy hull (`z_p <= z_i` for all i < p).
pub fn build_strong_hierarchy(
    f: ScalarConvex,
    h: &[f64],
    p: usize,
) -> Result<HullModel, HullError> {
    let set = IndicatorSet::new(p, Family::StrongHierarchy)?;
    let fam = set.facet_family()?;
    build_connected(f, h, &set, &fam)
}

/// Disjunctive extended formulation over the connected components of the
/// conflict graph: one scaled copy of each component hull glued by
/// `sum alpha = 1`, `t = sum that`, `z = sum zhat`, `beta = sum bhat`.
pub fn build_disconnected(
    f: ScalarConvex,
    h: &[f64],
    q: &IndicatorSet,
) -> Result<HullModel, HullError> {
    let p = q.p();
    assert_eq!(h.len(), p);
    check_h(h)?;
    let graph = q.conflict_graph()?;
    let k = graph.components.len();
    if k < 2 {
        return Err(HullError::NotDisconnected);
    }
    if !q.contains_zero() {
        return Err(HullError::Preconditions(
            "the origin must belong to Q for the disjunctive formulation".into(),
        ));
    }
    let members = q.enumerate()?;

    let mut m = ConvexModel::new();
    let z: Vec<usize> = (0..p)
        .map(|i| m.add_var(format!("z{}", i + 1), 0.0, 1.0))
        .collect();
    let beta: Vec<usize> = (0..p)
        .map(|i| m.add_var(format!("b{}", i + 1), f64::NEG_INFINITY, f64::INFINITY))
        .collect();
    let t = m.add_var("t", f64::NEG_INFINITY, f64::INFINITY);

    let mut alpha = Vec::with_capacity(k);
    let mut that = Vec::with_capacity(k);
    for l in 0..k {
        alpha.push(m.add_var(format!("al{}", l + 1), 0.0, 1.0));
        that.push(m.add_var(format!("th{}", l + 1), f64::NEG_INFINITY, f64::INFINITY));
    }
    m.add_eq(alpha.iter().map(|&j| (j, 1.0)).collect(), 1.0);
    let mut tsum: Vec<(usize, f64)> = that.iter().map(|&j| (j, 1.0)).collect();
    tsum.push((t, -1.0));
    m.add_eq(tsum, 0.0);

    for (l, comp) in graph.components.iter().enumerate() {
        let d = comp.len();
        // Members supported inside this component, restricted to its
        // coordinates (the origin included).
        let restricted: Vec<Vec<u8>> = members
            .iter()
            .filter(|zz| {
                zz.iter()
                    .enumerate()
                    .all(|(i, &b)| b == 0 || comp.contains(&i))
            })
            .map(|zz| comp.iter().map(|&i| zz[i]).collect())
            .collect();
        let nonzero: Vec<Vec<u8>> = restricted
            .iter()
            .filter(|zz| zz.iter().any(|&b| b == 1))
            .cloned()
            .collect();
        let fam_l = facet_family_from_points(&nonzero, d);
        if fam_l.rows.is_empty() {
            return Err(HullError::Preconditions(format!(
                "component {} has an empty facet family",
                l + 1
            )));
        }
        let hull_l = crate::combinatorics::dd::hull_of_points(&binary_points(&restricted), d);

        let zh: Vec<usize> = comp
            .iter()
            .map(|&i| m.add_var(format!("zh{}_{}", l + 1, i + 1), 0.0, 1.0))
            .collect();
        let bh: Vec<usize> = comp
            .iter()
            .map(|&i| {
                m.add_var(
                    format!("bh{}_{}", l + 1, i + 1),
                    f64::NEG_INFINITY,
                    f64::INFINITY,
                )
            })
            .collect();
        // Components partition the support, so the linking sums collapse to
        // a single copy per coordinate.
        for (slot, &i) in comp.iter().enumerate() {
            m.add_eq(vec![(z[i], 1.0), (zh[slot], -1.0)], 0.0);
            m.add_eq(vec![(beta[i], 1.0), (bh[slot], -1.0)], 0.0);
        }
        // A^l zhat <= delta^l alpha_l (the hull description is homogenized
        // by alpha, so the box facets scale as well).
        for (a, b) in &hull_l.ineqs {
            let mut terms: Vec<(usize, f64)> = a
                .iter()
                .enumerate()
                .filter(|(_, c)| !num::Zero::is_zero(*c))
                .map(|(slot, c)| (zh[slot], rat_to_f64(c)))
                .collect();
            terms.push((alpha[l], -rat_to_f64(b)));
            m.add_le(terms, 0.0);
        }
        for (a, b) in &hull_l.eqs {
            let mut terms: Vec<(usize, f64)> = a
                .iter()
                .enumerate()
                .filter(|(_, c)| !num::Zero::is_zero(*c))
                .map(|(slot, c)| (zh[slot], rat_to_f64(c)))
                .collect();
            terms.push((alpha[l], -rat_to_f64(b)));
            m.add_eq(terms, 0.0);
        }

        let hl: Vec<f64> = comp.iter().map(|&i| h[i]).collect();
        let x_l = h_dot_beta(&hl, &bh);
        m.persp.push(PerspConstraint {
            f,
            x_expr: x_l.clone(),
            z_expr: LinExpr::var(alpha[l]),
            t_var: that[l],
        });
        for pi in &fam_l.rows {
            m.persp.push(PerspConstraint {
                f,
                x_expr: x_l.clone(),
                z_expr: pi_dot(pi, &zh),
                t_var: that[l],
            });
        }
    }
    finish(m, z, beta, t)
}

/// One block of a separable objective: a scalar convex function composed
/// with `h.beta` over a coordinate subset.
#[derive(Debug, Clone)]
pub struct SepBlock {
    pub indices: Vec<usize>,
    pub f: ScalarConvex,
    pub h: Vec<f64>,
}

/// Separable hull: one perspective term per block summed into `t`, plus
/// `z in conv(Q)`; ideal for arbitrary Q.
pub fn build_separable(blocks: &[SepBlock], q: &IndicatorSet) -> Result<HullModel, HullError> {
    let l = q.p();
    if blocks.len() != l {
        return Err(HullError::PartitionInvalid(format!(
            "{} blocks for {} indicators",
            blocks.len(),
            l
        )));
    }
    let total: usize = blocks.iter().map(|b| b.indices.len()).sum();
    let mut seen = vec![false; total];
    for b in blocks {
        if b.indices.len() != b.h.len() || b.indices.is_empty() {
            return Err(HullError::PartitionInvalid(
                "block index and coefficient lengths differ or block empty".into(),
            ));
        }
        check_h(&b.h)?;
        for &i in &b.indices {
            if i >= total || seen[i] {
                return Err(HullError::PartitionInvalid(format!(
                    "index {i} repeated or out of range"
                )));
            }
            seen[i] = true;
        }
    }

    let mut m = ConvexModel::new();
    let z: Vec<usize> = (0..l)
        .map(|j| m.add_var(format!("z{}", j + 1), 0.0, 1.0))
        .collect();
    let beta: Vec<usize> = (0..total)
        .map(|i| m.add_var(format!("b{}", i + 1), f64::NEG_INFINITY, f64::INFINITY))
        .collect();
    let t = m.add_var("t", f64::NEG_INFINITY, f64::INFINITY);
    add_conv_rows(&mut m, q, &z)?;
    let taux: Vec<usize> = (0..l)
        .map(|j| m.add_var(format!("th{}", j + 1), f64::NEG_INFINITY, f64::INFINITY))
        .collect();
    let mut tsum: Vec<(usize, f64)> = taux.iter().map(|&j| (j, 1.0)).collect();
    tsum.push((t, -1.0));
    m.add_le(tsum, 0.0);
    for (j, b) in blocks.iter().enumerate() {
        let mut x = LinExpr::zero();
        for (&i, &hi) in b.indices.iter().zip(&b.h) {
            x.add_term(beta[i], hi);
        }
        m.persp.push(PerspConstraint {
            f: b.f,
            x_expr: x,
            z_expr: LinExpr::var(z[j]),
            t_var: taux[j],
        });
    }
    finish(m, z, beta, t)
}

/// Facet-block extended formulation: `z = sum zhat_l`,
/// `A_l zhat_l <= lambda_l b_l`, `sum lambda <= 1`, with the single
/// perspective scale `sum lambda`.
pub fn build_facet_extended(
    f: ScalarConvex,
    h: &[f64],
    q: &IndicatorSet,
    blocks: &[FacetBlock],
) -> Result<HullModel, HullError> {
    if blocks.is_empty() {
        return Err(HullError::EmptyBlocks);
    }
    let p = q.p();
    assert_eq!(h.len(), p);
    check_h(h)?;
    let k = blocks.len();
    let mut m = ConvexModel::new();
    let z: Vec<usize> = (0..p)
        .map(|i| m.add_var(format!("z{}", i + 1), 0.0, 1.0))
        .collect();
    let beta: Vec<usize> = (0..p)
        .map(|i| m.add_var(format!("b{}", i + 1), f64::NEG_INFINITY, f64::INFINITY))
        .collect();
    let t = m.add_var("t", f64::NEG_INFINITY, f64::INFINITY);
    let lambda: Vec<usize> = (0..k)
        .map(|l| m.add_var(format!("lam{}", l + 1), 0.0, 1.0))
        .collect();
    let mut zh: Vec<Vec<usize>> = Vec::with_capacity(k);
    for l in 0..k {
        zh.push(
            (0..p)
                .map(|i| m.add_var(format!("zh{}_{}", l + 1, i + 1), 0.0, 1.0))
                .collect(),
        );
    }
    for i in 0..p {
        let mut terms: Vec<(usize, f64)> = vec![(z[i], 1.0)];
        for zl in &zh {
            terms.push((zl[i], -1.0));
        }
        m.add_eq(terms, 0.0);
    }
    m.add_le(lambda.iter().map(|&j| (j, 1.0)).collect(), 1.0);
    for (l, block) in blocks.iter().enumerate() {
        for (row, rhs) in block.a.iter().zip(&block.b) {
            let mut terms: Vec<(usize, f64)> = row
                .iter()
                .enumerate()
                .filter(|(_, c)| !num::Zero::is_zero(*c))
                .map(|(i, c)| (zh[l][i], rat_to_f64(c)))
                .collect();
            terms.push((lambda[l], -rat_to_f64(rhs)));
            m.add_le(terms, 0.0);
        }
    }
    let x = h_dot_beta(h, &beta);
    m.persp.push(PerspConstraint {
        f,
        x_expr: x.clone(),
        z_expr: LinExpr::constant(1.0),
        t_var: t,
    });
    let mut lam_sum = LinExpr::zero();
    for &jl in &lambda {
        lam_sum.add_term(jl, 1.0);
    }
    m.persp.push(PerspConstraint {
        f,
        x_expr: x,
        z_expr: lam_sum,
        t_var: t,
    });
    finish(m, z, beta, t)
}

/// Pick the hull formulation by the conflict graph: Theorem 1 when
/// connected, the disjunctive extended formulation otherwise.
pub fn build_auto(f: ScalarConvex, h: &[f64], q: &IndicatorSet) -> Result<HullModel, HullError> {
    if q.conflict_graph()?.is_connected() {
        let fam = q.facet_family()?;
        build_connected(f, h, q, &fam)
    } else {
        build_disconnected(f, h, q)
    }
}
