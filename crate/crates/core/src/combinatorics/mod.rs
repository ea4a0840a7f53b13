//! Indicator constraint sets `Q ⊆ {0,1}^p`: enumeration, conflict graph,
//! and exact facet families describing `conv(Q \ {0})` relative to `conv(Q)`.

pub mod dd;

use crate::rational::{rat_from_json, rat_int, rat_to_json, Rat};
use dd::{hull_of_points, HRep};
use num::{Signed, Zero};
use serde_json::{json, Value};
use std::collections::BTreeSet;
use std::fmt;

/// Enumeration guard for membership listing.
pub const MAX_ENUM_P: usize = 24;
/// Guard for polyhedral (double description) computation.
pub const MAX_POLY_P: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub enum ComboError {
    DimensionTooLarge { p: usize, limit: usize },
    /// No binary vector in the family activates this index.
    UnreachableIndex { index: usize },
    EmptyFamily,
    InvalidFamily(String),
}

impl fmt::Display for ComboError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComboError::DimensionTooLarge { p, limit } => {
                write!(f, "dimension p={p} exceeds the guard {limit}")
            }
            ComboError::UnreachableIndex { index } => write!(
                f,
                "no member of the family has z_{} = 1; remove the coordinate first",
                index + 1
            ),
            ComboError::EmptyFamily => write!(f, "the family denotes an empty set"),
            ComboError::InvalidFamily(msg) => write!(f, "invalid family: {msg}"),
        }
    }
}

impl std::error::Error for ComboError {}

/// Named combinatorial families plus an explicit rational system `Az <= d`.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Unconstrained,
    Cardinality(u32),
    CardinalityOne,
    /// `z_p <= z_i` for all i in [p-1].
    StrongHierarchy,
    /// `z_p <= sum_{i in [p-1]} z_i`.
    WeakHierarchy,
    ExplicitLinear { a: Vec<Vec<Rat>>, d: Vec<Rat> },
}

/// A nonempty indicator constraint set over `{0,1}^p` in which every
/// coordinate is reachable (for each i some member has `z_i = 1`).
#[derive(Debug, Clone)]
pub struct IndicatorSet {
    p: usize,
    family: Family,
    contains_zero: bool,
}

impl IndicatorSet {
    pub fn new(p: usize, family: Family) -> Result<Self, ComboError> {
        if p == 0 {
            return Err(ComboError::InvalidFamily("p must be at least 1".into()));
        }
        match &family {
            Family::Unconstrained | Family::CardinalityOne | Family::StrongHierarchy => {}
            Family::Cardinality(q) => {
                if *q == 0 || *q as usize > p {
                    return Err(ComboError::InvalidFamily(format!(
                        "cardinality bound q={q} must satisfy 1 <= q <= p={p}"
                    )));
                }
            }
            Family::WeakHierarchy => {
                if p < 2 {
                    // z_1 <= (empty sum) forces z_1 = 0: index 1 unreachable.
                    return Err(ComboError::UnreachableIndex { index: 0 });
                }
            }
            Family::ExplicitLinear { a, d } => {
                if a.len() != d.len() {
                    return Err(ComboError::InvalidFamily(
                        "matrix and right-hand side sizes differ".into(),
                    ));
                }
                if a.iter().any(|row| row.len() != p) {
                    return Err(ComboError::InvalidFamily(
                        "matrix row length differs from p".into(),
                    ));
                }
            }
        }
        let contains_zero = match &family {
            Family::ExplicitLinear { a: _, d } => d.iter().all(|di| !di.is_negative()),
            _ => true,
        };
        let set = Self {
            p,
            family,
            contains_zero,
        };
        if let Family::ExplicitLinear { .. } = &set.family {
            // Validate nonemptiness and per-coordinate reachability by
            // enumeration; violating coordinates are rejected, not fixed.
            let members = set.enumerate()?;
            if members.is_empty() {
                return Err(ComboError::EmptyFamily);
            }
            for i in 0..p {
                if !members.iter().any(|z| z[i] == 1) {
                    return Err(ComboError::UnreachableIndex { index: i });
                }
            }
        }
        Ok(set)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn contains_zero(&self) -> bool {
        self.contains_zero
    }

    /// Membership of a binary vector by direct substitution.
    pub fn contains(&self, z: &[u8]) -> bool {
        assert_eq!(z.len(), self.p);
        let sum: u32 = z.iter().map(|&b| b as u32).sum();
        match &self.family {
            Family::Unconstrained => true,
            Family::Cardinality(q) => sum <= *q,
            Family::CardinalityOne => sum <= 1,
            Family::StrongHierarchy => {
                let last = z[self.p - 1];
                z[..self.p - 1].iter().all(|&zi| last <= zi)
            }
            Family::WeakHierarchy => {
                let head: u32 = z[..self.p - 1].iter().map(|&b| b as u32).sum();
                (z[self.p - 1] as u32) <= head
            }
            Family::ExplicitLinear { a, d } => a.iter().zip(d).all(|(row, di)| {
                let mut lhs = Rat::zero();
                for (c, &zi) in row.iter().zip(z) {
                    if zi == 1 {
                        lhs += c;
                    }
                }
                lhs <= *di
            }),
        }
    }

    /// All members of Q in lexicographic order (z_1 most significant).
    pub fn enumerate(&self) -> Result<Vec<Vec<u8>>, ComboError> {
        if self.p > MAX_ENUM_P {
            return Err(ComboError::DimensionTooLarge {
                p: self.p,
                limit: MAX_ENUM_P,
            });
        }
        let p = self.p;
        let mut out = Vec::new();
        for mask in 0u32..(1u32 << p) {
            let z: Vec<u8> = (0..p).map(|i| ((mask >> (p - 1 - i)) & 1) as u8).collect();
            if self.contains(&z) {
                out.push(z);
            }
        }
        Ok(out)
    }

    /// Members of Q with the origin removed.
    pub fn enumerate_nonzero(&self) -> Result<Vec<Vec<u8>>, ComboError> {
        Ok(self
            .enumerate()?
            .into_iter()
            .filter(|z| z.iter().any(|&b| b == 1))
            .collect())
    }

    /// The conflict graph: `{i,j}` is an edge iff some member activates both.
    pub fn conflict_graph(&self) -> Result<ConflictGraph, ComboError> {
        let p = self.p;
        let mut edges: Vec<(usize, usize)> = Vec::new();
        match &self.family {
            Family::Unconstrained | Family::StrongHierarchy | Family::WeakHierarchy => {
                // The all-ones vector is a member, so the graph is complete.
                for i in 0..p {
                    for j in i + 1..p {
                        edges.push((i, j));
                    }
                }
            }
            Family::Cardinality(q) if *q >= 2 => {
                for i in 0..p {
                    for j in i + 1..p {
                        edges.push((i, j));
                    }
                }
            }
            Family::Cardinality(_) | Family::CardinalityOne => {}
            Family::ExplicitLinear { .. } => {
                let members = self.enumerate()?;
                for i in 0..p {
                    for j in i + 1..p {
                        if members.iter().any(|z| z[i] == 1 && z[j] == 1) {
                            edges.push((i, j));
                        }
                    }
                }
            }
        }
        Ok(ConflictGraph::from_edges(p, edges))
    }

    /// The facet family F with `conv(Q^0) = conv(Q) ∩ {pi.z >= 1, pi in F}`.
    ///
    /// Named families use the closed forms; the generic path enumerates the
    /// vertices of `conv(Q^0)`, computes its facets, and keeps exactly the
    /// inequalities that can be normalized to `pi.z >= 1` (positive offset);
    /// those with nonpositive offset are valid for `conv(Q)` and discarded.
    pub fn facet_family(&self) -> Result<FacetFamily, ComboError> {
        let p = self.p;
        let ones = |k: usize| -> Vec<Rat> { (0..k).map(|_| rat_int(1)).collect() };
        let rows: Vec<Vec<Rat>> = match &self.family {
            Family::Unconstrained | Family::Cardinality(_) | Family::CardinalityOne => {
                vec![ones(p)]
            }
            Family::StrongHierarchy => {
                let mut row = ones(p);
                row[p - 1] = rat_int(-((p as i64) - 2));
                vec![row]
            }
            Family::WeakHierarchy => {
                let mut row = ones(p);
                row[p - 1] = rat_int(0);
                vec![row]
            }
            Family::ExplicitLinear { .. } => {
                if p > MAX_POLY_P {
                    return Err(ComboError::DimensionTooLarge {
                        p,
                        limit: MAX_POLY_P,
                    });
                }
                if !self.contains_zero {
                    return Ok(FacetFamily { p, rows: vec![] });
                }
                return Ok(facet_family_from_points(&self.enumerate_nonzero()?, p));
            }
        };
        Ok(FacetFamily { p, rows })
    }

    /// Facets of `conv(Q)` whose affine hull excludes the origin, each given
    /// as a complete system `A_l z <= b_l` describing the facet polytope.
    pub fn facet_blocks(&self) -> Result<Vec<FacetBlock>, ComboError> {
        let p = self.p;
        if p > MAX_POLY_P {
            return Err(ComboError::DimensionTooLarge {
                p,
                limit: MAX_POLY_P,
            });
        }
        let pts = binary_points(&self.enumerate()?);
        if pts.is_empty() {
            return Err(ComboError::EmptyFamily);
        }
        let hull = hull_of_points(&pts, p);
        // The affine hull of facet {a.z = b} contains the origin iff b = 0
        // and every hull equality also vanishes at the origin.
        let origin_in_hull_aff = hull.eqs.iter().all(|(_, rhs)| rhs.is_zero());
        let mut facets: Vec<(Vec<Rat>, Rat)> = hull
            .ineqs
            .iter()
            .filter(|(_, b)| !(b.is_zero() && origin_in_hull_aff))
            .cloned()
            .collect();
        facets.sort();
        let mut blocks = Vec::new();
        for (index, (a, b)) in facets.into_iter().enumerate() {
            let mut rows_a: Vec<Vec<Rat>> = Vec::new();
            let mut rows_b: Vec<Rat> = Vec::new();
            for (ia, ib) in &hull.ineqs {
                rows_a.push(ia.clone());
                rows_b.push(ib.clone());
            }
            for (ea, eb) in &hull.eqs {
                rows_a.push(ea.clone());
                rows_b.push(eb.clone());
                rows_a.push(ea.iter().map(|c| -c).collect());
                rows_b.push(-eb.clone());
            }
            // Both directions of the defining equality a.z = b.
            rows_a.push(a.iter().map(|c| -c).collect());
            rows_b.push(-b.clone());
            blocks.push(FacetBlock {
                index,
                a: rows_a,
                b: rows_b,
                p,
            });
        }
        Ok(blocks)
    }

    /// Exact H-representation of `conv(Q)`.
    ///
    /// Named families use the closed-form (totally unimodular) descriptions
    /// plus the unit box; the generic path enumerates vertices and converts.
    pub fn conv_hull_hrep(&self) -> Result<HRep, ComboError> {
        let p = self.p;
        let mut h = HRep {
            dim: p,
            ..Default::default()
        };
        let unit_box = |h: &mut HRep| {
            for i in 0..p {
                let mut up = vec![Rat::zero(); p];
                up[i] = rat_int(1);
                h.ineqs.push((up, rat_int(1)));
                let mut lo = vec![Rat::zero(); p];
                lo[i] = rat_int(-1);
                h.ineqs.push((lo, rat_int(0)));
            }
        };
        match &self.family {
            Family::Unconstrained => unit_box(&mut h),
            Family::Cardinality(q) => {
                unit_box(&mut h);
                h.ineqs
                    .push(((0..p).map(|_| rat_int(1)).collect(), rat_int(*q as i64)));
            }
            Family::CardinalityOne => {
                unit_box(&mut h);
                h.ineqs.push(((0..p).map(|_| rat_int(1)).collect(), rat_int(1)));
            }
            Family::StrongHierarchy => {
                unit_box(&mut h);
                for i in 0..p - 1 {
                    let mut row = vec![Rat::zero(); p];
                    row[p - 1] = rat_int(1);
                    row[i] = rat_int(-1);
                    h.ineqs.push((row, rat_int(0)));
                }
            }
            Family::WeakHierarchy => {
                unit_box(&mut h);
                let mut row = vec![rat_int(-1); p];
                row[p - 1] = rat_int(1);
                h.ineqs.push((row, rat_int(0)));
            }
            Family::ExplicitLinear { .. } => {
                if p > MAX_POLY_P {
                    return Err(ComboError::DimensionTooLarge {
                        p,
                        limit: MAX_POLY_P,
                    });
                }
                let pts = binary_points(&self.enumerate()?);
                h = hull_of_points(&pts, p);
            }
        }
        Ok(h)
    }
}

pub fn binary_points(members: &[Vec<u8>]) -> Vec<Vec<Rat>> {
    members
        .iter()
        .map(|z| z.iter().map(|&b| rat_int(b as i64)).collect())
        .collect()
}

/// Facet family for an explicit nonzero member list: facets of the hull of
/// the points, normalized to `pi.z >= 1`, dropping inequalities valid at
/// the origin.
pub fn facet_family_from_points(nonzero_members: &[Vec<u8>], p: usize) -> FacetFamily {
    let pts = binary_points(nonzero_members);
    let hull = hull_of_points(&pts, p);
    let mut rows = Vec::new();
    let mut push_normalized = |pi: Vec<Rat>, pi0: Rat| {
        if pi0.is_positive() {
            rows.push(pi.iter().map(|c| c / &pi0).collect::<Vec<Rat>>());
        }
    };
    for (a, b) in &hull.ineqs {
        // a.z <= b  <=>  (-a).z >= -b
        push_normalized(a.iter().map(|c| -c).collect(), -b.clone());
    }
    for (a, b) in &hull.eqs {
        push_normalized(a.iter().map(|c| -c).collect(), -b.clone());
        push_normalized(a.clone(), b.clone());
    }
    rows.sort();
    rows.dedup();
    FacetFamily { p, rows }
}

/// Conflict graph over the indicator indices.
#[derive(Debug, Clone)]
pub struct ConflictGraph {
    pub p: usize,
    pub edges: Vec<(usize, usize)>,
    pub components: Vec<Vec<usize>>,
}

impl ConflictGraph {
    fn from_edges(p: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut parent: Vec<usize> = (0..p).collect();
        fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(i, j) in &edges {
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
        let mut comps: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for v in 0..p {
            let r = find(&mut parent, v);
            comps.entry(r).or_default().push(v);
        }
        ConflictGraph {
            p,
            edges,
            components: comps.into_values().collect(),
        }
    }

    pub fn is_connected(&self) -> bool {
        self.components.len() == 1
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        let key = (i.min(j), i.max(j));
        self.edges.contains(&key)
    }

    /// Component label per vertex.
    pub fn labels(&self) -> Vec<usize> {
        let mut lab = vec![0; self.p];
        for (k, comp) in self.components.iter().enumerate() {
            for &v in comp {
                lab[v] = k;
            }
        }
        lab
    }
}

/// The finite set F of vectors with `pi.z >= 1` carving `conv(Q^0)` out of
/// `conv(Q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FacetFamily {
    pub p: usize,
    pub rows: Vec<Vec<Rat>>,
}

impl FacetFamily {
    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "rows": self.rows.iter().map(|r| {
                Value::from(r.iter().map(rat_to_json).collect::<Vec<_>>())
            }).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, String> {
        let p = v["p"].as_u64().ok_or("missing p")? as usize;
        let rows_v = v["rows"].as_array().ok_or("missing rows")?;
        let mut rows = Vec::new();
        for row in rows_v {
            let cells = row.as_array().ok_or("row is not an array")?;
            if cells.len() != p {
                return Err(format!("row length {} differs from p={p}", cells.len()));
            }
            rows.push(cells.iter().map(rat_from_json).collect::<Result<Vec<_>, _>>()?);
        }
        Ok(Self { p, rows })
    }
}

/// One facet of `conv(Q)` not containing the origin, as `{z | A z <= b}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FacetBlock {
    pub index: usize,
    pub p: usize,
    pub a: Vec<Vec<Rat>>,
    pub b: Vec<Rat>,
}

impl FacetBlock {
    pub fn contains(&self, z: &[Rat]) -> bool {
        self.a.iter().zip(&self.b).all(|(row, rhs)| {
            let mut s = Rat::zero();
            for (c, x) in row.iter().zip(z) {
                s += c * x;
            }
            s <= *rhs
        })
    }

    /// JSON rows are the augmented matrix `[a_1 ... a_p | b]`.
    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "rows": self.a.iter().zip(&self.b).map(|(row, rhs)| {
                let mut cells: Vec<Value> = row.iter().map(rat_to_json).collect();
                cells.push(rat_to_json(rhs));
                Value::from(cells)
            }).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, String> {
        let p = v["p"].as_u64().ok_or("missing p")? as usize;
        let rows_v = v["rows"].as_array().ok_or("missing rows")?;
        let mut a = Vec::new();
        let mut b = Vec::new();
        for row in rows_v {
            let cells = row.as_array().ok_or("row is not an array")?;
            if cells.len() != p + 1 {
                return Err(format!("augmented row length {} != p+1", cells.len()));
            }
            a.push(cells[..p].iter().map(rat_from_json).collect::<Result<Vec<_>, _>>()?);
            b.push(rat_from_json(&cells[p])?);
        }
        Ok(Self { index: 0, p, a, b })
    }
}

/// Exact check that every `pi` in the family satisfies `pi.z >= 1` on `Q^0`.
pub fn facets_valid_on_q0(set: &IndicatorSet, fam: &FacetFamily) -> Result<bool, ComboError> {
    let members = set.enumerate_nonzero()?;
    for pi in &fam.rows {
        for z in &members {
            let mut s = Rat::zero();
            for (c, &b) in pi.iter().zip(z) {
                if b == 1 {
                    s += c;
                }
            }
            if s < rat_int(1) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Exact Proposition-1 identity: the vertex set of
/// `conv(Q) ∩ {pi.z >= 1, pi in F}` equals `Q^0`.
pub fn hull_identity_holds(set: &IndicatorSet, fam: &FacetFamily) -> Result<bool, ComboError> {
    let mut h = {
        let pts = binary_points(&set.enumerate()?);
        hull_of_points(&pts, set.p())
    };
    for pi in &fam.rows {
        // pi.z >= 1  as  (-pi).z <= -1
        h.ineqs
            .push((pi.iter().map(|c| -c).collect(), rat_int(-1)));
    }
    let verts = match dd::vertices_of(&h) {
        Ok(v) => v,
        Err(dd::VertexError::Empty) => vec![],
        Err(dd::VertexError::Unbounded) => return Ok(false),
    };
    let got: BTreeSet<Vec<String>> = verts
        .iter()
        .map(|v| v.iter().map(|x| x.to_string()).collect())
        .collect();
    let want: BTreeSet<Vec<String>> = binary_points(&set.enumerate_nonzero()?)
        .iter()
        .map(|v| v.iter().map(|x| x.to_string()).collect())
        .collect();
    Ok(got == want)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_frac;

    fn named(p: usize, family: Family) -> IndicatorSet {
        IndicatorSet::new(p, family).unwrap()
    }

    fn bits(s: &str) -> Vec<u8> {
        s.bytes().map(|b| b - b'0').collect()
    }

    #[test]
    fn enumerate_strong_hierarchy_p3() {
        let q = named(3, Family::StrongHierarchy);
        let got = q.enumerate().unwrap();
        let want: Vec<Vec<u8>> = ["000", "010", "100", "110", "111"]
            .iter()
            .map(|s| bits(s))
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn enumerate_cardinality_one_p3() {
        let q = named(3, Family::Cardinality(1));
        let got = q.enumerate().unwrap();
        let want: Vec<Vec<u8>> = ["000", "001", "010", "100"]
            .iter()
            .map(|s| bits(s))
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn enumerate_unconstrained_p2_lexicographic() {
        let q = named(2, Family::Unconstrained);
        let got = q.enumerate().unwrap();
        let want: Vec<Vec<u8>> = ["00", "01", "10", "11"].iter().map(|s| bits(s)).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn enumeration_guard() {
        let q = named(25, Family::Unconstrained);
        assert!(matches!(
            q.enumerate(),
            Err(ComboError::DimensionTooLarge { .. })
        ));
    }

    #[test]
    fn conflict_graph_cardinality_two_is_complete() {
        let g = named(3, Family::Cardinality(2)).conflict_graph().unwrap();
        assert_eq!(g.edges.len(), 3);
        assert_eq!(g.components.len(), 1);
    }

    #[test]
    fn conflict_graph_cardinality_one_is_disconnected() {
        let g = named(3, Family::Cardinality(1)).conflict_graph().unwrap();
        assert!(g.edges.is_empty());
        assert_eq!(g.components.len(), 3);
    }

    #[test]
    fn conflict_graph_weak_hierarchy_connected() {
        let g = named(3, Family::WeakHierarchy).conflict_graph().unwrap();
        assert!(g.is_connected());
    }

    #[test]
    fn conflict_graph_matches_definition_on_explicit_family() {
        // Explicit z1 + z2 <= 1 over p=3: edge {1,3} and {2,3} but not {1,2}.
        let a = vec![vec![rat_int(1), rat_int(1), rat_int(0)]];
        let d = vec![rat_int(1)];
        let q = named(3, Family::ExplicitLinear { a, d });
        let g = q.conflict_graph().unwrap();
        assert!(!g.has_edge(0, 1));
        assert!(g.has_edge(0, 2));
        assert!(g.has_edge(1, 2));
        // Symmetry and partition.
        let labels = g.labels();
        assert_eq!(labels.len(), 3);
        let total: usize = g.components.iter().map(|c| c.len()).sum();
        assert_eq!(total, 3);
    }

    #[test]
    fn facet_family_closed_forms() {
        let f = named(4, Family::Unconstrained).facet_family().unwrap();
        assert_eq!(f.rows, vec![vec![rat_int(1); 4]]);

        let f = named(4, Family::StrongHierarchy).facet_family().unwrap();
        assert_eq!(
            f.rows,
            vec![vec![rat_int(1), rat_int(1), rat_int(1), rat_int(-2)]]
        );

        let f = named(1, Family::Unconstrained).facet_family().unwrap();
        assert_eq!(f.rows, vec![vec![rat_int(1)]]);

        let f = named(3, Family::WeakHierarchy).facet_family().unwrap();
        assert_eq!(f.rows, vec![vec![rat_int(1), rat_int(1), rat_int(0)]]);
    }

    #[test]
    fn facet_family_generic_matches_closed_form_hull() {
        // Strong hierarchy p=3 expressed as an explicit system.
        let a = vec![
            vec![rat_int(-1), rat_int(0), rat_int(1)],
            vec![rat_int(0), rat_int(-1), rat_int(1)],
        ];
        let d = vec![rat_int(0), rat_int(0)];
        let q = named(3, Family::ExplicitLinear { a, d });
        let f = q.facet_family().unwrap();
        assert!(facets_valid_on_q0(&q, &f).unwrap());
        assert!(hull_identity_holds(&q, &f).unwrap());
    }

    #[test]
    fn facet_validity_and_hull_identity_named_families() {
        for p in 2..=5usize {
            for fam in [
                Family::Unconstrained,
                Family::Cardinality(2),
                Family::Cardinality(1),
                Family::StrongHierarchy,
                Family::WeakHierarchy,
            ] {
                let q = named(p, fam.clone());
                let f = q.facet_family().unwrap();
                assert!(
                    facets_valid_on_q0(&q, &f).unwrap(),
                    "pi.z >= 1 fails for {fam:?} p={p}"
                );
                assert!(
                    hull_identity_holds(&q, &f).unwrap(),
                    "hull identity fails for {fam:?} p={p}"
                );
            }
        }
    }

    #[test]
    fn facet_blocks_cardinality_one_p2() {
        let q = named(2, Family::Cardinality(1));
        let blocks = q.facet_blocks().unwrap();
        assert_eq!(blocks.len(), 1);
        // The block is the segment conv{10, 01}: z1+z2 = 1, z >= 0.
        let b = &blocks[0];
        assert!(b.contains(&[rat_int(1), rat_int(0)]));
        assert!(b.contains(&[rat_int(0), rat_int(1)]));
        assert!(b.contains(&[rat_frac(1, 2), rat_frac(1, 2)]));
        assert!(!b.contains(&[rat_int(0), rat_int(0)]));
        assert!(!b.contains(&[rat_int(1), rat_int(1)]));
    }

    #[test]
    fn facet_blocks_unconstrained_p2() {
        let q = named(2, Family::Unconstrained);
        let blocks = q.facet_blocks().unwrap();
        assert_eq!(blocks.len(), 2);
        // Blocks are the edges z1 = 1 and z2 = 1 of the unit square.
        let on = |b: &FacetBlock, z: &[i64]| b.contains(&[rat_int(z[0]), rat_int(z[1])]);
        let found_z1 = blocks
            .iter()
            .any(|b| on(b, &[1, 0]) && on(b, &[1, 1]) && !on(b, &[0, 1]) && !on(b, &[0, 0]));
        let found_z2 = blocks
            .iter()
            .any(|b| on(b, &[0, 1]) && on(b, &[1, 1]) && !on(b, &[1, 0]) && !on(b, &[0, 0]));
        assert!(found_z1 && found_z2);
    }

    #[test]
    fn facet_blocks_strong_hierarchy_p2() {
        let q = named(2, Family::StrongHierarchy);
        let blocks = q.facet_blocks().unwrap();
        assert_eq!(blocks.len(), 1);
        let b = &blocks[0];
        assert!(b.contains(&[rat_int(1), rat_int(0)]));
        assert!(b.contains(&[rat_int(1), rat_int(1)]));
        assert!(!b.contains(&[rat_int(0), rat_int(0)]));
    }

    #[test]
    fn weak_hierarchy_p1_rejected() {
        assert!(matches!(
            IndicatorSet::new(1, Family::WeakHierarchy),
            Err(ComboError::UnreachableIndex { index: 0 })
        ));
    }

    #[test]
    fn explicit_unreachable_index_rejected() {
        // z1 <= 0 makes index 1 unreachable.
        let a = vec![vec![rat_int(1), rat_int(0)]];
        let d = vec![rat_int(0)];
        assert!(matches!(
            IndicatorSet::new(2, Family::ExplicitLinear { a, d }),
            Err(ComboError::UnreachableIndex { index: 0 })
        ));
    }

    #[test]
    fn facet_family_json_round_trip() {
        let q = named(4, Family::StrongHierarchy);
        let f = q.facet_family().unwrap();
        let j = f.to_json();
        assert_eq!(FacetFamily::from_json(&j).unwrap(), f);
        let blocks = q.facet_blocks().unwrap();
        let bj = blocks[0].to_json();
        let back = FacetBlock::from_json(&bj).unwrap();
        assert_eq!(back.a, blocks[0].a);
        assert_eq!(back.b, blocks[0].b);
    }

    #[test]
    fn lemma2_scaling_decomposition() {
        use crate::rng::XorShift64;
        // Random rational convex combinations of Q members decompose as
        // alpha * z0 with z0 in conv(Q^0) and alpha = min(1, min_pi pi.z).
        for fam in [
            Family::Unconstrained,
            Family::Cardinality(2),
            Family::StrongHierarchy,
            Family::WeakHierarchy,
        ] {
            let q = named(4, fam);
            let f = q.facet_family().unwrap();
            let members = binary_points(&q.enumerate().unwrap());
            let q0_hull = hull_of_points(
                &binary_points(&q.enumerate_nonzero().unwrap()),
                q.p(),
            );
            let mut rng = XorShift64::new(42);
            for _ in 0..50 {
                // Rational weights: small random integers, normalized.
                let raw: Vec<i64> = members.iter().map(|_| rng.below(5) as i64).collect();
                let total: i64 = raw.iter().sum();
                if total == 0 {
                    continue;
                }
                let mut z = vec![Rat::zero(); q.p()];
                for (w, m) in raw.iter().zip(&members) {
                    for (zi, mi) in z.iter_mut().zip(m) {
                        *zi += rat_frac(*w, total) * mi;
                    }
                }
                let mut alpha = rat_int(1);
                for pi in &f.rows {
                    let mut s = Rat::zero();
                    for (c, zi) in pi.iter().zip(&z) {
                        s += c * zi;
                    }
                    if s < alpha {
                        alpha = s;
                    }
                }
                if alpha < Rat::zero() {
                    alpha = Rat::zero();
                }
                if alpha.is_zero() {
                    assert!(z.iter().all(|x| x.is_zero()));
                } else {
                    let z0: Vec<Rat> = z.iter().map(|x| x / &alpha).collect();
                    assert!(q0_hull.contains(&z0), "z0 not in conv(Q^0)");
                }
            }
        }
    }
}
