//! Exact double-description machinery for small polytopes.
//!
//! Everything here is over `BigRational` and sized for desk-scale inputs
//! (dimension at most ~11, a few thousand generators). The central routine
//! computes the extreme rays and lineality space of a cone `{x | Rx <= 0}`;
//! hull and vertex enumeration are the two homogenizations of it.

use crate::rational::{primitive_direction, Rat};
use num::{One, Signed, Zero};
use std::collections::HashSet;

/// Dense bitset over row indices, used for active (tight) constraint sets.
#[derive(Clone, PartialEq, Eq, Hash)]
struct BitSet {
    blocks: Vec<u64>,
}

impl BitSet {
    fn new(n: usize) -> Self {
        Self {
            blocks: vec![0; n.div_ceil(64)],
        }
    }
    fn set(&mut self, i: usize) {
        self.blocks[i / 64] |= 1 << (i % 64);
    }
    fn intersect(&self, other: &Self) -> Self {
        Self {
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }
    fn is_subset_of(&self, other: &Self) -> bool {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .all(|(a, b)| a & !b == 0)
    }
}

/// Generators of a polyhedral cone: `cone = span(lineality) + cone(rays)`.
pub struct ConeGenerators {
    pub lineality: Vec<Vec<Rat>>,
    pub rays: Vec<Vec<Rat>>,
}

fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    let mut s = Rat::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s += x * y;
        }
    }
    s
}

/// Reduced row echelon form in place; returns (rank, pivot columns, and for
/// each pivot the index of the original row that supplied it).
fn rref(rows: &mut Vec<Vec<Rat>>) -> (usize, Vec<usize>, Vec<usize>) {
    let m = rows.len();
    if m == 0 {
        return (0, vec![], vec![]);
    }
    let d = rows[0].len();
    let mut origin: Vec<usize> = (0..m).collect();
    let mut rank = 0;
    let mut pivot_cols = Vec::new();
    let mut pivot_rows = Vec::new();
    for col in 0..d {
        let Some(p) = (rank..m).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        origin.swap(rank, p);
        let inv = rows[rank][col].clone();
        for c in col..d {
            let v = &rows[rank][c] / &inv;
            rows[rank][c] = v;
        }
        for r in 0..m {
            if r != rank && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in col..d {
                    let v = &rows[r][c] - &factor * &rows[rank][c];
                    rows[r][c] = v;
                }
            }
        }
        pivot_cols.push(col);
        pivot_rows.push(origin[rank]);
        rank += 1;
        if rank == m {
            break;
        }
    }
    (rank, pivot_cols, pivot_rows)
}

/// Basis of the nullspace of the given rows (vectors x with Rx = 0).
pub fn nullspace(rows: &[Vec<Rat>], dim: usize) -> Vec<Vec<Rat>> {
    let mut work: Vec<Vec<Rat>> = rows.to_vec();
    let (rank, pivot_cols, _) = rref(&mut work);
    let mut basis = Vec::new();
    let pivot_set: HashSet<usize> = pivot_cols.iter().copied().collect();
    for free in 0..dim {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![Rat::zero(); dim];
        v[free] = Rat::one();
        for (r, &pc) in pivot_cols.iter().enumerate().take(rank) {
            v[pc] = -work[r][free].clone();
        }
        basis.push(primitive_direction(&v));
    }
    basis
}

/// Invert a square rational matrix; `None` when singular.
fn invert(a: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = a.len();
    let mut work: Vec<Vec<Rat>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    let (rank, _, _) = rref(&mut work);
    if rank < n {
        return None;
    }
    Some(work.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Extreme rays and lineality space of `{x | r.x <= 0 for all rows r}`.
///
/// The cone is reduced modulo its lineality space first, so the double
/// description step only ever runs on a pointed cone, where the
/// combinatorial adjacency test is exact.
pub fn cone_generators(rows_in: &[Vec<Rat>], dim: usize) -> ConeGenerators {
    // Canonicalize rows: primitive direction, drop zeros, dedupe.
    let mut seen = HashSet::new();
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for r in rows_in {
        if r.iter().all(|x| x.is_zero()) {
            continue;
        }
        let p = primitive_direction(r);
        let key: Vec<String> = p.iter().map(|x| x.to_string()).collect();
        if seen.insert(key) {
            rows.push(p);
        }
    }

    let lineality = nullspace(&rows, dim);
    if rows.is_empty() {
        return ConeGenerators {
            lineality,
            rays: vec![],
        };
    }

    // Basis of the row space; the projected cone in these coordinates is
    // pointed because row space and nullspace only share the origin.
    let mut work = rows.clone();
    let (rank, _, _) = rref(&mut work);
    let basis: Vec<Vec<Rat>> = work.into_iter().take(rank).collect();
    let k = rank;
    if k == 0 {
        return ConeGenerators {
            lineality,
            rays: vec![],
        };
    }

    // Projected rows: proj[i][j] = rows[i] . basis[j].
    let proj: Vec<Vec<Rat>> = rows
        .iter()
        .map(|r| basis.iter().map(|w| dot(r, w)).collect())
        .collect();
    let m = proj.len();

    // Pick k rows forming an invertible k x k system for the initial
    // simplicial cone.
    let mut probe = proj.clone();
    let (prank, _, pivot_rows) = rref(&mut probe);
    assert_eq!(prank, k, "projected rows must have full rank");
    let init: Vec<usize> = pivot_rows;
    let init_mat: Vec<Vec<Rat>> = init.iter().map(|&i| proj[i].clone()).collect();
    let inv = invert(&init_mat).expect("initial rows are independent");

    struct Ray {
        y: Vec<Rat>,
        active: BitSet,
    }

    // Initial rays: columns of -inv, so ray j is tight on every initial row
    // except the j-th (where it is strictly feasible).
    let mut rays: Vec<Ray> = (0..k)
        .map(|j| {
            let y: Vec<Rat> = (0..k).map(|i| -inv[i][j].clone()).collect();
            let mut active = BitSet::new(m);
            for (jj, &row_idx) in init.iter().enumerate() {
                if jj != j {
                    active.set(row_idx);
                }
            }
            Ray {
                y: primitive_direction(&y),
                active,
            }
        })
        .collect();

    let init_set: HashSet<usize> = init.iter().copied().collect();
    for t in 0..m {
        if init_set.contains(&t) {
            continue;
        }
        let row = &proj[t];
        let vals: Vec<Rat> = rays.iter().map(|r| dot(row, &r.y)).collect();
        let mut neg = Vec::new();
        let mut pos = Vec::new();
        for (i, v) in vals.iter().enumerate() {
            if v.is_negative() {
                neg.push(i);
            } else if v.is_positive() {
                pos.push(i);
            } else {
                rays[i].active.set(t);
            }
        }
        if pos.is_empty() {
            continue;
        }
        let mut new_rays: Vec<Ray> = Vec::new();
        for &u in &neg {
            for &v in &pos {
                let common = rays[u].active.intersect(&rays[v].active);
                let adjacent = rays.iter().enumerate().all(|(w, rw)| {
                    w == u || w == v || !common.is_subset_of(&rw.active)
                });
                if !adjacent {
                    continue;
                }
                // w = (row.v) u - (row.u) v lies on the hyperplane and in
                // the cone spanned by u and v.
                let cu = vals[v].clone();
                let cv = -vals[u].clone();
                let y: Vec<Rat> = rays[u]
                    .y
                    .iter()
                    .zip(&rays[v].y)
                    .map(|(a, b)| &cu * a + &cv * b)
                    .collect();
                let mut active = common;
                active.set(t);
                new_rays.push(Ray {
                    y: primitive_direction(&y),
                    active,
                });
            }
        }
        let keep: Vec<usize> = (0..rays.len()).filter(|i| !vals[*i].is_positive()).collect();
        let mut kept: Vec<Ray> = Vec::with_capacity(keep.len() + new_rays.len());
        for (i, r) in rays.into_iter().enumerate() {
            if keep.binary_search(&i).is_ok() {
                kept.push(r);
            }
        }
        kept.extend(new_rays);
        rays = kept;
        assert!(
            rays.len() < 200_000,
            "double description blow-up: too many intermediate rays"
        );
    }

    // Lift back to ambient coordinates and dedupe.
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for r in rays {
        let mut x = vec![Rat::zero(); dim];
        for (j, w) in basis.iter().enumerate() {
            if !r.y[j].is_zero() {
                for (xi, wi) in x.iter_mut().zip(w) {
                    *xi += &r.y[j] * wi;
                }
            }
        }
        let x = primitive_direction(&x);
        if x.iter().all(|v| v.is_zero()) {
            continue;
        }
        let key: Vec<String> = x.iter().map(|v| v.to_string()).collect();
        if seen.insert(key) {
            out.push(x);
        }
    }
    ConeGenerators {
        lineality,
        rays: out,
    }
}

/// H-representation of a polytope: inequalities `a.x <= b` and equalities.
#[derive(Clone, Debug, Default)]
pub struct HRep {
    pub dim: usize,
    pub ineqs: Vec<(Vec<Rat>, Rat)>,
    pub eqs: Vec<(Vec<Rat>, Rat)>,
}

impl HRep {
    pub fn contains(&self, x: &[Rat]) -> bool {
        self.ineqs.iter().all(|(a, b)| dot(a, x) <= *b)
            && self.eqs.iter().all(|(a, b)| dot(a, x) == *b)
    }
}

/// Facet description of the convex hull of a finite point set.
///
/// Extreme rays of the valid-inequality cone `{(b, a) | a.v <= b for all v}`
/// are the facets; its lineality space holds the affine-hull equalities.
pub fn hull_of_points(points: &[Vec<Rat>], dim: usize) -> HRep {
    assert!(!points.is_empty(), "hull of an empty point set");
    let rows: Vec<Vec<Rat>> = points
        .iter()
        .map(|v| {
            let mut r = Vec::with_capacity(dim + 1);
            r.push(-Rat::one());
            r.extend(v.iter().cloned());
            r
        })
        .collect();
    let gens = cone_generators(&rows, dim + 1);
    let mut h = HRep {
        dim,
        ..Default::default()
    };
    for ray in gens.rays {
        let (b, a) = (ray[0].clone(), ray[1..].to_vec());
        if a.iter().all(|v| v.is_zero()) {
            continue; // trivial 0 <= b
        }
        h.ineqs.push((a, b));
    }
    for lin in gens.lineality {
        let (b, a) = (lin[0].clone(), lin[1..].to_vec());
        if a.iter().all(|v| v.is_zero()) {
            continue;
        }
        h.eqs.push((a, b));
    }
    h
}

#[derive(Debug)]
pub enum VertexError {
    Unbounded,
    Empty,
}

/// Vertices of a bounded polyhedron given by an H-representation.
pub fn vertices_of(h: &HRep) -> Result<Vec<Vec<Rat>>, VertexError> {
    let dim = h.dim;
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    let mut push = |a: &[Rat], b: &Rat, flip: bool| {
        // a.x <= b  homogenizes to  a.x - b t <= 0 over (t, x).
        let mut r = Vec::with_capacity(dim + 1);
        if flip {
            r.push(b.clone());
            r.extend(a.iter().map(|v| -v.clone()));
        } else {
            r.push(-b.clone());
            r.extend(a.iter().cloned());
        }
        rows.push(r);
    };
    for (a, b) in &h.ineqs {
        push(a, b, false);
    }
    for (a, b) in &h.eqs {
        push(a, b, false);
        push(a, b, true);
    }
    // t >= 0
    let mut tr = vec![Rat::zero(); dim + 1];
    tr[0] = -Rat::one();
    rows.push(tr);

    let gens = cone_generators(&rows, dim + 1);
    if !gens.lineality.is_empty() {
        return Err(VertexError::Unbounded);
    }
    let mut seen = HashSet::new();
    let mut verts = Vec::new();
    for ray in gens.rays {
        let t = &ray[0];
        if t.is_zero() {
            return Err(VertexError::Unbounded);
        }
        assert!(t.is_positive(), "homogenization variable must be nonnegative");
        let v: Vec<Rat> = ray[1..].iter().map(|x| x / t).collect();
        let key: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        if seen.insert(key) {
            verts.push(v);
        }
    }
    if verts.is_empty() {
        return Err(VertexError::Empty);
    }
    Ok(verts)
}
