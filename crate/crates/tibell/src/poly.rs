//! Exact-rational polyhedral computation: the double description method for
//! cones, convex hulls (V to H) via polarity, extreme-point filtering,
//! ray extraction (H to V), and placing triangulations of pointed cones.
//!
//! All outputs are canonicalized (primitive integer vectors, deterministic
//! sort) so they can be compared as values across runs and platforms.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::linalg;
use crate::lp;
use crate::scalar::Rat;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("input points all coincide; hull is degenerate")]
    DegenerateInput,
    #[error("cone contains a line; not pointed")]
    NotPointed,
    #[error("double description exceeded the intermediate ray budget of {budget}")]
    BudgetExceeded { budget: usize },
}

/// V-representation: convex hull of points plus conical hull of rays.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VRep {
    pub points: Vec<Vec<Rat>>,
    pub rays: Vec<Vec<Rat>>,
    pub dim: usize,
}

/// H-representation: inequalities normal . x >= offset, plus equations.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HRep {
    pub inequalities: Vec<(Vec<Rat>, Rat)>,
    pub equations: Vec<(Vec<Rat>, Rat)>,
}

/// A polyhedral cone given by an apex and ray generators.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Cone {
    pub apex: Vec<Rat>,
    pub ray_generators: Vec<Vec<Rat>>,
}

/// Scales a rational vector to primitive integer form (entries integer with
/// gcd 1), preserving direction. The zero vector is returned unchanged.
pub fn primitive(v: &[Rat]) -> Vec<Rat> {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut gcd = BigInt::zero();
    for i in &ints {
        gcd = gcd.gcd(i);
    }
    if gcd.is_zero() {
        return v.to_vec();
    }
    ints.into_iter().map(|i| Rat::from_integer(i / &gcd)).collect()
}

/// Primitive form with the first nonzero entry positive (for undirected
/// objects such as equations and lineality generators).
pub fn primitive_signed(v: &[Rat]) -> Vec<Rat> {
    let p = primitive(v);
    match p.iter().find(|x| !x.is_zero()) {
        Some(first) if first.is_negative() => p.iter().map(|x| -x).collect(),
        _ => p,
    }
}

/// Sparse bitset over constraint indices.
#[derive(Clone, PartialEq, Eq, Debug)]
struct TightSet {
    words: Vec<u64>,
}

impl TightSet {
    fn new(nbits: usize) -> Self {
        TightSet { words: vec![0; nbits.div_ceil(64)] }
    }

    fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn intersect(&self, other: &TightSet) -> TightSet {
        TightSet { words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect() }
    }

    fn contains_all(&self, other: &TightSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == *b)
    }
}

struct DdRay {
    v: Vec<Rat>,
    tight: TightSet,
}

/// Double description for the cone {x : a . x >= 0 for all rows a}.
/// Returns (lineality basis, extreme rays), both primitive and sorted.
/// Rows are inserted sorted by (nonzero count, lexicographic) for stability
/// and to curb intermediate blowup.
pub fn dd_cone(rows: &[Vec<Rat>], dim: usize) -> (Vec<Vec<Rat>>, Vec<Vec<Rat>>) {
    dd_cone_capped(rows, dim, usize::MAX).expect("uncapped double description cannot exceed the budget")
}

/// Double description with a cap on the intermediate ray count; returns
/// BudgetExceeded when any insertion step would grow past the cap.
pub fn dd_cone_capped(
    rows: &[Vec<Rat>],
    dim: usize,
    budget: usize,
) -> Result<(Vec<Vec<Rat>>, Vec<Vec<Rat>>), PolyError> {
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by_key(|&i| {
        (rows[i].iter().filter(|x| !x.is_zero()).count(), rows[i].clone())
    });
    let nbits = rows.len();

    // Start from the whole space as lineality.
    let mut lines: Vec<Vec<Rat>> = (0..dim)
        .map(|i| {
            let mut e = vec![Rat::zero(); dim];
            e[i] = Rat::one();
            e
        })
        .collect();
    let mut rays: Vec<DdRay> = Vec::new();

    for (step, &ci) in order.iter().enumerate() {
        let a = &rows[ci];
        if a.iter().all(|x| x.is_zero()) {
            // Trivial constraint: tight everywhere.
            for r in &mut rays {
                r.tight.insert(step);
            }
            continue;
        }
        let vals: Vec<Rat> = lines.iter().map(|l| linalg::dot(a, l)).collect();
        if let Some(k) = vals.iter().position(|x| !x.is_zero()) {
            // The constraint cuts the lineality space: split off one line
            // direction as a new extreme ray, project the rest to a . x = 0.
            let mut l0 = lines.remove(k);
            let mut al0 = vals[k].clone();
            if al0.is_negative() {
                l0 = l0.iter().map(|x| -x).collect();
                al0 = -al0;
            }
            for l in &mut lines {
                let c = linalg::dot(a, l) / &al0;
                if !c.is_zero() {
                    for (x, y) in l.iter_mut().zip(&l0) {
                        *x -= &c * y;
                    }
                }
            }
            for r in &mut rays {
                let c = linalg::dot(a, &r.v) / &al0;
                if !c.is_zero() {
                    for (x, y) in r.v.iter_mut().zip(&l0) {
                        *x -= &c * y;
                    }
                }
                r.tight.insert(step);
            }
            // Every earlier constraint vanished on the lineality space, so
            // the split-off ray is tight for all of them.
            let mut tight = TightSet::new(nbits);
            for s in 0..step {
                tight.insert(s);
            }
            rays.push(DdRay { v: primitive(&l0), tight });
            continue;
        }

        // Constraint vanishes on lineality: classic positive/zero/negative split.
        let sign: Vec<Rat> = rays.iter().map(|r| linalg::dot(a, &r.v)).collect();
        if !sign.iter().any(|s| s.is_negative()) {
            for (r, s) in rays.iter_mut().zip(&sign) {
                if s.is_zero() {
                    r.tight.insert(step);
                }
            }
            continue;
        }
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| sign[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| sign[i].is_negative()).collect();
        let mut new_rays: Vec<DdRay> = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common = rays[p].tight.intersect(&rays[n].tight);
                // Combinatorial adjacency: no third ray is tight on all
                // constraints common to p and n.
                let adjacent = rays.iter().enumerate().all(|(i, r)| {
                    i == p || i == n || !r.tight.contains_all(&common)
                });
                if !adjacent {
                    continue;
                }
                let v: Vec<Rat> = rays[p]
                    .v
                    .iter()
                    .zip(&rays[n].v)
                    .map(|(vp, vn)| &sign[p] * vn - &sign[n] * vp)
                    .collect();
                let mut tight = common;
                tight.insert(step);
                new_rays.push(DdRay { v: primitive(&v), tight });
            }
        }
        let mut kept: Vec<DdRay> = Vec::new();
        for (i, r) in rays.into_iter().enumerate() {
            if sign[i].is_negative() {
                continue;
            }
            let mut r = r;
            if sign[i].is_zero() {
                r.tight.insert(step);
            }
            kept.push(r);
        }
        kept.extend(new_rays);
        rays = kept;
        if rays.len() > budget {
            return Err(PolyError::BudgetExceeded { budget });
        }
    }

    let mut line_out: Vec<Vec<Rat>> = lines.iter().map(|l| primitive_signed(l)).collect();
    line_out.sort();
    let mut ray_out: Vec<Vec<Rat>> = rays.into_iter().map(|r| r.v).collect();
    ray_out.sort();
    ray_out.dedup();
    Ok((line_out, ray_out))
}

/// Convex hull (V to H): facet inequalities plus affine-hull equations, via
/// double description on the polar cone of valid inequalities.
pub fn hull(v: &VRep) -> Result<HRep, PolyError> {
    let d = v.dim;
    let mut pts = v.points.clone();
    pts.sort();
    pts.dedup();
    if pts.len() <= 1 && v.rays.is_empty() {
        return Err(PolyError::DegenerateInput);
    }
    // Polar variables (a, t): a . p + t >= 0 per point (inequality a.x >= -t),
    // a . r >= 0 per ray.
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for p in &pts {
        let mut row = p.clone();
        row.push(Rat::one());
        rows.push(row);
    }
    for r in &v.rays {
        let mut row = r.clone();
        row.push(Rat::zero());
        rows.push(row);
    }
    let (lines, rays) = dd_cone(&rows, d + 1);
    let mut inequalities = Vec::new();
    let mut equations = Vec::new();
    for l in lines {
        let (normal, t) = split_last(&l);
        if normal.iter().all(|x| x.is_zero()) {
            continue;
        }
        equations.push(canonical_equation(&normal, &-t));
    }
    for r in rays {
        let (normal, t) = split_last(&r);
        if normal.iter().all(|x| x.is_zero()) {
            continue; // the trivial inequality 0 >= -t
        }
        inequalities.push(canonical_inequality(&normal, &-t));
    }
    inequalities.sort();
    inequalities.dedup();
    equations.sort();
    equations.dedup();
    Ok(HRep { inequalities, equations })
}

fn split_last(v: &[Rat]) -> (Vec<Rat>, Rat) {
    let (last, head) = v.split_last().unwrap();
    (head.to_vec(), last.clone())
}

/// Primitive scaling of (normal, offset) by a positive factor.
pub fn canonical_inequality(normal: &[Rat], offset: &Rat) -> (Vec<Rat>, Rat) {
    let mut joint = normal.to_vec();
    joint.push(offset.clone());
    let p = primitive(&joint);
    let (n, o) = split_last(&p);
    (n, o)
}

fn canonical_equation(normal: &[Rat], offset: &Rat) -> (Vec<Rat>, Rat) {
    let mut joint = normal.to_vec();
    joint.push(offset.clone());
    let p = primitive_signed(&joint);
    let (n, o) = split_last(&p);
    (n, o)
}

/// Extreme points: the minimal sub-list of (deduplicated) points generating
/// the same region together with the rays. A point is dropped iff it lies in
/// the convex hull of the remaining points plus the recession cone, decided
/// by an exact feasibility solve.
pub fn extreme_points(v: &VRep) -> Vec<Vec<Rat>> {
    let mut pts = v.points.clone();
    pts.sort();
    pts.dedup();
    let rays: Vec<&Vec<Rat>> = v.rays.iter().collect();
    let mut out = Vec::new();
    for (i, p) in pts.iter().enumerate() {
        let others: Vec<&Vec<Rat>> =
            pts.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, q)| q).collect();
        if !lp::in_convex_hull_fast(&others, &rays, p) {
            out.push(p.clone());
        }
    }
    out
}

/// Ray extraction (H to V) for a homogeneous pointed system.
pub fn rays_from_hrep(h: &HRep) -> Result<Cone, PolyError> {
    rays_from_hrep_capped(h, usize::MAX)
}

/// Budgeted ray extraction; BudgetExceeded when the double description grows
/// past `budget` intermediate rays.
pub fn rays_from_hrep_capped(h: &HRep, budget: usize) -> Result<Cone, PolyError> {
    let dim = h
        .inequalities
        .first()
        .map(|(n, _)| n.len())
        .or_else(|| h.equations.first().map(|(n, _)| n.len()))
        .unwrap_or(0);
    let mut rows = Vec::new();
    for (n, o) in &h.inequalities {
        assert!(o.is_zero(), "rays_from_hrep expects a homogeneous system");
        rows.push(n.clone());
    }
    for (n, o) in &h.equations {
        assert!(o.is_zero(), "rays_from_hrep expects a homogeneous system");
        rows.push(n.clone());
        rows.push(n.iter().map(|x| -x).collect());
    }
    let (lines, rays) = dd_cone_capped(&rows, dim, budget)?;
    if !lines.is_empty() {
        return Err(PolyError::NotPointed);
    }
    Ok(Cone { apex: vec![Rat::zero(); dim], ray_generators: rays })
}

/// Placing (incremental) triangulation of a pointed cone: returns the maximal
/// simplices as sorted index sets into `ray_generators`, inserting rays in
/// their given order. Every point of the cone lies in the relative interior
/// of exactly one subcone spanned by a subset of a maximal simplex.
pub fn triangulate_cone(c: &Cone) -> Vec<Vec<usize>> {
    let rays = &c.ray_generators;
    let dim = rays.first().map(|r| r.len()).unwrap_or(0);
    let mut basis: Vec<Vec<Rat>> = Vec::new(); // spanning rays of the current linear span
    let mut simplices: Vec<Vec<usize>> = Vec::new();
    let mut used: Vec<usize> = Vec::new(); // rays appearing as generators so far

    for (k, r) in rays.iter().enumerate() {
        if r.iter().all(|x| x.is_zero()) {
            continue;
        }
        let mut with: Vec<Vec<Rat>> = basis.clone();
        with.push(r.clone());
        let in_span = linalg::rank(&with, dim) == basis.len();
        if !in_span {
            // Dimension grows: cone over the whole current triangulation.
            if simplices.is_empty() {
                simplices.push(vec![k]);
            } else {
                for s in &mut simplices {
                    s.push(k);
                    s.sort_unstable();
                }
            }
            basis.push(r.clone());
            used.push(k);
            continue;
        }
        // Inside the current cone: redundant for the triangulation.
        let cols: Vec<&Vec<Rat>> = used.iter().map(|&i| &rays[i]).collect();
        if cone_member(&cols, r) {
            continue;
        }
        // In the span but outside: cone over the visible boundary ridges.
        let d = basis.len();
        let mut ridge_count: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for (si, s) in simplices.iter().enumerate() {
            for drop in 0..s.len() {
                let mut ridge = s.clone();
                ridge.remove(drop);
                ridge_count.entry(ridge).or_default().push(si);
            }
        }
        let mut new_simplices = Vec::new();
        for (ridge, owners) in &ridge_count {
            if owners.len() != 1 {
                continue;
            }
            let s = &simplices[owners[0]];
            let apex_ray = s.iter().find(|i| !ridge.contains(i)).unwrap();
            let normal = ridge_normal(&basis, rays, ridge, &rays[*apex_ray], dim, d);
            if linalg::dot(&normal, r).is_negative() {
                let mut ns = ridge.clone();
                ns.push(k);
                ns.sort_unstable();
                new_simplices.push(ns);
            }
        }
        assert!(
            !new_simplices.is_empty(),
            "a ray outside the cone must see at least one boundary ridge"
        );
        simplices.extend(new_simplices);
        used.push(k);
    }
    simplices.sort();
    simplices
}

/// Membership of `x` in the conical hull of `cols` (exact LP).
fn cone_member(cols: &[&Vec<Rat>], x: &[Rat]) -> bool {
    if cols.is_empty() {
        return x.iter().all(|v| v.is_zero());
    }
    let d = x.len();
    let a: Vec<Vec<Rat>> = (0..d).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
    lp::feasible_nonneg(&a, x).is_some()
}

/// Hyperplane normal within the current span: vanishes on the ridge's rays,
/// positive on the owning simplex's remaining apex ray.
fn ridge_normal(
    basis: &[Vec<Rat>],
    rays: &[Vec<Rat>],
    ridge: &[usize],
    apex_ray: &[Rat],
    dim: usize,
    d: usize,
) -> Vec<Rat> {
    // u = B^T z with (ridge . u) = 0: a (d-1) x d homogeneous system in z.
    let rows: Vec<Vec<Rat>> = ridge
        .iter()
        .map(|&ri| basis.iter().map(|b| linalg::dot(b, &rays[ri])).collect())
        .collect();
    let null = linalg::nullspace(&rows, d);
    assert_eq!(null.len(), 1, "ridge must span a hyperplane of the current span");
    let z = &null[0];
    let mut u = vec![Rat::zero(); dim];
    for (zi, b) in z.iter().zip(basis) {
        if zi.is_zero() {
            continue;
        }
        for (ux, bx) in u.iter_mut().zip(b) {
            *ux += zi * bx;
        }
    }
    let orient = linalg::dot(&u, apex_ray);
    assert!(!orient.is_zero(), "apex ray cannot lie on its opposite ridge");
    if orient.is_negative() {
        u = u.iter().map(|x| -x).collect();
    }
    u
}

/// Re-export of the affine-span dimension for point sets.
pub fn affine_rank(points: &[Vec<Rat>]) -> usize {
    linalg::affine_rank(points)
}
