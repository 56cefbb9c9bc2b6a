//! Vertex enumeration of the closed-path polytopes p_N: the normalized cycle
//! polytope p_*, per-cycle error sets err(c, r), the simplex-pruning claims,
//! and the projected local-polytope vertex counts for every finite N.
//!
//! The error-set algorithm works per (cycle, residue): triangulate the cone
//! with apex r w(c) and rays w(c') - w(c), prune simplices that provably
//! contain no vertices, enumerate the bounded lattice combinations that
//! remain, and finish with an exact extreme-point extraction. Error sets are
//! independent of N, so per-N vertex queries are assembly only.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::bell::{self, Scenario};
use crate::graph::{self, DiGraph, IntMatrix, SimpleCycle};
use crate::lp;
use crate::poly::{self, Cone};
use crate::scalar::Rat;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VertsError {
    #[error("enumeration budget exceeded ({0})")]
    BudgetExceeded(String),
}

/// The error set of one (cycle, residue) pair: the vertices of the local
/// polyhedron C~_{c,r}, stored as integer matrices in W_Gamma(r) (the
/// "tilde" form; subtract r w(c) for the error terms proper).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ErrorSet {
    pub cycle: SimpleCycle,
    pub residue: usize,
    pub members: Vec<IntMatrix>,
}

impl ErrorSet {
    /// Error terms e = v - r w(c) in W_Gamma(0), as rational matrices.
    pub fn err_members(&self, n: usize) -> Vec<Vec<Rat>> {
        let lc = self.cycle.len() as i64;
        let r = self.residue as i64;
        let wc = self.cycle.weight_matrix(n);
        self.members
            .iter()
            .map(|v| {
                (0..n * n)
                    .map(|k| {
                        Rat::from_integer(v.entries()[k].into())
                            - Rat::new((r * wc.entries()[k]).into(), lc.into())
                    })
                    .collect()
            })
            .collect()
    }
}

/// All error sets of a graph, keyed by (cycle index, residue), plus the
/// ring-size threshold from which the assembly is exact.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GraphErrorSets {
    pub graph: DiGraph,
    pub cycles: Vec<SimpleCycle>,
    pub sets: BTreeMap<(usize, usize), ErrorSet>,
    pub min_valid_n: usize,
}

/// Vertex report for one ring size N.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VertexReport {
    pub n: usize,
    /// Normalized weight matrices (total weight 1), flattened row-major.
    pub vertices: Vec<Vec<Rat>>,
    pub per_cycle_counts: Vec<(SimpleCycle, usize)>,
    pub projected_vertices: Option<Vec<Vec<Rat>>>,
    /// True when the brute-force pipeline produced the result.
    pub from_brute_force: bool,
}

/// Vertices of the normalized cycle polytope p_*: the matrices w(c) over all
/// simple cycles (flattened, sorted; distinct cycles give distinct matrices).
pub fn p_star_vertices(g: &DiGraph) -> Vec<Vec<Rat>> {
    let n = g.node_count();
    let mut out: Vec<Vec<Rat>> = graph::simple_cycles(g)
        .iter()
        .map(|c| normalized_cycle_matrix(c, n))
        .collect();
    out.sort();
    out.dedup();
    out
}

fn normalized_cycle_matrix(c: &SimpleCycle, n: usize) -> Vec<Rat> {
    let w = c.weight_matrix(n);
    let l = c.len() as i64;
    w.entries().iter().map(|&x| Rat::new(x.into(), l.into())).collect()
}

/// The uniform vertex upper bound |C| (n+1)^(|C|-1).
pub fn vertex_upper_bound(g: &DiGraph) -> BigUint {
    let cycles = graph::simple_cycles(g).len();
    let n = g.node_count();
    BigUint::from(cycles) * BigUint::from(n + 1).pow((cycles - 1) as u32)
}

/// Error set for one (cycle, residue) pair, with the default ray ordering.
pub fn error_set(g: &DiGraph, c: &SimpleCycle, r: usize) -> ErrorSet {
    let cycles = graph::simple_cycles(g);
    error_set_ordered(g, &cycles, c, r, false)
}

/// Error-set computation with a selectable triangulation insertion order
/// (forward or reversed ray list); the output is invariant under the choice.
pub fn error_set_ordered(
    g: &DiGraph,
    cycles: &[SimpleCycle],
    c0: &SimpleCycle,
    r: usize,
    reverse_rays: bool,
) -> ErrorSet {
    assert!(r < c0.len());
    cycle_error_sets(g, cycles, c0, reverse_rays).swap_remove(r)
}

/// All residues of one cycle in a single pass: the triangulation, the subset
/// search and the lattice enumeration are residue-independent, so lattice
/// points are bucketed by their total length mod l(c).
pub fn cycle_error_sets(
    g: &DiGraph,
    cycles: &[SimpleCycle],
    c0: &SimpleCycle,
    reverse_rays: bool,
) -> Vec<ErrorSet> {
    let n = g.node_count();
    let l0 = c0.len();
    let w0 = c0.weight_matrix(n);
    let others: Vec<&SimpleCycle> = cycles.iter().filter(|c| *c != c0).collect();
    assert!(others.len() <= 64, "error-set masks are limited to 64 rays");
    let other_w: Vec<IntMatrix> = others.iter().map(|c| c.weight_matrix(n)).collect();
    let is_c0_edge: Vec<bool> = {
        let mut v = vec![false; n * n];
        for (i, j) in c0.cycle_edges() {
            v[i * n + j] = true;
        }
        v
    };

    // Ray directions w(c') - w(c0), scaled to primitive integer vectors.
    let ray_dirs: Vec<Vec<Rat>> = others
        .iter()
        .zip(&other_w)
        .map(|(c, w)| {
            let l = c.len() as i64;
            let dir: Vec<Rat> = (0..n * n)
                .map(|k| {
                    Rat::new(w.entries()[k].into(), l.into())
                        - Rat::new(w0.entries()[k].into(), (l0 as i64).into())
                })
                .collect();
            poly::primitive(&dir)
        })
        .collect();
    let mut order: Vec<usize> = (0..others.len()).collect();
    if reverse_rays {
        order.reverse();
    }
    let ordered_rays: Vec<Vec<Rat>> = order.iter().map(|&i| ray_dirs[i].clone()).collect();
    let cone = Cone { apex: vec![Rat::zero(); n * n], ray_generators: ordered_rays };
    let maximal: Vec<Vec<usize>> = poly::triangulate_cone(&cone)
        .into_iter()
        .map(|s| {
            let mut t: Vec<usize> = s.into_iter().map(|i| order[i]).collect();
            t.sort_unstable();
            t
        })
        .collect();

    // Subset lattice of the triangulation, explored by increasing size with
    // the pruning claims; blocked masks cut off all supersets.
    let max_masks: Vec<u64> = maximal
        .iter()
        .map(|s| s.iter().fold(0u64, |m, &i| m | (1 << i)))
        .collect();
    let mut blocked: Vec<u64> = Vec::new();
    let mut members: Vec<BTreeSet<IntMatrix>> = vec![BTreeSet::new(); l0];
    let mut level: BTreeSet<u64> = BTreeSet::new();
    level.insert(0);
    while !level.is_empty() {
        let mut next: BTreeSet<u64> = BTreeSet::new();
        for &mask in &level {
            if blocked.iter().any(|&b| b & mask == b) {
                continue;
            }
            let s: Vec<usize> = (0..others.len()).filter(|&i| mask & (1 << i) != 0).collect();
            let mut m_s = IntMatrix::zero(n);
            for &i in &s {
                m_s.add_scaled(&other_w[i], 1);
            }
            let discard = apply_claims(
                &m_s, &s, c0, &w0, &others, &other_w, &is_c0_edge, n, &mut blocked, mask,
            );
            if !discard {
                enumerate_simplex(&s, c0, &w0, &others, &other_w, &is_c0_edge, n, &mut members);
            }
            // Expand to supersets that stay inside some maximal simplex.
            for (mi, &mm) in max_masks.iter().enumerate() {
                if mm & mask != mask {
                    continue;
                }
                for &i in &maximal[mi] {
                    let bit = 1u64 << i;
                    if mask & bit == 0 {
                        next.insert(mask | bit);
                    }
                }
            }
        }
        level = next;
    }

    // Final extraction per residue: vertices of conv(E') + cone(rays).
    let ray_refs: Vec<&Vec<Rat>> = ray_dirs.iter().collect();
    members
        .into_iter()
        .enumerate()
        .map(|(r, set)| {
            let raw: Vec<IntMatrix> = set.into_iter().collect();
            let pts: Vec<Vec<Rat>> = raw
                .iter()
                .map(|m| m.entries().iter().map(|&x| Rat::from_integer(x.into())).collect())
                .collect();
            let mut out = Vec::new();
            for (i, p) in pts.iter().enumerate() {
                let other_pts: Vec<&Vec<Rat>> =
                    pts.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, q)| q).collect();
                if !lp::in_convex_hull_fast(&other_pts, &ray_refs, p) {
                    out.push(raw[i].clone());
                }
            }
            out.sort();
            ErrorSet { cycle: c0.clone(), residue: r, members: out }
        })
        .collect()
}

/// Applies the three discard claims to the simplex S; returns true when the
/// simplex cannot contain vertices. Claims with full c-support additionally
/// block every superset.
#[allow(clippy::too_many_arguments)]
fn apply_claims(
    m_s: &IntMatrix,
    s: &[usize],
    c0: &SimpleCycle,
    w0: &IntMatrix,
    others: &[&SimpleCycle],
    other_w: &[IntMatrix],
    is_c0_edge: &[bool],
    n: usize,
    blocked: &mut Vec<u64>,
    mask: u64,
) -> bool {
    let _ = w0;
    // Claim: interior points of a non-c-irreducible simplex are never
    // c-irreducible (discards S only; supersets may reconnect).
    if !graph::is_c_irreducible(m_s, c0) {
        return true;
    }
    let support = graph::c_support_nodes(m_s, c0);
    // Claim: removing lcm/l(c') copies of some W(c') keeps the matrix
    // admissible, so interior points recede along that ray.
    for &i in s {
        let cp = others[i];
        let k = (c0.len().lcm(&cp.len()) / cp.len()) as i64;
        let mut m = m_s.clone();
        m.add_scaled(&other_w[i], -k);
        if nonneg_outside(&m, is_c0_edge, n)
            && graph::is_c_irreducible(&m, c0)
            && graph::c_support_nodes(&m, c0) == support
        {
            if support.len() == n {
                blocked.push(mask);
            }
            return true;
        }
    }
    // Claim: two same-length cycles in S whose swap stays admissible put
    // every interior point in the middle of a segment.
    for (a, &i) in s.iter().enumerate() {
        for &j in &s[a + 1..] {
            if others[i].len() != others[j].len() {
                continue;
            }
            let l = others[i].len() as i64;
            // Work with l*M_S +- (W_i - W_j): same sign pattern as
            // M_S +- (w_i - w_j) requires the scaled base matrix.
            let mut scaled = m_s.clone();
            for e in 0..n * n {
                let v = scaled.entries()[e] * l;
                *scaled.entry_mut(e / n, e % n) = v;
            }
            let mut p = scaled.clone();
            p.add_scaled(&other_w[i], 1);
            p.add_scaled(&other_w[j], -1);
            let mut q = scaled;
            q.add_scaled(&other_w[j], 1);
            q.add_scaled(&other_w[i], -1);
            let ok = |m: &IntMatrix| {
                nonneg_outside(m, is_c0_edge, n)
                    && graph::is_c_irreducible(m, c0)
                    && graph::c_support_nodes(m, c0) == support
            };
            if ok(&p) && ok(&q) {
                if support.len() == n {
                    blocked.push(mask);
                }
                return true;
            }
        }
    }
    false
}

fn nonneg_outside(m: &IntMatrix, is_c0_edge: &[bool], n: usize) -> bool {
    (0..n * n).all(|k| is_c0_edge[k] || m.entries()[k] >= 0)
}

/// Bounded lattice enumeration inside one surviving simplex, with the E'
/// membership test from the algorithm.
#[allow(clippy::too_many_arguments)]
fn enumerate_simplex(
    s: &[usize],
    c0: &SimpleCycle,
    w0: &IntMatrix,
    others: &[&SimpleCycle],
    other_w: &[IntMatrix],
    is_c0_edge: &[bool],
    n: usize,
    members: &mut [BTreeSet<IntMatrix>],
) {
    let l0 = c0.len() as i64;
    let bounds: Vec<i64> = s
        .iter()
        .map(|&i| (c0.len().lcm(&others[i].len()) / others[i].len()) as i64 + 1)
        .collect();
    let mut lambdas: Vec<i64> = vec![1; s.len()];
    loop {
        let total: i64 = s
            .iter()
            .zip(&lambdas)
            .map(|(&i, &l)| l * others[i].len() as i64)
            .sum();
        let r = total.rem_euclid(l0) as usize;
        let lambda0 = -(total.div_euclid(l0));
        let mut eps = IntMatrix::zero(n);
        eps.add_scaled(w0, lambda0);
        for (&i, &l) in s.iter().zip(&lambdas) {
            eps.add_scaled(&other_w[i], l);
        }
        debug_assert!(nonneg_outside(&eps, is_c0_edge, n));
        if graph::is_c_irreducible(&eps, c0) {
            let mut in_e_prime = true;
            for &i in s {
                let lcm = c0.len().lcm(&others[i].len()) as i64;
                let mut eps2 = eps.clone();
                eps2.add_scaled(w0, lcm / l0);
                eps2.add_scaled(&other_w[i], -lcm / others[i].len() as i64);
                if graph::is_c_irreducible(&eps2, c0) && nonneg_outside(&eps2, is_c0_edge, n) {
                    in_e_prime = false;
                    break;
                }
            }
            if in_e_prime {
                members[r].insert(eps);
            }
        }
        // Next lambda tuple (odometer).
        let mut k = 0;
        loop {
            if k == s.len() {
                return;
            }
            lambdas[k] += 1;
            if lambdas[k] <= bounds[k] {
                break;
            }
            lambdas[k] = 1;
            k += 1;
        }
    }
}

/// All error sets of a graph, cycles processed in parallel.
pub fn compute_error_sets(g: &DiGraph) -> GraphErrorSets {
    let cycles = graph::simple_cycles(g);
    let sets: BTreeMap<(usize, usize), ErrorSet> = (0..cycles.len())
        .into_par_iter()
        .flat_map_iter(|ci| {
            cycle_error_sets(g, &cycles, &cycles[ci], false)
                .into_iter()
                .enumerate()
                .map(move |(r, set)| ((ci, r), set))
        })
        .collect();
    let mut es = GraphErrorSets { graph: g.clone(), cycles, sets, min_valid_n: 1 };
    es.min_valid_n = find_min_valid_n(&es);
    es
}

/// The cached exactness threshold: for every N at or above it, the error-set
/// assembly gives the exact vertex list of p_N.
pub fn min_valid_n(es: &GraphErrorSets) -> usize {
    es.min_valid_n
}

/// The smallest N from which every assembled matrix a W(c) + v has positive
/// entries on the positions of its cycle; below this the assembled list can
/// even leave the nonnegative orthant.
pub fn positivity_threshold(es: &GraphErrorSets) -> usize {
    let mut worst: i64 = 0;
    for ((ci, r), set) in &es.sets {
        let c = &es.cycles[*ci];
        let l = c.len() as i64;
        for v in &set.members {
            let vmin = c
                .cycle_edges()
                .iter()
                .map(|&(i, j)| v.entry(i, j))
                .min()
                .unwrap();
            // The cycle entry is (N - r)/l + v_ij, so the largest N in the
            // residue class with a nonpositive entry is r - l*vmin.
            worst = worst.max(*r as i64 - l * vmin);
        }
    }
    (worst + 1).max(1) as usize
}

/// Smallest N such that the assembly is exact for one full period of ring
/// sizes (lcm of all cycle lengths). Starts at the positivity threshold,
/// where p_N is the convex hull of the assembled points, and scans until
/// every assembled point is distinct and extreme for a whole period; the
/// counts are then periodic in N, depending only on N modulo the period.
fn find_min_valid_n(es: &GraphErrorSets) -> usize {
    let t0 = positivity_threshold(es);
    let period = es.cycles.iter().fold(1usize, |acc, c| acc.lcm(&c.len()));
    let mut run_start = t0;
    let mut n_ring = t0;
    loop {
        if assembly_is_exact(es, n_ring) {
            if n_ring + 1 - run_start == period {
                return run_start;
            }
        } else {
            run_start = n_ring + 1;
        }
        n_ring += 1;
    }
}

/// Whether every assembled candidate at ring size N is a distinct extreme
/// point of their convex hull (checked exactly).
fn assembly_is_exact(es: &GraphErrorSets, n_ring: usize) -> bool {
    let n = es.graph.node_count();
    let mut pts: Vec<Vec<Rat>> = Vec::new();
    for (ci, c) in es.cycles.iter().enumerate() {
        let l = c.len();
        let r = n_ring % l;
        let a = ((n_ring - r) / l) as i64;
        let w0 = c.weight_matrix(n);
        for v in &es.sets[&(ci, r)].members {
            let mut m = v.clone();
            m.add_scaled(&w0, a);
            if !m.is_nonnegative() {
                return false;
            }
            pts.push(
                m.entries()
                    .iter()
                    .map(|&x| Rat::new(x.into(), (n_ring as i64).into()))
                    .collect(),
            );
        }
    }
    let total = pts.len();
    pts.sort();
    pts.dedup();
    if pts.len() != total {
        return false;
    }
    (0..pts.len()).all(|i| {
        let others: Vec<&Vec<Rat>> =
            pts.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, q)| q).collect();
        !lp::in_convex_hull_fast(&others, &[], &pts[i])
    })
}

/// Vertices of p_N via error-set assembly (N >= min_valid_n) or brute force.
pub fn p_n_vertices(es: &GraphErrorSets, n_ring: usize) -> VertexReport {
    let g = &es.graph;
    let n = g.node_count();
    if n_ring < min_valid_n(es) {
        let vertices = brute_force_p_n(g, n_ring, usize::MAX).expect("uncapped");
        return VertexReport {
            n: n_ring,
            vertices,
            per_cycle_counts: Vec::new(),
            projected_vertices: None,
            from_brute_force: true,
        };
    }
    let mut vertices: BTreeSet<Vec<Rat>> = BTreeSet::new();
    let mut per_cycle = Vec::new();
    for (ci, c) in es.cycles.iter().enumerate() {
        let l = c.len();
        let r = n_ring % l;
        let a = (n_ring - r) / l;
        let set = &es.sets[&(ci, r)];
        let w0 = c.weight_matrix(n);
        let mut count = 0;
        for v in &set.members {
            let mut m = v.clone();
            m.add_scaled(&w0, a as i64);
            assert!(m.is_nonnegative() && m.is_balanced(), "assembled vertex must be a weight matrix");
            assert!(graph::is_weakly_irreducible(&m), "assembled vertex must be weakly irreducible");
            assert_eq!(m.total(), n_ring as i64);
            let norm: Vec<Rat> = m
                .entries()
                .iter()
                .map(|&x| Rat::new(x.into(), (n_ring as i64).into()))
                .collect();
            if vertices.insert(norm) {
                count += 1;
            }
        }
        per_cycle.push((c.clone(), count));
    }
    VertexReport {
        n: n_ring,
        vertices: vertices.into_iter().collect(),
        per_cycle_counts: per_cycle,
        projected_vertices: None,
        from_brute_force: false,
    }
}

/// Brute-force vertex computation: enumerate all balanced, weakly
/// irreducible, edge-supported nonnegative integer matrices of total weight N
/// through cycle-multiplicity combinations, then filter extreme points.
pub fn brute_force_p_n(
    g: &DiGraph,
    n_ring: usize,
    budget: usize,
) -> Result<Vec<Vec<Rat>>, VertsError> {
    let n = g.node_count();
    let cycles = graph::simple_cycles(g);
    let lengths: Vec<usize> = cycles.iter().map(|c| c.len()).collect();
    let ws: Vec<IntMatrix> = cycles.iter().map(|c| c.weight_matrix(n)).collect();
    let mut candidates: BTreeSet<IntMatrix> = BTreeSet::new();
    let mut work = 0usize;
    // DFS over multiplicity vectors with remaining-weight pruning.
    fn rec(
        idx: usize,
        remaining: usize,
        acc: &IntMatrix,
        lengths: &[usize],
        ws: &[IntMatrix],
        out: &mut BTreeSet<IntMatrix>,
        work: &mut usize,
        budget: usize,
    ) -> Result<(), VertsError> {
        *work += 1;
        if *work > budget {
            return Err(VertsError::BudgetExceeded(format!(
                "brute-force combination budget {budget}"
            )));
        }
        if remaining == 0 {
            if graph::is_weakly_irreducible(acc) {
                out.insert(acc.clone());
            }
            return Ok(());
        }
        if idx == lengths.len() {
            return Ok(());
        }
        let l = lengths[idx];
        let max_mult = remaining / l;
        for mult in 0..=max_mult {
            let mut next = acc.clone();
            next.add_scaled(&ws[idx], mult as i64);
            rec(idx + 1, remaining - mult * l, &next, lengths, ws, out, work, budget)?;
        }
        Ok(())
    }
    rec(
        0,
        n_ring,
        &IntMatrix::zero(n),
        &lengths,
        &ws,
        &mut candidates,
        &mut work,
        budget,
    )?;
    let pts: Vec<Vec<Rat>> = candidates
        .iter()
        .map(|m| {
            m.entries()
                .iter()
                .map(|&x| Rat::new(x.into(), (n_ring as i64).into()))
                .collect()
        })
        .collect();
    // Parallel exact extreme-point filter.
    let keep: Vec<bool> = (0..pts.len())
        .into_par_iter()
        .map(|i| {
            let others: Vec<&Vec<Rat>> =
                pts.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, q)| q).collect();
            !lp::in_convex_hull_fast(&others, &[], &pts[i])
        })
        .collect();
    Ok(pts
        .into_iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(p, _)| p)
        .collect())
}

/// Projection Phi of a normalized weight matrix into correlator space.
pub fn project_matrix(sc: Scenario, m: &[Rat]) -> Vec<Rat> {
    let g = sc.de_bruijn_graph();
    let n = g.node_count();
    assert_eq!(m.len(), n * n);
    let mut out = vec![Rat::zero(); sc.dim()];
    for (i, j) in g.edges() {
        let coeff = &m[i * n + j];
        if coeff.is_zero() {
            continue;
        }
        let psi = bell::psi_edge(sc, &sc.edge_strategies(i, j).unwrap());
        for (acc, x) in out.iter_mut().zip(psi) {
            *acc += coeff * x;
        }
    }
    out
}

/// Vertices of the projected local polytope for ring size N: project the p_N
/// vertices, deduplicate, and filter extreme points in correlator space.
pub fn projected_p_n(sc: Scenario, es: &GraphErrorSets, n_ring: usize) -> VertexReport {
    let mut report = p_n_vertices(es, n_ring);
    let mut projected: Vec<Vec<Rat>> =
        report.vertices.iter().map(|m| project_matrix(sc, m)).collect();
    projected.sort();
    projected.dedup();
    let keep: Vec<bool> = (0..projected.len())
        .into_par_iter()
        .map(|i| {
            let others: Vec<&Vec<Rat>> = projected
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, q)| q)
                .collect();
            !lp::in_convex_hull_fast(&others, &[], &projected[i])
        })
        .collect();
    report.projected_vertices = Some(
        projected
            .into_iter()
            .zip(keep)
            .filter(|(_, k)| *k)
            .map(|(p, _)| p)
            .collect(),
    );
    report
}

/// Number of vertices of the projected polyhedron Phi(C~_{c,r}): the error
/// count close to the projected vertex Phi(w(c)).
pub fn projected_error_count(sc: Scenario, es: &GraphErrorSets, ci: usize, r: usize) -> usize {
    let n = es.graph.node_count();
    let set = &es.sets[&(ci, r)];
    let mut pts: Vec<Vec<Rat>> = set
        .members
        .iter()
        .map(|m| {
            let rat: Vec<Rat> =
                m.entries().iter().map(|&x| Rat::from_integer(x.into())).collect();
            project_matrix(sc, &rat)
        })
        .collect();
    pts.sort();
    pts.dedup();
    let c0 = &es.cycles[ci];
    let w0 = normalized_cycle_matrix(c0, n);
    let rays: Vec<Vec<Rat>> = es
        .cycles
        .iter()
        .filter(|c| *c != c0)
        .map(|c| {
            let wc = normalized_cycle_matrix(c, n);
            let dir: Vec<Rat> = wc.iter().zip(&w0).map(|(a, b)| a - b).collect();
            project_matrix(sc, &dir)
        })
        .collect();
    let ray_refs: Vec<&Vec<Rat>> = rays.iter().collect();
    (0..pts.len())
        .filter(|&i| {
            let others: Vec<&Vec<Rat>> =
                pts.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, q)| q).collect();
            !lp::in_convex_hull_fast(&others, &ray_refs, &pts[i])
        })
        .count()
}
