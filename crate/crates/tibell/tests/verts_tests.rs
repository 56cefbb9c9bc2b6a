//! Vertex-enumeration suite on small graphs, where the error-set machinery
//! can be checked against direct brute-force vertex computation.

mod common;

use num_bigint::BigUint;
use tibell::graph::{self, DiGraph};
use tibell::lp;
use tibell::scalar::Rat;
use tibell::verts;

#[test]
fn k2_error_sets() {
    let g = DiGraph::complete(2);
    let es = verts::compute_error_sets(&g);
    assert_eq!(es.cycles.len(), 3);
    // Residue 0 always contains exactly the zero correction.
    for (ci, c) in es.cycles.iter().enumerate() {
        let set = &es.sets[&(ci, 0)];
        assert_eq!(set.members.len(), 1);
        assert_eq!(set.members[0], graph::IntMatrix::zero(2));
        assert_eq!(c.len(), es.cycles[ci].len());
    }
    // The 2-cycle at odd residue has two corrections (one per loop).
    let two_cycle = es.cycles.iter().position(|c| c.len() == 2).unwrap();
    assert_eq!(es.sets[&(two_cycle, 1)].members.len(), 2);
}

#[test]
fn k3_vertices_match_brute_force() {
    let g = DiGraph::complete(3);
    let es = verts::compute_error_sets(&g);
    let start = verts::min_valid_n(&es);
    for n in start..start + 5 {
        let mut assembled = verts::p_n_vertices(&es, n).vertices;
        let mut brute = verts::brute_force_p_n(&g, n, usize::MAX).unwrap();
        assembled.sort();
        brute.sort();
        assert_eq!(assembled, brute, "n = {n}");
    }
}

#[test]
fn k3_brute_force_below_threshold() {
    let g = DiGraph::complete(3);
    let es = verts::compute_error_sets(&g);
    // Below the validity threshold the report falls back to brute force.
    let n = verts::min_valid_n(&es) - 1;
    let rep = verts::p_n_vertices(&es, n);
    assert!(rep.from_brute_force);
    let mut brute = verts::brute_force_p_n(&g, n, usize::MAX).unwrap();
    let mut got = rep.vertices;
    got.sort();
    brute.sort();
    assert_eq!(got, brute);
}

#[test]
fn de_bruijn_vertices_match_brute_force() {
    let g = graph::de_bruijn(2, 2).unwrap();
    let es = verts::compute_error_sets(&g);
    let start = verts::min_valid_n(&es);
    for n in start..start + 3 {
        let mut assembled = verts::p_n_vertices(&es, n).vertices;
        let mut brute = verts::brute_force_p_n(&g, n, usize::MAX).unwrap();
        assembled.sort();
        brute.sort();
        assert_eq!(assembled, brute, "n = {n}");
    }
}

#[test]
fn error_set_is_triangulation_order_invariant() {
    let g = DiGraph::complete(3);
    let cycles = graph::simple_cycles(&g);
    for c in cycles.iter().filter(|c| c.len() >= 2) {
        for r in 0..c.len() {
            let forward = verts::error_set_ordered(&g, &cycles, c, r, false);
            let reversed = verts::error_set_ordered(&g, &cycles, c, r, true);
            let mut a = forward.members.clone();
            let mut b = reversed.members.clone();
            a.sort();
            b.sort();
            assert_eq!(a, b, "cycle {:?}, residue {r}", c.nodes());
        }
    }
}

#[test]
fn star_vertices_are_extreme() {
    let g = DiGraph::complete(3);
    let stars = verts::p_star_vertices(&g);
    assert_eq!(stars.len(), 8);
    for (i, p) in stars.iter().enumerate() {
        let others: Vec<&Vec<Rat>> = stars
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, q)| q)
            .collect();
        assert!(!lp::in_convex_hull(&others, &[], p));
    }
}

#[test]
fn assembled_vertices_are_normalized_balanced_points() {
    let g = DiGraph::complete(3);
    let es = verts::compute_error_sets(&g);
    let n = verts::min_valid_n(&es) + 1;
    let rep = verts::p_n_vertices(&es, n);
    let size = g.node_count();
    for v in &rep.vertices {
        // Entries are multiples of 1/n summing to 1, with balanced flow.
        let total: Rat = v.iter().sum();
        assert_eq!(total, Rat::from_integer(1.into()));
        for i in 0..size {
            let out_flow: Rat = (0..size).map(|j| v[i * size + j].clone()).sum();
            let in_flow: Rat = (0..size).map(|j| v[j * size + i].clone()).sum();
            assert_eq!(out_flow, in_flow);
        }
    }
}

#[test]
fn upper_bound_formula() {
    let g = DiGraph::complete(4);
    let expected = BigUint::from(24u32) * BigUint::from(5u32).pow(23);
    assert_eq!(verts::vertex_upper_bound(&g), expected);
    // The bound really is an upper bound on small cases.
    let g3 = DiGraph::complete(3);
    let es = verts::compute_error_sets(&g3);
    let n = verts::min_valid_n(&es);
    let count = BigUint::from(verts::p_n_vertices(&es, n).vertices.len());
    assert!(count <= verts::vertex_upper_bound(&g3));
}

#[test]
fn projection_is_linear_and_consistent() {
    use tibell::bell::Scenario;
    let sc = Scenario::new(2, 1);
    let g = sc.de_bruijn_graph();
    let n = g.node_count();
    // Projecting a normalized cycle matrix equals the projected point of the
    // cycle read as a closed path.
    for c in graph::simple_cycles(&g) {
        let w = c.weight_matrix(n);
        let l = Rat::from_integer((c.len() as i64).into());
        let norm: Vec<Rat> =
            w.entries().iter().map(|&x| Rat::from_integer(x.into()) / &l).collect();
        let projected = verts::project_matrix(sc, &norm);
        let path = graph::ClosedPath::new(&g, c.nodes().to_vec()).unwrap();
        let direct = tibell::bell::projected_point(sc, &path).unwrap();
        assert_eq!(projected, direct);
    }
}
