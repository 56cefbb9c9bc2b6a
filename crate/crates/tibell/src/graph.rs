//! Directed-graph machinery: SCCs, Johnson simple-cycle enumeration, De Bruijn
//! graphs, closed paths, integer weight matrices and the circulation space.
//!
//! Graphs are simple digraphs with self-loops allowed and no parallel edges.
//! Simple cycles are kept in a canonical form (rotated so the minimal node
//! comes first) so they can be compared, sorted and deduplicated as values.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::scalar::Rat;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("cycle enumeration exceeded the cap of {cap}")]
    CapExceeded { cap: usize },
    #[error("graph size overflows the supported range")]
    SizeOverflow,
    #[error("node sequence is not a closed path of the graph")]
    InvalidPath,
    #[error("matrix is not balanced")]
    NotBalanced,
}

/// A directed graph on nodes 0..n with a set of edges.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiGraph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl DiGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let edges: BTreeSet<_> = edges.into_iter().collect();
        for &(i, j) in &edges {
            assert!(i < n && j < n, "edge ({i},{j}) out of range for {n} nodes");
        }
        DiGraph { n, edges }
    }

    /// Complete graph with self-loops on n nodes.
    pub fn complete(n: usize) -> Self {
        DiGraph::new(n, (0..n).flat_map(|i| (0..n).map(move |j| (i, j))))
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.contains(&(i, j))
    }

    /// Edges in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    /// Out-neighbours of `i` in ascending order.
    pub fn successors(&self, i: usize) -> Vec<usize> {
        self.edges
            .range((i, 0)..=(i, self.n.saturating_sub(1)))
            .map(|&(_, j)| j)
            .collect()
    }

    /// Nodes that have at least one incident edge.
    pub fn non_isolated_nodes(&self) -> BTreeSet<usize> {
        self.edges.iter().flat_map(|&(i, j)| [i, j]).collect()
    }
}

/// A simple cycle in canonical form: pairwise-distinct nodes, rotated so the
/// minimal node label comes first.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct SimpleCycle {
    nodes: Vec<usize>,
}

impl SimpleCycle {
    pub fn new(nodes: Vec<usize>) -> Self {
        assert!(!nodes.is_empty(), "a simple cycle has at least one node");
        let mut sorted = nodes.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), nodes.len(), "cycle nodes must be distinct");
        let pivot = nodes
            .iter()
            .enumerate()
            .min_by_key(|&(_, v)| v)
            .map(|(i, _)| i)
            .unwrap();
        let mut rotated = nodes.clone();
        rotated.rotate_left(pivot);
        SimpleCycle { nodes: rotated }
    }

    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The cycle's edges, in traversal order.
    pub fn cycle_edges(&self) -> Vec<(usize, usize)> {
        let l = self.nodes.len();
        (0..l).map(|k| (self.nodes[k], self.nodes[(k + 1) % l])).collect()
    }

    /// Integer edge-use matrix W(c).
    pub fn weight_matrix(&self, n: usize) -> IntMatrix {
        let mut w = IntMatrix::zero(n);
        for (i, j) in self.cycle_edges() {
            *w.entry_mut(i, j) += 1;
        }
        w
    }
}

/// A closed path: node sequence of length N, cyclically consistent with edges.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ClosedPath {
    nodes: Vec<usize>,
}

impl ClosedPath {
    /// Builds the path and validates every cyclic step against the graph.
    pub fn new(g: &DiGraph, nodes: Vec<usize>) -> Result<Self, GraphError> {
        if nodes.is_empty() {
            return Err(GraphError::InvalidPath);
        }
        let l = nodes.len();
        for k in 0..l {
            if !g.has_edge(nodes[k], nodes[(k + 1) % l]) {
                return Err(GraphError::InvalidPath);
            }
        }
        Ok(ClosedPath { nodes })
    }

    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn cycle_edges(&self) -> Vec<(usize, usize)> {
        let l = self.nodes.len();
        (0..l).map(|k| (self.nodes[k], self.nodes[(k + 1) % l])).collect()
    }
}

/// Dense square integer matrix; used for edge-use counts W(c), closed-path
/// weight matrices, and the (possibly negative) error terms of Appendix-style
/// vertex enumeration.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct IntMatrix {
    n: usize,
    e: Vec<i64>,
}

impl IntMatrix {
    pub fn zero(n: usize) -> Self {
        IntMatrix { n, e: vec![0; n * n] }
    }

    pub fn from_entries(n: usize, e: Vec<i64>) -> Self {
        assert_eq!(e.len(), n * n);
        IntMatrix { n, e }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.e[i * self.n + j]
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut i64 {
        &mut self.e[i * self.n + j]
    }

    pub fn entries(&self) -> &[i64] {
        &self.e
    }

    pub fn add_scaled(&mut self, other: &IntMatrix, k: i64) {
        assert_eq!(self.n, other.n);
        for (a, b) in self.e.iter_mut().zip(&other.e) {
            *a += k * b;
        }
    }

    /// Sum of all entries (total weight N for a closed-path matrix).
    pub fn total(&self) -> i64 {
        self.e.iter().sum()
    }

    /// Row sum equals column sum at every node.
    pub fn is_balanced(&self) -> bool {
        (0..self.n).all(|i| {
            let row: i64 = (0..self.n).map(|j| self.entry(i, j)).sum();
            let col: i64 = (0..self.n).map(|j| self.entry(j, i)).sum();
            row == col
        })
    }

    pub fn is_nonnegative(&self) -> bool {
        self.e.iter().all(|&x| x >= 0)
    }

    /// Edges carried by nonzero entries.
    pub fn support_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if self.entry(i, j) != 0 {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn is_supported_on(&self, g: &DiGraph) -> bool {
        self.support_edges().iter().all(|&(i, j)| g.has_edge(i, j))
    }
}

/// Weight matrix of a closed path: entry (i,j) counts cyclic traversals of
/// the edge (i,j); always balanced and supported on the host graph.
pub fn weight_matrix(g: &DiGraph, p: &ClosedPath) -> Result<IntMatrix, GraphError> {
    let mut w = IntMatrix::zero(g.node_count());
    for (i, j) in p.cycle_edges() {
        if !g.has_edge(i, j) {
            return Err(GraphError::InvalidPath);
        }
        *w.entry_mut(i, j) += 1;
    }
    debug_assert!(w.is_balanced());
    Ok(w)
}

/// Strongly connected components (Kosaraju), each sorted ascending, the list
/// ordered by minimal member.
pub fn scc(g: &DiGraph) -> Vec<Vec<usize>> {
    let n = g.node_count();
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    // Iterative first pass: post-order on the forward graph.
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut stack = vec![(s, 0usize)];
        seen[s] = true;
        while let Some(&mut (v, ref mut idx)) = stack.last_mut() {
            let succ = g.successors(v);
            if *idx < succ.len() {
                let w = succ[*idx];
                *idx += 1;
                if !seen[w] {
                    seen[w] = true;
                    stack.push((w, 0));
                }
            } else {
                order.push(v);
                stack.pop();
            }
        }
    }
    // Reverse adjacency.
    let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, j) in g.edges() {
        rev[j].push(i);
    }
    let mut comp = vec![usize::MAX; n];
    let mut ncomp = 0;
    for &v in order.iter().rev() {
        if comp[v] != usize::MAX {
            continue;
        }
        let mut stack = vec![v];
        comp[v] = ncomp;
        while let Some(u) = stack.pop() {
            for &w in &rev[u] {
                if comp[w] == usize::MAX {
                    comp[w] = ncomp;
                    stack.push(w);
                }
            }
        }
        ncomp += 1;
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); ncomp];
    for v in 0..n {
        groups[comp[v]].push(v);
    }
    for grp in &mut groups {
        grp.sort_unstable();
    }
    groups.sort();
    groups
}

/// Whether the graph restricted to its non-isolated nodes is strongly
/// connected (and nonempty).
pub fn is_strongly_connected(g: &DiGraph) -> bool {
    let active = g.non_isolated_nodes();
    if active.is_empty() {
        return false;
    }
    let comps = scc(g);
    let touching: Vec<&Vec<usize>> =
        comps.iter().filter(|c| c.iter().any(|v| active.contains(v))).collect();
    touching.len() == 1 && touching[0].len() == active.len()
}

/// All simple cycles, canonical and sorted lexicographically (Johnson's
/// algorithm; self-loops are emitted as length-1 cycles).
pub fn simple_cycles(g: &DiGraph) -> Vec<SimpleCycle> {
    simple_cycles_capped(g, usize::MAX).expect("uncapped enumeration cannot exceed the cap")
}

/// Johnson enumeration with an output cap.
pub fn simple_cycles_capped(g: &DiGraph, cap: usize) -> Result<Vec<SimpleCycle>, GraphError> {
    let n = g.node_count();
    let mut out: Vec<SimpleCycle> = Vec::new();
    for start in 0..n {
        // Neighbours restricted to nodes >= start; Johnson's per-start subgraph.
        let nbrs = |v: usize| -> Vec<usize> {
            g.successors(v).into_iter().filter(|&w| w >= start).collect()
        };
        let mut blocked = vec![false; n];
        let mut blist: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        blocked[start] = true;
        let mut path = vec![start];
        let mut stack: Vec<(usize, Vec<usize>, bool)> = vec![(start, nbrs(start), false)];
        while let Some((v, pending, found)) = stack.last_mut() {
            if let Some(w) = pending.pop() {
                if w == *v && w == start {
                    // Self-loop at the start node.
                    if out.len() == cap {
                        return Err(GraphError::CapExceeded { cap });
                    }
                    out.push(SimpleCycle::new(vec![start]));
                    *found = true;
                } else if w == start {
                    if out.len() == cap {
                        return Err(GraphError::CapExceeded { cap });
                    }
                    out.push(SimpleCycle::new(path.clone()));
                    *found = true;
                } else if !blocked[w] {
                    blocked[w] = true;
                    path.push(w);
                    stack.push((w, nbrs(w), false));
                }
                continue;
            }
            let (v, _, found) = stack.pop().unwrap();
            path.pop();
            if found {
                // Recursive unblock.
                let mut todo = vec![v];
                while let Some(u) = todo.pop() {
                    if blocked[u] {
                        blocked[u] = false;
                        todo.extend(std::mem::take(&mut blist[u]));
                    }
                }
                if let Some((_, _, parent_found)) = stack.last_mut() {
                    *parent_found = true;
                }
            } else {
                for w in nbrs(v) {
                    blist[w].insert(v);
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// The logarithmic number: the simple-cycle count of the complete graph with
/// self-loops on n nodes, sum over k of n!/(k (n-k)!).
pub fn simple_cycle_count_formula(nodes: usize) -> BigUint {
    assert!(nodes >= 1);
    let fact = |t: usize| -> BigUint {
        (1..=t).fold(BigUint::one(), |acc, v| acc * BigUint::from(v))
    };
    let nf = fact(nodes);
    let mut total = BigUint::zero();
    for k in 1..=nodes {
        total += &nf / (BigUint::from(k) * fact(nodes - k));
    }
    total
}

/// De Bruijn graph: nodes are `order`-tuples over an `alphabet`-letter
/// alphabet, numbered as big-endian base-`alphabet` integers; one edge per
/// (order+1)-tuple. Order 1 gives the complete graph with self-loops.
pub fn de_bruijn(alphabet: usize, order: usize) -> Result<DiGraph, GraphError> {
    assert!(alphabet >= 2 && order >= 1);
    let n = alphabet
        .checked_pow(order as u32)
        .filter(|&n| n <= 1 << 20)
        .ok_or(GraphError::SizeOverflow)?;
    n.checked_mul(alphabet).filter(|&e| e <= 1 << 22).ok_or(GraphError::SizeOverflow)?;
    let tail = n / alphabet; // alphabet^(order-1)
    let mut edges = Vec::with_capacity(n * alphabet);
    for u in 0..n {
        for t in 0..alphabet {
            edges.push((u, (u % tail) * alphabet + t));
        }
    }
    Ok(DiGraph::new(n, edges))
}

/// Decomposes a balanced nonnegative integer matrix into a multiset of simple
/// cycles with multiplicities, peeling the lexicographically smallest cycle
/// available in the remaining support at each step.
pub fn decompose_into_cycles(w: &IntMatrix) -> Result<Vec<(SimpleCycle, i64)>, GraphError> {
    if !w.is_balanced() || !w.is_nonnegative() {
        return Err(GraphError::NotBalanced);
    }
    let n = w.size();
    let mut rem = w.clone();
    let mut out: Vec<(SimpleCycle, i64)> = Vec::new();
    loop {
        let Some(cycle) = lex_min_cycle_in_support(&rem, n) else {
            break;
        };
        let mult = cycle
            .cycle_edges()
            .iter()
            .map(|&(i, j)| rem.entry(i, j))
            .min()
            .unwrap();
        for (i, j) in cycle.cycle_edges() {
            *rem.entry_mut(i, j) -= mult;
        }
        out.push((cycle, mult));
    }
    debug_assert!(rem.entries().iter().all(|&x| x == 0));
    Ok(out)
}

/// Lexicographically smallest simple cycle in the support of `rem`, if any:
/// depth-first search from the smallest node on a cycle, taking smaller
/// successors first, returning the first cycle that closes.
fn lex_min_cycle_in_support(rem: &IntMatrix, n: usize) -> Option<SimpleCycle> {
    let succ = |v: usize| (0..n).filter(move |&w| rem.entry(v, w) > 0);
    for start in 0..n {
        // In a balanced matrix every support node lies on a cycle, so the
        // first start node with any out-edge hosts the lex-min cycle.
        if succ(start).next().is_none() {
            continue;
        }
        let mut path = vec![start];
        let mut on_path = vec![false; n];
        on_path[start] = true;
        let mut iters: Vec<Box<dyn Iterator<Item = usize>>> = vec![Box::new(succ(start))];
        while let Some(it) = iters.last_mut() {
            match it.next() {
                Some(w) if w == start => return Some(SimpleCycle::new(path)),
                Some(w) if !on_path[w] && w > start => {
                    on_path[w] = true;
                    path.push(w);
                    iters.push(Box::new(succ(w)));
                }
                Some(_) => {}
                None => {
                    iters.pop();
                    let v = path.pop().unwrap();
                    on_path[v] = false;
                }
            }
        }
        unreachable!("balanced support must close a cycle from its smallest support node");
    }
    None
}

/// Weak irreducibility: the support graph is connected (as an undirected
/// graph) once isolated nodes are removed; the zero matrix counts as weakly
/// irreducible by convention.
pub fn is_weakly_irreducible(w: &IntMatrix) -> bool {
    undirected_connected(w.size(), w.support_edges())
}

/// c-irreducibility: support of `w` together with the edges of `c` forms a
/// connected graph (ignoring isolated nodes).
pub fn is_c_irreducible(w: &IntMatrix, c: &SimpleCycle) -> bool {
    let mut edges = w.support_edges();
    edges.extend(c.cycle_edges());
    undirected_connected(w.size(), edges)
}

/// Node set touched by the support of `w` together with the edges of `c`.
pub fn c_support_nodes(w: &IntMatrix, c: &SimpleCycle) -> BTreeSet<usize> {
    let mut nodes: BTreeSet<usize> = w.support_edges().iter().flat_map(|&(i, j)| [i, j]).collect();
    nodes.extend(c.nodes().iter().copied());
    nodes
}

fn undirected_connected(n: usize, edges: Vec<(usize, usize)>) -> bool {
    if edges.is_empty() {
        return true;
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut active = vec![false; n];
    for &(i, j) in &edges {
        adj[i].push(j);
        adj[j].push(i);
        active[i] = true;
        active[j] = true;
    }
    let start = (0..n).find(|&v| active[v]).unwrap();
    let mut seen = vec![false; n];
    let mut stack = vec![start];
    seen[start] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    (0..n).all(|v| !active[v] || seen[v])
}

/// Basis of the circulation space W_Gamma: matrices supported on the graph's
/// edges whose row sums equal column sums at every node. Each basis element is
/// returned as a rational n x n matrix (row-major, length n^2); the basis is
/// the deterministic free-variable basis of the balance system.
pub fn circulation_space(g: &DiGraph) -> Vec<Vec<Rat>> {
    let n = g.node_count();
    let edges: Vec<(usize, usize)> = g.edges().collect();
    // Balance constraints in edge coordinates: for each node v,
    // sum of x_e over edges leaving v minus edges entering v = 0.
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for v in 0..n {
        let mut row = vec![Rat::zero(); edges.len()];
        for (k, &(i, j)) in edges.iter().enumerate() {
            if i == v {
                row[k] += Rat::one();
            }
            if j == v {
                row[k] -= Rat::one();
            }
        }
        rows.push(row);
    }
    let null = crate::linalg::nullspace(&rows, edges.len());
    null.into_iter()
        .map(|vec_e| {
            let mut m = vec![Rat::zero(); n * n];
            for (k, &(i, j)) in edges.iter().enumerate() {
                m[i * n + j] = vec_e[k].clone();
            }
            m
        })
        .collect()
}

/// Number of closed node sequences of length N, counted with starting point:
/// the trace of the N-th power of the 0/1 adjacency matrix.
pub fn closed_path_count(g: &DiGraph, n_steps: usize) -> BigUint {
    assert!(n_steps >= 1);
    let n = g.node_count();
    let mut adj = vec![BigUint::zero(); n * n];
    for (i, j) in g.edges() {
        adj[i * n + j] = BigUint::one();
    }
    let mul = |a: &[BigUint], b: &[BigUint]| -> Vec<BigUint> {
        let mut c = vec![BigUint::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                if a[i * n + k].is_zero() {
                    continue;
                }
                for j in 0..n {
                    let prod = &a[i * n + k] * &b[k * n + j];
                    c[i * n + j] += prod;
                }
            }
        }
        c
    };
    // Binary powering.
    let mut result: Option<Vec<BigUint>> = None;
    let mut base = adj;
    let mut k = n_steps;
    while k > 0 {
        if k & 1 == 1 {
            result = Some(match result {
                None => base.clone(),
                Some(r) => mul(&r, &base),
            });
        }
        k >>= 1;
        if k > 0 {
            base = mul(&base, &base);
        }
    }
    let result = result.unwrap();
    (0..n).fold(BigUint::zero(), |acc, i| acc + &result[i * n + i])
}

/// All closed paths of length N, as node sequences counted with starting
/// point, truncated at `cap` (the truncation is reported, not an error).
pub fn closed_paths(g: &DiGraph, n_steps: usize, cap: usize) -> (Vec<ClosedPath>, bool) {
    assert!(n_steps >= 1);
    let mut out = Vec::new();
    let mut truncated = false;
    let count = closed_path_count(g, n_steps);
    if count.is_zero() {
        return (out, false);
    }
    // Only worth enumerating when the count fits the cap comfortably.
    if count.to_usize().map(|c| c > cap).unwrap_or(true) {
        truncated = true;
    }
    'outer: for start in 0..g.node_count() {
        let mut seq = vec![start];
        loop {
            if seq.len() == n_steps {
                if g.has_edge(seq[n_steps - 1], start) {
                    if out.len() == cap {
                        truncated = true;
                        break 'outer;
                    }
                    out.push(ClosedPath { nodes: seq.clone() });
                }
            } else {
                let next = g.successors(*seq.last().unwrap());
                if let Some(&w) = next.first() {
                    seq.push(w);
                    continue;
                }
            }
            // Backtrack to the next sibling.
            loop {
                if seq.len() == 1 {
                    break;
                }
                let last = seq.pop().unwrap();
                let succ = g.successors(*seq.last().unwrap());
                if let Some(&w) = succ.iter().find(|&&w| w > last) {
                    seq.push(w);
                    break;
                }
            }
            if seq.len() == 1 {
                break;
            }
        }
    }
    (out, truncated)
}
