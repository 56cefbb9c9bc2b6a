//! Min-plus matrix algebra: tropical products, powers and traces, the
//! eigenvalue via Karp's minimum mean cycle algorithm, Kleene plus, one
//! witness eigenvector, the critical graph, cyclicity, and the stabilization
//! numbers (sigma, N0) of the power sequence.

use num_integer::Integer;
use num_traits::Zero;
use thiserror::Error;

use crate::graph::{self, DiGraph};
use crate::scalar::{ExtendedRational, Finite, PlusInfinity, Rat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TropError {
    #[error("matrix dimensions do not match: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("matrix is not irreducible (graph not strongly connected)")]
    NotIrreducible,
    #[error("matrix has a negative-weight cycle; Kleene plus diverges")]
    NegativeCycle,
    #[error("stabilization index exceeds the budget max_n = {max_n}")]
    BudgetExceeded { max_n: usize },
}

/// Square matrix over the tropical semiring (Q u {+inf}, min, +).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TropMatrix {
    n: usize,
    e: Vec<ExtendedRational>,
}

/// Vector over the tropical semiring.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TropVector {
    e: Vec<ExtendedRational>,
}

/// The stabilization data of an irreducible tropical matrix: eigenvalue,
/// cyclicity sigma, first index N0 with F^(N+sigma) = lambda^sigma . F^N, and
/// the first k at which the Kleene-plus partial sums stabilize.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StabilizationReport {
    pub lambda: Rat,
    pub sigma: usize,
    pub n0: usize,
    pub kleene_steps: usize,
}

impl TropMatrix {
    /// Builds an n x n matrix from row-major entries. -inf does not exist in
    /// the scalar type, so no further validation is needed.
    pub fn new(n: usize, entries: Vec<ExtendedRational>) -> Self {
        assert!(n >= 1);
        assert_eq!(entries.len(), n * n);
        TropMatrix { n, e: entries }
    }

    /// Tropical identity: 0 on the diagonal, +inf elsewhere.
    pub fn identity(n: usize) -> Self {
        let mut e = vec![PlusInfinity; n * n];
        for i in 0..n {
            e[i * n + i] = ExtendedRational::zero();
        }
        TropMatrix { n, e }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &ExtendedRational {
        &self.e[i * self.n + j]
    }

    pub fn set_entry(&mut self, i: usize, j: usize, v: ExtendedRational) {
        self.e[i * self.n + j] = v;
    }

    /// The digraph of finite entries.
    pub fn support_graph(&self) -> DiGraph {
        let mut edges = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if self.entry(i, j).is_finite() {
                    edges.push((i, j));
                }
            }
        }
        DiGraph::new(self.n, edges)
    }

    /// Entrywise tropical sum (minimum).
    pub fn trop_add(&self, other: &TropMatrix) -> Result<TropMatrix, TropError> {
        if self.n != other.n {
            return Err(TropError::DimensionMismatch(self.n, other.n));
        }
        let e = self.e.iter().zip(&other.e).map(|(a, b)| a.trop_add(b)).collect();
        Ok(TropMatrix { n: self.n, e })
    }

    /// Adds a finite scalar to every finite entry (tropical scalar multiple).
    pub fn scalar_mul(&self, c: &Rat) -> TropMatrix {
        let e = self
            .e
            .iter()
            .map(|x| match x {
                Finite(r) => Finite(r + c),
                PlusInfinity => PlusInfinity,
            })
            .collect();
        TropMatrix { n: self.n, e }
    }
}

/// Tropical matrix product: entry (i,j) = min over k of a(i,k) + b(k,j).
pub fn trop_mul(a: &TropMatrix, b: &TropMatrix) -> Result<TropMatrix, TropError> {
    if a.n != b.n {
        return Err(TropError::DimensionMismatch(a.n, b.n));
    }
    let n = a.n;
    let mut e = vec![PlusInfinity; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = &a.e[i * n + k];
            if !aik.is_finite() {
                continue;
            }
            for j in 0..n {
                let term = aik.trop_mul(&b.e[k * n + j]);
                if term < e[i * n + j] {
                    e[i * n + j] = term;
                }
            }
        }
    }
    Ok(TropMatrix { n, e })
}

/// k-fold tropical power, k >= 1 (incremental; consecutive powers dominate
/// usage in this crate, so no binary powering).
pub fn trop_power(a: &TropMatrix, k: usize) -> TropMatrix {
    assert!(k >= 1);
    let mut p = a.clone();
    for _ in 1..k {
        p = trop_mul(&p, a).expect("square matrix powers cannot mismatch");
    }
    p
}

/// Tropical trace: the minimal diagonal entry.
pub fn trop_trace(a: &TropMatrix) -> ExtendedRational {
    (0..a.n).map(|i| a.entry(i, i).clone()).min().unwrap()
}

/// Irreducibility: the support graph is strongly connected as a whole (every
/// node in one SCC, with at least one edge).
pub fn is_irreducible(a: &TropMatrix) -> bool {
    let g = a.support_graph();
    g.edge_count() > 0 && graph::scc(&g).len() == 1
}

/// The tropical eigenvalue: minimum mean weight over directed cycles,
/// computed with Karp's algorithm from source node 0.
pub fn karp_eigenvalue(a: &TropMatrix) -> Result<Rat, TropError> {
    if !is_irreducible(a) {
        return Err(TropError::NotIrreducible);
    }
    let n = a.n;
    // d[k][v] = min weight of a k-edge walk from node 0 to v.
    let mut d: Vec<Vec<ExtendedRational>> = Vec::with_capacity(n + 1);
    let mut row0 = vec![PlusInfinity; n];
    row0[0] = ExtendedRational::zero();
    d.push(row0);
    for k in 1..=n {
        let prev = &d[k - 1];
        let mut row = vec![PlusInfinity; n];
        for i in 0..n {
            if !prev[i].is_finite() {
                continue;
            }
            for j in 0..n {
                let cand = prev[i].trop_mul(a.entry(i, j));
                if cand < row[j] {
                    row[j] = cand;
                }
            }
        }
        d.push(row);
    }
    let mut best: Option<Rat> = None;
    for v in 0..n {
        let Finite(dn) = &d[n][v] else { continue };
        let mut worst: Option<Rat> = None;
        for k in 0..n {
            let Finite(dk) = &d[k][v] else { continue };
            let ratio = (dn - dk) / Rat::from_integer((n as i64 - k as i64).into());
            if worst.as_ref().map(|w| ratio > *w).unwrap_or(true) {
                worst = Some(ratio);
            }
        }
        if let Some(w) = worst {
            if best.as_ref().map(|b| w < *b).unwrap_or(true) {
                best = Some(w);
            }
        }
    }
    best.ok_or(TropError::NotIrreducible)
}

/// Kleene plus: F+ = F (+) F^2 (+) ... (+) F^n; minimum path weight over
/// paths of length >= 1 (stabilizes at n when no negative cycle exists).
pub fn kleene_plus(a: &TropMatrix) -> Result<TropMatrix, TropError> {
    let n = a.n;
    let mut acc = a.clone();
    let mut pow = a.clone();
    for _ in 2..=n {
        pow = trop_mul(&pow, a)?;
        acc = acc.trop_add(&pow)?;
    }
    // A negative diagonal entry of the accumulated sums certifies a
    // negative-weight cycle; the series would then diverge.
    for i in 0..n {
        if let Finite(r) = acc.entry(i, i) {
            if r < &Rat::zero() {
                return Err(TropError::NegativeCycle);
            }
        }
    }
    Ok(acc)
}

/// First k with F+^k = F+^(k+1), where F+^k is the k-term Kleene partial sum.
pub fn kleene_steps(a: &TropMatrix) -> Result<usize, TropError> {
    // Reject divergent input the same way kleene_plus does.
    kleene_plus(a)?;
    let mut acc = a.clone();
    let mut pow = a.clone();
    for k in 1..=a.n {
        pow = trop_mul(&pow, a)?;
        let next = acc.trop_add(&pow)?;
        if next == acc {
            return Ok(k);
        }
        acc = next;
    }
    // The sequence stabilizes at k = n at the latest.
    Ok(a.n)
}

/// One tropical eigenvector witness: the first column of (F - lambda)+ with a
/// zero diagonal entry; verified against F . v = lambda . v before returning.
pub fn trop_eigenvector(a: &TropMatrix) -> Result<TropVector, TropError> {
    let lambda = karp_eigenvalue(a)?;
    let norm = a.scalar_mul(&(-lambda.clone()));
    let plus = kleene_plus(&norm)?;
    let j = (0..a.n)
        .find(|&j| plus.entry(j, j) == &ExtendedRational::zero())
        .expect("an irreducible normalized matrix has a zero diagonal entry in its Kleene plus");
    let v = TropVector { e: (0..a.n).map(|i| plus.entry(i, j).clone()).collect() };
    debug_assert!(v.e.iter().all(|x| x.is_finite()));
    assert!(
        eigen_check(a, &v, &lambda),
        "eigenvector verification failed; this is a bug"
    );
    Ok(v)
}

/// Exact check of F . v = lambda . v.
pub fn eigen_check(a: &TropMatrix, v: &TropVector, lambda: &Rat) -> bool {
    if v.e.len() != a.n {
        return false;
    }
    (0..a.n).all(|i| {
        let lhs = (0..a.n)
            .map(|j| a.entry(i, j).trop_mul(&v.e[j]))
            .min()
            .unwrap();
        let rhs = Finite(lambda.clone()).trop_mul(&v.e[i]);
        lhs == rhs
    })
}

impl TropVector {
    pub fn new(e: Vec<ExtendedRational>) -> Self {
        TropVector { e }
    }

    pub fn entries(&self) -> &[ExtendedRational] {
        &self.e
    }
}

/// The critical graph: edges (k,l) with F(k,l) + v(l) - v(k) = lambda, pruned
/// to the union of strongly connected components (trivial components without
/// a self-loop are dropped). Every closed path in it has mean weight lambda.
pub fn critical_graph(a: &TropMatrix) -> Result<DiGraph, TropError> {
    let lambda = karp_eigenvalue(a)?;
    let v = trop_eigenvector(a)?;
    let n = a.n;
    let mut gv_edges = Vec::new();
    for k in 0..n {
        for l in 0..n {
            if let (Finite(f), Finite(vl), Finite(vk)) = (a.entry(k, l), &v.e[l], &v.e[k]) {
                if f + vl - vk == lambda {
                    gv_edges.push((k, l));
                }
            }
        }
    }
    let gv = DiGraph::new(n, gv_edges.iter().copied());
    let comps = graph::scc(&gv);
    let mut comp_of = vec![usize::MAX; n];
    for (ci, comp) in comps.iter().enumerate() {
        for &node in comp {
            comp_of[node] = ci;
        }
    }
    let keep: Vec<bool> = comps
        .iter()
        .map(|c| c.len() > 1 || gv.has_edge(c[0], c[0]))
        .collect();
    let edges: Vec<(usize, usize)> = gv_edges
        .into_iter()
        .filter(|&(i, j)| comp_of[i] == comp_of[j] && keep[comp_of[i]])
        .collect();
    Ok(DiGraph::new(n, edges))
}

/// Cyclicity: per critical SCC the gcd of its simple-cycle lengths (computed
/// as the gcd of closed-walk lengths from a DFS levelling); lcm over SCCs.
pub fn cyclicity(a: &TropMatrix) -> Result<usize, TropError> {
    let crit = critical_graph(a)?;
    Ok(graph_cyclicity(&crit))
}

/// Cyclicity of a graph in which every edge lies on a cycle (each SCC with
/// edges contributes the gcd of its cycle lengths; result is their lcm).
pub fn graph_cyclicity(g: &DiGraph) -> usize {
    let comps = graph::scc(g);
    let mut result: usize = 1;
    for comp in &comps {
        if comp.len() == 1 && !g.has_edge(comp[0], comp[0]) {
            continue;
        }
        let inside: std::collections::BTreeSet<usize> = comp.iter().copied().collect();
        // DFS levelling; each internal edge (u,w) contributes
        // |level(u) + 1 - level(w)| to the gcd of closed-walk lengths.
        let mut level = std::collections::BTreeMap::new();
        level.insert(comp[0], 0i64);
        let mut stack = vec![comp[0]];
        let mut g_cd: i64 = 0;
        while let Some(u) = stack.pop() {
            let lu = level[&u];
            for w in g.successors(u) {
                if !inside.contains(&w) {
                    continue;
                }
                match level.get(&w) {
                    None => {
                        level.insert(w, lu + 1);
                        stack.push(w);
                    }
                    Some(&lw) => {
                        g_cd = g_cd.gcd(&(lu + 1 - lw));
                    }
                }
            }
        }
        let g_cd = g_cd.unsigned_abs() as usize;
        if g_cd > 0 {
            result = result.lcm(&g_cd);
        }
    }
    result
}

/// Computes (lambda, sigma, N0, kleene_steps). N0 is found by scanning
/// consecutive powers; the first hit is final because the relation is stable
/// under further multiplication by F.
pub fn stabilization(a: &TropMatrix, max_n: usize) -> Result<StabilizationReport, TropError> {
    let lambda = karp_eigenvalue(a)?;
    let sigma = cyclicity(a)?;
    let norm = a.scalar_mul(&(-lambda.clone()));
    let ksteps = kleene_steps(&norm)?;
    // Window of the last sigma powers of F.
    let mut window: std::collections::VecDeque<TropMatrix> = std::collections::VecDeque::new();
    window.push_back(a.clone());
    let mut current = a.clone();
    let shift = lambda.clone() * Rat::from_integer((sigma as i64).into());
    for n0 in 1..=max_n {
        // current = F^(n0 + sigma - 1) after this multiplication when the
        // window is full; build up the window first.
        while window.len() < sigma + 1 {
            current = trop_mul(&current, a).unwrap();
            window.push_back(current.clone());
        }
        let f_n = &window[0];
        let f_n_sigma = &window[sigma];
        if *f_n_sigma == f_n.scalar_mul(&shift) {
            return Ok(StabilizationReport { lambda, sigma, n0, kleene_steps: ksteps });
        }
        window.pop_front();
    }
    Err(TropError::BudgetExceeded { max_n })
}
