//! The Bell-scenario layer: local deterministic strategies and their
//! correlator vectors for interaction range R, the transfer matrix F(alpha),
//! classical bounds by three tropical contraction methods, optimal strategies
//! from the critical graph, the face-dimension rank test, and the symmetry
//! group acting on coefficient vectors.

use num_traits::Zero;
use thiserror::Error;

use crate::graph::{self, ClosedPath, DiGraph};
use crate::linalg;
use crate::scalar::{ExtendedRational, Finite, PlusInfinity, Rat};
use crate::trop::{self, StabilizationReport, TropError, TropMatrix};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BellError {
    #[error("no coefficient vector reproduces the finite matrix entries")]
    Inconsistent,
    #[error("node sequence violates De Bruijn consistency")]
    InvalidPath,
    #[error("ring size {n} is below the faithful minimum {min} for this range")]
    RingTooSmall { n: usize, min: usize },
    #[error(transparent)]
    Trop(#[from] TropError),
}

/// A Bell scenario (N, m, 2) with translation invariance and interaction
/// range R; N is left to the per-call sites.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Scenario {
    pub m: usize,
    pub r: usize,
}

impl Scenario {
    pub fn new(m: usize, r: usize) -> Self {
        assert!(m >= 2 && r >= 1);
        Scenario { m, r }
    }

    /// Dimension of the coefficient space: m + R m^2.
    pub fn dim(&self) -> usize {
        self.m + self.r * self.m * self.m
    }

    /// Number of local deterministic strategies, 2^m.
    pub fn strategy_count(&self) -> usize {
        1 << self.m
    }

    /// Node count of the De Bruijn graph, (2^m)^R.
    pub fn node_count(&self) -> usize {
        self.strategy_count().pow(self.r as u32)
    }

    /// The De Bruijn graph Gamma_db(2^m, R).
    pub fn de_bruijn_graph(&self) -> DiGraph {
        graph::de_bruijn(self.strategy_count(), self.r).expect("scenario sizes are validated")
    }

    /// Decodes a node index into its R-tuple of strategies (big-endian).
    pub fn node_tuple(&self, node: usize) -> Vec<usize> {
        let b = self.strategy_count();
        let mut digits = vec![0; self.r];
        let mut v = node;
        for k in (0..self.r).rev() {
            digits[k] = v % b;
            v /= b;
        }
        digits
    }

    /// The (R+1)-tuple of strategies carried by the De Bruijn edge (mu, nu),
    /// or None if the pair is not an edge.
    pub fn edge_strategies(&self, mu: usize, nu: usize) -> Option<Vec<usize>> {
        let b = self.strategy_count();
        let tail = self.node_count() / b;
        if mu % tail != nu / b {
            return None;
        }
        let mut s = self.node_tuple(mu);
        s.push(nu % b);
        Some(s)
    }
}

/// A local deterministic strategy: an index s in [0, 2^m) whose outcome map
/// is f_s(x) = bit (m-1-x) of s.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct LdsStrategy(pub usize);

/// Single-party correlator vector: entry x is (-1)^(f_s(x)).
pub fn psi_single(m: usize, s: LdsStrategy) -> Vec<Rat> {
    assert!(s.0 < (1 << m));
    (0..m)
        .map(|x| {
            if (s.0 >> (m - 1 - x)) & 1 == 0 {
                Rat::from_integer(1.into())
            } else {
                Rat::from_integer((-1).into())
            }
        })
        .collect()
}

/// Correlator vector of an (R+1)-tuple of consecutive strategies: one-body
/// block (1/(R+1)) sum of psi, then for rho = 1..R the range-rho block
/// (1/(R+1-rho)) sum over j of psi_{s_j} (x) psi_{s_{j+rho}}, entries in
/// lexicographic (x, y) order.
pub fn psi_edge(sc: Scenario, strategies: &[usize]) -> Vec<Rat> {
    assert_eq!(strategies.len(), sc.r + 1);
    let m = sc.m;
    let psis: Vec<Vec<Rat>> = strategies.iter().map(|&s| psi_single(m, LdsStrategy(s))).collect();
    let mut out = Vec::with_capacity(sc.dim());
    let denom1 = Rat::from_integer(((sc.r + 1) as i64).into());
    for x in 0..m {
        let sum: Rat = psis.iter().map(|p| p[x].clone()).sum();
        out.push(sum / &denom1);
    }
    for rho in 1..=sc.r {
        let denom = Rat::from_integer(((sc.r + 1 - rho) as i64).into());
        for x in 0..m {
            for y in 0..m {
                let sum: Rat = (0..=(sc.r - rho))
                    .map(|j| &psis[j][x] * &psis[j + rho][y])
                    .sum();
                out.push(sum / &denom);
            }
        }
    }
    out
}

/// Projected correlator vector of a closed path on the De Bruijn node set:
/// the average of psi_edge over the path's edges.
pub fn projected_point(sc: Scenario, path: &ClosedPath) -> Result<Vec<Rat>, BellError> {
    let n = path.len();
    let mut acc = vec![Rat::zero(); sc.dim()];
    for (mu, nu) in path.cycle_edges() {
        let strategies = sc.edge_strategies(mu, nu).ok_or(BellError::InvalidPath)?;
        for (a, b) in acc.iter_mut().zip(psi_edge(sc, &strategies)) {
            *a += b;
        }
    }
    let denom = Rat::from_integer((n as i64).into());
    Ok(acc.into_iter().map(|x| x / &denom).collect())
}

/// A TI Bell inequality alpha . q >= beta (beta per party when present).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BellInequality {
    pub scenario: Scenario,
    pub alpha: Vec<Rat>,
    pub beta: Option<Rat>,
}

impl BellInequality {
    pub fn new(scenario: Scenario, alpha: Vec<Rat>, beta: Option<Rat>) -> Self {
        assert_eq!(alpha.len(), scenario.dim());
        BellInequality { scenario, alpha, beta }
    }
}

/// The transfer matrix F(alpha): finite exactly on De Bruijn edges, with
/// entry alpha . psi_edge there.
pub fn build_f(ineq: &BellInequality) -> TropMatrix {
    let sc = ineq.scenario;
    let n = sc.node_count();
    let mut f = TropMatrix::new(n, vec![PlusInfinity; n * n]);
    for (mu, nu) in sc.de_bruijn_graph().edges() {
        let s = sc.edge_strategies(mu, nu).unwrap();
        f.set_entry(mu, nu, Finite(linalg::dot(&ineq.alpha, &psi_edge(sc, &s))));
    }
    f
}

/// Recovers alpha from a transfer matrix by solving the linear system over
/// the De Bruijn edges; errors when no alpha reproduces the finite entries.
pub fn alpha_from_f(f: &TropMatrix, sc: Scenario) -> Result<Vec<Rat>, BellError> {
    let g = sc.de_bruijn_graph();
    if f.size() != sc.node_count() {
        return Err(BellError::Inconsistent);
    }
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (mu, nu) in g.edges() {
        match f.entry(mu, nu) {
            Finite(val) => {
                rows.push(psi_edge(sc, &sc.edge_strategies(mu, nu).unwrap()));
                rhs.push(val.clone());
            }
            PlusInfinity => return Err(BellError::Inconsistent),
        }
    }
    // Entries off the edge set must be +inf.
    for mu in 0..f.size() {
        for nu in 0..f.size() {
            if !g.has_edge(mu, nu) && f.entry(mu, nu).is_finite() {
                return Err(BellError::Inconsistent);
            }
        }
    }
    let alpha = linalg::solve(&rows, &rhs).ok_or(BellError::Inconsistent)?;
    // Guard against an under-determined solve drifting off the data.
    for (row, want) in rows.iter().zip(&rhs) {
        if &linalg::dot(row, &alpha) != want {
            return Err(BellError::Inconsistent);
        }
    }
    Ok(alpha)
}

/// Contraction method for the finite-ring classical bound.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Method {
    One,
    Two,
    Three,
}

/// Classical bound for ring size N: (1/N) min over strategy vectors of the
/// Bell expression, computed as a tropical trace by the chosen method.
pub fn classical_bound(ineq: &BellInequality, n: usize, method: Method) -> Result<Rat, BellError> {
    let min = 2 * ineq.scenario.r + 1;
    if n < min {
        return Err(BellError::RingTooSmall { n, min });
    }
    let f = build_f(ineq);
    let tr = match method {
        Method::One => trop::trop_trace(&trop::trop_power(&f, n)),
        Method::Two => {
            let g = trop::trop_power(&f, 2);
            let half = trop::trop_power(&g, n / 2);
            let tail = if n % 2 == 0 { half } else { trop::trop_mul(&half, &f)? };
            trop::trop_trace(&tail)
        }
        Method::Three => {
            let h = trop::trop_power(&f, 3);
            let (q, rem) = (n / 3, n % 3);
            let body = if q == 0 { TropMatrix::identity(f.size()) } else { trop::trop_power(&h, q) };
            let tail = if rem == 0 { body } else { trop::trop_mul(&body, &trop::trop_power(&f, rem))? };
            trop::trop_trace(&tail)
        }
    };
    match tr {
        Finite(v) => Ok(v / Rat::from_integer((n as i64).into())),
        PlusInfinity => unreachable!("De Bruijn graphs carry closed walks of every length >= 1"),
    }
}

/// Thermodynamic-limit bound lambda(F); asserts the Method-2/3 consistency
/// lambda(G)/2 = lambda(H)/3 = lambda(F).
pub fn thermo_bound(ineq: &BellInequality) -> Rat {
    let f = build_f(ineq);
    let lambda = trop::karp_eigenvalue(&f).expect("De Bruijn support is strongly connected");
    let g = trop::trop_power(&f, 2);
    let h = trop::trop_power(&f, 3);
    let lg = trop::karp_eigenvalue(&g).unwrap();
    let lh = trop::karp_eigenvalue(&h).unwrap();
    assert_eq!(lg / Rat::from_integer(2.into()), lambda);
    assert_eq!(lh / Rat::from_integer(3.into()), lambda);
    lambda
}

/// Closed paths of length N in the critical graph, each verified to achieve
/// the length-N tropical bound exactly; the bool flags cap truncation.
pub fn optimal_strategies(
    ineq: &BellInequality,
    n: usize,
    cap: usize,
) -> Result<(Vec<ClosedPath>, bool), BellError> {
    let f = build_f(ineq);
    let crit = trop::critical_graph(&f)?;
    let (paths, truncated) = graph::closed_paths(&crit, n, cap);
    let bound = trop::trop_trace(&trop::trop_power(&f, n));
    for p in &paths {
        let weight = p
            .cycle_edges()
            .iter()
            .fold(ExtendedRational::zero(), |acc, &(i, j)| acc.trop_mul(f.entry(i, j)));
        assert_eq!(weight, bound, "critical closed path does not achieve the bound");
    }
    Ok((paths, truncated))
}

/// Outcome of the face-dimension rank test.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FaceDimension {
    pub dim: i64,
    pub is_facet: bool,
    /// True when the critical graph is the whole De Bruijn graph (alpha = 0):
    /// the "face" is the full polytope and the rank rule does not apply.
    pub degenerate: bool,
}

/// dim(H_alpha) = rank(A . Lambda) - 1, with Lambda a circulation basis of
/// the critical graph and A's columns the per-edge correlator vectors.
pub fn face_dimension(ineq: &BellInequality) -> Result<FaceDimension, BellError> {
    let sc = ineq.scenario;
    let f = build_f(ineq);
    let crit = trop::critical_graph(&f)?;
    let degenerate = crit == sc.de_bruijn_graph();
    let basis = graph::circulation_space(&crit);
    let n = crit.node_count();
    // Image of each basis circulation under the projection A.
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for b in &basis {
        let mut img = vec![Rat::zero(); sc.dim()];
        for (mu, nu) in crit.edges() {
            let coeff = &b[mu * n + nu];
            if coeff.is_zero() {
                continue;
            }
            let psi = psi_edge(sc, &sc.edge_strategies(mu, nu).unwrap());
            for (acc, x) in img.iter_mut().zip(psi) {
                *acc += coeff * x;
            }
        }
        rows.push(img);
    }
    let rank = linalg::rank(&rows, sc.dim());
    let dim = rank as i64 - 1;
    Ok(FaceDimension { dim, is_facet: dim == sc.dim() as i64 - 1, degenerate })
}

/// A signed permutation acting on coefficient vectors: output index i takes
/// sign[i] * alpha[source[i]].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct SignedPerm {
    pub action: Vec<(usize, i8)>,
}

impl SignedPerm {
    pub fn identity(dim: usize) -> Self {
        SignedPerm { action: (0..dim).map(|i| (i, 1)).collect() }
    }

    pub fn apply(&self, alpha: &[Rat]) -> Vec<Rat> {
        self.action
            .iter()
            .map(|&(src, sign)| {
                if sign >= 0 {
                    alpha[src].clone()
                } else {
                    -alpha[src].clone()
                }
            })
            .collect()
    }

    /// Composition: (self . other)(alpha) = self(other(alpha)).
    pub fn compose(&self, other: &SignedPerm) -> SignedPerm {
        let action = self
            .action
            .iter()
            .map(|&(j, s1)| {
                let (k, s2) = other.action[j];
                (k, s1 * s2)
            })
            .collect();
        SignedPerm { action }
    }
}

/// The full symmetry group of the scenario (order 2^(m+1) m!): party flip,
/// input permutations, and per-input outcome flips; beta is fixed by all.
pub fn symmetry_group(sc: Scenario) -> Vec<SignedPerm> {
    let m = sc.m;
    let dim = sc.dim();
    let two_body_index = |rho: usize, x: usize, y: usize| m + (rho - 1) * m * m + x * m + y;
    let mut generators = Vec::new();

    // Party flip: reverses ring orientation, transposing every two-body block.
    let mut flip = SignedPerm::identity(dim);
    for rho in 1..=sc.r {
        for x in 0..m {
            for y in 0..m {
                flip.action[two_body_index(rho, x, y)] = (two_body_index(rho, y, x), 1);
            }
        }
    }
    generators.push(flip);

    // Input transpositions (a, a+1) generate the permutation part.
    for a in 0..m.saturating_sub(1) {
        let swap = |x: usize| if x == a { a + 1 } else if x == a + 1 { a } else { x };
        let mut g = SignedPerm::identity(dim);
        for x in 0..m {
            g.action[x] = (swap(x), 1);
        }
        for rho in 1..=sc.r {
            for x in 0..m {
                for y in 0..m {
                    g.action[two_body_index(rho, x, y)] = (two_body_index(rho, swap(x), swap(y)), 1);
                }
            }
        }
        generators.push(g);
    }

    // Outcome flip at input x0: negates coefficients containing x0 oddly.
    for x0 in 0..m {
        let mut g = SignedPerm::identity(dim);
        g.action[x0] = (x0, -1);
        for rho in 1..=sc.r {
            for x in 0..m {
                for y in 0..m {
                    let parity = (x == x0) as i8 + (y == x0) as i8;
                    if parity == 1 {
                        g.action[two_body_index(rho, x, y)] = (two_body_index(rho, x, y), -1);
                    }
                }
            }
        }
        generators.push(g);
    }

    // Closure by breadth-first composition.
    let mut seen = std::collections::BTreeSet::new();
    let mut queue = vec![SignedPerm::identity(dim)];
    seen.insert(queue[0].clone());
    while let Some(g) = queue.pop() {
        for gen in &generators {
            let h = gen.compose(&g);
            if seen.insert(h.clone()) {
                queue.push(h);
            }
        }
    }
    seen.into_iter().collect()
}

/// Canonical representative of the orbit of alpha: the lexicographically
/// smallest image under the symmetry group (beta is untouched).
pub fn canonical_class(ineq: &BellInequality) -> Vec<Rat> {
    symmetry_group(ineq.scenario)
        .iter()
        .map(|g| g.apply(&ineq.alpha))
        .min()
        .unwrap()
}

/// Stabilization classification (sigma, N0, kleene_steps) of F(alpha).
pub fn classify_inequality(
    ineq: &BellInequality,
    max_n: usize,
) -> Result<StabilizationReport, BellError> {
    Ok(trop::stabilization(&build_f(ineq), max_n)?)
}
