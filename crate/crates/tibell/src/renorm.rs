//! Renormalization-invariant inequalities: all (alpha, lambda) with
//! F'(alpha, lambda)^(tropical square) = F'(alpha, lambda), found as faces of
//! the polyhedral cone cut out by the triangle inequalities
//! L_{i,j,k} = F'_{ik} + F'_{kj} - F'_{ij} >= 0, keeping the faces whose
//! points make some L_{i,j,k} tight in every (i, j) group.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_traits::Zero;
use thiserror::Error;

use crate::bell::{self, Scenario};
use crate::poly::{self, HRep, PolyError};
use crate::scalar::{ExtendedRational, Rat};
use crate::trop::{self, TropMatrix};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RenormError {
    #[error("fixed-point cone is not pointed")]
    NotPointed,
    #[error("ray computation exceeded the budget of {budget}")]
    BudgetExceeded { budget: usize },
    #[error("entry ({i},{j}) is finite but no length-2 path connects {i} to {j}")]
    InfeasibleGroup { i: usize, j: usize },
}

/// Tropical matrix whose finite entries are homogeneous linear forms in the
/// variables (alpha coefficients, then lambda last).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ParametricTropMatrix {
    pub scenario: Scenario,
    pub include_single_body: bool,
    pub n: usize,
    /// Number of variables: optimized-coefficient count plus one for lambda.
    pub vars: usize,
    /// Row-major entries; None encodes plus infinity (off De Bruijn edges).
    pub entries: Vec<Option<Vec<Rat>>>,
}

impl ParametricTropMatrix {
    /// Index of the lambda variable.
    pub fn lambda_var(&self) -> usize {
        self.vars - 1
    }

    /// Expands a variable point into the full alpha layout plus lambda.
    pub fn alpha_lambda(&self, point: &[Rat]) -> (Vec<Rat>, Rat) {
        assert_eq!(point.len(), self.vars);
        let sc = self.scenario;
        let mut alpha = vec![Rat::zero(); sc.dim()];
        let offset = if self.include_single_body { 0 } else { sc.m };
        for (k, a) in point[..self.vars - 1].iter().enumerate() {
            alpha[offset + k] = a.clone();
        }
        (alpha, point[self.vars - 1].clone())
    }

    /// Evaluates the matrix at a variable point.
    pub fn evaluate(&self, point: &[Rat]) -> TropMatrix {
        assert_eq!(point.len(), self.vars);
        let mut f =
            TropMatrix::new(self.n, vec![ExtendedRational::PlusInfinity; self.n * self.n]);
        for i in 0..self.n {
            for j in 0..self.n {
                if let Some(form) = &self.entries[i * self.n + j] {
                    let v: Rat = form.iter().zip(point).map(|(c, x)| c * x).sum();
                    f.set_entry(i, j, ExtendedRational::Finite(v));
                }
            }
        }
        f
    }
}

/// One face of the solution set: its generating rays (variable points) and
/// the triple constraints tight on the whole face.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RenormFace {
    pub rays: Vec<Vec<Rat>>,
    pub achieved: BTreeSet<usize>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RenormSolutionSet {
    pub triples: Vec<(usize, usize, usize)>,
    pub faces: Vec<RenormFace>,
    /// False when the ray computation hit the budget and output is partial.
    pub complete: bool,
}

/// Builds F'(alpha, lambda) on the scenario's De Bruijn graph: each edge
/// entry is alpha . psi_edge - lambda; single-body coefficients are dropped
/// from the variable vector when the flag is false (treated as zero).
pub fn build_parametric(sc: Scenario, include_single_body: bool) -> ParametricTropMatrix {
    let g = sc.de_bruijn_graph();
    let n = g.node_count();
    let offset = if include_single_body { 0 } else { sc.m };
    let ncoef = sc.dim() - offset;
    let vars = ncoef + 1;
    let mut entries: Vec<Option<Vec<Rat>>> = vec![None; n * n];
    for (i, j) in g.edges() {
        let psi = bell::psi_edge(sc, &sc.edge_strategies(i, j).unwrap());
        let mut form: Vec<Rat> = psi[offset..].to_vec();
        form.push(Rat::from_integer((-1).into()));
        entries[i * n + j] = Some(form);
    }
    ParametricTropMatrix { scenario: sc, include_single_body, n, vars, entries }
}

/// All triples (i, j, k) with F'_{ik}, F'_{kj}, F'_{ij} finite, sorted, and a
/// check that every finite (i, j) admits at least one middle node k.
pub fn constraint_triples(
    p: &ParametricTropMatrix,
) -> Result<Vec<(usize, usize, usize)>, RenormError> {
    let n = p.n;
    let fin = |i: usize, j: usize| p.entries[i * n + j].is_some();
    let mut triples = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if !fin(i, j) {
                continue;
            }
            let before = triples.len();
            for k in 0..n {
                if fin(i, k) && fin(k, j) {
                    triples.push((i, j, k));
                }
            }
            if triples.len() == before {
                return Err(RenormError::InfeasibleGroup { i, j });
            }
        }
    }
    Ok(triples)
}

/// Linear form of L_{i,j,k} in the variables.
fn triple_form(p: &ParametricTropMatrix, t: (usize, usize, usize)) -> Vec<Rat> {
    let n = p.n;
    let (i, j, k) = t;
    let ik = p.entries[i * n + k].as_ref().unwrap();
    let kj = p.entries[k * n + j].as_ref().unwrap();
    let ij = p.entries[i * n + j].as_ref().unwrap();
    (0..p.vars).map(|v| &ik[v] + &kj[v] - &ij[v]).collect()
}

/// The homogeneous cone L_{i,j,k} >= 0 over all admissible triples.
pub fn fixed_point_cone(p: &ParametricTropMatrix) -> Result<HRep, RenormError> {
    let triples = constraint_triples(p)?;
    let mut inequalities: Vec<(Vec<Rat>, Rat)> = triples
        .iter()
        .map(|&t| (poly::primitive(&triple_form(p, t)), Rat::zero()))
        .collect();
    inequalities.sort();
    inequalities.dedup();
    Ok(HRep { inequalities, equations: Vec::new() })
}

/// Finds every maximal face of the fixed-point cone all of whose points
/// solve F'^(tropical square) = F'. Top-down face search: a face is refined
/// by making one more constraint tight; descent stops as soon as every
/// (i, j) group contains a tight constraint.
pub fn solve_fixed_points(
    p: &ParametricTropMatrix,
    budget: usize,
) -> Result<RenormSolutionSet, RenormError> {
    let triples = constraint_triples(p)?;
    let forms: Vec<Vec<Rat>> = triples.iter().map(|&t| triple_form(p, t)).collect();
    let mut inequalities: Vec<(Vec<Rat>, Rat)> = forms
        .iter()
        .map(|f| (poly::primitive(f), Rat::zero()))
        .collect();
    inequalities.sort();
    inequalities.dedup();
    let h = HRep { inequalities, equations: Vec::new() };
    let cone = match poly::rays_from_hrep_capped(&h, budget) {
        Ok(c) => c,
        Err(PolyError::NotPointed) => return Err(RenormError::NotPointed),
        Err(PolyError::BudgetExceeded { .. }) => {
            // Partial result, explicitly flagged incomplete.
            return Ok(RenormSolutionSet { triples, faces: Vec::new(), complete: false });
        }
        Err(e) => unreachable!("homogeneous ray extraction: {e}"),
    };
    let rays = cone.ray_generators;
    let nt = triples.len();

    // Tight-constraint set of each extreme ray.
    let achieved: Vec<BTreeSet<usize>> = rays
        .iter()
        .map(|r| {
            (0..nt)
                .filter(|&t| crate::linalg::dot(&forms[t], r).is_zero())
                .collect()
        })
        .collect();
    let groups: BTreeMap<(usize, usize), Vec<usize>> = {
        let mut m: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (t, &(i, j, _)) in triples.iter().enumerate() {
            m.entry((i, j)).or_default().push(t);
        }
        m
    };
    let covers = |tight: &BTreeSet<usize>| {
        groups.values().all(|g| g.iter().any(|t| tight.contains(t)))
    };
    let common = |mask: u128| -> BTreeSet<usize> {
        let members: Vec<usize> = (0..rays.len()).filter(|&i| mask >> i & 1 == 1).collect();
        match members.split_first() {
            None => (0..nt).collect(),
            Some((&first, rest)) => {
                let mut acc = achieved[first].clone();
                for &i in rest {
                    acc = acc.intersection(&achieved[i]).copied().collect();
                }
                acc
            }
        }
    };
    assert!(rays.len() <= 128, "face search uses 128-bit ray masks");

    let top: u128 = if rays.is_empty() { 0 } else { (1u128 << rays.len()) - 1 };
    let mut seen: BTreeSet<u128> = BTreeSet::new();
    let mut solutions: Vec<u128> = Vec::new();
    let mut queue: VecDeque<u128> = VecDeque::new();
    queue.push_back(top);
    seen.insert(top);
    while let Some(mask) = queue.pop_front() {
        let tight = common(mask);
        if covers(&tight) {
            solutions.push(mask);
            continue;
        }
        // Refine: force one currently-loose constraint tight; the subface is
        // the closure {rays of the face achieving that constraint}.
        for t in 0..nt {
            if tight.contains(&t) {
                continue;
            }
            let sub = (0..rays.len())
                .filter(|&i| mask >> i & 1 == 1 && achieved[i].contains(&t))
                .fold(0u128, |m, i| m | (1 << i));
            if seen.insert(sub) {
                queue.push_back(sub);
            }
        }
    }
    // Keep inclusion-maximal solution faces.
    let maximal: Vec<u128> = solutions
        .iter()
        .copied()
        .filter(|&m| !solutions.iter().any(|&o| o != m && o & m == m))
        .collect();
    let mut faces = Vec::new();
    for mask in maximal {
        let face_rays: Vec<Vec<Rat>> = (0..rays.len())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| rays[i].clone())
            .collect();
        // Exact verification on every generator and one interior combination.
        for r in &face_rays {
            assert!(is_fixed_point(p, r), "face generator must solve the fixed-point equation");
        }
        if face_rays.len() > 1 {
            let interior: Vec<Rat> = (0..p.vars)
                .map(|v| {
                    face_rays
                        .iter()
                        .enumerate()
                        .map(|(i, r)| Rat::from_integer(((i + 1) as i64).into()) * &r[v])
                        .sum()
                })
                .collect();
            assert!(is_fixed_point(p, &interior), "interior point must solve the fixed-point equation");
        }
        faces.push(RenormFace { rays: face_rays, achieved: common(mask) });
    }
    faces.sort_by(|a, b| a.rays.cmp(&b.rays));
    Ok(RenormSolutionSet { triples, faces, complete: true })
}

/// Substitution check of the fixed-point equation at a variable point.
pub fn is_fixed_point(p: &ParametricTropMatrix, point: &[Rat]) -> bool {
    let f = p.evaluate(point);
    trop::trop_mul(&f, &f).expect("square matrices") == f
}
