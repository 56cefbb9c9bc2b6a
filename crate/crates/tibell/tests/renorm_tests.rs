//! Renormalization suite: the parametric fixed-point equation F(alpha) with
//! F .. F = F, solved per scenario and verified generator by generator.

mod common;

use common::{rat, rats};
use num_traits::Zero;
use tibell::bell::Scenario;
use tibell::renorm::{self, RenormError};
use tibell::scalar::Rat;

/// c-coordinates of a range-1, m=2 coefficient vector: the total sum and the
/// three signed two-body sums.
fn c_coords(alpha: &[Rat], lambda: &Rat) -> Vec<Rat> {
    assert_eq!(alpha.len(), 6);
    let (a00, a01, a10, a11) = (&alpha[2], &alpha[3], &alpha[4], &alpha[5]);
    vec![
        alpha.iter().sum::<Rat>(),
        a00 - a01 + a10 - a11,
        a00 + a01 - a10 - a11,
        a00 - a01 - a10 + a11,
        lambda.clone(),
    ]
}

#[test]
fn no_single_body_solutions() {
    let p = renorm::build_parametric(Scenario::new(2, 1), false);
    let sol = renorm::solve_fixed_points(&p, 100000).unwrap();
    assert!(sol.complete);
    let mut classes: Vec<Vec<Rat>> = Vec::new();
    for face in &sol.faces {
        for ray in &face.rays {
            assert!(renorm::is_fixed_point(&p, ray), "generator must be a fixed point");
            let (alpha, lambda) = p.alpha_lambda(ray);
            assert!(alpha[..2].iter().all(|x| x.is_zero()));
            classes.push(c_coords(&alpha, &lambda));
        }
    }
    classes.sort();
    classes.dedup();
    assert_eq!(
        classes,
        vec![rats(&[-1, -1, -1, -1, -1]), rats(&[-1, 1, 1, -1, -1])]
    );
}

#[test]
fn single_body_solutions_include_one_body_bounds() {
    let p = renorm::build_parametric(Scenario::new(2, 1), true);
    let sol = renorm::solve_fixed_points(&p, 100000).unwrap();
    assert!(sol.complete);
    let mut rays: Vec<(Vec<Rat>, Rat)> = Vec::new();
    for face in &sol.faces {
        for ray in &face.rays {
            assert!(renorm::is_fixed_point(&p, ray));
            rays.push(p.alpha_lambda(ray));
        }
    }
    rays.sort();
    rays.dedup();
    // Exactly the two purely-two-body classes plus the four one-body
    // inequalities +-<A_x> with eigenvalue -1.
    let expected: Vec<(Vec<Rat>, Rat)> = vec![
        (rats(&[-1, 0, 0, 0, 0, 0]), rat(-1)),
        (rats(&[0, -1, 0, 0, 0, 0]), rat(-1)),
        (rats(&[0, 0, -1, 0, 0, 0]), rat(-1)),
        (rats(&[0, 0, 0, 0, 0, -1]), rat(-1)),
        (rats(&[0, 1, 0, 0, 0, 0]), rat(-1)),
        (rats(&[1, 0, 0, 0, 0, 0]), rat(-1)),
    ];
    assert_eq!(rays, expected);
}

#[test]
fn fixed_point_predicate() {
    let p = renorm::build_parametric(Scenario::new(2, 1), false);
    // alpha00 = -1, lambda = -1 is a fixed point; lambda = -2 is not.
    let good = rats(&[-1, 0, 0, 0, -1]);
    let bad = rats(&[-1, 0, 0, 0, -2]);
    assert!(renorm::is_fixed_point(&p, &good));
    assert!(!renorm::is_fixed_point(&p, &bad));
}

#[test]
fn faces_are_inclusion_maximal() {
    let p = renorm::build_parametric(Scenario::new(2, 1), true);
    let sol = renorm::solve_fixed_points(&p, 100000).unwrap();
    let ray_sets: Vec<std::collections::BTreeSet<Vec<Rat>>> =
        sol.faces.iter().map(|f| f.rays.iter().cloned().collect()).collect();
    for (i, a) in ray_sets.iter().enumerate() {
        for (j, b) in ray_sets.iter().enumerate() {
            if i != j {
                assert!(!a.is_subset(b), "face {i} is contained in face {j}");
            }
        }
    }
}

#[test]
fn interior_combinations_are_fixed_points() {
    // Fixed points form a union of cones: positive combinations inside one
    // face stay fixed, while mixing generators across faces can fail.
    let p = renorm::build_parametric(Scenario::new(2, 1), false);
    let sol = renorm::solve_fixed_points(&p, 100000).unwrap();
    for face in &sol.faces {
        let dim = face.rays[0].len();
        let mut combo = vec![Rat::zero(); dim];
        for (k, ray) in face.rays.iter().enumerate() {
            for (acc, x) in combo.iter_mut().zip(ray) {
                *acc += x * rat(k as i64 + 2);
            }
        }
        assert!(renorm::is_fixed_point(&p, &combo));
    }
}

#[test]
fn budget_exhaustion_is_reported() {
    let p = renorm::build_parametric(Scenario::new(2, 1), true);
    match renorm::solve_fixed_points(&p, 1) {
        Ok(sol) => assert!(!sol.complete),
        Err(RenormError::BudgetExceeded { budget: 1 }) => {}
        Err(other) => panic!("unexpected error {other:?}"),
    }
}

#[test]
fn parametric_matrix_evaluates_consistently() {
    use tibell::bell::{build_f, BellInequality};
    // Evaluating the parametric matrix at (alpha, 0) equals build_f(alpha).
    let sc = Scenario::new(2, 1);
    let p = renorm::build_parametric(sc, true);
    let alpha = rats(&[0, 0, 2, -1, 1, 0]);
    let mut point = alpha.clone();
    point.push(Rat::zero()); // lambda = 0 contributes nothing
    let evaluated = p.evaluate(&point);
    let direct = build_f(&BellInequality::new(sc, alpha, None));
    assert_eq!(evaluated, direct);
}
