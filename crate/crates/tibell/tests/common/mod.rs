//! Shared helpers for the integration test suites.
#![allow(dead_code)]

use tibell::bell::{BellInequality, Scenario};
use tibell::scalar::{ExtendedRational, Rat};
use tibell::trop::TropMatrix;

pub fn rat(x: i64) -> Rat {
    Rat::from_integer(x.into())
}

pub fn rats(xs: &[i64]) -> Vec<Rat> {
    xs.iter().map(|&x| rat(x)).collect()
}

pub fn ineq(m: usize, r: usize, alpha: &[i64], beta: Option<i64>) -> BellInequality {
    BellInequality::new(Scenario::new(m, r), rats(alpha), beta.map(rat))
}

/// The 6-coefficient running example with classical bound -2 per party.
pub fn example_ineq() -> BellInequality {
    ineq(2, 1, &[0, 0, 2, -1, 1, 0], Some(-2))
}

/// The printed 4x4 matrix of the running example, built entry by entry.
pub fn example_matrix() -> TropMatrix {
    int_matrix(4, &[2, 4, -4, -2, 0, 2, -2, 0, 0, -2, 2, 0, -2, -4, 4, 2])
}

pub fn int_matrix(n: usize, entries: &[i64]) -> TropMatrix {
    assert_eq!(entries.len(), n * n);
    TropMatrix::new(n, entries.iter().map(|&x| ExtendedRational::Finite(rat(x))).collect())
}
