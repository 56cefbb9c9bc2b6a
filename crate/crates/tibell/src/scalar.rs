//! Exact scalars: arbitrary-precision rationals extended with +infinity,
//! ordered and equipped with the tropical operations min (plus) and + (times).
//!
//! -infinity is deliberately absent: the semiring in use is (Q u {+inf}, min, +),
//! and admitting -inf would break absorption. Values that would need it are
//! constructor errors upstream.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

/// Exact rational scalar used everywhere in the crate.
pub type Rat = BigRational;

/// Rational from an integer.
pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational n/d.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// A rational extended with the tropical zero +infinity.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum ExtendedRational {
    Finite(Rat),
    PlusInfinity,
}

pub use ExtendedRational::{Finite, PlusInfinity};

impl ExtendedRational {
    pub fn zero() -> Self {
        Finite(Rat::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Finite(_))
    }

    /// The finite value, panicking on +inf; for call sites that have already
    /// established finiteness structurally.
    pub fn finite(&self) -> &Rat {
        match self {
            Finite(r) => r,
            PlusInfinity => panic!("expected finite tropical scalar, found +inf"),
        }
    }

    /// Tropical addition: minimum.
    pub fn trop_add(&self, other: &Self) -> Self {
        if self <= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    /// Tropical multiplication: ordinary addition, with +inf absorbing.
    pub fn trop_mul(&self, other: &Self) -> Self {
        match (self, other) {
            (Finite(a), Finite(b)) => Finite(a + b),
            _ => PlusInfinity,
        }
    }
}

impl PartialOrd for ExtendedRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtendedRational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Finite(a), Finite(b)) => a.cmp(b),
            (Finite(_), PlusInfinity) => Ordering::Less,
            (PlusInfinity, Finite(_)) => Ordering::Greater,
            (PlusInfinity, PlusInfinity) => Ordering::Equal,
        }
    }
}

impl From<Rat> for ExtendedRational {
    fn from(r: Rat) -> Self {
        Finite(r)
    }
}

impl fmt::Display for ExtendedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finite(r) => write!(f, "{r}"),
            PlusInfinity => write!(f, "inf"),
        }
    }
}
