//! Exact-arithmetic toolkit for translation-invariant Bell inequalities with
//! finite interaction range on 1D rings.
//!
//! The computational backbone is the min-plus (tropical) semiring over exact
//! rationals: classical bounds are tropical traces of powers of a transfer
//! matrix, optimal strategies are closed paths of its critical graph, and the
//! finite-ring local polytopes are graph polytopes whose vertices are
//! enumerated exactly through per-cycle error sets. Everything is computed
//! over `BigRational`; there is no floating point in any result path.

pub mod bell;
pub mod graph;
pub mod linalg;
pub mod lp;
pub mod poly;
pub mod renorm;
pub mod scalar;
pub mod trop;
pub mod verts;
