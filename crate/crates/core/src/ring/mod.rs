//! Commutative coefficient rings.
//!
//! Two families are provided: table-driven finite rings ([`FiniteRing`]) and
//! multivariate polynomial rings over the integers with a fixed set of
//! inverted variables ([`PolyRing`]). Both implement [`Ring`], which is all the
//! matrix and word layers need.

mod finite;
mod ideal;
mod parse;
mod poly;

use std::fmt::Debug;
use std::hash::Hash;

pub use finite::{Elem, Factor, FiniteRing, MAX_FINITE_SIZE};
pub use ideal::{
    ann_stabilize, annihilator, ideal_ops, is_semisimple, localise_finite, maximal_ideals,
    partition_of_one, Ideal, IdealOps, LocalisationMap,
};
pub use parse::{parse_ring, RingSpec};
pub use poly::{LPoly, Monomial, PolyRing, Variable, MAX_VARS};

use thiserror::Error;

/// Errors raised by ring construction and ring-level operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("cannot parse ring description `{0}`: {1}")]
    Parse(String, String),
    #[error("ring of size {0} exceeds the supported maximum {MAX_FINITE_SIZE}")]
    TooLarge(usize),
    #[error("modulus must be at least 2")]
    ZeroRing,
    #[error("localisation at {0} is the zero ring (nilpotent denominator)")]
    NilpotentDenominator(String),
    #[error("ideals live in different ambient rings")]
    AmbientMismatch,
    #[error("the elements do not generate the unit ideal")]
    NotUnitIdeal,
    #[error("element `{0}` does not belong to the ring")]
    UnknownElement(String),
}

/// Exact commutative ring arithmetic with an explicit ring context.
///
/// Elements are plain values; the context supplies the operations. This keeps
/// finite-ring elements as small indices into precomputed tables.
pub trait Ring: Send + Sync {
    type Elem: Clone + PartialEq + Eq + Hash + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    #[allow(clippy::wrong_self_convention)]
    fn from_int(&self, n: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Canonical printed form.
    fn format(&self, a: &Self::Elem) -> String;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn pow(&self, a: &Self::Elem, mut e: u32) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
}
