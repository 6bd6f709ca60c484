//! Elementary root unipotents as exact matrices, words in them, and the
//! Steinberg relations.

mod matrix;
mod rep;
mod suite;
mod word;

pub use matrix::{Matrix, Sparse};
pub use rep::{GroupKind, Representation};
pub use suite::{
    steinberg_suite, symbolic_commutator_checks, Coverage, RelationInstance, SteinbergReport,
    SymbolicCommutatorCheck,
};
pub use word::{
    chevalley_commutator, commutator_word, factor_at_level, parse_word, validate_level, Gen, Level, Word,
};

use thiserror::Error;

use crate::ring::{Elem, Ideal};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChevalleyError {
    #[error("no {0} representation is provided")]
    UnsupportedRepresentation(String),
    #[error("divided power is not integral: {0}")]
    NonIntegral(String),
    #[error("the commutator formula does not apply to opposite roots")]
    OppositeRoots,
    #[error("relation {relation} fails at {instance}")]
    RelationFailure { relation: String, instance: String },
    #[error("cannot parse word line `{0}`")]
    Parse(String),
}

/// Entrywise reduction modulo an ideal; the result lives over `R/I` as
/// returned by [`Ideal::quotient`].
pub fn reduce_mod(ideal: &Ideal, g: &Matrix<Elem>) -> Matrix<Elem> {
    let (_, projection) = ideal.quotient();
    g.reduce(&projection)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::ring::FiniteRing;
    use crate::roots::RootData;

    #[test]
    fn reduction_examples() {
        let data = RootData::parse("A2").unwrap();
        let rep = Representation::natural(data.clone()).unwrap();
        let alpha = data.phi.simple(0);

        let r6 = Arc::new(FiniteRing::integers_mod(6).unwrap());
        let i2 = Ideal::generated(r6.clone(), &[r6.int(2)]);
        let (q, _) = i2.quotient();
        let g = rep.unipotent(&*r6, alpha, &r6.int(3));
        assert_eq!(reduce_mod(&i2, &g), rep.unipotent(&q, alpha, &q.int(1)));
        assert!(!reduce_mod(&i2, &g).is_identity(&q));

        let zero = Ideal::zero(r6.clone());
        assert_eq!(reduce_mod(&zero, &g), g);

        let r12 = Arc::new(FiniteRing::integers_mod(12).unwrap());
        let i4 = Ideal::generated(r12.clone(), &[r12.int(4)]);
        let (q, _) = i4.quotient();
        let g = rep.unipotent(&*r12, alpha, &r12.int(4));
        assert!(reduce_mod(&i4, &g).is_identity(&q));
    }

    #[test]
    fn reduction_is_multiplicative() {
        let data = RootData::parse("C2").unwrap();
        let rep = Representation::natural(data.clone()).unwrap();
        let r = Arc::new(FiniteRing::integers_mod(12).unwrap());
        let ideal = Ideal::generated(r.clone(), &[r.int(3)]);
        let (q, proj) = ideal.quotient();
        let g = rep.unipotent(&*r, data.phi.simple(0), &r.int(5));
        let h = rep.unipotent(&*r, data.phi.neg(data.phi.simple(1)), &r.int(7));
        let lhs = g.mul(&*r, &h).reduce(&proj);
        let rhs = g.reduce(&proj).mul(&q, &h.reduce(&proj));
        assert_eq!(lhs, rhs);
    }
}
