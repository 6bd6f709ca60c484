//! Constructive rewriting of conjugates and commutators of elementary
//! generators with denominators into words at a prescribed level.
//!
//! Every rewrite returns a certificate holding the full output word, the
//! exponent budget it used and the result of the exact matrix oracle.

mod audit;
mod budget;
mod engine;
mod lemmas;
mod relative;
mod theorem2;

pub use audit::{audit_csv, length_audit, AuditRow};
pub use budget::{
    commutator_formula, conjugation_formula, search_pair, Case, ExponentBudget, Lemma, PlanInput, SEARCH_LIMIT,
};
pub use engine::{unit_recipes, Engine, Recipe};
pub use lemmas::{
    commutator_general, commutator_single, conjugate_single, conjugate_word, lemma3, lemma4, lemma5, lemma6,
    refined_conjugate_base, Calculus, Lacing, RewriteCertificate, COMMUTATOR_NON_OPPOSITE_BOUND, CONJUGATE_BOUND,
};

pub use relative::{
    lemma7, lemma9, plan_relative_commutator, plan_relative_conjugate, relative_commutator, relative_conjugate,
    relative_conjugate_certified, relative_ring, two_ideal_ring, RelativeFactor, RelativeWord, TwoIdealOutput,
};

pub use theorem2::{theorem2_verify, Theorem2Report};

use thiserror::Error;

use crate::chevalley::ChevalleyError;
use crate::ring::RingError;
use crate::roots::RootError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalculusError {
    #[error("insufficient exponent budget for {lemma}: {detail}")]
    InsufficientBudget { lemma: Lemma, detail: String },
    #[error("no budget up to the search limit works for {lemma}")]
    SearchExhausted { lemma: Lemma },
    #[error("{lemma} has no planner")]
    Unplannable { lemma: Lemma },
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Chevalley(#[from] ChevalleyError),
    #[error(transparent)]
    Ring(#[from] RingError),
}
