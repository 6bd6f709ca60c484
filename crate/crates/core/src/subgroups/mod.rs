//! Finite ground truth: elementary, relative, congruence and mutual
//! commutator subgroups of Chevalley groups over finite rings, enumerated
//! explicitly with Cayley distances, and the checks built on them.
//!
//! Over a finite ring the group `G(Φ, R)` is taken to be `E(Φ, R)`; finite
//! rings are semilocal and the groups are simply connected, so the two
//! agree.

mod construct;
mod group;
mod normality;
mod table;
mod theorems;
mod width;

pub use construct::{
    ambient_table, centre_of, congruence_subgroup, enumerate_elementary, full_congruence_subgroup,
    mutual_commutator, SubgroupLevel,
};
pub use group::{GroupDescriptor, GroupElement, Key};
pub use normality::{normality_decompose, random_element, Chart, Decomposition, NormalityContext};
pub use table::{LengthBasis, SubgroupTable, DEFAULT_ORDER_CAP};
pub use theorems::{verify_theorem_3c, verify_theorem_4c, verify_theorem_8c, TheoremReport};
pub use width::{commutator_width, width_csv, WidthMode, WidthReport, DEFAULT_PAIR_CAP};

use thiserror::Error;

use crate::chevalley::ChevalleyError;
use crate::ring::RingError;
use crate::roots::RootError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubgroupError {
    #[error("subgroup order exceeds the cap of {cap} elements")]
    OrderCapExceeded { cap: usize },
    #[error("the ideals are not comaximal")]
    NotComaximal,
    #[error("matrices of dimension {dim} over {ring} do not fit a 128-bit key")]
    KeyTooWide { dim: usize, ring: String },
    #[error("`{0}` is not a finite ring")]
    InfiniteRing(String),
    #[error("the subgroups live in different ambient groups")]
    AmbientMismatch,
    #[error("the enumerated set {0} is not closed under products")]
    NotASubgroup(String),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Chevalley(#[from] ChevalleyError),
    #[error(transparent)]
    Root(#[from] RootError),
}
