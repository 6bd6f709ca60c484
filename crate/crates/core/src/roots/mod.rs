//! Reduced irreducible root systems of rank at least two and their
//! Chevalley structure constants.

mod constants;
mod system;

pub use constants::{ChevalleyConstants, CommTerm};
pub(crate) use constants::AdjointAction;
pub use system::{CartanType, LengthClass, Root, RootId, RootSystem};

use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootError {
    #[error("unknown root system `{0}`")]
    UnknownType(String),
    #[error("unsupported rank for `{0}`: the system must be irreducible of rank at least 2")]
    UnsupportedRank(String),
    #[error("the roots are equal or opposite")]
    OppositeOrEqual,
    #[error("`{0}` is not a root of the system")]
    NotARoot(String),
}

/// A root system bundled with its constants, shared by everything above it.
#[derive(Clone, Debug)]
pub struct RootData {
    pub phi: RootSystem,
    pub consts: ChevalleyConstants,
}

impl RootData {
    pub fn build(ty: CartanType) -> Result<Arc<Self>, RootError> {
        let phi = RootSystem::build(ty)?;
        let consts = ChevalleyConstants::build(&phi);
        Ok(Arc::new(RootData { phi, consts }))
    }

    pub fn parse(name: &str) -> Result<Arc<Self>, RootError> {
        Self::build(name.parse()?)
    }
}
