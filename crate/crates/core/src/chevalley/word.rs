use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::matrix::Matrix;
use super::rep::Representation;
use super::ChevalleyError;
use crate::ring::{LPoly, PolyRing, Ring};
use crate::roots::{RootData, RootId, RootSystem};

/// An elementary root unipotent `x_α(ξ)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Gen<E> {
    pub root: RootId,
    pub param: E,
}

impl<E> Gen<E> {
    pub fn new(root: RootId, param: E) -> Self {
        Gen { root, param }
    }
}

/// Advisory level metadata attached to a word.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Level {
    /// Every parameter lies in `s^p t^q R`.
    Ring { p: u32, q: u32 },
    /// Every parameter lies in `s^p t^q R` and carries all the markers.
    Ideal { p: u32, q: u32, markers: Vec<String> },
}

/// A finite product of elementary generators.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Word<E> {
    pub factors: Vec<Gen<E>>,
    pub declared_level: Option<Level>,
}

impl<E> Default for Word<E> {
    fn default() -> Self {
        Word {
            factors: Vec::new(),
            declared_level: None,
        }
    }
}

impl<E: Clone> Word<E> {
    pub fn new(factors: Vec<Gen<E>>) -> Self {
        Word {
            factors,
            declared_level: None,
        }
    }

    pub fn single(root: RootId, param: E) -> Self {
        Self::new(vec![Gen::new(root, param)])
    }

    pub fn with_level(mut self, level: Level) -> Self {
        self.declared_level = Some(level);
        self
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn inverse<R: Ring<Elem = E>>(&self, ring: &R) -> Self {
        Word::new(
            self.factors
                .iter()
                .rev()
                .map(|g| Gen::new(g.root, ring.neg(&g.param)))
                .collect(),
        )
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Word::new(factors)
    }

    pub fn extend(&mut self, other: &Self) {
        self.factors.extend(other.factors.iter().cloned());
    }

    /// `g w g^{-1}`.
    pub fn conjugate_by<R: Ring<Elem = E>>(&self, ring: &R, g: &Self) -> Self {
        g.concat(self).concat(&g.inverse(ring))
    }

    /// Merges adjacent factors on the same root and drops trivial ones.
    pub fn simplify<R: Ring<Elem = E>>(&self, ring: &R) -> Self {
        let mut out: Vec<Gen<E>> = Vec::with_capacity(self.factors.len());
        for g in &self.factors {
            if ring.is_zero(&g.param) {
                continue;
            }
            match out.last_mut() {
                Some(last) if last.root == g.root => {
                    let merged = ring.add(&last.param, &g.param);
                    if ring.is_zero(&merged) {
                        out.pop();
                    } else {
                        last.param = merged;
                    }
                }
                _ => out.push(g.clone()),
            }
        }
        Word {
            factors: out,
            declared_level: self.declared_level.clone(),
        }
    }

    /// One factor per line: `x[1,0](a)`.
    pub fn to_lines<R: Ring<Elem = E>>(&self, phi: &RootSystem, ring: &R) -> String {
        let mut s = String::new();
        for g in &self.factors {
            let _ = writeln!(s, "x{}({})", phi.format_root(g.root), ring.format(&g.param));
        }
        s
    }

    pub fn evaluate<R: Ring<Elem = E>>(&self, rep: &Representation, ring: &R) -> Matrix<E> {
        let mut m = Matrix::identity(ring, rep.dim());
        for g in &self.factors {
            m = rep.right_mul(ring, &m, g.root, &g.param);
        }
        m
    }
}

/// Parses the line format produced by [`Word::to_lines`].
pub fn parse_word<E: Clone, F>(phi: &RootSystem, text: &str, mut param: F) -> Result<Word<E>, ChevalleyError>
where
    F: FnMut(&str) -> Option<E>,
{
    let mut factors = Vec::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
        let bad = || ChevalleyError::Parse(line.to_string());
        let rest = line.strip_prefix('x').ok_or_else(bad)?;
        let close = rest.find(']').ok_or_else(bad)?;
        let root = phi.parse_root(&rest[..=close]).map_err(|_| bad())?;
        let p = rest[close + 1..]
            .strip_prefix('(')
            .and_then(|p| p.strip_suffix(')'))
            .ok_or_else(bad)?;
        factors.push(Gen::new(root, param(p).ok_or_else(bad)?));
    }
    Ok(Word::new(factors))
}

/// Checks every factor against the declared level (true if none is declared).
pub fn validate_level(ring: &PolyRing, w: &Word<LPoly>) -> bool {
    match &w.declared_level {
        None => true,
        Some(level) => w.factors.iter().all(|g| factor_at_level(ring, &g.param, level)),
    }
}

pub fn factor_at_level(ring: &PolyRing, x: &LPoly, level: &Level) -> bool {
    match level {
        Level::Ring { p, q } => ring.level_membership(x, *p, *q),
        Level::Ideal { p, q, markers } => {
            let tags: Vec<&str> = markers.iter().map(String::as_str).collect();
            ring.level_membership(x, *p, *q) && ring.carries_markers(x, &tags)
        }
    }
}

/// The Chevalley commutator formula: `[x_α(a), x_β(b)]` as an ordered word.
///
/// Equal roots commute (empty word); opposite roots are rejected.
pub fn chevalley_commutator<R: Ring>(
    data: &RootData,
    ring: &R,
    alpha: RootId,
    beta: RootId,
    a: &R::Elem,
    b: &R::Elem,
) -> Result<Word<R::Elem>, ChevalleyError> {
    if alpha == beta {
        return Ok(Word::default());
    }
    if alpha == data.phi.neg(beta) {
        return Err(ChevalleyError::OppositeRoots);
    }
    let factors = data
        .consts
        .commutator(alpha, beta)
        .iter()
        .map(|t| {
            let p = ring.mul(
                &ring.from_int(t.coeff as i64),
                &ring.mul(&ring.pow(a, t.i as u32), &ring.pow(b, t.j as u32)),
            );
            Gen::new(t.root, p)
        })
        .filter(|g| !ring.is_zero(&g.param))
        .collect();
    Ok(Word::new(factors))
}

/// The literal commutator word `x y x^{-1} y^{-1}`.
pub fn commutator_word<E: Clone, R: Ring<Elem = E>>(ring: &R, x: &Word<E>, y: &Word<E>) -> Word<E> {
    x.concat(y).concat(&x.inverse(ring)).concat(&y.inverse(ring))
}
