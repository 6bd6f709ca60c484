use std::fmt;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use super::{Ring, RingError};

/// Largest carrier size for which addition and multiplication tables are built.
pub const MAX_FINITE_SIZE: usize = 2048;

/// An element of a [`FiniteRing`]: its index in the carrier enumeration.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Elem(pub u16);

impl Elem {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// One direct factor `Z/m[u]/(u^d)`; `nil_degree == 1` is plain `Z/m`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Factor {
    pub modulus: u64,
    pub nil_degree: u32,
}

impl Factor {
    pub fn size(&self) -> usize {
        (self.modulus as usize).pow(self.nil_degree)
    }

    fn decode(&self, mut idx: usize) -> Vec<u64> {
        let m = self.modulus as usize;
        (0..self.nil_degree)
            .map(|_| {
                let c = idx % m;
                idx /= m;
                c as u64
            })
            .collect()
    }

    fn encode(&self, coeffs: &[u64]) -> usize {
        coeffs
            .iter()
            .rev()
            .fold(0usize, |acc, &c| acc * self.modulus as usize + c as usize)
    }

    fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.modulus).collect()
    }

    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let d = self.nil_degree as usize;
        let mut out = vec![0u64; d];
        for i in 0..d {
            if a[i] == 0 {
                continue;
            }
            for j in 0..d - i {
                out[i + j] = (out[i + j] + a[i] * b[j]) % self.modulus;
            }
        }
        out
    }

    fn label(&self, coeffs: &[u64]) -> String {
        if self.nil_degree == 1 {
            return coeffs[0].to_string();
        }
        let mut terms = Vec::new();
        for (k, &c) in coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let t = match (k, c) {
                (0, c) => c.to_string(),
                (1, 1) => "u".to_string(),
                (1, c) => format!("{c}u"),
                (k, 1) => format!("u^{k}"),
                (k, c) => format!("{c}u^{k}"),
            };
            terms.push(t);
        }
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join("+")
        }
    }

    fn describe(&self) -> String {
        if self.nil_degree == 1 {
            format!("Z/{}", self.modulus)
        } else {
            format!("Z/{}[u]/(u^{})", self.modulus, self.nil_degree)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Structure {
    Factors(Vec<Factor>),
    Quotient,
}

/// A finite commutative ring with materialised operation tables.
///
/// The carrier is `0..size`, enumerated in a fixed order: for direct products
/// the tuple order with the first factor most significant, and inside a
/// truncated polynomial factor the constant coefficient least significant.
#[derive(Clone)]
pub struct FiniteRing {
    name: String,
    structure: Structure,
    size: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    labels: Vec<String>,
    by_label: FxHashMap<String, u16>,
    one: u16,
}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteRing({}, size {})", self.name, self.size)
    }
}

impl PartialEq for FiniteRing {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.size == other.size
    }
}

impl FiniteRing {
    /// `Z/m`.
    pub fn integers_mod(m: u64) -> Result<Self, RingError> {
        Self::product(&[Factor {
            modulus: m,
            nil_degree: 1,
        }])
    }

    /// `Z/m[u]/(u^d)`.
    pub fn truncated(m: u64, d: u32) -> Result<Self, RingError> {
        Self::product(&[Factor {
            modulus: m,
            nil_degree: d,
        }])
    }

    /// Direct product of the given factors.
    pub fn product(factors: &[Factor]) -> Result<Self, RingError> {
        if factors.is_empty() || factors.iter().any(|f| f.modulus < 2 || f.nil_degree == 0) {
            return Err(RingError::ZeroRing);
        }
        let mut size: usize = 1;
        for f in factors {
            size = size
                .checked_mul(f.size())
                .filter(|&s| s <= MAX_FINITE_SIZE)
                .ok_or(RingError::TooLarge(size.saturating_mul(f.size())))?;
        }
        let sizes: Vec<usize> = factors.iter().map(|f| f.size()).collect();
        let decode = |mut idx: usize| -> Vec<Vec<u64>> {
            let mut parts = vec![Vec::new(); factors.len()];
            for k in (0..factors.len()).rev() {
                parts[k] = factors[k].decode(idx % sizes[k]);
                idx /= sizes[k];
            }
            parts
        };
        let encode = |parts: &[Vec<u64>]| -> usize {
            parts
                .iter()
                .enumerate()
                .fold(0usize, |acc, (k, p)| acc * sizes[k] + factors[k].encode(p))
        };
        let decoded: Vec<Vec<Vec<u64>>> = (0..size).map(decode).collect();
        let mut add = vec![0u16; size * size];
        let mut mul = vec![0u16; size * size];
        for a in 0..size {
            for b in a..size {
                let s: Vec<Vec<u64>> = factors
                    .iter()
                    .enumerate()
                    .map(|(k, f)| f.add(&decoded[a][k], &decoded[b][k]))
                    .collect();
                let p: Vec<Vec<u64>> = factors
                    .iter()
                    .enumerate()
                    .map(|(k, f)| f.mul(&decoded[a][k], &decoded[b][k]))
                    .collect();
                let (s, p) = (encode(&s) as u16, encode(&p) as u16);
                add[a * size + b] = s;
                add[b * size + a] = s;
                mul[a * size + b] = p;
                mul[b * size + a] = p;
            }
        }
        let labels: Vec<String> = decoded
            .iter()
            .map(|parts| {
                if parts.len() == 1 {
                    factors[0].label(&parts[0])
                } else {
                    let inner: Vec<String> = parts
                        .iter()
                        .zip(factors)
                        .map(|(p, f)| f.label(p))
                        .collect();
                    format!("({})", inner.join(","))
                }
            })
            .collect();
        let one_parts: Vec<Vec<u64>> = factors
            .iter()
            .map(|f| {
                let mut c = vec![0u64; f.nil_degree as usize];
                c[0] = 1;
                c
            })
            .collect();
        let one = encode(&one_parts) as u16;
        let name = factors
            .iter()
            .map(Factor::describe)
            .collect::<Vec<_>>()
            .join(" x ");
        Ok(Self::from_tables(
            name,
            Structure::Factors(factors.to_vec()),
            size,
            add,
            mul,
            labels,
            one,
        ))
    }

    fn from_tables(
        name: String,
        structure: Structure,
        size: usize,
        add: Vec<u16>,
        mul: Vec<u16>,
        labels: Vec<String>,
        one: u16,
    ) -> Self {
        let neg = (0..size)
            .map(|a| {
                (0..size)
                    .find(|&b| add[a * size + b] == 0)
                    .expect("additive inverse exists") as u16
            })
            .collect();
        let by_label = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i as u16))
            .collect();
        FiniteRing {
            name,
            structure,
            size,
            add,
            mul,
            neg,
            labels,
            by_label,
            one,
        }
    }

    /// Quotient by an additive subgroup closed under multiplication, given as a
    /// membership mask. Returns the quotient ring and the projection map.
    ///
    /// Cosets are represented by their smallest member, whose label they keep.
    pub fn quotient(&self, members: &[bool], ideal_name: &str) -> (FiniteRing, Vec<Elem>) {
        let n = self.size;
        let mut rep_of = vec![u16::MAX; n];
        let mut reps: Vec<u16> = Vec::new();
        for a in 0..n {
            if rep_of[a] != u16::MAX {
                continue;
            }
            let class = reps.len() as u16;
            reps.push(a as u16);
            for i in (0..n).filter(|&i| members[i]) {
                rep_of[self.add[a * n + i] as usize] = class;
            }
        }
        let size = reps.len();
        let mut add = vec![0u16; size * size];
        let mut mul = vec![0u16; size * size];
        for (x, &ra) in reps.iter().enumerate() {
            for (y, &rb) in reps.iter().enumerate() {
                let (ra, rb) = (ra as usize, rb as usize);
                add[x * size + y] = rep_of[self.add[ra * n + rb] as usize];
                mul[x * size + y] = rep_of[self.mul[ra * n + rb] as usize];
            }
        }
        let labels = reps
            .iter()
            .map(|&r| self.labels[r as usize].clone())
            .collect();
        let one = rep_of[self.one as usize];
        let ring = Self::from_tables(
            format!("{}/({})", self.name, ideal_name),
            Structure::Quotient,
            size,
            add,
            mul,
            labels,
            one,
        );
        (ring, rep_of.into_iter().map(Elem).collect())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Carrier in enumeration order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.size as u16).map(Elem)
    }

    pub fn label(&self, a: Elem) -> &str {
        &self.labels[a.index()]
    }

    /// Parses a canonical label, or an integer (interpreted through `Z -> R`).
    pub fn parse_elem(&self, text: &str) -> Result<Elem, RingError> {
        let t = text.trim();
        if let Some(&i) = self.by_label.get(t) {
            return Ok(Elem(i));
        }
        t.parse::<i64>()
            .map(|n| self.int(n))
            .map_err(|_| RingError::UnknownElement(t.to_string()))
    }

    #[inline]
    pub fn add_e(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.add[a.index() * self.size + b.index()])
    }

    #[inline]
    pub fn mul_e(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.mul[a.index() * self.size + b.index()])
    }

    #[inline]
    pub fn neg_e(&self, a: Elem) -> Elem {
        Elem(self.neg[a.index()])
    }

    pub fn zero_e(&self) -> Elem {
        Elem(0)
    }

    pub fn one_e(&self) -> Elem {
        Elem(self.one)
    }

    /// Image of an integer under `Z -> R`.
    pub fn int(&self, n: i64) -> Elem {
        let mut acc = self.zero_e();
        let mut base = if n < 0 {
            self.neg_e(self.one_e())
        } else {
            self.one_e()
        };
        let mut k = n.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add_e(acc, base);
            }
            base = self.add_e(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn pow_e(&self, a: Elem, e: u32) -> Elem {
        (0..e).fold(self.one_e(), |acc, _| self.mul_e(acc, a))
    }

    pub fn is_unit(&self, a: Elem) -> bool {
        self.inverse(a).is_some()
    }

    pub fn inverse(&self, a: Elem) -> Option<Elem> {
        self.elements().find(|&b| self.mul_e(a, b) == self.one_e())
    }

    pub fn is_nilpotent(&self, a: Elem) -> bool {
        let mut x = a;
        for _ in 0..=self.size {
            if x == self.zero_e() {
                return true;
            }
            x = self.mul_e(x, a);
        }
        false
    }

    /// Smallest set of elements generating the carrier as an abelian group,
    /// picked greedily in enumeration order.
    pub fn additive_generators(&self) -> Vec<Elem> {
        let all: Vec<Elem> = self.elements().collect();
        additive_basis(self, &all)
    }

    /// Direct factors `Z/p^e[u]/(u^d)` obtained by splitting every modulus by
    /// the Chinese remainder theorem. `None` for quotient rings.
    pub fn local_factors(&self) -> Option<Vec<Factor>> {
        let Structure::Factors(fs) = &self.structure else {
            return None;
        };
        let mut out = Vec::new();
        for f in fs {
            let mut m = f.modulus;
            let mut p = 2;
            while m > 1 {
                if m % p == 0 {
                    let mut q = 1;
                    while m % p == 0 {
                        m /= p;
                        q *= p;
                    }
                    out.push(Factor {
                        modulus: q,
                        nil_degree: f.nil_degree,
                    });
                }
                p += 1;
            }
        }
        Some(out)
    }
}

/// Greedy additive spanning subset of `candidates` (which must be closed under
/// addition once spanned).
pub(crate) fn additive_basis(r: &FiniteRing, candidates: &[Elem]) -> Vec<Elem> {
    let mut span = vec![false; r.size()];
    span[0] = true;
    let mut members = vec![r.zero_e()];
    let mut basis = Vec::new();
    for &c in candidates {
        if span[c.index()] {
            continue;
        }
        basis.push(c);
        // close the span under adding c
        let mut frontier = members.clone();
        while let Some(x) = frontier.pop() {
            let y = r.add_e(x, c);
            if !span[y.index()] {
                span[y.index()] = true;
                members.push(y);
                frontier.push(y);
            }
        }
    }
    basis
}

impl Ring for FiniteRing {
    type Elem = Elem;

    fn zero(&self) -> Elem {
        self.zero_e()
    }
    fn one(&self) -> Elem {
        self.one_e()
    }
    #[inline]
    fn add(&self, a: &Elem, b: &Elem) -> Elem {
        self.add_e(*a, *b)
    }
    #[inline]
    fn neg(&self, a: &Elem) -> Elem {
        self.neg_e(*a)
    }
    #[inline]
    fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        self.mul_e(*a, *b)
    }
    fn from_int(&self, n: i64) -> Elem {
        self.int(n)
    }
    fn is_zero(&self, a: &Elem) -> bool {
        a.0 == 0
    }
    fn format(&self, a: &Elem) -> String {
        self.labels[a.index()].clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_axioms(r: &FiniteRing) {
        let els: Vec<Elem> = r.elements().collect();
        for &a in &els {
            assert_eq!(r.add_e(a, r.zero_e()), a);
            assert_eq!(r.mul_e(a, r.one_e()), a);
            assert_eq!(r.add_e(a, r.neg_e(a)), r.zero_e());
            for &b in &els {
                assert_eq!(r.add_e(a, b), r.add_e(b, a));
                assert_eq!(r.mul_e(a, b), r.mul_e(b, a));
                for &c in &els {
                    assert_eq!(r.add_e(r.add_e(a, b), c), r.add_e(a, r.add_e(b, c)));
                    assert_eq!(r.mul_e(r.mul_e(a, b), c), r.mul_e(a, r.mul_e(b, c)));
                    assert_eq!(
                        r.mul_e(a, r.add_e(b, c)),
                        r.add_e(r.mul_e(a, b), r.mul_e(a, c))
                    );
                }
            }
        }
        assert_ne!(r.one_e(), r.zero_e());
    }

    #[test]
    fn ring_axioms_hold_exhaustively() {
        for r in [
            FiniteRing::integers_mod(12).unwrap(),
            FiniteRing::truncated(3, 2).unwrap(),
            FiniteRing::truncated(2, 3).unwrap(),
            FiniteRing::product(&[
                Factor {
                    modulus: 4,
                    nil_degree: 1,
                },
                Factor {
                    modulus: 3,
                    nil_degree: 1,
                },
            ])
            .unwrap(),
        ] {
            check_axioms(&r);
        }
    }

    #[test]
    fn labels_are_canonical() {
        let r = FiniteRing::truncated(3, 2).unwrap();
        let labels: Vec<&str> = r.elements().map(|e| r.label(e)).collect();
        assert_eq!(labels[..4], ["0", "1", "2", "u"]);
        assert_eq!(r.label(Elem(5)), "2+u");
        let p = FiniteRing::product(&[
            Factor {
                modulus: 2,
                nil_degree: 1,
            },
            Factor {
                modulus: 3,
                nil_degree: 1,
            },
        ])
        .unwrap();
        assert_eq!(p.label(p.one_e()), "(1,1)");
        assert_eq!(p.parse_elem("(1,2)").unwrap(), Elem(5));
        assert_eq!(p.parse_elem("-1").unwrap(), Elem(5));
    }

    #[test]
    fn quotient_keeps_smallest_representatives() {
        let r = FiniteRing::integers_mod(12).unwrap();
        let members: Vec<bool> = (0..12).map(|i| i % 3 == 0).collect();
        let (q, proj) = r.quotient(&members, "3");
        assert_eq!(q.size(), 3);
        assert_eq!(q.label(proj[11]), "2");
        check_axioms(&q);
    }

    #[test]
    fn too_large_rings_are_rejected() {
        assert!(matches!(
            FiniteRing::integers_mod(5000),
            Err(RingError::TooLarge(_))
        ));
        assert_eq!(FiniteRing::integers_mod(1), Err(RingError::ZeroRing));
    }

    #[test]
    fn local_factors_split_by_crt() {
        let r = FiniteRing::integers_mod(12).unwrap();
        let fs = r.local_factors().unwrap();
        assert_eq!(
            fs.iter().map(|f| f.modulus).collect::<Vec<_>>(),
            vec![4, 3]
        );
    }
}
