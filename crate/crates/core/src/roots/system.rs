use std::fmt;
use std::str::FromStr;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use super::RootError;

/// Cartan–Killing type with rank.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum CartanType {
    A(usize),
    B(usize),
    C(usize),
    D(usize),
    E(usize),
    F4,
    G2,
}

impl CartanType {
    pub fn rank(&self) -> usize {
        match *self {
            CartanType::A(l) | CartanType::B(l) | CartanType::C(l) | CartanType::D(l) | CartanType::E(l) => l,
            CartanType::F4 => 4,
            CartanType::G2 => 2,
        }
    }

    fn validate(&self) -> Result<(), RootError> {
        let ok = match *self {
            CartanType::A(l) => l >= 2,
            CartanType::B(l) | CartanType::C(l) => l >= 2,
            CartanType::D(l) => l >= 4,
            CartanType::E(l) => (6..=8).contains(&l),
            CartanType::F4 | CartanType::G2 => true,
        };
        if ok {
            Ok(())
        } else {
            Err(RootError::UnsupportedRank(self.to_string()))
        }
    }

    /// Squared lengths of the simple roots and the Dynkin diagram edges.
    fn diagram(&self) -> (Vec<i32>, Vec<(usize, usize)>) {
        let chain = |l: usize| (0..l - 1).map(|i| (i, i + 1)).collect::<Vec<_>>();
        match *self {
            CartanType::A(l) => (vec![2; l], chain(l)),
            CartanType::B(l) => {
                let mut d = vec![4; l];
                d[l - 1] = 2;
                (d, chain(l))
            }
            CartanType::C(l) => {
                let mut d = vec![2; l];
                d[l - 1] = 4;
                (d, chain(l))
            }
            CartanType::D(l) => {
                let mut edges = chain(l - 1);
                edges.push((l - 3, l - 1));
                (vec![2; l], edges)
            }
            CartanType::E(l) => {
                // Bourbaki labelling: 1-3-4-5-6-7-8 with 2 attached to 4
                let mut edges = vec![(0, 2), (2, 3), (1, 3)];
                edges.extend((3..l - 1).map(|i| (i, i + 1)));
                (vec![2; l], edges)
            }
            CartanType::F4 => (vec![4, 4, 2, 2], chain(4)),
            CartanType::G2 => (vec![2, 6], chain(2)),
        }
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CartanType::A(l) => write!(f, "A{l}"),
            CartanType::B(l) => write!(f, "B{l}"),
            CartanType::C(l) => write!(f, "C{l}"),
            CartanType::D(l) => write!(f, "D{l}"),
            CartanType::E(l) => write!(f, "E{l}"),
            CartanType::F4 => write!(f, "F4"),
            CartanType::G2 => write!(f, "G2"),
        }
    }
}

impl FromStr for CartanType {
    type Err = RootError;

    fn from_str(s: &str) -> Result<Self, RootError> {
        let s = s.trim();
        let bad = || RootError::UnknownType(s.to_string());
        let mut chars = s.chars();
        let letter = chars.next().ok_or_else(bad)?.to_ascii_uppercase();
        let rank: usize = chars.as_str().trim_start_matches('_').parse().map_err(|_| bad())?;
        let ty = match (letter, rank) {
            ('A', l) => CartanType::A(l),
            ('B', l) => CartanType::B(l),
            ('C', l) => CartanType::C(l),
            ('D', l) => CartanType::D(l),
            ('E', l) => CartanType::E(l),
            ('F', 4) => CartanType::F4,
            ('G', 2) => CartanType::G2,
            ('F', _) | ('G', _) => return Err(RootError::UnsupportedRank(s.to_string())),
            _ => return Err(bad()),
        };
        Ok(ty)
    }
}

/// Index of a root in its [`RootSystem`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct RootId(pub u16);

impl RootId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LengthClass {
    Short,
    Long,
}

/// A root: coordinates in the simple-root basis and its length class.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Root {
    pub coords: Vec<i32>,
    pub length: LengthClass,
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(i32::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// A reduced irreducible root system of rank at least two.
///
/// Roots are stored positive first, ordered by height and then by
/// decreasing lexicographic order of coordinates (so `α_1` comes first), followed by the negatives in the same
/// order, so `-roots[i] == roots[(i + n) mod 2n]` for `n` positive roots.
#[derive(Clone, Debug)]
pub struct RootSystem {
    ty: CartanType,
    gram: Vec<Vec<i32>>,
    cartan: Vec<Vec<i32>>,
    roots: Vec<Root>,
    norms: Vec<i32>,
    npos: usize,
    index: FxHashMap<Vec<i32>, RootId>,
}

impl RootSystem {
    pub fn build(ty: CartanType) -> Result<Self, RootError> {
        ty.validate()?;
        let l = ty.rank();
        let (d, edges) = ty.diagram();
        let mut gram = vec![vec![0i32; l]; l];
        for i in 0..l {
            gram[i][i] = d[i];
        }
        for &(i, j) in &edges {
            let v = -d[i].max(d[j]) / 2;
            gram[i][j] = v;
            gram[j][i] = v;
        }
        // a_ij = <α_i, α_j^∨>
        let cartan: Vec<Vec<i32>> = (0..l)
            .map(|i| (0..l).map(|j| 2 * gram[i][j] / gram[j][j]).collect())
            .collect();

        let mut positive: Vec<Vec<i32>> = (0..l)
            .map(|i| {
                let mut v = vec![0; l];
                v[i] = 1;
                v
            })
            .collect();
        let mut known: FxHashMap<Vec<i32>, ()> = positive.iter().map(|v| (v.clone(), ())).collect();
        let mut cursor = 0;
        while cursor < positive.len() {
            let beta = positive[cursor].clone();
            cursor += 1;
            for i in 0..l {
                // p: how far the α_i-string extends downwards from β
                let mut p = 0;
                let mut down = beta.clone();
                loop {
                    down[i] -= 1;
                    if known.contains_key(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                let pairing: i32 = (0..l).map(|j| beta[j] * cartan[j][i]).sum();
                let q = p - pairing;
                if q > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if !known.contains_key(&up) {
                        known.insert(up.clone(), ());
                        positive.push(up);
                    }
                }
            }
        }
        positive.sort_by(|a, b| {
            let (ha, hb): (i32, i32) = (a.iter().sum(), b.iter().sum());
            ha.cmp(&hb).then_with(|| b.cmp(a))
        });
        let npos = positive.len();
        let all: Vec<Vec<i32>> = positive
            .iter()
            .cloned()
            .chain(positive.iter().map(|v| v.iter().map(|x| -x).collect()))
            .collect();
        let norm = |v: &[i32]| -> i32 {
            let mut s = 0;
            for i in 0..l {
                for j in 0..l {
                    s += v[i] * gram[i][j] * v[j];
                }
            }
            s
        };
        let norms: Vec<i32> = all.iter().map(|v| norm(v)).collect();
        let max_norm = *norms.iter().max().unwrap();
        let roots: Vec<Root> = all
            .iter()
            .zip(&norms)
            .map(|(v, &n)| Root {
                coords: v.clone(),
                length: if n == max_norm {
                    LengthClass::Long
                } else {
                    LengthClass::Short
                },
            })
            .collect();
        let index = all
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), RootId(i as u16)))
            .collect();
        let system = RootSystem {
            ty,
            gram,
            cartan,
            roots,
            norms,
            npos,
            index,
        };
        system.check_counts()?;
        Ok(system)
    }

    fn check_counts(&self) -> Result<(), RootError> {
        let expected = match self.ty {
            CartanType::A(l) => l * (l + 1),
            CartanType::B(l) | CartanType::C(l) => 2 * l * l,
            CartanType::D(l) => 2 * l * (l - 1),
            CartanType::E(6) => 72,
            CartanType::E(7) => 126,
            CartanType::E(_) => 240,
            CartanType::F4 => 48,
            CartanType::G2 => 12,
        };
        assert_eq!(self.roots.len(), expected, "root count for {}", self.ty);
        Ok(())
    }

    pub fn cartan_type(&self) -> CartanType {
        self.ty
    }

    pub fn rank(&self) -> usize {
        self.ty.rank()
    }

    pub fn name(&self) -> String {
        self.ty.to_string()
    }

    pub fn cartan_matrix(&self) -> &[Vec<i32>] {
        &self.cartan
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn num_positive(&self) -> usize {
        self.npos
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn ids(&self) -> impl Iterator<Item = RootId> {
        (0..self.roots.len() as u16).map(RootId)
    }

    pub fn positive_ids(&self) -> impl Iterator<Item = RootId> {
        (0..self.npos as u16).map(RootId)
    }

    pub fn simple(&self, i: usize) -> RootId {
        let mut v = vec![0; self.rank()];
        v[i] = 1;
        self.index[&v]
    }

    pub fn root(&self, id: RootId) -> &Root {
        &self.roots[id.index()]
    }

    pub fn id_of(&self, coords: &[i32]) -> Option<RootId> {
        self.index.get(coords).copied()
    }

    pub fn is_positive(&self, id: RootId) -> bool {
        id.index() < self.npos
    }

    pub fn height(&self, id: RootId) -> i32 {
        self.roots[id.index()].coords.iter().sum()
    }

    pub fn neg(&self, id: RootId) -> RootId {
        RootId(((id.index() + self.npos) % (2 * self.npos)) as u16)
    }

    pub fn is_long(&self, id: RootId) -> bool {
        self.roots[id.index()].length == LengthClass::Long
    }

    /// `(α, α)` with simple short roots of squared length 2.
    pub fn norm(&self, id: RootId) -> i32 {
        self.norms[id.index()]
    }

    pub fn inner(&self, a: RootId, b: RootId) -> i32 {
        self.inner_coords(&self.roots[a.index()].coords, &self.roots[b.index()].coords)
    }

    pub fn inner_coords(&self, u: &[i32], v: &[i32]) -> i32 {
        u.iter()
            .zip(&self.gram)
            .filter(|(&ui, _)| ui != 0)
            .map(|(&ui, row)| ui * row.iter().zip(v).map(|(g, &vj)| g * vj).sum::<i32>())
            .sum()
    }

    /// Squared length of a simple root.
    pub fn simple_norm(&self, i: usize) -> i32 {
        self.gram[i][i]
    }

    /// `iα + jβ` if it is a root.
    pub fn combination(&self, i: i32, a: RootId, j: i32, b: RootId) -> Option<RootId> {
        let ca = &self.roots[a.index()].coords;
        let cb = &self.roots[b.index()].coords;
        let v: Vec<i32> = ca.iter().zip(cb).map(|(x, y)| i * x + j * y).collect();
        self.id_of(&v)
    }

    pub fn add(&self, a: RootId, b: RootId) -> Option<RootId> {
        self.combination(1, a, 1, b)
    }

    /// `(p, q)`: the `α`-string through `β` is `β - pα, ..., β + qα`.
    pub fn root_chain(&self, alpha: RootId, beta: RootId) -> Result<(i32, i32), RootError> {
        if alpha == beta || alpha == self.neg(beta) {
            return Err(RootError::OppositeOrEqual);
        }
        let mut p = 0;
        while self.combination(-(p + 1), alpha, 1, beta).is_some() {
            p += 1;
        }
        let mut q = 0;
        while self.combination(q + 1, alpha, 1, beta).is_some() {
            q += 1;
        }
        Ok((p, q))
    }

    /// Largest `i` with `iα + jβ` a root for some roots `α ≠ ±β` and `j ≥ 1`.
    pub fn i_phi(&self) -> i32 {
        let mut best = 1;
        for a in self.ids() {
            for b in self.ids() {
                if a == b || a == self.neg(b) {
                    continue;
                }
                let mut i = 2;
                while self.combination(i, a, 1, b).is_some() {
                    best = best.max(i);
                    i += 1;
                }
            }
        }
        best
    }

    /// Writes `-α = γ + δ`, preferring summands of equal length and then the
    /// smallest `γ` in root order.
    pub fn decompose_opposite(&self, alpha: RootId) -> (RootId, RootId) {
        let target = self.neg(alpha);
        let mut best: Option<(bool, RootId, RootId)> = None;
        for g in self.ids() {
            let Some(d) = self.combination(1, target, -1, g) else {
                continue;
            };
            if d == g || d == self.neg(g) {
                continue;
            }
            let unequal = self.is_long(g) != self.is_long(d);
            let candidate = (unequal, g, d);
            if best.is_none_or(|b| (candidate.0, candidate.1) < (b.0, b.1)) {
                best = Some(candidate);
            }
        }
        let (_, g, d) = best.expect("rank at least two");
        (g, d)
    }

    pub fn format_root(&self, id: RootId) -> String {
        self.roots[id.index()].to_string()
    }

    /// Parses `[1,0]` or `1,0`.
    pub fn parse_root(&self, text: &str) -> Result<RootId, RootError> {
        let inner = text.trim().trim_start_matches('[').trim_end_matches(']');
        let coords: Vec<i32> = inner
            .split(',')
            .map(|c| c.trim().parse::<i32>())
            .collect::<Result<_, _>>()
            .map_err(|_| RootError::NotARoot(text.to_string()))?;
        self.id_of(&coords)
            .ok_or_else(|| RootError::NotARoot(text.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(s: &str) -> RootSystem {
        RootSystem::build(s.parse().unwrap()).unwrap()
    }

    #[test]
    fn counts_and_lengths() {
        let a2 = build("A2");
        assert_eq!(a2.len(), 6);
        assert!(a2.ids().all(|r| a2.is_long(r)));
        let g2 = build("G2");
        assert_eq!(g2.len(), 12);
        assert_eq!(g2.ids().filter(|&r| g2.is_long(r)).count(), 6);
        let b2 = build("B2");
        assert_eq!(b2.ids().filter(|&r| !b2.is_long(r)).count(), 4);
        for (name, n) in [("B3", 18), ("C3", 18), ("D4", 24), ("E6", 72), ("E7", 126), ("E8", 240), ("F4", 48)] {
            assert_eq!(build(name).len(), n, "{name}");
        }
    }

    #[test]
    fn rank_one_is_rejected() {
        assert!(matches!(
            RootSystem::build(CartanType::A(1)),
            Err(RootError::UnsupportedRank(_))
        ));
        assert!(matches!(
            RootSystem::build(CartanType::D(3)),
            Err(RootError::UnsupportedRank(_))
        ));
        assert!("X3".parse::<CartanType>().is_err());
    }

    #[test]
    fn negation_and_reducedness() {
        for name in ["A3", "B3", "C3", "G2", "F4"] {
            let phi = build(name);
            for r in phi.ids() {
                let c = &phi.root(r).coords;
                let neg: Vec<i32> = c.iter().map(|x| -x).collect();
                assert_eq!(phi.id_of(&neg), Some(phi.neg(r)));
                let double: Vec<i32> = c.iter().map(|x| 2 * x).collect();
                assert!(phi.id_of(&double).is_none());
                assert!(c.iter().all(|&x| x >= 0) || c.iter().all(|&x| x <= 0));
            }
        }
    }

    #[test]
    fn lacing_constants() {
        assert_eq!(build("A3").i_phi(), 1);
        assert_eq!(build("B2").i_phi(), 2);
        assert_eq!(build("C3").i_phi(), 2);
        assert_eq!(build("F4").i_phi(), 2);
        assert_eq!(build("G2").i_phi(), 3);
    }

    #[test]
    fn chains() {
        let a2 = build("A2");
        assert_eq!(a2.root_chain(a2.simple(0), a2.simple(1)).unwrap(), (0, 1));
        let g2 = build("G2");
        assert_eq!(g2.root_chain(g2.simple(0), g2.simple(1)).unwrap(), (0, 3));
        let b2 = build("B2");
        // in B2 the second simple root is short
        assert_eq!(b2.root_chain(b2.simple(1), b2.simple(0)).unwrap(), (0, 2));
        assert!(matches!(
            a2.root_chain(a2.simple(0), a2.neg(a2.simple(0))),
            Err(RootError::OppositeOrEqual)
        ));
    }

    #[test]
    fn opposite_decompositions() {
        for name in ["A2", "A3", "B2", "C3", "G2", "F4", "D4"] {
            let phi = build(name);
            for a in phi.ids() {
                let (g, d) = phi.decompose_opposite(a);
                assert_eq!(phi.add(g, d), Some(phi.neg(a)));
            }
        }
        let a2 = build("A2");
        let (g, d) = a2.decompose_opposite(a2.simple(0));
        // -a = (-a-b) + b
        assert_eq!(a2.format_root(g), "[0,1]");
        assert_eq!(a2.format_root(d), "[-1,-1]");
        let b2 = build("B2");
        for a in b2.ids().filter(|&a| b2.is_long(a)) {
            let (g, d) = b2.decompose_opposite(a);
            assert!(!b2.is_long(g) && !b2.is_long(d));
        }
    }

    #[test]
    fn roots_round_trip_through_text() {
        let g2 = build("G2");
        for r in g2.ids() {
            assert_eq!(g2.parse_root(&g2.format_root(r)).unwrap(), r);
        }
    }
}
