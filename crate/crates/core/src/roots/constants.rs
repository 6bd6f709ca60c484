use serde::Serialize;

use super::system::{RootId, RootSystem};

/// One factor `x_{iα+jβ}(c·a^i b^j)` of a Chevalley commutator.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct CommTerm {
    pub i: u8,
    pub j: u8,
    pub root: RootId,
    pub coeff: i32,
}

/// Signed structure constants of a Chevalley basis and the derived group
/// commutator constants.
///
/// Signs follow the extraspecial-pair convention: for each positive root
/// `ζ`, the pair `(α, ζ-α)` with `α` minimal in root order gets `N = p+1 > 0`.
/// The commutator `[x_α(a), x_β(b)] = x_α(a)x_β(b)x_α(-a)x_β(-b)` equals the
/// ordered product of `x_{iα+jβ}(c_{ij} a^i b^j)` with factors sorted by
/// `(i+j, i)`.
#[derive(Clone, Debug)]
pub struct ChevalleyConstants {
    n: usize,
    pair: Vec<i32>,
    comm: Vec<Vec<CommTerm>>,
}

fn exact_div(num: i64, den: i64) -> i64 {
    assert!(den != 0 && num % den == 0, "inexact structure constant {num}/{den}");
    num / den
}

impl ChevalleyConstants {
    pub fn build(phi: &RootSystem) -> Self {
        let n = phi.len();
        let mut consts = ChevalleyConstants {
            n,
            pair: vec![0; n * n],
            comm: vec![Vec::new(); n * n],
        };
        consts.fill_positive(phi);
        for a in phi.ids() {
            for b in phi.ids() {
                if phi.add(a, b).is_some() && consts.get(a, b) == 0 {
                    let v = consts.derive(phi, a, b);
                    consts.set(a, b, v);
                }
            }
        }
        consts.fill_commutators(phi);
        consts
    }

    fn set(&mut self, a: RootId, b: RootId, v: i32) {
        self.pair[a.index() * self.n + b.index()] = v;
    }

    fn get(&self, a: RootId, b: RootId) -> i32 {
        self.pair[a.index() * self.n + b.index()]
    }

    /// Positive pairs, processed by increasing height of the sum.
    fn fill_positive(&mut self, phi: &RootSystem) {
        for zeta in phi.positive_ids() {
            let pairs: Vec<(RootId, RootId)> = phi
                .positive_ids()
                .filter_map(|x| {
                    let y = phi.combination(1, zeta, -1, x)?;
                    (phi.is_positive(y) && x < y).then_some((x, y))
                })
                .collect();
            let Some(&(alpha, beta)) = pairs.first() else {
                continue;
            };
            let (p, _) = phi.root_chain(alpha, beta).expect("distinct roots");
            self.set(alpha, beta, p + 1);
            self.set(beta, alpha, -(p + 1));
            for &(xi, eta) in &pairs[1..] {
                let v = self.via_extraspecial(phi, zeta, alpha, beta, xi, eta);
                self.set(xi, eta, v);
                self.set(eta, xi, -v);
            }
        }
    }

    /// `N_{ξη}` from the four-root relation for `α + β - ξ - η = 0`.
    fn via_extraspecial(
        &self,
        phi: &RootSystem,
        zeta: RootId,
        alpha: RootId,
        beta: RootId,
        xi: RootId,
        eta: RootId,
    ) -> i32 {
        let (mxi, meta) = (phi.neg(xi), phi.neg(eta));
        // Σ num_k / den_k with den_k = (root, root)
        let mut terms: Vec<(i64, i64)> = Vec::new();
        if let Some(r) = phi.add(beta, mxi) {
            let num = self.derive(phi, beta, mxi) as i64 * self.derive(phi, alpha, meta) as i64;
            terms.push((num, phi.norm(r) as i64));
        }
        if let Some(r) = phi.add(alpha, mxi) {
            let num = self.derive(phi, mxi, alpha) as i64 * self.derive(phi, beta, meta) as i64;
            terms.push((num, phi.norm(r) as i64));
        }
        let den: i64 = terms.iter().map(|t| t.1).product();
        let num: i64 = terms.iter().map(|&(nu, d)| nu * (den / d)).sum();
        let n_ab = self.get(alpha, beta) as i64;
        exact_div(phi.norm(zeta) as i64 * num, n_ab * den) as i32
    }

    /// `N_{ξη}` for an arbitrary pair, reducing to positive pairs of smaller
    /// height. Returns 0 when `ξ + η` is not a root.
    fn derive(&self, phi: &RootSystem, xi: RootId, eta: RootId) -> i32 {
        let Some(rho) = phi.add(xi, eta) else {
            return 0;
        };
        let stored = self.get(xi, eta);
        if stored != 0 {
            return stored;
        }
        match (phi.is_positive(xi), phi.is_positive(eta)) {
            (true, true) => panic!("positive pair {xi:?},{eta:?} requested before it was fixed"),
            (false, false) => -self.derive(phi, phi.neg(xi), phi.neg(eta)),
            (false, true) => -self.derive(phi, eta, xi),
            (true, false) => {
                let (rr, xx, ee) = (
                    phi.norm(rho) as i64,
                    phi.norm(xi) as i64,
                    phi.norm(eta) as i64,
                );
                if phi.is_positive(rho) {
                    let inner = self.derive(phi, phi.neg(eta), rho) as i64;
                    exact_div(-rr * inner, xx) as i32
                } else {
                    let inner = self.derive(phi, phi.neg(rho), xi) as i64;
                    exact_div(rr * inner, ee) as i32
                }
            }
        }
    }

    fn fill_commutators(&mut self, phi: &RootSystem) {
        let simply_laced = phi.ids().all(|r| phi.is_long(r));
        let action = AdjointAction::new(phi, self);
        let mut table = vec![Vec::new(); self.n * self.n];
        for a in phi.ids() {
            for b in phi.ids() {
                if a == b || a == phi.neg(b) {
                    continue;
                }
                let mut keys: Vec<(u8, u8, RootId)> = Vec::new();
                for i in 1..=3 {
                    for j in 1..=3 {
                        if let Some(r) = phi.combination(i, a, j, b) {
                            keys.push((i as u8, j as u8, r));
                        }
                    }
                }
                keys.sort_by_key(|&(i, j, _)| (i + j, i));
                let terms = if keys.is_empty() {
                    Vec::new()
                } else if keys.len() == 1 || simply_laced {
                    let (i, j, root) = keys[0];
                    vec![CommTerm {
                        i,
                        j,
                        root,
                        coeff: self.get(a, b),
                    }]
                } else {
                    action.peel_commutator(a, b, &keys)
                };
                table[a.index() * self.n + b.index()] = terms;
            }
        }
        self.comm = table;
    }

    /// `N_{αβ}` (0 if `α + β` is not a root).
    pub fn n(&self, a: RootId, b: RootId) -> i32 {
        self.get(a, b)
    }

    /// Factors of `[x_α(a), x_β(b)]` in product order; empty if the roots
    /// commute, and empty for `α = ±β` (callers handle that case).
    pub fn commutator(&self, a: RootId, b: RootId) -> &[CommTerm] {
        &self.comm[a.index() * self.n + b.index()]
    }

    /// Largest `i` over all commutator terms.
    pub fn max_i(&self) -> u8 {
        self.comm
            .iter()
            .flatten()
            .map(|t| t.i)
            .max()
            .unwrap_or(1)
    }
}

/// The adjoint action of root elements on the Chevalley lattice, with basis
/// `e_γ` for every root followed by the simple coroots `h_i`.
pub(crate) struct AdjointAction<'a> {
    phi: &'a RootSystem,
    consts: &'a ChevalleyConstants,
}

impl<'a> AdjointAction<'a> {
    pub(crate) fn new(phi: &'a RootSystem, consts: &'a ChevalleyConstants) -> Self {
        AdjointAction { phi, consts }
    }

    pub(crate) fn dim(&self) -> usize {
        self.phi.len() + self.phi.rank()
    }

    /// Coordinates of `h_α` in the simple coroot basis.
    pub(crate) fn coroot(&self, alpha: RootId) -> Vec<i32> {
        let phi = self.phi;
        let na = phi.norm(alpha);
        phi.root(alpha)
            .coords
            .iter()
            .enumerate()
            .map(|(i, &c)| exact_div((c * phi.simple_norm(i)) as i64, na as i64) as i32)
            .collect()
    }

    /// `<α, α_i^∨>`.
    pub(crate) fn pairing(&self, alpha: RootId, i: usize) -> i32 {
        let phi = self.phi;
        let simple = phi.simple(i);
        2 * phi.inner(alpha, simple) / phi.simple_norm(i)
    }

    /// Sparse image `ad(e_α)(basis vector k)` as `(index, coefficient)`.
    pub(crate) fn ad_basis(&self, alpha: RootId, k: usize) -> Vec<(usize, i32)> {
        let phi = self.phi;
        let n = phi.len();
        if k < n {
            let beta = RootId(k as u16);
            if beta == phi.neg(alpha) {
                return self
                    .coroot(alpha)
                    .into_iter()
                    .enumerate()
                    .filter(|&(_, c)| c != 0)
                    .map(|(i, c)| (n + i, c))
                    .collect();
            }
            match phi.add(alpha, beta) {
                Some(r) => vec![(r.index(), self.consts.n(alpha, beta))],
                None => Vec::new(),
            }
        } else {
            let c = -self.pairing(alpha, k - n);
            if c == 0 {
                Vec::new()
            } else {
                vec![(alpha.index(), c)]
            }
        }
    }

    pub(crate) fn ad(&self, alpha: RootId, v: &[i128]) -> Vec<i128> {
        let mut out = vec![0i128; v.len()];
        for (k, &x) in v.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (idx, c) in self.ad_basis(alpha, k) {
                out[idx] += x * c as i128;
            }
        }
        out
    }

    /// `x_α(t) v = Σ t^k ad(e_α)^k v / k!`.
    pub(crate) fn exp(&self, alpha: RootId, t: i128, v: &[i128]) -> Vec<i128> {
        let mut out = v.to_vec();
        let mut term = v.to_vec();
        let mut k = 1;
        loop {
            term = self.ad(alpha, &term);
            if term.iter().all(|&x| x == 0) {
                return out;
            }
            for x in term.iter_mut() {
                let num = *x * t;
                assert!(num % k == 0, "divided power leaves the lattice");
                *x = num / k;
            }
            for (o, x) in out.iter_mut().zip(&term) {
                *o += x;
            }
            k += 1;
        }
    }

    /// Reads off the commutator constants by peeling factors in product
    /// order from the action on suitable coroot vectors.
    fn peel_commutator(&self, a: RootId, b: RootId, keys: &[(u8, u8, RootId)]) -> Vec<CommTerm> {
        let n = self.phi.len();
        let commutator = |v: &[i128]| {
            let v = self.exp(b, -1, v);
            let v = self.exp(a, -1, &v);
            let v = self.exp(b, 1, &v);
            self.exp(a, 1, &v)
        };
        let mut terms: Vec<CommTerm> = Vec::new();
        for &(i, j, root) in keys {
            let k = (0..self.phi.rank())
                .find(|&k| self.pairing(root, k) != 0)
                .expect("a root pairs nontrivially with some simple coroot");
            let mut v = vec![0i128; self.dim()];
            v[n + k] = 1;
            let mut w = commutator(&v);
            for t in &terms {
                w = self.exp(t.root, -(t.coeff as i128), &w);
            }
            let c = exact_div(w[root.index()] as i64, -self.pairing(root, k) as i64) as i32;
            if c != 0 {
                terms.push(CommTerm {
                    i,
                    j,
                    root,
                    coeff: c,
                });
            }
        }
        terms
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::CartanType;

    fn build(s: &str) -> (RootSystem, ChevalleyConstants) {
        let phi = RootSystem::build(s.parse::<CartanType>().unwrap()).unwrap();
        let c = ChevalleyConstants::build(&phi);
        (phi, c)
    }

    #[test]
    fn magnitudes_follow_chains_and_antisymmetry_holds() {
        for name in ["A2", "A4", "B2", "B3", "C3", "D4", "G2", "F4", "E6"] {
            let (phi, c) = build(name);
            for a in phi.ids() {
                for b in phi.ids() {
                    if a == b || a == phi.neg(b) {
                        continue;
                    }
                    if phi.add(a, b).is_some() {
                        let (p, _) = phi.root_chain(a, b).unwrap();
                        assert_eq!(c.n(a, b).abs(), p + 1, "{name}");
                        assert_eq!(c.n(a, b), -c.n(b, a));
                        assert_eq!(c.n(phi.neg(a), phi.neg(b)), -c.n(a, b));
                    } else {
                        assert_eq!(c.n(a, b), 0);
                    }
                }
            }
        }
    }

    /// The bracket defined by the constants must satisfy the Jacobi
    /// identity, checked as `ad[e_α, e_β] = [ad e_α, ad e_β]` on the lattice.
    #[test]
    fn adjoint_action_is_a_representation() {
        for name in ["A3", "B2", "C3", "G2", "F4", "D4"] {
            let (phi, c) = build(name);
            let act = AdjointAction::new(&phi, &c);
            let dim = act.dim();
            for a in phi.ids() {
                for b in phi.ids() {
                    let Some(r) = phi.add(a, b) else { continue };
                    for k in 0..dim {
                        let mut v = vec![0i128; dim];
                        v[k] = 1;
                        let lhs: Vec<i128> = act
                            .ad(r, &v)
                            .into_iter()
                            .map(|x| x * c.n(a, b) as i128)
                            .collect();
                        let ab = act.ad(a, &act.ad(b, &v));
                        let ba = act.ad(b, &act.ad(a, &v));
                        let rhs: Vec<i128> = ab.iter().zip(&ba).map(|(x, y)| x - y).collect();
                        assert_eq!(lhs, rhs, "{name} {a:?} {b:?} basis {k}");
                    }
                }
            }
        }
    }

    #[test]
    fn commutator_shapes_by_lacing() {
        let (a2, c) = build("A2");
        let t = c.commutator(a2.simple(0), a2.simple(1));
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].coeff, 1);
        let (g2, c) = build("G2");
        let longest = g2
            .ids()
            .flat_map(|a| g2.ids().map(move |b| (a, b)))
            .map(|(a, b)| c.commutator(a, b).len())
            .max()
            .unwrap();
        assert_eq!(longest, 4);
        assert!(g2
            .ids()
            .flat_map(|a| g2.ids().map(move |b| (a, b)))
            .any(|(a, b)| c.commutator(a, b).iter().any(|t| t.coeff.abs() == 3)));
        assert_eq!(c.max_i() as i32, g2.i_phi());
        let (b2, c) = build("B2");
        assert_eq!(c.max_i() as i32, b2.i_phi());
    }
}
