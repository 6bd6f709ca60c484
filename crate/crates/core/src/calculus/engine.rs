//! Level-agnostic word rewriting over a Laurent polynomial ring.
//!
//! The engine never looks at levels or markers; callers validate the output.

use std::sync::Arc;

use crate::chevalley::{chevalley_commutator, Gen, Word};
use crate::ring::{LPoly, Monomial, PolyRing, Ring};
use crate::roots::{RootData, RootId};

/// How a single root element `x_ρ(P)` is written through two roots `γ, δ`
/// that are neither equal nor opposite to each other (nor to `-ρ`).
///
/// `i0·γ + j0·δ = ρ` and the term `(i0, j0)` of `[x_γ(u), x_δ(v)]` has
/// coefficient `coeff = ±1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Recipe {
    pub gamma: RootId,
    pub delta: RootId,
    pub i0: u8,
    pub j0: u8,
    pub coeff: i32,
}

impl Recipe {
    /// The piece carrying the original parameter is `v` unless `j0 > 1`.
    fn rest_in_v(&self) -> bool {
        self.j0 == 1
    }
}

pub struct Engine {
    data: Arc<RootData>,
    ring: Arc<PolyRing>,
    s: Option<usize>,
    t: Option<usize>,
    recipes: Vec<Recipe>,
}

type W = Word<LPoly>;

impl Engine {
    pub fn new(data: Arc<RootData>, ring: Arc<PolyRing>) -> Self {
        let s = ring.var_index("s");
        let t = ring.var_index("t");
        let recipes = data
            .phi
            .ids()
            .map(|rho| choose_recipe(&data, rho))
            .collect();
        Engine {
            data,
            ring,
            s,
            t,
            recipes,
        }
    }

    pub fn data(&self) -> &Arc<RootData> {
        &self.data
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    /// The recipe used to expand `x_ρ(·)`.
    pub fn recipe(&self, rho: RootId) -> Recipe {
        self.recipes[rho.index()]
    }

    /// Largest `i0 + j0` over the recipes in use.
    pub fn max_recipe_weight(&self) -> u8 {
        self.recipes.iter().map(|r| r.i0 + r.j0).max().unwrap_or(2)
    }

    /// Merges each factor into the nearest earlier factor on the same root
    /// when every factor in between commutes with it, dropping zeros.
    pub fn reduce(&self, w: &W) -> W {
        let ring = &*self.ring;
        let mut out: Vec<Gen<LPoly>> = Vec::with_capacity(w.len());
        for g in &w.factors {
            if g.param.is_zero() {
                continue;
            }
            let mut merged = false;
            for idx in (0..out.len()).rev() {
                let f = &out[idx];
                if f.root == g.root {
                    let sum = ring.add(&f.param, &g.param);
                    if sum.is_zero() {
                        out.remove(idx);
                    } else {
                        out[idx].param = sum;
                    }
                    merged = true;
                    break;
                }
                if !self.commute(f.root, g.root) {
                    break;
                }
            }
            if !merged {
                out.push(g.clone());
            }
        }
        Word {
            factors: out,
            declared_level: w.declared_level.clone(),
        }
    }

    fn commute(&self, a: RootId, b: RootId) -> bool {
        !self.opposite(a, b) && self.data.consts.commutator(a, b).is_empty()
    }

    fn opposite(&self, a: RootId, b: RootId) -> bool {
        self.data.phi.neg(a) == b
    }

    /// The two parameters of the recipe for `x_ρ(p)`: the monomial piece
    /// takes `⌊E/(k+1)⌋` of each of the `s` and `t` exponents, where `k` is
    /// the power it is raised to, and the other piece keeps the rest.
    fn split(&self, r: &Recipe, p: &LPoly) -> (LPoly, LPoly) {
        let ring = &*self.ring;
        let k = if r.rest_in_v() { r.i0 } else { r.j0 } as i16;
        let mut mono = Monomial::one();
        for idx in [self.s, self.t].into_iter().flatten() {
            let e = p.min_exponent(idx).unwrap_or(0);
            mono.0[idx] = e.div_euclid(k + 1);
        }
        let mut inv = Monomial::one();
        for (o, e) in inv.0.iter_mut().zip(mono.0) {
            *o = -e * k;
        }
        let rest = ring.scale(&p.shift(&inv), r.coeff as i128);
        let mono = ring.monomial(mono, 1);
        if r.rest_in_v() {
            (mono, rest)
        } else {
            (rest, mono)
        }
    }

    /// `x_ρ(p)` as a word on roots different from `±ρ`:
    /// `prefix⁻¹ · [x_γ(u), x_δ(v)] · suffix⁻¹`.
    pub fn expand(&self, rho: RootId, p: &LPoly) -> W {
        let ring = &*self.ring;
        let r = self.recipe(rho);
        let (u, v) = self.split(&r, p);
        let comm = chevalley_commutator(&self.data, ring, r.gamma, r.delta, &u, &v).expect("recipe roots are not opposite");
        let idx = comm
            .factors
            .iter()
            .position(|g| g.root == rho)
            .expect("recipe term is present");
        debug_assert_eq!(comm.factors[idx].param, *p);
        let prefix = Word::new(comm.factors[..idx].to_vec());
        let suffix = Word::new(comm.factors[idx + 1..].to_vec());
        let core = Word::new(vec![
            Gen::new(r.gamma, u.clone()),
            Gen::new(r.delta, v.clone()),
            Gen::new(r.gamma, ring.neg(&u)),
            Gen::new(r.delta, ring.neg(&v)),
        ]);
        prefix.inverse(ring).concat(&core).concat(&suffix.inverse(ring))
    }

    /// The two-piece relative form of [`Engine::expand`]: the parameter
    /// `p` stays inside the pieces `(conjugator, core)`, all of which are
    /// multiples of `p` except the conjugator monomials.
    pub fn expand_relative(&self, rho: RootId, p: &LPoly) -> Vec<(W, Gen<LPoly>)> {
        let ring = &*self.ring;
        let r = self.recipe(rho);
        let (u, v) = self.split(&r, p);
        let comm = chevalley_commutator(&self.data, ring, r.gamma, r.delta, &u, &v).expect("recipe roots are not opposite");
        let idx = comm.factors.iter().position(|g| g.root == rho).expect("recipe term is present");
        let mut out = Vec::new();
        for g in comm.factors[..idx].iter().rev() {
            out.push((W::default(), Gen::new(g.root, ring.neg(&g.param))));
        }
        if r.rest_in_v() {
            // [x_γ(u), x_δ(v)] = (x_γ(u) x_δ(v) x_γ(-u)) · x_δ(-v)
            out.push((W::single(r.gamma, u.clone()), Gen::new(r.delta, v.clone())));
            out.push((W::default(), Gen::new(r.delta, ring.neg(&v))));
        } else {
            // [x_γ(u), x_δ(v)] = x_γ(u) · (x_δ(v) x_γ(-u) x_δ(-v))
            out.push((W::default(), Gen::new(r.gamma, u.clone())));
            out.push((W::single(r.delta, v.clone()), Gen::new(r.gamma, ring.neg(&u))));
        }
        for g in comm.factors[idx + 1..].iter().rev() {
            out.push((W::default(), Gen::new(g.root, ring.neg(&g.param))));
        }
        out
    }

    /// `x y x⁻¹` for single generators.
    pub fn conj_gen(&self, x: &Gen<LPoly>, y: &Gen<LPoly>) -> W {
        let ring = &*self.ring;
        if y.param.is_zero() {
            return W::default();
        }
        if x.param.is_zero() || x.root == y.root {
            return W::new(vec![y.clone()]);
        }
        if self.opposite(x.root, y.root) {
            let mut out = W::default();
            for piece in &self.expand(y.root, &y.param).factors {
                out.extend(&self.conj_gen(x, piece));
            }
            return self.reduce(&out);
        }
        let mut w = chevalley_commutator(&self.data, ring, x.root, y.root, &x.param, &y.param).expect("not opposite");
        w.factors.push(y.clone());
        w
    }

    /// `x w x⁻¹`, factor by factor.
    pub fn conj_by_gen(&self, x: &Gen<LPoly>, w: &W) -> W {
        let mut out = W::default();
        for g in &w.factors {
            out.extend(&self.conj_gen(x, g));
        }
        self.reduce(&out)
    }

    /// `x w x⁻¹` for a word `x`, innermost factor first.
    pub fn conj_by_word(&self, x: &W, w: &W) -> W {
        let mut out = w.clone();
        for g in x.factors.iter().rev() {
            out = self.conj_by_gen(g, &out);
        }
        out
    }

    /// `[x, y] = x y x⁻¹ y⁻¹` for single generators.
    pub fn comm_gen(&self, x: &Gen<LPoly>, y: &Gen<LPoly>) -> W {
        let ring = &*self.ring;
        if x.param.is_zero() || y.param.is_zero() || x.root == y.root {
            return W::default();
        }
        if self.opposite(x.root, y.root) {
            let pieces = self.expand(y.root, &y.param);
            return self.comm_with_word(x, &pieces);
        }
        chevalley_commutator(&self.data, ring, x.root, y.root, &x.param, &y.param).expect("not opposite")
    }

    /// `[x, y_1 ⋯ y_K] = Π_i (y_1⋯y_{i-1}) [x, y_i] (y_1⋯y_{i-1})⁻¹`.
    pub fn comm_with_word(&self, x: &Gen<LPoly>, y: &W) -> W {
        let mut out = W::default();
        for (i, g) in y.factors.iter().enumerate() {
            let c = self.comm_gen(x, g);
            let prefix = W::new(y.factors[..i].to_vec());
            out.extend(&self.conj_by_word(&prefix, &c));
        }
        self.reduce(&out)
    }
}

/// Every recipe for `ρ` with a unit coefficient and one exponent equal to 1.
pub fn unit_recipes(data: &RootData, rho: RootId) -> Vec<Recipe> {
    let phi = &data.phi;
    let mut out = Vec::new();
    for gamma in phi.ids() {
        for delta in phi.ids() {
            if gamma == delta || gamma == phi.neg(delta) {
                continue;
            }
            if gamma == phi.neg(rho) || delta == phi.neg(rho) || gamma == rho || delta == rho {
                continue;
            }
            for t in data.consts.commutator(gamma, delta) {
                if t.root == rho && t.coeff.abs() == 1 && (t.i == 1 || t.j == 1) {
                    out.push(Recipe {
                        gamma,
                        delta,
                        i0: t.i,
                        j0: t.j,
                        coeff: t.coeff,
                    });
                }
            }
        }
    }
    out
}

/// The `decompose_opposite` pair when its constant is a unit, otherwise the
/// unit recipe with the fewest extra commutator factors (then the smallest
/// weight, then root order).
fn choose_recipe(data: &RootData, rho: RootId) -> Recipe {
    let phi = &data.phi;
    let (g, d) = phi.decompose_opposite(phi.neg(rho));
    let candidates = unit_recipes(data, rho);
    if let Some(r) = candidates.iter().find(|r| r.gamma == g && r.delta == d && r.i0 == 1 && r.j0 == 1) {
        return *r;
    }
    *candidates
        .iter()
        .min_by_key(|r| (data.consts.commutator(r.gamma, r.delta).len(), r.i0 + r.j0, r.gamma, r.delta))
        .expect("every root has a unit recipe in rank at least two")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevalley::Representation;

    fn setup(name: &str) -> (Engine, Representation) {
        let data = RootData::parse(name).unwrap();
        let rep = Representation::default_for(data.clone()).unwrap();
        (Engine::new(data, Arc::new(PolyRing::standard())), rep)
    }

    #[test]
    fn expansions_are_exact() {
        for name in ["A2", "B2", "C2", "G2", "A3"] {
            let (e, rep) = setup(name);
            let ring = e.ring().clone();
            let p = ring.parse("s^3*t^-1*a + 2*b").unwrap();
            for rho in e.data().phi.ids() {
                let w = e.expand(rho, &p);
                assert!(w.factors.iter().all(|g| g.root != rho && g.root != e.data().phi.neg(rho)));
                let lhs = rep.unipotent(&*ring, rho, &p);
                assert_eq!(w.evaluate(&rep, &*ring), lhs, "{name} {}", e.data().phi.format_root(rho));
                let mut rel = W::default();
                for (c, g) in e.expand_relative(rho, &p) {
                    rel.extend(&W::new(vec![g]).conjugate_by(&*ring, &c));
                }
                assert_eq!(rel.evaluate(&rep, &*ring), lhs);
            }
        }
    }

    #[test]
    fn opposite_conjugation_and_commutator_are_exact() {
        for name in ["A2", "B2", "G2"] {
            let (e, rep) = setup(name);
            let ring = e.ring().clone();
            let alpha = e.data().phi.simple(1);
            let x = Gen::new(alpha, ring.parse("a/s").unwrap());
            let y = Gen::new(e.data().phi.neg(alpha), ring.parse("s^4*t*b").unwrap());
            let lhs = W::new(vec![y.clone()]).conjugate_by(&*ring, &W::new(vec![x.clone()]));
            assert_eq!(e.conj_gen(&x, &y).evaluate(&rep, &*ring), lhs.evaluate(&rep, &*ring));
            let lhs = crate::chevalley::commutator_word(&*ring, &W::new(vec![x.clone()]), &W::new(vec![y.clone()]));
            assert_eq!(e.comm_gen(&x, &y).evaluate(&rep, &*ring), lhs.evaluate(&rep, &*ring));
        }
    }

    #[test]
    fn recipes_prefer_the_decomposition_when_possible() {
        let data = RootData::parse("A2").unwrap();
        let e = Engine::new(data.clone(), Arc::new(PolyRing::standard()));
        let rho = data.phi.neg(data.phi.simple(0));
        let (g, d) = data.phi.decompose_opposite(data.phi.simple(0));
        let r = e.recipe(rho);
        assert_eq!((r.gamma, r.delta, r.i0, r.j0), (g, d, 1, 1));
        assert_eq!(e.max_recipe_weight(), 2);
    }
}
