use std::sync::{Arc, Mutex};

use rustc_hash::FxHashMap;
use serde::Serialize;

use super::budget::{
    commutator_formula, conjugation_formula, search_pair, Case, ExponentBudget, Lemma, PlanInput,
};
use super::engine::Engine;
use super::CalculusError;
use crate::chevalley::{commutator_word, Gen, Level, Representation, Word};
use crate::ring::{LPoly, PolyRing, Ring};
use crate::roots::{CartanType, RootData, RootId};

/// Lacing class of a root system: the ratio of squared root lengths.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Lacing {
    Simply,
    Doubly,
    Triply,
}

impl Lacing {
    pub fn of(ty: CartanType) -> Self {
        match ty {
            CartanType::A(_) | CartanType::D(_) | CartanType::E(_) => Lacing::Simply,
            CartanType::B(_) | CartanType::C(_) | CartanType::F4 => Lacing::Doubly,
            CartanType::G2 => Lacing::Triply,
        }
    }

    /// Crude bound on the length of a single-generator commutator.
    pub fn commutator_bound(self) -> u64 {
        match self {
            Lacing::Simply => 585,
            Lacing::Doubly => 61_882,
            Lacing::Triply => 797_647_204,
        }
    }

    /// Length of a non-opposite conjugate `[x,y]·y`.
    pub fn conjugate_non_opposite_bound(self) -> u64 {
        match self {
            Lacing::Simply => 2,
            Lacing::Doubly => 3,
            Lacing::Triply => 5,
        }
    }

    /// Length of a non-opposite commutator.
    pub fn commutator_non_opposite_bound(self) -> u64 {
        match self {
            Lacing::Simply => 1,
            Lacing::Doubly => 2,
            Lacing::Triply => 4,
        }
    }
}

pub const CONJUGATE_BOUND: u64 = 24;
pub const COMMUTATOR_NON_OPPOSITE_BOUND: u64 = 4;

/// Sharper per-factor base for iterated conjugation: 8 for simply laced
/// systems and `F4`, 13 for the other systems without `G2`.
pub fn refined_conjugate_base(ty: CartanType) -> Option<u64> {
    match ty {
        CartanType::A(_) | CartanType::D(_) | CartanType::E(_) | CartanType::F4 => Some(8),
        CartanType::B(_) | CartanType::C(_) => Some(13),
        CartanType::G2 => None,
    }
}

/// The outcome of one rewrite, with the full output word.
#[derive(Clone, Debug, Serialize)]
pub struct RewriteCertificate {
    pub lemma: Lemma,
    pub system: String,
    pub case: Case,
    pub input_expression: String,
    pub budget: ExponentBudget,
    pub level: Level,
    pub length: usize,
    pub bound: u64,
    /// The sharper bound stated for this particular case, if any.
    pub case_bound: Option<u64>,
    pub refined_bound: Option<u64>,
    pub oracle_checked: bool,
    /// For relative outputs: the number of conjugated core factors.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cores: Option<usize>,
    /// For two-ideal commutators: whether every factor carries both markers.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub two_ideal_form: Option<bool>,
    pub output_word: Vec<String>,
    #[serde(skip)]
    pub word: Word<LPoly>,
}

impl RewriteCertificate {
    pub fn within_bound(&self) -> bool {
        (self.length as u64) <= self.bound
    }
}

type PlanKey = (Lemma, Case, PlanInput, Vec<String>);

/// A root system with its oracle representation and a planner cache.
pub struct Calculus {
    data: Arc<RootData>,
    rep: Representation,
    i_phi: u32,
    standard: Arc<PolyRing>,
    plans: Mutex<FxHashMap<PlanKey, ExponentBudget>>,
}

impl Calculus {
    pub fn new(system: &str) -> Result<Self, CalculusError> {
        Self::from_data(RootData::parse(system)?)
    }

    pub fn from_data(data: Arc<RootData>) -> Result<Self, CalculusError> {
        let rep = Representation::default_for(data.clone())?;
        let i_phi = data.phi.i_phi() as u32;
        Ok(Calculus {
            data,
            rep,
            i_phi,
            standard: Arc::new(PolyRing::standard()),
            plans: Mutex::new(FxHashMap::default()),
        })
    }

    pub fn data(&self) -> &Arc<RootData> {
        &self.data
    }

    pub fn system(&self) -> String {
        self.data.phi.name()
    }

    pub fn i_phi(&self) -> u32 {
        self.i_phi
    }

    pub fn lacing(&self) -> Lacing {
        Lacing::of(self.data.phi.cartan_type())
    }

    pub fn representation(&self) -> &Representation {
        &self.rep
    }

    /// `Z[s,t,a,b]` localised at `st`.
    pub fn standard_ring(&self) -> &Arc<PolyRing> {
        &self.standard
    }

    pub fn engine(&self, ring: &Arc<PolyRing>) -> Engine {
        Engine::new(self.data.clone(), ring.clone())
    }

    /// Exact matrix equality of two words over `ring`.
    pub fn oracle(&self, ring: &PolyRing, lhs: &Word<LPoly>, rhs: &Word<LPoly>) -> bool {
        lhs.evaluate(&self.rep, ring) == rhs.evaluate(&self.rep, ring)
    }

    pub(crate) fn cached<F>(&self, key: PlanKey, compute: F) -> Result<ExponentBudget, CalculusError>
    where
        F: FnOnce() -> Result<ExponentBudget, CalculusError>,
    {
        if let Some(b) = self.plans.lock().unwrap().get(&key) {
            return Ok(*b);
        }
        let b = compute()?;
        self.plans.lock().unwrap().insert(key, b);
        Ok(b)
    }

    /// Plans the input numerators for the single-generator lemmas.
    ///
    /// Non-opposite steps use the closed formulas. An opposite conjugation
    /// splits each parameter into `w` pieces, `w` the largest recipe weight,
    /// so the formula is scaled by `w`. An opposite commutator is planned
    /// by trial runs starting from the formula with `2·iΦ` in place of `iΦ`.
    pub fn plan(&self, lemma: Lemma, case: Case, input: &PlanInput) -> Result<ExponentBudget, CalculusError> {
        let mut b = ExponentBudget::from_input(input);
        match (lemma, case) {
            (Lemma::L3, Case::Opposite) => {
                let w = self.engine(&self.standard).max_recipe_weight() as u32;
                let (o, r) = conjugation_formula(self.i_phi, input);
                (b.o, b.r) = (w * o, w * r);
            }
            (Lemma::L3, _) => (b.o, b.r) = conjugation_formula(self.i_phi, input),
            (Lemma::L5, Case::Opposite) => {
                return self.cached((lemma, case, *input, Vec::new()), || {
                    let engine = self.engine(&self.standard);
                    let start = commutator_formula(2 * self.i_phi, input);
                    let (l, n) = search_pair(start, |l, n| self.opposite_commutators_pass(&engine, input, l, n))
                        .ok_or(CalculusError::SearchExhausted { lemma })?;
                    Ok(ExponentBudget {
                        l,
                        n,
                        searched: true,
                        ..b
                    })
                });
            }
            (Lemma::L5, _) => (b.l, b.n) = commutator_formula(self.i_phi, input),
            _ => return Err(CalculusError::Unplannable { lemma }),
        }
        Ok(b)
    }

    fn opposite_commutators_pass(&self, engine: &Engine, input: &PlanInput, l: u32, n: u32) -> bool {
        let ring = &self.standard;
        let phi = &self.data.phi;
        phi.ids().all(|alpha| {
            let (x, y) = commutator_pair(ring, alpha, phi.neg(alpha), input.k, input.m, l, n);
            let w = engine.comm_gen(&x, &y);
            at_level(ring, &w, input.p, input.q)
        })
    }

    fn case_of(&self, alpha: RootId, beta: RootId) -> Case {
        if alpha == beta {
            Case::SameRoot
        } else if self.data.phi.neg(alpha) == beta {
            Case::Opposite
        } else {
            Case::NonOpposite
        }
    }
}

pub(crate) fn at_level(ring: &PolyRing, w: &Word<LPoly>, p: u32, q: u32) -> bool {
    w.factors.iter().all(|g| ring.level_membership(&g.param, p, q))
}

fn exponent(ring: &PolyRing, x: &LPoly, var: &str) -> i32 {
    ring.var_index(var)
        .and_then(|i| x.min_exponent(i))
        .unwrap_or(0) as i32
}

fn neg_part(e: i32) -> u32 {
    (-e).max(0) as u32
}

fn pos_part(e: i32) -> u32 {
    e.max(0) as u32
}

fn describe_gen(calc: &Calculus, ring: &PolyRing, g: &Gen<LPoly>) -> String {
    format!("x{}({})", calc.data.phi.format_root(g.root), ring.format(&g.param))
}

fn lines(calc: &Calculus, ring: &PolyRing, w: &Word<LPoly>) -> Vec<String> {
    w.to_lines(&calc.data.phi, ring).lines().map(str::to_string).collect()
}

/// `x_α(t^l s^{-k} a)` and `x_β(s^n t^{-m} b)`.
pub(crate) fn commutator_pair(
    ring: &PolyRing,
    alpha: RootId,
    beta: RootId,
    k: u32,
    m: u32,
    l: u32,
    n: u32,
) -> (Gen<LPoly>, Gen<LPoly>) {
    let x = ring.term(1, &[("t", l as i16), ("s", -(k as i16)), ("a", 1)]);
    let y = ring.term(1, &[("s", n as i16), ("t", -(m as i16)), ("b", 1)]);
    (Gen::new(alpha, x), Gen::new(beta, y))
}

/// Rewrites `x y x⁻¹` at level `(p, q)`.
pub fn conjugate_single(
    calc: &Calculus,
    ring: &Arc<PolyRing>,
    x: &Gen<LPoly>,
    y: &Gen<LPoly>,
    p: u32,
    q: u32,
) -> Result<RewriteCertificate, CalculusError> {
    let engine = calc.engine(ring);
    let case = calc.case_of(x.root, y.root);
    let out = engine.conj_gen(x, y);
    let budget = ExponentBudget {
        p,
        q,
        h: neg_part(exponent(ring, &x.param, "s")),
        o: pos_part(exponent(ring, &y.param, "s")),
        r: pos_part(exponent(ring, &y.param, "t")),
        ..Default::default()
    };
    if !at_level(ring, &out, p, q) {
        return Err(CalculusError::InsufficientBudget {
            lemma: Lemma::L3,
            detail: format!("o = {}, r = {} for targets ({p}, {q})", budget.o, budget.r),
        });
    }
    let lhs = Word::new(vec![y.clone()]).conjugate_by(&**ring, &Word::new(vec![x.clone()]));
    let case_bound = match case {
        Case::SameRoot => Some(1),
        Case::NonOpposite => Some(calc.lacing().conjugate_non_opposite_bound()),
        _ => None,
    };
    Ok(RewriteCertificate {
        lemma: Lemma::L3,
        system: calc.system(),
        case,
        input_expression: format!("^{{{}}}{}", describe_gen(calc, ring, x), describe_gen(calc, ring, y)),
        budget,
        level: Level::Ring { p, q },
        length: out.len(),
        bound: CONJUGATE_BOUND,
        case_bound,
        refined_bound: None,
        oracle_checked: calc.oracle(ring, &lhs, &out),
        cores: None,
        two_ideal_form: None,
        output_word: lines(calc, ring, &out),
        word: out.with_level(Level::Ring { p, q }),
    })
}

/// Plans and runs the conjugation of `x_β(s^o t^r b)` by `x_α(a/s^h)`.
pub fn lemma3(calc: &Calculus, alpha: RootId, beta: RootId, h: u32, p: u32, q: u32) -> Result<RewriteCertificate, CalculusError> {
    let ring = calc.standard_ring().clone();
    let case = calc.case_of(alpha, beta);
    let plan = calc.plan(Lemma::L3, case, &PlanInput { p, q, h, ..Default::default() })?;
    let x = Gen::new(alpha, ring.term(1, &[("a", 1), ("s", -(h as i16))]));
    let y = Gen::new(beta, ring.term(1, &[("s", plan.o as i16), ("t", plan.r as i16), ("b", 1)]));
    let mut cert = conjugate_single(calc, &ring, &x, &y, p, q)?;
    cert.budget = plan;
    Ok(cert)
}

/// Rewrites `x y x⁻¹` for words, conjugating by the innermost factor first.
pub fn conjugate_word(
    calc: &Calculus,
    ring: &Arc<PolyRing>,
    x: &Word<LPoly>,
    y: &Word<LPoly>,
    p: u32,
    q: u32,
) -> Result<RewriteCertificate, CalculusError> {
    let engine = calc.engine(ring);
    let out = engine.conj_by_word(x, y);
    let h = x
        .factors
        .iter()
        .map(|g| neg_part(exponent(ring, &g.param, "s")))
        .max()
        .unwrap_or(0);
    let o = y.factors.iter().map(|g| pos_part(exponent(ring, &g.param, "s"))).min().unwrap_or(0);
    let r = y.factors.iter().map(|g| pos_part(exponent(ring, &g.param, "t"))).min().unwrap_or(0);
    let budget = ExponentBudget {
        p,
        q,
        h,
        o,
        r,
        ..Default::default()
    };
    if !at_level(ring, &out, p, q) {
        return Err(CalculusError::InsufficientBudget {
            lemma: Lemma::L4,
            detail: format!("input level ({o}, {r}) for targets ({p}, {q})"),
        });
    }
    let (big_l, big_k) = (x.len() as u32, y.len() as u64);
    let pow = |base: u64| base.saturating_pow(big_l).saturating_mul(big_k);
    let lhs = y.conjugate_by(&**ring, x);
    Ok(RewriteCertificate {
        lemma: Lemma::L4,
        system: calc.system(),
        case: Case::General,
        input_expression: format!("^{{word of length {big_l}}}(word of length {big_k})"),
        budget,
        level: Level::Ring { p, q },
        length: out.len(),
        bound: pow(CONJUGATE_BOUND),
        case_bound: None,
        refined_bound: refined_conjugate_base(calc.data.phi.cartan_type()).map(pow),
        oracle_checked: calc.oracle(ring, &lhs, &out),
        cores: None,
        two_ideal_form: None,
        output_word: lines(calc, ring, &out),
        word: out.with_level(Level::Ring { p, q }),
    })
}

/// Conjugates `x_{β_1}(s^o t^r b) ⋯` by `x_{α_1}(a/s^h) ⋯`, planning the
/// input level one conjugating factor at a time from the outside in.
pub fn lemma4(
    calc: &Calculus,
    xs: &[RootId],
    ys: &[RootId],
    h: u32,
    p: u32,
    q: u32,
) -> Result<RewriteCertificate, CalculusError> {
    let ring = calc.standard_ring().clone();
    let (mut lp, mut lq) = (p, q);
    for _ in xs {
        let b = calc.plan(Lemma::L3, Case::Opposite, &PlanInput { p: lp, q: lq, h, ..Default::default() })?;
        (lp, lq) = (b.o, b.r);
    }
    let x = Word::new(
        xs.iter()
            .map(|&a| Gen::new(a, ring.term(1, &[("a", 1), ("s", -(h as i16))])))
            .collect(),
    );
    let y = Word::new(
        ys.iter()
            .map(|&b| Gen::new(b, ring.term(1, &[("s", lp as i16), ("t", lq as i16), ("b", 1)])))
            .collect(),
    );
    conjugate_word(calc, &ring, &x, &y, p, q)
}

/// Rewrites `[x, y]` at level `(p, q)`.
pub fn commutator_single(
    calc: &Calculus,
    ring: &Arc<PolyRing>,
    x: &Gen<LPoly>,
    y: &Gen<LPoly>,
    p: u32,
    q: u32,
) -> Result<RewriteCertificate, CalculusError> {
    let engine = calc.engine(ring);
    let case = calc.case_of(x.root, y.root);
    let out = engine.comm_gen(x, y);
    let budget = ExponentBudget {
        p,
        q,
        k: neg_part(exponent(ring, &x.param, "s")),
        l: pos_part(exponent(ring, &x.param, "t")),
        m: neg_part(exponent(ring, &y.param, "t")),
        n: pos_part(exponent(ring, &y.param, "s")),
        ..Default::default()
    };
    if !at_level(ring, &out, p, q) {
        return Err(CalculusError::InsufficientBudget {
            lemma: Lemma::L5,
            detail: format!("l = {}, n = {} for targets ({p}, {q})", budget.l, budget.n),
        });
    }
    let lhs = commutator_word(&**ring, &Word::new(vec![x.clone()]), &Word::new(vec![y.clone()]));
    let case_bound = match case {
        Case::SameRoot => Some(0),
        Case::NonOpposite => Some(COMMUTATOR_NON_OPPOSITE_BOUND),
        _ => None,
    };
    Ok(RewriteCertificate {
        lemma: Lemma::L5,
        system: calc.system(),
        case,
        input_expression: format!("[{}, {}]", describe_gen(calc, ring, x), describe_gen(calc, ring, y)),
        budget,
        level: Level::Ring { p, q },
        length: out.len(),
        bound: calc.lacing().commutator_bound(),
        case_bound,
        refined_bound: None,
        oracle_checked: calc.oracle(ring, &lhs, &out),
        cores: None,
        two_ideal_form: None,
        output_word: lines(calc, ring, &out),
        word: out.with_level(Level::Ring { p, q }),
    })
}

/// Plans and runs `[x_α(t^l a/s^k), x_β(s^n b/t^m)]`.
pub fn lemma5(
    calc: &Calculus,
    alpha: RootId,
    beta: RootId,
    k: u32,
    m: u32,
    p: u32,
    q: u32,
) -> Result<RewriteCertificate, CalculusError> {
    let ring = calc.standard_ring().clone();
    let case = calc.case_of(alpha, beta);
    let plan = calc.plan(Lemma::L5, case, &PlanInput { p, q, k, m, h: 0 })?;
    let (x, y) = commutator_pair(&ring, alpha, beta, k, m, plan.l, plan.n);
    let mut cert = commutator_single(calc, &ring, &x, &y, p, q)?;
    cert.budget = plan;
    Ok(cert)
}

/// Rewrites `[x, y_1 ⋯ y_K]` at level `(p, q)`.
pub fn commutator_general(
    calc: &Calculus,
    ring: &Arc<PolyRing>,
    x: &Gen<LPoly>,
    y: &Word<LPoly>,
    p: u32,
    q: u32,
) -> Result<RewriteCertificate, CalculusError> {
    let engine = calc.engine(ring);
    let out = engine.comm_with_word(x, y);
    let budget = ExponentBudget {
        p,
        q,
        k: neg_part(exponent(ring, &x.param, "s")),
        l: pos_part(exponent(ring, &x.param, "t")),
        m: y.factors.iter().map(|g| neg_part(exponent(ring, &g.param, "t"))).max().unwrap_or(0),
        n: y.factors.iter().map(|g| pos_part(exponent(ring, &g.param, "s"))).min().unwrap_or(0),
        ..Default::default()
    };
    if !at_level(ring, &out, p, q) {
        return Err(CalculusError::InsufficientBudget {
            lemma: Lemma::L6,
            detail: format!("l = {}, n = {} for targets ({p}, {q})", budget.l, budget.n),
        });
    }
    let lhs = commutator_word(&**ring, &Word::new(vec![x.clone()]), y);
    let big_l = calc.lacing().commutator_bound();
    let bound = (big_l + 1).saturating_pow(y.len() as u32).saturating_sub(1);
    Ok(RewriteCertificate {
        lemma: Lemma::L6,
        system: calc.system(),
        case: Case::General,
        input_expression: format!("[{}, word of length {}]", describe_gen(calc, ring, x), y.len()),
        budget,
        level: Level::Ring { p, q },
        length: out.len(),
        bound,
        case_bound: None,
        refined_bound: None,
        oracle_checked: calc.oracle(ring, &lhs, &out),
        cores: None,
        two_ideal_form: None,
        output_word: lines(calc, ring, &out),
        word: out.with_level(Level::Ring { p, q }),
    })
}

/// `[x_α(t^l a/s^k), x_{β_1}(s^n b/t^m) ⋯ x_{β_K}(s^n b/t^m)]` with `l, n`
/// found by trial runs on this input.
pub fn lemma6(
    calc: &Calculus,
    alpha: RootId,
    ys: &[RootId],
    k: u32,
    m: u32,
    p: u32,
    q: u32,
) -> Result<RewriteCertificate, CalculusError> {
    let ring = calc.standard_ring().clone();
    let engine = calc.engine(&ring);
    let build = |l: u32, n: u32| {
        let (x, _) = commutator_pair(&ring, alpha, alpha, k, m, l, n);
        let y = Word::new(
            ys.iter()
                .map(|&b| commutator_pair(&ring, b, b, k, m, l, n).1)
                .collect(),
        );
        (x, y)
    };
    let input = PlanInput { p, q, k, m, h: 0 };
    let start = calc.plan(Lemma::L5, Case::Opposite, &input)?;
    let (l, n) = search_pair((start.l, start.n), |l, n| {
        let (x, y) = build(l, n);
        at_level(&ring, &engine.comm_with_word(&x, &y), p, q)
    })
    .ok_or(CalculusError::SearchExhausted { lemma: Lemma::L6 })?;
    let (x, y) = build(l, n);
    let mut cert = commutator_general(calc, &ring, &x, &y, p, q)?;
    cert.budget.searched = true;
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn non_opposite_examples() {
        let calc = Calculus::new("A2").unwrap();
        let phi = &calc.data().phi;
        let (a, b) = (phi.simple(0), phi.simple(1));
        let c = lemma3(&calc, a, b, 1, 1, 1).unwrap();
        assert!(c.oracle_checked && c.length <= 2);
        let c = lemma3(&calc, a, a, 1, 1, 1).unwrap();
        assert_eq!((c.case, c.length), (Case::SameRoot, 1));
        let c = lemma5(&calc, a, b, 1, 1, 1, 1).unwrap();
        assert_eq!((c.budget.l, c.budget.n), (3, 3));
        assert_eq!(c.length, 1);
        let ring = calc.standard_ring();
        let expected = ring.term(calc.data().consts.n(a, b) as i128, &[("t", 2), ("s", 2), ("a", 1), ("b", 1)]);
        assert_eq!(c.word.factors[0].param, expected);
        assert!(c.oracle_checked);
        let c = lemma5(&calc, a, a, 1, 1, 1, 1).unwrap();
        assert_eq!(c.length, 0);
    }

    #[test]
    fn opposite_cases_are_certified() {
        for name in ["A2", "B2", "G2"] {
            let calc = Calculus::new(name).unwrap();
            let phi = &calc.data().phi;
            for alpha in [phi.simple(0), phi.simple(1)] {
                let c = lemma3(&calc, alpha, phi.neg(alpha), 1, 1, 1).unwrap();
                assert!(c.oracle_checked && c.within_bound(), "{name} L3 {}", c.length);
                let c = lemma5(&calc, alpha, phi.neg(alpha), 1, 1, 1, 1).unwrap();
                assert!(c.oracle_checked && c.within_bound(), "{name} L5 {}", c.length);
            }
        }
    }

    #[test]
    fn insufficient_budget_is_reported() {
        let calc = Calculus::new("A2").unwrap();
        let ring = calc.standard_ring().clone();
        let phi = &calc.data().phi;
        let x = Gen::new(phi.simple(0), ring.parse("a/s^2").unwrap());
        let y = Gen::new(phi.simple(1), ring.parse("s*b").unwrap());
        assert!(matches!(
            conjugate_single(&calc, &ring, &x, &y, 1, 0),
            Err(CalculusError::InsufficientBudget { .. })
        ));
    }

    #[test]
    fn word_level_lemmas() {
        let calc = Calculus::new("A2").unwrap();
        let phi = &calc.data().phi;
        let (a, b) = (phi.simple(0), phi.simple(1));
        let c = lemma4(&calc, &[], &[a, b], 1, 1, 1).unwrap();
        assert_eq!(c.length, 2);
        let c = lemma4(&calc, &[a, phi.neg(b)], &[phi.neg(a)], 1, 1, 0).unwrap();
        assert!(c.oracle_checked && c.within_bound());
        assert!(c.length as u64 <= c.refined_bound.unwrap());
        let c = lemma6(&calc, a, &[], 1, 1, 1, 1).unwrap();
        assert_eq!(c.length, 0);
        let c = lemma6(&calc, a, &[phi.neg(a), b], 1, 1, 1, 1).unwrap();
        assert!(c.oracle_checked && c.within_bound());
    }
}
