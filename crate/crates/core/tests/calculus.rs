use std::sync::OnceLock;

use proptest::prelude::*;

use chevcalc::calculus::{lemma3, lemma5, lemma7, Calculus, Case, RewriteCertificate};
use chevcalc::chevalley::{commutator_word, Gen, Representation, Word};
use chevcalc::ring::{Elem, FiniteRing, LPoly, PolyRing};
use chevcalc::roots::RootId;

const P: u64 = 101;

fn calc(name: &str) -> &'static Calculus {
    static A2: OnceLock<Calculus> = OnceLock::new();
    static B2: OnceLock<Calculus> = OnceLock::new();
    let cell = if name == "A2" { &A2 } else { &B2 };
    cell.get_or_init(|| Calculus::new(name).unwrap())
}

/// Values for the four variables of a rewriting ring, in order, over `Z/P`.
#[derive(Debug)]
struct Point {
    field: FiniteRing,
    values: Vec<Elem>,
    inverses: Vec<Option<Elem>>,
}

impl Point {
    fn new(raw: [u16; 4]) -> Self {
        let field = FiniteRing::integers_mod(P).unwrap();
        let values: Vec<Elem> = raw.iter().enumerate().map(|(i, &v)| Elem(if i < 2 { 1 + v % 100 } else { v % 101 })).collect();
        let inverses = values.iter().map(|&v| field.inverse(v)).collect();
        Point { field, values, inverses }
    }

    fn eval(&self, ring: &PolyRing, w: &Word<LPoly>) -> Word<Elem> {
        Word::new(
            w.factors
                .iter()
                .map(|g| Gen::new(g.root, ring.specialise(&g.param, &self.field, &self.values, &self.inverses)))
                .collect(),
        )
    }
}

fn has_level(ring: &PolyRing, w: &Word<LPoly>, p: u32, q: u32) -> bool {
    let (s, t) = (ring.var_index("s").unwrap(), ring.var_index("t").unwrap());
    w.factors.iter().all(|g| {
        g.param.terms().iter().all(|(m, _)| {
            m.0.iter().all(|&e| e >= 0) && m.0[s] as i64 >= p as i64 && m.0[t] as i64 >= q as i64
        })
    })
}

fn numeric_match(calc: &Calculus, ring: &PolyRing, lhs: &Word<LPoly>, cert: &RewriteCertificate, pt: &Point) -> bool {
    let rep: &Representation = calc.representation();
    pt.eval(ring, lhs).evaluate(rep, &pt.field) == pt.eval(ring, &cert.word).evaluate(rep, &pt.field)
}

fn case() -> impl Strategy<Value = (&'static str, u16, u16)> {
    prop::sample::select(vec!["A2", "B2"]).prop_flat_map(|name| {
        let n = calc(name).data().phi.len() as u16;
        (Just(name), 0..n, 0..n)
    })
}

fn point() -> impl Strategy<Value = Point> {
    any::<[u16; 4]>().prop_map(Point::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn conjugation_rewrites_hold_at_level((name, a, b) in case(), h in 0u32..=2, p in 0u32..=2, q in 0u32..=2, pt in point()) {
        let calc = calc(name);
        let (alpha, beta) = (RootId(a), RootId(b));
        let cert = lemma3(calc, alpha, beta, h, p, q).unwrap();
        prop_assert!(cert.oracle_checked);
        prop_assert!(cert.length <= 24);
        prop_assert!(cert.within_bound());
        let ring = calc.standard_ring();
        prop_assert!(has_level(ring, &cert.word, p, q));
        let x = Gen::new(alpha, ring.term(1, &[("a", 1), ("s", -(h as i16))]));
        let y = Gen::new(beta, ring.term(1, &[("s", cert.budget.o as i16), ("t", cert.budget.r as i16), ("b", 1)]));
        let lhs = Word::new(vec![y]).conjugate_by(&**ring, &Word::new(vec![x]));
        prop_assert!(numeric_match(calc, ring, &lhs, &cert, &pt));
        if cert.case != Case::Opposite {
            prop_assert_eq!(cert.budget.o, calc.i_phi() * h + p + 1);
        }
    }

    #[test]
    fn commutator_rewrites_hold_at_level((name, a, b) in case(), k in 0u32..=2, m in 0u32..=2, p in 0u32..=2, q in 0u32..=2, pt in point()) {
        let calc = calc(name);
        let (alpha, beta) = (RootId(a), RootId(b));
        let cert = lemma5(calc, alpha, beta, k, m, p, q).unwrap();
        prop_assert!(cert.oracle_checked);
        prop_assert!(cert.within_bound());
        let ring = calc.standard_ring();
        prop_assert!(has_level(ring, &cert.word, p, q));
        let x = Gen::new(alpha, ring.term(1, &[("t", cert.budget.l as i16), ("s", -(k as i16)), ("a", 1)]));
        let y = Gen::new(beta, ring.term(1, &[("s", cert.budget.n as i16), ("t", -(m as i16)), ("b", 1)]));
        let lhs = commutator_word(&**ring, &Word::new(vec![x]), &Word::new(vec![y]));
        prop_assert!(numeric_match(calc, ring, &lhs, &cert, &pt));
        match cert.case {
            Case::SameRoot => prop_assert_eq!(cert.length, 0),
            Case::NonOpposite => prop_assert!(cert.length <= 2),
            _ => {}
        }
    }
}

#[test]
fn relative_conjugation_matches_numerically() {
    let calc = calc("A2");
    let phi = &calc.data().phi;
    let pt = Point::new([3, 7, 11, 13]);
    for marker in ["A", "I"] {
        let ring = chevcalc::calculus::relative_ring(marker);
        for alpha in phi.ids() {
            for beta in phi.ids() {
                let cert = lemma7(calc, alpha, beta, 1, 1, 0, marker).unwrap();
                assert!(cert.oracle_checked);
                assert_eq!(cert.bound, u64::MAX);
                let x = Gen::new(alpha, ring.term(1, &[("a", 1), ("s", -1)]));
                let y = Gen::new(beta, ring.term(1, &[("s", cert.budget.o as i16), ("t", cert.budget.r as i16), ("c", 1)]));
                let lhs = Word::new(vec![y]).conjugate_by(&*ring, &Word::new(vec![x]));
                assert!(numeric_match(calc, &ring, &lhs, &cert, &pt), "{marker} {alpha:?} {beta:?}");
            }
        }
    }
}
