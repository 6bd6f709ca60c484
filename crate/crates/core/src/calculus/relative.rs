use std::sync::Arc;

use super::budget::{commutator_formula, conjugation_formula, search_pair, Case, ExponentBudget, Lemma, PlanInput};
use super::engine::Engine;
use super::lemmas::{at_level, commutator_pair, Calculus, RewriteCertificate};
use super::CalculusError;
use crate::chevalley::{commutator_word, Gen, Level, Word};
use crate::ring::{LPoly, PolyRing, Ring};
use crate::roots::RootId;

/// One factor `C · c · C⁻¹` of a relative word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelativeFactor {
    /// Parameters at ring level.
    pub conjugator: Word<LPoly>,
    /// Parameter at ideal level.
    pub core: Gen<LPoly>,
}

/// A product of conjugates of ideal-level generators by ring-level words.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RelativeWord {
    pub factors: Vec<RelativeFactor>,
}

impl RelativeWord {
    pub fn from_word(w: &Word<LPoly>) -> Self {
        RelativeWord {
            factors: w
                .factors
                .iter()
                .map(|g| RelativeFactor {
                    conjugator: Word::default(),
                    core: g.clone(),
                })
                .collect(),
        }
    }

    pub fn flatten(&self, ring: &PolyRing) -> Word<LPoly> {
        let mut out = Word::default();
        for f in &self.factors {
            out.extend(&Word::new(vec![f.core.clone()]).conjugate_by(ring, &f.conjugator));
        }
        out
    }

    /// Number of generators in the flattened word.
    pub fn generator_count(&self) -> usize {
        self.factors.iter().map(|f| 2 * f.conjugator.len() + 1).sum()
    }

    /// Conjugators in `s^p t^q R`, cores in `s^p t^q I` for the marker `I`.
    pub fn validate(&self, ring: &PolyRing, p: u32, q: u32, marker: &str) -> bool {
        self.factors.iter().all(|f| {
            at_level(ring, &f.conjugator, p, q)
                && ring.level_membership(&f.core.param, p, q)
                && ring.carries_markers(&f.core.param, &[marker])
        })
    }

    pub fn to_lines(&self, calc: &Calculus, ring: &PolyRing) -> Vec<String> {
        let phi = &calc.data().phi;
        self.factors
            .iter()
            .map(|f| {
                let conj: Vec<String> = f
                    .conjugator
                    .factors
                    .iter()
                    .map(|g| format!("x{}({})", phi.format_root(g.root), ring.format(&g.param)))
                    .collect();
                let core = format!("x{}({})", phi.format_root(f.core.root), ring.format(&f.core.param));
                if conj.is_empty() {
                    core
                } else {
                    format!("^{{{}}}{}", conj.join(" "), core)
                }
            })
            .collect()
    }
}

/// `x y x⁻¹` as a relative word: conjugators are conjugated by `x` as flat
/// words, and each core generator is conjugated by `x` after an opposite
/// core has been split into pieces that keep the ideal parameter.
pub fn relative_conjugate(engine: &Engine, x: &Gen<LPoly>, y: &RelativeWord) -> RelativeWord {
    let phi = &engine.data().phi;
    if x.param.is_zero() {
        return y.clone();
    }
    let mut out = Vec::new();
    for f in &y.factors {
        let outer = engine.conj_by_gen(x, &f.conjugator);
        let pieces: Vec<(Word<LPoly>, Gen<LPoly>)> = if phi.neg(x.root) == f.core.root {
            engine.expand_relative(f.core.root, &f.core.param)
        } else {
            vec![(Word::default(), f.core.clone())]
        };
        for (inner, core) in pieces {
            let conj = outer.concat(&engine.conj_by_gen(x, &inner));
            for g in engine.conj_gen(x, &core).factors {
                out.push(RelativeFactor {
                    conjugator: conj.clone(),
                    core: g,
                });
            }
        }
    }
    RelativeWord { factors: out }
}

/// `Z[s,t,a,c:I]` localised at `st`: `a` is a ring parameter and `c` an
/// element of the ideal tagged `marker`.
pub fn relative_ring(marker: &str) -> Arc<PolyRing> {
    let c = format!("c:{marker}");
    Arc::new(PolyRing::new(&["s", "t", "a", &c], &["s", "t"], None).expect("valid ring"))
}

/// `Z[s,t,a:A,b:B]` localised at `st`.
pub fn two_ideal_ring(a: &str, b: &str) -> Arc<PolyRing> {
    let (a, b) = (format!("a:{a}"), format!("b:{b}"));
    Arc::new(PolyRing::new(&["s", "t", &a, &b], &["s", "t"], None).expect("valid ring"))
}

fn relative_input(ring: &PolyRing, alpha: RootId, beta: RootId, k: u32, h: u32, m: u32) -> (Gen<LPoly>, RelativeWord) {
    let x = Gen::new(alpha, ring.term(1, &[("a", 1), ("s", -(k as i16))]));
    let y = Gen::new(beta, ring.term(1, &[("s", h as i16), ("t", m as i16), ("c", 1)]));
    (x, RelativeWord::from_word(&Word::new(vec![y])))
}

/// Plans the input level `(h, m)`, stored as `(o, r)`, for the relative
/// conjugation. Trial runs cover every pair of roots; `marker` only enters
/// the validation of the trial outputs.
pub fn plan_relative_conjugate(calc: &Calculus, input: &PlanInput, marker: &str) -> Result<ExponentBudget, CalculusError> {
    let key = (Lemma::L7, Case::General, *input, vec![marker.to_string()]);
    calc.cached(key, || {
        let ring = relative_ring(marker);
        let engine = calc.engine(&ring);
        let phi = &calc.data().phi;
        let start = conjugation_formula(2 * calc.i_phi(), &PlanInput { h: input.k, ..*input });
        let (h, m) = search_pair(start, |h, m| {
            phi.ids().all(|alpha| {
                phi.ids().all(|beta| {
                    let (x, y) = relative_input(&ring, alpha, beta, input.k, h, m);
                    relative_conjugate(&engine, &x, &y).validate(&ring, input.p, input.q, marker)
                })
            })
        })
        .ok_or(CalculusError::SearchExhausted { lemma: Lemma::L7 })?;
        Ok(ExponentBudget {
            o: h,
            r: m,
            searched: true,
            ..ExponentBudget::from_input(input)
        })
    })
}

/// Rewrites `x y x⁻¹` for a relative word `y`, validated at ring level and
/// ideal level `(p, q)`.
pub fn relative_conjugate_certified(
    calc: &Calculus,
    ring: &Arc<PolyRing>,
    x: &Gen<LPoly>,
    y: &RelativeWord,
    p: u32,
    q: u32,
    marker: &str,
) -> Result<RewriteCertificate, CalculusError> {
    let engine = calc.engine(ring);
    let out = relative_conjugate(&engine, x, y);
    if !out.validate(ring, p, q, marker) {
        return Err(CalculusError::InsufficientBudget {
            lemma: Lemma::L7,
            detail: format!("relative word not at level ({p}, {q}) in {marker}"),
        });
    }
    let flat = out.flatten(ring);
    let input = y.flatten(ring);
    let lhs = input.conjugate_by(&**ring, &Word::new(vec![x.clone()]));
    let k = ring
        .var_index("s")
        .and_then(|i| x.param.min_exponent(i))
        .map_or(0, |e| (-e).max(0) as u32);
    Ok(RewriteCertificate {
        lemma: Lemma::L7,
        system: calc.system(),
        case: Case::General,
        input_expression: format!("^{{x{}}}(relative word with {} factors)", calc.data().phi.format_root(x.root), y.factors.len()),
        budget: ExponentBudget {
            p,
            q,
            k,
            ..Default::default()
        },
        level: Level::Ideal {
            p,
            q,
            markers: vec![marker.to_string()],
        },
        length: flat.len(),
        bound: u64::MAX,
        case_bound: None,
        refined_bound: None,
        oracle_checked: calc.oracle(ring, &lhs, &flat),
        cores: Some(out.factors.len()),
        two_ideal_form: None,
        output_word: out.to_lines(calc, ring),
        word: flat,
    })
}

/// Plans and runs the conjugation of `x_β(s^h t^m c)`, `c ∈ I`, by `x_α(a/s^k)`.
pub fn lemma7(calc: &Calculus, alpha: RootId, beta: RootId, k: u32, p: u32, q: u32, marker: &str) -> Result<RewriteCertificate, CalculusError> {
    let input = PlanInput { p, q, k, ..Default::default() };
    let plan = plan_relative_conjugate(calc, &input, marker)?;
    let ring = relative_ring(marker);
    let (x, y) = relative_input(&ring, alpha, beta, k, plan.o, plan.r);
    let mut cert = relative_conjugate_certified(calc, &ring, &x, &y, p, q, marker)?;
    cert.budget = plan;
    Ok(cert)
}

/// Output of the two-ideal commutator rewrite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TwoIdealOutput {
    /// Chevalley expansion; every parameter lies in `s^p t^q AB`.
    Expansion(Word<LPoly>),
    /// Relative word over `A`: cores in `s^p t^q A`, conjugators at ring level.
    Relative(RelativeWord),
}

impl TwoIdealOutput {
    pub fn flatten(&self, ring: &PolyRing) -> Word<LPoly> {
        match self {
            TwoIdealOutput::Expansion(w) => w.clone(),
            TwoIdealOutput::Relative(r) => r.flatten(ring),
        }
    }

    pub fn is_two_ideal(&self) -> bool {
        matches!(self, TwoIdealOutput::Expansion(_))
    }

    fn valid(&self, ring: &PolyRing, p: u32, q: u32, a: &str, b: &str) -> bool {
        match self {
            TwoIdealOutput::Expansion(w) => w
                .factors
                .iter()
                .all(|g| ring.level_membership(&g.param, p, q) && ring.carries_markers(&g.param, &[a, b])),
            TwoIdealOutput::Relative(r) => r.validate(ring, p, q, a),
        }
    }
}

/// `[x, y]` for `x` carrying the marker of `A` and `y` that of `B`.
///
/// For roots that are not opposite this is the Chevalley expansion. For
/// opposite roots `y` is expanded into pieces `z_1 ⋯ z_r` and
/// `[x, z_1⋯z_r] = Π (z_1⋯z_{i-1})[x, z_i](z_1⋯z_{i-1})⁻¹` is assembled as a
/// relative word, conjugating by each `z_j` with [`relative_conjugate`].
pub fn relative_commutator(engine: &Engine, x: &Gen<LPoly>, y: &Gen<LPoly>) -> TwoIdealOutput {
    if engine.data().phi.neg(x.root) != y.root || x.param.is_zero() || y.param.is_zero() {
        return TwoIdealOutput::Expansion(engine.comm_gen(x, y));
    }
    let pieces = engine.expand(y.root, &y.param);
    let mut out = RelativeWord::default();
    for (i, z) in pieces.factors.iter().enumerate() {
        let mut rel = RelativeWord::from_word(&engine.comm_gen(x, z));
        for g in pieces.factors[..i].iter().rev() {
            rel = relative_conjugate(engine, g, &rel);
        }
        out.factors.extend(rel.factors);
    }
    TwoIdealOutput::Relative(out)
}

/// Plans `(l, n)` for the two-ideal commutator by trial runs over every
/// pair of roots; the markers only enter the validation.
pub fn plan_relative_commutator(calc: &Calculus, input: &PlanInput, a: &str, b: &str) -> Result<ExponentBudget, CalculusError> {
    let key = (Lemma::L9, Case::General, *input, vec![a.to_string(), b.to_string()]);
    calc.cached(key, || {
        let ring = two_ideal_ring(a, b);
        let engine = calc.engine(&ring);
        let phi = &calc.data().phi;
        let start = commutator_formula(2 * calc.i_phi(), input);
        let (l, n) = search_pair(start, |l, n| {
            phi.ids().all(|alpha| {
                phi.ids().all(|beta| {
                    let (x, y) = commutator_pair(&ring, alpha, beta, input.k, input.m, l, n);
                    relative_commutator(&engine, &x, &y).valid(&ring, input.p, input.q, a, b)
                })
            })
        })
        .ok_or(CalculusError::SearchExhausted { lemma: Lemma::L9 })?;
        Ok(ExponentBudget {
            l,
            n,
            searched: true,
            ..ExponentBudget::from_input(input)
        })
    })
}

/// Plans and runs `[x_α(t^l a/s^k), x_β(s^n b/t^m)]` with `a ∈ A`, `b ∈ B`.
#[allow(clippy::too_many_arguments)]
pub fn lemma9(
    calc: &Calculus,
    alpha: RootId,
    beta: RootId,
    k: u32,
    m: u32,
    p: u32,
    q: u32,
    markers: (&str, &str),
) -> Result<RewriteCertificate, CalculusError> {
    let (ta, tb) = markers;
    let input = PlanInput { p, q, k, m, h: 0 };
    let plan = plan_relative_commutator(calc, &input, ta, tb)?;
    let ring = two_ideal_ring(ta, tb);
    let engine = calc.engine(&ring);
    let (x, y) = commutator_pair(&ring, alpha, beta, k, m, plan.l, plan.n);
    let out = relative_commutator(&engine, &x, &y);
    let two = out.is_two_ideal();
    if !out.valid(&ring, p, q, ta, tb) {
        return Err(CalculusError::InsufficientBudget {
            lemma: Lemma::L9,
            detail: format!("l = {}, n = {}", plan.l, plan.n),
        });
    }
    let lhs = commutator_word(&*ring, &Word::new(vec![x.clone()]), &Word::new(vec![y.clone()]));
    let flat = out.flatten(&ring);
    let phi = &calc.data().phi;
    let case = if alpha == beta {
        Case::SameRoot
    } else if phi.neg(alpha) == beta {
        Case::Opposite
    } else {
        Case::NonOpposite
    };
    let markers = if two { vec![ta.to_string(), tb.to_string()] } else { vec![ta.to_string()] };
    Ok(RewriteCertificate {
        lemma: Lemma::L9,
        system: calc.system(),
        case,
        input_expression: format!(
            "[x{}({}), x{}({})]",
            phi.format_root(alpha),
            ring.format(&x.param),
            phi.format_root(beta),
            ring.format(&y.param)
        ),
        budget: plan,
        level: Level::Ideal { p, q, markers },
        length: flat.len(),
        bound: u64::MAX,
        case_bound: None,
        refined_bound: None,
        oracle_checked: calc.oracle(&ring, &lhs, &flat),
        cores: match &out {
            TwoIdealOutput::Relative(r) => Some(r.factors.len()),
            TwoIdealOutput::Expansion(_) => None,
        },
        two_ideal_form: Some(two),
        output_word: match &out {
            TwoIdealOutput::Expansion(w) => w.to_lines(phi, &*ring).lines().map(str::to_string).collect(),
            TwoIdealOutput::Relative(r) => r.to_lines(calc, &ring),
        },
        word: flat,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_conjugator_leaves_the_word() {
        let calc = Calculus::new("A2").unwrap();
        let ring = relative_ring("I");
        let engine = calc.engine(&ring);
        let (_, y) = relative_input(&ring, calc.data().phi.simple(0), calc.data().phi.simple(1), 1, 3, 1);
        let x = Gen::new(calc.data().phi.simple(0), LPoly::default());
        assert_eq!(relative_conjugate(&engine, &x, &y), y);
    }

    #[test]
    fn relative_conjugation_is_certified() {
        for (name, k, p, q) in [("A2", 1, 1, 1), ("B2", 2, 2, 1)] {
            let calc = Calculus::new(name).unwrap();
            let phi = calc.data().phi.clone();
            for alpha in phi.ids() {
                for beta in [phi.simple(0), phi.neg(alpha)] {
                    let c = lemma7(&calc, alpha, beta, k, p, q, "I").unwrap();
                    assert!(c.oracle_checked, "{name}");
                }
            }
        }
    }

    #[test]
    fn planner_ignores_the_ideal() {
        let calc = Calculus::new("A2").unwrap();
        let input = PlanInput { p: 1, q: 1, k: 1, m: 1, h: 0 };
        let b1 = plan_relative_conjugate(&calc, &input, "I").unwrap();
        let b2 = plan_relative_conjugate(&calc, &input, "J").unwrap();
        assert_eq!(b1, b2);
        let c1 = plan_relative_commutator(&calc, &input, "A", "B").unwrap();
        let c2 = plan_relative_commutator(&calc, &input, "P", "P").unwrap();
        assert_eq!(c1, c2);
    }

    #[test]
    fn two_ideal_commutators() {
        let calc = Calculus::new("A2").unwrap();
        let phi = calc.data().phi.clone();
        let (a, b) = (phi.simple(0), phi.simple(1));
        let c = lemma9(&calc, a, b, 1, 1, 1, 1, ("A", "B")).unwrap();
        assert_eq!(c.two_ideal_form, Some(true));
        assert!(c.oracle_checked);
        let c = lemma9(&calc, a, phi.neg(a), 1, 1, 1, 1, ("A", "B")).unwrap();
        assert_eq!(c.two_ideal_form, Some(false));
        assert!(c.oracle_checked && c.within_bound());
        let c = lemma9(&calc, a, a, 1, 1, 1, 1, ("A", "B")).unwrap();
        assert_eq!(c.length, 0);
    }
}
