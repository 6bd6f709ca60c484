use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::rep::Representation;
use super::word::{chevalley_commutator, commutator_word, Gen, Word};
use super::ChevalleyError;
use crate::par::Exec;
use crate::ring::{Elem, FiniteRing, PolyRing, Ring};
use crate::roots::RootId;

/// How many parameter tuples the suite tries per relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum Coverage {
    Exhaustive,
    /// At most `per_relation` random tuples per root or root pair.
    Sampled { per_relation: usize, seed: u64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationInstance {
    pub relation: &'static str,
    pub instance: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SteinbergReport {
    pub representation: String,
    pub ring: String,
    pub coverage: Coverage,
    pub total: usize,
    pub failures: usize,
    pub instances: Vec<RelationInstance>,
}

impl SteinbergReport {
    /// The first failing instance as an error.
    pub fn into_result(self) -> Result<SteinbergReport, ChevalleyError> {
        match self.instances.iter().find(|i| !i.pass) {
            Some(bad) => Err(ChevalleyError::RelationFailure {
                relation: bad.relation.to_string(),
                instance: bad.instance.clone(),
            }),
            None => Ok(self),
        }
    }
}

fn param_pairs(ring: &FiniteRing, coverage: Coverage, salt: u64) -> Vec<(Elem, Elem)> {
    match coverage {
        Coverage::Exhaustive => ring
            .elements()
            .flat_map(|a| ring.elements().map(move |b| (a, b)))
            .collect(),
        Coverage::Sampled { per_relation, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let n = ring.size() as u16;
            (0..per_relation)
                .map(|_| (Elem(rng.gen_range(0..n)), Elem(rng.gen_range(0..n))))
                .collect()
        }
    }
}

/// Verifies additivity `x_α(ξ)x_α(ζ) = x_α(ξ+ζ)` for every root and the
/// commutator formula for every non-opposite pair, by matrix evaluation.
pub fn steinberg_suite(rep: &Representation, ring: &FiniteRing, coverage: Coverage, exec: Exec) -> SteinbergReport {
    let phi = &rep.data().phi;
    let roots: Vec<RootId> = phi.ids().collect();
    let additivity: Vec<Vec<RelationInstance>> = exec.map(&roots, |&alpha| {
        param_pairs(ring, coverage, alpha.0 as u64)
            .into_iter()
            .map(|(x, y)| {
                let lhs = rep.unipotent(ring, alpha, &x).mul(ring, &rep.unipotent(ring, alpha, &y));
                let rhs = rep.unipotent(ring, alpha, &ring.add_e(x, y));
                RelationInstance {
                    relation: "additivity",
                    instance: format!(
                        "x{}({}) x{}({})",
                        phi.format_root(alpha),
                        ring.label(x),
                        phi.format_root(alpha),
                        ring.label(y)
                    ),
                    pass: lhs == rhs,
                }
            })
            .collect()
    });
    let pairs: Vec<(RootId, RootId)> = phi
        .ids()
        .flat_map(|a| phi.ids().map(move |b| (a, b)))
        .filter(|&(a, b)| a != b && a != phi.neg(b))
        .collect();
    let commutators: Vec<Vec<RelationInstance>> = exec.map(&pairs, |&(alpha, beta)| {
        let salt = 0x1_0000 + (alpha.0 as u64) * 4096 + beta.0 as u64;
        param_pairs(ring, coverage, salt)
            .into_iter()
            .map(|(x, y)| {
                let lhs = commutator_word(ring, &Word::single(alpha, x), &Word::single(beta, y)).evaluate(rep, ring);
                let rhs = chevalley_commutator(rep.data(), ring, alpha, beta, &x, &y)
                    .expect("non-opposite pair")
                    .evaluate(rep, ring);
                RelationInstance {
                    relation: "commutator",
                    instance: format!(
                        "[x{}({}), x{}({})]",
                        phi.format_root(alpha),
                        ring.label(x),
                        phi.format_root(beta),
                        ring.label(y)
                    ),
                    pass: lhs == rhs,
                }
            })
            .collect()
    });
    let instances: Vec<RelationInstance> = additivity.into_iter().chain(commutators).flatten().collect();
    let failures = instances.iter().filter(|i| !i.pass).count();
    SteinbergReport {
        representation: rep.name().to_string(),
        ring: ring.name().to_string(),
        coverage,
        total: instances.len(),
        failures,
        instances,
    }
}

/// One symbolic check of the commutator formula over `Z[a,b]`.
#[derive(Clone, Debug, Serialize)]
pub struct SymbolicCommutatorCheck {
    pub alpha: String,
    pub beta: String,
    pub length: usize,
    pub pass: bool,
}

/// Checks `[x_α(a), x_β(b)]` against the emitted word as exact matrices over
/// `Z[a,b]` for every non-opposite pair.
pub fn symbolic_commutator_checks(rep: &Representation, exec: Exec) -> Vec<SymbolicCommutatorCheck> {
    let ring = PolyRing::new(&["a", "b"], &[], None).expect("valid ring");
    let phi = &rep.data().phi;
    let pairs: Vec<(RootId, RootId)> = phi
        .ids()
        .flat_map(|a| phi.ids().map(move |b| (a, b)))
        .filter(|&(a, b)| a != b && a != phi.neg(b))
        .collect();
    let (a, b) = (ring.var("a"), ring.var("b"));
    exec.map(&pairs, |&(alpha, beta)| {
        let word = chevalley_commutator(rep.data(), &ring, alpha, beta, &a, &b).expect("non-opposite pair");
        let lhs = Word::new(vec![
            Gen::new(alpha, a.clone()),
            Gen::new(beta, b.clone()),
            Gen::new(alpha, ring.neg(&a)),
            Gen::new(beta, ring.neg(&b)),
        ])
        .evaluate(rep, &ring);
        SymbolicCommutatorCheck {
            alpha: phi.format_root(alpha),
            beta: phi.format_root(beta),
            length: word.len(),
            pass: lhs == word.evaluate(rep, &ring),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::RootData;

    #[test]
    fn small_suites_pass() {
        let f = FiniteRing::integers_mod(3).unwrap();
        for (name, adjoint) in [("A2", false), ("B2", false), ("C2", false), ("G2", true), ("A3", false)] {
            let data = RootData::parse(name).unwrap();
            let rep = if adjoint {
                Representation::adjoint(data).unwrap()
            } else {
                Representation::natural(data).unwrap()
            };
            let report = steinberg_suite(&rep, &f, Coverage::Sampled { per_relation: 3, seed: 7 }, Exec::Sequential);
            assert_eq!(report.failures, 0, "{name}");
            assert!(report.into_result().is_ok());
        }
    }

    #[test]
    fn symbolic_formula_holds_in_every_lacing_class() {
        for name in ["A2", "B2", "C2"] {
            let rep = Representation::natural(RootData::parse(name).unwrap()).unwrap();
            assert!(symbolic_commutator_checks(&rep, Exec::Parallel).iter().all(|c| c.pass), "{name}");
        }
        let rep = Representation::adjoint(RootData::parse("G2").unwrap()).unwrap();
        let checks = symbolic_commutator_checks(&rep, Exec::Parallel);
        assert!(checks.iter().all(|c| c.pass));
        assert_eq!(checks.iter().map(|c| c.length).max(), Some(4));
    }
}
