use serde::Serialize;

use crate::config::{Command, ExperimentConfig, RepChoice};

/// A named, fixed configuration. Ids never change once published.
#[derive(Clone, Debug, Serialize)]
pub struct Scenario {
    pub id: &'static str,
    /// Acceptance criterion the scenario belongs to.
    pub criterion: u8,
    pub description: &'static str,
    pub config: ExperimentConfig,
}

fn sc(id: &'static str, criterion: u8, description: &'static str, config: ExperimentConfig) -> Scenario {
    Scenario { id, criterion, description, config }
}

fn steinberg(system: &str, ring: &str) -> ExperimentConfig {
    ExperimentConfig::new(Command::Steinberg, system).ring(ring)
}

fn budgets(mut c: ExperimentConfig, p: u32, q: u32, h: u32, k: u32, m: u32) -> ExperimentConfig {
    (c.p, c.q, c.h, c.k, c.m) = (Some(p), Some(q), Some(h), Some(k), Some(m));
    c
}

fn roots(mut c: ExperimentConfig, alpha: &str, beta: &str) -> ExperimentConfig {
    c.alpha = Some(alpha.to_string());
    c.beta = Some(beta.to_string());
    c
}

fn with_s(mut c: ExperimentConfig, s: &str) -> ExperimentConfig {
    c.s = Some(s.to_string());
    c
}

/// The built-in scenario grid, sorted by id.
pub fn catalog() -> Vec<Scenario> {
    let mut g2_adjoint = steinberg("G2", "Z/2");
    g2_adjoint.representation = RepChoice::Adjoint;
    let mut width3 = ExperimentConfig::new(Command::Width, "A2").ring("Z/3");
    width3.pair_cap = Some(50_000_000);
    let mut list = vec![
        sc("roots/G2", 0, "the 12 roots of G2 with heights and lengths", ExperimentConfig::new(Command::Roots, "G2")),
        sc("constants/B2", 0, "structure constants and commutator terms of B2", ExperimentConfig::new(Command::Constants, "B2")),
        sc("steinberg/SL3/Z2", 1, "Steinberg relations, SL3 over Z/2", steinberg("A2", "Z/2")),
        sc("steinberg/SL3/Z3", 1, "Steinberg relations, SL3 over Z/3", steinberg("A2", "Z/3")),
        sc("steinberg/SL3/Z4", 1, "Steinberg relations, SL3 over Z/4", steinberg("A2", "Z/4")),
        sc("steinberg/SL3/Z6", 1, "Steinberg relations, SL3 over Z/6", steinberg("A2", "Z/6")),
        sc("steinberg/Sp4/Z2", 1, "Steinberg relations, Sp4 over Z/2", steinberg("B2", "Z/2")),
        sc("steinberg/Sp4/Z3", 1, "Steinberg relations, Sp4 over Z/3", steinberg("B2", "Z/3")),
        sc("steinberg/G2-adjoint/Z2", 1, "Steinberg relations, adjoint G2 over Z/2", g2_adjoint),
        sc("commcalc/A2/formula", 2, "symbolic commutator formula over Z[a,b]", ExperimentConfig::new(Command::Commcalc, "A2")),
        sc("commcalc/B2/formula", 2, "symbolic commutator formula over Z[a,b]", ExperimentConfig::new(Command::Commcalc, "B2")),
        sc("commcalc/G2/formula", 2, "symbolic commutator formula over Z[a,b]", ExperimentConfig::new(Command::Commcalc, "G2")),
        sc("audit/A2", 3, "length audit over the exponent grid {0,1,2}", ExperimentConfig::new(Command::Audit, "A2").ring("Z[s,t,a,b] loc st")),
        sc("audit/B2", 3, "length audit over the exponent grid {0,1,2}", ExperimentConfig::new(Command::Audit, "B2").ring("Z[s,t,a,b] loc st")),
        sc("audit/G2", 3, "length audit over the exponent grid {0,1,2}", ExperimentConfig::new(Command::Audit, "G2").ring("Z[s,t,a,b] loc st")),
        sc(
            "conjcalc/A2/opposite-h2",
            4,
            "planned conjugation of an opposite pair with h = 2",
            budgets(roots(ExperimentConfig::new(Command::Conjcalc, "A2"), "1,0", "-1,0"), 1, 1, 2, 0, 0),
        ),
        sc(
            "commcalc/G2/opposite-k1-m1",
            4,
            "planned commutator of an opposite pair with k = m = 1",
            budgets(roots(ExperimentConfig::new(Command::Commcalc, "G2"), "1,0", "-1,0"), 1, 1, 0, 1, 1),
        ),
        sc(
            "relcalc/A2/L7",
            10,
            "relative conjugation with the ideal marker A",
            budgets(roots(ExperimentConfig::new(Command::Relcalc, "A2").ideal(&["A"]), "1,0", "-1,0"), 1, 1, 0, 1, 0),
        ),
        sc(
            "relcalc/A2/L9",
            10,
            "two-ideal commutator with the markers A and B",
            budgets(
                roots(ExperimentConfig::new(Command::Relcalc, "A2").ideal(&["A"]).ideal(&["B"]), "1,0", "-1,0"),
                1,
                1,
                0,
                1,
                1,
            ),
        ),
        sc("verify4c/SL3/Z6", 5, "(2) and (3) in Z/6", ExperimentConfig::new(Command::Verify4c, "A2").ring("Z/6").ideal(&["2"]).ideal(&["3"])),
        sc("verify4c/SL3/Z12-3-4", 5, "(3) and (4) in Z/12", ExperimentConfig::new(Command::Verify4c, "A2").ring("Z/12").ideal(&["3"]).ideal(&["4"])),
        sc("verify4c/SL3/Z12-3-2", 5, "(3) and (2) in Z/12", ExperimentConfig::new(Command::Verify4c, "A2").ring("Z/12").ideal(&["3"]).ideal(&["2"])),
        sc("verify4c/Sp4/Z6", 5, "(2) and (3) in Z/6", ExperimentConfig::new(Command::Verify4c, "B2").ring("Z/6").ideal(&["2"]).ideal(&["3"])),
        sc("verify3c/SL3/Z4", 6, "(2) and (2) in Z/4", ExperimentConfig::new(Command::Verify3c, "A2").ring("Z/4").ideal(&["2"]).ideal(&["2"])),
        sc("verify3c/SL3/Z9", 6, "(3) and (3) in Z/9", ExperimentConfig::new(Command::Verify3c, "A2").ring("Z/9").ideal(&["3"]).ideal(&["3"])),
        sc("normality/SL3/Z6", 7, "100 random conjugates over Z/6", ExperimentConfig::new(Command::Normality, "A2").ring("Z/6")),
        sc("normality/SL3/Z4", 7, "100 random conjugates over Z/4", ExperimentConfig::new(Command::Normality, "A2").ring("Z/4")),
        sc("width/SL3/Z2", 8, "exhaustive commutator lengths in SL(3,Z/2)", ExperimentConfig::new(Command::Width, "A2").ring("Z/2")),
        sc("width/SL3/Z3", 8, "exhaustive commutator lengths in SL(3,Z/3)", width3),
        sc("thm2/SL3/Z4-s2", 0, "continuity check with a nilpotent denominator", with_s(ExperimentConfig::new(Command::Thm2, "A2").ring("Z/4"), "2")),
        sc("thm2/SL3/Z6-s2", 0, "continuity check localising Z/6 at 2", with_s(ExperimentConfig::new(Command::Thm2, "A2").ring("Z/6"), "2")),
        sc("thm8/SL3/Z12-s2", 0, "localisation at 2 of SL3 over Z/12", with_s(ExperimentConfig::new(Command::Thm8, "A2").ring("Z/12"), "2")),
    ];
    list.sort_by(|a, b| a.id.cmp(b.id));
    list
}

/// Scenarios whose id equals `pattern` or starts with `pattern/`; `all`
/// selects everything.
pub fn select(pattern: &str) -> Vec<Scenario> {
    let p = pattern.trim_end_matches('/');
    catalog()
        .into_iter()
        .filter(|s| p == "all" || s.id == p || s.id.starts_with(&format!("{p}/")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique_sorted_and_cover_the_examples() {
        let ids: Vec<&str> = catalog().iter().map(|s| s.id).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(ids, sorted);
        assert!(ids.contains(&"verify4c/SL3/Z6"));
        assert!(ids.contains(&"steinberg/G2-adjoint/Z2"));
        assert_eq!(select("verify4c").len(), 4);
        assert_eq!(select("verify4c/SL3/Z6").len(), 1);
        assert_eq!(select("all").len(), ids.len());
        assert!(select("verify4").is_empty());
    }
}
