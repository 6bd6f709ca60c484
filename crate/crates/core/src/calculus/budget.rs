use serde::{Deserialize, Serialize};

/// The rewriting procedures, named after the statements they construct.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Lemma {
    L3,
    L4,
    L5,
    L6,
    L7,
    L9,
}

impl std::fmt::Display for Lemma {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

impl std::str::FromStr for Lemma {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "L3" | "3" => Ok(Lemma::L3),
            "L4" | "4" => Ok(Lemma::L4),
            "L5" | "5" => Ok(Lemma::L5),
            "L6" | "6" => Ok(Lemma::L6),
            "L7" | "7" => Ok(Lemma::L7),
            "L9" | "9" => Ok(Lemma::L9),
            other => Err(format!("unknown lemma `{other}`")),
        }
    }
}

/// Relative position of the two roots involved in a single-generator step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Case {
    SameRoot,
    NonOpposite,
    Opposite,
    /// Words of several factors.
    General,
}

impl std::fmt::Display for Case {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Case::SameRoot => "same-root",
            Case::NonOpposite => "non-opposite",
            Case::Opposite => "opposite",
            Case::General => "general",
        })
    }
}

/// Targets and denominators handed to the planner.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PlanInput {
    pub p: u32,
    pub q: u32,
    pub h: u32,
    pub k: u32,
    pub m: u32,
}

/// Exponents of a rewrite: targets `p, q`, denominators `h, k, m` and the
/// planned numerators `o, r` (conjugation) or `l, n` (commutators). For the
/// relative conjugation the planned input level is stored in `o, r`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExponentBudget {
    pub p: u32,
    pub q: u32,
    pub h: u32,
    pub k: u32,
    pub m: u32,
    pub o: u32,
    pub r: u32,
    pub l: u32,
    pub n: u32,
    /// True when the numerators were found by trial runs rather than a
    /// closed formula.
    pub searched: bool,
}

impl ExponentBudget {
    pub fn from_input(input: &PlanInput) -> Self {
        ExponentBudget {
            p: input.p,
            q: input.q,
            h: input.h,
            k: input.k,
            m: input.m,
            ..Default::default()
        }
    }
}

/// `o = iΦ·h + p + 1`, `r = q`.
pub fn conjugation_formula(i_phi: u32, input: &PlanInput) -> (u32, u32) {
    (i_phi * input.h + input.p + 1, input.q)
}

/// `l = iΦ·m + q + 1`, `n = iΦ·k + p + 1`.
pub fn commutator_formula(i_phi: u32, input: &PlanInput) -> (u32, u32) {
    (i_phi * input.m + input.q + 1, i_phi * input.k + input.p + 1)
}

/// Largest exponent the search is allowed to try.
pub const SEARCH_LIMIT: u32 = 512;

/// Smallest passing pair reachable from `start` for a trial that is
/// assumed monotone in both coordinates: grow both until the trial passes,
/// then bisect the first coordinate and finally the second.
pub fn search_pair<F>(start: (u32, u32), mut trial: F) -> Option<(u32, u32)>
where
    F: FnMut(u32, u32) -> bool,
{
    let (mut a, mut b) = start;
    while !trial(a, b) {
        if a >= SEARCH_LIMIT && b >= SEARCH_LIMIT {
            return None;
        }
        a = (2 * a).clamp(1, SEARCH_LIMIT);
        b = (2 * b).clamp(1, SEARCH_LIMIT);
    }
    let a_min = bisect(a, |x| trial(x, b));
    let b_min = bisect(b, |y| trial(a_min, y));
    Some((a_min, b_min))
}

/// Smallest `x ≤ hi` with `ok(x)`, given `ok(hi)`.
fn bisect<F: FnMut(u32) -> bool>(hi: u32, mut ok: F) -> u32 {
    let (mut lo, mut hi) = (0u32, hi);
    if ok(0) {
        return 0;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formulas_match_worked_examples() {
        let i = PlanInput { p: 1, q: 1, k: 1, m: 1, h: 0 };
        assert_eq!(commutator_formula(1, &i), (3, 3));
        let i = PlanInput { p: 1, q: 0, h: 2, ..Default::default() };
        assert_eq!(conjugation_formula(3, &i), (8, 0));
        let i = PlanInput { p: 2, q: 0, k: 1, m: 0, h: 0 };
        assert_eq!(commutator_formula(2, &i), (1, 5));
    }

    #[test]
    fn search_finds_the_corner_of_a_monotone_region() {
        let found = search_pair((1, 1), |a, b| a >= 7 && b >= 3);
        assert_eq!(found, Some((7, 3)));
        assert_eq!(search_pair((0, 0), |_, _| true), Some((0, 0)));
        assert_eq!(search_pair((1, 1), |_, _| false), None);
    }

    #[test]
    fn lemma_names_parse() {
        assert_eq!("l5".parse::<Lemma>().unwrap(), Lemma::L5);
        assert!("L8".parse::<Lemma>().is_err());
        assert_eq!(Case::NonOpposite.to_string(), "non-opposite");
    }
}
