use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::construct::ambient_table;
use super::group::{GroupDescriptor, GroupElement};
use super::table::SubgroupTable;
use super::SubgroupError;
use crate::chevalley::{Gen, Word};
use crate::par::Exec;
use crate::ring::{ann_stabilize, localise_finite, maximal_ideals, partition_of_one, Elem, Ideal, LocalisationMap};
use crate::roots::RootId;

/// One localisation used by the decomposition.
#[derive(Clone, Debug, Serialize)]
pub struct Chart {
    pub maximal_ideal: String,
    /// Denominator: outside this maximal ideal, inside all the others.
    pub s: String,
    /// Stabilisation exponent of `Ann(s^k)`; `F_s` is injective on `s^k R`.
    pub k: u32,
    /// Power used in the partition of one.
    pub l: u32,
    pub eta: String,
    /// `ζ = s^l η`; the `ζ` of all charts sum to one.
    pub zeta: String,
    pub local_ring: String,
    pub local_group_order: usize,
}

struct ChartData {
    chart: Chart,
    zeta: Elem,
    loc: LocalisationMap,
    local: SubgroupTable,
    /// `lift[η]` is the unique element of `s^k R` mapping to `η`.
    lift: Vec<Elem>,
}

/// Charts and local enumerations for one ambient group, reusable across
/// decompositions.
pub struct NormalityContext {
    desc: GroupDescriptor,
    charts: Vec<ChartData>,
}

impl NormalityContext {
    /// One chart per maximal ideal `M_i`: the first `s_i` in carrier order
    /// with `s_i ∉ M_i` and `s_i ∈ M_j` for `j ≠ i`, its localisation, and
    /// the enumerated group over it.
    pub fn new(desc: &GroupDescriptor, cap: usize, exec: Exec) -> Result<Self, SubgroupError> {
        let r = desc.ring();
        let maxes = maximal_ideals(r);
        let mut picked = Vec::new();
        for (i, m) in maxes.iter().enumerate() {
            let s = r
                .elements()
                .find(|&a| !m.contains(a) && maxes.iter().enumerate().all(|(j, n)| j == i || n.contains(a)))
                .expect("maximal ideals of a finite ring are pairwise comaximal");
            let k = ann_stabilize(r, s);
            picked.push((m, s, k));
        }
        let pairs: Vec<(Elem, u32)> = picked.iter().map(|&(_, s, k)| (s, k)).collect();
        let etas = partition_of_one(r, &pairs)?;
        let mut charts = Vec::new();
        for ((m, s, k), eta) in picked.into_iter().zip(etas) {
            let loc = localise_finite(r, s)?;
            let local_desc = desc.over(loc.target.clone())?;
            let local = ambient_table(&local_desc, cap, exec)?;
            let level = Ideal::generated(r.clone(), &[r.pow_e(s, k)]);
            let mut lift = vec![None; loc.target.size()];
            for &a in level.members() {
                lift[loc.apply(a).index()] = Some(a);
            }
            let lift: Vec<Elem> = lift
                .into_iter()
                .map(|x| x.expect("F_s maps s^k R onto R_s"))
                .collect();
            let zeta = r.mul_e(r.pow_e(s, k), eta);
            charts.push(ChartData {
                chart: Chart {
                    maximal_ideal: m.label(),
                    s: r.label(s).to_string(),
                    k,
                    l: k,
                    eta: r.label(eta).to_string(),
                    zeta: r.label(zeta).to_string(),
                    local_ring: loc.target.name().to_string(),
                    local_group_order: local.order(),
                },
                zeta,
                loc,
                local,
                lift,
            });
        }
        Ok(NormalityContext { desc: desc.clone(), charts })
    }

    pub fn descriptor(&self) -> &GroupDescriptor {
        &self.desc
    }

    pub fn charts(&self) -> Vec<Chart> {
        self.charts.iter().map(|c| c.chart.clone()).collect()
    }
}

/// An elementary word for `g x_α(ξ) g^{-1}` with its provenance.
#[derive(Clone, Debug, Serialize)]
pub struct Decomposition {
    #[serde(skip)]
    pub word: Word<Elem>,
    pub word_lines: Vec<String>,
    pub charts: Vec<Chart>,
    /// Length of the local word for `F_s(g)` in each chart.
    pub local_lengths: Vec<usize>,
    pub partition_sums_to_one: bool,
    pub oracle_checked: bool,
}

impl Decomposition {
    /// Human-readable provenance block.
    pub fn provenance_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "charts: {}", self.charts.len());
        for (c, len) in self.charts.iter().zip(&self.local_lengths) {
            let _ = writeln!(
                s,
                "  M = {}  s = {}  k = {}  l = {}  eta = {}  zeta = {}  R_s = {}  |G(R_s)| = {}  local word length = {}",
                c.maximal_ideal, c.s, c.k, c.l, c.eta, c.zeta, c.local_ring, c.local_group_order, len
            );
        }
        let zetas: Vec<&str> = self.charts.iter().map(|c| c.zeta.as_str()).collect();
        let _ = writeln!(s, "partition: {} = 1 ({})", zetas.join(" + "), self.partition_sums_to_one);
        let _ = writeln!(s, "word length: {}", self.word.len());
        let _ = writeln!(s, "oracle: {}", if self.oracle_checked { "equal" } else { "MISMATCH" });
        s
    }
}

/// Writes `g x_α(ξ) g^{-1}` as an elementary word by patching local
/// rewrites: `x_α(ξ) = Π x_α(ζ_i ξ)`, and each conjugate
/// `g x_α(ζ_i ξ) g^{-1}` is rewritten over `R_{s_i}`, where `F_{s_i}(g)` has a
/// word from the local enumeration, then pulled back through the section
/// `R_{s_i} → s_i^{k_i} R`. Since `ζ_i ∈ s_i^{k_i} R`, the pulled-back
/// conjugate agrees with the original one.
pub fn normality_decompose(
    ctx: &NormalityContext,
    g: &GroupElement,
    alpha: RootId,
    xi: Elem,
) -> Result<Decomposition, SubgroupError> {
    let desc = &ctx.desc;
    let r = &**desc.ring();
    let mut word = Word::default();
    let mut local_lengths = Vec::new();
    let mut sum = r.zero_e();
    for c in &ctx.charts {
        let local_g = g.reduce(&c.loc.projection);
        let local_word = c
            .local
            .word_for(&local_g)
            .ok_or_else(|| SubgroupError::NotASubgroup(c.local.name().to_string()))?;
        local_lengths.push(local_word.len());
        let lifted = Word::new(
            local_word
                .factors
                .iter()
                .map(|f| Gen::new(f.root, c.lift[f.param.index()]))
                .collect(),
        );
        let piece = Word::single(alpha, r.mul_e(c.zeta, xi)).conjugate_by(r, &lifted);
        word.extend(&piece);
        sum = r.add_e(sum, c.zeta);
    }
    let word = word.simplify(r);
    let target = desc.conjugate(g, &desc.unipotent(alpha, xi));
    let oracle_checked = word.evaluate(desc.rep(), r) == target;
    let phi = desc.system();
    Ok(Decomposition {
        word_lines: word.to_lines(phi, r).lines().map(str::to_string).collect(),
        word,
        charts: ctx.charts(),
        local_lengths,
        partition_sums_to_one: sum == r.one_e(),
        oracle_checked,
    })
}

/// A product of `steps` random root unipotents with nonzero parameters.
pub fn random_element(desc: &GroupDescriptor, seed: u64, steps: usize) -> GroupElement {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let roots: Vec<RootId> = desc.system().ids().collect();
    let size = desc.ring().size();
    let mut g = desc.identity();
    for _ in 0..steps {
        let alpha = roots[rng.gen_range(0..roots.len())];
        let xi = Elem(rng.gen_range(1..size.max(2)) as u16);
        g = desc.rep().right_mul(&**desc.ring(), &g, alpha, &xi);
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subgroups::DEFAULT_ORDER_CAP;

    #[test]
    fn two_charts_over_z6() {
        let d = GroupDescriptor::parse("A2", "Z/6").unwrap();
        let ctx = NormalityContext::new(&d, DEFAULT_ORDER_CAP, Exec::Parallel).unwrap();
        let charts = ctx.charts();
        assert_eq!(charts.len(), 2);
        assert_eq!((charts[0].s.as_str(), charts[1].s.as_str()), ("3", "2"));
        assert_eq!((charts[0].zeta.as_str(), charts[1].zeta.as_str()), ("3", "4"));
        let alpha = d.system().simple(0);
        let id = normality_decompose(&ctx, &d.identity(), alpha, d.ring().int(5)).unwrap();
        assert_eq!(id.word, Word::single(alpha, d.ring().int(5)));
        for seed in 0..5 {
            let g = random_element(&d, seed, 12);
            let dec = normality_decompose(&ctx, &g, d.system().neg(alpha), d.ring().int(1)).unwrap();
            assert!(dec.oracle_checked && dec.partition_sums_to_one);
        }
        assert!(id.provenance_text().contains("partition: 3 + 4 = 1 (true)"));
    }

    #[test]
    fn single_chart_over_z4() {
        let d = GroupDescriptor::parse("A2", "Z/4").unwrap();
        let ctx = NormalityContext::new(&d, DEFAULT_ORDER_CAP, Exec::Parallel).unwrap();
        let charts = ctx.charts();
        assert_eq!(charts.len(), 1);
        assert_eq!((charts[0].s.as_str(), charts[0].k, charts[0].zeta.as_str()), ("1", 0, "1"));
        let g = random_element(&d, 3, 20);
        let dec = normality_decompose(&ctx, &g, d.system().simple(1), d.ring().int(2)).unwrap();
        assert!(dec.oracle_checked && dec.partition_sums_to_one);
    }
}
