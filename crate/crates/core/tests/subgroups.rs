use std::collections::HashSet;
use std::sync::OnceLock;

use proptest::prelude::*;

use chevcalc::par::Exec;
use chevcalc::ring::{Elem, Ideal};
use chevcalc::subgroups::{
    ambient_table, commutator_width, congruence_subgroup, enumerate_elementary, full_congruence_subgroup,
    mutual_commutator, normality_decompose, random_element, GroupDescriptor, NormalityContext, SubgroupError,
    SubgroupLevel, SubgroupTable, WidthMode, DEFAULT_ORDER_CAP,
};

fn sl_order(n: u32, p: u64, k: u32) -> u64 {
    let gl: u64 = (0..n).map(|i| p.pow(n) - p.pow(i)).product();
    gl / (p - 1) * p.pow((k - 1) * (n * n - 1))
}

fn sp4_order(q: u64) -> u64 {
    q.pow(4) * (q * q - 1) * (q.pow(4) - 1)
}

struct Fixture {
    desc: GroupDescriptor,
    ambient: SubgroupTable,
}

fn fixture(system: &str, ring: &str) -> Fixture {
    let desc = GroupDescriptor::parse(system, ring).unwrap();
    let ambient = ambient_table(&desc, DEFAULT_ORDER_CAP, Exec::Parallel).unwrap();
    Fixture { desc, ambient }
}

fn sl3_z4() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| fixture("A2", "Z/4"))
}

fn sl3_dual() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| fixture("A2", "Z/2[u]/(u^2)"))
}

#[test]
fn ambient_orders_match_closed_formulas() {
    let cases = [
        ("A2", "Z/2", sl_order(3, 2, 1)),
        ("A2", "Z/3", sl_order(3, 3, 1)),
        ("A3", "Z/2", sl_order(4, 2, 1)),
        ("B2", "Z/2", sp4_order(2)),
        ("B2", "Z/3", sp4_order(3)),
    ];
    for (system, ring, order) in cases {
        let f = fixture(system, ring);
        assert_eq!(f.ambient.order() as u64, order, "{system} over {ring}");
        assert!(f.ambient.verify_closure());
    }
    assert_eq!(sl3_z4().ambient.order() as u64, sl_order(3, 2, 2));
    assert_eq!(sl3_dual().ambient.order() as u64, sl_order(3, 2, 2));
}

#[test]
fn sequential_and_parallel_enumerations_agree() {
    let desc = GroupDescriptor::parse("B2", "Z/2").unwrap();
    let a = ambient_table(&desc, DEFAULT_ORDER_CAP, Exec::Sequential).unwrap();
    let b = ambient_table(&desc, DEFAULT_ORDER_CAP, Exec::Parallel).unwrap();
    assert!(a.same_elements(&b));
    assert_eq!(a.length_histogram(), b.length_histogram());
}

#[test]
fn caps_and_key_width_are_enforced() {
    let desc = GroupDescriptor::parse("A2", "Z/3").unwrap();
    assert_eq!(
        ambient_table(&desc, 100, Exec::Parallel).unwrap_err(),
        SubgroupError::OrderCapExceeded { cap: 100 }
    );
    assert!(matches!(GroupDescriptor::parse("G2", "Z/2"), Err(SubgroupError::KeyTooWide { .. })));
    assert!(GroupDescriptor::parse("A2", "Z[s]").is_err());
}

fn check_chain(f: &Fixture, ideal: &Ideal) {
    let cap = DEFAULT_ORDER_CAP;
    let e_i = enumerate_elementary(&f.desc, &SubgroupLevel::Ideal(ideal.clone()), cap, Exec::Parallel).unwrap();
    let e_ri = enumerate_elementary(&f.desc, &SubgroupLevel::Relative(ideal.clone()), cap, Exec::Parallel).unwrap();
    let g_ri = congruence_subgroup(&f.desc, ideal, cap, Exec::Parallel).unwrap();
    let c_ri = full_congruence_subgroup(&f.desc, ideal, cap, Exec::Parallel).unwrap();
    let chain = [&e_i, &e_ri, &g_ri, &c_ri, &f.ambient];
    for pair in chain.windows(2) {
        assert!(pair[0].is_subset(pair[1]), "{} in {}", pair[0].name(), pair[1].name());
        assert_eq!(pair[1].order() % pair[0].order(), 0, "Lagrange for {}", pair[0].name());
    }
    for t in [&e_i, &e_ri] {
        assert!(t.verify_closure(), "{}", t.name());
    }
    // E(R, I) is normal in the whole group.
    for g in f.ambient.generators() {
        for h in e_ri.elements() {
            assert!(e_ri.contains(&f.desc.conjugate(g, &h)));
        }
    }
    // G(R, I) is the kernel of reduction mod I, counted independently.
    let (q, proj) = ideal.quotient();
    let kernel = f
        .ambient
        .elements()
        .filter(|g| {
            let dim = g.dim;
            (0..dim).all(|r| (0..dim).all(|c| proj[g.get(r, c).index()] == if r == c { q.one_e() } else { q.zero_e() }))
        })
        .count();
    assert_eq!(g_ri.order(), kernel);
}

#[test]
fn subgroup_chain_over_z4() {
    let f = sl3_z4();
    let two = Ideal::generated(f.desc.ring().clone(), &[Elem(2)]);
    check_chain(f, &two);
    let g = congruence_subgroup(&f.desc, &two, DEFAULT_ORDER_CAP, Exec::Parallel).unwrap();
    assert_eq!(g.order(), 256);
}

#[test]
fn subgroup_chain_over_dual_numbers() {
    let f = sl3_dual();
    let r = f.desc.ring().clone();
    let u = r.parse_elem("u").unwrap();
    check_chain(f, &Ideal::generated(r, &[u]));
}

#[test]
fn elementary_group_is_perfect() {
    let f = fixture("A2", "Z/2");
    let c = mutual_commutator(&f.ambient, &f.ambient, DEFAULT_ORDER_CAP, Exec::Parallel).unwrap();
    assert!(c.same_elements(&f.ambient));
}

fn index(n: usize) -> impl Strategy<Value = usize> {
    0..n
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cayley_lengths_are_consistent(i in index(43008), j in index(43008)) {
        let f = sl3_z4();
        let (g, h) = (f.ambient.element(i), f.ambient.element(j));
        let len = f.ambient.length(&g).unwrap();
        prop_assert_eq!(len == 0, f.desc.is_identity(&g));
        prop_assert_eq!(f.ambient.length(&f.desc.inverse(&g)), Some(len));
        let gh = f.desc.mul(&g, &h);
        prop_assert!(f.ambient.length(&gh).unwrap() <= len + f.ambient.length(&h).unwrap());
        let word = f.ambient.word_for(&g).unwrap();
        prop_assert_eq!(word.len() as u32, len);
        prop_assert_eq!(word.evaluate(f.desc.rep(), &**f.desc.ring()), g);
    }
}

#[test]
fn width_scan_counts_commuting_pairs() {
    let f = fixture("A2", "Z/2");
    let report = commutator_width(&f.ambient, &f.ambient, &f.ambient, u64::MAX, 0, Exec::Parallel).unwrap();
    let n = f.ambient.order() as u64;
    assert_eq!(report.mode, WidthMode::Exhaustive);
    assert_eq!(report.histogram.values().sum::<u64>(), n * n);
    // Conjugacy classes by brute force: commuting pairs = |G| k(G).
    let elems: Vec<_> = f.ambient.elements().collect();
    let mut seen = HashSet::new();
    let mut classes = 0u64;
    for g in &elems {
        if seen.contains(&g.data) {
            continue;
        }
        classes += 1;
        for h in &elems {
            seen.insert(f.desc.conjugate(h, g).data);
        }
    }
    assert_eq!(report.histogram.get(&0).copied().unwrap_or(0), n * classes);
    assert_eq!(report.n, *report.histogram.keys().max().unwrap());

    let sampled = commutator_width(&f.ambient, &f.ambient, &f.ambient, 1000, 7, Exec::Sequential).unwrap();
    let again = commutator_width(&f.ambient, &f.ambient, &f.ambient, 1000, 7, Exec::Parallel).unwrap();
    assert!(matches!(sampled.mode, WidthMode::Sampled { .. }));
    assert_eq!(sampled.histogram, again.histogram);
}

#[test]
fn normality_decompositions_patch_local_words() {
    let desc = GroupDescriptor::parse("A2", "Z/6").unwrap();
    let ctx = NormalityContext::new(&desc, DEFAULT_ORDER_CAP, Exec::Parallel).unwrap();
    assert_eq!(ctx.charts().len(), 2);
    let r = desc.ring().clone();
    for seed in 0..20u64 {
        let g = random_element(&desc, seed, 12);
        assert_eq!(desc.satisfies_equations(&g), Some(true));
        let alpha = desc.system().ids().nth(seed as usize % 6).unwrap();
        let xi = Elem((seed % 6) as u16);
        let d = normality_decompose(&ctx, &g, alpha, xi).unwrap();
        assert!(d.partition_sums_to_one && d.oracle_checked);
        let target = desc.conjugate(&g, &desc.unipotent(alpha, xi));
        assert_eq!(d.word.evaluate(desc.rep(), &*r), target);
    }
}
