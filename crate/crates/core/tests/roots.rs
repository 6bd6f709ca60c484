use std::collections::HashSet;

use proptest::prelude::*;

use chevcalc::roots::{LengthClass, RootData, RootId};

#[test]
fn root_counts_across_types() {
    let expected = [
        ("A2", 6),
        ("A3", 12),
        ("A5", 30),
        ("B2", 8),
        ("B3", 18),
        ("C3", 18),
        ("C4", 32),
        ("D4", 24),
        ("D5", 40),
        ("G2", 12),
        ("F4", 48),
        ("E6", 72),
        ("E7", 126),
        ("E8", 240),
    ];
    for (name, count) in expected {
        let data = RootData::parse(name).unwrap();
        let phi = &data.phi;
        assert_eq!(phi.len(), count, "{name}");
        assert_eq!(phi.num_positive() * 2, count, "{name}");
        let set: HashSet<Vec<i32>> = phi.roots().iter().map(|r| r.coords.clone()).collect();
        assert_eq!(set.len(), count, "{name}: roots are distinct");
        for id in phi.ids() {
            let neg: Vec<i32> = phi.root(id).coords.iter().map(|c| -c).collect();
            assert!(set.contains(&neg), "{name}: closed under negation");
        }
    }
    assert!(RootData::parse("A1").is_err());
    assert!(RootData::parse("X9").is_err());
}

#[test]
fn lacing_numbers_and_length_classes() {
    for (name, i_phi, short) in [("A3", 1, 0), ("B3", 2, 6), ("C3", 2, 12), ("F4", 2, 24), ("G2", 3, 6), ("E6", 1, 0)] {
        let data = RootData::parse(name).unwrap();
        let phi = &data.phi;
        assert_eq!(phi.i_phi(), i_phi, "{name}");
        let shorts = phi.roots().iter().filter(|r| r.length == LengthClass::Short).count();
        assert_eq!(shorts, short, "{name}");
        assert_eq!(data.consts.max_i() as i32, i_phi, "{name}");
    }
}

fn system() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec!["A2", "A3", "B2", "B3", "C3", "G2", "D4", "F4"])
}

fn system_and_pair() -> impl Strategy<Value = (&'static str, u16, u16)> {
    system().prop_flat_map(|s| {
        let n = RootData::parse(s).unwrap().phi.len() as u16;
        (Just(s), 0..n, 0..n)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn structure_constants_follow_root_strings((name, a, b) in system_and_pair()) {
        let data = RootData::parse(name).unwrap();
        let phi = &data.phi;
        let (alpha, beta) = (RootId(a), RootId(b));
        prop_assume!(alpha != beta && alpha != phi.neg(beta));
        let (p, q) = phi.root_chain(alpha, beta).unwrap();
        prop_assert!(p + q <= 3);
        let n = data.consts.n(alpha, beta);
        prop_assert_eq!(n, -data.consts.n(beta, alpha));
        match phi.add(alpha, beta) {
            Some(_) => prop_assert_eq!(n.abs(), p + 1),
            None => prop_assert_eq!(n, 0),
        }
        let terms = data.consts.commutator(alpha, beta);
        prop_assert_eq!(terms.is_empty(), q == 0);
        for t in terms {
            let expected: Vec<i32> = phi.root(alpha).coords.iter().zip(&phi.root(beta).coords)
                .map(|(x, y)| t.i as i32 * x + t.j as i32 * y)
                .collect();
            prop_assert_eq!(&phi.root(t.root).coords, &expected);
            prop_assert!(t.coeff != 0);
        }
        prop_assert_eq!(phi.parse_root(&phi.format_root(alpha)).unwrap(), alpha);
    }

    #[test]
    fn obtuse_pairs_add_and_acute_pairs_subtract((name, a, b) in system_and_pair()) {
        let data = RootData::parse(name).unwrap();
        let phi = &data.phi;
        let (alpha, beta) = (RootId(a), RootId(b));
        prop_assume!(alpha != beta && alpha != phi.neg(beta));
        let ip = phi.inner(alpha, beta);
        if ip < 0 {
            prop_assert!(phi.add(alpha, beta).is_some());
        }
        if ip > 0 {
            prop_assert!(phi.combination(-1, alpha, 1, beta).is_some());
        }
    }
}
