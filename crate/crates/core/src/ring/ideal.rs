use std::fmt;
use std::sync::Arc;

use super::finite::{Elem, FiniteRing};
use super::RingError;

/// An ideal of a finite ring with an eagerly materialised carrier.
#[derive(Clone)]
pub struct Ideal {
    ambient: Arc<FiniteRing>,
    generators: Vec<Elem>,
    mask: Vec<bool>,
    members: Vec<Elem>,
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ideal{} in {}", self.label(), self.ambient.name())
    }
}

impl PartialEq for Ideal {
    fn eq(&self, other: &Self) -> bool {
        *self.ambient == *other.ambient && self.mask == other.mask
    }
}

impl Eq for Ideal {}

impl Ideal {
    /// The ideal generated by `generators`.
    pub fn generated(ambient: Arc<FiniteRing>, generators: &[Elem]) -> Ideal {
        let r = &*ambient;
        let mut mask = vec![false; r.size()];
        mask[0] = true;
        let mut members = vec![r.zero_e()];
        // every element of the ideal is a sum of multiples r*g
        let mut spanning: Vec<Elem> = Vec::new();
        let mut seen = vec![false; r.size()];
        for &g in generators {
            for x in r.elements() {
                let y = r.mul_e(x, g);
                if !seen[y.index()] {
                    seen[y.index()] = true;
                    spanning.push(y);
                }
            }
        }
        for &c in &spanning {
            if mask[c.index()] {
                continue;
            }
            let mut frontier = members.clone();
            while let Some(x) = frontier.pop() {
                let y = r.add_e(x, c);
                if !mask[y.index()] {
                    mask[y.index()] = true;
                    members.push(y);
                    frontier.push(y);
                }
            }
        }
        members.sort();
        Ideal {
            ambient,
            generators: generators.to_vec(),
            mask,
            members,
        }
    }

    pub fn zero(ambient: Arc<FiniteRing>) -> Ideal {
        Self::generated(ambient, &[])
    }

    pub fn unit(ambient: Arc<FiniteRing>) -> Ideal {
        let one = ambient.one_e();
        Self::generated(ambient, &[one])
    }

    /// Parses generators given as element labels or integers.
    pub fn parse(ambient: Arc<FiniteRing>, gens: &[String]) -> Result<Ideal, RingError> {
        let elems = gens
            .iter()
            .map(|g| ambient.parse_elem(g))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::generated(ambient, &elems))
    }

    pub fn ambient(&self) -> &Arc<FiniteRing> {
        &self.ambient
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    /// Carrier in enumeration order.
    pub fn members(&self) -> &[Elem] {
        &self.members
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn contains(&self, a: Elem) -> bool {
        self.mask[a.index()]
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn is_zero(&self) -> bool {
        self.members.len() == 1
    }

    pub fn is_unit(&self) -> bool {
        self.contains(self.ambient.one_e())
    }

    pub fn is_subset(&self, other: &Ideal) -> bool {
        self.members.iter().all(|&a| other.contains(a))
    }

    /// Generator list as printed, e.g. `(2,3)`.
    pub fn label(&self) -> String {
        let gens: Vec<&str> = self
            .generators
            .iter()
            .map(|&g| self.ambient.label(g))
            .collect();
        format!("({})", gens.join(","))
    }

    /// `R/I` together with the projection `R -> R/I`.
    pub fn quotient(&self) -> (FiniteRing, Vec<Elem>) {
        let gens: Vec<&str> = self
            .generators
            .iter()
            .map(|&g| self.ambient.label(g))
            .collect();
        self.ambient.quotient(&self.mask, &gens.join(","))
    }

    /// Greedy additive generating set of the carrier.
    pub fn additive_generators(&self) -> Vec<Elem> {
        super::finite::additive_basis(&self.ambient, &self.members)
    }
}

/// Result of [`ideal_ops`].
#[derive(Clone, Debug)]
pub struct IdealOps {
    pub sum: Ideal,
    pub product: Ideal,
    pub comaximal: bool,
}

/// Sum, product and comaximality of two ideals of the same ring.
pub fn ideal_ops(a: &Ideal, b: &Ideal) -> Result<IdealOps, RingError> {
    if !Arc::ptr_eq(&a.ambient, &b.ambient) && *a.ambient != *b.ambient {
        return Err(RingError::AmbientMismatch);
    }
    let r = a.ambient.clone();
    let sum_gens: Vec<Elem> = a.generators.iter().chain(&b.generators).copied().collect();
    let sum = Ideal::generated(r.clone(), &sum_gens);
    let prod_gens: Vec<Elem> = a
        .generators
        .iter()
        .flat_map(|&x| b.generators.iter().map(move |&y| (x, y)))
        .map(|(x, y)| r.mul_e(x, y))
        .collect();
    let product = Ideal::generated(r, &prod_gens);
    let comaximal = sum.is_unit();
    Ok(IdealOps {
        sum,
        product,
        comaximal,
    })
}

/// `Ann_R(a)`.
pub fn annihilator(r: &Arc<FiniteRing>, a: Elem) -> Ideal {
    let members: Vec<Elem> = r
        .elements()
        .filter(|&x| r.mul_e(a, x) == r.zero_e())
        .collect();
    Ideal::generated(r.clone(), &members)
}

fn annihilator_mask(r: &FiniteRing, a: Elem) -> Vec<bool> {
    r.elements()
        .map(|x| r.mul_e(a, x) == r.zero_e())
        .collect()
}

/// Least `k` with `Ann(s^k) = Ann(s^{k+1})`.
pub fn ann_stabilize(r: &FiniteRing, s: Elem) -> u32 {
    let mut k = 0;
    let mut power = r.one_e();
    let mut current = annihilator_mask(r, power);
    loop {
        power = r.mul_e(power, s);
        let next = annihilator_mask(r, power);
        if next == current {
            return k;
        }
        current = next;
        k += 1;
    }
}

/// True iff the ring has no nonzero nilpotent element.
pub fn is_semisimple(r: &FiniteRing) -> bool {
    r.elements()
        .all(|a| a == r.zero_e() || !r.is_nilpotent(a))
}

/// The principal localisation `R -> R_s` of a finite ring, realised as the
/// quotient by the `s`-power torsion.
#[derive(Clone, Debug)]
pub struct LocalisationMap {
    pub source: Arc<FiniteRing>,
    pub s: Elem,
    pub kernel: Ideal,
    pub target: Arc<FiniteRing>,
    pub projection: Vec<Elem>,
    pub image_of_s_inverse: Elem,
}

impl LocalisationMap {
    pub fn apply(&self, a: Elem) -> Elem {
        self.projection[a.index()]
    }

    pub fn image_of_s(&self) -> Elem {
        self.apply(self.s)
    }
}

/// Localises `r` at the powers of `s`.
pub fn localise_finite(r: &Arc<FiniteRing>, s: Elem) -> Result<LocalisationMap, RingError> {
    if r.is_nilpotent(s) {
        return Err(RingError::NilpotentDenominator(r.label(s).to_string()));
    }
    let k = ann_stabilize(r, s);
    let sk = r.pow_e(s, k);
    let kernel = annihilator(r, sk);
    let (target, projection) = kernel.quotient();
    let s_img = projection[s.index()];
    let image_of_s_inverse = target
        .inverse(s_img)
        .expect("s is invertible modulo its power torsion");
    Ok(LocalisationMap {
        source: r.clone(),
        s,
        kernel,
        target: Arc::new(target),
        projection,
        image_of_s_inverse,
    })
}

/// Coefficients `η_i` with `Σ s_i^{l_i} η_i = 1`, lexicographically smallest
/// in carrier order.
pub fn partition_of_one(r: &Arc<FiniteRing>, pairs: &[(Elem, u32)]) -> Result<Vec<Elem>, RingError> {
    let powers: Vec<Elem> = pairs.iter().map(|&(s, l)| r.pow_e(s, l)).collect();
    // tails[i] = ideal generated by powers[i..]
    let tails: Vec<Ideal> = (0..=powers.len())
        .map(|i| Ideal::generated(r.clone(), &powers[i..]))
        .collect();
    if !tails[0].is_unit() {
        return Err(RingError::NotUnitIdeal);
    }
    let mut remainder = r.one_e();
    let mut etas = Vec::with_capacity(powers.len());
    for (i, &a) in powers.iter().enumerate() {
        let eta = r
            .elements()
            .find(|&eta| {
                let rest = r.add_e(remainder, r.neg_e(r.mul_e(a, eta)));
                tails[i + 1].contains(rest)
            })
            .expect("remainder lies in the tail ideal");
        remainder = r.add_e(remainder, r.neg_e(r.mul_e(a, eta)));
        etas.push(eta);
    }
    debug_assert_eq!(remainder, r.zero_e());
    Ok(etas)
}

/// All maximal ideals, in order of their first-found member.
pub fn maximal_ideals(r: &Arc<FiniteRing>) -> Vec<Ideal> {
    let mut found: Vec<Ideal> = Vec::new();
    for a in r.elements() {
        if r.is_unit(a) || found.iter().any(|m| m.contains(a)) {
            continue;
        }
        let mut gens = vec![a];
        let mut ideal = Ideal::generated(r.clone(), &gens);
        for b in r.elements() {
            if ideal.contains(b) || r.is_unit(b) {
                continue;
            }
            gens.push(b);
            let bigger = Ideal::generated(r.clone(), &gens);
            if bigger.is_unit() {
                gens.pop();
            } else {
                ideal = bigger;
            }
        }
        found.push(ideal);
    }
    found
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zm(m: u64) -> Arc<FiniteRing> {
        Arc::new(FiniteRing::integers_mod(m).unwrap())
    }

    fn labels(i: &Ideal) -> Vec<String> {
        i.members()
            .iter()
            .map(|&e| i.ambient().label(e).to_string())
            .collect()
    }

    #[test]
    fn annihilator_chain_stabilises() {
        let r = zm(8);
        assert_eq!(ann_stabilize(&r, r.int(2)), 3);
        let r = zm(6);
        assert_eq!(ann_stabilize(&r, r.int(5)), 0);
        let r = zm(12);
        assert_eq!(ann_stabilize(&r, r.int(2)), 2);
    }

    #[test]
    fn semisimplicity() {
        assert!(is_semisimple(&zm(6)));
        assert!(!is_semisimple(&zm(8)));
        assert!(!is_semisimple(&FiniteRing::truncated(3, 2).unwrap()));
    }

    #[test]
    fn localisation_examples() {
        let r = zm(12);
        let loc = localise_finite(&r, r.int(2)).unwrap();
        assert_eq!(labels(&loc.kernel), ["0", "3", "6", "9"]);
        assert_eq!(loc.target.size(), 3);
        assert_eq!(loc.target.label(loc.image_of_s()), "2");
        assert_eq!(loc.target.label(loc.image_of_s_inverse), "2");

        let r = zm(6);
        let loc = localise_finite(&r, r.int(1)).unwrap();
        assert!(loc.kernel.is_zero());
        assert_eq!(loc.target.size(), 6);

        let r = zm(8);
        assert!(matches!(
            localise_finite(&r, r.int(2)),
            Err(RingError::NilpotentDenominator(_))
        ));
    }

    #[test]
    fn ideal_arithmetic() {
        let r = zm(6);
        let a = Ideal::generated(r.clone(), &[r.int(2)]);
        let b = Ideal::generated(r.clone(), &[r.int(3)]);
        let ops = ideal_ops(&a, &b).unwrap();
        assert!(ops.comaximal && ops.sum.is_unit() && ops.product.is_zero());

        let r = zm(12);
        let a = Ideal::generated(r.clone(), &[r.int(4)]);
        let b = Ideal::generated(r.clone(), &[r.int(6)]);
        let ops = ideal_ops(&a, &b).unwrap();
        assert!(!ops.comaximal);
        assert_eq!(ops.sum, Ideal::generated(r.clone(), &[r.int(2)]));
        assert!(ops.product.is_zero());

        let whole = Ideal::unit(r.clone());
        let ops = ideal_ops(&whole, &b).unwrap();
        assert!(ops.comaximal);
        assert_eq!(ops.product, b);

        let c = Ideal::zero(zm(6));
        assert_eq!(ideal_ops(&a, &c).unwrap_err(), RingError::AmbientMismatch);
    }

    #[test]
    fn partitions_of_one() {
        let r = zm(6);
        let eta = partition_of_one(&r, &[(r.int(2), 2), (r.int(3), 1)]).unwrap();
        assert_eq!(eta, vec![r.int(1), r.int(1)]);
        assert_eq!(
            partition_of_one(&r, &[(r.int(2), 1)]),
            Err(RingError::NotUnitIdeal)
        );
        let r = zm(5);
        assert_eq!(partition_of_one(&r, &[(r.int(3), 1)]).unwrap(), vec![r.int(2)]);
    }

    #[test]
    fn maximal_ideals_of_small_rings() {
        let r = zm(12);
        let ms = maximal_ideals(&r);
        assert_eq!(ms.len(), 2);
        assert_eq!(ms[0], Ideal::generated(r.clone(), &[r.int(2)]));
        assert_eq!(ms[1], Ideal::generated(r.clone(), &[r.int(3)]));
        assert_eq!(maximal_ideals(&zm(4)).len(), 1);
        assert_eq!(maximal_ideals(&zm(30)).len(), 3);
    }
}
