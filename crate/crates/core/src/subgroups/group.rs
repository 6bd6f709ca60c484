use std::sync::Arc;

use crate::chevalley::{Gen, GroupKind, Matrix, Representation};
use crate::ring::{maximal_ideals, parse_ring, Elem, FiniteRing, Ideal, RingSpec};
use crate::roots::{CartanType, RootData, RootId, RootSystem};

use super::SubgroupError;

/// A group element: an exact matrix over the finite ring.
pub type GroupElement = Matrix<Elem>;

/// Canonical hash key of a matrix: its entries packed row-major.
pub type Key = u128;

/// The ambient group `G(Φ, R)`: a root system through one of its
/// representations, over a finite ring.
#[derive(Clone, Debug)]
pub struct GroupDescriptor {
    rep: Arc<Representation>,
    ring: Arc<FiniteRing>,
    bits: u32,
}

impl GroupDescriptor {
    pub fn new(rep: Arc<Representation>, ring: Arc<FiniteRing>) -> Result<Self, SubgroupError> {
        let bits = usize::BITS - (ring.size().max(2) - 1).leading_zeros();
        let dim = rep.dim();
        if dim * dim * bits as usize > Key::BITS as usize {
            return Err(SubgroupError::KeyTooWide { dim, ring: ring.name().to_string() });
        }
        Ok(GroupDescriptor { rep, ring, bits })
    }

    /// Parses a system name and a finite ring description; uses the natural
    /// representation where one exists.
    pub fn parse(system: &str, ring: &str) -> Result<Self, SubgroupError> {
        let data = RootData::parse(system)?;
        let rep = Representation::default_for(data)?;
        let RingSpec::Finite(r) = parse_ring(ring)? else {
            return Err(SubgroupError::InfiniteRing(ring.to_string()));
        };
        Self::new(Arc::new(rep), r)
    }

    pub fn system(&self) -> &RootSystem {
        &self.rep.data().phi
    }

    pub fn rep(&self) -> &Arc<Representation> {
        &self.rep
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    /// Same group over another ring.
    pub fn over(&self, ring: Arc<FiniteRing>) -> Result<Self, SubgroupError> {
        Self::new(self.rep.clone(), ring)
    }

    /// For example `SL3(Z/6)`.
    pub fn label(&self) -> String {
        let group = match (self.rep.kind(), self.system().cartan_type()) {
            (GroupKind::Special, _) => format!("SL{}", self.dim()),
            (GroupKind::Symplectic, _) => "Sp4".to_string(),
            (GroupKind::Adjoint, ty) => format!("{ty}-adjoint"),
        };
        format!("{group}({})", self.ring.name())
    }

    pub fn identity(&self) -> GroupElement {
        Matrix::identity(&*self.ring, self.dim())
    }

    pub fn key(&self, g: &[Elem]) -> Key {
        g.iter().fold(0, |acc, e| (acc << self.bits) | e.0 as Key)
    }

    pub fn decode(&self, mut key: Key) -> GroupElement {
        let n = self.dim() * self.dim();
        let mask = (1 << self.bits) - 1;
        let mut data = vec![Elem(0); n];
        for slot in data.iter_mut().rev() {
            *slot = Elem((key & mask) as u16);
            key >>= self.bits;
        }
        Matrix { dim: self.dim(), data }
    }

    /// `out = a · b` for row-major slices.
    pub(crate) fn mul_into(&self, a: &[Elem], b: &[Elem], out: &mut [Elem]) {
        let n = self.dim();
        let r = &*self.ring;
        out.fill(r.zero_e());
        for i in 0..n {
            for k in 0..n {
                let x = a[i * n + k];
                if x.0 == 0 {
                    continue;
                }
                for j in 0..n {
                    let y = b[k * n + j];
                    if y.0 != 0 {
                        let cell = &mut out[i * n + j];
                        *cell = r.add_e(*cell, r.mul_e(x, y));
                    }
                }
            }
        }
    }

    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let mut data = vec![Elem(0); a.data.len()];
        self.mul_into(&a.data, &b.data, &mut data);
        Matrix { dim: a.dim, data }
    }

    pub fn is_identity(&self, g: &GroupElement) -> bool {
        g.is_identity(&*self.ring)
    }

    pub fn inverse(&self, g: &GroupElement) -> GroupElement {
        if let Some(inv) = self.rep.inverse(&*self.ring, g) {
            return inv;
        }
        // No equations to invert with: g^{-1} = g^{ord(g) - 1}.
        let mut prev = self.identity();
        let mut cur = g.clone();
        while !self.is_identity(&cur) {
            prev = cur.clone();
            cur = self.mul(&cur, g);
        }
        prev
    }

    /// `a b a^{-1} b^{-1}`.
    pub fn commutator(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        self.mul(&ab, &self.inverse(&ba))
    }

    /// `a b a^{-1}`.
    pub fn conjugate(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.mul(&self.mul(a, b), &self.inverse(a))
    }

    pub fn unipotent(&self, alpha: RootId, xi: Elem) -> GroupElement {
        self.rep.unipotent(&*self.ring, alpha, &xi)
    }

    /// `x_α(ξ)` for every root and every nonzero `ξ` in the ideal.
    pub fn level_generators(&self, ideal: &Ideal) -> Vec<(Gen<Elem>, GroupElement)> {
        let mut out = Vec::new();
        for alpha in self.system().ids() {
            for &xi in ideal.members() {
                if xi != self.ring.zero_e() {
                    out.push((Gen::new(alpha, xi), self.unipotent(alpha, xi)));
                }
            }
        }
        out
    }

    /// `x_β(ζ)` for every root and every additive generator `ζ` of `R`: a
    /// small generating set of `E(Φ, R)`.
    pub fn conjugators(&self) -> Vec<GroupElement> {
        let gens = self.ring.additive_generators();
        self.system()
            .ids()
            .flat_map(|beta| gens.iter().map(move |&z| (beta, z)))
            .map(|(beta, z)| self.unipotent(beta, z))
            .collect()
    }

    /// Whether the matrix satisfies the defining equations; `None` for
    /// adjoint images, which have none here.
    pub fn satisfies_equations(&self, g: &GroupElement) -> Option<bool> {
        self.rep.satisfies_group_equations(&*self.ring, g)
    }

    /// `|G(Φ, R)|` from the orders over the residue fields and the size of
    /// the nilradical `J`: `|G(R)| = |J|^{dim G} · Π |G(R/M)|`. `None` when
    /// the image of the representation has a nontrivial centre we do not
    /// account for, or on overflow.
    pub fn projected_order(&self) -> Option<u128> {
        let ty = self.system().cartan_type();
        if self.rep.kind() == GroupKind::Adjoint && !matches!(ty, CartanType::G2 | CartanType::F4 | CartanType::E(8)) {
            return None;
        }
        let r = &self.ring;
        let nil = r.elements().filter(|&a| r.is_nilpotent(a)).count() as u128;
        let dim_g = (self.system().len() + self.system().rank()) as u32;
        let mut order = nil.checked_pow(dim_g)?;
        for m in maximal_ideals(r) {
            let q = (r.size() / m.size()) as u128;
            order = order.checked_mul(field_order(ty, self.system().num_positive() as u32, q)?)?;
        }
        Some(order)
    }
}

/// `|G_sc(Φ, F_q)| = q^N Π (q^{d_i} - 1)`.
fn field_order(ty: CartanType, positive: u32, q: u128) -> Option<u128> {
    let degrees: Vec<u32> = match ty {
        CartanType::A(l) => (2..=l as u32 + 1).collect(),
        CartanType::B(l) | CartanType::C(l) => (1..=l as u32).map(|i| 2 * i).collect(),
        CartanType::D(l) => (1..l as u32).map(|i| 2 * i).chain([l as u32]).collect(),
        CartanType::E(6) => vec![2, 5, 6, 8, 9, 12],
        CartanType::E(7) => vec![2, 6, 8, 10, 12, 14, 18],
        CartanType::E(_) => vec![2, 8, 12, 14, 18, 20, 24, 30],
        CartanType::F4 => vec![2, 6, 8, 12],
        CartanType::G2 => vec![2, 6],
    };
    let mut order = q.checked_pow(positive)?;
    for d in degrees {
        order = order.checked_mul(q.checked_pow(d)? - 1)?;
    }
    Some(order)
}
