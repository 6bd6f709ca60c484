use std::sync::Arc;

use serde::Serialize;

use super::matrix::{int_bracket, int_mul, to_sparse, Matrix, Sparse};
use super::ChevalleyError;
use crate::ring::Ring;
use crate::roots::{AdjointAction, CartanType, RootData, RootId};

/// Which invariant the image group preserves; decides membership tests.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupKind {
    /// `SL_n`: determinant one.
    Special,
    /// `Sp_4` for the form `J = [[0, I], [-I, 0]]`.
    Symplectic,
    /// Image of the adjoint representation.
    Adjoint,
}

/// A faithful-on-unipotents representation given by nilpotent integer
/// templates `e_α`, with all divided powers `e_α^k / k!` precomputed.
#[derive(Clone, Debug)]
pub struct Representation {
    data: Arc<RootData>,
    dim: usize,
    kind: GroupKind,
    name: String,
    /// `e_α` as dense integer matrices.
    templates: Vec<Vec<i64>>,
    /// `powers[α][k-1] = e_α^k / k!`.
    powers: Vec<Vec<Sparse>>,
}

impl Representation {
    /// The natural representation: `SL_{l+1}` for `A_l`, `Sp_4` for `C_2`
    /// and (via the isomorphism) `B_2`.
    pub fn natural(data: Arc<RootData>) -> Result<Self, ChevalleyError> {
        let ty = data.phi.cartan_type();
        let (dim, kind, simple): (usize, GroupKind, Vec<Vec<i64>>) = match ty {
            CartanType::A(l) => {
                let n = l + 1;
                let simple = (0..l)
                    .map(|i| {
                        let mut m = vec![0; n * n];
                        m[i * n + i + 1] = 1;
                        m
                    })
                    .collect();
                (n, GroupKind::Special, simple)
            }
            CartanType::C(2) | CartanType::B(2) => {
                let short = {
                    // E_12 - E_43
                    let mut m = vec![0; 16];
                    m[1] = 1;
                    m[3 * 4 + 2] = -1;
                    m
                };
                let long = {
                    // E_24
                    let mut m = vec![0; 16];
                    m[4 + 3] = 1;
                    m
                };
                let simple = if ty == CartanType::C(2) {
                    vec![short, long]
                } else {
                    vec![long, short]
                };
                (4, GroupKind::Symplectic, simple)
            }
            other => return Err(ChevalleyError::UnsupportedRepresentation(format!("natural {other}"))),
        };
        let templates = Self::from_simple(&data, dim, &simple);
        Self::finish(data, dim, kind, format!("{ty}-natural"), templates)
    }

    /// The adjoint representation on the Chevalley lattice (basis: all root
    /// vectors, then the simple coroots).
    pub fn adjoint(data: Arc<RootData>) -> Result<Self, ChevalleyError> {
        let ty = data.phi.cartan_type();
        if matches!(ty, CartanType::E(_) | CartanType::F4) {
            return Err(ChevalleyError::UnsupportedRepresentation(format!("adjoint {ty}")));
        }
        let templates = {
            let act = AdjointAction::new(&data.phi, &data.consts);
            let dim = act.dim();
            data.phi
                .ids()
                .map(|a| {
                    let mut m = vec![0i64; dim * dim];
                    for k in 0..dim {
                        for (row, c) in act.ad_basis(a, k) {
                            m[row * dim + k] = c as i64;
                        }
                    }
                    m
                })
                .collect::<Vec<_>>()
        };
        let dim = data.phi.len() + data.phi.rank();
        Self::finish(data, dim, GroupKind::Adjoint, format!("{ty}-adjoint"), templates)
    }

    /// Natural representation where one exists, adjoint otherwise.
    pub fn default_for(data: Arc<RootData>) -> Result<Self, ChevalleyError> {
        match data.phi.cartan_type() {
            CartanType::A(_) | CartanType::B(2) | CartanType::C(2) => Self::natural(data),
            _ => Self::adjoint(data),
        }
    }

    /// Root vectors generated from simple ones: `e_ζ = [e_α, e_β] / N_{αβ}`
    /// along extraspecial pairs, and `e_{-α} = e_α^T`.
    fn from_simple(data: &RootData, n: usize, simple: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let phi = &data.phi;
        let mut pos: Vec<Option<Vec<i64>>> = vec![None; phi.num_positive()];
        for (i, m) in simple.iter().enumerate() {
            pos[phi.simple(i).index()] = Some(m.clone());
        }
        for z in phi.positive_ids() {
            if pos[z.index()].is_some() {
                continue;
            }
            let (a, b) = phi
                .positive_ids()
                .find_map(|x| {
                    let y = phi.combination(1, z, -1, x)?;
                    (phi.is_positive(y) && x < y).then_some((x, y))
                })
                .expect("non-simple positive root splits");
            let br = int_bracket(
                pos[a.index()].as_ref().unwrap(),
                pos[b.index()].as_ref().unwrap(),
                n,
            );
            let nab = data.consts.n(a, b) as i64;
            pos[z.index()] = Some(br.iter().map(|x| x / nab).collect());
        }
        let pos: Vec<Vec<i64>> = pos.into_iter().map(Option::unwrap).collect();
        let transpose = |m: &[i64]| -> Vec<i64> { (0..n * n).map(|idx| m[(idx % n) * n + idx / n]).collect() };
        pos.iter()
            .cloned()
            .chain(pos.iter().map(|m| transpose(m)))
            .collect()
    }

    fn finish(
        data: Arc<RootData>,
        dim: usize,
        kind: GroupKind,
        name: String,
        templates: Vec<Vec<i64>>,
    ) -> Result<Self, ChevalleyError> {
        let mut powers = Vec::with_capacity(templates.len());
        for (idx, e) in templates.iter().enumerate() {
            let mut list = Vec::new();
            let mut p = e.clone();
            let mut fact: i64 = 1;
            let mut k = 1;
            while p.iter().any(|&x| x != 0) {
                fact *= k;
                if p.iter().any(|&x| x % fact != 0) {
                    return Err(ChevalleyError::NonIntegral(format!(
                        "{name}: e^{k}/{k}! for root {}",
                        data.phi.format_root(RootId(idx as u16))
                    )));
                }
                let divided: Vec<i64> = p.iter().map(|x| x / fact).collect();
                list.push(to_sparse(&divided, dim));
                p = int_mul(&p, e, dim);
                k += 1;
            }
            powers.push(list);
        }
        Ok(Representation {
            data,
            dim,
            kind,
            name,
            templates,
            powers,
        })
    }

    pub fn data(&self) -> &Arc<RootData> {
        &self.data
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Dense integer template `e_α`.
    pub fn template(&self, alpha: RootId) -> &[i64] {
        &self.templates[alpha.index()]
    }

    /// Divided powers `e_α^k / k!`, `k = 1, 2, ...`.
    pub fn divided_powers(&self, alpha: RootId) -> &[Sparse] {
        &self.powers[alpha.index()]
    }

    /// `x_α(ξ)`.
    pub fn unipotent<R: Ring>(&self, ring: &R, alpha: RootId, xi: &R::Elem) -> Matrix<R::Elem> {
        Matrix::identity(ring, self.dim).mul_unipotent_right(ring, &self.powers[alpha.index()], xi)
    }

    /// `m · x_α(ξ)`.
    pub fn right_mul<R: Ring>(&self, ring: &R, m: &Matrix<R::Elem>, alpha: RootId, xi: &R::Elem) -> Matrix<R::Elem> {
        m.mul_unipotent_right(ring, &self.powers[alpha.index()], xi)
    }

    /// `x_α(ξ) · m`.
    pub fn left_mul<R: Ring>(&self, ring: &R, alpha: RootId, xi: &R::Elem, m: &Matrix<R::Elem>) -> Matrix<R::Elem> {
        m.mul_unipotent_left(ring, &self.powers[alpha.index()], xi)
    }

    /// Whether `m` satisfies the defining equations of the image group.
    /// Adjoint images are not characterised equationally here.
    pub fn satisfies_group_equations<R: Ring>(&self, ring: &R, m: &Matrix<R::Elem>) -> Option<bool> {
        match self.kind {
            GroupKind::Special => Some(ring.is_one(&m.det(ring))),
            GroupKind::Symplectic => {
                let j = symplectic_form(ring);
                Some(m.transpose().mul(ring, &j).mul(ring, m) == j)
            }
            GroupKind::Adjoint => None,
        }
    }

    /// Inverse of a group element, for the equationally defined groups.
    pub fn inverse<R: Ring>(&self, ring: &R, m: &Matrix<R::Elem>) -> Option<Matrix<R::Elem>> {
        match self.kind {
            GroupKind::Special => Some(m.adjugate(ring)),
            GroupKind::Symplectic => {
                // g^{-1} = -J g^T J
                let j = symplectic_form(ring);
                let t = j.mul(ring, &m.transpose()).mul(ring, &j);
                Some(t.map(|x| ring.neg(x)))
            }
            GroupKind::Adjoint => None,
        }
    }
}

fn symplectic_form<R: Ring>(ring: &R) -> Matrix<R::Elem> {
    Matrix::from_int(
        ring,
        4,
        &[0, 0, 1, 0, 0, 0, 0, 1, -1, 0, 0, 0, 0, -1, 0, 0],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{FiniteRing, PolyRing};

    fn reps() -> Vec<Representation> {
        let mut out = Vec::new();
        for name in ["A2", "A3", "C2", "B2"] {
            out.push(Representation::natural(RootData::parse(name).unwrap()).unwrap());
        }
        for name in ["A2", "B2", "G2"] {
            out.push(Representation::adjoint(RootData::parse(name).unwrap()).unwrap());
        }
        out
    }

    /// The templates realise the structure constants: `[e_α, e_β] = N_{αβ} e_{α+β}`.
    #[test]
    fn templates_realise_structure_constants() {
        for rep in reps() {
            let phi = &rep.data().phi;
            let n = rep.dim();
            for a in phi.ids() {
                for b in phi.ids() {
                    if a == phi.neg(b) {
                        continue;
                    }
                    let br = int_bracket(rep.template(a), rep.template(b), n);
                    let expected: Vec<i64> = match phi.add(a, b) {
                        Some(r) => rep
                            .template(r)
                            .iter()
                            .map(|x| x * rep.data().consts.n(a, b) as i64)
                            .collect(),
                        None => vec![0; n * n],
                    };
                    assert_eq!(br, expected, "{} {a:?} {b:?}", rep.name());
                }
            }
        }
    }

    #[test]
    fn unipotents_are_additive_and_invertible_symbolically() {
        let r = PolyRing::new(&["a", "b"], &[], None).unwrap();
        let (a, b) = (r.var("a"), r.var("b"));
        for rep in reps() {
            for alpha in rep.data().phi.ids() {
                let xa = rep.unipotent(&r, alpha, &a);
                let xb = rep.unipotent(&r, alpha, &b);
                let sum = rep.unipotent(&r, alpha, &r.add(&a, &b));
                assert_eq!(xa.mul(&r, &xb), sum);
                let inv = rep.unipotent(&r, alpha, &r.neg(&a));
                assert!(xa.mul(&r, &inv).is_identity(&r));
            }
        }
    }

    #[test]
    fn generators_lie_in_the_group() {
        let f = FiniteRing::integers_mod(5).unwrap();
        for rep in reps() {
            for alpha in rep.data().phi.ids() {
                let x = rep.unipotent(&f, alpha, &f.int(3));
                if let Some(ok) = rep.satisfies_group_equations(&f, &x) {
                    assert!(ok, "{}", rep.name());
                    let inv = rep.inverse(&f, &x).unwrap();
                    assert_eq!(inv, rep.unipotent(&f, alpha, &f.int(-3)));
                }
            }
        }
    }

    #[test]
    fn natural_examples() {
        let f = PolyRing::new(&["a"], &[], None).unwrap();
        let rep = Representation::natural(RootData::parse("A2").unwrap()).unwrap();
        let alpha = rep.data().phi.parse_root("[1,0]").unwrap();
        let x = rep.unipotent(&f, alpha, &f.var("a"));
        let mut expected = Matrix::identity(&f, 3);
        expected.data[1] = f.var("a");
        assert_eq!(x, expected);
        assert!(rep.unipotent(&f, alpha, &f.zero()).is_identity(&f));
        assert!(Representation::natural(RootData::parse("G2").unwrap()).is_err());
        assert!(Representation::adjoint(RootData::parse("E6").unwrap()).is_err());
    }
}
