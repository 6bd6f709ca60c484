use rustc_hash::FxHashSet;

use super::group::{GroupDescriptor, GroupElement, Key};
use super::table::{Closure, SubgroupTable};
use super::SubgroupError;
use crate::chevalley::{GroupKind, Matrix};
use crate::par::Exec;
use crate::ring::{Elem, Ideal};

/// Ambient groups up to this order are enumerated to cut out congruence
/// subgroups; larger ones are searched through congruent matrices instead.
const AMBIENT_ROUTE_LIMIT: u128 = 1_000_000;

/// Largest number of congruent candidate matrices tested directly.
const DIRECT_CANDIDATE_LIMIT: u128 = 20_000_000;

/// Which elementary subgroup to enumerate.
#[derive(Clone, Debug)]
pub enum SubgroupLevel {
    /// `E(Φ, R)`.
    Ring,
    /// `E(Φ, I)`, generated by the `x_α(ξ)` with `ξ ∈ I`.
    Ideal(Ideal),
    /// `E(Φ, R, I)`, the normal closure of `E(Φ, I)` in `E(Φ, R)`.
    Relative(Ideal),
}

/// Enumerates an elementary subgroup with exact Cayley distances over its
/// declared generators.
///
/// For [`SubgroupLevel::Relative`] the declared generators are the level
/// generators followed by the conjugates that had to be added to make the
/// subgroup normal.
pub fn enumerate_elementary(
    desc: &GroupDescriptor,
    level: &SubgroupLevel,
    cap: usize,
    exec: Exec,
) -> Result<SubgroupTable, SubgroupError> {
    match level {
        SubgroupLevel::Ring => {
            if desc.projected_order().is_some_and(|n| n > cap as u128) {
                return Err(SubgroupError::OrderCapExceeded { cap });
            }
            let unit = Ideal::unit(desc.ring().clone());
            let (labels, gens): (Vec<_>, Vec<_>) = desc.level_generators(&unit).into_iter().unzip();
            let labels = labels.into_iter().map(Some).collect();
            SubgroupTable::from_generators(desc, format!("E({})", desc.ring().name()), gens, labels, cap, exec)
        }
        SubgroupLevel::Ideal(i) => {
            let (labels, gens): (Vec<_>, Vec<_>) = desc.level_generators(i).into_iter().unzip();
            let labels = labels.into_iter().map(Some).collect();
            SubgroupTable::from_generators(desc, format!("E({})", i.label()), gens, labels, cap, exec)
        }
        SubgroupLevel::Relative(i) => {
            let closure = relative_closure(desc, i, cap)?;
            let level = desc.level_generators(i);
            let level_keys: FxHashSet<Key> = level.iter().map(|(_, m)| desc.key(&m.data)).collect();
            let mut labels = Vec::new();
            let mut gens = Vec::new();
            for (g, m) in level {
                labels.push(Some(g));
                gens.push(m);
            }
            for m in closure.gens {
                if !level_keys.contains(&desc.key(&m.data)) {
                    labels.push(None);
                    gens.push(m);
                }
            }
            let name = format!("E(R,{})", i.label());
            let table = SubgroupTable::from_generators(desc, name, gens, labels, cap, exec)?;
            debug_assert_eq!(table.order(), closure.store.len());
            Ok(table)
        }
    }
}

/// `E(Φ, R, I)` without distances.
pub(crate) fn relative_closure(desc: &GroupDescriptor, i: &Ideal, cap: usize) -> Result<Closure, SubgroupError> {
    let seeds: Vec<GroupElement> = desc.level_generators(i).into_iter().map(|(_, m)| m).collect();
    Closure::normal_closure(desc, &seeds, &desc.conjugators(), cap)
}

/// `[H, K]`, generated by the commutators of generators and closed under
/// conjugation by both generating sets.
pub(crate) fn mutual_closure(
    desc: &GroupDescriptor,
    xs: &[GroupElement],
    ys: &[GroupElement],
    cap: usize,
) -> Result<Closure, SubgroupError> {
    let mut seeds = Vec::with_capacity(xs.len() * ys.len());
    for x in xs {
        for y in ys {
            seeds.push(desc.commutator(x, y));
        }
    }
    let conjugators: Vec<GroupElement> = xs.iter().chain(ys).cloned().collect();
    Closure::normal_closure(desc, &seeds, &conjugators, cap)
}

/// The subgroup generated by all `[h, k]`, `h ∈ H`, `k ∈ K`.
///
/// The commutators of generators generate `[H, K]` as a subgroup normalised
/// by `H` and `K`, which is what is closed here.
pub fn mutual_commutator(h: &SubgroupTable, k: &SubgroupTable, cap: usize, exec: Exec) -> Result<SubgroupTable, SubgroupError> {
    let desc = h.descriptor();
    if desc.label() != k.descriptor().label() {
        return Err(SubgroupError::AmbientMismatch);
    }
    let closure = mutual_closure(desc, h.generators(), k.generators(), cap)?;
    SubgroupTable::from_closure(desc, format!("[{},{}]", h.name(), k.name()), closure, cap, exec)
}

/// `G(Φ, R, I)`: the kernel of reduction modulo `I`.
///
/// Small ambient groups are enumerated and filtered, keeping the ambient
/// lengths; otherwise the matrices congruent to the identity are tested
/// against the group equations and lengths refer to a generating set picked
/// from the result.
pub fn congruence_subgroup(desc: &GroupDescriptor, i: &Ideal, cap: usize, exec: Exec) -> Result<SubgroupTable, SubgroupError> {
    let name = format!("G(R,{})", i.label());
    let (q, proj) = i.quotient();
    let q_desc = desc.over(std::sync::Arc::new(q))?;
    preimage_of(desc, i, &proj, &[q_desc.identity()], name, cap, exec)
}

/// `C(Φ, R, I)`: the preimage of the centre of `G(Φ, R/I)`.
pub fn full_congruence_subgroup(desc: &GroupDescriptor, i: &Ideal, cap: usize, exec: Exec) -> Result<SubgroupTable, SubgroupError> {
    let name = format!("C(R,{})", i.label());
    let (q, proj) = i.quotient();
    let q_desc = desc.over(std::sync::Arc::new(q))?;
    let centre = centre_of(&q_desc);
    preimage_of(desc, i, &proj, &centre, name, cap, exec)
}

/// Central elements of `G(Φ, Q)`. The centraliser of the elementary group
/// consists of scalars, so scalar matrices in the group that commute with
/// the generators are all of it; adjoint images are centreless.
pub fn centre_of(desc: &GroupDescriptor) -> Vec<GroupElement> {
    if desc.rep().kind() == GroupKind::Adjoint {
        return vec![desc.identity()];
    }
    let r = desc.ring();
    let n = desc.dim();
    let conj = desc.conjugators();
    let mut out = Vec::new();
    for lambda in r.elements() {
        let mut m = Matrix { dim: n, data: vec![r.zero_e(); n * n] };
        for d in 0..n {
            m.data[d * n + d] = lambda;
        }
        if desc.satisfies_equations(&m) == Some(true)
            && conj.iter().all(|c| desc.mul(c, &m) == desc.mul(&m, c))
            && !out.contains(&m)
        {
            out.push(m);
        }
    }
    out
}

fn preimage_of(
    desc: &GroupDescriptor,
    i: &Ideal,
    proj: &[Elem],
    targets: &[GroupElement],
    name: String,
    cap: usize,
    exec: Exec,
) -> Result<SubgroupTable, SubgroupError> {
    let target_keys: FxHashSet<Vec<Elem>> = targets.iter().map(|t| t.data.clone()).collect();
    let reduces_into = |m: &[Elem]| target_keys.contains(&m.iter().map(|e| proj[e.index()]).collect::<Vec<_>>());
    if i.is_zero() && targets.len() == 1 {
        return SubgroupTable::from_generators(desc, name, Vec::new(), Vec::new(), cap, exec);
    }
    let n2 = (desc.dim() * desc.dim()) as u32;
    let candidates = (i.size() as u128).checked_pow(n2).map(|c| c * targets.len() as u128);
    let small_ambient = desc.projected_order().is_some_and(|o| o <= AMBIENT_ROUTE_LIMIT.min(cap as u128));
    let has_equations = desc.satisfies_equations(&desc.identity()).is_some();
    if small_ambient || !has_equations {
        let ambient = ambient_table(desc, cap, exec)?;
        return SubgroupTable::filtered(&ambient, name, reduces_into, cap);
    }
    match candidates {
        Some(c) if c <= DIRECT_CANDIDATE_LIMIT => direct_preimage(desc, proj, targets, name, cap, exec),
        _ => Err(SubgroupError::OrderCapExceeded { cap }),
    }
}

/// Tests every matrix reducing to one of `targets` against the group
/// equations.
fn direct_preimage(
    desc: &GroupDescriptor,
    proj: &[Elem],
    targets: &[GroupElement],
    name: String,
    cap: usize,
    exec: Exec,
) -> Result<SubgroupTable, SubgroupError> {
    let ring = desc.ring();
    let mut members = Vec::new();
    for t in targets {
        // Entry (a, b) ranges over the preimage of t[a, b].
        let choices: Vec<Vec<Elem>> = t
            .data
            .iter()
            .map(|&target| ring.elements().filter(|e| proj[e.index()] == target).collect())
            .collect();
        let mut idx = vec![0usize; choices.len()];
        loop {
            let m = Matrix {
                dim: desc.dim(),
                data: idx.iter().zip(&choices).map(|(&k, c)| c[k]).collect(),
            };
            if desc.satisfies_equations(&m) == Some(true) {
                if members.len() >= cap {
                    return Err(SubgroupError::OrderCapExceeded { cap });
                }
                members.push(m);
            }
            let mut pos = choices.len();
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < choices[pos].len() {
                    break;
                }
                idx[pos] = 0;
            }
            if idx.iter().all(|&k| k == 0) {
                break;
            }
        }
    }
    let count = members.len();
    let closure = Closure::greedy_generators(desc, members.into_iter(), cap)?;
    if closure.order() != count {
        return Err(SubgroupError::NotASubgroup(name));
    }
    SubgroupTable::from_closure(desc, name, closure, cap, exec)
}

/// `E(Φ, R)`, which is all of `G(Φ, R)` for finite rings.
pub fn ambient_table(desc: &GroupDescriptor, cap: usize, exec: Exec) -> Result<SubgroupTable, SubgroupError> {
    enumerate_elementary(desc, &SubgroupLevel::Ring, cap, exec)
}
