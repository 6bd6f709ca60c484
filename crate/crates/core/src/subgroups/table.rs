use std::collections::BTreeMap;
use std::fmt;

use rustc_hash::FxHashMap;

use super::group::{GroupDescriptor, GroupElement, Key};
use super::SubgroupError;
use crate::chevalley::{Gen, Matrix, Word};
use crate::par::Exec;
use crate::ring::Elem;

/// Default bound on the order of any enumerated subgroup.
pub const DEFAULT_ORDER_CAP: usize = 10_000_000;

/// Frontier elements handed to one parallel task.
const CHUNK: usize = 4096;

/// Elements stored flat, indexed by their canonical key.
#[derive(Clone)]
pub(crate) struct ElementStore {
    d2: usize,
    data: Vec<Elem>,
    keys: Vec<Key>,
    index: FxHashMap<Key, u32>,
}

impl ElementStore {
    pub(crate) fn with_identity(desc: &GroupDescriptor) -> Self {
        let mut s = ElementStore {
            d2: desc.dim() * desc.dim(),
            data: Vec::new(),
            keys: Vec::new(),
            index: FxHashMap::default(),
        };
        let id = desc.identity();
        s.push(desc.key(&id.data), &id.data);
        s
    }

    pub(crate) fn len(&self) -> usize {
        self.keys.len()
    }

    pub(crate) fn get(&self, i: usize) -> &[Elem] {
        &self.data[i * self.d2..(i + 1) * self.d2]
    }

    pub(crate) fn position(&self, key: Key) -> Option<usize> {
        self.index.get(&key).map(|&i| i as usize)
    }

    pub(crate) fn contains_key(&self, key: Key) -> bool {
        self.index.contains_key(&key)
    }

    pub(crate) fn push(&mut self, key: Key, data: &[Elem]) -> usize {
        let i = self.keys.len();
        self.keys.push(key);
        self.data.extend_from_slice(data);
        self.index.insert(key, i as u32);
        i
    }

    pub(crate) fn keys(&self) -> &[Key] {
        &self.keys
    }
}

/// Elements in discovery order, their distances, and the BFS parent of
/// each element as `(parent index, generator index)`.
type BfsResult = (ElementStore, Vec<u32>, Vec<(u32, u16)>);

/// Breadth-first enumeration of `⟨gens⟩` by right multiplication, level by
/// level. Products of one frontier are computed in parallel and merged in
/// frontier order, so the result does not depend on scheduling.
pub(crate) fn bfs(
    desc: &GroupDescriptor,
    gens: &[GroupElement],
    cap: usize,
    exec: Exec,
) -> Result<BfsResult, SubgroupError> {
    let mut store = ElementStore::with_identity(desc);
    let mut lengths = vec![0u32];
    let mut parents = vec![(0u32, u16::MAX)];
    let d2 = store.d2;
    let (mut lo, mut hi) = (0usize, 1usize);
    let mut depth = 0;
    while lo < hi {
        depth += 1;
        let mut start = lo;
        while start < hi {
            let end = (start + CHUNK).min(hi);
            let found: Vec<Vec<(Key, u16)>> = {
                let store = &store;
                exec.map_range(end - start, |off| {
                    let src = store.get(start + off);
                    let mut buf = vec![Elem(0); d2];
                    let mut out = Vec::new();
                    for (j, g) in gens.iter().enumerate() {
                        desc.mul_into(src, &g.data, &mut buf);
                        let key = desc.key(&buf);
                        if !store.contains_key(key) {
                            out.push((key, j as u16));
                        }
                    }
                    out
                })
            };
            for (off, list) in found.into_iter().enumerate() {
                for (key, j) in list {
                    if store.contains_key(key) {
                        continue;
                    }
                    if store.len() >= cap {
                        return Err(SubgroupError::OrderCapExceeded { cap });
                    }
                    let m = desc.decode(key);
                    store.push(key, &m.data);
                    lengths.push(depth);
                    parents.push(((start + off) as u32, j));
                }
            }
            start = end;
        }
        lo = hi;
        hi = store.len();
    }
    Ok((store, lengths, parents))
}

/// A subgroup grown one generator at a time.
#[derive(Clone)]
pub(crate) struct Closure {
    pub(crate) store: ElementStore,
    pub(crate) gens: Vec<GroupElement>,
}

impl Closure {
    pub(crate) fn trivial(desc: &GroupDescriptor) -> Self {
        Closure {
            store: ElementStore::with_identity(desc),
            gens: Vec::new(),
        }
    }

    pub(crate) fn contains(&self, desc: &GroupDescriptor, g: &GroupElement) -> bool {
        self.store.contains_key(desc.key(&g.data))
    }

    pub(crate) fn order(&self) -> usize {
        self.store.len()
    }

    /// Adds `g` as a generator unless it is already a member. The set stays
    /// closed under right multiplication by every generator: old elements
    /// times old generators are old, and everything new is multiplied by
    /// every generator.
    pub(crate) fn add_generator(&mut self, desc: &GroupDescriptor, g: &GroupElement, cap: usize) -> Result<bool, SubgroupError> {
        if self.contains(desc, g) {
            return Ok(false);
        }
        self.gens.push(g.clone());
        let d2 = self.store.d2;
        let mut buf = vec![Elem(0); d2];
        let mut src = vec![Elem(0); d2];
        let old = self.store.len();
        for i in 0..old {
            src.copy_from_slice(self.store.get(i));
            desc.mul_into(&src, &g.data, &mut buf);
            self.insert(desc, &buf, cap)?;
        }
        let mut i = old;
        while i < self.store.len() {
            src.copy_from_slice(self.store.get(i));
            for h in &self.gens {
                desc.mul_into(&src, &h.data, &mut buf);
                let key = desc.key(&buf);
                if !self.store.contains_key(key) {
                    if self.store.len() >= cap {
                        return Err(SubgroupError::OrderCapExceeded { cap });
                    }
                    self.store.push(key, &buf);
                }
            }
            i += 1;
        }
        Ok(true)
    }

    fn insert(&mut self, desc: &GroupDescriptor, m: &[Elem], cap: usize) -> Result<(), SubgroupError> {
        let key = desc.key(m);
        if !self.store.contains_key(key) {
            if self.store.len() >= cap {
                return Err(SubgroupError::OrderCapExceeded { cap });
            }
            self.store.push(key, m);
        }
        Ok(())
    }

    /// Smallest subgroup containing `seeds` and normalised by every element
    /// of `conjugators`.
    pub(crate) fn normal_closure(
        desc: &GroupDescriptor,
        seeds: &[GroupElement],
        conjugators: &[GroupElement],
        cap: usize,
    ) -> Result<Self, SubgroupError> {
        let inverses: Vec<GroupElement> = conjugators.iter().map(|c| desc.inverse(c)).collect();
        let mut c = Closure::trivial(desc);
        let mut pending: Vec<GroupElement> = seeds.iter().rev().cloned().collect();
        while let Some(g) = pending.pop() {
            if c.add_generator(desc, &g, cap)? {
                for (x, xi) in conjugators.iter().zip(&inverses).rev() {
                    pending.push(desc.mul(&desc.mul(x, &g), xi));
                }
            }
        }
        Ok(c)
    }

    /// A generating set of a finite subgroup given by its elements, picked
    /// greedily in the given order.
    pub(crate) fn greedy_generators(
        desc: &GroupDescriptor,
        elements: impl Iterator<Item = GroupElement>,
        cap: usize,
    ) -> Result<Self, SubgroupError> {
        let mut c = Closure::trivial(desc);
        for g in elements {
            c.add_generator(desc, &g, cap)?;
        }
        Ok(c)
    }
}

/// Where the recorded word lengths come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LengthBasis {
    /// Distances in the Cayley graph of the table's own generators.
    Generators,
    /// Distances inherited from the enumeration of the ambient group.
    Ambient,
}

/// An explicitly enumerated subgroup with word lengths.
#[derive(Clone)]
pub struct SubgroupTable {
    name: String,
    desc: GroupDescriptor,
    store: ElementStore,
    lengths: Vec<u32>,
    /// BFS tree: element `i` equals `parent · generator`.
    parents: Option<Vec<(u32, u16)>>,
    generators: Vec<GroupElement>,
    labels: Vec<Option<Gen<Elem>>>,
    basis: LengthBasis,
}

impl fmt::Debug for SubgroupTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "SubgroupTable({} in {}, order {}, {} generators)",
            self.name,
            self.desc.label(),
            self.order(),
            self.generators.len()
        )
    }
}

impl SubgroupTable {
    /// Enumerates `⟨generators⟩` with exact Cayley distances.
    pub(crate) fn from_generators(
        desc: &GroupDescriptor,
        name: impl Into<String>,
        generators: Vec<GroupElement>,
        labels: Vec<Option<Gen<Elem>>>,
        cap: usize,
        exec: Exec,
    ) -> Result<Self, SubgroupError> {
        debug_assert_eq!(generators.len(), labels.len());
        let (store, lengths, parents) = bfs(desc, &generators, cap, exec)?;
        Ok(SubgroupTable {
            name: name.into(),
            desc: desc.clone(),
            store,
            lengths,
            parents: Some(parents),
            generators,
            labels,
            basis: LengthBasis::Generators,
        })
    }

    pub(crate) fn from_closure(
        desc: &GroupDescriptor,
        name: impl Into<String>,
        closure: Closure,
        cap: usize,
        exec: Exec,
    ) -> Result<Self, SubgroupError> {
        let labels = vec![None; closure.gens.len()];
        let table = Self::from_generators(desc, name, closure.gens, labels, cap, exec)?;
        debug_assert_eq!(table.order(), closure.store.len());
        Ok(table)
    }

    /// The members of `ambient` selected by `keep`, with the ambient lengths.
    pub(crate) fn filtered(
        ambient: &SubgroupTable,
        name: impl Into<String>,
        keep: impl Fn(&[Elem]) -> bool,
        cap: usize,
    ) -> Result<Self, SubgroupError> {
        let desc = &ambient.desc;
        let mut store = ElementStore::with_identity(desc);
        let mut lengths = vec![0];
        for i in 1..ambient.order() {
            let m = ambient.store.get(i);
            if keep(m) {
                store.push(ambient.store.keys[i], m);
                lengths.push(ambient.lengths[i]);
            }
        }
        let members = (0..store.len()).map(|i| Matrix { dim: desc.dim(), data: store.get(i).to_vec() });
        let closure = Closure::greedy_generators(desc, members, cap)?;
        debug_assert_eq!(closure.order(), store.len());
        Ok(SubgroupTable {
            name: name.into(),
            desc: desc.clone(),
            store,
            lengths,
            parents: None,
            labels: vec![None; closure.gens.len()],
            generators: closure.gens,
            basis: LengthBasis::Ambient,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn descriptor(&self) -> &GroupDescriptor {
        &self.desc
    }

    pub fn order(&self) -> usize {
        self.store.len()
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    /// Elementary label of each generator, when it is a root unipotent.
    pub fn generator_labels(&self) -> &[Option<Gen<Elem>>] {
        &self.labels
    }

    pub fn length_basis(&self) -> LengthBasis {
        self.basis
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.store.contains_key(self.desc.key(&g.data))
    }

    pub(crate) fn contains_key(&self, key: Key) -> bool {
        self.store.contains_key(key)
    }

    pub fn length(&self, g: &GroupElement) -> Option<u32> {
        self.length_of_key(self.desc.key(&g.data))
    }

    pub(crate) fn length_of_key(&self, key: Key) -> Option<u32> {
        self.store.position(key).map(|i| self.lengths[i])
    }

    pub fn element(&self, i: usize) -> GroupElement {
        Matrix { dim: self.desc.dim(), data: self.store.get(i).to_vec() }
    }

    pub(crate) fn element_slice(&self, i: usize) -> &[Elem] {
        self.store.get(i)
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order()).map(|i| self.element(i))
    }

    pub fn max_length(&self) -> u32 {
        self.lengths.iter().copied().max().unwrap_or(0)
    }

    /// Number of elements at each distance.
    pub fn length_histogram(&self) -> BTreeMap<u32, u64> {
        let mut h = BTreeMap::new();
        for &l in &self.lengths {
            *h.entry(l).or_insert(0) += 1;
        }
        h
    }

    /// Shortest word for `g` read off the BFS tree; needs labelled
    /// generators and own-generator lengths.
    pub fn word_for(&self, g: &GroupElement) -> Option<Word<Elem>> {
        let parents = self.parents.as_ref()?;
        let mut i = self.store.position(self.desc.key(&g.data))?;
        let mut factors = Vec::new();
        while i != 0 {
            let (p, j) = parents[i];
            factors.push(self.labels[j as usize].clone()?);
            i = p as usize;
        }
        factors.reverse();
        Some(Word::new(factors))
    }

    /// Every element lies in `other`.
    pub fn is_subset(&self, other: &SubgroupTable) -> bool {
        self.store.keys().iter().all(|&k| other.store.contains_key(k))
    }

    pub fn same_elements(&self, other: &SubgroupTable) -> bool {
        self.order() == other.order() && self.is_subset(other)
    }

    /// Closure under every generator and under inverses, and the BFS
    /// triangle property of the lengths (own-generator tables only).
    pub fn verify_closure(&self) -> bool {
        let d = &self.desc;
        let mut buf = vec![Elem(0); d.dim() * d.dim()];
        for i in 0..self.order() {
            let src = self.store.get(i);
            for g in &self.generators {
                d.mul_into(src, &g.data, &mut buf);
                let Some(j) = self.store.position(d.key(&buf)) else {
                    return false;
                };
                if self.basis == LengthBasis::Generators && self.lengths[j] > self.lengths[i] + 1 {
                    return false;
                }
            }
            let inv = d.inverse(&self.element(i));
            if !self.contains(&inv) {
                return false;
            }
        }
        self.lengths[0] == 0 && d.is_identity(&self.element(0))
    }
}
