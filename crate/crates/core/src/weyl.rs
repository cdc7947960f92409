//! The Weyl group acting on a minuscule orbit: permutations, exhaustive
//! cycle-type enumeration, and the strict-transitivity criterion.
//!
//! A set of cycle types is strictly transitive when, for every `i` in
//! `1..m`, some type has no sub-multiset of cycle lengths summing to `i`
//! (so an element of that type leaves no `i`-subset invariant).

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::BuildHasher;

use hashbrown::{DefaultHashBuilder, HashTable};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::roots::{Kind, RootSystem, Weight};

/// A permutation of orbit indices `0..m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn new(images: Vec<usize>) -> Result<Perm> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            if x >= images.len() || seen[x] {
                return Err(Error::invalid("images do not form a permutation"));
            }
            seen[x] = true;
        }
        Ok(Perm { images })
    }

    pub fn identity(m: usize) -> Perm {
        Perm { images: (0..m).collect() }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm { images: other.images.iter().map(|&x| self.images[x]).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Perm { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.images.len()];
        let mut out = Vec::new();
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cyc.push(x);
                x = self.images[x];
            }
            out.push(cyc);
        }
        out
    }

    pub fn cycle_type(&self) -> CycleType {
        CycleType::new(self.cycles().iter().map(|c| c.len()).collect())
    }

    pub fn order(&self) -> u64 {
        self.cycles().iter().fold(1u64, |acc, c| num_integer::lcm(acc, c.len() as u64))
    }
}

/// Multiset of cycle lengths, sorted descending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CycleType(Vec<usize>);

impl CycleType {
    pub fn new(mut parts: Vec<usize>) -> CycleType {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        CycleType(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.iter().sum()
    }

    /// Membership table of all sub-multiset sums, indexed 0..=m.
    pub fn sum_table(&self) -> Vec<bool> {
        let m = self.degree();
        let mut reach = vec![false; m + 1];
        reach[0] = true;
        for &p in &self.0 {
            for s in (p..=m).rev() {
                if reach[s - p] {
                    reach[s] = true;
                }
            }
        }
        reach
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

/// All achievable sub-multiset sums of the cycle lengths, including 0 and m.
pub fn invariant_sums(ct: &CycleType) -> Vec<usize> {
    ct.sum_table().iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect()
}

/// Permutations of the orbit induced by the simple reflections, in root order.
pub fn reflection_perms(rs: &RootSystem, orbit: &[Weight]) -> Result<Vec<Perm>> {
    let index: HashMap<&Weight, usize> = orbit.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut gens = Vec::with_capacity(rs.rank());
    for i in 1..=rs.rank() {
        let mut images = Vec::with_capacity(orbit.len());
        for w in orbit {
            let r = rs.reflect(i, w);
            let j = *index
                .get(&r)
                .ok_or_else(|| Error::invalid(format!("reflection {i} leaves the orbit at {w:?}")))?;
            images.push(j);
        }
        gens.push(Perm::new(images)?);
    }
    Ok(gens)
}

/// Product `g_{w_1} ∘ g_{w_2} ∘ ... ∘ g_{w_k}` of a word of 1-based generator
/// indices, so that S_1 S_2 ... S_l sends label i to i+1 in type A.
pub fn word_perm(gens: &[Perm], word: &[usize]) -> Result<Perm> {
    let m = gens.first().map(|g| g.degree()).unwrap_or(0);
    let mut acc = Perm::identity(m);
    for &i in word {
        if i == 0 || i > gens.len() {
            return Err(Error::invalid(format!("generator index {i} out of range 1..={}", gens.len())));
        }
        acc = acc.compose(&gens[i - 1]);
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeWitness {
    pub parts: CycleType,
    pub witness_word: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupEnumeration {
    pub degree: usize,
    pub order: u64,
    /// Distinct cycle types in ascending order, each with its first BFS witness.
    pub types: Vec<TypeWitness>,
}

impl GroupEnumeration {
    pub fn cycle_types(&self) -> Vec<CycleType> {
        self.types.iter().map(|t| t.parts.clone()).collect()
    }

    pub fn find(&self, parts: &[usize]) -> Option<usize> {
        let ct = CycleType::new(parts.to_vec());
        self.types.iter().position(|t| t.parts == ct)
    }
}

/// Environment variable bounding the enumeration's element storage, in MiB.
pub const MEM_CAP_ENV: &str = "DGALOIS_ENUM_MAX_MIB";
const DEFAULT_MEM_CAP_MIB: usize = 1024;

/// Element-count cap derived from the memory budget for permutations on `m` points.
pub fn default_element_cap(m: usize) -> usize {
    let mib = std::env::var(MEM_CAP_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .unwrap_or(DEFAULT_MEM_CAP_MIB);
    // packed images, parent link, generator byte, hash slot and control byte
    let per_element = m + 4 + 1 + 8;
    mib.saturating_mul(1 << 20) / per_element
}

/// Exhaustive breadth-first closure of the group generated by `gens`.
pub fn enumerate_cycle_types(gens: &[Perm], cap: Option<usize>) -> Result<GroupEnumeration> {
    let m = gens.first().map(|g| g.degree()).ok_or_else(|| Error::invalid("no generators"))?;
    if m > 256 {
        return Err(Error::unsupported("permutation degree above 256"));
    }
    if gens.len() > 255 {
        return Err(Error::unsupported("more than 255 generators"));
    }
    let cap = cap.unwrap_or_else(|| default_element_cap(m));
    let packed: Vec<Vec<u8>> = gens.iter().map(|g| g.images.iter().map(|&x| x as u8).collect()).collect();

    let mut elems: Vec<u8> = (0..m).map(|x| x as u8).collect();
    let mut parent: Vec<u32> = vec![u32::MAX];
    let mut via: Vec<u8> = vec![0];
    let hasher = DefaultHashBuilder::default();
    let mut table: HashTable<u32> = HashTable::new();
    let h0 = hasher.hash_one(&elems[..m]);
    table.insert_unique(h0, 0, |&i| hasher.hash_one(&elems[i as usize * m..(i as usize + 1) * m]));

    let mut first_of_type: BTreeMap<CycleType, u32> = BTreeMap::new();
    first_of_type.insert(CycleType::new(vec![1; m]), 0);

    let mut buf = vec![0u8; m];
    let mut seen = vec![false; m];
    let mut head = 0usize;
    while head < parent.len() {
        for (gi, s) in packed.iter().enumerate() {
            {
                let g = &elems[head * m..(head + 1) * m];
                for x in 0..m {
                    buf[x] = g[s[x] as usize];
                }
            }
            let h = hasher.hash_one(&buf[..]);
            let found = table.find(h, |&i| elems[i as usize * m..(i as usize + 1) * m] == buf[..]).is_some();
            if found {
                continue;
            }
            let idx = parent.len();
            if idx >= cap {
                return Err(Error::ResourceCap(format!(
                    "group enumeration exceeded {cap} elements (raise {MEM_CAP_ENV})"
                )));
            }
            elems.extend_from_slice(&buf);
            parent.push(head as u32);
            via.push(gi as u8);
            table.insert_unique(h, idx as u32, |&i| hasher.hash_one(&elems[i as usize * m..(i as usize + 1) * m]));

            seen.iter_mut().for_each(|b| *b = false);
            let mut parts = Vec::new();
            for start in 0..m {
                if seen[start] {
                    continue;
                }
                let mut len = 0;
                let mut x = start;
                while !seen[x] {
                    seen[x] = true;
                    x = buf[x] as usize;
                    len += 1;
                }
                parts.push(len);
            }
            first_of_type.entry(CycleType::new(parts)).or_insert(idx as u32);
        }
        head += 1;
    }

    let word_of = |mut i: u32| {
        let mut w = Vec::new();
        while parent[i as usize] != u32::MAX {
            w.push(via[i as usize] as usize + 1);
            i = parent[i as usize];
        }
        w.reverse();
        w
    };
    let types = first_of_type
        .into_iter()
        .map(|(parts, i)| TypeWitness { parts, witness_word: word_of(i) })
        .collect();
    Ok(GroupEnumeration { degree: m, order: parent.len() as u64, types })
}

/// Per-cardinality evidence for (or against) strict transitivity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitivityCertificate {
    pub m: usize,
    /// (i, index of a type whose invariant sums miss i), for each covered i.
    pub witnesses: Vec<(usize, usize)>,
    /// The first cardinality that every type leaves invariant, if any.
    pub blocked_at: Option<usize>,
}

impl TransitivityCertificate {
    /// Re-derive the verdict from the certificate alone.
    pub fn replay(&self, cts: &[CycleType]) -> bool {
        let tables: Vec<Vec<bool>> = cts.iter().map(|c| c.sum_table()).collect();
        match self.blocked_at {
            Some(i) => i >= 1 && i < self.m && tables.iter().all(|t| t.get(i).copied().unwrap_or(true)),
            None => {
                (1..self.m).all(|i| {
                    self.witnesses
                        .iter()
                        .any(|&(j, k)| j == i && k < tables.len() && !tables[k].get(i).copied().unwrap_or(true))
                })
            }
        }
    }
}

pub fn is_strictly_transitive(cts: &[CycleType], m: usize) -> (bool, TransitivityCertificate) {
    let tables: Vec<Vec<bool>> = cts.iter().map(|c| c.sum_table()).collect();
    let mut witnesses = Vec::new();
    for i in 1..m {
        match tables.iter().position(|t| !t.get(i).copied().unwrap_or(true)) {
            Some(k) => witnesses.push((i, k)),
            None => return (false, TransitivityCertificate { m, witnesses, blocked_at: Some(i) }),
        }
    }
    (true, TransitivityCertificate { m, witnesses, blocked_at: None })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitiveSearch {
    pub enumeration: GroupEnumeration,
    /// Minimal strictly transitive sets, as indices into `enumeration.types`.
    pub sets: Vec<Vec<usize>>,
    /// True when the empty result is a proof for every set size.
    pub exhaustive: bool,
    pub max_set_size: Option<usize>,
}

/// Cap on how many minimal sets are listed.
pub const MAX_LISTED_SETS: usize = 100_000;

/// Minimal covers of 1..m-1 by the "missed cardinalities" of each type,
/// found by depth-first search in index order.
pub fn minimal_transitive_sets(cts: &[CycleType], m: usize, max_size: Option<usize>) -> (Vec<Vec<usize>>, bool) {
    let words = m.div_ceil(64).max(1);
    let misses: Vec<Vec<u64>> = cts
        .iter()
        .map(|c| {
            let t = c.sum_table();
            let mut bits = vec![0u64; words];
            for i in 1..m {
                if !t[i] {
                    bits[i / 64] |= 1 << (i % 64);
                }
            }
            bits
        })
        .collect();
    let mut target = vec![0u64; words];
    for i in 1..m {
        target[i / 64] |= 1 << (i % 64);
    }
    let covers = |u: &[u64]| u.iter().zip(&target).all(|(a, t)| a & t == *t);
    let mut all = vec![0u64; words];
    for b in &misses {
        all.iter_mut().zip(b).for_each(|(a, x)| *a |= x);
    }
    if !covers(&all) {
        return (Vec::new(), true);
    }
    let bound = max_size.unwrap_or(cts.len()).min(cts.len());
    let mut found = Vec::new();
    let mut chosen = Vec::new();
    fn dfs(
        start: usize,
        union: Vec<u64>,
        chosen: &mut Vec<usize>,
        misses: &[Vec<u64>],
        bound: usize,
        covers: &dyn Fn(&[u64]) -> bool,
        found: &mut Vec<Vec<usize>>,
    ) {
        if found.len() >= MAX_LISTED_SETS {
            return;
        }
        if covers(&union) {
            let minimal = (0..chosen.len()).all(|skip| {
                let mut u = vec![0u64; union.len()];
                for (k, &t) in chosen.iter().enumerate() {
                    if k != skip {
                        u.iter_mut().zip(&misses[t]).for_each(|(a, x)| *a |= x);
                    }
                }
                !covers(&u)
            });
            if minimal {
                found.push(chosen.clone());
            }
            return;
        }
        if chosen.len() == bound {
            return;
        }
        for t in start..misses.len() {
            let adds = misses[t].iter().zip(&union).any(|(x, u)| x & !u != 0);
            if !adds {
                continue;
            }
            let next: Vec<u64> = union.iter().zip(&misses[t]).map(|(a, b)| a | b).collect();
            chosen.push(t);
            dfs(t + 1, next, chosen, misses, bound, covers, found);
            chosen.pop();
        }
    }
    dfs(0, vec![0u64; words], &mut chosen, &misses, bound, &covers, &mut found);
    found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    (found, false)
}

/// Orbit, generators and enumeration for a minuscule representation.
pub fn weyl_action(kind: Kind, rank: usize, highest: &[i64]) -> Result<(RootSystem, Vec<Weight>, Vec<Perm>)> {
    let rs = RootSystem::new(kind, rank)?;
    if !rs.minuscule_weights().iter().any(|w| w == highest) {
        return Err(Error::invalid(format!("{highest:?} is not a minuscule weight of {kind}{rank}")));
    }
    let orbit = rs.weight_orbit(highest)?;
    let gens = reflection_perms(&rs, &orbit)?;
    Ok((rs, orbit, gens))
}

/// All minimal strictly transitive subsets of the occurring cycle types, up to
/// `max_set_size` elements (`None` means unbounded).
pub fn find_strictly_transitive(
    kind: Kind,
    rank: usize,
    highest: &[i64],
    max_set_size: Option<usize>,
    cap: Option<usize>,
) -> Result<TransitiveSearch> {
    let (_, orbit, gens) = weyl_action(kind, rank, highest)?;
    let enumeration = enumerate_cycle_types(&gens, cap)?;
    let cts = enumeration.cycle_types();
    let (sets, proven_empty) = minimal_transitive_sets(&cts, orbit.len(), max_set_size);
    let exhaustive = proven_empty || max_set_size.is_none_or(|b| b >= cts.len());
    Ok(TransitiveSearch { enumeration, sets, exhaustive, max_set_size })
}

/// JSON report of the `weyl` command.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeylReport {
    pub kind: Kind,
    pub rank: usize,
    pub highest_weight: Weight,
    pub orbit_size: usize,
    pub orbit: Vec<Weight>,
    pub group_order: u64,
    pub cycle_types: Vec<TypeWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strictly_transitive_sets: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nonexistence_proven: Option<bool>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ct(p: &[usize]) -> CycleType {
        CycleType::new(p.to_vec())
    }

    #[test]
    fn subset_sums() {
        assert_eq!(invariant_sums(&ct(&[4, 2])), vec![0, 2, 4, 6]);
        assert_eq!(invariant_sums(&ct(&[6])), vec![0, 6]);
        assert_eq!(invariant_sums(&ct(&[3, 2, 1])), (0..=6).collect::<Vec<_>>());
    }

    #[test]
    fn toy_strict_transitivity() {
        assert!(is_strictly_transitive(&[ct(&[6])], 6).0);
        assert!(is_strictly_transitive(&[ct(&[3, 3]), ct(&[4, 2])], 6).0);
        let (ok, cert) = is_strictly_transitive(&[ct(&[3, 3]), ct(&[3, 2, 1])], 6);
        assert!(!ok);
        assert_eq!(cert.blocked_at, Some(3));
        assert!(cert.replay(&[ct(&[3, 3]), ct(&[3, 2, 1])]));
    }

    #[test]
    fn type_a_words() {
        for l in 1..=6 {
            let (_, orbit, gens) = weyl_action(Kind::A, l, &[&[1][..], &vec![0; l - 1]].concat()).unwrap();
            assert_eq!(orbit.len(), l + 1);
            for (i, g) in gens.iter().enumerate() {
                assert!(g.compose(g).is_identity());
                let mut t: Vec<usize> = (0..=l).collect();
                t.swap(i, i + 1);
                assert_eq!(g.images(), &t[..]);
            }
            let word: Vec<usize> = (1..=l).collect();
            let p = word_perm(&gens, &word).unwrap();
            assert_eq!(p.images(), &(1..=l).chain([0]).collect::<Vec<_>>()[..]);
        }
        let (_, _, gens) = weyl_action(Kind::A, 2, &[1, 0]).unwrap();
        assert!(word_perm(&gens, &[]).unwrap().is_identity());
        let e = enumerate_cycle_types(&gens, None).unwrap();
        assert_eq!(e.order, 6);
        assert_eq!(e.cycle_types(), vec![ct(&[1, 1, 1]), ct(&[2, 1]), ct(&[3])]);
    }

    #[test]
    fn d_type_last_reflection_in_printed_labels() {
        for l in 3..=6 {
            let (rs, orbit, gens) = weyl_action(Kind::D, l, &{
                let mut w = vec![0; l];
                w[0] = 1;
                w
            })
            .unwrap();
            // printed label of coordinate j: eps_{j+1} -> j+1, -eps_{j+1} -> l+j+1
            let label: Vec<usize> = orbit
                .iter()
                .map(|w| (0..2 * l).find(|&j| &rs.coordinate_weight(j).unwrap() == w).unwrap() + 1)
                .collect();
            let s = &gens[l - 1];
            let mut moved: Vec<(usize, usize)> = (0..2 * l)
                .filter(|&x| s.apply(x) != x)
                .map(|x| (label[x], label[s.apply(x)]))
                .filter(|(a, b)| a < b)
                .collect();
            moved.sort();
            assert_eq!(moved, vec![(l - 1, 2 * l), (l, 2 * l - 1)]);
        }
    }

    #[test]
    fn witness_words_replay() {
        let (_, _, gens) = weyl_action(Kind::B, 3, &[0, 0, 1]).unwrap();
        let e = enumerate_cycle_types(&gens, None).unwrap();
        assert_eq!(e.order, 48);
        for t in &e.types {
            assert_eq!(word_perm(&gens, &t.witness_word).unwrap().cycle_type(), t.parts);
        }
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        let (_, _, gens) = weyl_action(Kind::A, 4, &[1, 0, 0, 0]).unwrap();
        assert!(matches!(enumerate_cycle_types(&gens, Some(10)), Err(Error::ResourceCap(_))));
    }

    #[test]
    fn minimal_sets_for_a() {
        let s = find_strictly_transitive(Kind::A, 3, &[1, 0, 0], Some(2), None).unwrap();
        let idx = s.enumeration.find(&[4]).unwrap();
        assert!(s.sets.contains(&vec![idx]));
        for set in &s.sets {
            let cts: Vec<CycleType> = set.iter().map(|&i| s.enumeration.types[i].parts.clone()).collect();
            assert!(is_strictly_transitive(&cts, 4).0);
        }
    }
}
