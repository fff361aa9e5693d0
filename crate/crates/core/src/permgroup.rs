//! Exact permutation groups of small order.
//!
//! Every group is stored with its full element list. That keeps the engine
//! auditable: the groups met in this crate have at most a few thousand
//! elements, and anything larger is refused with [`GroupError::CapExceeded`].

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Default bound on the number of elements a [`Group`] may enumerate.
pub const DEFAULT_GROUP_CAP: usize = 20_000;

/// Largest group order accepted by [`Group::subgroups`].
pub const SUBGROUP_ENUMERATION_CAP: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group closure exceeded the cap of {cap} elements")]
    CapExceeded { cap: usize },
    #[error("permutation acts on {found} points, expected {expected}")]
    DomainMismatch { expected: usize, found: usize },
    #[error("not a subgroup of the ambient group")]
    NotASubgroup,
    #[error("image list is not a bijection of 0..{0}")]
    NotAPermutation(usize),
}

/// A bijection of `0..degree`, stored as its image list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Self {
            images: (0..degree as u32).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, GroupError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(GroupError::NotAPermutation(n));
            }
            seen[i] = true;
        }
        Ok(Self {
            images: images.into_iter().map(|i| i as u32).collect(),
        })
    }

    /// Builds a permutation from disjoint cycles, e.g. `&[&[0, 1, 2]]` for (0 1 2).
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self, GroupError> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                if a >= degree || touched[a] {
                    return Err(GroupError::NotAPermutation(degree));
                }
                touched[a] = true;
                images[a] = cycle[(k + 1) % cycle.len()];
            }
        }
        Self::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&i| i as usize).collect()
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: other
                .images
                .iter()
                .map(|&i| self.images[i as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u32; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j as usize] = i as u32;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    pub fn pow(&self, exponent: i64) -> Permutation {
        let base = if exponent < 0 {
            self.inverse()
        } else {
            self.clone()
        };
        let mut result = Permutation::identity(self.degree());
        for _ in 0..exponent.unsigned_abs() {
            result = result.compose(&base);
        }
        result
    }

    /// Conjugate `x · self · x⁻¹`.
    pub fn conjugate_by(&self, x: &Permutation) -> Permutation {
        x.compose(self).compose(&x.inverse())
    }

    pub fn order(&self) -> usize {
        let mut seen = vec![false; self.degree()];
        let mut order = 1usize;
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                p = self.apply(p);
                len += 1;
            }
            order = num_integer::lcm(order, len);
        }
        order
    }

    pub fn fixes(&self, point: usize) -> bool {
        self.apply(point) == point
    }
}

impl Mul for &Permutation {
    type Output = Permutation;
    fn mul(self, rhs: &Permutation) -> Permutation {
        self.compose(rhs)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Cycle notation; fixed points are omitted and the identity prints as `()`.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.degree()];
        let mut any = false;
        for start in 0..self.degree() {
            if seen[start] || self.fixes(start) {
                continue;
            }
            any = true;
            write!(f, "(")?;
            let mut p = start;
            let mut first = true;
            while !seen[p] {
                seen[p] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{p}")?;
                first = false;
                p = self.apply(p);
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.images.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let images = Vec::<usize>::deserialize(deserializer)?;
        Permutation::from_images(images).map_err(serde::de::Error::custom)
    }
}

/// Partition of `0..degree` into orbits of the group generated by `generators`.
///
/// Blocks are sorted internally and listed by smallest element.
pub fn orbit_partition(degree: usize, generators: &[Permutation]) -> Vec<Vec<usize>> {
    let mut block_of = vec![usize::MAX; degree];
    let mut blocks = Vec::new();
    for start in 0..degree {
        if block_of[start] != usize::MAX {
            continue;
        }
        let id = blocks.len();
        let mut block = vec![start];
        block_of[start] = id;
        let mut head = 0;
        while head < block.len() {
            let p = block[head];
            head += 1;
            for g in generators {
                let q = g.apply(p);
                if block_of[q] == usize::MAX {
                    block_of[q] = id;
                    block.push(q);
                }
            }
        }
        block.sort_unstable();
        blocks.push(block);
    }
    blocks
}

/// A finite permutation group with its elements enumerated.
#[derive(Clone)]
pub struct Group {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
}

impl Group {
    /// Closure of `generators` under composition. Elements are stored in
    /// lexicographic order of their image lists, so the identity comes first.
    pub fn generate(
        degree: usize,
        generators: Vec<Permutation>,
        cap: usize,
    ) -> Result<Group, GroupError> {
        for g in &generators {
            if g.degree() != degree {
                return Err(GroupError::DomainMismatch {
                    expected: degree,
                    found: g.degree(),
                });
            }
        }
        let generators: Vec<Permutation> = generators
            .into_iter()
            .filter(|g| !g.is_identity())
            .collect();
        let identity = Permutation::identity(degree);
        let mut seen: HashSet<Permutation> = HashSet::new();
        seen.insert(identity.clone());
        let mut queue = VecDeque::from([identity]);
        while let Some(x) = queue.pop_front() {
            for g in &generators {
                let y = g.compose(&x);
                if !seen.contains(&y) {
                    if seen.len() >= cap {
                        return Err(GroupError::CapExceeded { cap });
                    }
                    seen.insert(y.clone());
                    queue.push_back(y);
                }
            }
        }
        Ok(Self::from_parts(
            degree,
            generators,
            seen.into_iter().collect(),
        ))
    }

    fn from_parts(
        degree: usize,
        generators: Vec<Permutation>,
        mut elements: Vec<Permutation>,
    ) -> Group {
        elements.sort_unstable();
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        Group {
            degree,
            generators,
            elements,
            index,
        }
    }

    /// Builds a group from a set already known to be closed, choosing a
    /// small generating set greedily.
    fn from_closed_set(degree: usize, mut elements: Vec<Permutation>) -> Group {
        elements.sort_unstable();
        let mut generators: Vec<Permutation> = Vec::new();
        let mut span: HashSet<Permutation> = HashSet::from([Permutation::identity(degree)]);
        for x in &elements {
            if !span.contains(x) {
                generators.push(x.clone());
                span = Group::generate(degree, generators.clone(), usize::MAX)
                    .expect("uncapped")
                    .elements
                    .into_iter()
                    .collect();
            }
        }
        Self::from_parts(degree, generators, elements)
    }

    pub fn trivial(degree: usize) -> Group {
        Self::from_parts(degree, Vec::new(), vec![Permutation::identity(degree)])
    }

    /// The full symmetric group on `degree` points (small degrees only).
    pub fn symmetric(degree: usize, cap: usize) -> Result<Group, GroupError> {
        let mut gens = Vec::new();
        if degree >= 2 {
            gens.push(Permutation::from_cycles(degree, &[&[0, 1]])?);
            let cycle: Vec<usize> = (0..degree).collect();
            gens.push(Permutation::from_cycles(degree, &[&cycle])?);
        }
        Group::generate(degree, gens, cap)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn identity(&self) -> Permutation {
        Permutation::identity(self.degree)
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.index.contains_key(p)
    }

    /// Position of `p` in [`Group::elements`].
    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn is_abelian(&self) -> bool {
        self.generators.iter().enumerate().all(|(i, a)| {
            self.generators[i + 1..]
                .iter()
                .all(|b| a.compose(b) == b.compose(a))
        })
    }

    pub fn is_transitive(&self) -> bool {
        self.degree <= 1 || self.orbits().len() == 1
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        orbit_partition(self.degree, &self.generators)
    }

    /// Orbits on an explicitly sized point set; errors if the size differs
    /// from the degree.
    pub fn orbits_on(&self, points: usize) -> Result<Vec<Vec<usize>>, GroupError> {
        if points != self.degree {
            return Err(GroupError::DomainMismatch {
                expected: self.degree,
                found: points,
            });
        }
        Ok(self.orbits())
    }

    pub fn is_subgroup_of(&self, other: &Group) -> bool {
        self.degree == other.degree && self.generators.iter().all(|g| other.contains(g))
    }

    fn require_subgroup(&self, ambient: &Group) -> Result<(), GroupError> {
        if self.is_subgroup_of(ambient) {
            Ok(())
        } else {
            Err(GroupError::NotASubgroup)
        }
    }

    /// Element set as a sorted index list relative to `ambient`.
    fn index_set_in(&self, ambient: &Group) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .elements
            .iter()
            .map(|x| ambient.index_of(x).expect("subgroup element"))
            .collect();
        v.sort_unstable();
        v
    }

    /// Same element set (generators may differ).
    pub fn same_elements(&self, other: &Group) -> bool {
        self.order() == other.order() && self.elements == other.elements
    }

    /// Smallest normal subgroup of `self` containing `seed`.
    pub fn normal_closure(&self, seed: &[Permutation], cap: usize) -> Result<Group, GroupError> {
        for s in seed {
            if !self.contains(s) {
                return Err(GroupError::NotASubgroup);
            }
        }
        let mut gens: Vec<Permutation> =
            seed.iter().filter(|s| !s.is_identity()).cloned().collect();
        let mut closure = Group::generate(self.degree, gens.clone(), cap)?;
        'grow: loop {
            for n in closure.generators.clone() {
                for g in &self.generators {
                    let c = n.conjugate_by(g);
                    if !closure.contains(&c) {
                        gens.push(c);
                        closure = Group::generate(self.degree, gens.clone(), cap)?;
                        continue 'grow;
                    }
                }
            }
            return Ok(closure);
        }
    }

    /// Whether `h` is normal in `self`. Conjugating the generators of `h` by
    /// the generators of `self` is enough.
    pub fn has_normal_subgroup(&self, h: &Group) -> Result<bool, GroupError> {
        h.require_subgroup(self)?;
        Ok(self
            .generators
            .iter()
            .all(|g| h.generators.iter().all(|x| h.contains(&x.conjugate_by(g)))))
    }

    pub fn conjugate_subgroup(&self, h: &Group, x: &Permutation) -> Group {
        let elements: Vec<Permutation> = h.elements.iter().map(|e| e.conjugate_by(x)).collect();
        let generators = h.generators.iter().map(|e| e.conjugate_by(x)).collect();
        Self::from_parts(self.degree, generators, elements)
    }

    pub fn intersection(&self, other: &Group) -> Group {
        let elements: Vec<Permutation> = self
            .elements
            .iter()
            .filter(|x| other.contains(x))
            .cloned()
            .collect();
        Self::from_closed_set(self.degree, elements)
    }

    /// Largest normal subgroup of `self` contained in `h`: the intersection
    /// of all conjugates of `h`.
    pub fn core(&self, h: &Group) -> Result<Group, GroupError> {
        h.require_subgroup(self)?;
        let mut alive: Vec<Permutation> = h.elements.clone();
        for x in &self.elements {
            let xinv = x.inverse();
            // y ∈ x h x⁻¹  ⇔  x⁻¹ y x ∈ h
            alive.retain(|y| h.contains(&xinv.compose(y).compose(x)));
            if alive.len() == 1 {
                break;
            }
        }
        Ok(Self::from_closed_set(self.degree, alive))
    }

    /// `{x ∈ self : x h x⁻¹ = h}`.
    pub fn normalizer(&self, h: &Group) -> Result<Group, GroupError> {
        h.require_subgroup(self)?;
        let elements: Vec<Permutation> = self
            .elements
            .iter()
            .filter(|x| h.generators.iter().all(|g| h.contains(&g.conjugate_by(x))))
            .cloned()
            .collect();
        Ok(Self::from_closed_set(self.degree, elements))
    }

    /// Point stabiliser of `point`.
    pub fn stabilizer(&self, point: usize) -> Group {
        let elements = self
            .elements
            .iter()
            .filter(|x| x.fixes(point))
            .cloned()
            .collect();
        Self::from_closed_set(self.degree, elements)
    }

    /// Commutator subgroup `[G, G]`.
    pub fn derived_subgroup(&self, cap: usize) -> Result<Group, GroupError> {
        let mut seed = Vec::new();
        for a in &self.generators {
            for b in &self.generators {
                seed.push(a.compose(b).compose(&a.inverse()).compose(&b.inverse()));
            }
        }
        self.normal_closure(&seed, cap)
    }

    /// Multiplication table on element indices: `table[i][j] = index(e_i ∘ e_j)`.
    pub fn cayley_table(&self) -> Vec<Vec<usize>> {
        self.elements
            .iter()
            .map(|a| {
                self.elements
                    .iter()
                    .map(|b| self.index[&a.compose(b)])
                    .collect()
            })
            .collect()
    }

    /// Every subgroup, found by repeated cyclic extension from the trivial
    /// group. Result is sorted by order, then by element indices.
    pub fn subgroups(&self) -> Result<Vec<Group>, GroupError> {
        if self.order() > SUBGROUP_ENUMERATION_CAP {
            return Err(GroupError::CapExceeded {
                cap: SUBGROUP_ENUMERATION_CAP,
            });
        }
        let n = self.order();
        let table = self.cayley_table();
        let identity = 0usize;
        debug_assert!(self.elements[identity].is_identity());

        let close = |seed: &[bool], extra: usize| -> Vec<bool> {
            let mut member = seed.to_vec();
            let mut list: Vec<usize> = (0..n).filter(|&i| member[i]).collect();
            let mut gens: Vec<usize> = list.clone();
            gens.push(extra);
            if !member[extra] {
                member[extra] = true;
                list.push(extra);
            }
            let mut head = 0;
            while head < list.len() {
                let x = list[head];
                head += 1;
                for &g in &gens {
                    let y = table[g][x];
                    if !member[y] {
                        member[y] = true;
                        list.push(y);
                    }
                }
            }
            member
        };

        let mut trivial = vec![false; n];
        trivial[identity] = true;
        let mut found: BTreeSet<Vec<bool>> = BTreeSet::new();
        found.insert(trivial.clone());
        let mut frontier = vec![trivial];
        while let Some(h) = frontier.pop() {
            for x in 0..n {
                if h[x] {
                    continue;
                }
                let bigger = close(&h, x);
                if found.insert(bigger.clone()) {
                    frontier.push(bigger);
                }
            }
        }

        let mut subgroups: Vec<(usize, Vec<usize>)> = found
            .into_iter()
            .map(|m| {
                let idx: Vec<usize> = (0..n).filter(|&i| m[i]).collect();
                (idx.len(), idx)
            })
            .collect();
        subgroups.sort();
        Ok(subgroups
            .into_iter()
            .map(|(_, idx)| {
                let elements = idx.iter().map(|&i| self.elements[i].clone()).collect();
                Self::from_closed_set(self.degree, elements)
            })
            .collect())
    }

    /// Index-set key of `self` inside `ambient`, for deduplication.
    pub fn key_in(&self, ambient: &Group) -> Vec<usize> {
        self.index_set_in(ambient)
    }

    /// Image of every element under a homomorphism given on all elements.
    pub fn map_elements<F>(&self, f: F) -> Vec<Permutation>
    where
        F: Fn(&Permutation) -> Permutation,
    {
        self.elements.iter().map(f).collect()
    }
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Group")
            .field("degree", &self.degree)
            .field("order", &self.order())
            .field("generators", &self.generators)
            .finish()
    }
}

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.elements == other.elements
    }
}

impl Eq for Group {}

#[derive(Serialize, Deserialize)]
struct GroupRepr {
    degree: usize,
    order: usize,
    generators: Vec<Permutation>,
}

/// Serialised as degree, order and generators; the element list is rebuilt
/// on load.
impl Serialize for Group {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        GroupRepr {
            degree: self.degree,
            order: self.order(),
            generators: self.generators.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Group {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = GroupRepr::deserialize(deserializer)?;
        let group = Group::generate(repr.degree, repr.generators, DEFAULT_GROUP_CAP)
            .map_err(serde::de::Error::custom)?;
        if group.order() != repr.order {
            return Err(serde::de::Error::custom(format!(
                "declared order {} but generators give {}",
                repr.order,
                group.order()
            )));
        }
        Ok(group)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(n: usize, cycles: &[&[usize]]) -> Permutation {
        Permutation::from_cycles(n, cycles).unwrap()
    }

    fn s3() -> Group {
        Group::generate(3, vec![cyc(3, &[&[0, 1]]), cyc(3, &[&[0, 1, 2]])], 100).unwrap()
    }

    #[test]
    fn generate_examples() {
        assert_eq!(Group::generate(4, vec![], 10).unwrap().order(), 1);
        let c4 = Group::generate(4, vec![cyc(4, &[&[0, 1, 2, 3]])], 10).unwrap();
        assert_eq!(c4.order(), 4);
        assert_eq!(s3().order(), 6);
        assert!(c4.elements()[0].is_identity());
    }

    #[test]
    fn generate_errors() {
        let err = Group::generate(4, vec![cyc(3, &[&[0, 1]])], 10).unwrap_err();
        assert_eq!(
            err,
            GroupError::DomainMismatch {
                expected: 4,
                found: 3
            }
        );
        let s4 = Group::symmetric(4, 23);
        assert_eq!(s4.unwrap_err(), GroupError::CapExceeded { cap: 23 });
        assert_eq!(Group::symmetric(4, 24).unwrap().order(), 24);
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_images(vec![0, 0, 1]).is_err());
        assert!(Permutation::from_images(vec![0, 3]).is_err());
        assert!(Permutation::from_cycles(3, &[&[0, 1], &[1, 2]]).is_err());
    }

    #[test]
    fn orbit_examples() {
        assert_eq!(Group::trivial(5).orbits().len(), 5);
        let c4 = Group::generate(4, vec![cyc(4, &[&[0, 1, 2, 3]])], 10).unwrap();
        assert_eq!(c4.orbits(), vec![vec![0, 1, 2, 3]]);
        assert_eq!(s3().orbits(), vec![vec![0, 1, 2]]);
        assert!(s3().orbits_on(4).is_err());
    }

    #[test]
    fn normal_closure_examples() {
        let g = s3();
        assert_eq!(g.normal_closure(&[g.identity()], 100).unwrap().order(), 1);
        let n = g.normal_closure(&[cyc(3, &[&[0, 1, 2]])], 100).unwrap();
        assert_eq!(n.order(), 3);
        let t = g.normal_closure(&[cyc(3, &[&[0, 1]])], 100).unwrap();
        assert_eq!(t.order(), 6);
    }

    #[test]
    fn normality_and_core() {
        let g = s3();
        assert!(g.has_normal_subgroup(&g).unwrap());
        let h = Group::generate(3, vec![cyc(3, &[&[0, 1]])], 10).unwrap();
        assert!(!g.has_normal_subgroup(&h).unwrap());
        assert_eq!(g.core(&h).unwrap().order(), 1);
        let a3 = Group::generate(3, vec![cyc(3, &[&[0, 1, 2]])], 10).unwrap();
        assert_eq!(g.core(&a3).unwrap(), a3);
        assert_eq!(g.normalizer(&h).unwrap(), h);
        let foreign = Group::generate(4, vec![cyc(4, &[&[0, 1]])], 10).unwrap();
        assert_eq!(g.core(&foreign).unwrap_err(), GroupError::NotASubgroup);
    }

    #[test]
    fn subgroup_counts() {
        assert_eq!(Group::trivial(3).subgroups().unwrap().len(), 1);
        let v4 = Group::generate(
            4,
            vec![cyc(4, &[&[0, 1], &[2, 3]]), cyc(4, &[&[0, 2], &[1, 3]])],
            10,
        )
        .unwrap();
        assert_eq!(v4.subgroups().unwrap().len(), 5);
        let c4 = Group::generate(4, vec![cyc(4, &[&[0, 1, 2, 3]])], 10).unwrap();
        assert_eq!(c4.subgroups().unwrap().len(), 3);
        assert_eq!(s3().subgroups().unwrap().len(), 6);
        assert_eq!(
            Group::symmetric(4, 100).unwrap().subgroups().unwrap().len(),
            30
        );
    }

    #[test]
    fn derived_subgroup_of_s3() {
        assert_eq!(s3().derived_subgroup(100).unwrap().order(), 3);
    }

    #[test]
    fn display_and_serde() {
        let p = cyc(5, &[&[0, 3], &[1, 2, 4]]);
        assert_eq!(p.to_string(), "(0 3)(1 2 4)");
        assert_eq!(p.order(), 6);
        let json = serde_json::to_string(&s3()).unwrap();
        let back: Group = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s3());
    }
}
