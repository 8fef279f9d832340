//! Finite permutation groups given by generators.
//!
//! Group elements multiply as functions: `g·h = g ∘ h` applies `h` first.
//! Elements are enumerated breadth-first from the identity, applying the
//! generators on the right in input order, so element `0` is always the
//! identity and the order is reproducible.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::ErrorKind;
use crate::field::is_prime;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("not a permutation: {0:?}")]
    InvalidPerm(Vec<usize>),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("group exceeds cap of {cap} elements")]
    GroupTooLarge { cap: usize },
    #[error("element is not in the group")]
    UnknownElement,
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
}

impl GroupError {
    pub fn kind(&self) -> ErrorKind {
        match self {
            GroupError::GroupTooLarge { .. } => ErrorKind::CapExceeded,
            _ => ErrorKind::Input,
        }
    }
}

/// A bijection of `{0, …, m-1}`, stored by its images.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn identity(m: usize) -> Self {
        Perm {
            images: (0..m).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, GroupError> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return Err(GroupError::InvalidPerm(images));
            }
        }
        Ok(Perm { images })
    }

    /// Product of the given cycles on `m` points. Cycles must be disjoint.
    pub fn from_cycles(m: usize, cycles: &[&[usize]]) -> Result<Self, GroupError> {
        let mut images: Vec<usize> = (0..m).collect();
        let mut touched = vec![false; m];
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                let b = cycle[(k + 1) % cycle.len()];
                if a >= m || b >= m || std::mem::replace(&mut touched[a], true) {
                    return Err(GroupError::InvalidPerm(cycle.to_vec()));
                }
                images[a] = b;
            }
        }
        Perm::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self ∘ other`: apply `other`, then `self`.
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Perm { images }
    }

    pub fn cycle_lengths(&self) -> Vec<usize> {
        let mut seen = vec![false; self.degree()];
        let mut lengths = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i];
                len += 1;
            }
            lengths.push(len);
        }
        lengths
    }

    /// Order of the permutation: lcm of its cycle lengths.
    pub fn order(&self) -> u64 {
        self.cycle_lengths()
            .into_iter()
            .fold(1, |acc, l| lcm(acc, l as u64))
    }
}

impl TryFrom<Vec<usize>> for Perm {
    type Error = GroupError;

    fn try_from(images: Vec<usize>) -> Result<Self, Self::Error> {
        Perm::from_images(images)
    }
}

impl From<Perm> for Vec<usize> {
    fn from(p: Perm) -> Self {
        p.images
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.images)
    }
}

impl fmt::Display for Perm {
    /// Cycle notation, `()` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.degree()];
        let mut any = false;
        for start in 0..self.degree() {
            if seen[start] || self.images[start] == start {
                continue;
            }
            any = true;
            write!(f, "(")?;
            let mut i = start;
            let mut first = true;
            while !seen[i] {
                seen[i] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{i}")?;
                first = false;
                i = self.images[i];
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// The group generated by a list of permutations, fully enumerated.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    degree: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
    /// Generator word (indices into `generators`) that first reached each element.
    words: Vec<Vec<usize>>,
    index: HashMap<Perm, usize>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.generators == other.generators
    }
}

impl FiniteGroup {
    /// Breadth-first closure of `generators` acting on `degree` points.
    pub fn close(degree: usize, generators: Vec<Perm>, cap: usize) -> Result<Self, GroupError> {
        for g in &generators {
            if g.degree() != degree {
                return Err(GroupError::DegreeMismatch {
                    expected: degree,
                    found: g.degree(),
                });
            }
        }
        let id = Perm::identity(degree);
        let mut elements = vec![id.clone()];
        let mut words = vec![Vec::new()];
        let mut index = HashMap::from([(id, 0usize)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for (j, s) in generators.iter().enumerate() {
                let next = elements[i].compose(s);
                if index.contains_key(&next) {
                    continue;
                }
                if elements.len() >= cap {
                    return Err(GroupError::GroupTooLarge { cap });
                }
                let mut word = words[i].clone();
                word.push(j);
                index.insert(next.clone(), elements.len());
                queue.push_back(elements.len());
                elements.push(next);
                words.push(word);
            }
        }
        Ok(FiniteGroup {
            degree,
            generators,
            elements,
            words,
            index,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Perm {
        &self.elements[i]
    }

    pub fn identity_index(&self) -> usize {
        0
    }

    /// The generator word that reached element `i` during closure.
    pub fn word(&self, i: usize) -> &[usize] {
        &self.words[i]
    }

    pub fn index_of(&self, g: &Perm) -> Option<usize> {
        self.index.get(g).copied()
    }

    /// Index of the product `elements[a] · elements[b]`.
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.index[&self.elements[a].compose(&self.elements[b])]
    }

    pub fn inverse_index(&self, a: usize) -> usize {
        self.index[&self.elements[a].inverse()]
    }

    pub fn generator_indices(&self) -> Vec<usize> {
        self.generators.iter().map(|g| self.index[g]).collect()
    }

    fn table(&self) -> MulTable {
        let n = self.order();
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = self.mul(a, b) as u32;
            }
        }
        let inverse = (0..n).map(|a| self.inverse_index(a)).collect();
        MulTable { n, table, inverse }
    }

    /// Every subgroup, by closing each known subgroup with one more element.
    /// Sorted by size, then by element indices.
    pub fn subgroups(&self, cap: usize) -> Result<Vec<Vec<usize>>, GroupError> {
        if self.order() > cap {
            return Err(GroupError::GroupTooLarge { cap });
        }
        let t = self.table();
        let mut found: HashSet<Vec<usize>> = HashSet::new();
        let trivial = vec![0usize];
        found.insert(trivial.clone());
        let mut queue = VecDeque::from([(trivial, Vec::<usize>::new())]);
        while let Some((members, gens)) = queue.pop_front() {
            let mut inside = vec![false; t.n];
            for &m in &members {
                inside[m] = true;
            }
            for g in 0..t.n {
                if inside[g] {
                    continue;
                }
                let mut next_gens = gens.clone();
                next_gens.push(g);
                let closed = t.closure(&next_gens);
                if found.insert(closed.clone()) {
                    queue.push_back((closed, next_gens));
                }
            }
        }
        Ok(sorted_sets(found))
    }

    /// Normal subgroups. Small groups are handled by filtering the full
    /// subgroup lattice, larger ones by closing unions of conjugacy classes.
    pub fn normal_subgroups(&self, cap: usize) -> Result<Vec<Vec<usize>>, GroupError> {
        if self.order() <= 100 {
            self.normal_subgroups_from_lattice(cap)
        } else {
            self.normal_subgroups_from_classes(cap)
        }
    }

    pub fn normal_subgroups_from_lattice(&self, cap: usize) -> Result<Vec<Vec<usize>>, GroupError> {
        Ok(self
            .subgroups(cap)?
            .into_iter()
            .filter(|h| self.is_normal(h))
            .collect())
    }

    pub fn normal_subgroups_from_classes(&self, cap: usize) -> Result<Vec<Vec<usize>>, GroupError> {
        if self.order() > cap {
            return Err(GroupError::GroupTooLarge { cap });
        }
        let t = self.table();
        let classes = t.conjugacy_classes();
        let mut found: HashSet<Vec<usize>> = HashSet::new();
        let trivial = vec![0usize];
        found.insert(trivial.clone());
        let mut queue = VecDeque::from([trivial]);
        while let Some(members) = queue.pop_front() {
            let mut inside = vec![false; t.n];
            for &m in &members {
                inside[m] = true;
            }
            for class in &classes {
                if inside[class[0]] {
                    continue;
                }
                let gens: Vec<usize> = members.iter().chain(class.iter()).copied().collect();
                let closed = t.closure(&gens);
                if found.insert(closed.clone()) {
                    queue.push_back(closed);
                }
            }
        }
        Ok(sorted_sets(found))
    }

    /// Whether `g h g⁻¹ ∈ subset` for every group element `g` and `h ∈ subset`.
    pub fn is_normal(&self, subset: &[usize]) -> bool {
        let members: HashSet<usize> = subset.iter().copied().collect();
        (0..self.order()).all(|g| {
            let g_inv = self.inverse_index(g);
            subset
                .iter()
                .all(|&h| members.contains(&self.mul(self.mul(g, h), g_inv)))
        })
    }

    /// Least common multiple of the orders of the given elements.
    pub fn exponent(&self, subset: &[usize]) -> u64 {
        subset
            .iter()
            .fold(1, |acc, &i| lcm(acc, self.elements[i].order()))
    }
}

struct MulTable {
    n: usize,
    table: Vec<u32>,
    inverse: Vec<usize>,
}

impl MulTable {
    fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b] as usize
    }

    /// The subgroup generated by `gens`, as sorted element indices.
    fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.n];
        inside[0] = true;
        let mut members = vec![0usize];
        let mut k = 0;
        while k < members.len() {
            let a = members[k];
            for &g in gens {
                let b = self.mul(a, g);
                if !inside[b] {
                    inside[b] = true;
                    members.push(b);
                }
            }
            k += 1;
        }
        members.sort_unstable();
        members
    }

    fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut assigned = vec![false; self.n];
        let mut classes = Vec::new();
        for x in 0..self.n {
            if assigned[x] {
                continue;
            }
            let mut class: Vec<usize> = (0..self.n)
                .map(|g| self.mul(self.mul(g, x), self.inverse[g]))
                .collect();
            class.sort_unstable();
            class.dedup();
            for &c in &class {
                assigned[c] = true;
            }
            classes.push(class);
        }
        classes
    }
}

fn sorted_sets(found: HashSet<Vec<usize>>) -> Vec<Vec<usize>> {
    let mut out: Vec<_> = found.into_iter().collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Outcome of the membership test for the class of finite groups without
/// nontrivial normal subgroups of exponent dividing `p^n (p^n - 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassVerdict {
    pub member: bool,
    /// `p^n (p^n - 1)`.
    pub bound: u128,
    /// Smallest offending normal subgroup (element indices) when not a member.
    pub witness: Option<Vec<usize>>,
    pub witness_exponent: Option<u64>,
}

/// Membership of a finite group in the class determined by `p` and `n`.
///
/// Every finite group is co-Hopfian, so only the normal-subgroup condition is
/// evaluated. Infinite groups are not representable here.
pub fn in_class(
    group: &FiniteGroup,
    p: u64,
    n: u64,
    cap: usize,
) -> Result<ClassVerdict, GroupError> {
    if !is_prime(p) {
        return Err(GroupError::InvalidParameters(format!("{p} is not prime")));
    }
    if n < 1 {
        return Err(GroupError::InvalidParameters("n must be at least 1".into()));
    }
    let q = u32::try_from(n)
        .ok()
        .and_then(|n| (p as u128).checked_pow(n))
        .ok_or_else(|| GroupError::InvalidParameters(format!("{p}^{n} overflows")))?;
    let bound = q
        .checked_mul(q - 1)
        .ok_or_else(|| GroupError::InvalidParameters(format!("{p}^{n} overflows")))?;
    for normal in group.normal_subgroups(cap)? {
        if normal.len() == 1 {
            continue;
        }
        let exp = group.exponent(&normal);
        if bound % exp as u128 == 0 {
            return Ok(ClassVerdict {
                member: false,
                bound,
                witness: Some(normal),
                witness_exponent: Some(exp),
            });
        }
    }
    Ok(ClassVerdict {
        member: true,
        bound,
        witness: None,
        witness_exponent: None,
    })
}
