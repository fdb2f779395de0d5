//! Sets of permutations and the subgroup utilities built on them.

pub mod projective;

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::perm::{all_permutations_capped, Permutation, MAX_RANK_DEGREE};

pub use projective::{
    is_sharply_3_transitive, pgl2, pgl2_in_degree, point_labeling, FieldElement, MoebiusMap,
    ProjectivePoint,
};

/// Default element cap for [`closure`].
pub const DEFAULT_CLOSURE_CAP: usize = 1_000_000;

/// Which side a translating element multiplies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// `g ∘ h` for `h` in the set.
    Left,
    /// `h ∘ g` for `h` in the set.
    Right,
}

/// A duplicate-free set of permutations of one degree.
///
/// Elements are kept sorted by word, which is the same order as their ranks.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PermutationSet {
    degree: usize,
    elements: Vec<Permutation>,
}

impl PermutationSet {
    pub fn empty(degree: usize) -> Self {
        Self {
            degree,
            elements: Vec::new(),
        }
    }

    pub fn from_perms<I>(degree: usize, perms: I) -> Result<Self>
    where
        I: IntoIterator<Item = Permutation>,
    {
        let mut elements = Vec::new();
        for p in perms {
            if p.degree() != degree {
                return Err(Error::DegreeMismatch {
                    left: degree,
                    right: p.degree(),
                });
            }
            elements.push(p);
        }
        elements.sort_unstable();
        elements.dedup();
        Ok(Self { degree, elements })
    }

    /// Builds a set from ranks; requires `degree <= 20`.
    pub fn from_ranks<I>(degree: usize, ranks: I) -> Result<Self>
    where
        I: IntoIterator<Item = u64>,
    {
        let perms = ranks
            .into_iter()
            .map(|r| Permutation::unrank(degree, r))
            .collect::<Result<Vec<_>>>()?;
        Self::from_perms(degree, perms)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Permutation> {
        self.elements.iter()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    /// Sorted ranks; panics past degree 20.
    pub fn ranks(&self) -> Vec<u64> {
        assert!(self.degree <= MAX_RANK_DEGREE);
        self.elements.iter().map(Permutation::rank).collect()
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let elements = self
            .elements
            .iter()
            .filter(|p| other.contains(p))
            .copied()
            .collect();
        Self {
            degree: self.degree,
            elements,
        }
    }

    fn check_degree(&self, degree: usize) -> Result<()> {
        if self.degree != degree {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: degree,
            });
        }
        Ok(())
    }

    /// True iff the set contains the identity and is closed under composition.
    pub fn is_group(&self) -> bool {
        let Ok(id) = Permutation::identity(self.degree) else {
            return false;
        };
        self.contains(&id)
            && self.iter().all(|a| {
                self.contains(&a.inverse())
                    && self.iter().all(|b| self.contains(&a.compose_unchecked(b)))
            })
    }
}

impl<'a> IntoIterator for &'a PermutationSet {
    type Item = &'a Permutation;
    type IntoIter = std::slice::Iter<'a, Permutation>;

    fn into_iter(self) -> Self::IntoIter {
        self.elements.iter()
    }
}

/// Smallest composition-closed set containing the generators and the identity.
pub fn closure(generators: &PermutationSet) -> Result<PermutationSet> {
    closure_capped(generators, DEFAULT_CLOSURE_CAP)
}

pub fn closure_capped(generators: &PermutationSet, cap: usize) -> Result<PermutationSet> {
    let id = Permutation::identity(generators.degree())?;
    let mut seen: HashSet<Permutation> = HashSet::from([id]);
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for g in generators {
            let y = g.compose_unchecked(&x);
            if seen.insert(y) {
                if seen.len() > cap {
                    return Err(Error::ClosureCapExceeded { cap });
                }
                frontier.push(y);
            }
        }
    }
    PermutationSet::from_perms(generators.degree(), seen)
}

/// `{g∘h}` (left) or `{h∘g}` (right) over `h` in the set.
pub fn coset(set: &PermutationSet, g: &Permutation, side: Side) -> Result<PermutationSet> {
    set.check_degree(g.degree())?;
    let image = set.iter().map(|h| match side {
        Side::Left => g.compose_unchecked(h),
        Side::Right => h.compose_unchecked(g),
    });
    PermutationSet::from_perms(set.degree(), image)
}

/// `{by∘x∘by⁻¹}` over `x` in the set.
pub fn conjugate_subgroup(set: &PermutationSet, by: &Permutation) -> Result<PermutationSet> {
    set.check_degree(by.degree())?;
    PermutationSet::from_perms(set.degree(), set.iter().map(|x| x.conjugate_unchecked(by)))
}

/// All permutations of degree `n` fixing point 1.
pub fn stab1(n: usize) -> Result<PermutationSet> {
    if n < 2 {
        return Err(Error::DegreeTooSmall { min: 2, got: n });
    }
    // Fixing 1 means the word starts with 1; those words form the first (n-1)! ranks.
    let perms = all_permutations_capped(n, MAX_RANK_DEGREE)?.take_while(|p| p.apply(1) == 1);
    PermutationSet::from_perms(n, perms)
}

/// Partition of `Sym_n` into cosets of `subgroup` on the given side, each sorted.
///
/// Returned in order of their smallest element.
pub fn coset_partition(subgroup: &PermutationSet, side: Side) -> Result<Vec<PermutationSet>> {
    let n = subgroup.degree();
    let mut covered: HashSet<Permutation> = HashSet::new();
    let mut parts = Vec::new();
    for g in all_permutations_capped(n, MAX_RANK_DEGREE)? {
        if covered.contains(&g) {
            continue;
        }
        let part = coset(subgroup, &g, side)?;
        covered.extend(part.iter().copied());
        parts.push(part);
    }
    Ok(parts)
}
