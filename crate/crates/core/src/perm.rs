//! Permutations of `{1..n}` stored as one-line image words.
//!
//! Composition applies the right factor first: `p.compose(&q)` maps `x` to
//! `p(q(x))`. Points are 1-based in every public signature; ranks are 0-based
//! positions in the lexicographic order of words.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest supported degree. PGL(2,31) acts on 32 points.
pub const MAX_DEGREE: usize = 32;

/// Largest degree whose ranks fit in a `u64` (20! < 2^64 < 21!).
pub const MAX_RANK_DEGREE: usize = 20;

/// Default cap for [`all_permutations`].
pub const DEFAULT_ENUMERATION_CAP: usize = 9;

/// `n!` for `n <= 20`.
pub fn factorial(n: usize) -> u64 {
    assert!(n <= MAX_RANK_DEGREE, "{n}! does not fit in u64");
    (1..=n as u64).product()
}

/// A permutation of `{1..n}`.
///
/// Internally the word is 0-based and padded with zeros past `degree`, so the
/// derived ordering is the lexicographic order of words within one degree.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    degree: u8,
    map: [u8; MAX_DEGREE],
}

impl Permutation {
    pub fn identity(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::DegreeTooSmall { min: 1, got: 0 });
        }
        if n > MAX_DEGREE {
            return Err(Error::DegreeCapExceeded {
                got: n,
                cap: MAX_DEGREE,
            });
        }
        let mut map = [0u8; MAX_DEGREE];
        for (i, slot) in map.iter_mut().enumerate().take(n) {
            *slot = i as u8;
        }
        Ok(Self {
            degree: n as u8,
            map,
        })
    }

    /// Builds a permutation from a 1-based one-line word, `word[i-1] = π(i)`.
    pub fn from_word(word: &[usize]) -> Result<Self> {
        let n = word.len();
        if n == 0 {
            return Err(Error::DegreeTooSmall { min: 1, got: 0 });
        }
        if n > MAX_DEGREE {
            return Err(Error::DegreeCapExceeded {
                got: n,
                cap: MAX_DEGREE,
            });
        }
        let mut seen = [false; MAX_DEGREE];
        let mut map = [0u8; MAX_DEGREE];
        for (i, &v) in word.iter().enumerate() {
            if v == 0 || v > n {
                return Err(Error::PointOutOfRange {
                    point: v,
                    degree: n,
                });
            }
            if seen[v - 1] {
                return Err(Error::NotAPermutation(format!("value {v} repeated")));
            }
            seen[v - 1] = true;
            map[i] = (v - 1) as u8;
        }
        Ok(Self {
            degree: n as u8,
            map,
        })
    }

    /// The transposition swapping points `a` and `b`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self> {
        let mut p = Self::identity(n)?;
        for point in [a, b] {
            if point == 0 || point > n {
                return Err(Error::PointOutOfRange { point, degree: n });
            }
        }
        if a == b {
            return Err(Error::RepeatedPoint(a));
        }
        p.map.swap(a - 1, b - 1);
        Ok(p)
    }

    /// Builds a permutation of degree `n` from disjoint cycles in 1-based points.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut p = Self::identity(n)?;
        let mut touched = [false; MAX_DEGREE];
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                if x == 0 || x > n {
                    return Err(Error::PointOutOfRange {
                        point: x,
                        degree: n,
                    });
                }
                if touched[x - 1] {
                    return Err(Error::NotAPermutation(format!("point {x} in two cycles")));
                }
                touched[x - 1] = true;
                let next = cycle[(k + 1) % cycle.len()];
                p.map[x - 1] = (next - 1) as u8;
            }
        }
        Ok(p)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.degree as usize
    }

    /// Image of a 1-based point.
    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.map[point - 1] as usize + 1
    }

    /// Preimage of a 1-based point.
    pub fn preimage(&self, point: usize) -> usize {
        let target = (point - 1) as u8;
        self.images0().iter().position(|&v| v == target).unwrap() + 1
    }

    /// The 0-based images, `images0()[i] = π(i+1) - 1`.
    #[inline]
    pub fn images0(&self) -> &[u8] {
        &self.map[..self.degree as usize]
    }

    /// The 1-based one-line word.
    pub fn word(&self) -> Vec<usize> {
        self.images0().iter().map(|&v| v as usize + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images0()
            .iter()
            .enumerate()
            .all(|(i, &v)| i == v as usize)
    }

    fn check_degree(&self, other: &Self) -> Result<()> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(())
    }

    /// `self ∘ other`, applying `other` first.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_degree(other)?;
        Ok(self.compose_unchecked(other))
    }

    /// `self ∘ other` without the degree check.
    #[inline]
    pub fn compose_unchecked(&self, other: &Self) -> Self {
        let mut map = [0u8; MAX_DEGREE];
        for i in 0..self.degree as usize {
            map[i] = self.map[other.map[i] as usize];
        }
        Self {
            degree: self.degree,
            map,
        }
    }

    pub fn inverse(&self) -> Self {
        let mut map = [0u8; MAX_DEGREE];
        for i in 0..self.degree as usize {
            map[self.map[i] as usize] = i as u8;
        }
        Self {
            degree: self.degree,
            map,
        }
    }

    /// `by ∘ self ∘ by⁻¹`.
    pub fn conjugate(&self, by: &Self) -> Result<Self> {
        self.check_degree(by)?;
        Ok(self.conjugate_unchecked(by))
    }

    #[inline]
    pub fn conjugate_unchecked(&self, by: &Self) -> Self {
        // by∘p∘by⁻¹ sends by(i) to by(p(i)).
        let mut map = [0u8; MAX_DEGREE];
        for i in 0..self.degree as usize {
            map[by.map[i] as usize] = by.map[self.map[i] as usize];
        }
        Self {
            degree: self.degree,
            map,
        }
    }

    /// Swaps the values `a` and `b` (1-based) in the word, i.e. `(a b) ∘ self`.
    #[inline]
    pub fn swap_values(&self, a: usize, b: usize) -> Self {
        let (a, b) = ((a - 1) as u8, (b - 1) as u8);
        let mut out = *self;
        for v in out.map[..self.degree as usize].iter_mut() {
            if *v == a {
                *v = b;
            } else if *v == b {
                *v = a;
            }
        }
        out
    }

    /// The same permutation viewed in degree `n >= degree`, fixing the new points.
    pub fn extend(&self, n: usize) -> Result<Self> {
        if n < self.degree() {
            return Err(Error::DegreeTooSmall {
                min: self.degree(),
                got: n,
            });
        }
        if n > MAX_DEGREE {
            return Err(Error::DegreeCapExceeded {
                got: n,
                cap: MAX_DEGREE,
            });
        }
        let mut out = *self;
        for i in self.degree()..n {
            out.map[i] = i as u8;
        }
        out.degree = n as u8;
        Ok(out)
    }

    /// Disjoint cycles of length at least 2, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = [false; MAX_DEGREE];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x + 1);
                x = self.map[x] as usize;
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    pub fn cycle_type(&self) -> CycleType {
        let cycles = self.cycles();
        let moved: usize = cycles.iter().map(Vec::len).sum();
        let mut lengths: Vec<usize> = cycles.iter().map(Vec::len).collect();
        lengths.sort_unstable();
        CycleType {
            lengths,
            fixed_points: self.degree() - moved,
        }
    }

    /// True iff the permutation is a single `m`-cycle fixing every other point.
    pub fn is_pure_cycle_of_length(&self, m: usize) -> bool {
        let ct = self.cycle_type();
        ct.lengths.len() == 1 && ct.lengths[0] == m
    }

    /// Lexicographic (Lehmer) rank among all words of this degree.
    ///
    /// Panics when the degree exceeds [`MAX_RANK_DEGREE`].
    pub fn rank(&self) -> u64 {
        let n = self.degree();
        assert!(n <= MAX_RANK_DEGREE, "cannot rank degree {n}");
        let mut rank = 0u64;
        let mut used: u32 = 0;
        for i in 0..n {
            let v = self.map[i] as u32;
            let smaller_unused = (v - (used & ((1u32 << v) - 1)).count_ones()) as u64;
            rank = rank * (n - i) as u64 + smaller_unused;
            used |= 1 << v;
        }
        rank
    }

    /// Inverse of [`Permutation::rank`].
    pub fn unrank(n: usize, rank: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::DegreeTooSmall { min: 1, got: 0 });
        }
        if n > MAX_RANK_DEGREE {
            return Err(Error::DegreeCapExceeded {
                got: n,
                cap: MAX_RANK_DEGREE,
            });
        }
        if rank >= factorial(n) {
            return Err(Error::RankOutOfRange { rank, degree: n });
        }
        Ok(Self::unrank_unchecked(n, rank))
    }

    pub(crate) fn unrank_unchecked(n: usize, mut rank: u64) -> Self {
        let mut digits = [0u8; MAX_DEGREE];
        for i in (0..n).rev() {
            let base = (n - i) as u64;
            digits[i] = (rank % base) as u8;
            rank /= base;
        }
        let mut map = [0u8; MAX_DEGREE];
        let mut unused: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        for i in 0..n {
            let mut k = digits[i];
            let mut bits = unused;
            loop {
                let v = bits.trailing_zeros();
                if k == 0 {
                    map[i] = v as u8;
                    unused &= !(1 << v);
                    break;
                }
                k -= 1;
                bits &= bits - 1;
            }
        }
        Self {
            degree: n as u8,
            map,
        }
    }

    /// Next word in lexicographic order, or `None` after the last one.
    pub fn next_lexicographic(&self) -> Option<Self> {
        let n = self.degree();
        let w = &self.map[..n];
        let i = (0..n.saturating_sub(1)).rev().find(|&i| w[i] < w[i + 1])?;
        let j = (i + 1..n).rev().find(|&j| w[j] > w[i]).unwrap();
        let mut out = *self;
        out.map.swap(i, j);
        out.map[i + 1..n].reverse();
        Some(out)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.word())
    }
}

/// Cycle notation, `()` for the identity.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            let parts: Vec<String> = cycle.iter().map(usize::to_string).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

/// Parses a 1-based one-line word separated by spaces and/or commas,
/// optionally wrapped in brackets: `"3 1 2"`, `"[3,1,2]"`.
impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim().trim_start_matches('[').trim_end_matches(']');
        let word = trimmed
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::NotAPermutation(format!("bad entry {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_word(&word)
    }
}

/// Cycle lengths (fixed points omitted) plus the number of fixed points.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycleType {
    /// Sorted ascending, every entry at least 2.
    pub lengths: Vec<usize>,
    pub fixed_points: usize,
}

/// All `n!` permutations in lexicographic order, for `n <= cap`.
pub fn all_permutations_capped(n: usize, cap: usize) -> Result<AllPermutations> {
    if n > cap {
        return Err(Error::DegreeCapExceeded { got: n, cap });
    }
    Ok(AllPermutations {
        next: Some(Permutation::identity(n)?),
    })
}

/// All `n!` permutations in lexicographic order, capped at [`DEFAULT_ENUMERATION_CAP`].
pub fn all_permutations(n: usize) -> Result<AllPermutations> {
    all_permutations_capped(n, DEFAULT_ENUMERATION_CAP)
}

pub struct AllPermutations {
    next: Option<Permutation>,
}

impl Iterator for AllPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        self.next = current.next_lexicographic();
        Some(current)
    }
}
