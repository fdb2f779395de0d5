//! Codes and perfect bitrades in `S_n`, the predicates that verify them and
//! the constructions that produce them.
//!
//! A code is a set of vertices of `S_n` stored as sorted ranks. It is perfect
//! when the closed balls around its codewords tile `Sym_n`; equivalently it has
//! minimum distance 3 and `(n-1)!` codewords.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::{stab1, PermutationSet, Side};
use crate::perm::{factorial, Permutation, MAX_RANK_DEGREE};

/// Largest degree accepted by [`Code::canonical_form`].
pub const MAX_CANONICAL_DEGREE: usize = 6;

/// Codes whose `n!` fits under this bound get a bitmap membership index.
const BITMAP_LIMIT: u64 = 1 << 26;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Code {
    degree: usize,
    ranks: Vec<u64>,
}

impl fmt::Debug for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Code(n={}, {} words)", self.degree, self.ranks.len())
    }
}

fn check_code_degree(n: usize) -> Result<()> {
    if n < 1 {
        return Err(Error::DegreeTooSmall { min: 1, got: n });
    }
    if n > MAX_RANK_DEGREE {
        return Err(Error::DegreeCapExceeded {
            got: n,
            cap: MAX_RANK_DEGREE,
        });
    }
    Ok(())
}

impl Code {
    /// Builds a code from ranks, sorting and removing duplicates.
    pub fn from_ranks<I>(degree: usize, ranks: I) -> Result<Self>
    where
        I: IntoIterator<Item = u64>,
    {
        check_code_degree(degree)?;
        let bound = factorial(degree);
        let mut ranks: Vec<u64> = ranks.into_iter().collect();
        if let Some(&bad) = ranks.iter().find(|&&r| r >= bound) {
            return Err(Error::RankOutOfRange { rank: bad, degree });
        }
        ranks.sort_unstable();
        ranks.dedup();
        Ok(Self { degree, ranks })
    }

    pub fn from_perms<'a, I>(degree: usize, perms: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a Permutation>,
    {
        check_code_degree(degree)?;
        let mut ranks = Vec::new();
        for p in perms {
            if p.degree() != degree {
                return Err(Error::DegreeMismatch {
                    left: degree,
                    right: p.degree(),
                });
            }
            ranks.push(p.rank());
        }
        ranks.sort_unstable();
        ranks.dedup();
        Ok(Self { degree, ranks })
    }

    pub fn from_set(set: &PermutationSet) -> Result<Self> {
        Self::from_perms(set.degree(), set.iter())
    }

    pub fn to_set(&self) -> PermutationSet {
        PermutationSet::from_ranks(self.degree, self.ranks.iter().copied())
            .expect("code ranks are valid")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn ranks(&self) -> &[u64] {
        &self.ranks
    }

    pub fn perms(&self) -> impl Iterator<Item = Permutation> + '_ {
        self.ranks
            .iter()
            .map(move |&r| Permutation::unrank_unchecked(self.degree, r))
    }

    pub fn contains_rank(&self, rank: u64) -> bool {
        self.ranks.binary_search(&rank).is_ok()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        p.degree() == self.degree && self.contains_rank(p.rank())
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

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.check_degree(other.degree)?;
        let ranks = merge(&self.ranks, &other.ranks, |a, b| a && b);
        Ok(Self {
            degree: self.degree,
            ranks,
        })
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.check_degree(other.degree)?;
        let ranks = merge(&self.ranks, &other.ranks, |a, b| a || b);
        Ok(Self {
            degree: self.degree,
            ranks,
        })
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.check_degree(other.degree)?;
        let ranks = merge(&self.ranks, &other.ranks, |a, b| a && !b);
        Ok(Self {
            degree: self.degree,
            ranks,
        })
    }

    /// The same codewords viewed in degree `n`, fixing the added points.
    pub fn embed(&self, n: usize) -> Result<Self> {
        check_code_degree(n)?;
        let perms = self
            .perms()
            .map(|p| p.extend(n))
            .collect::<Result<Vec<_>>>()?;
        Self::from_perms(n, perms.iter())
    }

    fn membership(&self) -> Membership<'_> {
        Membership::new(self)
    }

    /// Checks that no two codewords lie at distance 1 or 2.
    pub fn min_distance(&self) -> MinDistance {
        if self.len() < 2 {
            return MinDistance::Trivial;
        }
        if self.degree < 2 {
            return MinDistance::Holds;
        }
        let index = self.membership();
        let n = self.degree;
        for g in self.perms() {
            for x in 2..=n {
                let near = g.swap_values(1, x);
                if index.contains(near.rank()) {
                    return MinDistance::Violated(g, near);
                }
                for y in 2..=n {
                    if y == x {
                        continue;
                    }
                    let far = near.swap_values(1, y);
                    if index.contains(far.rank()) {
                        return MinDistance::Violated(g, far);
                    }
                }
            }
        }
        MinDistance::Holds
    }

    /// True unless two codewords are at distance 1 or 2. Codes with fewer than
    /// two words pass trivially; see [`Code::min_distance`] for the flag.
    pub fn min_distance_at_least_3(&self) -> bool {
        !matches!(self.min_distance(), MinDistance::Violated(..))
    }

    /// `|C| = n!/n` and minimum distance at least 3.
    pub fn is_perfect(&self) -> bool {
        self.degree >= 2
            && self.len() as u64 == factorial(self.degree - 1)
            && self.min_distance_at_least_3()
    }

    /// Direct tiling check: every vertex lies in exactly one codeword's ball.
    pub fn balls_tile(&self) -> bool {
        if self.degree < 2 || self.degree > MAX_RANK_DEGREE {
            return false;
        }
        let total = factorial(self.degree);
        if total > BITMAP_LIMIT {
            return false;
        }
        let mut cover = vec![0u8; total as usize];
        for g in self.perms() {
            let ball = std::iter::once(g).chain((2..=self.degree).map(|i| g.swap_values(1, i)));
            for v in ball {
                let slot = &mut cover[v.rank() as usize];
                *slot = slot.saturating_add(1);
            }
        }
        cover.iter().all(|&c| c == 1)
    }

    /// `{g∘c}` (left) or `{c∘g}` (right).
    pub fn coset_code(&self, g: &Permutation, side: Side) -> Result<Self> {
        self.check_degree(g.degree())?;
        let perms: Vec<Permutation> = self
            .perms()
            .map(|c| match side {
                Side::Left => g.compose_unchecked(&c),
                Side::Right => c.compose_unchecked(g),
            })
            .collect();
        Self::from_perms(self.degree, perms.iter())
    }

    /// `{by∘c∘by⁻¹}`.
    pub fn conjugate(&self, by: &Permutation) -> Result<Self> {
        self.check_degree(by.degree())?;
        let perms: Vec<Permutation> = self.perms().map(|c| c.conjugate_unchecked(by)).collect();
        Self::from_perms(self.degree, perms.iter())
    }

    /// `C ∪ ⋃_{2<=i<=n-1} (i n)∘C` for a distance-3 code whose words fix `n`.
    ///
    /// The result has `(n-1)|C|` words and minimum distance 3; it is perfect
    /// whenever `C` is perfect in `S_{n-1}`.
    pub fn lift(&self) -> Result<Self> {
        let n = self.degree;
        if n < 3 {
            return Err(Error::DegreeTooSmall { min: 3, got: n });
        }
        if self.perms().any(|p| p.apply(n) != n) {
            return Err(Error::LastPointMoved(n));
        }
        if !self.min_distance_at_least_3() {
            return Err(Error::MinDistanceViolated);
        }
        let mut ranks = Vec::with_capacity(self.len() * (n - 1));
        for c in self.perms() {
            ranks.push(c.rank());
            for i in 2..n {
                // (i n)∘c swaps the values i and n in the word of c
                ranks.push(c.swap_values(i, n).rank());
            }
        }
        Self::from_ranks(n, ranks)
    }

    /// Decides whether all codewords share the preimage of 1.
    ///
    /// Right cosets `Stab_1∘g` are exactly the sets `{π : π⁻¹(1) = g⁻¹(1)}`,
    /// so a perfect code is isomorphic to `Stab_1` iff this returns `InClass`.
    pub fn stab1_class_certificate(&self) -> Stab1Certificate {
        let mut perms = self.perms();
        let Some(first) = perms.next() else {
            return Stab1Certificate::InClass { point: 1 };
        };
        let point = first.preimage(1);
        match perms.find(|p| p.preimage(1) != point) {
            Some(other) => Stab1Certificate::NotInClass {
                first,
                second: other,
            },
            None => Stab1Certificate::InClass { point },
        }
    }

    /// Lexicographically least sorted rank list among all images
    /// `{l∘c∘r : c ∈ C}` with `l` fixing 1 and `r` arbitrary.
    ///
    /// These maps are the automorphisms of `S_n`, so two codes are isomorphic
    /// iff their canonical forms agree.
    pub fn canonical_form(&self) -> Result<Vec<u64>> {
        if self.degree > MAX_CANONICAL_DEGREE {
            return Err(Error::DegreeCapExceeded {
                got: self.degree,
                cap: MAX_CANONICAL_DEGREE,
            });
        }
        if self.is_empty() {
            return Ok(Vec::new());
        }
        if self.degree < 2 {
            return Ok(self.ranks.clone());
        }
        // The least image contains the identity (rank 0), so it suffices to
        // try r = (l∘c)⁻¹ for each codeword c, i.e. conjugates of C∘c⁻¹.
        let words: Vec<Permutation> = self.perms().collect();
        let lefts = stab1(self.degree)?;
        let best = words
            .par_iter()
            .map(|c| {
                let shifted: Vec<Permutation> = words
                    .iter()
                    .map(|x| x.compose_unchecked(&c.inverse()))
                    .collect();
                let mut best: Option<Vec<u64>> = None;
                let mut image = Vec::with_capacity(shifted.len());
                for l in lefts.iter() {
                    image.clear();
                    image.extend(shifted.iter().map(|x| x.conjugate_unchecked(l).rank()));
                    image.sort_unstable();
                    if best.as_ref().is_none_or(|b| image < *b) {
                        best = Some(image.clone());
                    }
                }
                best.expect("stab1 is nonempty")
            })
            .min()
            .expect("code is nonempty");
        Ok(best)
    }
}

fn merge(a: &[u64], b: &[u64], keep: impl Fn(bool, bool) -> bool) -> Vec<u64> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() || j < b.len() {
        let (x, in_a, in_b) = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) if x == y => {
                i += 1;
                j += 1;
                (x, true, true)
            }
            (Some(&x), Some(&y)) if x < y => {
                i += 1;
                (x, true, false)
            }
            (Some(_), Some(&y)) => {
                j += 1;
                (y, false, true)
            }
            (Some(&x), None) => {
                i += 1;
                (x, true, false)
            }
            (None, Some(&y)) => {
                j += 1;
                (y, false, true)
            }
            (None, None) => unreachable!(),
        };
        if keep(in_a, in_b) {
            out.push(x);
        }
    }
    out
}

enum Membership<'a> {
    Bitmap(Vec<u64>),
    Sorted(&'a [u64]),
}

impl<'a> Membership<'a> {
    fn new(code: &'a Code) -> Self {
        let total = factorial(code.degree);
        if total <= BITMAP_LIMIT {
            let mut bits = vec![0u64; total.div_ceil(64) as usize];
            for &r in &code.ranks {
                bits[(r / 64) as usize] |= 1 << (r % 64);
            }
            Membership::Bitmap(bits)
        } else {
            Membership::Sorted(&code.ranks)
        }
    }

    #[inline]
    fn contains(&self, r: u64) -> bool {
        match self {
            Membership::Bitmap(bits) => bits[(r / 64) as usize] >> (r % 64) & 1 == 1,
            Membership::Sorted(ranks) => ranks.binary_search(&r).is_ok(),
        }
    }
}

/// Outcome of the minimum-distance check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinDistance {
    /// Fewer than two codewords; nothing to check.
    Trivial,
    Holds,
    /// Two codewords at distance 1 or 2.
    Violated(Permutation, Permutation),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stab1Certificate {
    /// Every codeword maps `point` to 1.
    InClass { point: usize },
    /// Two codewords with different preimages of 1.
    NotInClass {
        first: Permutation,
        second: Permutation,
    },
}

impl Stab1Certificate {
    pub fn in_class(&self) -> bool {
        matches!(self, Stab1Certificate::InClass { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntersectionStats {
    pub common: usize,
    pub left: usize,
    pub right: usize,
}

pub fn intersection_stats(a: &Code, b: &Code) -> Result<IntersectionStats> {
    Ok(IntersectionStats {
        common: a.intersection(b)?.len(),
        left: a.len(),
        right: b.len(),
    })
}

/// An ordered pair `(T₀, T₁)` of codes of one degree.
///
/// The halves are distinct and, unless built with [`Bitrade::new_relaxed`],
/// disjoint. Whether the pair really is a perfect bitrade is decided by
/// [`Bitrade::verify`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bitrade {
    t0: Code,
    t1: Code,
}

impl Bitrade {
    pub fn new(t0: Code, t1: Code) -> Result<Self> {
        let trade = Self::new_relaxed(t0, t1)?;
        if !trade.t0.intersection(&trade.t1)?.is_empty() {
            return Err(Error::OverlappingHalves);
        }
        Ok(trade)
    }

    /// Like [`Bitrade::new`] but allows the halves to intersect.
    pub fn new_relaxed(t0: Code, t1: Code) -> Result<Self> {
        t0.check_degree(t1.degree)?;
        if t0 == t1 {
            return Err(Error::EqualCodes);
        }
        Ok(Self { t0, t1 })
    }

    /// `(C \ C', C' \ C)` for two distinct perfect codes.
    pub fn from_codes(c: &Code, c2: &Code) -> Result<Self> {
        if !c.is_perfect() || !c2.is_perfect() {
            return Err(Error::NotPerfect);
        }
        if c == c2 {
            return Err(Error::EqualCodes);
        }
        Self::new(c.difference(c2)?, c2.difference(c)?)
    }

    pub fn t0(&self) -> &Code {
        &self.t0
    }

    pub fn t1(&self) -> &Code {
        &self.t1
    }

    pub fn degree(&self) -> usize {
        self.t0.degree
    }

    pub fn swapped(&self) -> Self {
        Self {
            t0: self.t1.clone(),
            t1: self.t0.clone(),
        }
    }

    pub fn volume(&self) -> usize {
        self.t0.len()
    }

    /// Number of codewords of each half inside every closed ball that meets
    /// either half; balls not listed meet neither.
    pub fn ball_counts(&self) -> HashMap<u64, [u32; 2]> {
        let n = self.degree();
        let mut counts: HashMap<u64, [u32; 2]> = HashMap::new();
        for (side, half) in [&self.t0, &self.t1].into_iter().enumerate() {
            for g in half.perms() {
                counts.entry(g.rank()).or_default()[side] += 1;
                for i in 2..=n {
                    counts.entry(g.swap_values(1, i).rank()).or_default()[side] += 1;
                }
            }
        }
        counts
    }

    /// Every closed ball meets `T₀` and `T₁` in the same number of vertices,
    /// zero or one.
    pub fn verify(&self) -> bool {
        if self.degree() < 2 {
            return false;
        }
        self.ball_counts().values().all(|&[a, b]| a == b && a <= 1)
    }

    /// `(C \ T₀) ∪ T₁`.
    pub fn switch(&self, code: &Code) -> Result<Code> {
        code.difference(&self.t0)?.union(&self.t1)
    }
}

/// The perfect code `Stab_1(Sym_n)` as a [`Code`].
pub fn stab1_code(n: usize) -> Result<Code> {
    Code::from_set(&stab1(n)?)
}

/// Checks `|closed_ball(c)| = n` for every codeword and the ball count total,
/// i.e. `n·|C| = n!` plus the tiling test.
pub fn is_tiling(code: &Code) -> bool {
    let n = code.degree();
    n >= 2 && (n as u64) * code.len() as u64 == factorial(n) && code.balls_tile()
}
