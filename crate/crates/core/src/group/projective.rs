//! The projective line over a prime field and PGL(2,q) acting on it.

use std::fmt;

use super::PermutationSet;
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Largest supported field order; PGL(2,31) acts on 32 points.
pub const MAX_FIELD_ORDER: u64 = 31;

fn is_prime(q: u64) -> bool {
    q >= 2
        && (2..q)
            .take_while(|d| d * d <= q)
            .all(|d| !q.is_multiple_of(d))
}

fn check_field(q: u64) -> Result<()> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if q > MAX_FIELD_ORDER {
        return Err(Error::FieldTooLarge {
            got: q,
            cap: MAX_FIELD_ORDER,
        });
    }
    Ok(())
}

/// An element of the prime field GF(p).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    modulus: u64,
}

impl FieldElement {
    pub fn new(value: u64, modulus: u64) -> Result<Self> {
        check_field(modulus)?;
        Ok(Self {
            value: value % modulus,
            modulus,
        })
    }

    fn raw(value: u64, modulus: u64) -> Self {
        Self {
            value: value % modulus,
            modulus,
        }
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn add(self, other: Self) -> Self {
        Self::raw(self.value + other.value, self.modulus)
    }

    pub fn sub(self, other: Self) -> Self {
        Self::raw(self.value + self.modulus - other.value, self.modulus)
    }

    pub fn mul(self, other: Self) -> Self {
        Self::raw(self.value * other.value, self.modulus)
    }

    /// Multiplicative inverse by Fermat's little theorem; `None` for zero.
    pub fn inverse(self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let mut result = 1u64;
        let mut base = self.value;
        let mut exp = self.modulus - 2;
        while exp > 0 {
            if exp & 1 == 1 {
                result = result * base % self.modulus;
            }
            base = base * base % self.modulus;
            exp >>= 1;
        }
        Some(Self::raw(result, self.modulus))
    }
}

/// A point of the projective line over GF(q).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProjectivePoint {
    Finite(FieldElement),
    Infinity,
}

impl ProjectivePoint {
    /// Label in `{1..q+1}`: `a ↦ a+1`, `∞ ↦ q+1`.
    pub fn label(self, q: u64) -> usize {
        match self {
            ProjectivePoint::Finite(a) => a.value() as usize + 1,
            ProjectivePoint::Infinity => q as usize + 1,
        }
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjectivePoint::Finite(a) => write!(f, "{}", a.value()),
            ProjectivePoint::Infinity => write!(f, "inf"),
        }
    }
}

/// All `q+1` points with their labels, finite points first.
pub fn point_labeling(q: u64) -> Result<Vec<(ProjectivePoint, usize)>> {
    check_field(q)?;
    let mut out: Vec<_> = (0..q)
        .map(|a| {
            let p = ProjectivePoint::Finite(FieldElement::raw(a, q));
            (p, p.label(q))
        })
        .collect();
    out.push((ProjectivePoint::Infinity, q as usize + 1));
    Ok(out)
}

/// The fractional linear map `x ↦ (ax+b)/(cx+d)`, normalized so that the
/// first nonzero coefficient is 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MoebiusMap {
    a: FieldElement,
    b: FieldElement,
    c: FieldElement,
    d: FieldElement,
}

impl MoebiusMap {
    /// Builds and normalizes the map of `[a b; c d]` over GF(q); rejects singular matrices.
    pub fn new(a: u64, b: u64, c: u64, d: u64, q: u64) -> Result<Option<Self>> {
        check_field(q)?;
        let f = |v| FieldElement::raw(v, q);
        Ok(Self::normalized(f(a), f(b), f(c), f(d)))
    }

    fn normalized(
        a: FieldElement,
        b: FieldElement,
        c: FieldElement,
        d: FieldElement,
    ) -> Option<Self> {
        if a.mul(d).sub(b.mul(c)).is_zero() {
            return None;
        }
        let lead = [a, b, c, d].into_iter().find(|x| !x.is_zero())?;
        let s = lead.inverse()?;
        Some(Self {
            a: a.mul(s),
            b: b.mul(s),
            c: c.mul(s),
            d: d.mul(s),
        })
    }

    pub fn coefficients(&self) -> [u64; 4] {
        [
            self.a.value(),
            self.b.value(),
            self.c.value(),
            self.d.value(),
        ]
    }

    pub fn field_order(&self) -> u64 {
        self.a.modulus()
    }

    pub fn apply(&self, x: ProjectivePoint) -> ProjectivePoint {
        let Self { a, b, c, d } = *self;
        match x {
            ProjectivePoint::Infinity => match c.inverse() {
                Some(ci) => ProjectivePoint::Finite(a.mul(ci)),
                None => ProjectivePoint::Infinity,
            },
            ProjectivePoint::Finite(x) => {
                let num = a.mul(x).add(b);
                let den = c.mul(x).add(d);
                match den.inverse() {
                    Some(di) => ProjectivePoint::Finite(num.mul(di)),
                    None => ProjectivePoint::Infinity,
                }
            }
        }
    }

    /// The induced permutation of the `q+1` labels.
    pub fn to_permutation(&self) -> Permutation {
        let q = self.field_order();
        let labels = point_labeling(q).expect("field order already validated");
        let word: Vec<usize> = labels
            .iter()
            .map(|&(p, _)| self.apply(p).label(q))
            .collect();
        Permutation::from_word(&word).expect("invertible map induces a bijection")
    }

    /// Every normalized invertible map over GF(q), in lexicographic coefficient order.
    pub fn all(q: u64) -> Result<Vec<Self>> {
        check_field(q)?;
        let f = |v| FieldElement::raw(v, q);
        let mut out = Vec::new();
        for a in 0..q {
            for b in 0..q {
                for c in 0..q {
                    for d in 0..q {
                        let coeffs = [a, b, c, d];
                        let lead = coeffs.iter().find(|&&x| x != 0);
                        if lead != Some(&1) {
                            continue;
                        }
                        if let Some(m) = Self::normalized(f(a), f(b), f(c), f(d)) {
                            out.push(m);
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// PGL(2,q) as permutations of degree `q+1` under [`point_labeling`].
pub fn pgl2(q: u64) -> Result<PermutationSet> {
    let maps = MoebiusMap::all(q)?;
    PermutationSet::from_perms(q as usize + 1, maps.iter().map(MoebiusMap::to_permutation))
}

/// PGL(2,q) acting on `{1..q+1}` and fixing `{q+2..n}`.
pub fn pgl2_in_degree(q: u64, n: usize) -> Result<PermutationSet> {
    let base = pgl2(q)?;
    let perms = base
        .iter()
        .map(|p| p.extend(n))
        .collect::<Result<Vec<_>>>()?;
    PermutationSet::from_perms(n, perms)
}

/// True iff for every two ordered triples of distinct points exactly one
/// element of the set maps the first onto the second.
pub fn is_sharply_3_transitive(set: &PermutationSet) -> bool {
    let n = set.degree();
    if n < 3 {
        return false;
    }
    let index = |a: usize, b: usize, c: usize| (a * n + b) * n + c;
    let triples: Vec<[usize; 3]> = (0..n)
        .flat_map(|a| (0..n).flat_map(move |b| (0..n).map(move |c| [a, b, c])))
        .filter(|[a, b, c]| a != b && b != c && a != c)
        .collect();
    let mut hits = vec![0u32; n * n * n];
    for &[a, b, c] in &triples {
        hits.iter_mut().for_each(|h| *h = 0);
        for p in set {
            let w = p.images0();
            hits[index(w[a] as usize, w[b] as usize, w[c] as usize)] += 1;
        }
        if triples.iter().any(|&[x, y, z]| hits[index(x, y, z)] != 1) {
            return false;
        }
    }
    true
}
