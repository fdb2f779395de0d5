//! Linear propagation for the bitrade search.
//!
//! For a bitrade `(T₀, T₁)` the signed indicator `f = 1_T₀ - 1_T₁` sums to
//! zero over every closed ball, so `f` lies in the kernel of `A + I`, where
//! `A` is the adjacency matrix of `S_n`. Working modulo a large prime keeps
//! the values -1, 0, 1 distinct, and every kernel vector is determined by its
//! values on a small set of free coordinates. Fixing a vertex adds one linear
//! equation on those coordinates; once a vertex's value is implied by the
//! equations so far it can be assigned without branching.

use crate::star::BallTable;

/// The Mersenne prime 2^31 - 1.
pub const MODULUS: u64 = 2_147_483_647;

fn pow_mod(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1;
    base %= MODULUS;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % MODULUS;
        }
        base = base * base % MODULUS;
        exp >>= 1;
    }
    acc
}

fn inv_mod(x: u64) -> u64 {
    pow_mod(x, MODULUS - 2)
}

/// Residue of -1, 0 or 1.
pub fn encode(value: i8) -> u64 {
    match value {
        1 => 1,
        0 => 0,
        -1 => MODULUS - 1,
        _ => unreachable!("bitrade values are -1, 0 or 1"),
    }
}

pub fn decode(residue: u64) -> Option<i8> {
    match residue {
        0 => Some(0),
        1 => Some(1),
        r if r == MODULUS - 1 => Some(-1),
        _ => None,
    }
}

/// Kernel of `A + I` modulo [`MODULUS`], with every vertex value written as a
/// linear form in the free coordinates.
#[derive(Debug, Clone)]
pub struct Kernel {
    dim: usize,
    /// `forms[v * dim + k]`: coefficient of free coordinate `k` in `f(v)`.
    forms: Vec<u32>,
}

impl Kernel {
    pub fn new(balls: &BallTable) -> Self {
        let size = balls.vertex_count();
        let mut rows: Vec<Vec<u64>> = (0..size)
            .map(|r| {
                let mut row = vec![0u64; size];
                for &v in balls.ball(r) {
                    row[v as usize] = 1;
                }
                row
            })
            .collect();
        // reduced row echelon form
        let mut pivot_of_row = Vec::new();
        let mut rank = 0;
        for col in 0..size {
            let Some(p) = (rank..size).find(|&r| rows[r][col] != 0) else {
                continue;
            };
            rows.swap(rank, p);
            let inv = inv_mod(rows[rank][col]);
            for x in rows[rank].iter_mut() {
                *x = *x * inv % MODULUS;
            }
            let pivot = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r == rank || row[col] == 0 {
                    continue;
                }
                let factor = row[col];
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    if y != 0 {
                        *x = (*x + MODULUS - factor * y % MODULUS) % MODULUS;
                    }
                }
            }
            pivot_of_row.push(col);
            rank += 1;
        }
        let mut is_pivot = vec![false; size];
        for &c in &pivot_of_row {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..size).filter(|&c| !is_pivot[c]).collect();
        let dim = free.len();
        let mut forms = vec![0u32; size * dim];
        for (k, &c) in free.iter().enumerate() {
            forms[c * dim + k] = 1;
        }
        for (r, &c) in pivot_of_row.iter().enumerate() {
            for (k, &fc) in free.iter().enumerate() {
                let x = rows[r][fc];
                forms[c * dim + k] = ((MODULUS - x) % MODULUS) as u32;
            }
        }
        Self { dim, forms }
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn vertex_count(&self) -> usize {
        if self.dim == 0 {
            0
        } else {
            self.forms.len() / self.dim
        }
    }

    pub fn form(&self, v: usize) -> &[u32] {
        &self.forms[v * self.dim..(v + 1) * self.dim]
    }
}

/// Incremental elimination of the equations `f(v) = value`.
///
/// Each vertex keeps an affine form `constant + Σ residual[k]·c_k` over the
/// coordinates not yet eliminated; a vertex is determined once its residual
/// vanishes.
pub struct LinearState {
    dim: usize,
    size: usize,
    residual: Vec<u32>,
    constant: Vec<u32>,
    snapshots: Vec<(usize, Vec<u32>, Vec<u32>)>,
}

pub enum Assigned {
    Consistent(Vec<(u32, i8)>),
    Conflict,
}

impl LinearState {
    pub fn new(kernel: &Kernel, size: usize) -> Self {
        let residual = if kernel.dim == 0 {
            Vec::new()
        } else {
            kernel.forms.clone()
        };
        Self {
            dim: kernel.dim,
            size,
            residual,
            constant: vec![0; size],
            snapshots: Vec::new(),
        }
    }

    fn row(&self, v: usize) -> &[u32] {
        &self.residual[v * self.dim..(v + 1) * self.dim]
    }

    pub fn is_determined(&self, v: usize) -> bool {
        self.row(v).iter().all(|&x| x == 0)
    }

    pub fn determined_value(&self, v: usize) -> Option<i8> {
        if self.is_determined(v) {
            decode(self.constant[v] as u64)
        } else {
            None
        }
    }

    /// Imposes `f(v) = value`. `tag` orders the snapshot for [`Self::undo_to`].
    ///
    /// On success returns the vertices whose values just became determined.
    pub fn assign(&mut self, v: usize, value: i8, tag: usize) -> Assigned {
        let target = encode(value);
        let Some(k) = self.row(v).iter().position(|&x| x != 0) else {
            return if self.constant[v] as u64 == target {
                Assigned::Consistent(Vec::new())
            } else {
                Assigned::Conflict
            };
        };
        self.snapshots
            .push((tag, self.residual.clone(), self.constant.clone()));
        let dim = self.dim;
        let pivot_row: Vec<u64> = self.row(v).iter().map(|&x| x as u64).collect();
        let inv = inv_mod(pivot_row[k]);
        // c_k = (target - constant[v] - Σ_{j≠k} pivot_row[j]·c_j) / pivot_row[k]
        let shift = (target + MODULUS - self.constant[v] as u64) % MODULUS * inv % MODULUS;
        let scaled: Vec<u64> = pivot_row.iter().map(|&x| x * inv % MODULUS).collect();
        let mut newly = Vec::new();
        for u in 0..self.size {
            let base = u * dim;
            let factor = self.residual[base + k] as u64;
            if factor == 0 {
                continue;
            }
            self.constant[u] = ((self.constant[u] as u64 + factor * shift) % MODULUS) as u32;
            let mut zero = true;
            for j in 0..dim {
                let s = scaled[j];
                let x = &mut self.residual[base + j];
                if s != 0 {
                    *x = ((*x as u64 + MODULUS - factor * s % MODULUS) % MODULUS) as u32;
                }
                zero &= *x == 0;
            }
            if zero {
                match decode(self.constant[u] as u64) {
                    Some(val) => newly.push((u as u32, val)),
                    None => return Assigned::Conflict,
                }
            }
        }
        Assigned::Consistent(newly)
    }

    /// Undoes every assignment whose tag is greater than `tag`.
    pub fn undo_to(&mut self, tag: usize) {
        while self.snapshots.last().is_some_and(|s| s.0 > tag) {
            let (_, residual, constant) = self.snapshots.pop().unwrap();
            self.residual = residual;
            self.constant = constant;
        }
    }
}
