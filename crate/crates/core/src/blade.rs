//! Strictly increasing multi-indices stored as bitsets.
//!
//! Bit `i` set means the (0-based) basis covector `e^{i+1}` is a factor.
//! Blades of equal degree order lexicographically on their index tuples,
//! so `e^{12} < e^{13} < e^{23}`.

use std::cmp::Ordering;

use crate::error::{Error, Result};

pub const MAX_DIM: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Blade(pub u32);

impl Blade {
    pub const EMPTY: Blade = Blade(0);

    pub fn single(i: usize) -> Blade {
        Blade(1 << i)
    }

    /// Blade of the full space `{0, .., dim-1}`.
    pub fn full(dim: usize) -> Blade {
        if dim == 32 {
            Blade(u32::MAX)
        } else {
            Blade((1u32 << dim) - 1)
        }
    }

    pub fn grade(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn is_disjoint(self, other: Blade) -> bool {
        self.0 & other.0 == 0
    }

    pub fn union(self, other: Blade) -> Blade {
        Blade(self.0 | other.0)
    }

    pub fn without(self, i: usize) -> Blade {
        Blade(self.0 & !(1 << i))
    }

    pub fn with(self, i: usize) -> Blade {
        Blade(self.0 | 1 << i)
    }

    pub fn is_subset_of(self, other: Blade) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn difference(self, other: Blade) -> Blade {
        Blade(self.0 & !other.0)
    }

    /// 0-based indices in increasing order.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    /// 1-based indices, as written in `e^{i1 ... ip}`.
    pub fn one_based(self) -> Vec<usize> {
        self.indices().map(|i| i + 1).collect()
    }

    /// Number of factors of `self` strictly greater than `i`.
    pub fn count_above(self, i: usize) -> usize {
        let mask = if i >= 31 { 0 } else { !0u32 << (i + 1) };
        (self.0 & mask).count_ones() as usize
    }

    /// Number of factors of `self` strictly smaller than `i`.
    pub fn count_below(self, i: usize) -> usize {
        (self.0 & ((1u32 << i) - 1)).count_ones() as usize
    }

    /// 0-based position of `i` inside the sorted index tuple.
    pub fn position(self, i: usize) -> Option<usize> {
        self.contains(i).then(|| self.count_below(i))
    }

    /// Builds a blade from 1-based indices in arbitrary order, returning the
    /// sign of the sorting permutation, or `None` when an index repeats.
    pub fn from_one_based(dim: usize, indices: &[usize]) -> Result<Option<(Blade, bool)>> {
        let mut mask = 0u32;
        let mut negative = false;
        for &i in indices {
            if i == 0 || i > dim {
                return Err(Error::InvalidIndex {
                    indices: indices.to_vec(),
                    dim,
                });
            }
            let bit = 1u32 << (i - 1);
            if mask & bit != 0 {
                return Ok(None);
            }
            // moving e^i left past the already placed larger factors
            if Blade(mask).count_above(i - 1) % 2 == 1 {
                negative = !negative;
            }
            mask |= bit;
        }
        Ok(Some((Blade(mask), negative)))
    }
}

impl PartialOrd for Blade {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Blade {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.grade().cmp(&other.grade()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let diff = self.0 ^ other.0;
        if diff == 0 {
            return Ordering::Equal;
        }
        let low = diff & diff.wrapping_neg();
        if self.0 & low != 0 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

/// `true` when `e^a ∧ e^b = -e^{a ∪ b}` for disjoint `a`, `b`.
pub fn wedge_sign_negative(a: Blade, b: Blade) -> bool {
    let mut inversions = 0usize;
    for j in b.indices() {
        inversions += a.count_above(j);
    }
    inversions % 2 == 1
}

/// All blades of grade `p` in `dim` dimensions, lexicographically ordered.
pub fn blades(dim: usize, p: usize) -> Vec<Blade> {
    let mut out = Vec::new();
    if p > dim {
        return out;
    }
    let mut idx: Vec<usize> = (0..p).collect();
    loop {
        out.push(Blade(idx.iter().fold(0u32, |m, &i| m | 1 << i)));
        // next combination in lexicographic order
        let mut r = p;
        loop {
            if r == 0 {
                return out;
            }
            r -= 1;
            if idx[r] < dim - p + r {
                idx[r] += 1;
                for s in r + 1..p {
                    idx[s] = idx[s - 1] + 1;
                }
                break;
            }
        }
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Lexicographic rank of a blade among the blades of its grade.
pub fn blade_rank(dim: usize, blade: Blade) -> usize {
    let p = blade.grade();
    let mut rank = 0;
    let mut prev: usize = 0;
    for (pos, i) in blade.indices().enumerate() {
        for skipped in prev..i {
            rank += binomial(dim - skipped - 1, p - pos - 1);
        }
        prev = i + 1;
    }
    rank
}

pub fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 || dim > MAX_DIM {
        Err(Error::UnsupportedDimension(dim))
    } else {
        Ok(())
    }
}
