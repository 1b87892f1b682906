//! Permutation arithmetic on `S_n`.
//!
//! Permutations are 0-based: `elems[i]` is the location assigned to facility
//! `i`. Ranks ([`PermIndex`]) follow lexicographic order of the element
//! sequences, so rank 0 is the identity and rank `n! - 1` the reversal. The
//! rank is the Lehmer code read in the factorial number system.
//!
//! Distances between permutations are transposition distances: the minimum
//! number of swaps turning one into the other, which is `n` minus the number
//! of disjoint cycles of the relative permutation.

use std::fmt;

use crate::error::{Error, Result};

/// Largest `n` whose factorial fits in a `u64`.
pub const MAX_RANK_N: usize = 20;

const FACTORIALS: [u64; MAX_RANK_N + 1] = {
    let mut table = [1u64; MAX_RANK_N + 1];
    let mut i = 1;
    while i <= MAX_RANK_N {
        table[i] = table[i - 1] * i as u64;
        i += 1;
    }
    table
};

/// `n!`, or an error when it does not fit in 64 bits.
pub fn factorial(n: usize) -> Result<u64> {
    FACTORIALS
        .get(n)
        .copied()
        .ok_or_else(|| Error::Range(format!("{n}! does not fit in 64 bits (n <= {MAX_RANK_N})")))
}

/// A bijection on `{0..n-1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    elems: Vec<usize>,
}

impl Permutation {
    /// Validates `elems` as a permutation of `{0..elems.len()-1}`.
    pub fn new(elems: Vec<usize>) -> Result<Self> {
        let n = elems.len();
        if n == 0 || n > MAX_RANK_N {
            return Err(Error::InvalidPermutation(format!(
                "length {n} outside 1..={MAX_RANK_N}"
            )));
        }
        let mut seen = vec![false; n];
        for (pos, &e) in elems.iter().enumerate() {
            if e >= n {
                return Err(Error::InvalidPermutation(format!(
                    "element {e} at position {pos} is out of range for n = {n}"
                )));
            }
            if std::mem::replace(&mut seen[e], true) {
                return Err(Error::InvalidPermutation(format!(
                    "element {e} at position {pos} is a duplicate"
                )));
            }
        }
        Ok(Self { elems })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            elems: (0..n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.elems.len()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.elems
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.elems
    }

    /// Exchanges the values at positions `i` and `j`.
    pub fn swap(&mut self, i: usize, j: usize) {
        self.elems.swap(i, j);
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.n()];
        for (i, &e) in self.elems.iter().enumerate() {
            inv[e] = i;
        }
        Self { elems: inv }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.elems)
    }
}

impl serde::Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.elems.serialize(s)
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(elems: Vec<usize>) -> Result<Self> {
        Self::new(elems)
    }
}

/// Lexicographic rank of a permutation of size `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PermIndex {
    value: u64,
    n: usize,
}

impl PermIndex {
    pub fn new(value: u64, n: usize) -> Result<Self> {
        let count = factorial(n)?;
        if value >= count {
            return Err(Error::IndexOutOfRange {
                index: value,
                n,
                count,
            });
        }
        Ok(Self { value, n })
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn n(self) -> usize {
        self.n
    }

    /// The rank as a vector offset.
    pub fn as_usize(self) -> usize {
        self.value as usize
    }
}

/// Rank of a slice already known to be a valid permutation.
///
/// Uses a bitmask of unused elements, so each digit of the Lehmer code is a
/// popcount.
pub(crate) fn rank_unchecked(elems: &[usize]) -> u64 {
    let n = elems.len();
    let mut unused: u32 = (1u32 << n) - 1;
    let mut rank = 0u64;
    for (pos, &e) in elems.iter().enumerate() {
        let smaller = (unused & ((1u32 << e) - 1)).count_ones() as u64;
        rank += smaller * FACTORIALS[n - 1 - pos];
        unused &= !(1u32 << e);
    }
    rank
}

/// Lexicographic rank of `perm` in `S_n`.
pub fn index_of(perm: &Permutation) -> PermIndex {
    PermIndex {
        value: rank_unchecked(&perm.elems),
        n: perm.n(),
    }
}

/// Permutation with the given lexicographic rank.
pub fn perm_of(idx: PermIndex) -> Permutation {
    let n = idx.n;
    let mut pool: Vec<usize> = (0..n).collect();
    let mut rest = idx.value;
    let mut elems = Vec::with_capacity(n);
    for depth in (0..n).rev() {
        let block = FACTORIALS[depth];
        elems.push(pool.remove((rest / block) as usize));
        rest %= block;
    }
    Permutation { elems }
}

/// Number of disjoint cycles (fixed points included) of `perm ∘ ref⁻¹`.
pub fn cycle_count(perm: &Permutation, reference: &Permutation) -> Result<usize> {
    if perm.n() != reference.n() {
        return Err(Error::SizeMismatch {
            expected: reference.n(),
            found: perm.n(),
        });
    }
    let n = perm.n();
    let ref_inv = reference.inverse();
    // relative[x] = perm[ref⁻¹[x]]
    let relative: Vec<usize> = (0..n).map(|x| perm.elems[ref_inv.elems[x]]).collect();
    Ok(count_cycles(&relative))
}

fn count_cycles(sigma: &[usize]) -> usize {
    let mut visited = vec![false; sigma.len()];
    let mut cycles = 0;
    for start in 0..sigma.len() {
        if visited[start] {
            continue;
        }
        cycles += 1;
        let mut x = start;
        while !visited[x] {
            visited[x] = true;
            x = sigma[x];
        }
    }
    cycles
}

/// Minimum number of swaps taking `reference` to `perm`.
pub fn transposition_distance(perm: &Permutation, reference: &Permutation) -> Result<usize> {
    Ok(perm.n() - cycle_count(perm, reference)?)
}

/// Ranks of all permutations one position swap away from `perm`, ordered by
/// swapped pair `(i, j)` with `i < j`.
pub fn transposition_neighbors(perm: &Permutation) -> Vec<PermIndex> {
    let n = perm.n();
    let mut scratch = perm.elems.clone();
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            scratch.swap(i, j);
            out.push(PermIndex {
                value: rank_unchecked(&scratch),
                n,
            });
            scratch.swap(i, j);
        }
    }
    out
}

/// Number of permutations at each transposition distance `k = 0..n-1` from a
/// fixed reference: the unsigned Stirling numbers of the first kind
/// `c(n, n-k)`.
pub fn stirling_shell_sizes(n: usize) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(Error::Range("shell sizes need n >= 1".into()));
    }
    if n > MAX_RANK_N {
        return Err(Error::Range(format!("shell sizes need n <= {MAX_RANK_N}")));
    }
    // c(m, j) = c(m-1, j-1) + (m-1) c(m-1, j)
    let mut row = vec![0u64; n + 1];
    row[0] = 1;
    for m in 1..=n {
        for j in (1..=m).rev() {
            row[j] = row[j - 1] + (m as u64 - 1) * row[j];
        }
        row[0] = 0;
    }
    Ok((0..n).map(|k| row[n - k]).collect())
}

/// Iterator over `S_n` in lexicographic (rank) order.
#[derive(Debug, Clone)]
pub struct LexPermutations {
    current: Vec<usize>,
    done: bool,
}

impl LexPermutations {
    pub fn new(n: usize) -> Self {
        Self {
            current: (0..n).collect(),
            done: n == 0,
        }
    }

    /// Visits every permutation in rank order without allocating per item.
    pub fn for_each_slice(mut self, mut f: impl FnMut(&[usize])) {
        while !self.done {
            f(&self.current);
            self.done = !next_permutation(&mut self.current);
        }
    }
}

impl Iterator for LexPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.done {
            return None;
        }
        let out = Permutation {
            elems: self.current.clone(),
        };
        self.done = !next_permutation(&mut self.current);
        Some(out)
    }
}

/// Advances to the lexicographic successor; returns false after the last one.
fn next_permutation(a: &mut [usize]) -> bool {
    let n = a.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}
