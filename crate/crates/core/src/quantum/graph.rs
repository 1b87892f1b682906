use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::perm::{self, rank_unchecked, LexPermutations};

use super::MAX_SIM_N;

/// Below this dimension the matvec runs on the calling thread.
const PAR_MATVEC_MIN: usize = 40_320;

/// Cayley graph of `S_n` generated by all position swaps, stored as a dense
/// neighbour table: row `r` lists the ranks of `perm_of(r)` with positions
/// `(i, j)` swapped, in `i < j` order.
#[derive(Clone, Debug)]
pub struct TranspositionGraph {
    n: usize,
    degree: usize,
    neighbors: Vec<u32>,
}

impl TranspositionGraph {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_SIM_N {
            return Err(Error::TooLarge { n, cap: MAX_SIM_N });
        }
        let degree = n * (n - 1) / 2;
        let dim = perm::factorial(n)? as usize;
        let mut neighbors = Vec::with_capacity(dim * degree);
        LexPermutations::new(n).for_each_slice(|p| {
            let mut scratch = [0usize; MAX_SIM_N];
            scratch[..n].copy_from_slice(p);
            for i in 0..n {
                for j in i + 1..n {
                    scratch.swap(i, j);
                    neighbors.push(rank_unchecked(&scratch[..n]) as u32);
                    scratch.swap(i, j);
                }
            }
        });
        Ok(Self {
            n,
            degree,
            neighbors,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of vertices, `n!`.
    pub fn dim(&self) -> usize {
        self.neighbors.len().checked_div(self.degree).unwrap_or(1)
    }

    /// `n(n-1)/2`; also the largest eigenvalue of the adjacency matrix.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn neighbors(&self, rank: usize) -> &[u32] {
        &self.neighbors[rank * self.degree..(rank + 1) * self.degree]
    }

    /// `out = A x`. Each output entry sums its neighbours in table order, so
    /// the result does not depend on the thread count.
    pub fn apply(&self, x: &[Complex64], out: &mut [Complex64]) {
        debug_assert_eq!(x.len(), self.dim());
        debug_assert_eq!(out.len(), self.dim());
        if self.degree == 0 {
            out.fill(Complex64::new(0.0, 0.0));
            return;
        }
        let row = |(r, y): (usize, &mut Complex64)| {
            let mut acc = Complex64::new(0.0, 0.0);
            for &k in self.neighbors(r) {
                acc += x[k as usize];
            }
            *y = acc;
        };
        if out.len() >= PAR_MATVEC_MIN {
            out.par_iter_mut().enumerate().for_each(row);
        } else {
            out.iter_mut().enumerate().for_each(row);
        }
    }
}
