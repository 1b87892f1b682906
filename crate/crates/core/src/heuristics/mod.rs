//! Classical baselines with exact objective-evaluation accounting.

mod gls;
mod mmas;

pub use gls::{gls_run, gls_solve_probability, GlsSummary};
pub use mmas::{mmas_run, MmasParams, MmasSolver, TrailLimits};

use serde::Serialize;

use crate::perm::Permutation;

/// Outcome of one heuristic run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunRecord {
    pub best_cost: f64,
    pub best_perm: Permutation,
    pub iterations: u64,
    /// Objective evaluations charged to the run.
    pub n_evals: u64,
    pub found_optimum: bool,
}

/// Number of position swaps, `n(n-1)/2`.
pub fn swap_count(n: usize) -> u64 {
    (n * n.saturating_sub(1) / 2) as u64
}
