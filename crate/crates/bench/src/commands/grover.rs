use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use qapwalk::analysis::grover_iterations;
use qapwalk::perm::factorial;

use super::gen::load_instances;
use crate::config::ExperimentConfig;
use crate::csvio::write_rows;
use crate::error::Result;
use crate::layout::Layout;

/// Grover iterations needed to reach the OSP threshold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct GroverRow {
    pub n: usize,
    pub N: u64,
    pub M: u64,
    /// Smallest `k` with success probability at least the threshold.
    pub k_exact: u64,
    /// Ceiling of `(√N · asin(√threshold) - 1) / 2`.
    pub k_paper_formula: u64,
}

/// Emits one row per size for `M = 1` and one for every other minimizer
/// count occurring among that size's instances.
pub fn cmd_grover(cfg: &ExperimentConfig) -> Result<Vec<GroverRow>> {
    cfg.validate()?;
    let layout = Layout::new(&cfg.out_dir);
    let mut rows = Vec::new();
    for n in cfg.sorted_sizes() {
        let mut counts = BTreeSet::from([1u64]);
        for (_, inst) in load_instances(cfg, n)? {
            if let Some(opt) = inst.optimum() {
                counts.insert(opt.minimizers.len() as u64);
            }
        }
        for m in counts {
            rows.push(grover_row(n, m, cfg.osp_threshold)?);
        }
    }
    write_rows(&layout.grover(), &rows)?;
    Ok(rows)
}

pub fn grover_row(n: usize, marked: u64, threshold: f64) -> Result<GroverRow> {
    let n_items = factorial(n)?;
    let g = grover_iterations(n_items, marked, threshold)?;
    Ok(GroverRow {
        n,
        N: n_items,
        M: marked,
        k_exact: g.exact,
        k_paper_formula: g.continuous_ceil,
    })
}
