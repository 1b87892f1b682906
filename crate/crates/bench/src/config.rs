use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};

/// Largest size accepted without `long_run`.
pub const DESK_MAX_N: usize = 9;

/// Experiment settings. On disk this is a flat JSON object with these field
/// names; absent fields take the defaults below.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub sizes: Vec<usize>,
    pub instances_per_size: usize,
    pub master_seed: u64,
    /// Mean OSP the depth sweep must reach.
    pub osp_threshold: f64,
    /// Measurement shots charged per circuit depth.
    pub shots: usize,
    pub p_max: usize,
    pub out_dir: PathBuf,
    /// Thread count; `None` defers to `QAPBENCH_WORKERS`, then to rayon.
    pub workers: Option<usize>,
    /// Allows `n = 10`.
    pub long_run: bool,

    pub flow_scale: f64,

    pub run_gls: bool,
    pub gls_restarts: usize,

    pub run_mmas: bool,
    pub mmas_runs: usize,
    /// Ants per iteration; `None` means `n`.
    pub mmas_ants: Option<usize>,
    pub mmas_alpha: f64,
    pub mmas_rho: f64,
    pub mmas_max_iters: u64,

    pub nm_max_evals: usize,
    pub nm_x_tol: f64,
    pub nm_f_tol: f64,
    /// Start each depth from the previous depth's tuned parameters.
    pub warm_start: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            sizes: vec![5, 6, 7],
            instances_per_size: 30,
            master_seed: 1,
            osp_threshold: 0.1,
            shots: 4,
            p_max: 64,
            out_dir: PathBuf::from("results"),
            workers: None,
            long_run: false,
            flow_scale: qapwalk::instance::DEFAULT_FLOW_SCALE,
            run_gls: true,
            gls_restarts: 1000,
            run_mmas: true,
            mmas_runs: 50,
            mmas_ants: None,
            mmas_alpha: 1.0,
            mmas_rho: 0.2,
            mmas_max_iters: 100_000,
            nm_max_evals: 500,
            nm_x_tol: 1e-3,
            nm_f_tol: 1e-4,
            warm_start: true,
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| BenchError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| BenchError::Config(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(BenchError::Config(msg));
        if self.sizes.is_empty() {
            return fail("sizes must not be empty".into());
        }
        let cap = if self.long_run { qapwalk::quantum::MAX_SIM_N } else { DESK_MAX_N };
        for &n in &self.sizes {
            if n < 3 {
                return fail(format!("size n = {n} is below the minimum of 3"));
            }
            if n > cap {
                let hint = if self.long_run { "" } else { " (set long_run to allow n = 10)" };
                return fail(format!("size n = {n} exceeds the maximum of {cap}{hint}"));
            }
        }
        let mut sorted = self.sizes.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != self.sizes.len() {
            return fail("sizes must be distinct".into());
        }
        if !(self.osp_threshold > 0.0 && self.osp_threshold < 1.0) {
            return fail(format!("osp_threshold must lie in (0, 1), got {}", self.osp_threshold));
        }
        if self.instances_per_size == 0 {
            return fail("instances_per_size must be >= 1".into());
        }
        if self.p_max == 0 {
            return fail("p_max must be >= 1".into());
        }
        if self.shots == 0 {
            return fail("shots must be >= 1".into());
        }
        if self.workers == Some(0) {
            return fail("workers must be >= 1".into());
        }
        if !(self.flow_scale > 0.0 && self.flow_scale.is_finite()) {
            return fail(format!("flow_scale must be positive, got {}", self.flow_scale));
        }
        if self.run_gls && self.gls_restarts == 0 {
            return fail("gls_restarts must be >= 1".into());
        }
        if self.run_mmas && self.mmas_runs == 0 {
            return fail("mmas_runs must be >= 1".into());
        }
        for &n in &self.sizes {
            self.mmas_params(n).validate().map_err(|e| BenchError::Config(e.to_string()))?;
        }
        self.simplex().validate(3).map_err(|e| BenchError::Config(e.to_string()))?;
        Ok(())
    }

    /// Sizes in ascending order.
    pub fn sorted_sizes(&self) -> Vec<usize> {
        let mut s = self.sizes.clone();
        s.sort_unstable();
        s
    }

    pub fn mmas_params(&self, n: usize) -> qapwalk::heuristics::MmasParams {
        let mut p = qapwalk::heuristics::MmasParams::for_size(n);
        p.ants = self.mmas_ants.unwrap_or(n);
        p.alpha = self.mmas_alpha;
        p.rho = self.mmas_rho;
        p.max_iters = self.mmas_max_iters;
        p
    }

    pub fn simplex(&self) -> qapwalk::optimize::SimplexConfig {
        qapwalk::optimize::SimplexConfig {
            x_tol: self.nm_x_tol,
            f_tol: self.nm_f_tol,
            max_evals: self.nm_max_evals,
            ..Default::default()
        }
    }

    /// Probability that at least one of `shots` measurements returns an
    /// optimum when each does so with probability `osp`.
    pub fn shot_success(&self, osp: f64) -> f64 {
        1.0 - (1.0 - osp).powi(self.shots as i32)
    }
}
