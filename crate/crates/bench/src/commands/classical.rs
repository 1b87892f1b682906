use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use qapwalk::heuristics::{gls_run, mmas_run};
use qapwalk::{seed, Error as CoreError};

use super::gen::{instance_seed, load_instances};
use crate::config::ExperimentConfig;
use crate::csvio::write_rows;
use crate::error::Result;
use crate::fit::mean_sd;
use crate::layout::{parse_instance_id, Layout};

pub const GLS: &str = "gls";
pub const MMAS: &str = "mmas";

/// One heuristic run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRow {
    pub instance_id: String,
    pub solver: String,
    pub seed: u64,
    pub best_cost: f64,
    pub found_optimum: bool,
    pub iterations: u64,
    pub n_evals: u64,
}

/// Per-instance aggregate of one solver's runs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceRow {
    pub instance_id: String,
    pub n: usize,
    pub solver: String,
    pub runs: usize,
    pub solve_probability: f64,
    pub mean_evals: f64,
}

/// Per-size aggregate of one solver.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassicalSummaryRow {
    pub n: usize,
    pub solver: String,
    pub runs: usize,
    /// Mean over all runs of `N_f(x)`.
    pub mean_evals: f64,
    pub sd_evals: f64,
    /// Mean over instances of the per-instance solve fraction.
    pub solve_probability: f64,
    /// `1 - (1 - threshold)^shots`, the measurement bound a depth meeting
    /// the OSP threshold achieves with the configured shots.
    pub nvqwoa_shot_success: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ClassicalReport {
    pub runs: Vec<RunRow>,
    pub instances: Vec<InstanceRow>,
    pub summary: Vec<ClassicalSummaryRow>,
}

impl ClassicalReport {
    pub fn summary_for(&self, n: usize, solver: &str) -> Option<&ClassicalSummaryRow> {
        self.summary.iter().find(|s| s.n == n && s.solver == solver)
    }
}

const GLS_STREAM: u64 = 1;
const MMAS_STREAM: u64 = 2;

/// Seed of run `r` of a solver on instance `(n, idx)`.
pub fn run_seed(master: u64, n: usize, idx: usize, stream: u64, r: usize) -> u64 {
    seed::derive(instance_seed(master, n, idx), &[stream, r as u64])
}

/// Runs greedy local search restarts and MMAS runs on every instance.
pub fn cmd_classical(cfg: &ExperimentConfig) -> Result<ClassicalReport> {
    cfg.validate()?;
    let layout = Layout::new(&cfg.out_dir);
    let mut report = ClassicalReport::default();

    for n in cfg.sorted_sizes() {
        let instances = load_instances(cfg, n)?;
        let mut solvers = Vec::new();
        if cfg.run_gls {
            solvers.push((GLS, GLS_STREAM, cfg.gls_restarts));
        }
        if cfg.run_mmas {
            solvers.push((MMAS, MMAS_STREAM, cfg.mmas_runs));
        }
        let params = cfg.mmas_params(n);
        for (solver, stream, count) in solvers {
            let tasks: Vec<(usize, usize)> = (0..instances.len())
                .flat_map(|k| (0..count).map(move |r| (k, r)))
                .collect();
            let rows = tasks
                .par_iter()
                .map(|&(k, r)| {
                    let (id, inst) = &instances[k];
                    let (_, idx) = parse_instance_id(id)?;
                    let seed = run_seed(cfg.master_seed, n, idx, stream, r);
                    let target = inst.optimum().ok_or(CoreError::MissingOptimum)?.cost;
                    let rec = if solver == GLS {
                        gls_run(inst, seed)
                    } else {
                        mmas_run(inst, &params, seed, Some(target))?
                    };
                    Ok(RunRow {
                        instance_id: id.clone(),
                        solver: solver.to_string(),
                        seed,
                        best_cost: rec.best_cost,
                        found_optimum: rec.found_optimum,
                        iterations: rec.iterations,
                        n_evals: rec.n_evals,
                    })
                })
                .collect::<Result<Vec<_>>>()?;

            let per_instance: Vec<InstanceRow> = rows
                .chunks(count)
                .map(|chunk| instance_row(n, solver, chunk))
                .collect();
            report.summary.push(summary_row(cfg, n, solver, &rows, &per_instance));
            report.instances.extend(per_instance);
            report.runs.extend(rows);
        }
    }

    write_rows(&layout.classical_runs(), &report.runs)?;
    write_rows(&layout.classical_instances(), &report.instances)?;
    write_rows(&layout.classical_summary(), &report.summary)?;
    Ok(report)
}

/// Aggregates the runs of one solver on one instance.
pub fn instance_row(n: usize, solver: &str, runs: &[RunRow]) -> InstanceRow {
    let solved = runs.iter().filter(|r| r.found_optimum).count();
    InstanceRow {
        instance_id: runs[0].instance_id.clone(),
        n,
        solver: solver.to_string(),
        runs: runs.len(),
        solve_probability: solved as f64 / runs.len() as f64,
        mean_evals: mean_sd(runs.iter().map(|r| r.n_evals as f64)).0,
    }
}

/// Aggregates one solver over all instances of size `n`.
pub fn summary_row(
    cfg: &ExperimentConfig,
    n: usize,
    solver: &str,
    runs: &[RunRow],
    instances: &[InstanceRow],
) -> ClassicalSummaryRow {
    let (mean_evals, sd_evals) = mean_sd(runs.iter().map(|r| r.n_evals as f64));
    ClassicalSummaryRow {
        n,
        solver: solver.to_string(),
        runs: runs.len(),
        mean_evals,
        sd_evals,
        solve_probability: mean_sd(instances.iter().map(|i| i.solve_probability)).0,
        nvqwoa_shot_success: cfg.shot_success(cfg.osp_threshold),
    }
}
