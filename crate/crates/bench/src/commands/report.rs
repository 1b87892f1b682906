use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use qapwalk::heuristics::swap_count;

use super::classical::{instance_row, summary_row, ClassicalSummaryRow, InstanceRow, RunRow, GLS, MMAS};
use super::grover::{grover_row, GroverRow};
use super::shells::DistanceRow;
use super::sweep::{MeanRow, OspRow, ParamRow, SummaryRow};
use crate::config::ExperimentConfig;
use crate::csvio::{read_rows, write_rows};
use crate::error::{BenchError, Result};
use crate::fit::{mean_sd, quartic_coefficient, quartic_rms};
use crate::layout::{parse_instance_id, Layout};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvaluationsRow {
    pub n: usize,
    pub nvqwoa_evals: Option<usize>,
    pub optimizer_evals_total: usize,
    pub mmas_mean_evals: Option<f64>,
    pub mmas_sd_evals: Option<f64>,
    pub gls_mean_evals: Option<f64>,
    pub gls_sd_evals: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveProbabilityRow {
    pub n: usize,
    pub gls_solve_probability: Option<f64>,
    pub mmas_solve_rate: Option<f64>,
    pub nvqwoa_mean_osp: Option<f64>,
    /// `1 - (1 - mean OSP)^shots` at `p*`.
    pub nvqwoa_shot_success: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ViolinRow {
    pub n: usize,
    pub p: usize,
    pub instance_id: String,
    pub osp: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct IterationRow {
    pub n: usize,
    pub N: u64,
    pub p_star: Option<usize>,
    pub grover_k_exact: u64,
    pub grover_k_paper_formula: u64,
    pub sqrt_n_factorial: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InternodeRow {
    pub n: usize,
    pub uniform_expected_distance: f64,
    pub tuned_mean_expected_distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuarticFitRow {
    pub sizes: String,
    pub depths: String,
    pub coefficient: f64,
    pub rms_residual: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub evaluations: Vec<EvaluationsRow>,
    pub solve_probability: Vec<SolveProbabilityRow>,
    pub violin: Vec<ViolinRow>,
    pub iterations: Vec<IterationRow>,
    pub internode: Vec<InternodeRow>,
    pub quartic_fit: Option<QuarticFitRow>,
}

struct Inputs {
    osp: Vec<OspRow>,
    summary: Vec<SummaryRow>,
    params: Vec<ParamRow>,
    runs: Vec<RunRow>,
    instances: Vec<InstanceRow>,
    classical: Vec<ClassicalSummaryRow>,
    grover: Vec<GroverRow>,
    distances: Vec<DistanceRow>,
}

/// Joins every result table into figure-ready CSVs after checking that
/// each evaluation count reconstructs from the raw rows.
pub fn cmd_report(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.validate()?;
    let layout = Layout::new(&cfg.out_dir);
    Layout::require(&[
        layout.sweep_osp(),
        layout.sweep_means(),
        layout.sweep_summary(),
        layout.sweep_params(),
        layout.classical_runs(),
        layout.classical_instances(),
        layout.classical_summary(),
        layout.grover(),
        layout.shell_distance(),
    ])?;
    let _: Vec<MeanRow> = read_rows(&layout.sweep_means())?;
    let inputs = Inputs {
        osp: read_rows(&layout.sweep_osp())?,
        summary: read_rows(&layout.sweep_summary())?,
        params: read_rows(&layout.sweep_params())?,
        runs: read_rows(&layout.classical_runs())?,
        instances: read_rows(&layout.classical_instances())?,
        classical: read_rows(&layout.classical_summary())?,
        grover: read_rows(&layout.grover())?,
        distances: read_rows(&layout.shell_distance())?,
    };
    check_accounting(cfg, &inputs)?;

    let mut report = Report::default();
    let sizes = cfg.sorted_sizes();
    for &n in &sizes {
        let summary = inputs
            .summary
            .iter()
            .find(|s| s.n == n)
            .ok_or_else(|| missing_size("sweep summary", n))?;
        let classical = |solver: &str| inputs.classical.iter().find(|s| s.n == n && s.solver == solver);
        let gls = classical(GLS);
        let mmas = classical(MMAS);
        report.evaluations.push(EvaluationsRow {
            n,
            nvqwoa_evals: summary.nvqwoa_evals,
            optimizer_evals_total: summary.optimizer_evals_total,
            mmas_mean_evals: mmas.map(|s| s.mean_evals),
            mmas_sd_evals: mmas.map(|s| s.sd_evals),
            gls_mean_evals: gls.map(|s| s.mean_evals),
            gls_sd_evals: gls.map(|s| s.sd_evals),
        });
        report.solve_probability.push(SolveProbabilityRow {
            n,
            gls_solve_probability: gls.map(|s| s.solve_probability),
            mmas_solve_rate: mmas.map(|s| s.solve_probability),
            nvqwoa_mean_osp: summary.mean_osp_at_p_star,
            nvqwoa_shot_success: summary.mean_osp_at_p_star.map(|o| cfg.shot_success(o)),
        });
        let grover = match inputs.grover.iter().find(|g| g.n == n && g.M == 1) {
            Some(g) => g.clone(),
            None => grover_row(n, 1, cfg.osp_threshold)?,
        };
        report.iterations.push(IterationRow {
            n,
            N: grover.N,
            p_star: summary.p_star,
            grover_k_exact: grover.k_exact,
            grover_k_paper_formula: grover.k_paper_formula,
            sqrt_n_factorial: (grover.N as f64).sqrt(),
        });
        let dist = |p_filter: &dyn Fn(usize) -> bool| {
            mean_sd(
                inputs
                    .distances
                    .iter()
                    .filter(|d| d.n == n && p_filter(d.p))
                    .map(|d| d.expected_distance),
            )
            .0
        };
        if inputs.distances.iter().any(|d| d.n == n) {
            report.internode.push(InternodeRow {
                n,
                uniform_expected_distance: dist(&|p| p == 0),
                tuned_mean_expected_distance: dist(&|p| p > 0),
            });
        }
    }
    report.violin = inputs
        .osp
        .iter()
        .map(|r| ViolinRow {
            n: r.n,
            p: r.p,
            instance_id: r.instance_id.clone(),
            osp: r.osp,
        })
        .collect();

    let (fit_sizes, fit_depths): (Vec<usize>, Vec<usize>) =
        inputs.summary.iter().filter_map(|s| s.p_star.map(|p| (s.n, p))).unzip();
    report.quartic_fit = quartic_coefficient(&fit_sizes, &fit_depths).map(|c| QuarticFitRow {
        sizes: join(&fit_sizes),
        depths: join(&fit_depths),
        coefficient: c,
        rms_residual: quartic_rms(&fit_sizes, &fit_depths, c),
    });

    write_rows(&layout.report("evaluations_vs_n.csv"), &report.evaluations)?;
    write_rows(&layout.report("solve_probability_vs_n.csv"), &report.solve_probability)?;
    write_rows(&layout.report("osp_violin.csv"), &report.violin)?;
    write_rows(&layout.report("grover_vs_nvqwoa.csv"), &report.iterations)?;
    write_rows(&layout.report("internode_distance.csv"), &report.internode)?;
    write_rows(
        &layout.report("quartic_fit.csv"),
        report.quartic_fit.as_slice(),
    )?;
    Ok(report)
}

fn join(values: &[usize]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn missing_size(table: &str, n: usize) -> BenchError {
    BenchError::Accounting(format!("{table} has no entry for n = {n}"))
}

fn fail(msg: String) -> Result<()> {
    Err(BenchError::Accounting(msg))
}

/// Rebuilds every reported evaluation count from the raw rows.
fn check_accounting(cfg: &ExperimentConfig, inputs: &Inputs) -> Result<()> {
    // NV-QWOA: shots · p* per size and per instance
    for s in &inputs.summary {
        if s.nvqwoa_evals != s.p_star.map(|p| s.shots * p) || s.shots != cfg.shots {
            return fail(format!("n = {}: NV-QWOA count {:?} is not shots · p*", s.n, s.nvqwoa_evals));
        }
        let total: usize = inputs.osp.iter().filter(|r| r.n == s.n).map(|r| r.optimizer_evals).sum();
        if total != s.optimizer_evals_total {
            return fail(format!(
                "n = {}: optimizer total {} but trace rows sum to {total}",
                s.n, s.optimizer_evals_total
            ));
        }
    }
    for row in &inputs.params {
        let summary = inputs.summary.iter().find(|s| s.n == row.n).ok_or_else(|| missing_size("sweep summary", row.n))?;
        if Some(row.p_star) != summary.p_star || Some(row.nvqwoa_evals) != summary.nvqwoa_evals {
            return fail(format!("{}: parameter row disagrees with the size summary", row.instance_id));
        }
        let spent: usize = inputs
            .osp
            .iter()
            .filter(|r| r.instance_id == row.instance_id)
            .map(|r| r.optimizer_evals)
            .sum();
        if spent != row.optimizer_evals {
            return fail(format!(
                "{}: {} optimizer evaluations reported, trace rows sum to {spent}",
                row.instance_id, row.optimizer_evals
            ));
        }
    }

    // classical: per-run identities, then aggregates rebuilt from runs
    let mut by_solver: BTreeMap<(usize, String), Vec<RunRow>> = BTreeMap::new();
    for run in &inputs.runs {
        let (n, _) = parse_instance_id(&run.instance_id)?;
        match run.solver.as_str() {
            GLS => {
                if run.n_evals % swap_count(n) != 0 || run.n_evals != run.iterations * swap_count(n) {
                    return fail(format!(
                        "{} gls seed {}: {} evaluations is not iterations · n(n-1)/2",
                        run.instance_id, run.seed, run.n_evals
                    ));
                }
            }
            MMAS => {
                let ants = cfg.mmas_ants.unwrap_or(n) as u64;
                if run.n_evals != ants * run.iterations {
                    return fail(format!(
                        "{} mmas seed {}: {} evaluations is not {ants} ants · {} iterations",
                        run.instance_id, run.seed, run.n_evals, run.iterations
                    ));
                }
            }
            other => return fail(format!("unknown solver {other:?}")),
        }
        by_solver.entry((n, run.solver.clone())).or_default().push(run.clone());
    }
    let mut rebuilt_instances: BTreeMap<(usize, String), Vec<InstanceRow>> = BTreeMap::new();
    for ((n, solver), runs) in &by_solver {
        let rows = runs
            .chunk_by(|a, b| a.instance_id == b.instance_id)
            .map(|chunk| instance_row(*n, solver, chunk))
            .collect();
        rebuilt_instances.insert((*n, solver.clone()), rows);
    }
    let reported_instances: BTreeMap<(usize, String), Vec<InstanceRow>> =
        inputs.instances.iter().fold(BTreeMap::new(), |mut acc, row| {
            acc.entry((row.n, row.solver.clone())).or_insert_with(Vec::new).push(row.clone());
            acc
        });
    if reported_instances != rebuilt_instances {
        return fail("per-instance classical aggregates do not match the run rows".into());
    }
    if inputs.classical.len() != by_solver.len() {
        return fail("classical summary rows do not match the solvers present in the run rows".into());
    }
    for row in &inputs.classical {
        let key = (row.n, row.solver.clone());
        let (Some(runs), Some(instances)) = (by_solver.get(&key), rebuilt_instances.get(&key)) else {
            return fail(format!("n = {} {}: summary without runs", row.n, row.solver));
        };
        if &summary_row(cfg, row.n, &row.solver, runs, instances) != row {
            return fail(format!("n = {} {}: summary does not match its runs", row.n, row.solver));
        }
    }
    Ok(())
}
