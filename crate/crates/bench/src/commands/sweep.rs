use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use qapwalk::optimize::{optimize_circuit_params, OptResult};
use qapwalk::quantum::{NvQwoa, TranspositionGraph};

use super::gen::load_instances;
use crate::config::ExperimentConfig;
use crate::csvio::write_rows;
use crate::error::Result;
use crate::fit::median;
use crate::layout::Layout;

/// Tuned result of one instance at one depth.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OspRow {
    pub n: usize,
    pub p: usize,
    pub instance_id: String,
    pub osp: f64,
    pub expectation: f64,
    pub gamma: f64,
    pub t: f64,
    pub beta: f64,
    pub optimizer_evals: usize,
    pub budget_limited: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanRow {
    pub n: usize,
    pub p: usize,
    pub mean_osp: f64,
    pub median_osp: f64,
    pub instances: usize,
}

/// Outcome of the depth sweep for one size. `p_star` and `nvqwoa_evals`
/// are empty when `p_max` was reached below the threshold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub n: usize,
    pub converged: bool,
    pub p_star: Option<usize>,
    pub mean_osp_at_p_star: Option<f64>,
    pub shots: usize,
    pub nvqwoa_evals: Option<usize>,
    pub optimizer_evals_total: usize,
}

/// Per-instance parameters at the converged depth.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamRow {
    pub instance_id: String,
    pub n: usize,
    pub p_star: usize,
    pub gamma: f64,
    pub t: f64,
    pub beta: f64,
    pub osp: f64,
    pub expectation: f64,
    /// Circuit evaluations spent by the tuner over depths `1..=p_star`.
    pub optimizer_evals: usize,
    pub nvqwoa_evals: usize,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SweepReport {
    pub rows: Vec<OspRow>,
    pub means: Vec<MeanRow>,
    pub summary: Vec<SummaryRow>,
    pub params: Vec<ParamRow>,
}

impl SweepReport {
    pub fn summary_for(&self, n: usize) -> Option<&SummaryRow> {
        self.summary.iter().find(|s| s.n == n)
    }

    /// Mean OSP per depth for size `n`, in depth order.
    pub fn mean_osp_sequence(&self, n: usize) -> Vec<f64> {
        self.means.iter().filter(|m| m.n == n).map(|m| m.mean_osp).collect()
    }
}

/// For each size, raises the depth until the mean tuned OSP over the
/// instance set reaches the threshold.
pub fn cmd_sweep(cfg: &ExperimentConfig) -> Result<SweepReport> {
    cfg.validate()?;
    let layout = Layout::new(&cfg.out_dir);
    let simplex = cfg.simplex();
    let mut report = SweepReport::default();

    for n in cfg.sorted_sizes() {
        let instances = load_instances(cfg, n)?;
        let graph = Arc::new(TranspositionGraph::new(n)?);
        let sims = instances
            .par_iter()
            .map(|(id, inst)| {
                let quality = Arc::new(inst.quality_vector()?);
                Ok((id.clone(), NvQwoa::from_parts(quality, graph.clone())?))
            })
            .collect::<Result<Vec<_>>>()?;

        let mut starts: Vec<Option<[f64; 3]>> = vec![None; sims.len()];
        let mut spent = vec![0usize; sims.len()];
        let mut p_star = None;
        let mut last: Vec<OptResult> = Vec::new();
        for p in 1..=cfg.p_max {
            let results = sims
                .par_iter()
                .zip(&starts)
                .map(|((_, sim), start)| optimize_circuit_params(sim, p, *start, &simplex))
                .collect::<Result<Vec<_>, _>>()?;
            for ((id, _), r) in sims.iter().zip(&results) {
                write_rows(&layout.trace(id, p), &r.history)?;
            }
            let osps: Vec<f64> = results.iter().map(|r| r.osp).collect();
            let mean_osp = osps.iter().sum::<f64>() / osps.len() as f64;
            report.means.push(MeanRow {
                n,
                p,
                mean_osp,
                median_osp: median(&osps),
                instances: osps.len(),
            });
            for (k, ((id, _), r)) in sims.iter().zip(&results).enumerate() {
                spent[k] += r.n_evals;
                report.rows.push(OspRow {
                    n,
                    p,
                    instance_id: id.clone(),
                    osp: r.osp,
                    expectation: r.value,
                    gamma: r.params.gamma,
                    t: r.params.t,
                    beta: r.params.beta,
                    optimizer_evals: r.n_evals,
                    budget_limited: r.budget_limited,
                });
                if cfg.warm_start {
                    starts[k] = Some([r.params.gamma, r.params.t, r.params.beta]);
                }
            }
            last = results;
            if mean_osp >= cfg.osp_threshold {
                p_star = Some(p);
                break;
            }
        }

        let optimizer_evals_total = spent.iter().sum();
        let nvqwoa_evals = p_star.map(|p| cfg.shots * p);
        report.summary.push(SummaryRow {
            n,
            converged: p_star.is_some(),
            p_star,
            mean_osp_at_p_star: p_star.map(|_| report.means.last().expect("one depth ran").mean_osp),
            shots: cfg.shots,
            nvqwoa_evals,
            optimizer_evals_total,
        });
        if let (Some(p), Some(evals)) = (p_star, nvqwoa_evals) {
            for (k, ((id, _), r)) in sims.iter().zip(&last).enumerate() {
                report.params.push(ParamRow {
                    instance_id: id.clone(),
                    n,
                    p_star: p,
                    gamma: r.params.gamma,
                    t: r.params.t,
                    beta: r.params.beta,
                    osp: r.osp,
                    expectation: r.value,
                    optimizer_evals: spent[k],
                    nvqwoa_evals: evals,
                });
            }
        }
    }

    write_rows(&layout.sweep_osp(), &report.rows)?;
    write_rows(&layout.sweep_means(), &report.means)?;
    write_rows(&layout.sweep_summary(), &report.summary)?;
    write_rows(&layout.sweep_params(), &report.params)?;
    Ok(report)
}
