use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use qapwalk::analysis::shell_distribution;
use qapwalk::quantum::{uniform_state, NvQwoa, RampParams, TranspositionGraph};

use super::gen::load_instances;
use super::sweep::ParamRow;
use crate::config::ExperimentConfig;
use crate::csvio::{read_rows, write_rows};
use crate::error::Result;
use crate::layout::Layout;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShellRow {
    pub instance_id: String,
    pub p: usize,
    pub shell_k: usize,
    pub probability: f64,
}

/// Expected transposition distance from the optimum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceRow {
    pub instance_id: String,
    pub n: usize,
    pub p: usize,
    pub expected_distance: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ShellReport {
    pub shells: Vec<ShellRow>,
    pub distances: Vec<DistanceRow>,
}

/// Shell probabilities around each instance's first minimizer, for the
/// uniform state (`p = 0`) and the tuned circuit at `p*`. Sizes that did
/// not converge in the sweep are skipped.
pub fn cmd_shells(cfg: &ExperimentConfig, write_snapshots: bool) -> Result<ShellReport> {
    cfg.validate()?;
    let layout = Layout::new(&cfg.out_dir);
    Layout::require(&[layout.sweep_params()])?;
    let params: Vec<ParamRow> = read_rows(&layout.sweep_params())?;
    let by_id: BTreeMap<&str, &ParamRow> = params.iter().map(|r| (r.instance_id.as_str(), r)).collect();
    let mut report = ShellReport::default();

    for n in cfg.sorted_sizes() {
        if !params.iter().any(|r| r.n == n) {
            continue;
        }
        let instances = load_instances(cfg, n)?;
        let graph = Arc::new(TranspositionGraph::new(n)?);
        let uniform = uniform_state(n)?;
        let per_instance = instances
            .par_iter()
            .filter_map(|(id, inst)| by_id.get(id.as_str()).map(|row| (id, inst, *row)))
            .map(|(id, inst, row)| {
                let sim = NvQwoa::from_parts(Arc::new(inst.quality_vector()?), graph.clone())?;
                let reference = sim.quality().first_minimizer();
                let tuned = sim.run(&RampParams::new(row.gamma, row.t, row.beta, row.p_star)?)?;
                if write_snapshots {
                    let path = layout.snapshot(id);
                    std::fs::create_dir_all(path.parent().expect("snapshot path has a parent"))?;
                    tuned.state.write_snapshot(path)?;
                }
                let mut shells = Vec::new();
                let mut distances = Vec::new();
                for (p, state) in [(0, &uniform), (row.p_star, &tuned.state)] {
                    let dist = shell_distribution(state, reference)?;
                    distances.push(DistanceRow {
                        instance_id: id.clone(),
                        n,
                        p,
                        expected_distance: dist.expected_distance(),
                    });
                    shells.extend(dist.probs.iter().enumerate().map(|(k, &probability)| ShellRow {
                        instance_id: id.clone(),
                        p,
                        shell_k: k,
                        probability,
                    }));
                }
                Ok((shells, distances))
            })
            .collect::<Result<Vec<_>>>()?;
        for (shells, distances) in per_instance {
            report.shells.extend(shells);
            report.distances.extend(distances);
        }
    }

    write_rows(&layout.shells(), &report.shells)?;
    write_rows(&layout.shell_distance(), &report.distances)?;
    Ok(report)
}
