use rayon::prelude::*;

use qapwalk::{seed, QapInstance};

use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::layout::{instance_id, Layout};

/// Seed of instance `idx` at size `n`.
pub fn instance_seed(master: u64, n: usize, idx: usize) -> u64 {
    seed::derive(master, &[n as u64, idx as u64])
}

/// Writes `instances_per_size` instances per size, each with its optimum
/// cached. Returns the written instance ids.
pub fn cmd_gen(cfg: &ExperimentConfig) -> Result<Vec<String>> {
    cfg.validate()?;
    let layout = Layout::new(&cfg.out_dir);
    let tasks: Vec<(usize, usize)> = cfg
        .sorted_sizes()
        .into_iter()
        .flat_map(|n| (0..cfg.instances_per_size).map(move |i| (n, i)))
        .collect();
    for &n in &cfg.sizes {
        std::fs::create_dir_all(layout.instance_dir(n))?;
    }
    tasks
        .par_iter()
        .map(|&(n, idx)| {
            let mut inst = QapInstance::generate(n, instance_seed(cfg.master_seed, n, idx), cfg.flow_scale)?;
            inst.solve_exhaustive()?;
            let id = instance_id(n, idx);
            inst.save(layout.instance(&id)?)?;
            Ok(id)
        })
        .collect()
}

/// Instance ids expected for size `n`.
pub fn expected_ids(cfg: &ExperimentConfig, n: usize) -> Vec<String> {
    (0..cfg.instances_per_size).map(|i| instance_id(n, i)).collect()
}

/// Loads every configured instance of size `n`; fails with the list of
/// missing files if any are absent.
pub fn load_instances(cfg: &ExperimentConfig, n: usize) -> Result<Vec<(String, QapInstance)>> {
    let layout = Layout::new(&cfg.out_dir);
    let ids = expected_ids(cfg, n);
    let paths = ids.iter().map(|id| layout.instance(id)).collect::<Result<Vec<_>>>()?;
    Layout::require(&paths)?;
    ids.into_par_iter()
        .zip(paths)
        .map(|(id, path)| Ok((id, QapInstance::load(path)?)))
        .collect()
}
