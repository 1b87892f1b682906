//! Paths of every artifact under the output directory.

use std::path::{Path, PathBuf};

use crate::error::{BenchError, Result};

#[derive(Clone, Debug)]
pub struct Layout {
    root: PathBuf,
}

impl Layout {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Self { root: root.into() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn instance_dir(&self, n: usize) -> PathBuf {
        self.root.join("instances").join(format!("n{n}"))
    }

    pub fn instance(&self, id: &str) -> Result<PathBuf> {
        let (n, _) = parse_instance_id(id)?;
        Ok(self.instance_dir(n).join(format!("{id}.json")))
    }

    pub fn sweep_osp(&self) -> PathBuf {
        self.root.join("sweep").join("osp_by_p.csv")
    }

    pub fn sweep_means(&self) -> PathBuf {
        self.root.join("sweep").join("mean_osp.csv")
    }

    pub fn sweep_summary(&self) -> PathBuf {
        self.root.join("sweep").join("summary.csv")
    }

    pub fn sweep_params(&self) -> PathBuf {
        self.root.join("sweep").join("params.csv")
    }

    pub fn trace(&self, id: &str, p: usize) -> PathBuf {
        self.root.join("sweep").join("traces").join(format!("{id}_p{p:02}.csv"))
    }

    pub fn classical_runs(&self) -> PathBuf {
        self.root.join("classical").join("runs.csv")
    }

    pub fn classical_instances(&self) -> PathBuf {
        self.root.join("classical").join("instances.csv")
    }

    pub fn classical_summary(&self) -> PathBuf {
        self.root.join("classical").join("summary.csv")
    }

    pub fn grover(&self) -> PathBuf {
        self.root.join("grover.csv")
    }

    pub fn shells(&self) -> PathBuf {
        self.root.join("shells").join("shells.csv")
    }

    pub fn shell_distance(&self) -> PathBuf {
        self.root.join("shells").join("distance.csv")
    }

    pub fn snapshot(&self, id: &str) -> PathBuf {
        self.root.join("shells").join("states").join(format!("{id}.bin"))
    }

    pub fn report(&self, name: &str) -> PathBuf {
        self.root.join("report").join(name)
    }

    pub fn metadata(&self, command: &str) -> PathBuf {
        self.root.join("metadata").join(format!("{command}.json"))
    }

    /// Returns an error listing every path in `paths` that does not exist.
    pub fn require(paths: &[PathBuf]) -> Result<()> {
        let missing: Vec<PathBuf> = paths.iter().filter(|p| !p.exists()).cloned().collect();
        if missing.is_empty() {
            Ok(())
        } else {
            Err(BenchError::MissingArtifacts(missing))
        }
    }
}

/// `n5_i07` for size 5, index 7.
pub fn instance_id(n: usize, idx: usize) -> String {
    format!("n{n}_i{idx:02}")
}

pub fn parse_instance_id(id: &str) -> Result<(usize, usize)> {
    let bad = || BenchError::Config(format!("malformed instance id {id:?}"));
    let rest = id.strip_prefix('n').ok_or_else(bad)?;
    let (n, idx) = rest.split_once("_i").ok_or_else(bad)?;
    Ok((n.parse().map_err(|_| bad())?, idx.parse().map_err(|_| bad())?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        assert_eq!(instance_id(5, 7), "n5_i07");
        assert_eq!(parse_instance_id("n5_i07").unwrap(), (5, 7));
        assert_eq!(parse_instance_id(&instance_id(9, 123)).unwrap(), (9, 123));
        assert!(parse_instance_id("x5_i07").is_err());
        assert!(parse_instance_id("n5-07").is_err());
    }

    #[test]
    fn missing_paths_are_listed() {
        let dir = tempfile::tempdir().unwrap();
        let layout = Layout::new(dir.path());
        let err = Layout::require(&[layout.grover(), layout.sweep_summary()]).unwrap_err();
        match err {
            BenchError::MissingArtifacts(p) => assert_eq!(p.len(), 2),
            other => panic!("{other}"),
        }
        assert_eq!(err_code(&layout), 3);
    }

    fn err_code(layout: &Layout) -> i32 {
        Layout::require(&[layout.grover()]).unwrap_err().exit_code()
    }
}
