//! Symmetric QAP instances, their objective, and the full cost landscape.

use std::f64::consts::TAU;
use std::path::Path;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{self, LexPermutations, PermIndex, Permutation};
use crate::seed;

/// Default cap on `n` for exhaustive enumeration of `S_n`.
pub const DEFAULT_ENUMERATION_CAP: usize = 12;

/// Default multiplier applied to the uniform flow entries.
pub const DEFAULT_FLOW_SCALE: f64 = 20.0;

const SYMMETRY_TOL: f64 = 1e-12;

/// Known global optimum of an instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Optimum {
    pub cost: f64,
    /// Ranks of every permutation attaining `cost`, ascending.
    pub minimizers: Vec<u64>,
}

/// A symmetric QAP instance with zero-diagonal flow and distance matrices.
///
/// `flow[i][j]` is the flow between facilities `i` and `j`; `dist[a][b]` the
/// distance between locations `a` and `b`. Both are stored row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "InstanceFile", into = "InstanceFile")]
pub struct QapInstance {
    n: usize,
    seed: u64,
    flow: Vec<f64>,
    dist: Vec<f64>,
    coords: Option<Vec<[f64; 2]>>,
    optimum: Option<Optimum>,
}

/// On-disk layout; see [`QapInstance::save`].
#[derive(Serialize, Deserialize)]
struct InstanceFile {
    n: usize,
    seed: u64,
    flow: Vec<f64>,
    dist: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coords: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    optimum: Option<Optimum>,
}

impl TryFrom<InstanceFile> for QapInstance {
    type Error = Error;

    fn try_from(f: InstanceFile) -> Result<Self> {
        let mut inst = QapInstance::from_matrices(f.n, f.flow, f.dist)?;
        inst.seed = f.seed;
        if let Some(coords) = f.coords {
            inst = inst.with_coords(coords)?;
        }
        if let Some(opt) = f.optimum {
            let count = perm::factorial(inst.n)?;
            if opt.minimizers.is_empty() || opt.minimizers.iter().any(|&m| m >= count) {
                return Err(Error::InvalidInstance(
                    "optimum minimizers must be non-empty ranks below n!".into(),
                ));
            }
            inst.optimum = Some(opt);
        }
        Ok(inst)
    }
}

impl From<QapInstance> for InstanceFile {
    fn from(inst: QapInstance) -> Self {
        InstanceFile {
            n: inst.n,
            seed: inst.seed,
            flow: inst.flow,
            dist: inst.dist,
            coords: inst.coords,
            optimum: inst.optimum,
        }
    }
}

impl QapInstance {
    /// Builds an instance from row-major `n × n` matrices, checking symmetry
    /// and zero diagonals.
    pub fn from_matrices(n: usize, flow: Vec<f64>, dist: Vec<f64>) -> Result<Self> {
        if n == 0 || n > perm::MAX_RANK_N {
            return Err(Error::InvalidInstance(format!(
                "n = {n} outside 1..={}",
                perm::MAX_RANK_N
            )));
        }
        for (name, m) in [("flow", &flow), ("dist", &dist)] {
            check_matrix(name, n, m)?;
        }
        Ok(Self {
            n,
            seed: 0,
            flow,
            dist,
            coords: None,
            optimum: None,
        })
    }

    fn with_coords(mut self, coords: Vec<[f64; 2]>) -> Result<Self> {
        if coords.len() != self.n {
            return Err(Error::InvalidInstance(format!(
                "{} coordinates for n = {}",
                coords.len(),
                self.n
            )));
        }
        for a in 0..self.n {
            for b in 0..self.n {
                let d = euclid(coords[a], coords[b]);
                if (d - self.dist[a * self.n + b]).abs() > SYMMETRY_TOL {
                    return Err(Error::InvalidInstance(format!(
                        "dist[{a}][{b}] does not match the coordinates"
                    )));
                }
            }
        }
        self.coords = Some(coords);
        Ok(self)
    }

    /// Random instance: locations uniform in the unit square with Euclidean
    /// distances, flows uniform in `[0, flow_scale)` drawn for the upper
    /// triangle and mirrored.
    pub fn generate(n: usize, seed: u64, flow_scale: f64) -> Result<Self> {
        if !(2..=perm::MAX_RANK_N).contains(&n) {
            return Err(Error::Range(format!(
                "instance size n = {n} outside 2..={}",
                perm::MAX_RANK_N
            )));
        }
        if !(flow_scale > 0.0 && flow_scale.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "flow_scale must be positive, got {flow_scale}"
            )));
        }
        let mut rng = seed::rng(seed);
        let coords: Vec<[f64; 2]> = (0..n)
            .map(|_| [rng.random::<f64>(), rng.random::<f64>()])
            .collect();
        let mut flow = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let f = rng.random::<f64>() * flow_scale;
                flow[i * n + j] = f;
                flow[j * n + i] = f;
            }
        }
        let mut dist = vec![0.0; n * n];
        for a in 0..n {
            for b in a + 1..n {
                let d = euclid(coords[a], coords[b]);
                dist[a * n + b] = d;
                dist[b * n + a] = d;
            }
        }
        Ok(Self {
            n,
            seed,
            flow,
            dist,
            coords: Some(coords),
            optimum: None,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn flow(&self, i: usize, j: usize) -> f64 {
        self.flow[i * self.n + j]
    }

    pub fn dist(&self, a: usize, b: usize) -> f64 {
        self.dist[a * self.n + b]
    }

    pub fn coords(&self) -> Option<&[[f64; 2]]> {
        self.coords.as_deref()
    }

    pub fn optimum(&self) -> Option<&Optimum> {
        self.optimum.as_ref()
    }

    /// `Σ_i Σ_j flow[i][j] · dist[π(i)][π(j)]`.
    pub fn objective(&self, perm: &Permutation) -> Result<f64> {
        self.check_size(perm)?;
        Ok(self.cost_unchecked(perm.as_slice()))
    }

    /// Objective for a slice known to be a permutation of the right size.
    /// Every cost in the crate goes through this summation order, so equal
    /// assignments always produce bit-identical costs.
    pub(crate) fn cost_unchecked(&self, elems: &[usize]) -> f64 {
        let n = self.n;
        let mut total = 0.0;
        for (i, &pi) in elems.iter().enumerate() {
            let frow = &self.flow[i * n..(i + 1) * n];
            let drow = &self.dist[pi * n..(pi + 1) * n];
            for (f, &pj) in frow.iter().zip(elems) {
                total += f * drow[pj];
            }
        }
        total
    }

    /// Change in objective when positions `i` and `j` of `perm` are swapped,
    /// in `O(n)`.
    pub fn swap_delta(&self, perm: &Permutation, i: usize, j: usize) -> Result<f64> {
        self.check_size(perm)?;
        if i == j || i >= self.n || j >= self.n {
            return Err(Error::InvalidParameter(format!(
                "swap positions ({i}, {j}) must be distinct and below n = {}",
                self.n
            )));
        }
        Ok(self.swap_delta_unchecked(perm.as_slice(), i, j))
    }

    pub(crate) fn swap_delta_unchecked(&self, elems: &[usize], r: usize, s: usize) -> f64 {
        let n = self.n;
        let (pr, ps) = (elems[r], elems[s]);
        let frow_r = &self.flow[r * n..(r + 1) * n];
        let frow_s = &self.flow[s * n..(s + 1) * n];
        let drow_r = &self.dist[pr * n..(pr + 1) * n];
        let drow_s = &self.dist[ps * n..(ps + 1) * n];
        let mut delta = 0.0;
        for (k, &pk) in elems.iter().enumerate() {
            if k == r || k == s {
                continue;
            }
            delta += (frow_r[k] - frow_s[k]) * (drow_s[pk] - drow_r[pk]);
        }
        2.0 * delta
    }

    /// All `n!` costs in rank order, with summary statistics. Fails above
    /// [`DEFAULT_ENUMERATION_CAP`].
    pub fn quality_vector(&self) -> Result<QualityVector> {
        self.quality_vector_capped(DEFAULT_ENUMERATION_CAP)
    }

    pub fn quality_vector_capped(&self, cap: usize) -> Result<QualityVector> {
        if self.n > cap {
            return Err(Error::TooLarge { n: self.n, cap });
        }
        let count = perm::factorial(self.n)? as usize;
        let mut values = Vec::with_capacity(count);
        LexPermutations::new(self.n).for_each_slice(|p| values.push(self.cost_unchecked(p)));
        Ok(QualityVector::from_values(self.n, values))
    }

    /// Records the optimum found in `q`.
    pub fn cache_optimum(&mut self, q: &QualityVector) -> Result<()> {
        if q.n != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                found: q.n,
            });
        }
        self.optimum = Some(Optimum {
            cost: q.min,
            minimizers: q.minimizers.iter().map(|&i| i as u64).collect(),
        });
        Ok(())
    }

    /// [`Self::quality_vector`] followed by [`Self::cache_optimum`].
    pub fn solve_exhaustive(&mut self) -> Result<QualityVector> {
        let q = self.quality_vector()?;
        self.cache_optimum(&q)?;
        Ok(q)
    }

    /// True if `cost` is no worse than the cached optimum.
    pub fn is_optimal_cost(&self, cost: f64) -> Result<bool> {
        let opt = self.optimum.as_ref().ok_or(Error::MissingOptimum)?;
        Ok(cost <= opt.cost)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Writes the instance as a JSON object with keys `n`, `seed`, `flow`,
    /// `dist` (row-major), and optionally `coords` and `optimum`.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }

    fn check_size(&self, perm: &Permutation) -> Result<()> {
        if perm.n() != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                found: perm.n(),
            });
        }
        Ok(())
    }
}

fn euclid(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn check_matrix(name: &str, n: usize, m: &[f64]) -> Result<()> {
    if m.len() != n * n {
        return Err(Error::InvalidInstance(format!(
            "{name} has {} entries, expected {}",
            m.len(),
            n * n
        )));
    }
    for i in 0..n {
        if m[i * n + i] != 0.0 {
            return Err(Error::InvalidInstance(format!("{name}[{i}][{i}] is not zero")));
        }
        for j in 0..n {
            let (a, b) = (m[i * n + j], m[j * n + i]);
            if !a.is_finite() || a < 0.0 {
                return Err(Error::InvalidInstance(format!(
                    "{name}[{i}][{j}] = {a} is not a non-negative real"
                )));
            }
            if (a - b).abs() > SYMMETRY_TOL * a.abs().max(1.0) {
                return Err(Error::InvalidInstance(format!("{name} is not symmetric at ({i}, {j})")));
            }
        }
    }
    Ok(())
}

/// Every cost of an instance indexed by permutation rank.
#[derive(Clone, Debug, PartialEq)]
pub struct QualityVector {
    n: usize,
    values: Vec<f64>,
    min: f64,
    max: f64,
    minimizers: Vec<usize>,
    mean: f64,
    sigma: f64,
}

impl QualityVector {
    /// Wraps a cost vector indexed by rank. Panics if `values.len() != n!`.
    pub fn from_values(n: usize, values: Vec<f64>) -> Self {
        assert_eq!(
            perm::factorial(n).ok(),
            Some(values.len() as u64),
            "quality vector length must be n!"
        );
        let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
        for &v in &values {
            min = min.min(v);
            max = max.max(v);
        }
        let minimizers = values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v == min)
            .map(|(i, _)| i)
            .collect();
        let len = values.len() as f64;
        let mean = values.iter().sum::<f64>() / len;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / len;
        Self {
            n,
            values,
            min,
            max,
            minimizers,
            mean,
            sigma: var.sqrt(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    /// Ranks attaining the minimum, ascending.
    pub fn minimizers(&self) -> &[usize] {
        &self.minimizers
    }

    /// The lowest-ranked global minimizer.
    pub fn first_minimizer(&self) -> PermIndex {
        PermIndex::new(self.minimizers[0] as u64, self.n).expect("minimizer rank below n!")
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Population standard deviation.
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Costs mapped affinely onto `[0, 2π]` (minimum to 0, maximum to 2π).
    pub fn normalized(&self) -> Result<Vec<f64>> {
        normalize_qualities(self)
    }
}

/// `2π (q - min) / (max - min)` for every cost.
pub fn normalize_qualities(q: &QualityVector) -> Result<Vec<f64>> {
    let span = q.max - q.min;
    if !(span > 0.0) {
        return Err(Error::Degenerate);
    }
    let scale = TAU / span;
    Ok(q.values.iter().map(|v| (v - q.min) * scale).collect())
}
