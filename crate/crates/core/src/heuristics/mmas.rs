//! Max-Min Ant System for the QAP, without heuristic information.
//!
//! Each ant assigns facilities one at a time, picking a free location `l`
//! for facility `i` with probability proportional to `τ[i][l]^α`. After all
//! ants have built an assignment, trails evaporate by `(1 - ρ)`, the global
//! best assignment deposits `q / f(best)` on its `(facility, location)`
//! entries, and every trail is clamped to `[τ_min, τ_max]`.

use rand::seq::SliceRandom;
use rand::Rng as _;

use super::RunRecord;
use crate::error::{Error, Result};
use crate::instance::QapInstance;
use crate::perm::Permutation;
use crate::seed::{self, Rng};

/// How trail bounds are chosen.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TrailLimits {
    /// `τ_max = 1 / (ρ · f_best)`, refreshed whenever the global best
    /// improves, and `τ_min = τ_max / (ratio · n)`.
    Adaptive { ratio: f64 },
    Fixed { min: f64, max: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct MmasParams {
    /// Number of ants `m`.
    pub ants: usize,
    /// Pheromone importance `α`.
    pub alpha: f64,
    /// Evaporation rate `ρ`.
    pub rho: f64,
    /// Deposit constant `Q`.
    pub q_const: f64,
    pub limits: TrailLimits,
    /// Iteration cap `T`.
    pub max_iters: u64,
    /// Shuffle the facility order per ant instead of assigning `0..n`.
    pub randomized_order: bool,
}

impl MmasParams {
    /// Defaults for size `n`: `m = n`, `α = 1`, `ρ = 0.2`, `Q = 1`, adaptive
    /// limits with `τ_min = τ_max / 2n`, and a cap of 10⁵ iterations.
    pub fn for_size(n: usize) -> Self {
        Self {
            ants: n,
            alpha: 1.0,
            rho: 0.2,
            q_const: 1.0,
            limits: TrailLimits::Adaptive { ratio: 2.0 },
            max_iters: 100_000,
            randomized_order: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.ants == 0 {
            return bad("MMAS needs at least one ant".into());
        }
        if !(self.rho > 0.0 && self.rho < 1.0) {
            return bad(format!("evaporation rate must lie in (0, 1), got {}", self.rho));
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return bad(format!("alpha must be finite and >= 0, got {}", self.alpha));
        }
        if !(self.q_const > 0.0 && self.q_const.is_finite()) {
            return bad(format!("q_const must be positive, got {}", self.q_const));
        }
        if self.max_iters == 0 {
            return bad("max_iters must be >= 1".into());
        }
        match self.limits {
            TrailLimits::Adaptive { ratio } if !(ratio > 0.0 && ratio.is_finite()) => {
                bad(format!("trail ratio must be positive, got {ratio}"))
            }
            TrailLimits::Fixed { min, max } if !(min > 0.0 && min <= max && max.is_finite()) => {
                bad(format!("trail bounds need 0 < min <= max, got [{min}, {max}]"))
            }
            _ => Ok(()),
        }
    }
}

/// Summary of one colony iteration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IterationOutcome {
    pub iteration_best: f64,
    pub global_best: f64,
}

/// A colony whose trails persist between calls to [`MmasSolver::iterate`].
pub struct MmasSolver<'a> {
    inst: &'a QapInstance,
    params: MmasParams,
    rng: Rng,
    tau: Vec<f64>,
    tau_min: f64,
    tau_max: f64,
    initialized: bool,
    best: Option<(f64, Vec<usize>)>,
    iterations: u64,
    n_evals: u64,
}

impl<'a> MmasSolver<'a> {
    pub fn new(inst: &'a QapInstance, params: MmasParams, seed: u64) -> Result<Self> {
        params.validate()?;
        let n = inst.n();
        let (tau_min, tau_max) = match params.limits {
            TrailLimits::Fixed { min, max } => (min, max),
            // replaced after the first iteration
            TrailLimits::Adaptive { .. } => (1.0, 1.0),
        };
        Ok(Self {
            inst,
            params,
            rng: seed::rng(seed),
            tau: vec![1.0; n * n],
            tau_min,
            tau_max,
            initialized: false,
            best: None,
            iterations: 0,
            n_evals: 0,
        })
    }

    /// Trail matrix, row-major by facility.
    pub fn trails(&self) -> &[f64] {
        &self.tau
    }

    pub fn trail_bounds(&self) -> (f64, f64) {
        (self.tau_min, self.tau_max)
    }

    pub fn iterations(&self) -> u64 {
        self.iterations
    }

    pub fn best_cost(&self) -> Option<f64> {
        self.best.as_ref().map(|(c, _)| *c)
    }

    /// Runs every ant once, then updates the trails.
    pub fn iterate(&mut self) -> Result<IterationOutcome> {
        let n = self.inst.n();
        let mut order: Vec<usize> = (0..n).collect();
        let mut assignment = vec![0usize; n];
        let mut free = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        let mut iteration_best = f64::INFINITY;

        for _ in 0..self.params.ants {
            if self.params.randomized_order {
                order.shuffle(&mut self.rng);
            }
            free.clear();
            free.extend(0..n);
            for &facility in &order {
                let row = &self.tau[facility * n..(facility + 1) * n];
                weights.clear();
                weights.extend(free.iter().map(|&l| trail_weight(row[l], self.params.alpha)));
                let pick = sample(&weights, &mut self.rng)?;
                assignment[facility] = free.remove(pick);
            }
            let cost = self.inst.cost_unchecked(&assignment);
            if cost < iteration_best {
                iteration_best = cost;
            }
            if self.best.as_ref().is_none_or(|(b, _)| cost < *b) {
                self.best = Some((cost, assignment.clone()));
            }
        }
        self.iterations += 1;
        self.n_evals += self.params.ants as u64;
        self.update_trails();

        Ok(IterationOutcome {
            iteration_best,
            global_best: self.best_cost().unwrap_or(f64::INFINITY),
        })
    }

    fn update_trails(&mut self) {
        let n = self.inst.n();
        let Some((best_cost, best_assign)) = self.best.as_ref() else {
            return;
        };
        if let TrailLimits::Adaptive { ratio } = self.params.limits {
            if *best_cost > 0.0 {
                self.tau_max = 1.0 / (self.params.rho * best_cost);
            } else if !self.initialized {
                self.tau_max = 1.0 / self.params.rho;
            }
            self.tau_min = self.tau_max / (ratio * n as f64);
        }
        if !self.initialized {
            self.tau.fill(self.tau_max);
            self.initialized = true;
        }
        let keep = 1.0 - self.params.rho;
        for t in &mut self.tau {
            *t *= keep;
        }
        let deposit = if *best_cost > 0.0 {
            self.params.q_const / best_cost
        } else {
            self.tau_max
        };
        for (facility, &loc) in best_assign.iter().enumerate() {
            self.tau[facility * n + loc] += deposit;
        }
        for t in &mut self.tau {
            *t = t.clamp(self.tau_min, self.tau_max);
        }
    }

    fn record(&self, target: Option<f64>) -> RunRecord {
        let (best_cost, best) = self.best.clone().expect("at least one iteration ran");
        RunRecord {
            best_cost,
            best_perm: Permutation::new(best).expect("ants build permutations"),
            iterations: self.iterations,
            n_evals: self.n_evals,
            found_optimum: target.is_some_and(|t| best_cost <= t),
        }
    }
}

fn trail_weight(tau: f64, alpha: f64) -> f64 {
    if alpha == 1.0 {
        tau
    } else {
        tau.powf(alpha)
    }
}

/// Roulette-wheel draw; the first index whose cumulative weight exceeds the
/// draw wins.
fn sample(weights: &[f64], rng: &mut Rng) -> Result<usize> {
    let total: f64 = weights.iter().sum();
    if !(total > 0.0 && total.is_finite()) {
        return Err(Error::Numeric(format!(
            "ant construction has probability mass {total}"
        )));
    }
    let r = rng.random::<f64>() * total;
    let mut acc = 0.0;
    for (k, w) in weights.iter().enumerate() {
        acc += w;
        if r < acc {
            return Ok(k);
        }
    }
    Ok(weights.len() - 1)
}

/// Runs the colony until `target_cost` is reached or the iteration cap hits.
/// `n_evals = ants × iterations`.
pub fn mmas_run(
    inst: &QapInstance,
    params: &MmasParams,
    seed: u64,
    target_cost: Option<f64>,
) -> Result<RunRecord> {
    let mut solver = MmasSolver::new(inst, params.clone(), seed)?;
    loop {
        let out = solver.iterate()?;
        let reached = target_cost.is_some_and(|t| out.global_best <= t);
        if reached || solver.iterations >= params.max_iters {
            return Ok(solver.record(target_cost));
        }
    }
}
