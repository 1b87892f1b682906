use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{
    apply_phase, expectation, osp, uniform_state, KrylovPropagator, TranspositionGraph, WalkState,
    DEFAULT_WALK_TOL,
};
use crate::error::{Error, Result};
use crate::instance::{normalize_qualities, QapInstance, QualityVector};

/// The three schedule parameters plus the depth.
///
/// Layer `i` of `p` uses `γ_i = (β + (1-β)·i/(p-1))·γ` and
/// `t_i = (1 - (1-β)·i/(p-1))·t`, so phases ramp up from `βγ` to `γ` while
/// walk times ramp down from `t` to `βt`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RampParams {
    pub gamma: f64,
    pub t: f64,
    pub beta: f64,
    pub p: usize,
}

impl RampParams {
    pub fn new(gamma: f64, t: f64, beta: f64, p: usize) -> Result<Self> {
        let params = Self { gamma, t, beta, p };
        params.validate()?;
        Ok(params)
    }

    /// Requires `p >= 1`, `t > 0`, `0 < β <= 1` and a finite `γ`.
    pub fn validate(&self) -> Result<()> {
        if self.p == 0 {
            return Err(Error::InvalidParameter("depth p must be >= 1".into()));
        }
        if !(self.t > 0.0 && self.t.is_finite()) {
            return Err(Error::InvalidParameter(format!("walk time t must be positive, got {}", self.t)));
        }
        if !(self.beta > 0.0 && self.beta <= 1.0) {
            return Err(Error::InvalidParameter(format!("ramp ratio beta must lie in (0, 1], got {}", self.beta)));
        }
        if !self.gamma.is_finite() {
            return Err(Error::InvalidParameter(format!("gamma must be finite, got {}", self.gamma)));
        }
        Ok(())
    }
}

/// Per-layer `(γ_i, t_i)`. A single layer uses the `i = 0` endpoint
/// `(βγ, t)`; `p = 0` gives an empty schedule.
pub fn ramp_schedule(params: &RampParams) -> (Vec<f64>, Vec<f64>) {
    let RampParams { gamma, t, beta, p } = *params;
    let frac = |i: usize| if p > 1 { i as f64 / (p - 1) as f64 } else { 0.0 };
    let gammas = (0..p).map(|i| (beta + (1.0 - beta) * frac(i)) * gamma).collect();
    let times = (0..p).map(|i| (1.0 - (1.0 - beta) * frac(i)) * t).collect();
    (gammas, times)
}

/// Final state and its observables.
#[derive(Clone, Debug)]
pub struct CircuitOutput {
    pub state: WalkState,
    /// Probability of measuring any global minimizer.
    pub osp: f64,
    /// Expected raw (unnormalised) cost.
    pub expectation: f64,
}

/// A prepared simulator for one instance: its cost landscape, the
/// standardised phases, and the mixing graph.
///
/// Phases are `q̃ / σ(q̃)` where `q̃` maps the costs onto `[0, 2π]`; the
/// result is invariant under positive affine transforms of the costs.
#[derive(Clone, Debug)]
pub struct NvQwoa {
    quality: Arc<QualityVector>,
    phases: Vec<f64>,
    graph: Arc<TranspositionGraph>,
    tol: f64,
}

impl NvQwoa {
    /// Enumerates the instance's costs and builds the mixing graph.
    pub fn new(inst: &QapInstance) -> Result<Self> {
        let quality = inst.quality_vector()?;
        let graph = TranspositionGraph::new(inst.n())?;
        Self::from_parts(Arc::new(quality), Arc::new(graph))
    }

    /// Reuses an existing cost vector and graph (graphs are shared across
    /// instances of the same size).
    pub fn from_parts(quality: Arc<QualityVector>, graph: Arc<TranspositionGraph>) -> Result<Self> {
        if quality.n() != graph.n() {
            return Err(Error::SizeMismatch {
                expected: graph.n(),
                found: quality.n(),
            });
        }
        let normalized = normalize_qualities(&quality)?;
        let len = normalized.len() as f64;
        let mean = normalized.iter().sum::<f64>() / len;
        let sigma = (normalized.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / len).sqrt();
        let phases = normalized.iter().map(|v| v / sigma).collect();
        Ok(Self {
            quality,
            phases,
            graph,
            tol: DEFAULT_WALK_TOL,
        })
    }

    pub fn with_walk_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn quality(&self) -> &QualityVector {
        &self.quality
    }

    pub fn graph(&self) -> &TranspositionGraph {
        &self.graph
    }

    /// The standardised phase vector fed to the phase unitary.
    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    /// Runs the ramped circuit from the uniform state. `p = 0` is accepted
    /// and returns the uniform state.
    pub fn run(&self, params: &RampParams) -> Result<CircuitOutput> {
        if params.p > 0 {
            params.validate()?;
        }
        let (gammas, times) = ramp_schedule(params);
        self.run_schedule(&gammas, &times)
    }

    /// Runs explicit per-layer parameters: phase `e^{+i·gammas[i]·q̃}`, then
    /// walk for `times[i]`.
    pub fn run_schedule(&self, gammas: &[f64], times: &[f64]) -> Result<CircuitOutput> {
        if gammas.len() != times.len() {
            return Err(Error::InvalidParameter(format!(
                "{} phase steps but {} walk steps",
                gammas.len(),
                times.len()
            )));
        }
        let mut state = uniform_state(self.n())?;
        let mut walker = KrylovPropagator::new(&self.graph);
        for (&g, &t) in gammas.iter().zip(times) {
            apply_phase(&mut state, &self.phases, -g)?;
            walker.apply(state.amplitudes_mut(), t, self.tol)?;
        }
        Ok(self.observe(state))
    }

    pub fn observe(&self, state: WalkState) -> CircuitOutput {
        CircuitOutput {
            osp: osp(&state, self.quality.minimizers()),
            expectation: expectation(&state, self.quality.values()),
            state,
        }
    }
}

/// One-shot convenience: prepare the instance and run `params`.
pub fn run_circuit(inst: &QapInstance, params: &RampParams) -> Result<CircuitOutput> {
    NvQwoa::new(inst)?.run(params)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_examples() {
        let (g, t) = ramp_schedule(&RampParams::new(1.0, 0.4, 0.5, 2).unwrap());
        assert_eq!(g, vec![0.5, 1.0]);
        assert_eq!(t, vec![0.4, 0.2]);
        let (g, t) = ramp_schedule(&RampParams::new(1.6, 0.3, 0.25, 1).unwrap());
        assert_eq!(g, vec![0.4]);
        assert_eq!(t, vec![0.3]);
        let (g, t) = ramp_schedule(&RampParams { gamma: 1.0, t: 1.0, beta: 0.5, p: 0 });
        assert!(g.is_empty() && t.is_empty());
    }

    #[test]
    fn schedule_monotonicity() {
        for p in 1..20 {
            for &beta in &[0.05, 0.3, 0.99, 1.0] {
                let (g, t) = ramp_schedule(&RampParams::new(1.3, 0.2, beta, p).unwrap());
                assert!(g.windows(2).all(|w| w[0] <= w[1]));
                assert!(t.windows(2).all(|w| w[0] >= w[1]));
                assert!((g[p - 1] - if p > 1 { 1.3 } else { beta * 1.3 }).abs() < 1e-12);
                assert!((t[p - 1] - if p > 1 { beta * 0.2 } else { 0.2 }).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn param_validation() {
        assert!(RampParams::new(1.0, 0.0, 0.5, 3).is_err());
        assert!(RampParams::new(1.0, 0.1, 0.0, 3).is_err());
        assert!(RampParams::new(1.0, 0.1, 1.5, 3).is_err());
        assert!(RampParams::new(1.0, 0.1, 0.5, 0).is_err());
        assert!(RampParams::new(f64::NAN, 0.1, 0.5, 1).is_err());
    }

    #[test]
    fn empty_circuit_is_uniform() {
        let inst = QapInstance::generate(5, 3, 20.0).unwrap();
        let sim = NvQwoa::new(&inst).unwrap();
        let out = sim.run(&RampParams { gamma: 1.0, t: 0.3, beta: 0.4, p: 0 }).unwrap();
        let q = sim.quality();
        assert!((out.osp - q.minimizers().len() as f64 / 120.0).abs() < 1e-15);
        assert!((out.expectation - q.mean()).abs() < 1e-9 * q.mean());
    }

    #[test]
    fn standardised_phases() {
        let inst = QapInstance::generate(5, 8, 20.0).unwrap();
        let sim = NvQwoa::new(&inst).unwrap();
        let q = sim.quality();
        for (phase, v) in sim.phases().iter().zip(q.values()) {
            assert!((phase - (v - q.min()) / q.sigma()).abs() < 1e-9);
        }
    }

    #[test]
    fn constant_costs_are_rejected() {
        let g = QapInstance::generate(4, 0, 20.0).unwrap();
        let dist: Vec<f64> = (0..16).map(|k| g.dist(k / 4, k % 4)).collect();
        let inst = QapInstance::from_matrices(4, vec![0.0; 16], dist).unwrap();
        assert!(matches!(NvQwoa::new(&inst), Err(Error::Degenerate)));
    }
}
