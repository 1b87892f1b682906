//! Statevector simulation of the non-variational quantum walk optimiser in
//! the `n!`-dimensional permutation basis.
//!
//! Basis state `r` is the assignment `perm_of(r)`. A layer applies the
//! diagonal phase `e^{+iγ_i q̃}` and then the continuous-time walk
//! `e^{-it_i A}` on the transposition graph. The uniform start state is the
//! top eigenvector of `A`, so with `γ, t > 0` this pairing drives amplitude
//! toward low costs.

mod circuit;
mod graph;
mod krylov;

pub use circuit::{ramp_schedule, run_circuit, CircuitOutput, NvQwoa, RampParams};
pub use graph::TranspositionGraph;
pub use krylov::{KrylovPropagator, WalkStats};

use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::perm::{self, PermIndex};

/// Largest `n` the simulator accepts (3.6M amplitudes and a 45-wide
/// neighbour table at `n = 10`).
pub const MAX_SIM_N: usize = 10;

/// Default Krylov tolerance for [`apply_walk`].
pub const DEFAULT_WALK_TOL: f64 = 1e-10;

/// Complex amplitudes indexed by permutation rank.
#[derive(Clone, Debug, PartialEq)]
pub struct WalkState {
    n: usize,
    amps: Vec<Complex64>,
}

impl WalkState {
    /// Wraps raw amplitudes; the length must be `n!`. Normalisation is the
    /// caller's responsibility.
    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        let dim = perm::factorial(n)? as usize;
        if amps.len() != dim {
            return Err(Error::InvalidParameter(format!(
                "{} amplitudes for n = {n}, expected {dim}",
                amps.len()
            )));
        }
        Ok(Self { n, amps })
    }

    /// The computational basis state `|r⟩`.
    pub fn basis(idx: PermIndex) -> Result<Self> {
        let n = idx.n();
        check_cap(n)?;
        let mut amps = vec![Complex64::default(); perm::factorial(n)? as usize];
        amps[idx.as_usize()] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probability(&self, rank: usize) -> f64 {
        self.amps[rank].norm_sqr()
    }

    pub fn probabilities(&self) -> impl Iterator<Item = f64> + '_ {
        self.amps.iter().map(|a| a.norm_sqr())
    }

    /// Writes the amplitudes in rank order as little-endian `f64` pairs
    /// `(re, im)`.
    pub fn write_snapshot(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut buf = Vec::with_capacity(self.amps.len() * 16);
        for a in &self.amps {
            buf.extend_from_slice(&a.re.to_le_bytes());
            buf.extend_from_slice(&a.im.to_le_bytes());
        }
        std::fs::File::create(path)?.write_all(&buf)?;
        Ok(())
    }

    pub fn read_snapshot(path: impl AsRef<Path>, n: usize) -> Result<Self> {
        let mut buf = Vec::new();
        std::fs::File::open(path)?.read_to_end(&mut buf)?;
        if buf.len() % 16 != 0 {
            return Err(Error::InvalidParameter(format!(
                "snapshot length {} is not a multiple of 16 bytes",
                buf.len()
            )));
        }
        let amps = buf
            .chunks_exact(16)
            .map(|c| {
                let re = f64::from_le_bytes(c[..8].try_into().unwrap());
                let im = f64::from_le_bytes(c[8..].try_into().unwrap());
                Complex64::new(re, im)
            })
            .collect();
        Self::from_amplitudes(n, amps)
    }
}

fn check_cap(n: usize) -> Result<()> {
    if n == 0 || n > MAX_SIM_N {
        return Err(Error::TooLarge { n, cap: MAX_SIM_N });
    }
    Ok(())
}

/// Equal superposition `|s⟩` over all `n!` assignments.
pub fn uniform_state(n: usize) -> Result<WalkState> {
    check_cap(n)?;
    let dim = perm::factorial(n)? as usize;
    let a = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
    Ok(WalkState {
        n,
        amps: vec![a; dim],
    })
}

/// `amps[r] ← amps[r] · e^{-iγ q[r]}`.
pub fn apply_phase(state: &mut WalkState, q_scaled: &[f64], gamma: f64) -> Result<()> {
    if q_scaled.len() != state.amps.len() {
        return Err(Error::InvalidParameter(format!(
            "{} phase entries for a state of dimension {}",
            q_scaled.len(),
            state.amps.len()
        )));
    }
    if gamma == 0.0 {
        return Ok(());
    }
    for (a, &q) in state.amps.iter_mut().zip(q_scaled) {
        *a *= Complex64::from_polar(1.0, -gamma * q);
    }
    Ok(())
}

/// `state ← e^{-itA} state` on the transposition graph.
pub fn apply_walk(state: &mut WalkState, graph: &TranspositionGraph, t: f64, tol: f64) -> Result<WalkStats> {
    if graph.n() != state.n {
        return Err(Error::SizeMismatch {
            expected: graph.n(),
            found: state.n,
        });
    }
    KrylovPropagator::new(graph).apply(&mut state.amps, t, tol)
}

/// Total probability on the given ranks (the optimal-solution probability
/// when `minimizers` is the optimum set).
pub fn osp(state: &WalkState, minimizers: &[usize]) -> f64 {
    minimizers.iter().map(|&r| state.probability(r)).sum()
}

/// `Σ_r cost[r] · |amps[r]|²`.
pub fn expectation(state: &WalkState, costs: &[f64]) -> f64 {
    state
        .amps
        .iter()
        .zip(costs)
        .map(|(a, c)| a.norm_sqr() * c)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_state_contract() {
        let s = uniform_state(5).unwrap();
        assert_eq!(s.dim(), 120);
        let a = 1.0 / 120f64.sqrt();
        assert!(s.amplitudes().iter().all(|z| (z.re - a).abs() < 1e-15 && z.im == 0.0));
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        assert!((s.probability(17) - 1.0 / 120.0).abs() < 1e-15);
        assert!(uniform_state(MAX_SIM_N + 1).is_err());
    }

    #[test]
    fn phase_is_diagonal_unitary() {
        let mut s = uniform_state(4).unwrap();
        let q: Vec<f64> = (0..24).map(|i| (i as f64).sqrt()).collect();
        let before = s.clone();
        apply_phase(&mut s, &q, 0.0).unwrap();
        assert_eq!(s, before);
        apply_phase(&mut s, &q, 1.7).unwrap();
        for (a, b) in s.probabilities().zip(before.probabilities()) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!(apply_phase(&mut s, &q[..5], 1.0).is_err());
    }

    #[test]
    fn constant_shift_is_a_global_phase() {
        let g = TranspositionGraph::new(4).unwrap();
        let q: Vec<f64> = (0..24).map(|i| ((i * 7) % 11) as f64 * 0.3).collect();
        let shifted: Vec<f64> = q.iter().map(|v| v + 2.5).collect();
        let mut a = uniform_state(4).unwrap();
        let mut b = uniform_state(4).unwrap();
        for s in [(&mut a, &q), (&mut b, &shifted)] {
            apply_phase(s.0, s.1, 0.8).unwrap();
            apply_walk(s.0, &g, 0.3, 1e-12).unwrap();
            apply_phase(s.0, s.1, 1.1).unwrap();
        }
        let phase = Complex64::from_polar(1.0, -(0.8 + 1.1) * 2.5);
        for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
            assert!((x * phase - y).norm() < 1e-10);
        }
    }

    #[test]
    fn observables_on_simple_states() {
        let costs: Vec<f64> = (0..24).map(|i| 10.0 + i as f64).collect();
        let u = uniform_state(4).unwrap();
        assert!((osp(&u, &[0]) - 1.0 / 24.0).abs() < 1e-15);
        assert!((expectation(&u, &costs) - 21.5).abs() < 1e-12);
        let b = WalkState::basis(PermIndex::new(5, 4).unwrap()).unwrap();
        assert_eq!(osp(&b, &[5]), 1.0);
        assert_eq!(osp(&b, &[0]), 0.0);
        assert_eq!(expectation(&b, &costs), 15.0);
    }

    #[test]
    fn snapshot_round_trip() {
        let g = TranspositionGraph::new(4).unwrap();
        let mut s = uniform_state(4).unwrap();
        apply_phase(&mut s, &(0..24).map(|i| i as f64).collect::<Vec<_>>(), 0.4).unwrap();
        apply_walk(&mut s, &g, 0.2, 1e-10).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("state.bin");
        s.write_snapshot(&path).unwrap();
        assert_eq!(std::fs::metadata(&path).unwrap().len(), 24 * 16);
        let bytes = std::fs::read(&path).unwrap();
        assert_eq!(&bytes[..8], &s.amplitudes()[0].re.to_le_bytes());
        assert_eq!(WalkState::read_snapshot(&path, 4).unwrap(), s);
        assert!(WalkState::read_snapshot(&path, 5).is_err());
    }
}
