//! Grover baseline arithmetic and shell statistics around the optimum.

use crate::error::{Error, Result};
use crate::perm::{self, perm_of, transposition_distance, LexPermutations, PermIndex};
use crate::quantum::WalkState;

/// Success probability of Grover search after `k` iterations with `m`
/// marked items among `n_items`: `sin²((2k+1)·asin(√(m/N)))`.
pub fn grover_success(n_items: u64, marked: u64, k: u64) -> Result<f64> {
    let theta = grover_angle(n_items, marked)?;
    Ok(((2 * k + 1) as f64 * theta).sin().powi(2))
}

fn grover_angle(n_items: u64, marked: u64) -> Result<f64> {
    if marked == 0 || marked > n_items {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= M <= N, got M = {marked}, N = {n_items}"
        )));
    }
    Ok((marked as f64 / n_items as f64).sqrt().asin())
}

/// Iteration counts needed to reach a target success probability.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroverIterations {
    /// Smallest integer `k` with success `>= target`.
    pub exact: u64,
    /// `(√N · asin(√target) - 1) / 2`, the small-angle estimate with one
    /// marked item.
    pub continuous: f64,
    /// `⌈continuous⌉`, floored at zero.
    pub continuous_ceil: u64,
}

pub fn grover_iterations(n_items: u64, marked: u64, target: f64) -> Result<GroverIterations> {
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "target probability must lie in (0, 1), got {target}"
        )));
    }
    let theta = grover_angle(n_items, marked)?;
    let goal = target.sqrt().asin();
    // (2k+1)θ >= asin(√target) while (2k+1)θ <= π/2
    let mut k = ((goal / theta - 1.0) / 2.0).ceil().max(0.0) as u64;
    while k > 0 && grover_success(n_items, marked, k - 1)? >= target {
        k -= 1;
    }
    while grover_success(n_items, marked, k)? < target {
        k += 1;
    }
    let continuous = ((n_items as f64).sqrt() * goal - 1.0) / 2.0;
    Ok(GroverIterations {
        exact: k,
        continuous,
        continuous_ceil: continuous.ceil().max(0.0) as u64,
    })
}

/// Probability mass per transposition-distance shell around a reference.
#[derive(Clone, Debug, PartialEq)]
pub struct ShellDistribution {
    /// `probs[k]`: total probability of assignments `k` swaps from the
    /// reference.
    pub probs: Vec<f64>,
    pub reference: PermIndex,
}

impl ShellDistribution {
    /// `Σ_k k · probs[k]`.
    pub fn expected_distance(&self) -> f64 {
        expected_internode_distance(self)
    }
}

/// Shell index of every rank relative to `reference`.
pub fn shell_labels(reference: PermIndex) -> Result<Vec<u8>> {
    let ref_perm = perm_of(reference);
    let n = reference.n();
    let mut labels = Vec::with_capacity(perm::factorial(n)? as usize);
    let ref_inv = ref_perm.inverse();
    let mut visited = vec![false; n];
    LexPermutations::new(n).for_each_slice(|p| {
        // cycles of p ∘ ref⁻¹
        visited.fill(false);
        let mut cycles = 0;
        for start in 0..n {
            if visited[start] {
                continue;
            }
            cycles += 1;
            let mut x = start;
            while !visited[x] {
                visited[x] = true;
                x = p[ref_inv.as_slice()[x]];
            }
        }
        labels.push((n - cycles) as u8);
    });
    Ok(labels)
}

pub fn shell_distribution(state: &WalkState, optimum: PermIndex) -> Result<ShellDistribution> {
    if state.n() != optimum.n() {
        return Err(Error::SizeMismatch {
            expected: state.n(),
            found: optimum.n(),
        });
    }
    let labels = shell_labels(optimum)?;
    let mut probs = vec![0.0; state.n()];
    for (p, &k) in state.probabilities().zip(&labels) {
        probs[k as usize] += p;
    }
    Ok(ShellDistribution {
        probs,
        reference: optimum,
    })
}

pub fn expected_internode_distance(dist: &ShellDistribution) -> f64 {
    dist.probs.iter().enumerate().map(|(k, p)| k as f64 * p).sum()
}

/// Transposition distance between two ranks of the same size.
pub fn rank_distance(a: PermIndex, b: PermIndex) -> Result<usize> {
    transposition_distance(&perm_of(a), &perm_of(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::stirling_shell_sizes;
    use crate::quantum::uniform_state;
    use proptest::prelude::*;

    #[test]
    fn grover_success_examples() {
        assert!((grover_success(120, 1, 0).unwrap() - 1.0 / 120.0).abs() < 1e-15);
        assert!((grover_success(4, 1, 1).unwrap() - 1.0).abs() < 1e-12);
        assert!(grover_success(3, 4, 0).is_err());
        let mut last = 0.0;
        for k in 0..8 {
            let s = grover_success(1000, 1, k).unwrap();
            assert!(s > last);
            last = s;
        }
    }

    #[test]
    fn grover_iteration_examples() {
        // direct search: sin²(3θ) = 0.073 < 0.1 <= sin²(5θ) = 0.195
        assert!(grover_success(120, 1, 1).unwrap() < 0.1);
        assert!(grover_success(120, 1, 2).unwrap() >= 0.1);
        assert_eq!(grover_iterations(120, 1, 0.1).unwrap().exact, 2);
        assert_eq!(grover_iterations(4, 1, 0.1).unwrap().exact, 0);
        for n_items in [120, 720, 5040, 40320] {
            let g = grover_iterations(n_items, 1, 0.1).unwrap();
            assert_eq!(g.exact, g.continuous_ceil, "N = {n_items}");
        }
        assert!(grover_iterations(120, 1, 1.0).is_err());
        assert!(grover_iterations(120, 0, 0.5).is_err());
    }

    #[test]
    fn uniform_shells_are_stirling_ratios() {
        for n in 1..=8 {
            let u = uniform_state(n).unwrap();
            let d = shell_distribution(&u, PermIndex::new(0, n).unwrap()).unwrap();
            let total = perm::factorial(n).unwrap() as f64;
            for (p, c) in d.probs.iter().zip(stirling_shell_sizes(n).unwrap()) {
                assert!((p - c as f64 / total).abs() <= 1e-12);
            }
        }
        let u = uniform_state(4).unwrap();
        let d = shell_distribution(&u, PermIndex::new(13, 4).unwrap()).unwrap();
        assert!((d.expected_distance() - 46.0 / 24.0).abs() < 1e-12);
    }

    #[test]
    fn basis_state_at_reference() {
        let r = PermIndex::new(77, 5).unwrap();
        let d = shell_distribution(&WalkState::basis(r).unwrap(), r).unwrap();
        assert_eq!(d.probs, vec![1.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(expected_internode_distance(&d), 0.0);
        assert!(shell_distribution(&uniform_state(4).unwrap(), r).is_err());
    }

    #[test]
    fn labels_agree_with_cycle_distance() {
        let r = PermIndex::new(301, 6).unwrap();
        let labels = shell_labels(r).unwrap();
        for (i, &k) in labels.iter().enumerate() {
            assert_eq!(k as usize, rank_distance(PermIndex::new(i as u64, 6).unwrap(), r).unwrap());
        }
    }

    proptest! {
        #[test]
        fn grover_minimality(n_items in 2u64..=1_000_000, marked in 1u64..=10, target in 0.001f64..0.5) {
            prop_assume!(marked <= n_items);
            let g = grover_iterations(n_items, marked, target).unwrap();
            prop_assert!(grover_success(n_items, marked, g.exact).unwrap() >= target);
            if g.exact > 0 {
                prop_assert!(grover_success(n_items, marked, g.exact - 1).unwrap() < target);
            }
        }

        #[test]
        fn expected_distance_in_range(amps in proptest::collection::vec(-1.0f64..1.0, 120)) {
            let norm: f64 = amps.iter().map(|a| a * a).sum::<f64>().sqrt();
            prop_assume!(norm > 1e-6);
            let state = WalkState::from_amplitudes(
                5,
                amps.iter().map(|a| num_complex::Complex64::new(a / norm, 0.0)).collect(),
            ).unwrap();
            let d = shell_distribution(&state, PermIndex::new(0, 5).unwrap()).unwrap();
            prop_assert!((d.probs.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            prop_assert!(d.probs.iter().all(|&p| p >= 0.0));
            let e = d.expected_distance();
            prop_assert!((0.0..=4.0).contains(&e));
        }
    }
}
