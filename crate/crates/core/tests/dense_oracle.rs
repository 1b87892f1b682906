//! Checks the matrix-free simulator against dense linear algebra built from
//! first principles: permutations listed by recursion, adjacency by "differ
//! in exactly two positions", and `e^{-itA}` by eigendecomposition.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qapwalk::quantum::{apply_walk, uniform_state, NvQwoa, RampParams, TranspositionGraph, WalkState};
use qapwalk::QapInstance;

/// All permutations of `0..n` in lexicographic order.
fn lex_perms(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, left: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for k in 0..left.len() {
            let v = left.remove(k);
            prefix.push(v);
            rec(prefix, left, out);
            prefix.pop();
            left.insert(k, v);
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut (0..n).collect(), &mut out);
    out
}

fn dense_adjacency(n: usize) -> DMatrix<f64> {
    let perms = lex_perms(n);
    let m = perms.len();
    DMatrix::from_fn(m, m, |r, c| {
        let differing = perms[r].iter().zip(&perms[c]).filter(|(a, b)| a != b).count();
        if differing == 2 { 1.0 } else { 0.0 }
    })
}

struct DenseWalk {
    eig: SymmetricEigen<f64, nalgebra::Dyn>,
}

impl DenseWalk {
    fn new(n: usize) -> Self {
        Self {
            eig: SymmetricEigen::new(dense_adjacency(n)),
        }
    }

    /// `e^{-itA} psi` via `V e^{-itΛ} Vᵀ psi`.
    fn apply(&self, psi: &[Complex64], t: f64) -> Vec<Complex64> {
        let v = &self.eig.eigenvectors;
        let m = psi.len();
        let coeffs: Vec<Complex64> = (0..m)
            .map(|l| {
                let proj: Complex64 = (0..m).map(|r| psi[r] * v[(r, l)]).sum();
                proj * Complex64::from_polar(1.0, -t * self.eig.eigenvalues[l])
            })
            .collect();
        (0..m).map(|r| (0..m).map(|l| coeffs[l] * v[(r, l)]).sum()).collect()
    }
}

fn random_state(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Complex64> {
    let raw: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    raw.into_iter().map(|z| z / norm).collect()
}

#[test]
fn adjacency_is_the_simulator_graph() {
    for n in 2..=5 {
        let dense = dense_adjacency(n);
        let graph = TranspositionGraph::new(n).unwrap();
        for r in 0..dense.nrows() {
            let mut expected: Vec<u32> = (0..dense.ncols()).filter(|&c| dense[(r, c)] == 1.0).map(|c| c as u32).collect();
            let mut got = graph.neighbors(r).to_vec();
            expected.sort_unstable();
            got.sort_unstable();
            assert_eq!(got, expected, "n = {n}, row {r}");
        }
    }
}

#[test]
fn walk_matches_eigendecomposition() {
    let dense = DenseWalk::new(4);
    let graph = TranspositionGraph::new(4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let psi = random_state(&mut rng, 24);
        let t = rng.random_range(-3.0..3.0);
        let mut state = WalkState::from_amplitudes(4, psi.clone()).unwrap();
        apply_walk(&mut state, &graph, t, 1e-12).unwrap();
        let expected = dense.apply(&psi, t);
        for (a, b) in state.amplitudes().iter().zip(&expected) {
            assert!((a - b).norm() < 1e-8, "t = {t}: {a} vs {b}");
        }
    }
}

#[test]
fn walk_matches_eigendecomposition_at_n5() {
    let dense = DenseWalk::new(5);
    let graph = TranspositionGraph::new(5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for t in [0.05, 0.7, 4.0] {
        let psi = random_state(&mut rng, 120);
        let mut state = WalkState::from_amplitudes(5, psi.clone()).unwrap();
        apply_walk(&mut state, &graph, t, 1e-12).unwrap();
        for (a, b) in state.amplitudes().iter().zip(dense.apply(&psi, t)) {
            assert!((a - b).norm() < 1e-8);
        }
    }
}

#[test]
fn uniform_state_picks_up_a_global_phase() {
    for n in 3..=6 {
        let graph = TranspositionGraph::new(n).unwrap();
        let degree = (n * (n - 1) / 2) as f64;
        let mut s = uniform_state(n).unwrap();
        let before = s.clone();
        apply_walk(&mut s, &graph, 0.83, 1e-12).unwrap();
        let phase = Complex64::from_polar(1.0, -0.83 * degree);
        for (a, b) in s.amplitudes().iter().zip(before.amplitudes()) {
            assert!((a - b * phase).norm() < 1e-10);
        }
    }
}

/// Dense replica of the ramped circuit with phases `(q - min) / σ(q)`.
fn dense_circuit(inst: &QapInstance, params: &RampParams) -> Vec<Complex64> {
    let n = inst.n();
    let perms = lex_perms(n);
    let costs: Vec<f64> = perms
        .iter()
        .map(|p| {
            let mut c = 0.0;
            for i in 0..n {
                for j in 0..n {
                    c += inst.flow(i, j) * inst.dist(p[i], p[j]);
                }
            }
            c
        })
        .collect();
    let m = costs.len() as f64;
    let min = costs.iter().cloned().fold(f64::INFINITY, f64::min);
    let mean = costs.iter().sum::<f64>() / m;
    let sigma = (costs.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / m).sqrt();
    let phases: Vec<f64> = costs.iter().map(|c| (c - min) / sigma).collect();

    let walk = DenseWalk::new(n);
    let mut psi = vec![Complex64::new(1.0 / m.sqrt(), 0.0); costs.len()];
    let p = params.p;
    for i in 0..p {
        let frac = if p > 1 { i as f64 / (p - 1) as f64 } else { 0.0 };
        let gamma = (params.beta + (1.0 - params.beta) * frac) * params.gamma;
        let t = (1.0 - (1.0 - params.beta) * frac) * params.t;
        for (a, ph) in psi.iter_mut().zip(&phases) {
            *a *= Complex64::from_polar(1.0, gamma * ph);
        }
        psi = walk.apply(&psi, t);
    }
    psi
}

#[test]
fn full_circuit_matches_dense_reference() {
    for (seed, params) in [
        (1, RampParams::new(1.2, 0.5, 0.4, 1).unwrap()),
        (2, RampParams::new(1.5, 0.35, 0.45, 3).unwrap()),
        (3, RampParams::new(0.7, 0.9, 0.2, 6).unwrap()),
    ] {
        let inst = QapInstance::generate(4, seed, 20.0).unwrap();
        let out = NvQwoa::new(&inst).unwrap().run(&params).unwrap();
        let expected = dense_circuit(&inst, &params);
        for (a, b) in out.state.amplitudes().iter().zip(&expected) {
            assert!((a - b).norm() < 1e-9, "{params:?}");
        }
    }
}

#[test]
fn circuit_preserves_norm_up_to_n7() {
    for (n, p) in [(5, 12), (6, 8), (7, 4)] {
        let inst = QapInstance::generate(n, 40 + n as u64, 20.0).unwrap();
        let out = NvQwoa::new(&inst)
            .unwrap()
            .run(&RampParams::new(1.5, 3.5 / (n * (n - 1) / 2) as f64, 0.35, p).unwrap())
            .unwrap();
        assert!((out.state.norm_sqr() - 1.0).abs() < 1e-9, "n = {n}");
    }
}

#[test]
fn osp_is_invariant_under_positive_affine_costs() {
    let inst = QapInstance::generate(5, 21, 20.0).unwrap();
    let n = inst.n();
    let flow: Vec<f64> = (0..n * n).map(|k| 3.5 * inst.flow(k / n, k % n)).collect();
    let dist: Vec<f64> = (0..n * n).map(|k| inst.dist(k / n, k % n)).collect();
    // scaling the flow scales every cost; phases are then unchanged
    let scaled = QapInstance::from_matrices(n, flow, dist).unwrap();
    let params = RampParams::new(1.3, 0.3, 0.4, 4).unwrap();
    let a = NvQwoa::new(&inst).unwrap().run(&params).unwrap();
    let b = NvQwoa::new(&scaled).unwrap().run(&params).unwrap();
    assert!((a.osp - b.osp).abs() < 1e-9);
    assert!((3.5 * a.expectation - b.expectation).abs() < 1e-9 * b.expectation);
}

#[test]
fn relabelling_locations_permutes_the_output() {
    use qapwalk::perm::{index_of, perm_of, PermIndex, Permutation};
    let n = 5;
    let inst = QapInstance::generate(n, 33, 20.0).unwrap();
    let tau = [3usize, 0, 4, 1, 2];
    let flow: Vec<f64> = (0..n * n).map(|k| inst.flow(k / n, k % n)).collect();
    let dist: Vec<f64> = (0..n * n).map(|k| inst.dist(tau[k / n], tau[k % n])).collect();
    let relabelled = QapInstance::from_matrices(n, flow, dist).unwrap();
    let params = RampParams::new(1.4, 0.33, 0.45, 3).unwrap();
    let a = NvQwoa::new(&inst).unwrap().run(&params).unwrap();
    let b = NvQwoa::new(&relabelled).unwrap().run(&params).unwrap();
    assert!((a.osp - b.osp).abs() < 1e-10);
    for r in 0..120u64 {
        let pi = perm_of(PermIndex::new(r, n).unwrap());
        let moved = Permutation::new(pi.as_slice().iter().map(|&l| tau[l]).collect()).unwrap();
        let (pb, pa) = (b.state.probability(r as usize), a.state.probability(index_of(&moved).as_usize()));
        assert!((pa - pb).abs() < 1e-10);
    }
}
