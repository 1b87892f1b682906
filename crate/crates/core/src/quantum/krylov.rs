//! Action of `e^{-itA}` on a vector by Lanczos projection.
//!
//! For a substep `τ` the state is projected onto the Krylov space
//! `span{ψ, Aψ, …, A^{m-1}ψ}`, where `A` is tridiagonal (`T_m`) in the
//! Lanczos basis `V_m`, and
//!
//! ```text
//! e^{-iτA} ψ ≈ ‖ψ‖ · V_m · e^{-iτT_m} e_1
//! ```
//!
//! The dimension grows until the a-posteriori estimate
//! `‖ψ‖ · β_m · |[e^{-iτT_m} e_1]_m|` falls below the substep's share of the
//! tolerance. Long times are split into substeps with `|τ| · ‖A‖ ≤ 10`
//! (`‖A‖ ≤ n(n-1)/2` for the transposition graph); a substep that does not
//! converge within the dimension budget is halved and retried.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::graph::TranspositionGraph;
use crate::error::{Error, Result};

const MAX_KRYLOV_DIM: usize = 48;
const STEP_NORM: f64 = 10.0;
const MAX_HALVINGS: u32 = 12;

/// Work done by one call to [`KrylovPropagator::apply`].
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct WalkStats {
    pub substeps: usize,
    pub matvecs: usize,
    /// Sum of per-substep error estimates (2-norm).
    pub error_estimate: f64,
}

/// Reusable Lanczos workspace bound to one graph.
pub struct KrylovPropagator<'g> {
    graph: &'g TranspositionGraph,
    basis: Vec<Vec<Complex64>>,
    work: Vec<Complex64>,
    alphas: Vec<f64>,
    betas: Vec<f64>,
}

enum Substep {
    Done { error: f64, matvecs: usize },
    NotConverged { error: f64, matvecs: usize },
}

impl<'g> KrylovPropagator<'g> {
    pub fn new(graph: &'g TranspositionGraph) -> Self {
        Self {
            graph,
            basis: Vec::new(),
            work: vec![Complex64::default(); graph.dim()],
            alphas: Vec::with_capacity(MAX_KRYLOV_DIM),
            betas: Vec::with_capacity(MAX_KRYLOV_DIM),
        }
    }

    /// `psi ← e^{-itA} psi` with estimated 2-norm error at most `tol`.
    pub fn apply(&mut self, psi: &mut [Complex64], t: f64, tol: f64) -> Result<WalkStats> {
        if psi.len() != self.graph.dim() {
            return Err(Error::SizeMismatch {
                expected: self.graph.dim(),
                found: psi.len(),
            });
        }
        if !t.is_finite() || !(tol > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "walk time must be finite and tol positive (t = {t}, tol = {tol})"
            )));
        }
        let mut stats = WalkStats::default();
        let degree = self.graph.degree() as f64;
        if t == 0.0 || degree == 0.0 {
            return Ok(stats);
        }

        let total = t.abs();
        let sign = t.signum();
        let mut step = total.min(STEP_NORM / degree);
        let mut done = 0.0;
        let mut halvings = 0;
        while done < total {
            let tau = step.min(total - done);
            let share = tol * tau / total;
            match self.substep(psi, sign * tau, share) {
                Substep::Done { error, matvecs } => {
                    done += tau;
                    stats.substeps += 1;
                    stats.matvecs += matvecs;
                    stats.error_estimate += error;
                }
                Substep::NotConverged { error, matvecs } => {
                    stats.matvecs += matvecs;
                    halvings += 1;
                    if halvings > MAX_HALVINGS {
                        return Err(Error::Numeric(format!(
                            "Krylov propagation did not converge: residual estimate {error:.3e} \
                             exceeds {share:.3e} at substep {tau:.3e}"
                        )));
                    }
                    step /= 2.0;
                }
            }
        }
        Ok(stats)
    }

    fn substep(&mut self, psi: &mut [Complex64], tau: f64, tol: f64) -> Substep {
        let beta0 = norm(psi);
        if beta0 == 0.0 {
            return Substep::Done {
                error: 0.0,
                matvecs: 0,
            };
        }
        let dim = psi.len();
        if self.basis.is_empty() {
            self.basis.push(vec![Complex64::default(); dim]);
        }
        for (b, p) in self.basis[0].iter_mut().zip(psi.iter()) {
            *b = p / beta0;
        }
        self.alphas.clear();
        self.betas.clear();
        // below this the Krylov space is invariant and the projection exact
        let breakdown = 1e-12 * self.graph.degree() as f64;
        let mut last_error = f64::INFINITY;

        for j in 0..MAX_KRYLOV_DIM {
            self.graph.apply(&self.basis[j], &mut self.work);
            if j > 0 {
                let b = self.betas[j - 1];
                for (w, v) in self.work.iter_mut().zip(&self.basis[j - 1]) {
                    *w -= v * b;
                }
            }
            let alpha: f64 = self.basis[j]
                .iter()
                .zip(&self.work)
                .map(|(v, w)| (v.conj() * w).re)
                .sum();
            for (w, v) in self.work.iter_mut().zip(&self.basis[j]) {
                *w -= v * alpha;
            }
            let beta = norm(&self.work);
            self.alphas.push(alpha);

            let y = expm_tridiagonal_first_column(&self.alphas, &self.betas, tau);
            let error = beta0 * beta * y[j].norm();
            if beta <= breakdown || error <= tol {
                self.combine(psi, &y, beta0);
                return Substep::Done {
                    error,
                    matvecs: j + 1,
                };
            }
            last_error = error;
            self.betas.push(beta);
            if self.basis.len() <= j + 1 {
                self.basis.push(vec![Complex64::default(); dim]);
            }
            for (b, w) in self.basis[j + 1].iter_mut().zip(&self.work) {
                *b = w / beta;
            }
        }
        Substep::NotConverged {
            error: last_error,
            matvecs: MAX_KRYLOV_DIM,
        }
    }

    fn combine(&self, psi: &mut [Complex64], y: &[Complex64], beta0: f64) {
        psi.fill(Complex64::default());
        for (coef, v) in y.iter().zip(&self.basis) {
            let c = coef * beta0;
            for (p, b) in psi.iter_mut().zip(v) {
                *p += b * c;
            }
        }
    }
}

/// `e^{-iτT} e_1` for the symmetric tridiagonal `T` with diagonal `alphas`
/// and off-diagonal `betas`.
fn expm_tridiagonal_first_column(alphas: &[f64], betas: &[f64], tau: f64) -> Vec<Complex64> {
    let m = alphas.len();
    let t = DMatrix::from_fn(m, m, |r, c| {
        if r == c {
            alphas[r]
        } else if r + 1 == c {
            betas[r]
        } else if c + 1 == r {
            betas[c]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(t);
    let q = &eig.eigenvectors;
    (0..m)
        .map(|k| {
            (0..m)
                .map(|l| {
                    let phase = Complex64::from_polar(1.0, -tau * eig.eigenvalues[l]);
                    phase * (q[(k, l)] * q[(0, l)])
                })
                .sum()
        })
        .collect()
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
