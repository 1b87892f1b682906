//! Derivative-free tuning of the ramp parameters `(γ, t, β)`.

use std::cell::RefCell;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quantum::{NvQwoa, RampParams};

/// Nelder-Mead settings. Termination needs both the vertex spread (`x_tol`,
/// max-norm from the best vertex) and the value spread (`f_tol`) to be
/// small, or the evaluation budget to run out.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplexConfig {
    pub x_tol: f64,
    pub f_tol: f64,
    pub max_evals: usize,
    pub reflection: f64,
    pub expansion: f64,
    pub contraction: f64,
    pub shrink: f64,
    /// Initial vertex offset as a fraction of each coordinate.
    pub initial_step: f64,
    /// Smallest absolute initial offset.
    pub initial_step_floor: f64,
}

impl Default for SimplexConfig {
    fn default() -> Self {
        Self {
            x_tol: 1e-3,
            f_tol: 1e-4,
            max_evals: 500,
            reflection: 1.0,
            expansion: 2.0,
            contraction: 0.5,
            shrink: 0.5,
            initial_step: 0.05,
            initial_step_floor: 0.02,
        }
    }
}

impl SimplexConfig {
    pub fn validate(&self, dim: usize) -> Result<()> {
        if !(self.x_tol > 0.0 && self.f_tol > 0.0) {
            return Err(Error::InvalidParameter("x_tol and f_tol must be positive".into()));
        }
        if self.max_evals < dim + 1 {
            return Err(Error::InvalidParameter(format!(
                "max_evals = {} cannot cover the initial simplex of {} vertices",
                self.max_evals,
                dim + 1
            )));
        }
        let coef_ok = self.reflection > 0.0
            && self.expansion > 1.0
            && (0.0..1.0).contains(&self.contraction)
            && (0.0..1.0).contains(&self.shrink)
            && self.contraction > 0.0
            && self.shrink > 0.0;
        if !coef_ok {
            return Err(Error::InvalidParameter("invalid simplex coefficients".into()));
        }
        Ok(())
    }
}

/// Result of [`nelder_mead`].
#[derive(Clone, Debug, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub n_evals: usize,
    /// False when the evaluation budget ended the search.
    pub converged: bool,
}

struct Budgeted<F> {
    f: F,
    used: usize,
    cap: usize,
}

impl<F: FnMut(&[f64]) -> f64> Budgeted<F> {
    fn eval(&mut self, x: &[f64]) -> Option<f64> {
        if self.used >= self.cap {
            return None;
        }
        self.used += 1;
        let v = (self.f)(x);
        Some(if v.is_finite() { v } else { f64::INFINITY })
    }
}

/// Minimises `f` from `x0` with the reflect/expand/contract/shrink simplex
/// method. Non-finite values after the first evaluation count as `+∞`.
pub fn nelder_mead<F>(f: F, x0: &[f64], cfg: &SimplexConfig) -> Result<Minimum>
where
    F: FnMut(&[f64]) -> f64,
{
    let dim = x0.len();
    if dim == 0 || x0.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("start point must be finite and non-empty".into()));
    }
    cfg.validate(dim)?;
    let mut fun = Budgeted {
        f,
        used: 0,
        cap: cfg.max_evals,
    };

    let first = (fun.f)(x0);
    fun.used = 1;
    if !first.is_finite() {
        return Err(Error::Numeric(format!("objective is {first} at the start point")));
    }
    let mut simplex: Vec<(Vec<f64>, f64)> = vec![(x0.to_vec(), first)];
    for i in 0..dim {
        let mut x = x0.to_vec();
        x[i] += (cfg.initial_step * x0[i].abs()).max(cfg.initial_step_floor);
        let v = fun.eval(&x).expect("budget covers the initial simplex");
        simplex.push((x, v));
    }

    let converged = loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (best_x, best_f) = (&simplex[0].0, simplex[0].1);
        let x_spread = simplex[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(best_x).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        let f_spread = simplex[1..].iter().map(|(_, v)| (v - best_f).abs()).fold(0.0, f64::max);
        if x_spread <= cfg.x_tol && f_spread <= cfg.f_tol {
            break true;
        }

        let worst = simplex[dim].clone();
        let centroid: Vec<f64> = (0..dim)
            .map(|k| simplex[..dim].iter().map(|(x, _)| x[k]).sum::<f64>() / dim as f64)
            .collect();
        let along = |coef: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + coef * (c - w))
                .collect()
        };

        let xr = along(cfg.reflection);
        let Some(fr) = fun.eval(&xr) else { break false };
        if fr < simplex[0].1 {
            let xe = along(cfg.reflection * cfg.expansion);
            let Some(fe) = fun.eval(&xe) else {
                simplex[dim] = (xr, fr);
                break false;
            };
            simplex[dim] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[dim - 1].1 {
            simplex[dim] = (xr, fr);
            continue;
        }
        let (xc, outside) = if fr < worst.1 {
            (along(cfg.reflection * cfg.contraction), true)
        } else {
            (along(-cfg.contraction), false)
        };
        let Some(fc) = fun.eval(&xc) else { break false };
        let accept = if outside { fc <= fr } else { fc < worst.1 };
        if accept {
            simplex[dim] = (xc, fc);
            continue;
        }
        let anchor = simplex[0].0.clone();
        let mut exhausted = false;
        for vertex in simplex.iter_mut().skip(1) {
            let x: Vec<f64> = anchor
                .iter()
                .zip(&vertex.0)
                .map(|(a, v)| a + cfg.shrink * (v - a))
                .collect();
            match fun.eval(&x) {
                Some(v) => *vertex = (x, v),
                None => {
                    exhausted = true;
                    break;
                }
            }
        }
        if exhausted {
            break false;
        }
    };

    let (x, value) = simplex
        .into_iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("simplex is non-empty");
    Ok(Minimum {
        x,
        value,
        n_evals: fun.used,
        converged,
    })
}

/// Box for `(γ, t, β)`; lower bounds of the open intervals are nudged inward.
pub const PARAM_LOWER: [f64; 3] = [1e-6, 1e-6, 0.05];
pub const PARAM_UPPER: [f64; 3] = [10.0, 2.0, 1.0];

/// Starting point `γ = 1`, `β = 0.35`, `t = 3.5 / (n(n-1)/2)`, close to the
/// typical tuned values across `n = 5..10`.
pub fn default_start(n: usize) -> [f64; 3] {
    let degree = (n * n.saturating_sub(1) / 2).max(1) as f64;
    [1.0, 3.5 / degree, 0.35]
}

/// One circuit evaluation made by the tuner.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TraceRow {
    pub eval_index: usize,
    pub gamma: f64,
    pub t: f64,
    pub beta: f64,
    pub expectation: f64,
    pub osp: f64,
}

/// Tuned parameters for one depth.
#[derive(Clone, Debug, PartialEq)]
pub struct OptResult {
    pub params: RampParams,
    /// Expectation of the raw cost at `params`.
    pub value: f64,
    pub osp: f64,
    /// Number of circuit runs, equal to `history.len()`.
    pub n_evals: usize,
    pub budget_limited: bool,
    pub history: Vec<TraceRow>,
}

impl OptResult {
    /// Lowest expectation seen up to each evaluation.
    pub fn incumbents(&self) -> Vec<f64> {
        self.history
            .iter()
            .scan(f64::INFINITY, |best, r| {
                *best = best.min(r.expectation);
                Some(*best)
            })
            .collect()
    }
}

fn project(x: &[f64]) -> [f64; 3] {
    std::array::from_fn(|k| x[k].clamp(PARAM_LOWER[k], PARAM_UPPER[k]))
}

/// Minimises the circuit's expected cost over `(γ, t, β)` at depth `p`.
///
/// Points outside the box are evaluated at their projection plus a
/// quadratic penalty. Every evaluation is a real circuit run at in-box
/// parameters, and the reported optimum is the best of them.
pub fn optimize_circuit_params(
    sim: &NvQwoa,
    p: usize,
    start: Option<[f64; 3]>,
    cfg: &SimplexConfig,
) -> Result<OptResult> {
    if p == 0 {
        return Err(Error::InvalidParameter("depth p must be >= 1".into()));
    }
    let x0 = project(&start.unwrap_or_else(|| default_start(sim.n())));
    let spread = sim.quality().max() - sim.quality().min();
    let history = RefCell::new(Vec::<TraceRow>::new());
    let failure = RefCell::new(None::<Error>);

    let objective = |x: &[f64]| -> f64 {
        if failure.borrow().is_some() {
            return f64::NAN;
        }
        let [gamma, t, beta] = project(x);
        let excess: f64 = x
            .iter()
            .zip([gamma, t, beta])
            .map(|(a, b)| (a - b).powi(2))
            .sum();
        match sim.run(&RampParams { gamma, t, beta, p }) {
            Ok(out) => {
                let mut h = history.borrow_mut();
                let eval_index = h.len();
                h.push(TraceRow {
                    eval_index,
                    gamma,
                    t,
                    beta,
                    expectation: out.expectation,
                    osp: out.osp,
                });
                out.expectation + 100.0 * spread * excess
            }
            Err(e) => {
                *failure.borrow_mut() = Some(e);
                f64::NAN
            }
        }
    };
    let min = nelder_mead(objective, &x0, cfg);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let min = min?;
    let history = history.into_inner();
    let best = history
        .iter()
        .min_by(|a, b| a.expectation.total_cmp(&b.expectation))
        .copied()
        .expect("at least one evaluation");
    Ok(OptResult {
        params: RampParams {
            gamma: best.gamma,
            t: best.t,
            beta: best.beta,
            p,
        },
        value: best.expectation,
        osp: best.osp,
        n_evals: history.len(),
        budget_limited: !min.converged,
        history,
    })
}
