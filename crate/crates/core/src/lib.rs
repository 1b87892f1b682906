//! Benchmarking toolkit for the quadratic assignment problem on small
//! sizes: exact permutation ranking, instance generation, classical
//! heuristics with evaluation accounting, and a statevector simulator of a
//! non-variational quantum walk optimiser over the `n!` assignments.
//!
//! ```
//! use qapwalk::instance::QapInstance;
//! use qapwalk::quantum::{NvQwoa, RampParams};
//!
//! let inst = QapInstance::generate(5, 7, 20.0)?;
//! let sim = NvQwoa::new(&inst)?;
//! let out = sim.run(&RampParams::new(1.0, 0.3, 0.35, 3)?)?;
//! assert!(out.osp > 1.0 / 120.0);
//! # Ok::<(), qapwalk::Error>(())
//! ```

// `!(x > y)` checks are written to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod heuristics;
pub mod instance;
pub mod optimize;
pub mod perm;
pub mod quantum;
pub mod seed;

pub use error::{Error, Result};
pub use instance::{Optimum, QapInstance, QualityVector};
pub use perm::{PermIndex, Permutation};

/// The guide's chapters, compiled so their code blocks run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/permutations.md")]
    mod permutations {}
    #[doc = include_str!("../../../book/src/instances.md")]
    mod instances {}
    #[doc = include_str!("../../../book/src/heuristics.md")]
    mod heuristics {}
    #[doc = include_str!("../../../book/src/simulator.md")]
    mod simulator {}
    #[doc = include_str!("../../../book/src/tuning.md")]
    mod tuning {}
    #[doc = include_str!("../../../book/src/analysis.md")]
    mod analysis {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
