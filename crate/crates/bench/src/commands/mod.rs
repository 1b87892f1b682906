//! One function per CLI subcommand. Each validates the configuration,
//! reads its inputs from the output directory and writes its CSVs there.

pub mod classical;
pub mod gen;
pub mod grover;
pub mod report;
pub mod shells;
pub mod sweep;

pub use classical::{cmd_classical, ClassicalReport};
pub use gen::{cmd_gen, load_instances};
pub use grover::{cmd_grover, GroverRow};
pub use report::{cmd_report, Report};
pub use shells::{cmd_shells, ShellReport};
pub use sweep::{cmd_sweep, SweepReport};
