//! Configured runs: built-in cases, time marching, steady-state solves,
//! refinement sweeps and output writers.

pub mod cases;
pub mod config;
pub mod norms;
pub mod output;
pub mod run;
pub mod sweep;

pub use cases::{builtin_case, CASES};
pub use config::{BoundarySpec, InitialCondition, ModelSpec, RunConfig};
pub use norms::{l1_error, observed_orders, restrict};
pub use output::{write_convergence, write_outputs};
pub use run::{run_case, run_to_steady_state, RunResult, Snapshot};
pub use sweep::{dyadic, sweep, ConvergenceTable, SweepOptions};
