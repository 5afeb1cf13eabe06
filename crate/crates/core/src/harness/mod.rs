//! Simulation sweeps, configuration and result files.

pub mod config;
mod csv;
pub mod engine;
mod sweep;

pub use self::csv::{
    emit_csv, emit_qsim_csv, parse_csv, parse_qsim_csv, QSIM_HEADER, RESULT_HEADER,
};
pub use config::{SimConfig, ENV_SEED, ENV_WORKERS};
pub use engine::{run_blocks, BlockOutcome, StopRule, Tally};
pub use sweep::{run_qsim, run_sweep, simulate_point, ResultRecord};
