//! The finite-MDP benchmark protocol: seeded runs over datasets of several
//! sizes, exact evaluation, performance normalization, and mean/CVaR
//! aggregation.

mod algorithms;
mod metrics;
mod report;
mod runner;
mod seeds;

pub use algorithms::{train, Algorithm, HyperGrid, Trained};
pub use metrics::{cvar, mean, normalized_perf};
pub use report::{emit_plot_data, read_records, summarize, write_records, SummaryRow, CSV_HEADER};
pub use runner::{
    run_gridworld_benchmark, run_random_mdps_benchmark, sort_records, Behavior, BenchmarkConfig,
    BenchmarkRecord, GRIDWORLD_BASELINE_SEED, GRIDWORLD_BASELINE_TARGET,
};
pub use seeds::derive_seed;
