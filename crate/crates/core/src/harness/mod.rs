//! Monte Carlo estimation of logical error rates and the small amount of
//! statistics needed to compare decoders.

mod config;
mod oracle;
mod output;
mod run;
mod stats;

pub use config::{DecoderKind, ExperimentConfig};
pub use oracle::{check_exact, check_mps, coset_error, OracleCheck};
pub use output::{csv_header, sidecar_path, write_csv, write_sidecar, CsvRow, Sidecar};
pub use run::{
    exhaustive_failure_probability, make_decoder, point_seed, run_experiment, run_point, run_trial,
    trial_rng, RunSummary, StopReason, TrialRecord,
};
pub use stats::{badness, crossing_between, crossing_points, wilson_interval, Crossing, Z95};
