//! Experiment infrastructure: configuration files, seeded rng streams,
//! the training loop, evaluation and ablation runs, and CSV persistence.
//!
//! Runs are fully deterministic: a (config, seed) pair produces
//! byte-identical metrics, traces, and checkpoints.

mod config;
mod rng;
mod run;
mod trace;

pub use config::{load_track_file, track_from_toml, RunConfig, Scenario};
pub use rng::{agent_seeds, rng_split};
pub use run::{
    cmd_compare, cmd_eval, cmd_extract, cmd_train, eval_episode, CompareRow, EvalArtifacts,
    EvalMode, TrainArtifacts,
};
pub use trace::{
    extract_columns, metrics_csv, summary_csv, trace_csv, trace_header, EpisodeRecord, TraceRow,
    TrainEpisodeMetric, METRICS_HEADER, SUMMARY_HEADER,
};
