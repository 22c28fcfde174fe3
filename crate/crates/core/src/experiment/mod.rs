//! Reproducible runs, sweeps and their CSV outputs.

mod config;
mod exact;
mod run;
mod sweep;
mod table;

pub use config::{default_molecules, ConfigLayer, RunConfig};
pub use exact::{exact_tables, verify_exact, ExactReport};
pub use run::{run_generator, RunOutput, RunSummary, SUMMARY_HEADER};
pub use sweep::{
    depth_trace, depth_trace_tables, early_fraction, eps_cold_sweep, eps_cold_tables, nonuniform,
    nonuniform_table, rate, rate_table, relation_sweep, relation_table, reliability,
    reliability_tables, step_study_grid, step_study_table, unit_grid, DepthTraceRun, EpsColdRow,
    EpsColdSweep, NonuniformRow, RateRow, RelationRow, ReliabilityRun, SampleStats, StudyResult,
};
pub use table::Table;
