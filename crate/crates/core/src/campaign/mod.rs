//! Design × speed sweeps, ranking at a target speed, and report files.

mod emit;
mod plan;
mod rank;
mod sweep;

pub use emit::{
    emit_csv, emit_forces, emit_plots, emit_snapshot, emit_snapshots, fields_csv, forces_csv,
    format_sig, pgm16, snapshot_stem, table_csv, CSV_HEADER,
};
pub use plan::{DesignCase, RunLength, SweepPlan, DEFAULT_SPEEDS, DEFAULT_TARGET_SPEED};
pub use rank::{rank_designs, RankedDesign};
pub use sweep::{
    run_sweep, run_sweep_with, CaseArtifacts, CaseDone, CaseRow, Provenance, SweepOutput,
    SweepTable,
};
