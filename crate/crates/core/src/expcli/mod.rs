//! Experiment harness: configs, sweeps, CSV tables and SVG plots.

pub mod cli;
mod config;
mod plot;
mod sweep;
mod table;

pub use config::{
    config_to_json, load_config, parse_config, write_config, ConfigDocument, ExperimentConfig,
    ScenarioConfig, SweepKind,
};
pub use plot::{emit_plot, render_svg};
pub use sweep::{run_overlap_sweep, run_power_sweep, run_single, solve_one, SweepAxis, SweepRow};
pub use table::{
    audit, format_sig9, read_csv, read_table, write_csv, write_csv_to, AuditFinding, TableRow,
    AUDIT_TOLERANCE, COLUMNS,
};
