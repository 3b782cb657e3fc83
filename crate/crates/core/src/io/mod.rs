//! Run configuration, the built-in expression registry and output writers.

mod config;
mod csv_report;
mod driver;
mod expressions;
mod vtk;

pub use config::{
    parse_config, parse_config_str, BoundaryCondition, MeshGenerator, MeshSource, OutputSettings, RunConfig,
    StudySettings, TimeSettings, DEMO_MEASURE_TIMES, DEMO_PRESET_H,
};
pub use csv_report::{csv_report_string, write_csv_report, CSV_HEADER};
pub use driver::{build_mesh, run_config, snapshot_file_name, RunOutcome};
pub use expressions::{demo_left_pulse, Expression};
pub use vtk::{cell_values, vtk_snapshot_string, write_vtk_snapshot, CellValues, SnapshotMetadata};
