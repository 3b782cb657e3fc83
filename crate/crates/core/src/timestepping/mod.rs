//! Explicit leapfrog integration of `M e'' + K e = f` with diagonal `M`,
//! step-size selection from the largest eigenvalue of `M^-1 K`, and energy
//! bookkeeping.

mod leapfrog;
mod run;

pub use leapfrog::{
    cfl_timestep, discrete_energy, estimate_max_eigenvalue, field_energy, leapfrog_init, leapfrog_step, EigenEstimate,
    FieldState, Leapfrog, POWER_ITERATION_MAX, POWER_ITERATION_TOL,
};
pub use run::{
    plan_steps, run_simulation, snapshot_steps, OutputSchedule, RunSummary, Snapshot, SpaceTimeField, StepSize,
    TimeConfig, TraceData, DEFAULT_CFL_SAFETY,
};
