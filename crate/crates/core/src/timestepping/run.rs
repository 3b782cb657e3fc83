use std::collections::BTreeMap;

use super::leapfrog::{cfl_timestep, discrete_energy, estimate_max_eigenvalue, EigenEstimate, FieldState, Leapfrog};
use crate::assembly::{
    assemble_load, assemble_mass, assemble_stiffness, build_dof_map, essential_values, project_pi_h, DofMap,
};
use crate::error::{Error, Result};
use crate::geometry::{Point, Vec2};
use crate::mesh::{BoundaryTag, HybridMesh};

pub const DEFAULT_CFL_SAFETY: f64 = 0.9;

/// Vector field of space and time.
pub type SpaceTimeField<'a> = Box<dyn Fn(Point, f64) -> Vec2 + 'a>;

/// Prescribed tangential trace `E . t` along the positively oriented boundary.
pub type TraceData<'a> = Box<dyn Fn(Point, f64) -> f64 + 'a>;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StepSize {
    Fixed(f64),
    /// `safety * 2 / sqrt(lambda_max)`, shortened so that an integer number
    /// of steps ends exactly at `t_end`.
    Cfl {
        safety: f64,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub enum OutputSchedule {
    None,
    /// Every `cadence` time units, starting at `t = 0`.
    Cadence(f64),
    /// The given times; each is served by the nearest step.
    Times(Vec<f64>),
}

pub struct TimeConfig<'a> {
    pub t_end: f64,
    pub step: StepSize,
    pub output: OutputSchedule,
    pub source: Option<SpaceTimeField<'a>>,
    /// Essential data per tag; boundary edges with other tags are natural.
    pub essential: BTreeMap<BoundaryTag, TraceData<'a>>,
    /// Initial field and time derivative, interpolated with `project_pi_h`.
    pub initial_field: Option<SpaceTimeField<'a>>,
    pub initial_velocity: Option<SpaceTimeField<'a>>,
}

impl<'a> TimeConfig<'a> {
    /// Zero data, natural boundary everywhere, default CFL safety, no output.
    pub fn new(t_end: f64) -> Self {
        Self {
            t_end,
            step: StepSize::Cfl {
                safety: DEFAULT_CFL_SAFETY,
            },
            output: OutputSchedule::None,
            source: None,
            essential: BTreeMap::new(),
            initial_field: None,
            initial_velocity: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::TimeStep(format!(
                "t_end must be non-negative, got {}",
                self.t_end
            )));
        }
        match self.step {
            StepSize::Fixed(dt) if !(dt > 0.0 && dt.is_finite()) => {
                Err(Error::TimeStep(format!("dt must be positive, got {dt}")))
            }
            StepSize::Cfl { safety } if !(safety > 0.0 && safety <= 1.0) => {
                Err(Error::TimeStep(format!("CFL safety must lie in (0, 1], got {safety}")))
            }
            _ => match &self.output {
                OutputSchedule::Cadence(c) if !(*c > 0.0) => {
                    Err(Error::TimeStep(format!("output cadence must be positive, got {c}")))
                }
                _ => Ok(()),
            },
        }
    }
}

/// Data handed to the snapshot sink.
pub struct Snapshot<'s> {
    pub mesh: &'s HybridMesh,
    pub dofmap: &'s DofMap,
    pub step: usize,
    pub t: f64,
    pub dt: f64,
    /// Output time this snapshot serves.
    pub requested: f64,
    pub coeffs: &'s [f64],
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunSummary {
    pub n_dofs: usize,
    pub steps: usize,
    pub dt: f64,
    pub t_final: f64,
    pub eigenvalue: Option<EigenEstimate>,
    /// Conserved leapfrog energy after the first and the last step.
    pub initial_energy: f64,
    pub final_energy: f64,
    /// Largest absolute DOF value seen over the run.
    pub max_abs_coeff: f64,
    pub snapshots: usize,
}

/// Steps at which output is due, with the requested times they serve.
pub fn snapshot_steps(schedule: &OutputSchedule, t_end: f64, dt: f64, steps: usize) -> BTreeMap<usize, f64> {
    let requested: Vec<f64> = match schedule {
        OutputSchedule::None => Vec::new(),
        OutputSchedule::Cadence(c) => {
            let count = (t_end / c + 1e-9).floor() as usize;
            (0..=count).map(|k| k as f64 * c).collect()
        }
        OutputSchedule::Times(ts) => ts
            .iter()
            .copied()
            .filter(|&t| (0.0..=t_end + 0.5 * dt).contains(&t))
            .collect(),
    };
    let mut out = BTreeMap::new();
    for t in requested {
        let n = ((t / dt).round() as usize).min(steps);
        out.entry(n).or_insert(t);
    }
    out
}

/// Number of steps and step size reaching `t_end`.
pub fn plan_steps(t_end: f64, dt_max: f64, fixed: bool) -> (usize, f64) {
    if t_end == 0.0 {
        return (0, dt_max);
    }
    let n = (t_end / dt_max - 1e-9).ceil().max(1.0) as usize;
    if fixed {
        (n, dt_max)
    } else {
        (n, t_end / n as f64)
    }
}

/// Assembles the system on `mesh`, integrates to `t_end` and passes each
/// scheduled snapshot to `sink`.
pub fn run_simulation<F>(mesh: &HybridMesh, config: &TimeConfig<'_>, mut sink: F) -> Result<RunSummary>
where
    F: FnMut(&Snapshot<'_>) -> Result<()>,
{
    config.validate()?;
    let tags: Vec<BoundaryTag> = config.essential.keys().copied().collect();
    let dofmap = build_dof_map(mesh, &tags);
    let mass = assemble_mass(mesh, &dofmap)?;
    let stiffness = assemble_stiffness(mesh, &dofmap)?;

    let (eigenvalue, dt_max, fixed) = match config.step {
        StepSize::Fixed(dt) => (None, dt, true),
        StepSize::Cfl { safety } => {
            let est = estimate_max_eigenvalue(&mass, &stiffness);
            (Some(est), cfl_timestep(est.value, safety)?, false)
        }
    };
    let (steps, dt) = plan_steps(config.t_end, dt_max, fixed);
    let schedule = snapshot_steps(&config.output, config.t_end, dt, steps);

    let bc_at = |t: f64| {
        essential_values(
            mesh,
            &dofmap,
            |tag, p, t| config.essential.get(&tag).map_or(0.0, |g| g(p, t)),
            t,
        )
    };
    let load_at = |t: f64| -> Result<Option<Vec<f64>>> {
        config
            .source
            .as_ref()
            .map(|f| assemble_load(mesh, &dofmap, f, t))
            .transpose()
    };

    let mut e0 = match &config.initial_field {
        Some(f) => project_pi_h(mesh, &dofmap, |p| f(p, 0.0))?,
        None => vec![0.0; dofmap.n_dofs()],
    };
    for (i, v) in bc_at(0.0) {
        e0[i] = v;
    }
    let v0 = match &config.initial_velocity {
        Some(f) => project_pi_h(mesh, &dofmap, |p| f(p, 0.0))?,
        None => vec![0.0; dofmap.n_dofs()],
    };

    let mut snapshots = 0;
    let mut emit = |state_step: usize, t: f64, coeffs: &[f64]| -> Result<()> {
        if let Some(&requested) = schedule.get(&state_step) {
            sink(&Snapshot {
                mesh,
                dofmap: &dofmap,
                step: state_step,
                t,
                dt,
                requested,
                coeffs,
            })?;
            snapshots += 1;
        }
        Ok(())
    };
    let max_abs = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));

    emit(0, 0.0, &e0)?;
    let mut max_abs_coeff = max_abs(&e0);
    if steps == 0 {
        let state = FieldState {
            e_curr: e0.clone(),
            e_prev: e0,
            n: 0,
            dt,
            t0: 0.0,
        };
        let energy = discrete_energy(&state, &mass, &stiffness);

        return Ok(RunSummary {
            n_dofs: dofmap.n_dofs(),
            steps: 0,
            dt,
            t_final: 0.0,
            eigenvalue,
            initial_energy: energy,
            final_energy: energy,
            max_abs_coeff,
            snapshots,
        });
    }

    let mut stepper = Leapfrog::new(&mass, &stiffness);
    let f0 = load_at(0.0)?;
    let mut state = stepper.init(e0, &v0, dt, 0.0, f0.as_deref(), &bc_at(dt));
    let initial_energy = discrete_energy(&state, &mass, &stiffness);
    max_abs_coeff = max_abs_coeff.max(max_abs(&state.e_curr));
    emit(1, state.t(), &state.e_curr)?;
    while state.n < steps {
        let f = load_at(state.t())?;
        let t_next = (state.n + 1) as f64 * dt;
        stepper.step(&mut state, f.as_deref(), &bc_at(t_next))?;
        max_abs_coeff = max_abs_coeff.max(max_abs(&state.e_curr));
        emit(state.n, state.t(), &state.e_curr)?;
    }

    Ok(RunSummary {
        n_dofs: dofmap.n_dofs(),
        steps,
        dt,
        t_final: state.t(),
        eigenvalue,
        initial_energy,
        final_energy: discrete_energy(&state, &mass, &stiffness),
        max_abs_coeff,
        snapshots,
    })
}
