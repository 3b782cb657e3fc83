use super::exact::ExactSolution;
use super::norms::{l2_errors, observed_rate, ErrorEvaluator, MeshFamily};
use crate::assembly::{assemble_load, assemble_mass, assemble_stiffness, build_dof_map, project_pi0, project_pi_h};
use crate::error::{Error, Result};
use crate::mesh::validate_mesh;
use crate::timestepping::{cfl_timestep, estimate_max_eigenvalue, plan_steps, Leapfrog};

/// Residual bound the exact solution must meet before a study runs.
pub const RESIDUAL_TOLERANCE: f64 = 1e-4;

#[derive(Clone, Debug, PartialEq)]
pub struct LevelResult {
    pub level: usize,
    /// Longest edge.
    pub h: f64,
    pub n_dofs: usize,
    pub steps: usize,
    pub dt: f64,
    pub err_dt_e: f64,
    pub err_curl: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub family: MeshFamily,
    pub solution: String,
    pub t_end: f64,
    pub levels: Vec<LevelResult>,
    /// Set when an error column fails to decrease from one level to the next.
    pub non_monotone: bool,
}

impl ConvergenceReport {
    /// Rates between consecutive levels, `(rate_dtE, rate_curl)`.
    pub fn rates(&self) -> Vec<(f64, f64)> {
        self.levels
            .windows(2)
            .map(|w| {
                (
                    observed_rate(w[0].err_dt_e, w[1].err_dt_e, w[0].h, w[1].h),
                    observed_rate(w[0].err_curl, w[1].err_curl, w[0].h, w[1].h),
                )
            })
            .collect()
    }

    pub fn finest_rates(&self) -> Option<(f64, f64)> {
        self.rates().last().copied()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StudyConfig {
    pub family: MeshFamily,
    /// Cells per side on the coarsest level; doubled on each further level.
    pub n_coarse: usize,
    pub levels: usize,
    pub t_end: f64,
    pub cfl_safety: f64,
}

impl StudyConfig {
    /// Four levels from `h = 1/8` to `T = 0.5` at CFL safety 0.5.
    pub fn standard(family: MeshFamily) -> Self {
        Self {
            family,
            n_coarse: 8,
            levels: 4,
            t_end: 0.5,
            cfl_safety: 0.5,
        }
    }
}

/// Runs the leapfrog scheme on a sequence of uniformly refined meshes and
/// records the largest errors of `dt E` and `curl E` over all steps.
///
/// Boundaries are natural; the solution must satisfy `curl E = 0` there.
pub fn convergence_study(exact: &ExactSolution, config: &StudyConfig) -> Result<ConvergenceReport> {
    if config.levels < 3 {
        return Err(Error::Verification(format!(
            "a study needs at least 3 levels, got {}",
            config.levels
        )));
    }
    let residual = exact.residual_check(100, 7);
    if residual.max() > RESIDUAL_TOLERANCE {
        return Err(Error::Verification(format!(
            "exact solution `{}` fails its residual check: {residual:?}",
            exact.name
        )));
    }
    let mut levels = Vec::with_capacity(config.levels);
    for level in 0..config.levels {
        let n = config.n_coarse << level;
        let mesh = config.family.build(n)?;
        let stats = validate_mesh(&mesh)?;
        let dofmap = build_dof_map(&mesh, &[]);
        let mass = assemble_mass(&mesh, &dofmap)?;
        let stiffness = assemble_stiffness(&mesh, &dofmap)?;
        let lambda = estimate_max_eigenvalue(&mass, &stiffness);
        let (steps, dt) = plan_steps(config.t_end, cfl_timestep(lambda.value, config.cfl_safety)?, false);
        let evaluator = ErrorEvaluator::new(&mesh, &dofmap)?;
        let load = |t: f64| -> Result<Option<Vec<f64>>> {
            exact
                .source
                .as_ref()
                .map(|f| assemble_load(&mesh, &dofmap, f, t))
                .transpose()
        };

        let e0 = project_pi_h(&mesh, &dofmap, |p| (exact.field)(p, 0.0))?;
        let v0 = project_pi_h(&mesh, &dofmap, |p| (exact.dt_field)(p, 0.0))?;
        let (mut err_dt_e, mut err_curl) = (0.0f64, 0.0f64);
        let (_, c0) = evaluator.errors(&e0, |p| (exact.field)(p, 0.0), |p| (exact.curl)(p, 0.0));
        err_curl = err_curl.max(c0);

        let mut stepper = Leapfrog::new(&mass, &stiffness);
        let f0 = load(0.0)?;
        let mut state = stepper.init(e0, &v0, dt, 0.0, f0.as_deref(), &[]);
        loop {
            let t = state.t();
            let e = l2_errors(&evaluator, &state.e_curr, &state.velocity(), exact, t, t - 0.5 * dt);
            err_dt_e = err_dt_e.max(e.err_dt_e);
            err_curl = err_curl.max(e.err_curl);
            if state.n >= steps {
                break;
            }
            let f = load(t)?;
            stepper.step(&mut state, f.as_deref(), &[])?;
        }
        levels.push(LevelResult {
            level,
            h: stats.h_max,
            n_dofs: dofmap.n_dofs(),
            steps,
            dt,
            err_dt_e,
            err_curl,
        });
    }
    let non_monotone = levels
        .windows(2)
        .any(|w| w[1].err_dt_e >= w[0].err_dt_e || w[1].err_curl >= w[0].err_curl);
    Ok(ConvergenceReport {
        family: config.family,
        solution: exact.name.clone(),
        t_end: config.t_end,
        levels,
        non_monotone,
    })
}

/// Interpolation errors of one level.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InterpolationLevel {
    pub h: f64,
    /// `||E - Pi_h E||`.
    pub err_pi_h: f64,
    /// `||curl(E - Pi_h E)||`.
    pub err_curl_pi_h: f64,
    /// `||E - pi0 E||`.
    pub err_pi0: f64,
}

/// Interpolation errors of `exact` at `t` over `levels` refinements.
pub fn interpolation_study(
    exact: &ExactSolution,
    family: MeshFamily,
    n_coarse: usize,
    levels: usize,
    t: f64,
) -> Result<Vec<InterpolationLevel>> {
    (0..levels)
        .map(|level| {
            let mesh = family.build(n_coarse << level)?;
            let h = validate_mesh(&mesh)?.h_max;
            let dofmap = build_dof_map(&mesh, &[]);
            let evaluator = ErrorEvaluator::new(&mesh, &dofmap)?;
            let x = project_pi_h(&mesh, &dofmap, |p| (exact.field)(p, t))?;
            let (err_pi_h, err_curl_pi_h) = evaluator.errors(&x, |p| (exact.field)(p, t), |p| (exact.curl)(p, t));
            let means = project_pi0(&mesh, |p| (exact.field)(p, t))?;
            let err_pi0 = evaluator.piecewise_constant_error(&means, |p| (exact.field)(p, t));
            Ok(InterpolationLevel {
                h,
                err_pi_h,
                err_curl_pi_h,
                err_pi0,
            })
        })
        .collect()
}
