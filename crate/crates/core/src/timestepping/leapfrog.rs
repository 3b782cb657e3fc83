use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::assembly::{DiagonalOperator, SparseOperator};
use crate::error::{Error, Result};

/// Relative change of the Rayleigh quotient at which power iteration stops.
pub const POWER_ITERATION_TOL: f64 = 1e-6;
pub const POWER_ITERATION_MAX: usize = 5000;

/// Two consecutive leapfrog levels.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldState {
    /// Coefficients at `t`.
    pub e_curr: Vec<f64>,
    /// Coefficients at `t - dt`.
    pub e_prev: Vec<f64>,
    /// Number of steps taken since `t0`.
    pub n: usize,
    pub dt: f64,
    pub t0: f64,
}

impl FieldState {
    pub fn t(&self) -> f64 {
        self.t0 + self.n as f64 * self.dt
    }

    /// Difference quotient `(e_curr - e_prev) / dt`, an approximation of the
    /// time derivative at `t - dt/2`.
    pub fn velocity(&self) -> Vec<f64> {
        self.e_curr
            .iter()
            .zip(&self.e_prev)
            .map(|(a, b)| (a - b) / self.dt)
            .collect()
    }

    /// The same two levels read backwards in time: stepping the result
    /// retraces the trajectory.
    pub fn reversed(&self) -> Self {
        FieldState {
            e_curr: self.e_prev.clone(),
            e_prev: self.e_curr.clone(),
            n: 0,
            dt: -self.dt,
            t0: self.t() - self.dt,
        }
    }
}

/// Result of the power iteration for the largest eigenvalue of `M^-1 K`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenEstimate {
    pub value: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// Largest eigenvalue of `M^-1 K` by power iteration in the `M` inner
/// product. The start vector is fixed, so the estimate is reproducible.
pub fn estimate_max_eigenvalue(mass: &DiagonalOperator, stiffness: &SparseOperator) -> EigenEstimate {
    let n = mass.len();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let mut kx = vec![0.0; n];
    let mut previous = f64::NAN;
    for it in 1..=POWER_ITERATION_MAX {
        let norm = mass.inner(&x, &x).sqrt();
        if norm == 0.0 || !norm.is_finite() {
            break;
        }
        x.iter_mut().for_each(|v| *v /= norm);
        stiffness.apply(&x, &mut kx);
        let rayleigh: f64 = x.iter().zip(&kx).map(|(a, b)| a * b).sum();
        if rayleigh == 0.0 {
            return EigenEstimate {
                value: 0.0,
                converged: true,
                iterations: it,
            };
        }
        if (rayleigh - previous).abs() < POWER_ITERATION_TOL * rayleigh.abs() {
            return EigenEstimate {
                value: rayleigh,
                converged: true,
                iterations: it,
            };
        }
        previous = rayleigh;
        x.copy_from_slice(&kx);
        mass.solve_in_place(&mut x);
    }
    EigenEstimate {
        value: if previous.is_nan() { 0.0 } else { previous },
        converged: false,
        iterations: POWER_ITERATION_MAX,
    }
}

/// Leapfrog step size `safety * 2 / sqrt(lambda_max)`.
pub fn cfl_timestep(lambda_max: f64, safety: f64) -> Result<f64> {
    if !(lambda_max > 0.0 && lambda_max.is_finite()) {
        return Err(Error::TimeStep(format!(
            "largest eigenvalue must be positive, got {lambda_max}"
        )));
    }
    if !(safety > 0.0 && safety.is_finite()) {
        return Err(Error::TimeStep(format!("safety factor must be positive, got {safety}")));
    }
    Ok(safety * 2.0 / lambda_max.sqrt())
}

/// Central-difference integrator for `M e'' + K e = f` with diagonal `M`.
///
/// Essential DOFs are overwritten with their prescribed values after each
/// update; their rows of the update are discarded.
pub struct Leapfrog<'a> {
    mass: &'a DiagonalOperator,
    stiffness: &'a SparseOperator,
    scratch: Vec<f64>,
}

impl<'a> Leapfrog<'a> {
    pub fn new(mass: &'a DiagonalOperator, stiffness: &'a SparseOperator) -> Self {
        Self {
            mass,
            stiffness,
            scratch: vec![0.0; mass.len()],
        }
    }

    /// Second-order Taylor start:
    /// `e1 = e0 + dt v0 + dt^2/2 M^-1 (f0 - K e0)`.
    pub fn init(
        &mut self,
        e0: Vec<f64>,
        v0: &[f64],
        dt: f64,
        t0: f64,
        f0: Option<&[f64]>,
        bc_next: &[(usize, f64)],
    ) -> FieldState {
        self.stiffness.apply(&e0, &mut self.scratch);
        let d = self.mass.diag();
        let mut e1 = e0.clone();
        for i in 0..e1.len() {
            let force = f0.map_or(0.0, |f| f[i]) - self.scratch[i];
            e1[i] += dt * v0[i] + 0.5 * dt * dt * force / d[i];
        }
        for &(i, v) in bc_next {
            e1[i] = v;
        }
        FieldState {
            e_curr: e1,
            e_prev: e0,
            n: 1,
            dt,
            t0,
        }
    }

    /// `e_next = 2 e - e_prev + dt^2 M^-1 (f - K e)`, then the essential
    /// values for the new level.
    pub fn step(&mut self, state: &mut FieldState, f: Option<&[f64]>, bc_next: &[(usize, f64)]) -> Result<()> {
        self.stiffness.apply(&state.e_curr, &mut self.scratch);
        let d = self.mass.diag();
        let dt2 = state.dt * state.dt;
        let mut finite = true;
        for i in 0..state.e_curr.len() {
            let force = f.map_or(0.0, |f| f[i]) - self.scratch[i];
            let next = 2.0 * state.e_curr[i] - state.e_prev[i] + dt2 * force / d[i];
            finite &= next.is_finite();
            state.e_prev[i] = next;
        }
        for &(i, v) in bc_next {
            state.e_prev[i] = v;
        }
        std::mem::swap(&mut state.e_prev, &mut state.e_curr);
        state.n += 1;
        if !finite {
            return Err(Error::BlowUp {
                step: state.n,
                t: state.t(),
            });
        }
        Ok(())
    }
}

pub fn leapfrog_init(
    e0: Vec<f64>,
    v0: &[f64],
    dt: f64,
    mass: &DiagonalOperator,
    stiffness: &SparseOperator,
    f0: Option<&[f64]>,
) -> FieldState {
    Leapfrog::new(mass, stiffness).init(e0, v0, dt, 0.0, f0, &[])
}

pub fn leapfrog_step(
    state: &mut FieldState,
    mass: &DiagonalOperator,
    stiffness: &SparseOperator,
    f: Option<&[f64]>,
    bc_next: &[(usize, f64)],
) -> Result<()> {
    Leapfrog::new(mass, stiffness).step(state, f, bc_next)
}

/// The quadratic form conserved exactly by source-free leapfrog:
/// `1/2 |(e - e_prev)/dt|_M^2 + 1/2 e^T K e_prev`.
///
/// It is conserved for any step size, including unstable ones, where it
/// becomes indefinite; use [`field_energy`] to observe instability.
pub fn discrete_energy(state: &FieldState, mass: &DiagonalOperator, stiffness: &SparseOperator) -> f64 {
    let v = state.velocity();
    let kp = stiffness.mul_vec(&state.e_prev);
    let potential: f64 = state.e_curr.iter().zip(&kp).map(|(a, b)| a * b).sum();
    0.5 * mass.inner(&v, &v) + 0.5 * potential
}

/// Positive semi-definite energy `1/2 |v|_M^2 + 1/4 (e^T K e + e_prev^T K e_prev)`.
pub fn field_energy(state: &FieldState, mass: &DiagonalOperator, stiffness: &SparseOperator) -> f64 {
    let v = state.velocity();
    0.5 * mass.inner(&v, &v)
        + 0.25 * (stiffness.quadratic_form(&state.e_curr) + stiffness.quadratic_form(&state.e_prev))
}
