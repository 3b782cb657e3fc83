use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::exact::standing_mode_solution;
use super::norms::MeshFamily;
use super::yee::yee_equivalence_check;
use crate::assembly::{assemble_mass, assemble_quadrature_mass, assemble_stiffness, build_dof_map, project_pi_h};
use crate::error::{Error, Result};
use crate::fem_local::{
    check_quadrature_exactness, lumped_mass_matrix, Element, RectangleElement, ReferenceShape, TriangleElement,
};
use crate::geometry::{signed_area2, Point};
use crate::mesh::{build_scattering_demo_mesh, triangle_shape_ratio};
use crate::timestepping::{cfl_timestep, discrete_energy, estimate_max_eigenvalue, field_energy, Leapfrog};

/// Random counterclockwise triangle with inradius/circumradius at least
/// `min_shape`, of size between 0.01 and 10.
pub fn random_shape_regular_triangle<R: Rng>(rng: &mut R, min_shape: f64) -> [Point; 3] {
    loop {
        let scale = 10f64.powf(rng.random_range(-2.0..1.0));
        let origin = Point::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
        let mut p = [0; 3].map(|_| origin + Point::new(rng.random(), rng.random()) * scale);
        if signed_area2(p[0], p[1], p[2]) < 0.0 {
            p.swap(1, 2);
        }
        if triangle_shape_ratio(p) >= min_shape {
            return p;
        }
    }
}

/// Random axis-aligned rectangle with aspect ratio up to 5.
pub fn random_rectangle<R: Rng>(rng: &mut R) -> [Point; 4] {
    let x0 = rng.random_range(-5.0..5.0);
    let y0 = rng.random_range(-5.0..5.0);
    let w = 10f64.powf(rng.random_range(-2.0..1.0));
    let h = w * rng.random_range(0.2..5.0);
    [
        Point::new(x0, y0),
        Point::new(x0 + w, y0),
        Point::new(x0 + w, y0 + h),
        Point::new(x0, y0 + h),
    ]
}

/// Worst relative off-diagonal and smallest diagonal entry of the lumped
/// mass over `n` random triangles and `n` random rectangles.
pub fn random_element_diagonality(n: usize, seed: u64) -> Result<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut off, mut min_diag) = (0.0f64, f64::INFINITY);
    for _ in 0..n {
        let elements = [
            Element::Triangle(TriangleElement::new(random_shape_regular_triangle(&mut rng, 0.2))?),
            Element::Rectangle(RectangleElement::new(random_rectangle(&mut rng))?),
        ];
        for el in &elements {
            let full = lumped_mass_matrix(el);
            let diag = full.diagonal();
            let max = diag.iter().fold(0.0f64, |a, &b| a.max(b));
            off = off.max(full.max_abs_off_diagonal() / max);
            // relative to the element scale so that tiny elements are comparable
            min_diag = min_diag.min(diag.iter().fold(f64::INFINITY, |a, &b| a.min(b)) / max);
        }
    }
    Ok((off, min_diag))
}

/// Relative drift of the conserved energy for the standing mode on a
/// `family` mesh with `n x n` cells over `steps` steps.
pub fn energy_drift(family: MeshFamily, n: usize, steps: usize, safety: f64) -> Result<f64> {
    let exact = standing_mode_solution();
    let mesh = family.build(n)?;
    let dofmap = build_dof_map(&mesh, &[]);
    let mass = assemble_mass(&mesh, &dofmap)?;
    let stiffness = assemble_stiffness(&mesh, &dofmap)?;
    let dt = cfl_timestep(estimate_max_eigenvalue(&mass, &stiffness).value, safety)?;
    let e0 = project_pi_h(&mesh, &dofmap, |p| (exact.field)(p, 0.0))?;
    let mut stepper = Leapfrog::new(&mass, &stiffness);
    let mut state = stepper.init(e0, &vec![0.0; dofmap.n_dofs()], dt, 0.0, None, &[]);
    let start = discrete_energy(&state, &mass, &stiffness);
    let mut drift: f64 = 0.0;
    while state.n < steps {
        stepper.step(&mut state, None, &[])?;
        drift = drift.max((discrete_energy(&state, &mass, &stiffness) - start).abs());
    }
    Ok(drift / start.abs())
}

/// Largest ratio of [`field_energy`] to its value after the first step for
/// the standing mode run at `safety` times the stability limit. Stops once
/// the ratio exceeds `stop_at`; a blow-up counts as infinite growth.
pub fn instability_growth(family: MeshFamily, n: usize, steps: usize, safety: f64, stop_at: f64) -> Result<f64> {
    let exact = standing_mode_solution();
    let mesh = family.build(n)?;
    let dofmap = build_dof_map(&mesh, &[]);
    let mass = assemble_mass(&mesh, &dofmap)?;
    let stiffness = assemble_stiffness(&mesh, &dofmap)?;
    let dt = cfl_timestep(estimate_max_eigenvalue(&mass, &stiffness).value, safety)?;
    let e0 = project_pi_h(&mesh, &dofmap, |p| (exact.field)(p, 0.0))?;
    let mut stepper = Leapfrog::new(&mass, &stiffness);
    let mut state = stepper.init(e0, &vec![0.0; dofmap.n_dofs()], dt, 0.0, None, &[]);
    let start = field_energy(&state, &mass, &stiffness);
    let mut growth: f64 = 1.0;
    while state.n < steps && growth <= stop_at {
        match stepper.step(&mut state, None, &[]) {
            Ok(()) => growth = growth.max(field_energy(&state, &mass, &stiffness) / start),
            Err(Error::BlowUp { .. }) => return Ok(f64::INFINITY),
            Err(e) => return Err(e),
        }
    }
    Ok(growth)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

fn check<F: FnOnce() -> Result<(bool, String)>>(name: &'static str, f: F) -> CheckOutcome {
    let start = Instant::now();
    let (passed, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
    CheckOutcome {
        name,
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Quick property checks run by the `verify` command.
pub fn run_property_suite() -> Vec<CheckOutcome> {
    vec![
        check("standing mode residual", || {
            let r = standing_mode_solution().residual_check(100, 1);
            Ok((r.max() <= 1e-4, format!("max residual {:.3e}", r.max())))
        }),
        check("element mass diagonality", || {
            let (off, min_diag) = random_element_diagonality(1000, 1)?;
            Ok((
                off <= 1e-12 && min_diag > 0.0,
                format!("max off-diagonal/diagonal {off:.3e}, min diagonal/max {min_diag:.3e}"),
            ))
        }),
        check("demo mesh mass diagonality", || {
            let mesh = build_scattering_demo_mesh(0.1, 32)?;
            let dofmap = build_dof_map(&mesh, &[]);
            let full = assemble_quadrature_mass(&mesh, &dofmap)?;
            let diag = full.diagonal();
            let max = diag.iter().fold(0.0f64, |a, &b| a.max(b));
            let off = full.max_abs_off_diagonal() / max;
            let positive = diag.iter().all(|&d| d > 0.0);
            Ok((
                off <= 1e-12 && positive,
                format!("{} dofs, max off-diagonal/diagonal {off:.3e}", dofmap.n_dofs()),
            ))
        }),
        check("quadrature exactness", || {
            let tri = (0..=2)
                .map(|d| check_quadrature_exactness(ReferenceShape::UnitTriangle, d))
                .fold(0.0, f64::max);
            let square = (0..=1)
                .map(|d| check_quadrature_exactness(ReferenceShape::UnitSquare, d))
                .fold(0.0, f64::max);
            let counter = check_quadrature_exactness(ReferenceShape::UnitSquare, 2);
            Ok((
                tri <= 1e-13 && square <= 1e-13 && (counter - 1.0 / 6.0).abs() <= 1e-13,
                format!("triangle {tri:.1e}, square {square:.1e}, square degree 2 {counter:.6}"),
            ))
        }),
        check("Yee equivalence", || {
            let r = yee_equivalence_check(8, 8, 1.0 / 8.0, 50)?;
            Ok((
                r.max_relative_deviation <= 1e-12,
                format!(
                    "{} interior edges, deviation {:.3e}",
                    r.interior_edges, r.max_relative_deviation
                ),
            ))
        }),
        check("energy conservation", || {
            let drift = energy_drift(MeshFamily::Hybrid, 8, 1000, 0.9)?;
            Ok((drift <= 1e-10, format!("relative drift {drift:.3e} over 1000 steps")))
        }),
    ]
}
