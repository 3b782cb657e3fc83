use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::exact::ExactSolution;
use super::norms::MeshFamily;
use crate::assembly::{assemble_consistent_mass, assemble_mass, build_dof_map, project_pi_h, DofMap};
use crate::error::Result;
use crate::fem_local::{Element, STIFFNESS_QUADRATURE_DEGREE};
use crate::geometry::{Point, Vec2};
use crate::mesh::{validate_mesh, HybridMesh};

/// `sigma_h(u, phi) = (u, phi)_h - (u, phi)` for coefficient vectors.
pub fn quadrature_error_functional(mesh: &HybridMesh, dofmap: &DofMap, u: &[f64], phi: &[f64]) -> Result<f64> {
    let lumped = assemble_mass(mesh, dofmap)?;
    let exact = assemble_consistent_mass(mesh, dofmap)?;
    let mu = exact.mul_vec(u);
    Ok(lumped.inner(u, phi) - phi.iter().zip(&mu).map(|(a, b)| a * b).sum::<f64>())
}

/// `sigma_h(u, phi)` for an elementwise constant `u` (one value per element
/// in mesh order), which need not lie in the discrete space.
pub fn quadrature_error_piecewise_constant(
    mesh: &HybridMesh,
    dofmap: &DofMap,
    values: &[Vec2],
    phi: &[f64],
) -> Result<f64> {
    let mut sigma = 0.0;
    let mut local = Vec::new();
    for (id, &c) in mesh.elements().zip(values) {
        let el = Element::from_mesh(mesh, id)?;
        dofmap.gather(id, phi, &mut local);
        let field = |p: Point| el.reconstruct(&local, p);
        let lumped = el.lumping_quadrature().inner(|_| c, field);
        let rule = el.exact_rule(STIFFNESS_QUADRATURE_DEGREE);
        let exact = rule.integrate(|p| c.dot(field(p)));
        sigma += lumped - exact;
    }
    Ok(sigma)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureErrorLevel {
    pub h: f64,
    /// Mean of `|sigma_h(Pi_h E, phi)|` over random `phi` with `||phi|| = 1`.
    pub sigma: f64,
}

/// Measures `|sigma_h(Pi_h E, phi)|` for random unit-norm discrete `phi`
/// on `levels` refinements of `family`.
pub fn quadrature_error_study(
    exact: &ExactSolution,
    family: MeshFamily,
    n_coarse: usize,
    levels: usize,
    samples: usize,
    seed: u64,
) -> Result<Vec<QuadratureErrorLevel>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..levels)
        .map(|level| {
            let mesh = family.build(n_coarse << level)?;
            let h = validate_mesh(&mesh)?.h_max;
            let dofmap = build_dof_map(&mesh, &[]);
            let lumped = assemble_mass(&mesh, &dofmap)?;
            let consistent = assemble_consistent_mass(&mesh, &dofmap)?;
            let u = project_pi_h(&mesh, &dofmap, |p| (exact.field)(p, 0.0))?;
            let mu = consistent.mul_vec(&u);
            let mut total = 0.0;
            for _ in 0..samples {
                let mut phi: Vec<f64> = (0..dofmap.n_dofs()).map(|_| rng.random_range(-1.0..1.0)).collect();
                let norm = consistent.quadratic_form(&phi).sqrt();
                phi.iter_mut().for_each(|v| *v /= norm);
                let exact_inner: f64 = phi.iter().zip(&mu).map(|(a, b)| a * b).sum();
                total += (lumped.inner(&u, &phi) - exact_inner).abs();
            }
            Ok(QuadratureErrorLevel {
                h,
                sigma: total / samples as f64,
            })
        })
        .collect()
}
