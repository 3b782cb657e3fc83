use super::dofmap::DofMap;
use super::operators::{DiagonalOperator, SparseOperator};
use crate::error::{Error, Result};
use crate::fem_local::{
    local_consistent_mass, local_mass_lumped, local_stiffness, lumped_mass_matrix, DenseMatrix, Element,
    STIFFNESS_QUADRATURE_DEGREE,
};
use crate::geometry::{Point, Vec2};
use crate::mesh::HybridMesh;

/// Local element objects in the order of [`HybridMesh::elements`].
pub fn build_elements(mesh: &HybridMesh) -> Result<Vec<Element>> {
    mesh.elements().map(|id| Element::from_mesh(mesh, id)).collect()
}

/// Diagonal mass matrix from the lumping quadrature.
pub fn assemble_mass(mesh: &HybridMesh, dofmap: &DofMap) -> Result<DiagonalOperator> {
    let mut diag = vec![0.0; dofmap.n_dofs()];
    for id in mesh.elements() {
        let el = Element::from_mesh(mesh, id)?;
        let (dofs, _) = dofmap.element_dofs(id);
        let local = local_mass_lumped(&el).map_err(|e| match e {
            Error::LumpingFailure { location, value } => Error::LumpingFailure {
                location: format!("{id} with global dofs {dofs:?}, {location}"),
                value,
            },
            other => other,
        })?;
        // sign^2 = 1
        for (&d, m) in dofs.iter().zip(local) {
            diag[d] += m;
        }
    }
    DiagonalOperator::new(diag)
}

fn assemble_blocks<F>(mesh: &HybridMesh, dofmap: &DofMap, local: F) -> Result<SparseOperator>
where
    F: Fn(&Element) -> DenseMatrix,
{
    let mut triplets = Vec::new();
    for id in mesh.elements() {
        let el = Element::from_mesh(mesh, id)?;
        let block = local(&el);
        let (dofs, signs) = dofmap.element_dofs(id);
        for a in 0..dofs.len() {
            for b in 0..dofs.len() {
                triplets.push((dofs[a], dofs[b], signs[a] * signs[b] * block.get(a, b)));
            }
        }
    }
    Ok(SparseOperator::from_triplets(dofmap.n_dofs(), triplets))
}

/// Curl-curl matrix with exact element integration.
pub fn assemble_stiffness(mesh: &HybridMesh, dofmap: &DofMap) -> Result<SparseOperator> {
    assemble_blocks(mesh, dofmap, local_stiffness)
}

/// Exact L2 mass matrix. Not used by the time stepper.
pub fn assemble_consistent_mass(mesh: &HybridMesh, dofmap: &DofMap) -> Result<SparseOperator> {
    assemble_blocks(mesh, dofmap, local_consistent_mass)
}

/// Full matrix of the lumping quadrature applied to every basis pair, for
/// checking that the stored diagonal loses nothing.
pub fn assemble_quadrature_mass(mesh: &HybridMesh, dofmap: &DofMap) -> Result<SparseOperator> {
    assemble_blocks(mesh, dofmap, lumped_mass_matrix)
}

/// Load vector `(f(t), phi_i)` with exact element quadrature.
pub fn assemble_load<F>(mesh: &HybridMesh, dofmap: &DofMap, f: F, t: f64) -> Result<Vec<f64>>
where
    F: Fn(Point, f64) -> Vec2,
{
    let mut load = vec![0.0; dofmap.n_dofs()];
    let mut phi = [Vec2::ZERO; 6];
    for id in mesh.elements() {
        let el = Element::from_mesh(mesh, id)?;
        let (dofs, signs) = dofmap.element_dofs(id);
        let n = dofs.len();
        let rule = el.exact_rule(STIFFNESS_QUADRATURE_DEGREE);
        let mut local = [0.0; 6];
        for (&q, &w) in rule.points.iter().zip(&rule.weights) {
            let fq = f(q, t);
            el.eval_basis_into(q, &mut phi);
            for a in 0..n {
                local[a] += w * fq.dot(phi[a]);
            }
        }
        for a in 0..n {
            load[dofs[a]] += signs[a] * local[a];
        }
    }
    Ok(load)
}
