use super::dofmap::DofMap;
use crate::error::Result;
use crate::fem_local::{quadrature::edge_rule, Element, TriangleElement, STIFFNESS_QUADRATURE_DEGREE};
use crate::geometry::{Point, Vec2};
use crate::mesh::{BoundaryTag, ElementId, HybridMesh};

/// Gauss points per edge for tangential moments.
pub const EDGE_MOMENT_POINTS: usize = 3;

/// Tangential moments `int_e E . t ds` in the global edge orientation.
pub fn edge_moments<F: Fn(Point) -> Vec2>(mesh: &HybridMesh, field: F) -> Vec<f64> {
    (0..mesh.n_edges())
        .map(|e| {
            let [a, b] = mesh.edge_points(e);
            let t = mesh.edge_tangent(e);
            edge_rule(a, b, EDGE_MOMENT_POINTS)
                .into_iter()
                .map(|(q, w)| w * field(q).dot(t))
                .sum()
        })
        .collect()
}

/// Lowest-order Nedelec interpolant.
///
/// Edge DOFs are tangential moments. Because the edge basis functions on
/// triangles carry bubble corrections, the interpolant `sum moment_e W_e`
/// also has bubble components, which are filled in so that the result is
/// the plain Whitney interpolant on every triangle.
pub fn project_pi_h<F: Fn(Point) -> Vec2>(mesh: &HybridMesh, dofmap: &DofMap, field: F) -> Result<Vec<f64>> {
    let moments = edge_moments(mesh, field);
    extend_edge_values(mesh, dofmap, &moments)
}

/// Completes a vector of global edge moments with the bubble components of
/// the corresponding Whitney field.
pub fn extend_edge_values(mesh: &HybridMesh, dofmap: &DofMap, moments: &[f64]) -> Result<Vec<f64>> {
    let mut out = vec![0.0; dofmap.n_dofs()];
    out[..mesh.n_edges()].copy_from_slice(&moments[..mesh.n_edges()]);
    for t in 0..mesh.n_triangles() {
        let el = TriangleElement::new(mesh.triangle_points(t))?;
        let se = mesh.triangle_edges(t);
        let local = [0, 1, 2].map(|k| se[k].sign * moments[se[k].edge]);
        let dofs = el.whitney_interpolant_dofs(local);
        for k in 0..3 {
            out[dofmap.bubble_dof(t, k)] = dofs[3 + k];
        }
    }
    Ok(out)
}

/// Element mean values, in the order of [`HybridMesh::elements`].
pub fn project_pi0<F: Fn(Point) -> Vec2>(mesh: &HybridMesh, field: F) -> Result<Vec<Vec2>> {
    mesh.elements()
        .map(|id| {
            let el = Element::from_mesh(mesh, id)?;
            let rule = el.exact_rule(STIFFNESS_QUADRATURE_DEGREE);
            let mut sum = Vec2::ZERO;
            for (&q, &w) in rule.points.iter().zip(&rule.weights) {
                sum += field(q) * w;
            }
            Ok(sum * (1.0 / el.area()))
        })
        .collect()
}

/// Coefficients of `grad phi_h` for the piecewise-linear (triangles) or
/// bilinear (rectangles) function with the given vertex values.
pub fn discrete_gradient(mesh: &HybridMesh, dofmap: &DofMap, vertex_values: &[f64]) -> Result<Vec<f64>> {
    let moments: Vec<f64> = mesh
        .edges()
        .iter()
        .map(|&[a, b]| vertex_values[b] - vertex_values[a])
        .collect();
    extend_edge_values(mesh, dofmap, &moments)
}

/// Largest mismatch of the tangential trace reconstructed from the two sides
/// of each interior edge, sampled at the edge Gauss points.
pub fn max_tangential_jump(mesh: &HybridMesh, dofmap: &DofMap, coeffs: &[f64]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    let mut local = Vec::new();
    for e in 0..mesh.n_edges() {
        let uses = mesh.edge_uses(e);
        if uses.len() != 2 {
            continue;
        }
        let [a, b] = mesh.edge_points(e);
        let t = mesh.edge_tangent(e);
        let mut traces = [[0.0; EDGE_MOMENT_POINTS]; 2];
        for (side, u) in uses.iter().enumerate() {
            let el = Element::from_mesh(mesh, u.element)?;
            dofmap.gather(u.element, coeffs, &mut local);
            for (g, (q, _)) in edge_rule(a, b, EDGE_MOMENT_POINTS).into_iter().enumerate() {
                traces[side][g] = el.reconstruct(&local, q).dot(t);
            }
        }
        for g in 0..EDGE_MOMENT_POINTS {
            worst = worst.max((traces[0][g] - traces[1][g]).abs());
        }
    }
    Ok(worst)
}

/// Field value and curl of a coefficient vector at a point of an element.
pub fn evaluate_in_element(
    mesh: &HybridMesh,
    dofmap: &DofMap,
    element: ElementId,
    coeffs: &[f64],
    p: Point,
) -> Result<(Vec2, f64)> {
    let el = Element::from_mesh(mesh, element)?;
    let mut local = Vec::new();
    dofmap.gather(element, coeffs, &mut local);
    Ok((el.reconstruct(&local, p), el.reconstruct_curl(&local, p)))
}

/// Values of the constrained DOFs at time `t`.
///
/// `trace(tag, x, t)` is the prescribed tangential trace `n x E = E . t`
/// with `t` the tangent of the positively oriented boundary. Each value is
/// the midpoint rule for the edge moment, converted to the global edge
/// orientation.
pub fn essential_values<G>(mesh: &HybridMesh, dofmap: &DofMap, trace: G, t: f64) -> Vec<(usize, f64)>
where
    G: Fn(BoundaryTag, Point, f64) -> f64,
{
    dofmap
        .essential_dofs()
        .iter()
        .map(|&(e, tag)| {
            let orient = mesh.boundary_orientation(e).unwrap_or(1.0);
            let value = trace(tag, mesh.edge_midpoint(e), t) * mesh.edge_length(e) * orient;
            (dofmap.edge_dof(e), value)
        })
        .collect()
}

/// Overwrites the constrained entries of `coeffs` with their values at `t`.
pub fn apply_essential_bc<G>(mesh: &HybridMesh, dofmap: &DofMap, coeffs: &mut [f64], trace: G, t: f64)
where
    G: Fn(BoundaryTag, Point, f64) -> f64,
{
    for (d, v) in essential_values(mesh, dofmap, trace, t) {
        coeffs[d] = v;
    }
}
