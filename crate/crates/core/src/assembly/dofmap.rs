use std::collections::BTreeSet;

use crate::mesh::{BoundaryTag, ElementId, HybridMesh};

/// Global numbering of degrees of freedom.
///
/// Edge DOFs come first, numbered by edge index, followed by three bubble
/// DOFs per triangle in local edge order. Each element table lists global
/// DOF ids in the element's local basis order together with the sign
/// relating local and global orientation; bubble signs are always `+1`.
#[derive(Clone, Debug, PartialEq)]
pub struct DofMap {
    n_edges: usize,
    n_dofs: usize,
    triangle_dofs: Vec<[usize; 6]>,
    triangle_signs: Vec<[f64; 6]>,
    rectangle_dofs: Vec<[usize; 4]>,
    rectangle_signs: Vec<[f64; 4]>,
    essential_tags: BTreeSet<BoundaryTag>,
    /// Constrained DOFs with their edge tag, sorted by DOF.
    essential: Vec<(usize, BoundaryTag)>,
    is_essential: Vec<bool>,
}

/// Builds the DOF map. Edges tagged with any of `essential_tags` are
/// constrained; every other boundary edge carries the natural condition.
pub fn build_dof_map(mesh: &HybridMesh, essential_tags: &[BoundaryTag]) -> DofMap {
    let n_edges = mesh.n_edges();
    let n_dofs = n_edges + 3 * mesh.n_triangles();
    let triangle_dofs: Vec<[usize; 6]> = (0..mesh.n_triangles())
        .map(|t| {
            let e = mesh.triangle_edges(t);
            [
                e[0].edge,
                e[1].edge,
                e[2].edge,
                n_edges + 3 * t,
                n_edges + 3 * t + 1,
                n_edges + 3 * t + 2,
            ]
        })
        .collect();
    let triangle_signs = (0..mesh.n_triangles())
        .map(|t| {
            let e = mesh.triangle_edges(t);
            [e[0].sign, e[1].sign, e[2].sign, 1.0, 1.0, 1.0]
        })
        .collect();
    let rectangle_dofs = (0..mesh.n_rectangles())
        .map(|r| mesh.rectangle_edges(r).map(|s| s.edge))
        .collect();
    let rectangle_signs = (0..mesh.n_rectangles())
        .map(|r| mesh.rectangle_edges(r).map(|s| s.sign))
        .collect();

    let essential_tags: BTreeSet<BoundaryTag> = essential_tags.iter().copied().collect();
    let essential: Vec<(usize, BoundaryTag)> = mesh
        .boundary_tags()
        .iter()
        .filter(|(&e, tag)| essential_tags.contains(tag) && mesh.is_boundary_edge(e))
        .map(|(&e, &tag)| (e, tag))
        .collect();
    let mut is_essential = vec![false; n_dofs];
    for &(d, _) in &essential {
        is_essential[d] = true;
    }
    DofMap {
        n_edges,
        n_dofs,
        triangle_dofs,
        triangle_signs,
        rectangle_dofs,
        rectangle_signs,
        essential_tags,
        essential,
        is_essential,
    }
}

impl DofMap {
    pub fn n_dofs(&self) -> usize {
        self.n_dofs
    }

    pub fn n_edge_dofs(&self) -> usize {
        self.n_edges
    }

    pub fn n_bubble_dofs(&self) -> usize {
        self.n_dofs - self.n_edges
    }

    pub fn edge_dof(&self, edge: usize) -> usize {
        edge
    }

    pub fn bubble_dof(&self, triangle: usize, local_edge: usize) -> usize {
        self.n_edges + 3 * triangle + local_edge
    }

    pub fn is_bubble(&self, dof: usize) -> bool {
        dof >= self.n_edges
    }

    /// Global DOF ids and orientation signs of an element, in local order.
    pub fn element_dofs(&self, element: ElementId) -> (&[usize], &[f64]) {
        match element {
            ElementId::Triangle(t) => (&self.triangle_dofs[t], &self.triangle_signs[t]),
            ElementId::Rectangle(r) => (&self.rectangle_dofs[r], &self.rectangle_signs[r]),
        }
    }

    /// Local coefficients of an element from a global vector.
    pub fn gather(&self, element: ElementId, global: &[f64], local: &mut Vec<f64>) {
        let (dofs, signs) = self.element_dofs(element);
        local.clear();
        local.extend(dofs.iter().zip(signs).map(|(&d, &s)| s * global[d]));
    }

    pub fn essential_tags(&self) -> &BTreeSet<BoundaryTag> {
        &self.essential_tags
    }

    /// Constrained DOFs and the tag of their edge, sorted by DOF.
    pub fn essential_dofs(&self) -> &[(usize, BoundaryTag)] {
        &self.essential
    }

    pub fn is_essential(&self, dof: usize) -> bool {
        self.is_essential[dof]
    }

    pub fn essential_mask(&self) -> &[bool] {
        &self.is_essential
    }

    /// Number of element tables referencing each DOF.
    pub fn reference_counts(&self) -> Vec<usize> {
        let mut count = vec![0; self.n_dofs];
        for d in self.triangle_dofs.iter().flatten() {
            count[*d] += 1;
        }
        for d in self.rectangle_dofs.iter().flatten() {
            count[*d] += 1;
        }
        count
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_structured_rect_mesh, build_structured_tri_mesh, BoundingBox, SplitDirection};

    #[test]
    fn rectangle_grid_has_one_dof_per_edge() {
        let m = build_structured_rect_mesh(2, 2, BoundingBox::unit()).unwrap();
        let d = build_dof_map(&m, &[]);
        assert_eq!(d.n_dofs(), 12);
        assert_eq!(d.n_bubble_dofs(), 0);
    }

    #[test]
    fn split_square_has_eleven_dofs() {
        let m = build_structured_tri_mesh(1, 1, BoundingBox::unit(), SplitDirection::Right).unwrap();
        let d = build_dof_map(&m, &[]);
        assert_eq!(d.n_dofs(), 5 + 6);
        let counts = d.reference_counts();
        for e in 0..m.n_edges() {
            let expect = if m.is_boundary_edge(e) { 1 } else { 2 };
            assert_eq!(counts[e], expect);
        }
        assert!(counts[5..].iter().all(|&c| c == 1));
    }

    #[test]
    fn essential_tags_select_boundary_edges() {
        let m = build_structured_rect_mesh(3, 2, BoundingBox::unit()).unwrap();
        let d = build_dof_map(&m, &[BoundaryTag::Left]);
        assert_eq!(d.essential_dofs().len(), 2);
        for &(dof, tag) in d.essential_dofs() {
            assert_eq!(tag, BoundaryTag::Left);
            let [a, b] = m.edge_points(dof);
            assert_eq!((a.x, b.x), (0.0, 0.0));
        }
    }
}
