use std::collections::HashMap;

use super::{ElementId, HybridMesh};
use crate::error::{Error, Result};
use crate::geometry::{signed_area2, Point};

#[derive(Clone, Debug, PartialEq)]
pub struct MeshStatistics {
    pub h_max: f64,
    pub h_min: f64,
    pub n_vertices: usize,
    pub n_edges: usize,
    pub n_triangles: usize,
    pub n_rectangles: usize,
    pub n_boundary_edges: usize,
    /// Minimum inradius/circumradius over triangles (0.5 for equilateral).
    pub min_triangle_shape: Option<f64>,
    /// Minimum short-side/long-side ratio over rectangles.
    pub min_rectangle_aspect: Option<f64>,
    pub total_area: f64,
}

impl MeshStatistics {
    /// Quasi-uniformity metric `h_max / h_min`.
    pub fn quasi_uniformity(&self) -> f64 {
        self.h_max / self.h_min
    }
}

/// Inradius over circumradius of a triangle.
pub fn triangle_shape_ratio(p: [Point; 3]) -> f64 {
    let a = (p[1] - p[2]).norm();
    let b = (p[2] - p[0]).norm();
    let c = (p[0] - p[1]).norm();
    let area = 0.5 * signed_area2(p[0], p[1], p[2]).abs();
    let s = 0.5 * (a + b + c);
    let inradius = area / s;
    let circumradius = a * b * c / (4.0 * area);
    inradius / circumradius
}

/// Checks every structural and geometric invariant of the mesh and returns
/// its statistics.
pub fn validate_mesh(mesh: &HybridMesh) -> Result<MeshStatistics> {
    let verts = mesh.vertices();
    if let Some(i) = verts.iter().position(|p| !p.is_finite()) {
        return Err(Error::Validation(format!("vertex {i} has non-finite coordinates")));
    }
    if mesh.n_elements() == 0 {
        return Err(Error::Validation("mesh has no elements".into()));
    }

    let (mut lo, mut hi) = (verts[0], verts[0]);
    for p in verts {
        lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    let scale = (hi - lo).norm().max(f64::MIN_POSITIVE);
    let len_tol = 1e-10 * scale;
    let area_tol = 1e-12 * scale * scale;

    let mut min_shape: Option<f64> = None;
    for t in 0..mesh.n_triangles() {
        let p = mesh.triangle_points(t);
        let area = 0.5 * signed_area2(p[0], p[1], p[2]);
        if area <= area_tol {
            return Err(Error::InvertedElement {
                element: ElementId::Triangle(t).to_string(),
                area,
            });
        }
        let r = triangle_shape_ratio(p);
        min_shape = Some(min_shape.map_or(r, |m: f64| m.min(r)));
    }

    let mut min_aspect: Option<f64> = None;
    for r in 0..mesh.n_rectangles() {
        let id = ElementId::Rectangle(r);
        let p = mesh.rectangle_points(r);
        let mut horizontal = [false; 4];
        for l in 0..4 {
            let d = p[(l + 1) % 4] - p[l];
            horizontal[l] = if d.y.abs() <= len_tol && d.x.abs() > len_tol {
                true
            } else if d.x.abs() <= len_tol && d.y.abs() > len_tol {
                false
            } else {
                return Err(Error::InvalidElement {
                    element: id.to_string(),
                    reason: format!("edge {l} is not axis-aligned (direction {:?})", d),
                });
            };
        }
        if horizontal[0] == horizontal[1] || horizontal[0] != horizontal[2] || horizontal[1] != horizontal[3] {
            return Err(Error::InvalidElement {
                element: id.to_string(),
                reason: "edges do not alternate between horizontal and vertical".into(),
            });
        }
        let area = mesh.element_area(id);
        if area <= area_tol {
            return Err(Error::InvertedElement {
                element: id.to_string(),
                area,
            });
        }
        let w = (p[1] - p[0]).norm();
        let h = (p[2] - p[1]).norm();
        if (w - (p[3] - p[2]).norm()).abs() > len_tol || (h - (p[0] - p[3]).norm()).abs() > len_tol {
            return Err(Error::InvalidElement {
                element: id.to_string(),
                reason: "opposite sides differ in length".into(),
            });
        }
        let aspect = w.min(h) / w.max(h);
        min_aspect = Some(min_aspect.map_or(aspect, |m: f64| m.min(aspect)));
    }

    let mut h_max: f64 = 0.0;
    let mut h_min = f64::INFINITY;
    for e in 0..mesh.n_edges() {
        let len = mesh.edge_length(e);
        h_max = h_max.max(len);
        h_min = h_min.min(len);
        let uses = mesh.edge_uses(e);
        let [v0, v1] = mesh.edges()[e];
        match uses.len() {
            1 => {}
            2 => {
                if uses[0].sign == uses[1].sign {
                    return Err(Error::Conformity {
                        v0,
                        v1,
                        reason: format!(
                            "{} and {} traverse the edge in the same direction (overlap or flipped element)",
                            uses[0].element, uses[1].element
                        ),
                    });
                }
            }
            n => {
                return Err(Error::Conformity {
                    v0,
                    v1,
                    reason: format!("shared by {n} elements"),
                })
            }
        }
    }

    // coincident vertices would hide a non-conforming interface
    let quant = |x: f64| (x / len_tol).round() as i64;
    let mut seen: HashMap<(i64, i64), usize> = HashMap::new();
    for (i, p) in verts.iter().enumerate() {
        if let Some(j) = seen.insert((quant(p.x), quant(p.y)), i) {
            return Err(Error::Validation(format!(
                "vertices {j} and {i} coincide at ({}, {})",
                p.x, p.y
            )));
        }
    }

    // hanging nodes: a boundary vertex lying inside another boundary edge
    let boundary: Vec<usize> = mesh.boundary_edges().collect();
    let mut bverts: Vec<usize> = boundary.iter().flat_map(|&e| mesh.edges()[e]).collect();
    bverts.sort_unstable();
    bverts.dedup();
    for &e in &boundary {
        let [a, b] = mesh.edges()[e];
        let (pa, pb) = (verts[a], verts[b]);
        let d = pb - pa;
        let len2 = d.dot(d);
        for &v in &bverts {
            if v == a || v == b {
                continue;
            }
            let q = verts[v] - pa;
            let s = q.dot(d) / len2;
            if s <= 1e-9 || s >= 1.0 - 1e-9 {
                continue;
            }
            if d.cross(q).abs() / len2.sqrt() <= len_tol {
                return Err(Error::Conformity {
                    v0: a,
                    v1: b,
                    reason: format!("hanging node: vertex {v} lies on the edge interior"),
                });
            }
        }
    }

    for (&e, &tag) in mesh.boundary_tags() {
        let [v0, v1] = mesh.edges()[e];
        let on_boundary = mesh.is_boundary_edge(e);
        if tag.is_boundary() != on_boundary {
            return Err(Error::Validation(format!(
                "edge ({v0}, {v1}) tagged `{tag}` but is {} edge",
                if on_boundary { "a boundary" } else { "an interior" }
            )));
        }
    }

    Ok(MeshStatistics {
        h_max,
        h_min,
        n_vertices: mesh.n_vertices(),
        n_edges: mesh.n_edges(),
        n_triangles: mesh.n_triangles(),
        n_rectangles: mesh.n_rectangles(),
        n_boundary_edges: boundary.len(),
        min_triangle_shape: min_shape,
        min_rectangle_aspect: min_aspect,
        total_area: mesh.total_area(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_structured_rect_mesh, BoundingBox};

    fn square(n: usize) -> HybridMesh {
        build_structured_rect_mesh(n, n, BoundingBox::unit()).unwrap()
    }

    #[test]
    fn squares_have_unit_aspect() {
        let stats = validate_mesh(&square(3)).unwrap();
        assert!((stats.min_rectangle_aspect.unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(stats.min_triangle_shape, None);
        assert!((stats.h_max - 1.0 / 3.0).abs() < 1e-15);
        assert!(stats.quasi_uniformity() >= 1.0);
    }

    #[test]
    fn flipped_rectangle_is_inverted() {
        let m = square(2);
        let mut rects = m.rectangles().to_vec();
        rects[0].reverse();
        let flipped = HybridMesh::from_parts(m.vertices().to_vec(), vec![], rects, &[]).unwrap();
        let err = validate_mesh(&flipped).unwrap_err();
        assert!(
            matches!(err, Error::InvertedElement { .. } | Error::Conformity { .. }),
            "{err}"
        );
    }

    #[test]
    fn hanging_node_names_the_edge() {
        // one rectangle on the left, two stacked rectangles on the right
        let v = vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
            Point::new(2.0, 0.0),
            Point::new(2.0, 0.5),
            Point::new(1.0, 0.5),
            Point::new(2.0, 1.0),
        ];
        let m = HybridMesh::from_parts(v, vec![], vec![[0, 1, 2, 3], [1, 4, 5, 6], [6, 5, 7, 2]], &[]).unwrap();
        match validate_mesh(&m).unwrap_err() {
            Error::Conformity { v0, v1, reason } => {
                assert_eq!((v0, v1), (1, 2));
                assert!(reason.contains("hanging"));
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn edge_shared_three_times_is_rejected() {
        let v = vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.5, 1.0),
            Point::new(0.5, -1.0),
            Point::new(0.5, 2.0),
        ];
        let m = HybridMesh::from_parts(v, vec![[0, 1, 2], [1, 0, 3], [0, 1, 4]], vec![], &[]).unwrap();
        assert!(validate_mesh(&m).is_err());
    }

    #[test]
    fn skewed_rectangle_is_rejected() {
        let m = square(2);
        let moved = m.with_vertex_moved(4, Point::new(0.52, 0.5));
        let err = validate_mesh(&moved).unwrap_err();
        assert!(matches!(err, Error::InvalidElement { .. }), "{err}");
    }
}
