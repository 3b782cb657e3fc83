//! Conforming hybrid meshes of triangles and axis-aligned rectangles.
//!
//! Every mesh edge carries a global orientation from its smaller to its
//! larger vertex index. Elements store their edges in local counterclockwise
//! order together with the sign relating the local tangent to the global one.

mod generate;
mod io;
mod validate;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

pub use generate::{
    build_scattering_demo_mesh, build_structured_hybrid_mesh, build_structured_rect_mesh, build_structured_tri_mesh,
    BoundingBox, SplitDirection, DEMO_BALL_CENTER, DEMO_BALL_RADIUS, DEMO_INTERFACE_X,
};
pub use io::{read_mesh, read_mesh_str, write_mesh, write_mesh_string};
pub use validate::{triangle_shape_ratio, validate_mesh, MeshStatistics};

use crate::error::{Error, Result};
use crate::geometry::Point;

/// Label attached to an edge for boundary-condition assignment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundaryTag {
    Left,
    Right,
    Bottom,
    Top,
    Ball,
    Other,
    /// Interior edge on the triangle/rectangle interface.
    Interface,
}

impl BoundaryTag {
    pub const ALL: [BoundaryTag; 7] = [
        BoundaryTag::Left,
        BoundaryTag::Right,
        BoundaryTag::Bottom,
        BoundaryTag::Top,
        BoundaryTag::Ball,
        BoundaryTag::Other,
        BoundaryTag::Interface,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundaryTag::Left => "left",
            BoundaryTag::Right => "right",
            BoundaryTag::Bottom => "bottom",
            BoundaryTag::Top => "top",
            BoundaryTag::Ball => "ball",
            BoundaryTag::Other => "other",
            BoundaryTag::Interface => "interface",
        }
    }

    /// Whether the tag marks an edge of the domain boundary.
    pub fn is_boundary(self) -> bool {
        self != BoundaryTag::Interface
    }

    pub fn valid_names() -> String {
        Self::ALL.iter().map(|t| t.name()).collect::<Vec<_>>().join(", ")
    }
}

impl fmt::Display for BoundaryTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundaryTag {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Self::ALL
            .iter()
            .copied()
            .find(|t| t.name() == s)
            .ok_or_else(|| format!("unknown boundary tag `{s}` (valid tags: {})", Self::valid_names()))
    }
}

/// An element edge reference: global edge index and local orientation sign,
/// with `t_local = sign * t_global`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SignedEdge {
    pub edge: usize,
    pub sign: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ElementId {
    Triangle(usize),
    Rectangle(usize),
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementId::Triangle(i) => write!(f, "triangle {i}"),
            ElementId::Rectangle(i) => write!(f, "rectangle {i}"),
        }
    }
}

/// One use of an edge by an element.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdgeUse {
    pub element: ElementId,
    pub local: usize,
    pub sign: f64,
}

#[derive(Clone, Debug)]
pub struct HybridMesh {
    vertices: Vec<Point>,
    triangles: Vec<[usize; 3]>,
    rectangles: Vec<[usize; 4]>,
    edges: Vec<[usize; 2]>,
    triangle_edges: Vec<[SignedEdge; 3]>,
    rectangle_edges: Vec<[SignedEdge; 4]>,
    edge_uses: Vec<Vec<EdgeUse>>,
    boundary_tags: BTreeMap<usize, BoundaryTag>,
}

impl PartialEq for HybridMesh {
    fn eq(&self, other: &Self) -> bool {
        // derived data follows from the element lists
        self.vertices == other.vertices
            && self.triangles == other.triangles
            && self.rectangles == other.rectangles
            && self.boundary_tags == other.boundary_tags
    }
}

/// Local edge `k` of a triangle is opposite local vertex `k` and runs from
/// vertex `(k + 1) % 3` to vertex `(k + 2) % 3`.
#[inline]
pub fn triangle_local_edge(k: usize) -> (usize, usize) {
    ((k + 1) % 3, (k + 2) % 3)
}

/// Local edge `l` of a rectangle runs from vertex `l` to vertex `(l + 1) % 4`.
#[inline]
pub fn rectangle_local_edge(l: usize) -> (usize, usize) {
    (l, (l + 1) % 4)
}

impl HybridMesh {
    /// Builds the edge tables for the given elements. Geometry is not checked
    /// here; see [`validate_mesh`].
    pub fn from_parts(
        vertices: Vec<Point>,
        triangles: Vec<[usize; 3]>,
        rectangles: Vec<[usize; 4]>,
        tags: &[([usize; 2], BoundaryTag)],
    ) -> Result<Self> {
        let nv = vertices.len();
        let mut edge_index: HashMap<[usize; 2], usize> = HashMap::new();
        let mut edges: Vec<[usize; 2]> = Vec::new();
        let mut edge_uses: Vec<Vec<EdgeUse>> = Vec::new();

        let mut lookup = |a: usize,
                          b: usize,
                          element: ElementId,
                          local: usize,
                          edges: &mut Vec<[usize; 2]>,
                          edge_uses: &mut Vec<Vec<EdgeUse>>|
         -> Result<SignedEdge> {
            if a >= nv || b >= nv {
                return Err(Error::InvalidElement {
                    element: element.to_string(),
                    reason: format!("vertex index out of range (mesh has {nv} vertices)"),
                });
            }
            if a == b {
                return Err(Error::InvalidElement {
                    element: element.to_string(),
                    reason: format!("repeated vertex {a} (degenerate edge)"),
                });
            }
            let key = [a.min(b), a.max(b)];
            let sign = if a < b { 1.0 } else { -1.0 };
            let edge = *edge_index.entry(key).or_insert_with(|| {
                edges.push(key);
                edge_uses.push(Vec::new());
                edges.len() - 1
            });
            if edge_uses[edge].iter().any(|u| u.element == element) {
                return Err(Error::InvalidElement {
                    element: element.to_string(),
                    reason: format!("edge ({}, {}) appears twice", key[0], key[1]),
                });
            }
            edge_uses[edge].push(EdgeUse { element, local, sign });
            Ok(SignedEdge { edge, sign })
        };

        let mut triangle_edges = Vec::with_capacity(triangles.len());
        for (t, tri) in triangles.iter().enumerate() {
            let mut local = [SignedEdge { edge: 0, sign: 1.0 }; 3];
            for (k, slot) in local.iter_mut().enumerate() {
                let (i, j) = triangle_local_edge(k);
                *slot = lookup(tri[i], tri[j], ElementId::Triangle(t), k, &mut edges, &mut edge_uses)?;
            }
            triangle_edges.push(local);
        }
        let mut rectangle_edges = Vec::with_capacity(rectangles.len());
        for (r, rect) in rectangles.iter().enumerate() {
            let mut local = [SignedEdge { edge: 0, sign: 1.0 }; 4];
            for (l, slot) in local.iter_mut().enumerate() {
                let (i, j) = rectangle_local_edge(l);
                *slot = lookup(rect[i], rect[j], ElementId::Rectangle(r), l, &mut edges, &mut edge_uses)?;
            }
            rectangle_edges.push(local);
        }

        let mut boundary_tags = BTreeMap::new();
        for &([a, b], tag) in tags {
            let key = [a.min(b), a.max(b)];
            let edge = edge_index.get(&key).copied().ok_or_else(|| {
                Error::Validation(format!("tag `{tag}` references ({a}, {b}), which is not a mesh edge"))
            })?;
            if let Some(prev) = boundary_tags.insert(edge, tag) {
                if prev != tag {
                    return Err(Error::Validation(format!(
                        "edge ({a}, {b}) tagged both `{prev}` and `{tag}`"
                    )));
                }
            }
        }

        Ok(Self {
            vertices,
            triangles,
            rectangles,
            edges,
            triangle_edges,
            rectangle_edges,
            edge_uses,
            boundary_tags,
        })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn rectangles(&self) -> &[[usize; 4]] {
        &self.rectangles
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn n_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn n_rectangles(&self) -> usize {
        self.rectangles.len()
    }

    pub fn n_elements(&self) -> usize {
        self.triangles.len() + self.rectangles.len()
    }

    /// All elements, triangles first.
    pub fn elements(&self) -> impl Iterator<Item = ElementId> + '_ {
        (0..self.triangles.len())
            .map(ElementId::Triangle)
            .chain((0..self.rectangles.len()).map(ElementId::Rectangle))
    }

    pub fn triangle_edges(&self, t: usize) -> &[SignedEdge; 3] {
        &self.triangle_edges[t]
    }

    pub fn rectangle_edges(&self, r: usize) -> &[SignedEdge; 4] {
        &self.rectangle_edges[r]
    }

    pub fn element_edges(&self, element: ElementId) -> &[SignedEdge] {
        match element {
            ElementId::Triangle(t) => &self.triangle_edges[t],
            ElementId::Rectangle(r) => &self.rectangle_edges[r],
        }
    }

    pub fn element_vertices(&self, element: ElementId) -> &[usize] {
        match element {
            ElementId::Triangle(t) => &self.triangles[t],
            ElementId::Rectangle(r) => &self.rectangles[r],
        }
    }

    pub fn triangle_points(&self, t: usize) -> [Point; 3] {
        self.triangles[t].map(|v| self.vertices[v])
    }

    pub fn rectangle_points(&self, r: usize) -> [Point; 4] {
        self.rectangles[r].map(|v| self.vertices[v])
    }

    pub fn edge_uses(&self, edge: usize) -> &[EdgeUse] {
        &self.edge_uses[edge]
    }

    pub fn is_boundary_edge(&self, edge: usize) -> bool {
        self.edge_uses[edge].len() == 1
    }

    pub fn boundary_edges(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.edges.len()).filter(|&e| self.is_boundary_edge(e))
    }

    pub fn boundary_tags(&self) -> &BTreeMap<usize, BoundaryTag> {
        &self.boundary_tags
    }

    pub fn edge_tag(&self, edge: usize) -> Option<BoundaryTag> {
        self.boundary_tags.get(&edge).copied()
    }

    /// Edges carrying `tag`, in increasing edge order.
    pub fn edges_with_tag(&self, tag: BoundaryTag) -> impl Iterator<Item = usize> + '_ {
        self.boundary_tags
            .iter()
            .filter(move |(_, &t)| t == tag)
            .map(|(&e, _)| e)
    }

    pub fn edge_points(&self, edge: usize) -> [Point; 2] {
        let [a, b] = self.edges[edge];
        [self.vertices[a], self.vertices[b]]
    }

    pub fn edge_length(&self, edge: usize) -> f64 {
        let [a, b] = self.edge_points(edge);
        (b - a).norm()
    }

    pub fn edge_midpoint(&self, edge: usize) -> Point {
        let [a, b] = self.edge_points(edge);
        a.midpoint(b)
    }

    /// Unit tangent in the global orientation (smaller to larger vertex index).
    pub fn edge_tangent(&self, edge: usize) -> crate::geometry::Vec2 {
        let [a, b] = self.edge_points(edge);
        (b - a).normalized()
    }

    /// Sign relating the global orientation of a boundary edge to the
    /// positively oriented boundary (domain on the left). Interior edges
    /// return `None`.
    pub fn boundary_orientation(&self, edge: usize) -> Option<f64> {
        match self.edge_uses[edge].as_slice() {
            [only] => Some(only.sign),
            _ => None,
        }
    }

    pub fn element_area(&self, element: ElementId) -> f64 {
        match element {
            ElementId::Triangle(t) => {
                let [a, b, c] = self.triangle_points(t);
                0.5 * crate::geometry::signed_area2(a, b, c)
            }
            ElementId::Rectangle(r) => {
                let p = self.rectangle_points(r);
                let mut s = 0.0;
                for i in 0..4 {
                    s += p[i].cross(p[(i + 1) % 4]);
                }
                0.5 * s
            }
        }
    }

    pub fn element_centroid(&self, element: ElementId) -> Point {
        let vs = self.element_vertices(element);
        let mut c = Point::ZERO;
        for &v in vs {
            c += self.vertices[v];
        }
        c * (1.0 / vs.len() as f64)
    }

    pub fn total_area(&self) -> f64 {
        self.elements().map(|e| self.element_area(e)).sum()
    }

    /// Copy of the mesh with one vertex moved. Used to build negative controls.
    pub fn with_vertex_moved(&self, v: usize, to: Point) -> Self {
        let mut m = self.clone();
        m.vertices[v] = to;
        m
    }

    /// Tag list in the form accepted by [`HybridMesh::from_parts`].
    pub fn tag_list(&self) -> Vec<([usize; 2], BoundaryTag)> {
        self.boundary_tags.iter().map(|(&e, &t)| (self.edges[e], t)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square_two_triangles() -> HybridMesh {
        let v = vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ];
        HybridMesh::from_parts(v, vec![[0, 1, 2], [0, 2, 3]], vec![], &[]).unwrap()
    }

    #[test]
    fn edges_are_globally_oriented_low_to_high() {
        let m = unit_square_two_triangles();
        assert_eq!(m.n_edges(), 5);
        for e in m.edges() {
            assert!(e[0] < e[1]);
        }
    }

    #[test]
    fn shared_edge_has_opposite_local_signs() {
        let m = unit_square_two_triangles();
        let diag = m.edges().iter().position(|&e| e == [0, 2]).unwrap();
        let uses = m.edge_uses(diag);
        assert_eq!(uses.len(), 2);
        assert_eq!(uses[0].sign, -uses[1].sign);
    }

    #[test]
    fn local_sign_matches_tangent_direction() {
        let m = unit_square_two_triangles();
        for t in 0..m.n_triangles() {
            let pts = m.triangle_points(t);
            for (k, se) in m.triangle_edges(t).iter().enumerate() {
                let (i, j) = triangle_local_edge(k);
                let local = (pts[j] - pts[i]).normalized();
                let global = m.edge_tangent(se.edge);
                assert!((local.dot(global) - se.sign).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn repeated_vertex_is_rejected() {
        let v = vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)];
        let err = HybridMesh::from_parts(v, vec![[0, 1, 0]], vec![], &[]).unwrap_err();
        assert!(matches!(err, Error::InvalidElement { .. }), "{err}");
    }

    #[test]
    fn tag_names_round_trip() {
        for t in BoundaryTag::ALL {
            assert_eq!(t.name().parse::<BoundaryTag>().unwrap(), t);
        }
        let err = "wall".parse::<BoundaryTag>().unwrap_err();
        assert!(err.contains("left") && err.contains("ball"));
    }
}
