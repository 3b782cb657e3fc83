use std::collections::HashMap;

use spade::{ConstrainedDelaunayTriangulation, Point2, Triangulation};

use super::{BoundaryTag, HybridMesh};
use crate::error::{Error, Result};
use crate::geometry::{signed_area2, Point};

pub const DEMO_INTERFACE_X: f64 = 2.0;
pub const DEMO_BALL_CENTER: Point = Point::new(3.0, 0.0);
pub const DEMO_BALL_RADIUS: f64 = 0.3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundingBox {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl BoundingBox {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self> {
        let b = Self { x0, x1, y0, y1 };
        b.check()?;
        Ok(b)
    }

    pub const fn unit() -> Self {
        Self {
            x0: 0.0,
            x1: 1.0,
            y0: 0.0,
            y1: 1.0,
        }
    }

    fn check(&self) -> Result<()> {
        let finite = [self.x0, self.x1, self.y0, self.y1].iter().all(|v| v.is_finite());
        if !finite || self.x1 <= self.x0 || self.y1 <= self.y0 {
            return Err(Error::InvalidGeometry(format!(
                "degenerate bounding box [{}, {}] x [{}, {}]",
                self.x0, self.x1, self.y0, self.y1
            )));
        }
        Ok(())
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }
}

/// Diagonal choice when splitting grid cells into two triangles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitDirection {
    /// Diagonal from lower-left to upper-right corner.
    Right,
    /// Diagonal from lower-right to upper-left corner.
    Left,
    /// Checkerboard alternation of the two.
    Alternating,
}

impl std::str::FromStr for SplitDirection {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "right" => Ok(Self::Right),
            "left" => Ok(Self::Left),
            "alternating" => Ok(Self::Alternating),
            _ => Err(format!(
                "unknown split direction `{s}` (expected right, left, alternating)"
            )),
        }
    }
}

pub fn build_structured_rect_mesh(nx: usize, ny: usize, bbox: BoundingBox) -> Result<HybridMesh> {
    build_structured_hybrid_mesh(nx, ny, bbox, nx, SplitDirection::Right)
}

pub fn build_structured_tri_mesh(nx: usize, ny: usize, bbox: BoundingBox, split: SplitDirection) -> Result<HybridMesh> {
    build_structured_hybrid_mesh(nx, ny, bbox, 0, split)
}

/// Tensor grid with the first `rect_columns` columns of cells kept as
/// rectangles and the remaining columns split into triangles. Outer edges are
/// tagged left/right/bottom/top; interior edges on the rectangle/triangle
/// interface are tagged `interface`.
pub fn build_structured_hybrid_mesh(
    nx: usize,
    ny: usize,
    bbox: BoundingBox,
    rect_columns: usize,
    split: SplitDirection,
) -> Result<HybridMesh> {
    if nx == 0 || ny == 0 {
        return Err(Error::InvalidGeometry(format!(
            "cell counts must be at least 1 (got nx = {nx}, ny = {ny})"
        )));
    }
    if rect_columns > nx {
        return Err(Error::InvalidGeometry(format!(
            "rect_columns = {rect_columns} exceeds nx = {nx}"
        )));
    }
    bbox.check()?;

    let id = |i: usize, j: usize| j * (nx + 1) + i;
    let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        let y = grid_coord(bbox.y0, bbox.y1, j, ny);
        for i in 0..=nx {
            vertices.push(Point::new(grid_coord(bbox.x0, bbox.x1, i, nx), y));
        }
    }

    let mut triangles = Vec::new();
    let mut rectangles = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            if i < rect_columns {
                rectangles.push([a, b, c, d]);
                continue;
            }
            let right = match split {
                SplitDirection::Right => true,
                SplitDirection::Left => false,
                SplitDirection::Alternating => (i + j) % 2 == 0,
            };
            if right {
                triangles.push([a, b, c]);
                triangles.push([a, c, d]);
            } else {
                triangles.push([a, b, d]);
                triangles.push([b, c, d]);
            }
        }
    }

    let mut tags = Vec::new();
    for i in 0..nx {
        tags.push(([id(i, 0), id(i + 1, 0)], BoundaryTag::Bottom));
        tags.push(([id(i, ny), id(i + 1, ny)], BoundaryTag::Top));
    }
    for j in 0..ny {
        tags.push(([id(0, j), id(0, j + 1)], BoundaryTag::Left));
        tags.push(([id(nx, j), id(nx, j + 1)], BoundaryTag::Right));
        if rect_columns > 0 && rect_columns < nx {
            tags.push(([id(rect_columns, j), id(rect_columns, j + 1)], BoundaryTag::Interface));
        }
    }

    HybridMesh::from_parts(vertices, triangles, rectangles, &tags)
}

fn grid_coord(lo: f64, hi: f64, i: usize, n: usize) -> f64 {
    if i == n {
        hi
    } else {
        lo + (hi - lo) * (i as f64) / (n as f64)
    }
}

/// Hybrid mesh of the scattering domain: squares on `(0,2) x (-1,1)` and a
/// constrained Delaunay triangulation of `((2,4) x (-1,1))` minus the disc of
/// radius 0.3 around `(3,0)`, the disc replaced by an inscribed
/// `n_circle`-gon. The two parts share the vertices on `x = 2`.
pub fn build_scattering_demo_mesh(h: f64, n_circle: usize) -> Result<HybridMesh> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::InvalidGeometry(format!(
            "target edge length must be positive (got {h})"
        )));
    }
    if h >= DEMO_BALL_RADIUS {
        return Err(Error::InvalidGeometry(format!(
            "h = {h} cannot resolve the hole of radius {DEMO_BALL_RADIUS}; use h < {DEMO_BALL_RADIUS}"
        )));
    }
    if n_circle < 8 {
        return Err(Error::InvalidGeometry(format!(
            "the hole needs at least 8 boundary segments (got {n_circle})"
        )));
    }

    // n cells per unit-2 side; spacing s on every straight boundary
    let n = (2.0 / h).round().max(1.0) as usize;
    let s = 2.0 / n as f64;
    let (y0, y1) = (-1.0, 1.0);
    let x_mid = DEMO_INTERFACE_X;
    let x_end = 4.0;

    let rect = build_structured_rect_mesh(n, n, BoundingBox::new(0.0, x_mid, y0, y1)?)?;
    let mut vertices = rect.vertices().to_vec();
    let rectangles = rect.rectangles().to_vec();
    let rid = |i: usize, j: usize| j * (n + 1) + i;

    let mut tags = Vec::new();
    for j in 0..n {
        tags.push(([rid(0, j), rid(0, j + 1)], BoundaryTag::Left));
        tags.push(([rid(n, j), rid(n, j + 1)], BoundaryTag::Interface));
    }
    for i in 0..n {
        tags.push(([rid(i, 0), rid(i + 1, 0)], BoundaryTag::Other));
        tags.push(([rid(i, n), rid(i + 1, n)], BoundaryTag::Other));
    }

    // triangulated part: boundary loop counterclockwise starting at (2,-1)
    let mut outer: Vec<usize> = vec![rid(n, 0)];
    for i in 1..=n {
        outer.push(push_vertex(
            &mut vertices,
            Point::new(grid_coord(x_mid, x_end, i, n), y0),
        ));
    }
    for j in 1..=n {
        outer.push(push_vertex(&mut vertices, Point::new(x_end, grid_coord(y0, y1, j, n))));
    }
    for i in (1..n).rev() {
        outer.push(push_vertex(
            &mut vertices,
            Point::new(grid_coord(x_mid, x_end, i, n), y1),
        ));
    }
    for j in (1..=n).rev() {
        outer.push(rid(n, j));
    }
    for k in 0..outer.len() {
        let (a, b) = (outer[k], outer[(k + 1) % outer.len()]);
        let pa = vertices[a];
        let pb = vertices[b];
        if (pa.x - x_mid).abs() < 1e-12 && (pb.x - x_mid).abs() < 1e-12 {
            continue; // interface, already tagged
        }
        tags.push(([a, b], BoundaryTag::Other));
    }

    let c = DEMO_BALL_CENTER;
    let r = DEMO_BALL_RADIUS;
    let hole: Vec<usize> = (0..n_circle)
        .map(|k| {
            let phi = 2.0 * std::f64::consts::PI * k as f64 / n_circle as f64;
            push_vertex(&mut vertices, Point::new(c.x + r * phi.cos(), c.y + r * phi.sin()))
        })
        .collect();
    for k in 0..n_circle {
        tags.push(([hole[k], hole[(k + 1) % n_circle]], BoundaryTag::Ball));
    }

    // interior points on a hexagonal lattice of spacing s
    let margin = 0.6 * s;
    let row_dy = s * 3f64.sqrt() / 2.0;
    let mut interior = Vec::new();
    let mut row = 0usize;
    loop {
        let y = y0 + row_dy * (row as f64 + 0.5);
        if y > y1 - margin {
            break;
        }
        if y >= y0 + margin {
            let offset = if row.is_multiple_of(2) { 0.0 } else { 0.5 * s };
            let mut x = x_mid + offset;
            while x <= x_end - margin {
                let p = Point::new(x, y);
                if x >= x_mid + margin && (p - c).norm() >= r + margin {
                    interior.push(p);
                }
                x += s;
            }
        }
        row += 1;
    }
    let interior_ids: Vec<usize> = interior.iter().map(|&p| push_vertex(&mut vertices, p)).collect();

    let mut cdt: ConstrainedDelaunayTriangulation<Point2<f64>> = ConstrainedDelaunayTriangulation::new();
    let mut handle_to_vertex: HashMap<usize, usize> = HashMap::new();
    let mut vertex_to_handle: HashMap<usize, spade::handles::FixedVertexHandle> = HashMap::new();
    for &v in outer.iter().chain(hole.iter()).chain(interior_ids.iter()) {
        let p = vertices[v];
        let handle = cdt
            .insert(Point2::new(p.x, p.y))
            .map_err(|e| Error::InvalidGeometry(format!("triangulation failed: {e:?}")))?;
        if handle_to_vertex.insert(handle.index(), v).is_some() {
            return Err(Error::InvalidGeometry(format!(
                "duplicate triangulation point at {:?}",
                p
            )));
        }
        vertex_to_handle.insert(v, handle);
    }
    for loop_ in [&outer, &hole] {
        for k in 0..loop_.len() {
            let a = vertex_to_handle[&loop_[k]];
            let b = vertex_to_handle[&loop_[(k + 1) % loop_.len()]];
            cdt.add_constraint(a, b);
        }
    }

    let mut triangles = Vec::new();
    for face in cdt.inner_faces() {
        let vs = face.vertices().map(|v| handle_to_vertex[&v.fix().index()]);
        let p = vs.map(|v| vertices[v]);
        let centroid = (p[0] + p[1] + p[2]) * (1.0 / 3.0);
        if point_in_polygon(centroid, &hole.iter().map(|&v| vertices[v]).collect::<Vec<_>>()) {
            continue;
        }
        if signed_area2(p[0], p[1], p[2]) > 0.0 {
            triangles.push(vs);
        } else {
            triangles.push([vs[0], vs[2], vs[1]]);
        }
    }
    triangles.sort_unstable();

    HybridMesh::from_parts(vertices, triangles, rectangles, &tags)
}

fn push_vertex(vertices: &mut Vec<Point>, p: Point) -> usize {
    vertices.push(p);
    vertices.len() - 1
}

fn point_in_polygon(p: Point, poly: &[Point]) -> bool {
    let mut inside = false;
    let n = poly.len();
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if p.x < x {
                inside = !inside;
            }
        }
    }
    inside
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::validate_mesh;

    #[test]
    fn single_rectangle() {
        let m = build_structured_rect_mesh(1, 1, BoundingBox::unit()).unwrap();
        assert_eq!((m.n_rectangles(), m.n_edges(), m.n_vertices()), (1, 4, 4));
    }

    #[test]
    fn rect_edge_count_formula() {
        for (nx, ny) in [(2, 2), (3, 5), (7, 1)] {
            let m = build_structured_rect_mesh(nx, ny, BoundingBox::unit()).unwrap();
            assert_eq!(m.n_rectangles(), nx * ny);
            assert_eq!(m.n_edges(), nx * (ny + 1) + ny * (nx + 1));
            assert_eq!(m.n_vertices(), (nx + 1) * (ny + 1));
            validate_mesh(&m).unwrap();
        }
    }

    #[test]
    fn zero_cells_is_an_error() {
        assert!(build_structured_rect_mesh(0, 1, BoundingBox::unit()).is_err());
        assert!(BoundingBox::new(0.0, 0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn tri_edge_count_is_split_independent() {
        let one = build_structured_tri_mesh(1, 1, BoundingBox::unit(), SplitDirection::Right).unwrap();
        assert_eq!((one.n_triangles(), one.n_edges()), (2, 5));
        for split in [SplitDirection::Right, SplitDirection::Left, SplitDirection::Alternating] {
            let m = build_structured_tri_mesh(2, 2, BoundingBox::unit(), split).unwrap();
            assert_eq!(m.n_triangles(), 8);
            assert_eq!(m.n_edges(), 2 * 3 + 2 * 3 + 4);
            validate_mesh(&m).unwrap();
        }
    }

    #[test]
    fn hybrid_box_tags_interface() {
        let m = build_structured_hybrid_mesh(4, 3, BoundingBox::unit(), 2, SplitDirection::Right).unwrap();
        validate_mesh(&m).unwrap();
        let iface: Vec<_> = m.edges_with_tag(BoundaryTag::Interface).collect();
        assert_eq!(iface.len(), 3);
        for e in iface {
            let [a, b] = m.edge_points(e);
            assert!((a.x - 0.5).abs() < 1e-15 && (b.x - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn demo_mesh_refuses_coarse_h() {
        assert!(build_scattering_demo_mesh(0.3, 16).is_err());
        assert!(build_scattering_demo_mesh(0.1, 6).is_err());
    }

    #[test]
    fn point_in_polygon_square() {
        let sq = [
            Point::new(0., 0.),
            Point::new(1., 0.),
            Point::new(1., 1.),
            Point::new(0., 1.),
        ];
        assert!(point_in_polygon(Point::new(0.5, 0.5), &sq));
        assert!(!point_in_polygon(Point::new(1.5, 0.5), &sq));
    }
}
