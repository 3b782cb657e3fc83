//! Lowest-order Nedelec element on axis-aligned rectangles.
//!
//! Local edge `l` runs from vertex `l` to vertex `l+1` of the counterclockwise
//! vertex list. The function of a horizontal edge is `(a + b y, 0)` and
//! vanishes on the opposite horizontal edge; vertical edges are analogous.
//! Each function has unit tangential moment on its own edge.

use super::quadrature::{edge_rule, rectangle_rule, LumpingQuadrature, QuadratureRule};
use crate::error::{Error, Result};
use crate::geometry::{Point, Vec2};

#[derive(Clone, Copy, Debug, PartialEq)]
struct EdgeFunction {
    horizontal: bool,
    /// Tangent sign along the axis (+1 or -1).
    tangent_sign: f64,
    /// Coordinate of the edge (y for horizontal, x for vertical).
    at: f64,
    /// Coordinate of the opposite edge.
    opposite: f64,
    /// Length of the edge.
    length: f64,
}

#[derive(Clone, Debug)]
pub struct RectangleElement {
    vertices: [Point; 4],
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    edges: [EdgeFunction; 4],
}

impl RectangleElement {
    pub fn new(vertices: [Point; 4]) -> Result<Self> {
        let xs = vertices.map(|p| p.x);
        let ys = vertices.map(|p| p.y);
        let x0 = xs.iter().copied().fold(f64::INFINITY, f64::min);
        let x1 = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let y0 = ys.iter().copied().fold(f64::INFINITY, f64::min);
        let y1 = ys.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let (hx, hy) = (x1 - x0, y1 - y0);
        let invalid = |reason: String| Error::InvalidElement {
            element: format!("rectangle {:?}", vertices),
            reason,
        };
        if !(hx > 0.0 && hy > 0.0) {
            return Err(invalid("zero extent".into()));
        }
        let tol = 1e-10 * (hx + hy);
        let mut edges = [EdgeFunction {
            horizontal: true,
            tangent_sign: 1.0,
            at: 0.0,
            opposite: 0.0,
            length: 0.0,
        }; 4];
        let mut area2 = 0.0;
        for l in 0..4 {
            let (a, b) = (vertices[l], vertices[(l + 1) % 4]);
            area2 += a.cross(b);
            let d = b - a;
            edges[l] = if d.y.abs() <= tol && d.x.abs() > tol {
                let at = if (a.y - y0).abs() <= tol { y0 } else { y1 };
                EdgeFunction {
                    horizontal: true,
                    tangent_sign: d.x.signum(),
                    at,
                    opposite: if at == y0 { y1 } else { y0 },
                    length: hx,
                }
            } else if d.x.abs() <= tol && d.y.abs() > tol {
                let at = if (a.x - x0).abs() <= tol { x0 } else { x1 };
                EdgeFunction {
                    horizontal: false,
                    tangent_sign: d.y.signum(),
                    at,
                    opposite: if at == x0 { x1 } else { x0 },
                    length: hy,
                }
            } else {
                return Err(invalid(format!("edge {l} is not axis-aligned")));
            };
        }
        if area2 <= 0.0 {
            return Err(invalid("vertices are not counterclockwise".into()));
        }
        Ok(Self {
            vertices,
            x0,
            x1,
            y0,
            y1,
            edges,
        })
    }

    pub fn vertices(&self) -> [Point; 4] {
        self.vertices
    }

    pub fn bounds(&self) -> (f64, f64, f64, f64) {
        (self.x0, self.x1, self.y0, self.y1)
    }

    pub fn area(&self) -> f64 {
        (self.x1 - self.x0) * (self.y1 - self.y0)
    }

    pub fn diameter(&self) -> f64 {
        (self.x1 - self.x0).hypot(self.y1 - self.y0)
    }

    pub fn is_horizontal(&self, l: usize) -> bool {
        self.edges[l].horizontal
    }

    pub fn edge_length(&self, l: usize) -> f64 {
        self.edges[l].length
    }

    /// Unit tangent of local edge `l` in local orientation.
    pub fn tangent(&self, l: usize) -> Vec2 {
        let e = self.edges[l];
        if e.horizontal {
            Vec2::new(e.tangent_sign, 0.0)
        } else {
            Vec2::new(0.0, e.tangent_sign)
        }
    }

    pub fn eval_basis(&self, p: Point) -> [Vec2; 4] {
        self.edges.map(|e| {
            if e.horizontal {
                let s = (p.y - e.opposite) / (e.at - e.opposite);
                Vec2::new(e.tangent_sign * s / e.length, 0.0)
            } else {
                let s = (p.x - e.opposite) / (e.at - e.opposite);
                Vec2::new(0.0, e.tangent_sign * s / e.length)
            }
        })
    }

    /// Curls are constant; the point is accepted for interface symmetry.
    pub fn eval_curl(&self, _p: Point) -> [f64; 4] {
        self.edges.map(|e| {
            if e.horizontal {
                -e.tangent_sign / ((e.at - e.opposite) * e.length)
            } else {
                e.tangent_sign / ((e.at - e.opposite) * e.length)
            }
        })
    }

    pub fn lumping_quadrature(&self) -> LumpingQuadrature {
        LumpingQuadrature::for_rectangle(self.x0, self.x1, self.y0, self.y1)
    }

    pub fn exact_rule(&self, degree: usize) -> QuadratureRule {
        rectangle_rule(self.x0, self.x1, self.y0, self.y1, degree)
    }

    /// Tangential moments in local orientation.
    pub fn dof_functionals<F: Fn(Point) -> Vec2>(&self, field: F, gauss_points: usize) -> [f64; 4] {
        [0, 1, 2, 3].map(|l| {
            let t = self.tangent(l);
            edge_rule(self.vertices[l], self.vertices[(l + 1) % 4], gauss_points)
                .into_iter()
                .map(|(q, w)| w * field(q).dot(t))
                .sum()
        })
    }
}
