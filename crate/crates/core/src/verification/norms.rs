use std::fmt;
use std::str::FromStr;

use crate::assembly::DofMap;
use crate::error::{Error, Result};
use crate::fem_local::Element;
use crate::geometry::{Point, Vec2};
use crate::mesh::{
    build_structured_hybrid_mesh, build_structured_rect_mesh, build_structured_tri_mesh, BoundingBox, ElementId,
    HybridMesh, SplitDirection,
};

/// Quadrature degree for error integrals.
pub const ERROR_QUADRATURE_DEGREE: usize = 6;

/// Unit-square mesh families used by the studies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MeshFamily {
    Rect,
    Tri,
    /// Rectangles on the left half, triangles on the right half.
    Hybrid,
}

impl MeshFamily {
    pub const ALL: [MeshFamily; 3] = [MeshFamily::Rect, MeshFamily::Tri, MeshFamily::Hybrid];

    /// Mesh with `n x n` cells on the unit square.
    pub fn build(self, n: usize) -> Result<HybridMesh> {
        let bbox = BoundingBox::unit();
        match self {
            MeshFamily::Rect => build_structured_rect_mesh(n, n, bbox),
            MeshFamily::Tri => build_structured_tri_mesh(n, n, bbox, SplitDirection::Right),
            MeshFamily::Hybrid => {
                if !n.is_multiple_of(2) {
                    return Err(Error::Verification(format!(
                        "hybrid family needs an even cell count, got {n}"
                    )));
                }
                build_structured_hybrid_mesh(n, n, bbox, n / 2, SplitDirection::Right)
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MeshFamily::Rect => "rect",
            MeshFamily::Tri => "tri",
            MeshFamily::Hybrid => "hybrid",
        }
    }
}

impl fmt::Display for MeshFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MeshFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MeshFamily::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown mesh family `{s}` (expected rect, tri or hybrid)")))
    }
}

/// Observed order between consecutive levels: `log(e0/e1) / log(h0/h1)`.
pub fn observed_rate(e0: f64, e1: f64, h0: f64, h1: f64) -> f64 {
    (e0 / e1).ln() / (h0 / h1).ln()
}

struct QuadPoint {
    point: Point,
    weight: f64,
    phi: [Vec2; 6],
    curl: [f64; 6],
}

struct ElementQuadrature {
    id: ElementId,
    points: Vec<QuadPoint>,
}

/// Cached basis values at the error quadrature points of every element.
pub struct ErrorEvaluator<'m> {
    dofmap: &'m DofMap,
    elements: Vec<ElementQuadrature>,
}

impl<'m> ErrorEvaluator<'m> {
    pub fn new(mesh: &HybridMesh, dofmap: &'m DofMap) -> Result<Self> {
        Self::with_degree(mesh, dofmap, ERROR_QUADRATURE_DEGREE)
    }

    pub fn with_degree(mesh: &HybridMesh, dofmap: &'m DofMap, degree: usize) -> Result<Self> {
        let mut elements = Vec::with_capacity(mesh.n_elements());
        for id in mesh.elements() {
            let el = Element::from_mesh(mesh, id)?;
            let rule = el.exact_rule(degree);
            let points = rule
                .points
                .iter()
                .zip(&rule.weights)
                .map(|(&point, &weight)| {
                    let mut q = QuadPoint {
                        point,
                        weight,
                        phi: [Vec2::ZERO; 6],
                        curl: [0.0; 6],
                    };
                    el.eval_basis_into(point, &mut q.phi);
                    el.eval_curl_into(point, &mut q.curl);
                    q
                })
                .collect();
            elements.push(ElementQuadrature { id, points });
        }
        Ok(Self { dofmap, elements })
    }

    /// `(||E_h - E||, ||curl E_h - curl E||)` in L2.
    pub fn errors<F, C>(&self, coeffs: &[f64], field: F, curl: C) -> (f64, f64)
    where
        F: Fn(Point) -> Vec2,
        C: Fn(Point) -> f64,
    {
        let (mut e2, mut c2) = (0.0, 0.0);
        let mut local = Vec::with_capacity(6);
        for el in &self.elements {
            self.dofmap.gather(el.id, coeffs, &mut local);
            for q in &el.points {
                let mut v = Vec2::ZERO;
                let mut c = 0.0;
                for (a, &u) in local.iter().enumerate() {
                    v += q.phi[a] * u;
                    c += q.curl[a] * u;
                }
                e2 += q.weight * (v - field(q.point)).dot(v - field(q.point));
                let dc = c - curl(q.point);
                c2 += q.weight * dc * dc;
            }
        }
        (e2.sqrt(), c2.sqrt())
    }

    /// L2 error of the field only.
    pub fn field_error<F: Fn(Point) -> Vec2>(&self, coeffs: &[f64], field: F) -> f64 {
        self.errors(coeffs, field, |_| 0.0).0
    }

    /// L2 distance between an elementwise constant field (one value per
    /// element, in mesh element order) and `field`.
    pub fn piecewise_constant_error<F: Fn(Point) -> Vec2>(&self, values: &[Vec2], field: F) -> f64 {
        let mut e2 = 0.0;
        for (el, &v) in self.elements.iter().zip(values) {
            for q in &el.points {
                let d = v - field(q.point);
                e2 += q.weight * d.dot(d);
            }
        }
        e2.sqrt()
    }
}

/// Errors of a leapfrog state against an exact solution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorNorms {
    /// `||(e - e_prev)/dt - dt E(t - dt/2)||`.
    pub err_dt_e: f64,
    pub err_e: f64,
    pub err_curl: f64,
}

/// Error norms of `coeffs` at `t` and of `velocity` at `t_velocity`.
pub fn l2_errors(
    evaluator: &ErrorEvaluator<'_>,
    coeffs: &[f64],
    velocity: &[f64],
    exact: &super::ExactSolution,
    t: f64,
    t_velocity: f64,
) -> ErrorNorms {
    let (err_e, err_curl) = evaluator.errors(coeffs, |p| (exact.field)(p, t), |p| (exact.curl)(p, t));
    let err_dt_e = evaluator.field_error(velocity, |p| (exact.dt_field)(p, t_velocity));
    ErrorNorms {
        err_dt_e,
        err_e,
        err_curl,
    }
}
