use super::dense::DenseMatrix;
use super::quadrature::{LumpingQuadrature, QuadratureRule};
use super::rectangle::RectangleElement;
use super::triangle::TriangleElement;
use crate::error::{Error, Result};
use crate::geometry::{Point, Vec2};
use crate::mesh::{ElementId, HybridMesh};

/// Relative bound on off-diagonal entries of a lumped mass block.
pub const LUMPING_OFF_DIAGONAL_TOL: f64 = 1e-12;

/// Quadrature degree used for the curl-curl block and load vectors.
pub const STIFFNESS_QUADRATURE_DEGREE: usize = 4;

#[derive(Clone, Debug)]
pub enum Element {
    Triangle(TriangleElement),
    Rectangle(RectangleElement),
}

impl Element {
    pub fn from_mesh(mesh: &HybridMesh, id: ElementId) -> Result<Self> {
        match id {
            ElementId::Triangle(t) => Ok(Element::Triangle(TriangleElement::new(mesh.triangle_points(t))?)),
            ElementId::Rectangle(r) => Ok(Element::Rectangle(RectangleElement::new(mesh.rectangle_points(r))?)),
        }
    }

    /// Number of local basis functions (6 on triangles, 4 on rectangles).
    pub fn n_local(&self) -> usize {
        match self {
            Element::Triangle(_) => 6,
            Element::Rectangle(_) => 4,
        }
    }

    /// Number of local edge functions; the rest are bubbles.
    pub fn n_edges(&self) -> usize {
        match self {
            Element::Triangle(_) => 3,
            Element::Rectangle(_) => 4,
        }
    }

    pub fn area(&self) -> f64 {
        match self {
            Element::Triangle(t) => t.area(),
            Element::Rectangle(r) => r.area(),
        }
    }

    pub fn diameter(&self) -> f64 {
        match self {
            Element::Triangle(t) => t.diameter(),
            Element::Rectangle(r) => r.diameter(),
        }
    }

    pub fn eval_basis_into(&self, p: Point, out: &mut [Vec2]) {
        match self {
            Element::Triangle(t) => out[..6].copy_from_slice(&t.eval_basis(p)),
            Element::Rectangle(r) => out[..4].copy_from_slice(&r.eval_basis(p)),
        }
    }

    pub fn eval_curl_into(&self, p: Point, out: &mut [f64]) {
        match self {
            Element::Triangle(t) => out[..6].copy_from_slice(&t.eval_curl(p)),
            Element::Rectangle(r) => out[..4].copy_from_slice(&r.eval_curl(p)),
        }
    }

    pub fn lumping_quadrature(&self) -> LumpingQuadrature {
        match self {
            Element::Triangle(t) => t.lumping_quadrature(),
            Element::Rectangle(r) => r.lumping_quadrature(),
        }
    }

    pub fn exact_rule(&self, degree: usize) -> QuadratureRule {
        match self {
            Element::Triangle(t) => t.exact_rule(degree),
            Element::Rectangle(r) => r.exact_rule(degree),
        }
    }

    pub fn dof_functionals<F: Fn(Point) -> Vec2>(&self, field: F, gauss_points: usize) -> Vec<f64> {
        match self {
            Element::Triangle(t) => t.dof_functionals(field, gauss_points).to_vec(),
            Element::Rectangle(r) => r.dof_functionals(field, gauss_points).to_vec(),
        }
    }

    /// Field value for local coefficients `coeffs`.
    pub fn reconstruct(&self, coeffs: &[f64], p: Point) -> Vec2 {
        eval_basis(self, p)
            .iter()
            .zip(coeffs)
            .fold(Vec2::ZERO, |acc, (&phi, &c)| acc + phi * c)
    }

    pub fn reconstruct_curl(&self, coeffs: &[f64], p: Point) -> f64 {
        eval_curl_basis(self, p).iter().zip(coeffs).map(|(c, u)| c * u).sum()
    }
}

pub fn eval_basis(element: &Element, p: Point) -> Vec<Vec2> {
    let mut out = vec![Vec2::ZERO; element.n_local()];
    element.eval_basis_into(p, &mut out);
    out
}

pub fn eval_curl_basis(element: &Element, p: Point) -> Vec<f64> {
    let mut out = vec![0.0; element.n_local()];
    element.eval_curl_into(p, &mut out);
    out
}

/// Per-element blocks of the semi-discrete system.
#[derive(Clone, Debug)]
pub struct LocalElementMatrices {
    pub mass_diag: Vec<f64>,
    pub stiffness: DenseMatrix,
}

/// Full matrix produced by the lumping quadrature on all basis pairs.
pub fn lumped_mass_matrix(element: &Element) -> DenseMatrix {
    let n = element.n_local();
    let mut m = DenseMatrix::zeros(n);
    match element.lumping_quadrature() {
        LumpingQuadrature::Triangle { midpoints, weight } => {
            for q in midpoints {
                let phi = eval_basis(element, q);
                for a in 0..n {
                    for b in 0..n {
                        m.add(a, b, weight * phi[a].dot(phi[b]));
                    }
                }
            }
        }
        LumpingQuadrature::Rectangle {
            horizontal_midpoints,
            vertical_midpoints,
            weight,
        } => {
            for q in horizontal_midpoints {
                let phi = eval_basis(element, q);
                for a in 0..n {
                    for b in 0..n {
                        m.add(a, b, weight * phi[a].x * phi[b].x);
                    }
                }
            }
            for q in vertical_midpoints {
                let phi = eval_basis(element, q);
                for a in 0..n {
                    for b in 0..n {
                        m.add(a, b, weight * phi[a].y * phi[b].y);
                    }
                }
            }
        }
    }
    m
}

/// Diagonal of the lumped mass block. Fails if an entry is not positive or
/// the block is not diagonal to [`LUMPING_OFF_DIAGONAL_TOL`].
pub fn local_mass_lumped(element: &Element) -> Result<Vec<f64>> {
    let full = lumped_mass_matrix(element);
    let diag = full.diagonal();
    let max_diag = diag.iter().fold(0.0f64, |a, &b| a.max(b));
    for (i, &d) in diag.iter().enumerate() {
        if !(d > 0.0) {
            return Err(Error::LumpingFailure {
                location: format!("local dof {i} of element with vertices {:?}", vertices(element)),
                value: d,
            });
        }
    }
    let off = full.max_abs_off_diagonal();
    if off > LUMPING_OFF_DIAGONAL_TOL * max_diag {
        return Err(Error::LumpingFailure {
            location: format!("off-diagonal of element with vertices {:?}", vertices(element)),
            value: off,
        });
    }
    Ok(diag)
}

fn vertices(element: &Element) -> Vec<Point> {
    match element {
        Element::Triangle(t) => t.vertices().to_vec(),
        Element::Rectangle(r) => r.vertices().to_vec(),
    }
}

/// Exact curl-curl block.
pub fn local_stiffness(element: &Element) -> DenseMatrix {
    let n = element.n_local();
    let rule = element.exact_rule(STIFFNESS_QUADRATURE_DEGREE);
    let mut k = DenseMatrix::zeros(n);
    let mut curl = vec![0.0; n];
    for (&q, &w) in rule.points.iter().zip(&rule.weights) {
        element.eval_curl_into(q, &mut curl);
        for a in 0..n {
            for b in a..n {
                k.add(a, b, w * curl[a] * curl[b]);
            }
        }
    }
    for a in 0..n {
        for b in 0..a {
            k.set(a, b, k.get(b, a));
        }
    }
    k
}

/// Exact L2 mass block (not used by the scheme; reference for the
/// quadrature-error functional and norm equivalence).
pub fn local_consistent_mass(element: &Element) -> DenseMatrix {
    let n = element.n_local();
    let rule = element.exact_rule(4);
    let mut m = DenseMatrix::zeros(n);
    let mut phi = vec![Vec2::ZERO; n];
    for (&q, &w) in rule.points.iter().zip(&rule.weights) {
        element.eval_basis_into(q, &mut phi);
        for a in 0..n {
            for b in a..n {
                m.add(a, b, w * phi[a].dot(phi[b]));
            }
        }
    }
    for a in 0..n {
        for b in 0..a {
            m.set(a, b, m.get(b, a));
        }
    }
    m
}

pub fn local_matrices(element: &Element) -> Result<LocalElementMatrices> {
    Ok(LocalElementMatrices {
        mass_diag: local_mass_lumped(element)?,
        stiffness: local_stiffness(element),
    })
}
