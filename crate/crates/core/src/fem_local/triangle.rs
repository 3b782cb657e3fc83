//! Enriched lowest-order Nedelec element on triangles.
//!
//! Local edge `k` is opposite vertex `k` and runs from vertex `i = k+1` to
//! vertex `j = k+2` (indices mod 3). For each edge two functions are used:
//!
//! * the bubble `lambda_i lambda_j grad(lambda_k)`, which has no tangential
//!   trace on any edge and vanishes at every edge midpoint except `m_k`;
//! * the modified Whitney function
//!   `lambda_i grad(lambda_j) - lambda_j grad(lambda_i) + sum_m c[k][m] bubble_m`,
//!   whose coefficients cancel its normal component at every edge midpoint.
//!
//! With this choice only two basis functions are nonzero at a midpoint, one
//! tangential and one normal, so the midpoint lumping rule gives a diagonal
//! mass matrix. Local basis order is `[W0, W1, W2, B0, B1, B2]`.
//!
//! Degrees of freedom: the tangential moment along each edge (local
//! orientation) and, for bubbles, `|e_m| * (u(m_m) . n_m)` with `n_m` the
//! inward unit normal of edge `m`. Bubbles are rescaled so that this
//! functional equals one on its own bubble.

use super::quadrature::{edge_rule, triangle_rule, LumpingQuadrature, QuadratureRule};
use crate::error::{Error, Result};
use crate::geometry::{signed_area2, Point, Vec2};

/// Barycentric gradients of a counterclockwise triangle.
pub fn barycentric_gradients(p: [Point; 3]) -> Result<[Vec2; 3]> {
    let area2 = signed_area2(p[0], p[1], p[2]);
    let scale = (p[1] - p[0]).norm().max((p[2] - p[0]).norm());
    if !(area2 > 1e-14 * scale * scale) {
        return Err(Error::InvalidElement {
            element: format!("triangle {:?}", p),
            reason: format!("non-positive area (2|K| = {area2:e})"),
        });
    }
    Ok([0, 1, 2].map(|k| {
        let e = p[(k + 2) % 3] - p[(k + 1) % 3];
        e.perp() * (1.0 / area2)
    }))
}

/// Coefficients of a modified edge function with respect to the unscaled
/// bubbles, in the `alpha, beta, gamma` convention: `alpha` multiplies the
/// bubble of the same edge `ij`, `beta` the bubble of edge `jk` and `gamma`
/// the bubble of edge `ki`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BubbleCoefficients {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

#[derive(Clone, Debug)]
pub struct TriangleElement {
    vertices: [Point; 3],
    area: f64,
    grads: [Vec2; 3],
    edge_len: [f64; 3],
    /// Unit tangents in local orientation.
    tangents: [Vec2; 3],
    /// Inward unit normals.
    normals: [Vec2; 3],
    midpoints: [Point; 3],
    /// `coeff[k][m]`: weight of unscaled bubble `m` in modified function `k`.
    coeff: [[f64; 3]; 3],
    /// Factor turning the unscaled bubble into the DOF-normalized one.
    bubble_scale: [f64; 3],
}

#[inline]
fn edge_vertices(k: usize) -> (usize, usize) {
    ((k + 1) % 3, (k + 2) % 3)
}

impl TriangleElement {
    pub fn new(vertices: [Point; 3]) -> Result<Self> {
        let grads = barycentric_gradients(vertices)?;
        let area = 0.5 * signed_area2(vertices[0], vertices[1], vertices[2]);
        let mut edge_len = [0.0; 3];
        let mut tangents = [Vec2::ZERO; 3];
        let mut normals = [Vec2::ZERO; 3];
        let mut midpoints = [Point::ZERO; 3];
        for k in 0..3 {
            let (i, j) = edge_vertices(k);
            let e = vertices[j] - vertices[i];
            edge_len[k] = e.norm();
            tangents[k] = e * (1.0 / edge_len[k]);
            normals[k] = grads[k].normalized();
            midpoints[k] = vertices[i].midpoint(vertices[j]);
        }
        let mut el = Self {
            vertices,
            area,
            grads,
            edge_len,
            tangents,
            normals,
            midpoints,
            coeff: [[0.0; 3]; 3],
            bubble_scale: [0.0; 3],
        };
        el.coeff = el.solve_coefficients()?;
        for m in 0..3 {
            // |e_m| * n_m . (1/4 grad lambda_m) = |e_m| |grad lambda_m| / 4
            el.bubble_scale[m] = 4.0 / (el.edge_len[m] * el.grads[m].norm());
        }
        Ok(el)
    }

    /// Each unscaled bubble is nonzero at exactly one midpoint, so the 3x3
    /// system for the coefficients is diagonal.
    fn solve_coefficients(&self) -> Result<[[f64; 3]; 3]> {
        let mut coeff = [[0.0; 3]; 3];
        for m in 0..3 {
            let lam = midpoint_barycentric(m);
            let bubble_normal = self.unscaled_bubble(m, lam).dot(self.normals[m]);
            if !(bubble_normal.abs() > f64::EPSILON * self.grads[m].norm()) {
                return Err(Error::SingularBubbleSystem(format!("{:?}", self.vertices)));
            }
            for (k, row) in coeff.iter_mut().enumerate() {
                row[m] = -self.whitney(k, lam).dot(self.normals[m]) / bubble_normal;
            }
        }
        Ok(coeff)
    }

    /// The same coefficients from a dense 3x3 solve per edge function, kept
    /// as an independent cross-check of the decoupled formula.
    pub fn solve_coefficients_dense(&self) -> Result<[[f64; 3]; 3]> {
        let mut a = [[0.0; 3]; 3];
        for (m, row) in a.iter_mut().enumerate() {
            let lam = midpoint_barycentric(m);
            for (mm, entry) in row.iter_mut().enumerate() {
                *entry = self.unscaled_bubble(mm, lam).dot(self.normals[m]);
            }
        }
        let mut out = [[0.0; 3]; 3];
        for (k, row) in out.iter_mut().enumerate() {
            let rhs = [0, 1, 2].map(|m| -self.whitney(k, midpoint_barycentric(m)).dot(self.normals[m]));
            *row = solve3(a, rhs).ok_or_else(|| Error::SingularBubbleSystem(format!("{:?}", self.vertices)))?;
        }
        Ok(out)
    }

    pub fn vertices(&self) -> [Point; 3] {
        self.vertices
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn gradients(&self) -> [Vec2; 3] {
        self.grads
    }

    pub fn edge_lengths(&self) -> [f64; 3] {
        self.edge_len
    }

    pub fn tangents(&self) -> [Vec2; 3] {
        self.tangents
    }

    pub fn normals(&self) -> [Vec2; 3] {
        self.normals
    }

    pub fn midpoints(&self) -> [Point; 3] {
        self.midpoints
    }

    pub fn diameter(&self) -> f64 {
        self.edge_len.iter().fold(0.0f64, |a, &b| a.max(b))
    }

    /// Raw coefficient table `coeff[k][m]`.
    pub fn coefficient_table(&self) -> [[f64; 3]; 3] {
        self.coeff
    }

    pub fn bubble_coefficients(&self) -> [BubbleCoefficients; 3] {
        [0, 1, 2].map(|k| {
            let (i, j) = edge_vertices(k);
            // bubble of edge jk is opposite i, bubble of edge ki is opposite j
            BubbleCoefficients {
                alpha: self.coeff[k][k],
                beta: self.coeff[k][i],
                gamma: self.coeff[k][j],
            }
        })
    }

    pub fn barycentric(&self, p: Point) -> [f64; 3] {
        let v = self.vertices;
        [0, 1, 2].map(|k| self.grads[k].dot(p - v[(k + 1) % 3]))
    }

    #[inline]
    fn whitney(&self, k: usize, lam: [f64; 3]) -> Vec2 {
        let (i, j) = edge_vertices(k);
        self.grads[j] * lam[i] - self.grads[i] * lam[j]
    }

    #[inline]
    fn unscaled_bubble(&self, m: usize, lam: [f64; 3]) -> Vec2 {
        let (i, j) = edge_vertices(m);
        self.grads[m] * (lam[i] * lam[j])
    }

    #[inline]
    fn whitney_curl(&self, k: usize) -> f64 {
        let (i, j) = edge_vertices(k);
        2.0 * self.grads[i].cross(self.grads[j])
    }

    #[inline]
    fn unscaled_bubble_curl(&self, m: usize, lam: [f64; 3]) -> f64 {
        let (i, j) = edge_vertices(m);
        lam[j] * self.grads[i].cross(self.grads[m]) + lam[i] * self.grads[j].cross(self.grads[m])
    }

    /// Unmodified Whitney function of local edge `k`.
    pub fn eval_whitney(&self, k: usize, p: Point) -> Vec2 {
        self.whitney(k, self.barycentric(p))
    }

    /// Unscaled bubble `lambda_i lambda_j grad(lambda_k)` of local edge `m`.
    pub fn eval_unscaled_bubble(&self, m: usize, p: Point) -> Vec2 {
        self.unscaled_bubble(m, self.barycentric(p))
    }

    pub fn eval_basis(&self, p: Point) -> [Vec2; 6] {
        self.eval_basis_bary(self.barycentric(p))
    }

    pub fn eval_basis_bary(&self, lam: [f64; 3]) -> [Vec2; 6] {
        let bubbles = [0, 1, 2].map(|m| self.unscaled_bubble(m, lam));
        let mut out = [Vec2::ZERO; 6];
        for k in 0..3 {
            let mut w = self.whitney(k, lam);
            for m in 0..3 {
                w += bubbles[m] * self.coeff[k][m];
            }
            out[k] = w;
            out[3 + k] = bubbles[k] * self.bubble_scale[k];
        }
        out
    }

    pub fn eval_curl(&self, p: Point) -> [f64; 6] {
        self.eval_curl_bary(self.barycentric(p))
    }

    pub fn eval_curl_bary(&self, lam: [f64; 3]) -> [f64; 6] {
        let bubbles = [0, 1, 2].map(|m| self.unscaled_bubble_curl(m, lam));
        let mut out = [0.0; 6];
        for k in 0..3 {
            let mut c = self.whitney_curl(k);
            for m in 0..3 {
                c += bubbles[m] * self.coeff[k][m];
            }
            out[k] = c;
            out[3 + k] = bubbles[k] * self.bubble_scale[k];
        }
        out
    }

    pub fn lumping_quadrature(&self) -> LumpingQuadrature {
        LumpingQuadrature::for_triangle(self.vertices)
    }

    pub fn exact_rule(&self, degree: usize) -> QuadratureRule {
        triangle_rule(self.vertices, degree)
    }

    /// Degree-of-freedom functionals applied to a field: 3 tangential
    /// moments (local orientation, `gauss_points`-point Gauss) followed by
    /// 3 scaled midpoint normal components.
    pub fn dof_functionals<F: Fn(Point) -> Vec2>(&self, field: F, gauss_points: usize) -> [f64; 6] {
        let mut out = [0.0; 6];
        for k in 0..3 {
            let (i, j) = edge_vertices(k);
            out[k] = edge_rule(self.vertices[i], self.vertices[j], gauss_points)
                .into_iter()
                .map(|(q, w)| w * field(q).dot(self.tangents[k]))
                .sum();
            out[3 + k] = self.edge_len[k] * field(self.midpoints[k]).dot(self.normals[k]);
        }
        out
    }

    /// Coefficients, in this element's local basis, of the lowest-order
    /// Nedelec interpolant `sum_k moment_k * Whitney_k`: the tangential
    /// moments plus the bubble components needed to undo the modification.
    pub fn whitney_interpolant_dofs(&self, moments: [f64; 3]) -> [f64; 6] {
        let mut out = [0.0; 6];
        out[..3].copy_from_slice(&moments);
        for m in 0..3 {
            let lam = midpoint_barycentric(m);
            let mut v = Vec2::ZERO;
            for k in 0..3 {
                v += self.whitney(k, lam) * moments[k];
            }
            out[3 + m] = self.edge_len[m] * v.dot(self.normals[m]);
        }
        out
    }
}

/// Barycentric coordinates of the midpoint of edge `m`.
#[inline]
fn midpoint_barycentric(m: usize) -> [f64; 3] {
    let mut lam = [0.5; 3];
    lam[m] = 0.0;
    lam
}

fn solve3(a: [[f64; 3]; 3], b: [f64; 3]) -> Option<[f64; 3]> {
    let det = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(a);
    let scale = a.iter().flatten().fold(0.0f64, |s, v| s.max(v.abs()));
    if d.abs() <= 1e-14 * scale.powi(3) {
        return None;
    }
    let mut x = [0.0; 3];
    for (c, xc) in x.iter_mut().enumerate() {
        let mut m = a;
        for r in 0..3 {
            m[r][c] = b[r];
        }
        *xc = det(m) / d;
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> TriangleElement {
        TriangleElement::new([Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)]).unwrap()
    }

    #[test]
    fn unit_triangle_gradients() {
        let g = unit().gradients();
        assert_eq!(g[0], Vec2::new(-1.0, -1.0));
        assert_eq!(g[1], Vec2::new(1.0, 0.0));
        assert_eq!(g[2], Vec2::new(0.0, 1.0));
    }

    #[test]
    fn collinear_vertices_are_rejected() {
        let err = barycentric_gradients([Point::new(0.0, 0.0), Point::new(1.0, 1.0), Point::new(2.0, 2.0)]);
        assert!(err.is_err());
        let cw = barycentric_gradients([Point::new(0.0, 0.0), Point::new(0.0, 1.0), Point::new(1.0, 0.0)]);
        assert!(cw.is_err());
    }

    #[test]
    fn barycentric_is_kronecker_at_vertices() {
        let t = TriangleElement::new([Point::new(0.3, -0.2), Point::new(1.7, 0.1), Point::new(0.6, 1.4)]).unwrap();
        for (j, &v) in t.vertices().iter().enumerate() {
            let lam = t.barycentric(v);
            for (i, l) in lam.iter().enumerate() {
                assert!((l - if i == j { 1.0 } else { 0.0 }).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn bubble_vanishes_off_its_edge() {
        let t = unit();
        // bubble of the edge opposite vertex 0 at the midpoint of edge 1
        assert_eq!(t.eval_unscaled_bubble(0, t.midpoints()[1]), Vec2::ZERO);
        assert_eq!(t.eval_unscaled_bubble(0, t.midpoints()[2]), Vec2::ZERO);
    }

    #[test]
    fn whitney_curl_on_unit_triangle() {
        let t = unit();
        // lambda_0 grad lambda_1 - lambda_1 grad lambda_0 is local edge 2
        assert!((t.whitney_curl(2) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn dense_and_decoupled_coefficients_agree() {
        let t = TriangleElement::new([Point::new(0.1, 0.0), Point::new(1.3, 0.2), Point::new(0.4, 0.9)]).unwrap();
        let fast = t.coefficient_table();
        let dense = t.solve_coefficients_dense().unwrap();
        for k in 0..3 {
            for m in 0..3 {
                assert!((fast[k][m] - dense[k][m]).abs() < 1e-12 * fast[k][m].abs().max(1.0));
            }
        }
    }

    #[test]
    fn solve3_identity() {
        let x = solve3([[2.0, 0.0, 0.0], [0.0, 3.0, 0.0], [0.0, 0.0, 4.0]], [2.0, 3.0, 4.0]).unwrap();
        assert_eq!(x, [1.0, 1.0, 1.0]);
        assert!(solve3([[1.0, 1.0, 0.0], [1.0, 1.0, 0.0], [0.0, 0.0, 1.0]], [1.0, 1.0, 1.0]).is_none());
    }
}
