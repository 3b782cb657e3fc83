//! Integration rules: exact Gauss-type rules for stiffness, loads and error
//! norms, and the edge-midpoint lumping rules for the mass term.

use crate::geometry::{signed_area2, Point, Vec2};

/// Gauss-Legendre nodes and weights on `[0, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        // Newton on P_n starting from the Chebyshev-like guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        let w = 2.0 / ((1.0 - x * x) * d * d);
        out.push((0.5 * (1.0 - x), 0.5 * w));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// A rule on a physical element: points and weights (weights sum to the area).
#[derive(Clone, Debug)]
pub struct QuadratureRule {
    pub points: Vec<Point>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn integrate<F: FnMut(Point) -> f64>(&self, mut f: F) -> f64 {
        self.points.iter().zip(&self.weights).map(|(&p, &w)| w * f(p)).sum()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Collapsed (Duffy) Gauss rule on a triangle, exact for polynomials of
/// total degree `degree`.
pub fn triangle_rule(p: [Point; 3], degree: usize) -> QuadratureRule {
    let nu = (degree + 2).div_ceil(2);
    let nv = (degree + 1).div_ceil(2).max(1);
    let gu = gauss_legendre(nu);
    let gv = gauss_legendre(nv);
    let jac = signed_area2(p[0], p[1], p[2]).abs();
    let (e1, e2) = (p[1] - p[0], p[2] - p[0]);
    let mut points = Vec::with_capacity(nu * nv);
    let mut weights = Vec::with_capacity(nu * nv);
    for &(u, wu) in &gu {
        for &(v, wv) in &gv {
            let w = v * (1.0 - u);
            points.push(p[0] + e1 * u + e2 * w);
            weights.push(wu * wv * (1.0 - u) * jac);
        }
    }
    QuadratureRule { points, weights }
}

/// Tensor Gauss rule on `[x0,x1] x [y0,y1]`, exact for degree `degree` in
/// each variable.
pub fn rectangle_rule(x0: f64, x1: f64, y0: f64, y1: f64, degree: usize) -> QuadratureRule {
    let n = (degree + 1).div_ceil(2).max(1);
    let g = gauss_legendre(n);
    let (hx, hy) = (x1 - x0, y1 - y0);
    let mut points = Vec::with_capacity(n * n);
    let mut weights = Vec::with_capacity(n * n);
    for &(s, ws) in &g {
        for &(t, wt) in &g {
            points.push(Point::new(x0 + s * hx, y0 + t * hy));
            weights.push(ws * wt * hx * hy);
        }
    }
    QuadratureRule { points, weights }
}

/// Gauss rule with `n` points on the segment `a -> b`; weights sum to the
/// segment length.
pub fn edge_rule(a: Point, b: Point, n: usize) -> Vec<(Point, f64)> {
    let len = (b - a).norm();
    gauss_legendre(n)
        .into_iter()
        .map(|(s, w)| (a + (b - a) * s, w * len))
        .collect()
}

/// The mass-lumping rules.
///
/// On triangles the full dot product is sampled at the three edge midpoints
/// with weight `|K|/3`. On axis-aligned rectangles the first component is
/// sampled at the two horizontal-edge midpoints and the second component at
/// the two vertical-edge midpoints, each with weight `|K|/2`.
#[derive(Clone, Debug, PartialEq)]
pub enum LumpingQuadrature {
    Triangle {
        /// `midpoints[k]` is the midpoint of the edge opposite vertex `k`.
        midpoints: [Point; 3],
        weight: f64,
    },
    Rectangle {
        horizontal_midpoints: [Point; 2],
        vertical_midpoints: [Point; 2],
        weight: f64,
    },
}

impl LumpingQuadrature {
    pub fn for_triangle(p: [Point; 3]) -> Self {
        let area = 0.5 * signed_area2(p[0], p[1], p[2]).abs();
        Self::Triangle {
            midpoints: [p[1].midpoint(p[2]), p[2].midpoint(p[0]), p[0].midpoint(p[1])],
            weight: area / 3.0,
        }
    }

    pub fn for_rectangle(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        let (xm, ym) = (0.5 * (x0 + x1), 0.5 * (y0 + y1));
        Self::Rectangle {
            horizontal_midpoints: [Point::new(xm, y0), Point::new(xm, y1)],
            vertical_midpoints: [Point::new(x0, ym), Point::new(x1, ym)],
            weight: 0.5 * (x1 - x0) * (y1 - y0),
        }
    }

    /// Approximation of `(u, v)_K`.
    pub fn inner<U, V>(&self, u: U, v: V) -> f64
    where
        U: Fn(Point) -> Vec2,
        V: Fn(Point) -> Vec2,
    {
        match self {
            Self::Triangle { midpoints, weight } => weight * midpoints.iter().map(|&m| u(m).dot(v(m))).sum::<f64>(),
            Self::Rectangle {
                horizontal_midpoints,
                vertical_midpoints,
                weight,
            } => {
                let first: f64 = horizontal_midpoints.iter().map(|&m| u(m).x * v(m).x).sum();
                let second: f64 = vertical_midpoints.iter().map(|&m| u(m).y * v(m).y).sum();
                weight * (first + second)
            }
        }
    }

    /// Total weight per vector component.
    pub fn weight_sum(&self) -> [f64; 2] {
        match self {
            Self::Triangle { weight, .. } => [3.0 * weight; 2],
            Self::Rectangle { weight, .. } => [2.0 * weight; 2],
        }
    }
}

/// Reference shapes for the exactness check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReferenceShape {
    /// `(0,0), (1,0), (0,1)`.
    UnitTriangle,
    /// `[0,1]^2`.
    UnitSquare,
}

/// Largest error of the lumping rule over all monomials `x^a y^b` with
/// `a + b = degree`, compared with analytic integrals. On the square each
/// vector component is checked against its own sub-rule.
pub fn check_quadrature_exactness(shape: ReferenceShape, degree: usize) -> f64 {
    assert!(degree <= 4, "exactness check is defined for degree <= 4");
    let mono = |a: usize, b: usize| move |p: Point| p.x.powi(a as i32) * p.y.powi(b as i32);
    let mut worst: f64 = 0.0;
    for a in 0..=degree {
        let b = degree - a;
        match shape {
            ReferenceShape::UnitTriangle => {
                let rule =
                    LumpingQuadrature::for_triangle([Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)]);
                let f = mono(a, b);
                // (f e_x, e_x) samples f at each midpoint
                let approx = rule.inner(|p| Vec2::new(f(p), 0.0), |_| Vec2::new(1.0, 0.0));
                let exact = factorial(a) * factorial(b) / factorial(a + b + 2);
                worst = worst.max((approx - exact).abs());
            }
            ReferenceShape::UnitSquare => {
                let rule = LumpingQuadrature::for_rectangle(0.0, 1.0, 0.0, 1.0);
                let f = mono(a, b);
                let exact = 1.0 / ((a + 1) as f64 * (b + 1) as f64);
                let first = rule.inner(|p| Vec2::new(f(p), 0.0), |_| Vec2::new(1.0, 0.0));
                let second = rule.inner(|p| Vec2::new(0.0, f(p)), |_| Vec2::new(0.0, 1.0));
                worst = worst.max((first - exact).abs()).max((second - exact).abs());
            }
        }
    }
    worst
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_weights_and_exactness() {
        for n in 1..=8 {
            let g = gauss_legendre(n);
            let total: f64 = g.iter().map(|&(_, w)| w).sum();
            assert!((total - 1.0).abs() < 1e-15);
            for k in 0..(2 * n) {
                let approx: f64 = g.iter().map(|&(x, w)| w * x.powi(k as i32)).sum();
                assert!((approx - 1.0 / (k as f64 + 1.0)).abs() < 1e-15, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn triangle_rule_matches_analytic_monomials() {
        let tri = [Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)];
        for degree in 0..=8 {
            let rule = triangle_rule(tri, degree);
            for a in 0..=degree {
                let b = degree - a;
                let approx = rule.integrate(|p| p.x.powi(a as i32) * p.y.powi(b as i32));
                let exact = factorial(a) * factorial(b) / factorial(a + b + 2);
                assert!((approx - exact).abs() < 1e-15, "degree {degree}, a={a}");
            }
        }
    }

    #[test]
    fn rectangle_rule_area() {
        let r = rectangle_rule(1.0, 3.0, -1.0, 0.5, 5);
        assert!((r.weights.iter().sum::<f64>() - 3.0).abs() < 1e-14);
    }

    #[test]
    fn lumping_weights_sum_to_area() {
        let t = LumpingQuadrature::for_triangle([Point::new(0.0, 0.0), Point::new(2.0, 0.0), Point::new(0.5, 1.5)]);
        assert_eq!(t.weight_sum(), [1.5, 1.5]);
        let r = LumpingQuadrature::for_rectangle(0.0, 2.0, 0.0, 0.5);
        assert_eq!(r.weight_sum(), [1.0, 1.0]);
    }

    #[test]
    fn bubble_product_on_unit_triangle() {
        // lambda_1 * lambda_2 = x * y on the unit triangle
        let rule = LumpingQuadrature::for_triangle([Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)]);
        let approx = rule.inner(|p| Vec2::new(p.x * p.y, 0.0), |_| Vec2::new(1.0, 0.0));
        assert!((approx - 1.0 / 24.0).abs() < 1e-16);
    }

    #[test]
    fn square_rule_fails_at_degree_two() {
        assert!((check_quadrature_exactness(ReferenceShape::UnitSquare, 2) - 1.0 / 6.0).abs() < 1e-15);
        assert!(check_quadrature_exactness(ReferenceShape::UnitSquare, 1) < 1e-15);
        assert!(check_quadrature_exactness(ReferenceShape::UnitTriangle, 2) < 1e-15);
        assert!(check_quadrature_exactness(ReferenceShape::UnitTriangle, 3) > 1e-3);
    }
}
