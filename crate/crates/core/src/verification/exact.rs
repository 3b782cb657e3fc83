use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{Point, Vec2};
use crate::mesh::BoundingBox;

pub type FieldFn = Box<dyn Fn(Point, f64) -> Vec2 + Send + Sync>;
pub type ScalarFn = Box<dyn Fn(Point, f64) -> f64 + Send + Sync>;

/// Closed-form solution of `E_tt + curl curl E = f` with its derivatives.
pub struct ExactSolution {
    pub name: String,
    pub domain: BoundingBox,
    pub field: FieldFn,
    pub dt_field: FieldFn,
    pub curl: ScalarFn,
    /// `None` means `f = 0`.
    pub source: Option<FieldFn>,
}

/// Largest finite-difference mismatches found by [`ExactSolution::residual_check`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResidualReport {
    /// `|E_tt + curl curl E - f|`.
    pub equation: f64,
    /// `|dt_field - d/dt field|`.
    pub time_derivative: f64,
    /// `|curl - (d_x E_2 - d_y E_1)|`.
    pub curl: f64,
}

impl ResidualReport {
    pub fn max(&self) -> f64 {
        self.equation.max(self.time_derivative).max(self.curl)
    }
}

/// Finite-difference step used by the residual check.
pub const RESIDUAL_STEP: f64 = 1e-4;

impl ExactSolution {
    pub fn source_at(&self, p: Point, t: f64) -> Vec2 {
        self.source.as_ref().map_or(Vec2::ZERO, |f| f(p, t))
    }

    /// Checks the closed forms against central differences of `field` at
    /// `n` random space-time points with `t` in `[0, 1]`.
    pub fn residual_check(&self, n: usize, seed: u64) -> ResidualReport {
        let h = RESIDUAL_STEP;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = self.domain;
        let e = &self.field;
        let mut report = ResidualReport {
            equation: 0.0,
            time_derivative: 0.0,
            curl: 0.0,
        };
        let (dx, dy) = (Vec2::new(h, 0.0), Vec2::new(0.0, h));
        for _ in 0..n {
            let p = Point::new(rng.random_range(d.x0..d.x1), rng.random_range(d.y0..d.y1));
            let t = rng.random_range(0.0..1.0);

            let ett = (e(p, t + h) - e(p, t) * 2.0 + e(p, t - h)) * (1.0 / (h * h));
            // curl from the field alone, so that the curl callback is checked too
            let fd_curl = |q: Point| (e(q + dx, t).y - e(q - dx, t).y - e(q + dy, t).x + e(q - dy, t).x) / (2.0 * h);
            let curl_curl = Vec2::new(
                (fd_curl(p + dy) - fd_curl(p - dy)) / (2.0 * h),
                -(fd_curl(p + dx) - fd_curl(p - dx)) / (2.0 * h),
            );
            let residual = ett + curl_curl - self.source_at(p, t);
            report.equation = report.equation.max(residual.norm());

            let et = (e(p, t + h) - e(p, t - h)) * (1.0 / (2.0 * h));
            report.time_derivative = report.time_derivative.max(((self.dt_field)(p, t) - et).norm());
            report.curl = report.curl.max(((self.curl)(p, t) - fd_curl(p)).abs());
        }
        report
    }
}

/// Angular frequency of the standing mode.
pub const STANDING_MODE_OMEGA: f64 = std::f64::consts::SQRT_2 * PI;

/// Source-free standing mode on the unit square:
/// `E = cos(w t) (pi sin(pi x) cos(pi y), -pi cos(pi x) sin(pi y))` with
/// `w = sqrt(2) pi`. Its curl `2 pi^2 cos(w t) sin(pi x) sin(pi y)` vanishes
/// on the boundary, so it satisfies the natural boundary condition.
pub fn standing_mode_solution() -> ExactSolution {
    let shape = |p: Point| {
        Vec2::new(
            PI * (PI * p.x).sin() * (PI * p.y).cos(),
            -PI * (PI * p.x).cos() * (PI * p.y).sin(),
        )
    };
    ExactSolution {
        name: "standing_mode".into(),
        domain: BoundingBox::unit(),
        field: Box::new(move |p, t| shape(p) * (STANDING_MODE_OMEGA * t).cos()),
        dt_field: Box::new(move |p, t| shape(p) * (-STANDING_MODE_OMEGA * (STANDING_MODE_OMEGA * t).sin())),
        curl: Box::new(|p, t| 2.0 * PI * PI * (STANDING_MODE_OMEGA * t).cos() * (PI * p.x).sin() * (PI * p.y).sin()),
        source: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standing_mode_satisfies_the_equation() {
        let r = standing_mode_solution().residual_check(100, 1);
        assert!(r.max() <= 1e-4, "{r:?}");
    }

    #[test]
    fn wrong_frequency_is_caught() {
        let mut s = standing_mode_solution();
        s.field = Box::new(|p, t| {
            Vec2::new(
                PI * (PI * p.x).sin() * (PI * p.y).cos(),
                -PI * (PI * p.x).cos() * (PI * p.y).sin(),
            ) * (2.0 * PI * t).cos()
        });
        assert!(s.residual_check(20, 1).equation > 1.0);
    }

    #[test]
    fn standing_mode_curl_vanishes_on_boundary() {
        let s = standing_mode_solution();
        for k in 0..=10 {
            let u = k as f64 / 10.0;
            for p in [
                Point::new(u, 0.0),
                Point::new(u, 1.0),
                Point::new(0.0, u),
                Point::new(1.0, u),
            ] {
                assert!((s.curl)(p, 0.3).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn standing_mode_swap_symmetry() {
        // E(y, x) = -swap(E(x, y))
        let s = standing_mode_solution();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let p = Point::new(rng.random(), rng.random());
            let a = (s.field)(p, 0.0);
            let b = (s.field)(Point::new(p.y, p.x), 0.0);
            assert!((a.x + b.y).abs() < 1e-14 && (a.y + b.x).abs() < 1e-14);
        }
        assert_eq!((s.dt_field)(Point::new(0.3, 0.6), 0.0), Vec2::ZERO);
    }
}
