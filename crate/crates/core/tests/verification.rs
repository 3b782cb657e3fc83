use std::f64::consts::PI;

use lumpfem::assembly::{build_dof_map, project_pi0, project_pi_h};
use lumpfem::verification::{
    interpolation_study, l2_errors, observed_rate, quadrature_error_functional, quadrature_error_piecewise_constant,
    quadrature_error_study, reflection_ratio, standing_mode_solution, yee_equivalence_check, yee_negative_control,
    ErrorEvaluator, MeshFamily, ReflectionSetup,
};
use lumpfem::{Point, Vec2};

#[test]
fn standing_mode_closed_form() {
    let s = standing_mode_solution();
    let (p, t) = (Point::new(0.3, 0.8), 0.4);
    let c = (2f64.sqrt() * PI * t).cos();
    let expect = Vec2::new(
        c * PI * (PI * p.x).sin() * (PI * p.y).cos(),
        -c * PI * (PI * p.x).cos() * (PI * p.y).sin(),
    );
    assert!(((s.field)(p, t) - expect).norm() < 1e-15);
    let curl = 2.0 * PI * PI * c * (PI * p.x).sin() * (PI * p.y).sin();
    assert!(((s.curl)(p, t) - curl).abs() < 1e-12);
    assert_eq!((s.dt_field)(p, 0.0), Vec2::ZERO);
    assert!(s.residual_check(100, 7).max() <= 1e-4);
}

#[test]
fn discrete_field_has_zero_error_against_itself() {
    let mesh = MeshFamily::Hybrid.build(4).unwrap();
    let dm = build_dof_map(&mesh, &[]);
    let ev = ErrorEvaluator::new(&mesh, &dm).unwrap();
    let coeffs: Vec<f64> = (0..dm.n_dofs()).map(|i| (i as f64 * 0.61).sin()).collect();
    // find the element holding each quadrature point
    let elements: Vec<_> = mesh.elements().collect();
    let field = |p: Point| {
        let id = elements.iter().copied().find(|&id| contains(&mesh, id, p)).unwrap();
        lumpfem::assembly::evaluate_in_element(&mesh, &dm, id, &coeffs, p).unwrap()
    };
    let (e, c) = ev.errors(&coeffs, |p| field(p).0, |p| field(p).1);
    assert!(e < 1e-12 && c < 1e-10, "{e} {c}");
}

fn contains(mesh: &lumpfem::HybridMesh, id: lumpfem::ElementId, p: Point) -> bool {
    let v: Vec<Point> = mesh.element_vertices(id).iter().map(|&i| mesh.vertices()[i]).collect();
    (0..v.len()).all(|k| (v[(k + 1) % v.len()] - v[k]).cross(p - v[k]) > 1e-12)
}

#[test]
fn constants_are_reproduced() {
    let c = Vec2::new(0.7, -1.3);
    for family in MeshFamily::ALL {
        let mesh = family.build(4).unwrap();
        let dm = build_dof_map(&mesh, &[]);
        let ev = ErrorEvaluator::new(&mesh, &dm).unwrap();
        let x = project_pi_h(&mesh, &dm, |_| c).unwrap();
        let (e, curl) = ev.errors(&x, |_| c, |_| 0.0);
        assert!(e <= 1e-12 && curl <= 1e-11, "{family}: {e} {curl}");
    }
}

#[test]
fn error_norms_of_exact_interpolant_at_rest() {
    let s = standing_mode_solution();
    let mesh = MeshFamily::Rect.build(8).unwrap();
    let dm = build_dof_map(&mesh, &[]);
    let ev = ErrorEvaluator::new(&mesh, &dm).unwrap();
    let x = project_pi_h(&mesh, &dm, |p| (s.field)(p, 0.0)).unwrap();
    let zero = vec![0.0; dm.n_dofs()];
    let norms = l2_errors(&ev, &x, &zero, &s, 0.0, 0.0);
    // velocity vanishes at t = 0, so only the interpolation error remains
    assert_eq!(norms.err_dt_e, 0.0);
    assert!(norms.err_e > 0.0 && norms.err_e < 0.5);
}

#[test]
fn interpolation_errors_halve() {
    let s = standing_mode_solution();
    for family in MeshFamily::ALL {
        let levels = interpolation_study(&s, family, 4, 3, 0.0).unwrap();
        for w in levels.windows(2) {
            let r = observed_rate(w[0].err_pi_h, w[1].err_pi_h, w[0].h, w[1].h);
            let rc = observed_rate(w[0].err_curl_pi_h, w[1].err_curl_pi_h, w[0].h, w[1].h);
            let r0 = observed_rate(w[0].err_pi0, w[1].err_pi0, w[0].h, w[1].h);
            assert!(r > 0.8 && rc > 0.8 && r0 > 0.8, "{family}: {r} {rc} {r0}");
        }
    }
}

#[test]
fn piecewise_constants_have_zero_quadrature_error() {
    // the lumping rules are exact for products of constants with the local spaces
    for family in MeshFamily::ALL {
        let mesh = family.build(4).unwrap();
        let dm = build_dof_map(&mesh, &[]);
        let values: Vec<Vec2> = mesh
            .elements()
            .enumerate()
            .map(|(i, _)| Vec2::new((i as f64).sin(), (i as f64 * 0.3).cos()))
            .collect();
        let phi: Vec<f64> = (0..dm.n_dofs()).map(|i| ((i * 13 % 7) as f64) - 3.0).collect();
        let sigma = quadrature_error_piecewise_constant(&mesh, &dm, &values, &phi).unwrap();
        assert!(sigma.abs() <= 1e-12, "{family}: {sigma}");
    }
}

#[test]
fn quadrature_error_is_bilinear() {
    let mesh = MeshFamily::Hybrid.build(4).unwrap();
    let dm = build_dof_map(&mesh, &[]);
    let n = dm.n_dofs();
    let u: Vec<f64> = (0..n).map(|i| (i as f64 * 0.3).sin()).collect();
    let w: Vec<f64> = (0..n).map(|i| (i as f64 * 0.7).cos()).collect();
    let phi: Vec<f64> = (0..n).map(|i| (i as f64 * 1.1).sin()).collect();
    let sigma = |a: &[f64], b: &[f64]| quadrature_error_functional(&mesh, &dm, a, b).unwrap();
    let mix: Vec<f64> = u.iter().zip(&w).map(|(a, b)| 2.0 * a - 0.5 * b).collect();
    let lhs = sigma(&mix, &phi);
    let rhs = 2.0 * sigma(&u, &phi) - 0.5 * sigma(&w, &phi);
    assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()));
    // symmetric, since both inner products are
    assert!((sigma(&u, &phi) - sigma(&phi, &u)).abs() <= 1e-12);
}

#[test]
fn quadrature_error_decays() {
    let s = standing_mode_solution();
    let levels = quadrature_error_study(&s, MeshFamily::Tri, 4, 3, 4, 3).unwrap();
    for w in levels.windows(2) {
        assert!(w[1].sigma < w[0].sigma, "{levels:?}");
    }
}

#[test]
fn pi0_is_the_element_mean() {
    let mesh = MeshFamily::Tri.build(2).unwrap();
    let means = project_pi0(&mesh, |p| Vec2::new(p.x, p.x * p.y)).unwrap();
    for (id, m) in mesh.elements().zip(means) {
        let v: Vec<Point> = mesh.element_vertices(id).iter().map(|&i| mesh.vertices()[i]).collect();
        let c = mesh.element_centroid(id);
        assert!((m.x - c.x).abs() < 1e-14);
        // mean of x y over a triangle: (sum x_i y_i + 9 xc yc) / 12
        let sxy: f64 = v.iter().map(|p| p.x * p.y).sum();
        assert!((m.y - (sxy + 9.0 * c.x * c.y) / 12.0).abs() < 1e-14);
    }
}

#[test]
fn yee_oracle_agrees_and_detects_perturbation() {
    let r = yee_equivalence_check(4, 4, 0.25, 10).unwrap();
    assert!(r.max_relative_deviation <= 1e-12);
    assert!(!r.is_vacuous());
    let bad = yee_negative_control(4, 4, 0.25, 0.05).unwrap();
    assert!(bad.max_relative_deviation > 1e-3);
    assert!(yee_equivalence_check(1, 1, 1.0, 3).unwrap().is_vacuous());
}

#[test]
fn reflection_window_is_checked() {
    let setup = ReflectionSetup {
        measure_time: 3.0,
        ..ReflectionSetup::default()
    };
    assert!(reflection_ratio(&setup, 0.125, true).is_err());
}

#[test]
fn rectangle_strip_transmits_cleanly() {
    let r = reflection_ratio(&ReflectionSetup::default(), 0.0625, false).unwrap();
    assert!(r.ratio < 1e-6, "{r:?}");
}
