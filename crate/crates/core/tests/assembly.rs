use lumpfem::assembly::*;
use lumpfem::fem_local::Element;
use lumpfem::mesh::{
    build_scattering_demo_mesh, build_structured_hybrid_mesh, build_structured_rect_mesh, build_structured_tri_mesh,
    BoundingBox, SplitDirection,
};
use lumpfem::{BoundaryTag, ElementId, HybridMesh, Point, Vec2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn unit_rect(n: usize) -> HybridMesh {
    build_structured_rect_mesh(n, n, BoundingBox::unit()).unwrap()
}

fn unit_tri(n: usize) -> HybridMesh {
    build_structured_tri_mesh(n, n, BoundingBox::unit(), SplitDirection::Alternating).unwrap()
}

fn unit_hybrid(n: usize) -> HybridMesh {
    build_structured_hybrid_mesh(n, n, BoundingBox::unit(), n / 2, SplitDirection::Right).unwrap()
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

#[test]
fn uniform_grid_mass_entries() {
    // unit tangential moments: each cell contributes hy / (2 hx) = 1/2
    let m = build_structured_rect_mesh(4, 4, BoundingBox::new(0.0, 2.0, 0.0, 2.0).unwrap()).unwrap();
    let d = build_dof_map(&m, &[]);
    let mass = assemble_mass(&m, &d).unwrap();
    for e in 0..m.n_edges() {
        let expect = if m.is_boundary_edge(e) { 0.5 } else { 1.0 };
        assert!((mass.diag()[e] - expect).abs() < 1e-15);
    }
}

#[test]
fn mass_assembly_is_deterministic() {
    let m = build_scattering_demo_mesh(0.2, 16).unwrap();
    let d = build_dof_map(&m, &[BoundaryTag::Left, BoundaryTag::Ball]);
    let a = assemble_mass(&m, &d).unwrap();
    let b = assemble_mass(&m, &d).unwrap();
    assert!(a.diag().iter().zip(b.diag()).all(|(x, y)| x.to_bits() == y.to_bits()));
}

#[test]
fn interface_mass_entries_combine_both_element_types() {
    let m = build_scattering_demo_mesh(0.2, 16).unwrap();
    let d = build_dof_map(&m, &[]);
    let mass = assemble_mass(&m, &d).unwrap();
    let interface: Vec<usize> = m.edges_with_tag(BoundaryTag::Interface).collect();
    assert!(!interface.is_empty());
    for e in interface {
        let uses = m.edge_uses(e);
        assert_eq!(uses.len(), 2);
        let mut sum = 0.0;
        let mut kinds = Vec::new();
        for u in uses {
            let el = Element::from_mesh(&m, u.element).unwrap();
            let local = lumpfem::fem_local::local_mass_lumped(&el).unwrap()[u.local];
            assert!(local > 0.0);
            sum += local;
            kinds.push(matches!(u.element, ElementId::Triangle(_)));
        }
        kinds.sort();
        assert_eq!(kinds, vec![false, true]);
        assert!((mass.diag()[e] - sum).abs() <= 1e-14 * sum);
    }
    let counts = d.reference_counts();
    for (e, &count) in counts.iter().enumerate().take(m.n_edges()) {
        assert_eq!(count, if m.is_boundary_edge(e) { 1 } else { 2 });
    }
}

#[test]
fn quadrature_mass_matrix_is_globally_diagonal() {
    for m in [
        unit_rect(5),
        unit_tri(4),
        unit_hybrid(4),
        build_scattering_demo_mesh(0.25, 8).unwrap(),
    ] {
        let d = build_dof_map(&m, &[]);
        let full = assemble_quadrature_mass(&m, &d).unwrap();
        let mass = assemble_mass(&m, &d).unwrap();
        let max = max_abs(mass.diag());
        assert!(full.max_abs_off_diagonal() <= 1e-12 * max);
        for (a, b) in full.diagonal().iter().zip(mass.diag()) {
            assert!((a - b).abs() <= 1e-14 * max);
        }
    }
}

#[test]
fn single_square_stiffness_has_rank_one() {
    let m = unit_rect(1);
    let d = build_dof_map(&m, &[]);
    let k = assemble_stiffness(&m, &d).unwrap();
    // K = c c^T with c the signed constant curls
    let c: Vec<f64> = (0..4).map(|i| k.get(i, i).sqrt() * k.get(0, i).signum()).collect();
    for i in 0..4 {
        for j in 0..4 {
            assert!((k.get(i, j) - c[i] * c[j]).abs() < 1e-14);
        }
    }
}

#[test]
fn stiffness_is_symmetric_and_semidefinite() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for m in [
        unit_rect(6),
        unit_tri(5),
        unit_hybrid(6),
        build_scattering_demo_mesh(0.2, 12).unwrap(),
    ] {
        let d = build_dof_map(&m, &[]);
        let k = assemble_stiffness(&m, &d).unwrap();
        assert!(k.max_asymmetry() <= 1e-14 * k.max_abs());
        for _ in 0..20 {
            let x = random_vec(&mut rng, d.n_dofs());
            let xx: f64 = x.iter().map(|v| v * v).sum();
            assert!(k.quadratic_form(&x) / xx >= -1e-10 * k.norm_frobenius());
        }
    }
}

#[test]
fn discrete_gradients_lie_in_the_kernel() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for m in [
        unit_rect(5),
        unit_tri(5),
        unit_hybrid(6),
        build_scattering_demo_mesh(0.2, 12).unwrap(),
    ] {
        let d = build_dof_map(&m, &[]);
        let k = assemble_stiffness(&m, &d).unwrap();
        let phi = random_vec(&mut rng, m.n_vertices());
        let g = discrete_gradient(&m, &d, &phi).unwrap();
        let kg = k.mul_vec(&g);
        let gn = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        let kgn = kg.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(kgn <= 1e-10 * k.norm_frobenius() * gn, "{kgn}");
    }
}

#[test]
fn zero_source_gives_zero_load() {
    let m = unit_hybrid(4);
    let d = build_dof_map(&m, &[]);
    let f = assemble_load(&m, &d, |_, _| Vec2::ZERO, 0.3).unwrap();
    assert!(f.iter().all(|&v| v == 0.0));
}

#[test]
fn constant_load_matches_brute_force() {
    let m = unit_rect(1);
    let d = build_dof_map(&m, &[]);
    let c = Vec2::new(0.7, -1.3);
    let f = assemble_load(&m, &d, |_, _| c, 0.0).unwrap();
    let el = Element::from_mesh(&m, ElementId::Rectangle(0)).unwrap();
    let (dofs, signs) = d.element_dofs(ElementId::Rectangle(0));
    let n = 20;
    for a in 0..4 {
        let mut brute = 0.0;
        for i in 0..n {
            for j in 0..n {
                let p = Point::new((i as f64 + 0.5) / n as f64, (j as f64 + 0.5) / n as f64);
                brute += c.dot(lumpfem::fem_local::eval_basis(&el, p)[a]) / (n * n) as f64;
            }
        }
        assert!((f[dofs[a]] - signs[a] * brute).abs() < 1e-8);
    }
}

#[test]
fn load_is_additive_over_subdomains() {
    let m = unit_hybrid(4);
    let d = build_dof_map(&m, &[]);
    let src = |p: Point, t: f64| Vec2::new((p.x * 3.0 + t).sin(), p.x * p.y);
    let whole = assemble_load(&m, &d, src, 0.4).unwrap();
    let left = assemble_load(&m, &d, |p, t| if p.x < 0.5 { src(p, t) } else { Vec2::ZERO }, 0.4).unwrap();
    let right = assemble_load(&m, &d, |p, t| if p.x >= 0.5 { src(p, t) } else { Vec2::ZERO }, 0.4).unwrap();
    for i in 0..d.n_dofs() {
        assert!((whole[i] - left[i] - right[i]).abs() < 1e-15);
    }
}

#[test]
fn homogeneous_essential_data_zeroes_constrained_dofs() {
    let m = build_scattering_demo_mesh(0.2, 12).unwrap();
    let d = build_dof_map(&m, &[BoundaryTag::Left, BoundaryTag::Ball]);
    let mut x = vec![1.0; d.n_dofs()];
    apply_essential_bc(&m, &d, &mut x, |_, _, _| 0.0, 0.0);
    for &(dof, _) in d.essential_dofs() {
        assert_eq!(x[dof], 0.0);
    }
    let ball = m.edges_with_tag(BoundaryTag::Ball).count();
    let left = m.edges_with_tag(BoundaryTag::Left).count();
    assert_eq!(d.essential_dofs().len(), ball + left);
}

#[test]
fn left_pulse_value_at_centre_edge() {
    // the edge (0,-h/2)-(0,h/2) has its midpoint at y = 0
    let m = build_structured_rect_mesh(4, 5, BoundingBox::new(0.0, 1.0, -0.5, 0.5).unwrap()).unwrap();
    let d = build_dof_map(&m, &[BoundaryTag::Left]);
    let t = 0.37;
    let g = |_: BoundaryTag, p: Point, t: f64| (10.0 * t).sin() * (-10.0 * p.y * p.y).exp();
    let vals = essential_values(&m, &d, g, t);
    let centre = vals
        .iter()
        .find(|(e, _)| m.edge_midpoint(*e).y.abs() < 1e-12)
        .copied()
        .unwrap();
    let sign = m.boundary_orientation(centre.0).unwrap();
    // positively oriented boundary runs downward at x = 0
    assert!((m.edge_tangent(centre.0).y * sign + 1.0).abs() < 1e-15);
    assert!((centre.1 - (10.0 * t).sin() * 0.2 * sign).abs() < 1e-15);
}

#[test]
fn constants_are_interpolated_exactly() {
    let c = Vec2::new(0.4, -2.1);
    for m in [
        unit_rect(3),
        unit_tri(3),
        unit_hybrid(4),
        build_scattering_demo_mesh(0.25, 8).unwrap(),
    ] {
        let d = build_dof_map(&m, &[]);
        let x = project_pi_h(&m, &d, |_| c).unwrap();
        for id in m.elements() {
            let (v, curl) = evaluate_in_element(&m, &d, id, &x, m.element_centroid(id)).unwrap();
            assert!((v - c).norm() < 1e-12);
            assert!(curl.abs() < 1e-11);
        }
    }
}

#[test]
fn rotation_field_keeps_its_curl() {
    for m in [unit_rect(3), unit_tri(3), unit_hybrid(4)] {
        let d = build_dof_map(&m, &[]);
        let x = project_pi_h(&m, &d, |p| Vec2::new(-p.y, p.x)).unwrap();
        for id in m.elements() {
            let p = m.element_centroid(id) * 0.9 + m.vertices()[m.element_vertices(id)[0]] * 0.1;
            let (_, curl) = evaluate_in_element(&m, &d, id, &x, p).unwrap();
            assert!((curl - 2.0).abs() < 1e-12, "{id}: {curl}");
        }
    }
}

#[test]
fn element_means_of_simple_fields() {
    let m = unit_tri(2);
    let means = project_pi0(&m, |_| Vec2::new(1.5, 2.5)).unwrap();
    assert!(means.iter().all(|v| (*v - Vec2::new(1.5, 2.5)).norm() < 1e-14));
    let lin = |p: Point| Vec2::new(2.0 * p.x - p.y, 3.0 * p.y + 1.0);
    let means = project_pi0(&m, lin).unwrap();
    for (id, v) in m.elements().zip(means) {
        assert!((v - lin(m.element_centroid(id))).norm() < 1e-14);
    }
}

#[test]
fn tangential_traces_are_continuous() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for m in [unit_hybrid(6), build_scattering_demo_mesh(0.2, 12).unwrap()] {
        let d = build_dof_map(&m, &[]);
        let x = random_vec(&mut rng, d.n_dofs());
        assert!(max_tangential_jump(&m, &d, &x).unwrap() <= 1e-10);
    }
}
