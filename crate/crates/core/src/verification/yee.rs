use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::assembly::{assemble_mass, assemble_stiffness, build_dof_map};
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::mesh::{build_structured_rect_mesh, BoundingBox, HybridMesh};

/// Outcome of comparing `M^-1 K` with the Yee stencil.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct YeeReport {
    /// `max |M^-1 K v - Y v| / max |Y v|` over interior edges and samples.
    pub max_relative_deviation: f64,
    pub interior_edges: usize,
    pub samples: usize,
}

impl YeeReport {
    /// True when there were no interior edges to compare.
    pub fn is_vacuous(&self) -> bool {
        self.interior_edges == 0
    }
}

/// Grid location of an edge on a uniform `nx x ny` grid.
#[derive(Clone, Copy, Debug, PartialEq)]
enum GridEdge {
    /// Horizontal edge of cell column `i` at grid row `j`.
    X { i: usize, j: usize },
    /// Vertical edge at grid column `i` of cell row `j`.
    Y { i: usize, j: usize },
}

/// Double-curl operator of the 2D TE Yee scheme acting on edge line
/// integrals of a uniform grid. The magnetic field lives at cell centres as
/// circulation over area; each interior edge value is updated from the
/// difference of its two neighbouring cells. Written directly on index
/// arrays, independent of the finite element code.
struct YeeStencil {
    nx: usize,
    ny: usize,
    hx: f64,
    hy: f64,
}

impl YeeStencil {
    /// `ex[j][i]`: edges (i, j) -> (i+1, j); `ey[j][i]`: edges (i, j) -> (i, j+1).
    fn apply(&self, ex: &[Vec<f64>], ey: &[Vec<f64>]) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
        let (nx, ny) = (self.nx, self.ny);
        let area = self.hx * self.hy;
        let mut hz = vec![vec![0.0; nx]; ny];
        for j in 0..ny {
            for i in 0..nx {
                hz[j][i] = (ex[j][i] + ey[j][i + 1] - ex[j + 1][i] - ey[j][i]) / area;
            }
        }
        let mut out_x = vec![vec![f64::NAN; nx]; ny + 1];
        let mut out_y = vec![vec![f64::NAN; nx + 1]; ny];
        for j in 1..ny {
            for i in 0..nx {
                out_x[j][i] = self.hx / self.hy * (hz[j][i] - hz[j - 1][i]);
            }
        }
        for j in 0..ny {
            for i in 1..nx {
                out_y[j][i] = -self.hy / self.hx * (hz[j][i] - hz[j][i - 1]);
            }
        }
        (out_x, out_y)
    }
}

fn locate(mesh: &HybridMesh, e: usize, x0: f64, y0: f64, hx: f64, hy: f64) -> (GridEdge, f64) {
    let m = mesh.edge_midpoint(e);
    let t = mesh.edge_tangent(e);
    if t.x.abs() > t.y.abs() {
        let i = ((m.x - x0) / hx - 0.5).round() as usize;
        let j = ((m.y - y0) / hy).round() as usize;
        (GridEdge::X { i, j }, t.x.signum())
    } else {
        let i = ((m.x - x0) / hx).round() as usize;
        let j = ((m.y - y0) / hy - 0.5).round() as usize;
        (GridEdge::Y { i, j }, t.y.signum())
    }
}

fn compare(mesh: &HybridMesh, nx: usize, ny: usize, h: f64, samples: usize, seed: u64) -> Result<YeeReport> {
    let dofmap = build_dof_map(mesh, &[]);
    let mass = assemble_mass(mesh, &dofmap)?;
    let stiffness = assemble_stiffness(mesh, &dofmap)?;
    let stencil = YeeStencil { nx, ny, hx: h, hy: h };
    let located: Vec<(GridEdge, f64)> = (0..mesh.n_edges()).map(|e| locate(mesh, e, 0.0, 0.0, h, h)).collect();
    let interior: Vec<usize> = (0..mesh.n_edges()).filter(|&e| !mesh.is_boundary_edge(e)).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let v: Vec<f64> = (0..dofmap.n_dofs()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let mut fem = stiffness.mul_vec(&v);
        mass.solve_in_place(&mut fem);

        let mut ex = vec![vec![0.0; nx]; ny + 1];
        let mut ey = vec![vec![0.0; nx + 1]; ny];
        for (e, &(g, s)) in located.iter().enumerate() {
            match g {
                GridEdge::X { i, j } => ex[j][i] = s * v[e],
                GridEdge::Y { i, j } => ey[j][i] = s * v[e],
            }
        }
        let (yx, yy) = stencil.apply(&ex, &ey);
        let mut scale: f64 = 0.0;
        let mut diff: f64 = 0.0;
        for &e in &interior {
            let (g, s) = located[e];
            let oracle = match g {
                GridEdge::X { i, j } => yx[j][i],
                GridEdge::Y { i, j } => yy[j][i],
            };
            scale = scale.max(oracle.abs());
            diff = diff.max((s * fem[e] - oracle).abs());
        }
        if scale > 0.0 {
            worst = worst.max(diff / scale);
        }
    }
    Ok(YeeReport {
        max_relative_deviation: worst,
        interior_edges: interior.len(),
        samples,
    })
}

/// Compares `M^-1 K` on a uniform `nx x ny` grid of spacing `h` with the
/// Yee double-curl stencil for `samples` random vectors.
pub fn yee_equivalence_check(nx: usize, ny: usize, h: f64, samples: usize) -> Result<YeeReport> {
    if !(h > 0.0) {
        return Err(Error::Verification(format!("grid spacing must be positive, got {h}")));
    }
    let mesh = build_structured_rect_mesh(nx, ny, BoundingBox::new(0.0, nx as f64 * h, 0.0, ny as f64 * h)?)?;
    compare(&mesh, nx, ny, h, samples, 42)
}

/// The same comparison after shifting one interior vertical grid line by
/// `shift * h`. The grid stays rectangular but is no longer uniform, so the
/// uniform stencil must disagree.
pub fn yee_negative_control(nx: usize, ny: usize, h: f64, shift: f64) -> Result<YeeReport> {
    if nx < 2 {
        return Err(Error::Verification(
            "negative control needs an interior grid line".into(),
        ));
    }
    let mut mesh = build_structured_rect_mesh(nx, ny, BoundingBox::new(0.0, nx as f64 * h, 0.0, ny as f64 * h)?)?;
    let column = nx / 2;
    let x = column as f64 * h;
    for v in 0..mesh.n_vertices() {
        let p = mesh.vertices()[v];
        if (p.x - x).abs() < 1e-12 * h {
            mesh = mesh.with_vertex_moved(v, Point::new(p.x + shift * h, p.y));
        }
    }
    compare(&mesh, nx, ny, h, 10, 43)
}
