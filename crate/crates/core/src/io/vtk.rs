//! Legacy ASCII VTK snapshots with cell-centred field values.

use std::fmt::Write as _;
use std::path::Path;

use crate::assembly::DofMap;
use crate::error::Result;
use crate::fem_local::Element;
use crate::geometry::Vec2;
use crate::mesh::{ElementId, HybridMesh};

const VTK_TRIANGLE: u8 = 5;
const VTK_QUAD: u8 = 9;

/// Facts recorded in the snapshot header line.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SnapshotMetadata {
    pub t: f64,
    pub step: Option<usize>,
    pub dt: Option<f64>,
    /// Requested output time served by this snapshot.
    pub requested: Option<f64>,
    pub h_max: Option<f64>,
}

impl SnapshotMetadata {
    pub fn at_time(t: f64) -> Self {
        Self { t, ..Self::default() }
    }

    fn header(&self) -> String {
        let mut s = format!("lumpfem snapshot t={:e}", self.t);
        if let Some(n) = self.step {
            let _ = write!(s, " step={n}");
        }
        if let Some(dt) = self.dt {
            let _ = write!(s, " dt={dt:e}");
        }
        if let Some(r) = self.requested {
            let _ = write!(s, " requested={r:e}");
        }
        if let Some(h) = self.h_max {
            let _ = write!(s, " h_max={h:e}");
        }
        s
    }
}

/// Field and curl at each element centroid, in element order (triangles
/// first, then rectangles).
#[derive(Clone, Debug, PartialEq)]
pub struct CellValues {
    pub field: Vec<Vec2>,
    pub curl: Vec<f64>,
}

pub fn cell_values(mesh: &HybridMesh, dofmap: &DofMap, coeffs: &[f64]) -> Result<CellValues> {
    let mut field = Vec::with_capacity(mesh.n_elements());
    let mut curl = Vec::with_capacity(mesh.n_elements());
    let mut local = Vec::new();
    for id in mesh.elements() {
        let el = Element::from_mesh(mesh, id)?;
        dofmap.gather(id, coeffs, &mut local);
        let c = mesh.element_centroid(id);
        field.push(el.reconstruct(&local, c));
        curl.push(el.reconstruct_curl(&local, c));
    }
    Ok(CellValues { field, curl })
}

/// Unstructured-grid file with cell data `E1`, `E2` and `curlE`; every
/// number is written with 17 significant digits.
pub fn vtk_snapshot_string(
    mesh: &HybridMesh,
    dofmap: &DofMap,
    coeffs: &[f64],
    meta: &SnapshotMetadata,
) -> Result<String> {
    let values = cell_values(mesh, dofmap, coeffs)?;
    let mut out = String::new();
    let _ = writeln!(out, "# vtk DataFile Version 3.0");
    let _ = writeln!(out, "{}", meta.header());
    let _ = writeln!(out, "ASCII\nDATASET UNSTRUCTURED_GRID");
    let _ = writeln!(out, "POINTS {} double", mesh.n_vertices());
    for p in mesh.vertices() {
        let _ = writeln!(out, "{:.16e} {:.16e} {:.16e}", p.x, p.y, 0.0);
    }
    let n_cells = mesh.n_elements();
    let size = 4 * mesh.n_triangles() + 5 * mesh.n_rectangles();
    let _ = writeln!(out, "CELLS {n_cells} {size}");
    for id in mesh.elements() {
        let v = mesh.element_vertices(id);
        let idx: Vec<String> = v.iter().map(|i| i.to_string()).collect();
        let _ = writeln!(out, "{} {}", v.len(), idx.join(" "));
    }
    let _ = writeln!(out, "CELL_TYPES {n_cells}");
    for id in mesh.elements() {
        let ty = match id {
            ElementId::Triangle(_) => VTK_TRIANGLE,
            ElementId::Rectangle(_) => VTK_QUAD,
        };
        let _ = writeln!(out, "{ty}");
    }
    let _ = writeln!(out, "CELL_DATA {n_cells}");
    let mut scalar = |name: &str, data: &mut dyn Iterator<Item = f64>| {
        let _ = writeln!(out, "SCALARS {name} double 1\nLOOKUP_TABLE default");
        for v in data {
            let _ = writeln!(out, "{v:.16e}");
        }
    };
    scalar("E1", &mut values.field.iter().map(|e| e.x));
    scalar("E2", &mut values.field.iter().map(|e| e.y));
    scalar("curlE", &mut values.curl.iter().copied());
    Ok(out)
}

pub fn write_vtk_snapshot(
    mesh: &HybridMesh,
    dofmap: &DofMap,
    coeffs: &[f64],
    meta: &SnapshotMetadata,
    path: impl AsRef<Path>,
) -> Result<()> {
    std::fs::write(path, vtk_snapshot_string(mesh, dofmap, coeffs, meta)?)?;
    Ok(())
}
