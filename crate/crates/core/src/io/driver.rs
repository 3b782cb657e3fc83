use std::path::PathBuf;

use super::config::{BoundaryCondition, MeshGenerator, MeshSource, RunConfig};
use super::vtk::{write_vtk_snapshot, SnapshotMetadata};
use crate::error::{Error, Result};
use crate::mesh::{
    build_scattering_demo_mesh, build_structured_hybrid_mesh, build_structured_rect_mesh, build_structured_tri_mesh,
    read_mesh, validate_mesh, HybridMesh, MeshStatistics,
};
use crate::timestepping::{run_simulation, RunSummary, TimeConfig};

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub mesh: MeshStatistics,
    pub summary: RunSummary,
    /// Written snapshot files in step order.
    pub snapshots: Vec<PathBuf>,
}

pub fn build_mesh(source: &MeshSource) -> Result<HybridMesh> {
    match source {
        MeshSource::File(path) => read_mesh(path),
        MeshSource::Generator(g) => match *g {
            MeshGenerator::Scattering { h, n_circle } => build_scattering_demo_mesh(h, n_circle),
            MeshGenerator::Rect { nx, ny, bbox } => build_structured_rect_mesh(nx, ny, bbox),
            MeshGenerator::Tri { nx, ny, bbox, split } => build_structured_tri_mesh(nx, ny, bbox, split),
            MeshGenerator::Hybrid {
                nx,
                ny,
                bbox,
                rect_columns,
                split,
            } => build_structured_hybrid_mesh(nx, ny, bbox, rect_columns, split),
        },
    }
}

pub fn snapshot_file_name(prefix: &str, step: usize) -> String {
    format!("{prefix}_{step:06}.vtk")
}

/// Builds the mesh, integrates to `t_end` and writes the scheduled VTK
/// snapshots into the output directory.
pub fn run_config(config: &RunConfig) -> Result<RunOutcome> {
    let mesh = build_mesh(&config.mesh)?;
    let stats = validate_mesh(&mesh)?;

    let mut time = TimeConfig::new(config.time.t_end);
    time.step = config.time.step;
    time.output = config.output.schedule.clone();
    time.source = config.time.source.source()?;
    let (field, velocity) = config.time.initial.initial_data()?;
    time.initial_field = field;
    time.initial_velocity = velocity;
    for (&tag, cond) in &config.bc {
        if let BoundaryCondition::Essential(expr) = cond {
            if mesh.edges_with_tag(tag).next().is_none() {
                return Err(Error::Config(format!(
                    "[bc] {tag}: the mesh has no edges with this tag"
                )));
            }
            time.essential.insert(tag, expr.trace()?);
        }
    }

    let dir = &config.output.directory;
    let mut snapshots = Vec::new();
    let summary = run_simulation(&mesh, &time, |snap| {
        if snapshots.is_empty() {
            std::fs::create_dir_all(dir)?;
        }
        let path = dir.join(snapshot_file_name(&config.output.prefix, snap.step));
        let meta = SnapshotMetadata {
            t: snap.t,
            step: Some(snap.step),
            dt: Some(snap.dt),
            requested: Some(snap.requested),
            h_max: Some(stats.h_max),
        };
        write_vtk_snapshot(snap.mesh, snap.dofmap, snap.coeffs, &meta, &path)?;
        snapshots.push(path);
        Ok(())
    })?;
    Ok(RunOutcome {
        mesh: stats,
        summary,
        snapshots,
    })
}
