//! Mass-lumped edge finite elements for the time-domain curl-curl wave
//! equation `E_tt + curl curl E = f` on conforming hybrid meshes of
//! triangles and axis-aligned rectangles.
//!
//! Rectangles carry the lowest-order Nedelec element; triangles carry the
//! same element enriched with three edge bubbles. Together with edge-midpoint
//! quadrature for the mass term this gives a diagonal mass matrix, so the
//! semi-discrete system can be advanced with explicit leapfrog steps. On
//! uniform rectangular grids the scheme reduces to the classical Yee update.

// `!(x > 0.0)` rejects NaN as well; index loops mirror the formulas
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod assembly;
pub mod error;
pub mod fem_local;
pub mod geometry;
pub mod io;
pub mod mesh;
pub mod timestepping;
pub mod verification;

pub use error::{Error, Result};
pub use geometry::{Point, Vec2};
pub use mesh::{BoundaryTag, ElementId, HybridMesh, MeshStatistics};
