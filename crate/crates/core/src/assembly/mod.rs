//! Global DOF numbering, assembly of the diagonal mass and sparse stiffness
//! matrices, load vectors, interpolation and essential boundary values.

mod dofmap;
mod global;
mod interpolate;
mod operators;

pub use dofmap::{build_dof_map, DofMap};
pub use global::{
    assemble_consistent_mass, assemble_load, assemble_mass, assemble_quadrature_mass, assemble_stiffness,
    build_elements,
};
pub use interpolate::{
    apply_essential_bc, discrete_gradient, edge_moments, essential_values, evaluate_in_element, extend_edge_values,
    max_tangential_jump, project_pi0, project_pi_h, EDGE_MOMENT_POINTS,
};
pub use operators::{DiagonalOperator, SparseOperator};
