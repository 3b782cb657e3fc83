//! Local element spaces, lumping quadratures and element matrices.

mod dense;
mod element;
pub mod quadrature;
mod rectangle;
mod triangle;

pub use dense::DenseMatrix;
pub use element::{
    eval_basis, eval_curl_basis, local_consistent_mass, local_mass_lumped, local_matrices, local_stiffness,
    lumped_mass_matrix, Element, LocalElementMatrices, LUMPING_OFF_DIAGONAL_TOL, STIFFNESS_QUADRATURE_DEGREE,
};
pub use quadrature::{check_quadrature_exactness, LumpingQuadrature, ReferenceShape};
pub use rectangle::RectangleElement;
pub use triangle::{barycentric_gradients, BubbleCoefficients, TriangleElement};
