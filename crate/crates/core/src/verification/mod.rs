//! Exact solutions, error norms, convergence studies and the property
//! checks behind the acceptance tests.

mod convergence;
mod exact;
mod norms;
mod quadrature_error;
mod reflection;
mod suite;
mod yee;

pub use convergence::{
    convergence_study, interpolation_study, ConvergenceReport, InterpolationLevel, LevelResult, StudyConfig,
    RESIDUAL_TOLERANCE,
};
pub use exact::{
    standing_mode_solution, ExactSolution, FieldFn, ResidualReport, ScalarFn, RESIDUAL_STEP, STANDING_MODE_OMEGA,
};
pub use norms::{l2_errors, observed_rate, ErrorEvaluator, ErrorNorms, MeshFamily, ERROR_QUADRATURE_DEGREE};
pub use quadrature_error::{
    quadrature_error_functional, quadrature_error_piecewise_constant, quadrature_error_study, QuadratureErrorLevel,
};
pub use reflection::{interface_reflection_test, reflection_ratio, ReflectionReport, ReflectionSetup};
pub use suite::{
    energy_drift, instability_growth, random_element_diagonality, random_rectangle, random_shape_regular_triangle,
    run_property_suite, CheckOutcome,
};
pub use yee::{yee_equivalence_check, yee_negative_control, YeeReport};
