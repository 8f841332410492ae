//! Numerical phase-space analysis of sampled one-dimensional wavefunctions.

mod compare;
mod contour;
mod fermi;
mod grid;
mod wigner;

pub use compare::{compare_fermi_wigner, ComparisonReport, CompareOptions, LevelComparison, DEFAULT_ANGLES};
pub use contour::{ray_distance, zero_contour, Polyline};
pub use fermi::{
    bohm_potential, fermi_field, fermi_operator_residual, phase_gradient, quantum_potential_term,
    OperatorResidual, MIN_P_SAMPLES,
};
pub use grid::{
    polar_decompose, GridWavefunction, PhaseSpaceField, PolarFields, PolarMode, PolarOptions, UniformAxis,
    BOUNDARY_DECAY, DEFAULT_NODE_THRESHOLD, MIN_SAMPLES, REALNESS_TOL,
};
pub use wigner::{refine_twice, wigner_transform, IMAGINARY_TOL};
