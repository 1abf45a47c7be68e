//! Continuum expansion of the lattice operators, hydrodynamic leading terms,
//! canonical coordinates and central invariants.

pub mod diffop;
pub mod expand;
pub mod invariants;

pub use diffop::{matrix_adjoint, DiffMatrix, DiffOp};
pub use expand::{differential_degree, eps_expand, eps_series, grading_audit, reference_blocks, EpsOperator};
pub use invariants::{
    check_row, closed_form_coordinates, needs_positive_coordinates, rational_point, sample_points,
    table_value, CentralInvariants, Expansions, HydroPair, InvariantResult, RowCheck, Scalar, PAIRS,
};
