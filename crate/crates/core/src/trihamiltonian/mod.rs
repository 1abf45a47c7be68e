//! The three Hamiltonian operators, their bivectors and Schouten brackets.

pub mod operators;
pub mod schouten;

pub use operators::{hamiltonian_operator, p1, p2, p3, recursion_times_p2};
pub use schouten::{
    bivector, bivectors, constant_form, constant_form_residual, expected_constant_form,
    pencil_residuals, schouten_bracket, verify_tri_hamiltonian, BracketReport,
};
