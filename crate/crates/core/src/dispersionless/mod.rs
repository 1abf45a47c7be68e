//! Frobenius manifold, hydrodynamic flows and the dispersionless limit of
//! the lattice hierarchy.

pub mod flows;
pub mod frobenius;
pub mod integrate;
pub mod limit;

pub use flows::{
    apply_matrix, apply_recursion, commutator, gradient, negative_density, negative_flow, principal_flow2,
    recursion_checks, reference_theta, theta_checks, t1_flow0, t1_flows, theta, tilde_p1, tilde_p1_hydro, tilde_p2, tilde_p2_hydro, HydroFlow,
    HydroOperator,
};
pub use frobenius::{
    euler, eta, frobenius_checks, frobenius_data, intersection_form_from, potential,
    reference_intersection_form, unity, FrobeniusData,
};
pub use integrate::integrate_total_x_derivative;
pub use limit::{change_of_variables_check, limit_flow, operator_match, dispersionless_limit_match, to_v};
