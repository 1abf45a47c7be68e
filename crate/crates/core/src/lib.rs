//! Exact symbolic engine for the Ablowitz-Ladik hierarchy: Lax operators,
//! flows, Hamiltonian structures, Schouten brackets, central invariants,
//! duality and the dispersionless limit, plus a numeric lattice integrator.

pub mod al_hierarchy;
pub mod central_invariants;
pub mod check;
pub mod dispersionless;
pub mod duality;
pub mod error;
pub mod lambda_ops;
pub mod lattice_sim;
pub mod report;
pub mod suites;
pub mod symkernel;
pub mod trihamiltonian;

pub use error::{Error, Result};
pub use symkernel::{Expr, Field, Mode, Poly, Rational, Var};
