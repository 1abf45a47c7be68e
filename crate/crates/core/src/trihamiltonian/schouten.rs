//! Bivector functionals of lattice operators and their Schouten brackets.
//!
//! Densities live in the lattice super-ring generated by shifts of `P, Q`
//! and the odd generators `th1, th2` dual to them. Brackets are compared as
//! canonical forms modulo the image of `Lambda - 1`.

use std::fmt;

use super::operators::{p1, p2, p3};
use crate::error::{Error, Result};
use crate::lambda_ops::{LambdaSeries, MatrixOp};
use crate::symkernel::{
    functional_canonical_form, variational_derivative, Expr, Field, Odd, Rational, Target,
};

fn theta(alpha: u8) -> Expr {
    Expr::odd(Odd::shifted(alpha, 0))
}

const FIELDS: [Field; 2] = [Field::P, Field::Q];

/// Canonical density of `1/2 sum theta_a (op^{ab} theta_b)`.
pub fn bivector(op: &MatrixOp) -> Result<Expr> {
    if !op.is_antisymmetric()? {
        return Err(Error::NotAntisymmetric);
    }
    let th = [theta(1), theta(2)];
    let mut out = Expr::zero();
    for a in 0..2 {
        for b in 0..2 {
            out = out + &th[a] * &op.entry(a, b).apply(&th[b])?;
        }
    }
    functional_canonical_form(&out.scale(&Rational::new(1.into(), 2.into())))
}

/// `[F, G] = int (dF/dth_a dG/du^a + (-1)^p dF/du^a dG/dth_a)`, `p` the odd
/// degree of `F`, returned in canonical form.
pub fn schouten_bracket(f: &Expr, g: &Expr) -> Result<Expr> {
    let p = f
        .odd_degree()
        .ok_or_else(|| Error::Unsupported("bracket of inhomogeneous odd degree".into()))?;
    let sign = if p % 2 == 0 { Expr::one() } else { -Expr::one() };
    let mut out = Expr::zero();
    for (i, field) in FIELDS.into_iter().enumerate() {
        let alpha = i as u8 + 1;
        let f_th = variational_derivative(f, Target::Odd(alpha))?;
        let g_u = variational_derivative(g, Target::Even(field))?;
        let f_u = variational_derivative(f, Target::Even(field))?;
        let g_th = variational_derivative(g, Target::Odd(alpha))?;
        out = out + f_th * g_u + &sign * &(f_u * g_th);
    }
    functional_canonical_form(&out)
}

/// The bivectors `I, J, K` of the three operators.
pub fn bivectors() -> Result<[Expr; 3]> {
    Ok([bivector(&p1())?, bivector(&p2())?, bivector(&p3())?])
}

/// One bracket evaluation.
#[derive(Clone, Debug)]
pub struct BracketReport {
    pub label: String,
    pub residual: Expr,
}

impl BracketReport {
    pub fn passed(&self) -> bool {
        self.residual.is_zero()
    }
}

impl fmt::Display for BracketReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{} {status}", self.label)?;
        if !self.passed() {
            write!(f, " residual {}", self.residual)?;
        }
        Ok(())
    }
}

const NAMES: [&str; 3] = ["I", "J", "K"];

/// `[I,I], [J,J], [K,K], [I,J], [I,K], [J,K]`.
pub fn verify_tri_hamiltonian() -> Result<Vec<BracketReport>> {
    let b = bivectors()?;
    let pairs = [(0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)];
    pairs
        .into_iter()
        .map(|(i, j)| {
            Ok(BracketReport {
                label: format!("[{},{}]", NAMES[i], NAMES[j]),
                residual: schouten_bracket(&b[i], &b[j])?,
            })
        })
        .collect()
}

/// Self-bracket of `I + lambda J + mu K` at each grid point. A quadratic form
/// in `(lambda, mu)` vanishing on a 3x3 grid of distinct values vanishes
/// identically.
pub fn pencil_residuals(grid: &[i64]) -> Result<Vec<((i64, i64), Expr)>> {
    let [i, j, k] = bivectors()?;
    let mut out = Vec::new();
    for &l in grid {
        for &m in grid {
            let f = &i + &(&j * &Expr::int(l)) + &k * &Expr::int(m);
            out.push(((l, m), schouten_bracket(&f, &f)?));
        }
    }
    Ok(out)
}

/// `J P1 J^T` with `J` the Jacobian of `v1 = Q - P`, `v2 = log Q`.
pub fn constant_form() -> Result<MatrixOp> {
    let f = |e: Expr| LambdaSeries::function(e);
    let q = Expr::var(crate::symkernel::Var::shifted(Field::Q, 0));
    let jac = MatrixOp::new(
        f(-Expr::one()),
        f(Expr::one()),
        LambdaSeries::zero(),
        f(q.inv()?),
    );
    jac.compose(&p1())?.compose(&jac.adjoint()?)
}

/// `[[0, Lambda - 1], [1 - Lambda^{-1}, 0]]`.
pub fn expected_constant_form() -> MatrixOp {
    let one = Expr::one();
    MatrixOp::new(
        LambdaSeries::zero(),
        LambdaSeries::from_terms([(1, one.clone()), (0, -&one)]),
        LambdaSeries::from_terms([(0, one.clone()), (-1, -&one)]),
        LambdaSeries::zero(),
    )
}

/// Nonzero entries of `constant_form() - expected_constant_form()`.
pub fn constant_form_residual() -> Result<MatrixOp> {
    Ok(constant_form()?.sub(&expected_constant_form()))
}
