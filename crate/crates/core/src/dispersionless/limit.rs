//! Leading `eps^0` parts of the lattice flows and operators, pushed through
//! `v1 = u2 - u1`, `v2 = log u2`.

use super::flows::{negative_flow, principal_flow2, tilde_p1, tilde_p2};
use super::frobenius::{v1, w};
use crate::al_hierarchy::{Dir, Lax};
use crate::central_invariants::{eps_expand, eps_series, DiffMatrix, DiffOp};
use crate::check::SymbolicCheck;
use crate::error::{Error, Result};
use crate::symkernel::{total_x_derivative_n, Expr, Field, Slot, Var};
use crate::trihamiltonian::{p1, p2};

/// Rewrites a jet expression in `u1, u2` through `u1 = w - v1`, `u2 = w`.
pub fn to_v(e: &Expr) -> Result<Expr> {
    let u1 = w() - v1();
    let u2 = w();
    let mut images = std::collections::BTreeMap::new();
    for v in e.vars() {
        let base = match v.field {
            Field::U1 => &u1,
            Field::U2 => &u2,
            _ => continue,
        };
        let Slot::Jet(m) = v.slot else { continue };
        images.insert(v, total_x_derivative_n(base, m)?);
    }
    e.substitute(&|v| images.get(&v).cloned())
}

/// `eps^0` part of a lattice flow, `(v1_t, v2_t)`.
pub fn limit_flow(lax: &Lax, dir: Dir, k: u32) -> Result<[Expr; 2]> {
    let f = lax.flow(dir, k)?;
    let lead = |e: &Expr| -> Result<Expr> {
        let s = eps_series(e, 2)?;
        if !s[0].is_zero() {
            return Err(Error::Identity(format!("flow has an eps^-1 part {}", s[0])));
        }
        Ok(s[1].clone())
    };
    let (u1t, u2t) = (lead(&f.p)?, lead(&f.q)?);
    let u2 = Expr::var(Var::jet(Field::U2, 0));
    Ok([to_v(&(&u2t - &u1t))?, to_v(&u2t.try_div(&u2)?)?])
}

/// `t_k` against `t^{2,k}`, or `s_k` against the flow of `h_k`.
pub fn dispersionless_limit_match(lax: &Lax, dir: Dir, k: u32) -> Result<SymbolicCheck> {
    let got = limit_flow(lax, dir, k)?;
    let (want, label) = match dir {
        Dir::T => (principal_flow2(k)?.rhs(), format!("t{k} -> t2,{k}")),
        Dir::S => (negative_flow(k)?.rhs(), format!("s{k} -> h{k}")),
    };
    Ok(SymbolicCheck::new(label, vec![&got[0] - &want[0], &got[1] - &want[1]]))
}

fn jacobian() -> Result<DiffMatrix> {
    let u2 = Expr::var(Var::jet(Field::U2, 0));
    Ok([
        [DiffOp::mul_by(-Expr::one()), DiffOp::mul_by(Expr::one())],
        [DiffOp::zero(), DiffOp::mul_by(u2.inv()?)],
    ])
}

fn mat_mul(a: &DiffMatrix, b: &DiffMatrix) -> Result<DiffMatrix> {
    let entry = |i: usize, j: usize| -> Result<DiffOp> {
        Ok(a[i][0].compose(&b[0][j])?.add(&a[i][1].compose(&b[1][j])?))
    };
    Ok([[entry(0, 0)?, entry(0, 1)?], [entry(1, 0)?, entry(1, 1)?]])
}

fn op_to_v(op: &DiffOp) -> Result<DiffOp> {
    op.coeffs()
        .iter()
        .try_fold(DiffOp::zero(), |acc, (&k, f)| Ok(acc.add(&DiffOp::term(to_v(f)?, k))))
}

fn residuals(a: &DiffMatrix, b: &DiffMatrix) -> Vec<Expr> {
    let mut out = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            out.extend(a[i][j].sub(&b[i][j]).coeffs().values().cloned());
        }
    }
    out
}

/// `J P_{a;0} J^T` against `P~_a` for `a = 1, 2`.
pub fn operator_match() -> Result<Vec<SymbolicCheck>> {
    let j = jacobian()?;
    let jt = [[j[0][0].clone(), j[1][0].clone()], [j[0][1].clone(), j[1][1].clone()]];
    let mut out = Vec::new();
    for (name, op, want) in [("P1;0 -> P~1", p1(), tilde_p1()), ("P2;0 -> P~2", p2(), tilde_p2()?)] {
        let lead = eps_expand(&op, 0)?.block(0)?.clone();
        let m = mat_mul(&mat_mul(&j, &lead)?, &jt)?;
        let m: DiffMatrix = [
            [op_to_v(&m[0][0])?, op_to_v(&m[0][1])?],
            [op_to_v(&m[1][0])?, op_to_v(&m[1][1])?],
        ];
        out.push(SymbolicCheck::new(name, residuals(&m, &want)));
    }
    Ok(out)
}

/// The lattice change of variables `(Q - P, log Q)` and the continuum one
/// `(u2 - u1, log u2)` agree under `P -> u1`, `Q -> u2`.
pub fn change_of_variables_check() -> Result<SymbolicCheck> {
    let (p, q) = (Var::shifted(Field::P, 0), Var::shifted(Field::Q, 0));
    let (u1, u2) = (Var::jet(Field::U1, 0), Var::jet(Field::U2, 0));
    let sub = |e: &Expr| {
        e.substitute(&|v| {
            (v == p)
                .then(|| Expr::var(u1))
                .or_else(|| (v == q).then(|| Expr::var(u2)))
        })
    };
    let lattice_v1 = Expr::var(q) - Expr::var(p);
    let lattice_v2 = Expr::log(&Expr::var(q))?;
    let cont_v1 = Expr::var(u2) - Expr::var(u1);
    let cont_v2 = Expr::log(&Expr::var(u2))?;
    let mut residual = vec![sub(&lattice_v1)? - cont_v1];
    for (lv, cv) in [(p, u1), (q, u2)] {
        residual.push(sub(&lattice_v2.partial(lv))? - cont_v2.partial(cv));
    }
    Ok(SymbolicCheck::new("v1 = Q - P = u2 - u1, v2 = log Q = log u2", residual))
}
