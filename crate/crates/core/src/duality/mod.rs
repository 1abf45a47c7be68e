//! The hat transform `P^ = 1/P`, `Q^ = Q^+/(P P^+)` combined with shift
//! reversal, which interchanges positive and negative flows, conjugates the
//! Hamiltonian operators into each other and yields a Backlund transformation
//! of the combined flow `t0 + s0`.

use std::collections::BTreeMap;
use crate::al_hierarchy::{Dir, FlowPair, Lax};
use crate::check::SymbolicCheck;
use crate::error::Result;
use crate::lambda_ops::{frechet, LambdaSeries, MatrixOp};
use crate::symkernel::{prolong, Expr, Field, Slot, Var};
use crate::trihamiltonian::{p1, p2, p3};

fn pv(j: i32) -> Expr {
    Expr::var(Var::shifted(Field::P, j))
}

fn qv(j: i32) -> Expr {
    Expr::var(Var::shifted(Field::Q, j))
}

/// Image of one lattice variable: `P^{(j)} -> 1/P^{(-j)}`,
/// `Q^{(j)} -> Q^{(1-j)} / (P^{(-j)} P^{(1-j)})`.
pub fn hat_var(v: Var) -> Result<Option<Expr>> {
    let Slot::Shift(j) = v.slot else {
        return Ok(None);
    };
    Ok(match v.field {
        Field::P => Some(pv(-j).inv()?),
        Field::Q => Some(qv(1 - j).try_div(&(&pv(-j) * &pv(1 - j)))?),
        _ => None,
    })
}

/// Applies the hat substitution with reversed shifts to a lattice expression.
pub fn hat(e: &Expr) -> Result<Expr> {
    let mut images = BTreeMap::new();
    for v in e.vars() {
        if let Some(x) = hat_var(v)? {
            images.insert(v, x);
        }
    }
    e.substitute(&|v| images.get(&v).cloned())
}

/// `sum f_j Lambda^j -> sum hat(f_j) Lambda^{-j}`.
pub fn hat_series(x: &LambdaSeries) -> Result<LambdaSeries> {
    let terms = x
        .coeffs()
        .iter()
        .map(|(&j, f)| Ok((-j, hat(f)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(LambdaSeries::from_terms(terms))
}

pub fn hat_operator(op: &MatrixOp) -> Result<MatrixOp> {
    Ok(MatrixOp::new(
        hat_series(op.entry(0, 0))?,
        hat_series(op.entry(0, 1))?,
        hat_series(op.entry(1, 0))?,
        hat_series(op.entry(1, 1))?,
    ))
}

/// `[P^, Q^]` in terms of `P, Q` (no shift reversal).
pub fn hat_fields() -> Result<[Expr; 2]> {
    Ok([pv(0).inv()?, qv(1).try_div(&(&pv(0) * &pv(1)))?])
}

/// Jacobian `J` of `(P, Q) -> (P^, Q^)` as a difference operator.
pub fn jacobian() -> Result<MatrixOp> {
    let [a, b] = hat_fields()?;
    Ok(MatrixOp::new(
        frechet(&a, Field::P),
        frechet(&a, Field::Q),
        frechet(&b, Field::P),
        frechet(&b, Field::Q),
    ))
}

/// `[P_t, Q_t]` of the hatted variables along `from`, minus `to` with the
/// hat substitution applied. Zero when `from` is mapped onto `to`.
pub fn interchange_residual(from: &FlowPair, to: &FlowPair) -> Result<[Expr; 2]> {
    let fields = from.as_fields();
    let mut out = [Expr::zero(), Expr::zero()];
    for (i, (var, target)) in [(pv(0), &to.p), (qv(0), &to.q)].into_iter().enumerate() {
        let lhs = prolong(&hat(&var)?, &fields)?;
        out[i] = lhs - hat(target)?;
    }
    Ok(out)
}

/// Interchange of `t_k` and `s_k` in both directions.
pub fn verify_flow_interchange(lax: &Lax, k: u32) -> Result<Vec<SymbolicCheck>> {
    let t = lax.flow(Dir::T, k)?;
    let s = lax.flow(Dir::S, k)?;
    Ok(vec![
        SymbolicCheck::new(format!("t{k} -> s{k}"), interchange_residual(&t, &s)?.to_vec()),
        SymbolicCheck::new(format!("s{k} -> t{k}"), interchange_residual(&s, &t)?.to_vec()),
    ])
}

fn entries(m: &MatrixOp) -> Vec<Expr> {
    let mut out = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            out.extend(m.entry(i, j).coeffs().values().cloned());
        }
    }
    out
}

/// `J P2 J* = hat(P2)`, `J P1 J* = -hat(P3)`, `J P3 J* = -hat(P1)`.
pub fn conjugate_operators() -> Result<Vec<SymbolicCheck>> {
    let j = jacobian()?;
    let js = j.adjoint()?;
    let conj = |op: &MatrixOp| -> Result<MatrixOp> { j.compose(op)?.compose(&js) };
    let cases = [
        ("J P2 J* = hat P2", p2(), hat_operator(&p2())?),
        ("J P1 J* = -hat P3", p1(), hat_operator(&p3())?.neg()),
        ("J P3 J* = -hat P1", p3(), hat_operator(&p1())?.neg()),
    ];
    cases
        .into_iter()
        .map(|(name, op, want)| {
            Ok(SymbolicCheck::new(name, entries(&conj(&op)?.sub(&want))))
        })
        .collect()
}

/// Right-hand side of the combined flow `t0 + s0`.
pub fn combined_flow(lax: &Lax) -> Result<FlowPair> {
    let t = lax.flow(Dir::T, 0)?;
    let s = lax.flow(Dir::S, 0)?;
    Ok(FlowPair {
        dir: Dir::T,
        k: 0,
        p: &t.p + &s.p,
        q: &t.q + &s.q,
    })
}

/// Substitutes `P(n) -> 1/P(-n)`, `Q(n) -> Q(1-n)/(P(-n) P(1-n))` into the
/// combined flow; zero residual means the map sends solutions to solutions.
pub fn backlund_residual(lax: &Lax) -> Result<SymbolicCheck> {
    let f = combined_flow(lax)?;
    Ok(SymbolicCheck::new(
        "Backlund map of t0 + s0",
        interchange_residual(&f, &f)?.to_vec(),
    ))
}

/// Backlund image of a periodic lattice state.
pub fn backlund_state(p: &[f64], q: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = p.len() as i64;
    let at = |v: &[f64], i: i64| v[i.rem_euclid(n) as usize];
    let pt = (0..n).map(|i| 1.0 / at(p, -i)).collect();
    let qt = (0..n).map(|i| at(q, 1 - i) / (at(p, -i) * at(p, 1 - i))).collect();
    (pt, qt)
}
