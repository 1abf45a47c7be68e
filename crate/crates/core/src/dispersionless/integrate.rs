//! Primitives of exact first-order expressions on the jet ring generated by
//! `v1^{+-1}, log v1, v2, w^{+-1}`.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::symkernel::{
    jet_partial, total_x_derivative, variational_derivative, Expr, Field, Frac, Poly, Rational, Slot,
    Target, Var,
};

fn v1() -> Var {
    Var::jet(Field::V1, 0)
}

fn v2() -> Var {
    Var::jet(Field::V2, 0)
}

fn w() -> Var {
    Var::jet(Field::W, 0)
}

/// `c * prod x^e * (log v1)^l`.
#[derive(Clone, Debug)]
struct Term {
    c: Rational,
    exps: BTreeMap<Var, i32>,
    logs: u32,
}

impl Term {
    fn exp(&self, v: Var) -> i32 {
        self.exps.get(&v).copied().unwrap_or(0)
    }

    fn with_exp(&self, v: Var, e: i32) -> Term {
        let mut t = self.clone();
        if e == 0 {
            t.exps.remove(&v);
        } else {
            t.exps.insert(v, e);
        }
        t
    }

    fn to_expr(&self) -> Result<Expr> {
        let mut out = Expr::constant(self.c.clone());
        for (&v, &e) in &self.exps {
            out = out * Expr::var(v).pow(e)?;
        }
        if self.logs > 0 {
            let l = Expr::log(&Expr::var(v1()))?;
            for _ in 0..self.logs {
                out = out.try_mul(&l)?;
            }
        }
        Ok(out)
    }
}

fn unsupported(what: &str) -> Error {
    Error::Unsupported(format!("primitive of {what}"))
}

fn frac_terms(f: &Frac, logs: u32) -> Result<Vec<Term>> {
    let (dm, dc) = f
        .den()
        .as_single_term()
        .ok_or_else(|| unsupported("a non-monomial denominator"))?;
    let inv = dm.inverse_even().ok_or_else(|| unsupported("an odd denominator"))?;
    let mut out = Vec::new();
    for (m, c) in f.num().terms() {
        if m.odd_degree() > 0 {
            return Err(unsupported("an odd expression"));
        }
        let (prod, _) = m.mul(&inv).ok_or_else(|| unsupported("a vanishing monomial"))?;
        out.push(Term {
            c: c / dc,
            exps: prod.even_factors().iter().copied().collect(),
            logs,
        });
    }
    Ok(out)
}

fn terms(e: &Expr) -> Result<Vec<Term>> {
    let mut out = frac_terms(e.frac(), 0)?;
    for (arg, c) in e.logs() {
        if *arg != Poly::var(v1()) {
            return Err(unsupported(&format!("log({arg})")));
        }
        out.extend(frac_terms(c, 1)?);
    }
    Ok(out)
}

fn sum(ts: &[Term]) -> Result<Expr> {
    ts.iter().try_fold(Expr::zero(), |acc, t| Ok(acc + t.to_expr()?))
}

fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// `int t dv1` with the other variables held fixed.
fn integrate_v1(t: &Term) -> Result<Vec<Term>> {
    let n = t.exp(v1());
    match (t.logs, n) {
        (0, -1) => Ok(vec![Term { logs: 1, ..t.with_exp(v1(), 0) }]),
        (0, _) => {
            let mut r = t.with_exp(v1(), n + 1);
            r.c /= rat(n as i64 + 1);
            Ok(vec![r])
        }
        (1, -1) => Err(unsupported("(log v1)^2 terms")),
        (1, _) => {
            let k = rat(n as i64 + 1);
            let mut a = t.with_exp(v1(), n + 1);
            a.c /= &k;
            let mut b = t.with_exp(v1(), n + 1);
            b.logs = 0;
            b.c = -(&b.c / (&k * &k));
            Ok(vec![a, b])
        }
        _ => Err(unsupported("powers of log v1")),
    }
}

/// `int v2^n w^m dv2` with `dw/dv2 = w`.
fn integrate_v2(t: &Term) -> Result<Vec<Term>> {
    if t.logs > 0 || t.exp(v1()) != 0 {
        return Err(unsupported("a v1-dependent remainder"));
    }
    let n = t.exp(v2());
    let m = t.exp(w());
    if n < 0 {
        return Err(unsupported("negative powers of v2"));
    }
    if m == 0 {
        let mut r = t.with_exp(v2(), n + 1);
        r.c /= rat(n as i64 + 1);
        return Ok(vec![r]);
    }
    let mut out = Vec::new();
    let mut coef = t.c.clone() / rat(m as i64);
    let mut k = n;
    loop {
        out.push(Term {
            c: coef.clone(),
            ..t.with_exp(v2(), k)
        });
        if k == 0 {
            break;
        }
        coef = -coef * rat(k as i64) / rat(m as i64);
        k -= 1;
    }
    Ok(out)
}

/// Coefficients `a1, a2` of `e = a1 v1_x + a2 v2_x`, both of jet order 0.
fn first_order_parts(e: &Expr) -> Result<[Expr; 2]> {
    for v in e.vars() {
        let ok = match (v.field, v.slot) {
            (Field::V1 | Field::V2, Slot::Jet(0 | 1)) => true,
            (Field::W, Slot::Jet(0)) => true,
            _ => false,
        };
        if !ok {
            return Err(unsupported(&format!("an expression in {v}")));
        }
    }
    let x1 = Var::jet(Field::V1, 1);
    let x2 = Var::jet(Field::V2, 1);
    let a1 = e.partial(x1);
    let a2 = e.partial(x2);
    let rest = e - &(&a1 * &Expr::var(x1)) - &a2 * &Expr::var(x2);
    let order0 = |x: &Expr| !x.vars().contains(&x1) && !x.vars().contains(&x2);
    if !rest.is_zero() || !order0(&a1) || !order0(&a2) {
        return Err(unsupported("an expression that is not linear in first jets"));
    }
    Ok([a1, a2])
}

/// `f` with `d_x f = e` and no constant term. Fails with `NotExact` when the
/// variational derivative of `e` does not vanish.
pub fn integrate_total_x_derivative(e: &Expr) -> Result<Expr> {
    if e.is_zero() {
        return Ok(Expr::zero());
    }
    for field in [Field::V1, Field::V2] {
        if !variational_derivative(e, Target::Even(field))?.is_zero() {
            return Err(Error::NotExact);
        }
    }
    let [a1, a2] = first_order_parts(e)?;
    let mut f1 = Vec::new();
    for t in terms(&a1)? {
        f1.extend(integrate_v1(&t)?);
    }
    let f1 = sum(&f1)?;
    let rem = a2 - jet_partial(&f1, v2());
    let mut g = Vec::new();
    for t in terms(&rem)? {
        g.extend(integrate_v2(&t)?);
    }
    let mut f = f1 + sum(&g)?;
    let constant = f.frac().is_poly().then(|| {
        f.frac().num().terms().find(|(m, _)| m.is_one()).map(|(_, c)| c.clone())
    });
    if let Some(Some(c)) = constant {
        if !c.is_zero() {
            f = f - Expr::constant(c);
        }
    }
    if total_x_derivative(&f)? != *e {
        return Err(Error::Identity(format!("primitive {f} does not differentiate back to {e}")));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(s: &str) -> Expr {
        Expr::parse(s).unwrap()
    }

    #[test]
    fn primitive_of_exact_sum() {
        let f = ex("v1 + w");
        let d = total_x_derivative(&f).unwrap();
        assert_eq!(integrate_total_x_derivative(&d).unwrap(), f);
    }

    #[test]
    fn primitive_with_log() {
        let f = Expr::log(&ex("v1")).unwrap() * ex("v1^2*w") + ex("v2*w^2");
        let d = total_x_derivative(&f).unwrap();
        assert_eq!(integrate_total_x_derivative(&d).unwrap(), f);
    }

    #[test]
    fn non_exact_input() {
        let e = ex("v1*v1{1}*v2{1}");
        assert!(matches!(integrate_total_x_derivative(&e), Err(Error::NotExact)));
    }

    #[test]
    fn constant_is_dropped() {
        let d = ex("v1{1}");
        assert_eq!(integrate_total_x_derivative(&d).unwrap(), ex("v1"));
    }
}
