use crate::al_hierarchy::FlowPair;
use crate::error::{Error, Result};
use crate::symkernel::{Expr, Field, Poly, Slot};
use num_traits::ToPrimitive;

use super::LatticeState;

#[derive(Clone, Debug)]
struct Term {
    c: f64,
    /// `(is_q, shift, exponent)`
    factors: Vec<(bool, i32, i32)>,
}

#[derive(Clone, Debug)]
struct CompiledPoly(Vec<Term>);

impl CompiledPoly {
    fn new(p: &Poly) -> Result<CompiledPoly> {
        let mut terms = Vec::new();
        for (m, c) in p.terms() {
            if m.odd_degree() > 0 {
                return Err(Error::Unsupported("odd generators in a lattice density".into()));
            }
            let mut factors = Vec::new();
            for &(v, e) in m.even_factors() {
                let is_q = match v.field {
                    Field::P => false,
                    Field::Q => true,
                    _ => return Err(Error::WrongMode { expected: crate::symkernel::Mode::Lattice }),
                };
                let Slot::Shift(j) = v.slot else {
                    return Err(Error::WrongMode { expected: crate::symkernel::Mode::Lattice });
                };
                factors.push((is_q, j, e));
            }
            terms.push(Term {
                c: c.to_f64().unwrap_or(f64::NAN),
                factors,
            });
        }
        Ok(CompiledPoly(terms))
    }

    fn eval(&self, s: &LatticeState, n: usize) -> f64 {
        let len = s.len() as i64;
        self.0
            .iter()
            .map(|t| {
                t.factors.iter().fold(t.c, |acc, &(is_q, j, e)| {
                    let i = (n as i64 + j as i64).rem_euclid(len) as usize;
                    let x = if is_q { s.q[i] } else { s.p[i] };
                    acc * x.powi(e)
                })
            })
            .sum()
    }
}

/// Site-wise evaluator of a lattice expression with periodic shifts.
#[derive(Clone, Debug)]
pub struct CompiledExpr {
    num: CompiledPoly,
    den: CompiledPoly,
    logs: Vec<(CompiledPoly, CompiledPoly, CompiledPoly)>,
}

impl CompiledExpr {
    pub fn new(e: &Expr) -> Result<CompiledExpr> {
        let logs = e
            .logs()
            .iter()
            .map(|(a, c)| Ok((CompiledPoly::new(a)?, CompiledPoly::new(c.num())?, CompiledPoly::new(c.den())?)))
            .collect::<Result<_>>()?;
        Ok(CompiledExpr {
            num: CompiledPoly::new(e.num())?,
            den: CompiledPoly::new(e.den())?,
            logs,
        })
    }

    /// Value at site `n`; logs evaluate as `log|arg|`.
    pub fn at(&self, s: &LatticeState, n: usize) -> Result<f64> {
        let den = self.den.eval(s, n);
        if den == 0.0 {
            return Err(Error::DivisionByZero);
        }
        let mut v = self.num.eval(s, n) / den;
        for (a, cn, cd) in &self.logs {
            let d = cd.eval(s, n);
            let arg = a.eval(s, n);
            if d == 0.0 || arg == 0.0 {
                return Err(Error::DivisionByZero);
            }
            v += cn.eval(s, n) / d * arg.abs().ln();
        }
        Ok(v)
    }

    pub fn values(&self, s: &LatticeState) -> Result<Vec<f64>> {
        (0..s.len()).map(|n| self.at(s, n)).collect()
    }

    /// `sum_n e(n)`.
    pub fn total(&self, s: &LatticeState) -> Result<f64> {
        Ok(self.values(s)?.iter().sum())
    }
}

/// Compiled right-hand side of a flow.
#[derive(Clone, Debug)]
pub struct CompiledFlow {
    pub name: String,
    p: CompiledExpr,
    q: CompiledExpr,
}

impl CompiledFlow {
    pub fn new(f: &FlowPair) -> Result<CompiledFlow> {
        Ok(CompiledFlow {
            name: format!("{}{}", f.dir, f.k),
            p: CompiledExpr::new(&f.p)?,
            q: CompiledExpr::new(&f.q)?,
        })
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn rhs(&self, s: &LatticeState) -> Result<(Vec<f64>, Vec<f64>)> {
        Ok((self.p.values(s)?, self.q.values(s)?))
    }
}
