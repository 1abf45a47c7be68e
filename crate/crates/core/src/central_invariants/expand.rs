//! Continuum expansion of lattice operators: `P(n+j) -> u1(x + j eps)`,
//! `Q(n+j) -> u2(x + j eps)`, `Lambda = exp(eps d_x)`, followed by the
//! rescaling `op -> op / eps`.

use std::collections::BTreeMap;

use num_traits::One;

use super::diffop::{DiffMatrix, DiffOp};
use crate::error::{Error, Result};
use crate::lambda_ops::{LambdaSeries, MatrixOp};
use crate::symkernel::{Expr, Field, Rational, Slot, Var};

/// `eps`-graded operator: block `s` multiplies `eps^s` after the rescaling.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EpsOperator {
    pub blocks: BTreeMap<u32, DiffMatrix>,
}

impl EpsOperator {
    pub fn block(&self, s: u32) -> Result<&DiffMatrix> {
        self.blocks
            .get(&s)
            .ok_or_else(|| Error::Window(format!("eps^{s} block was not expanded")))
    }

    /// Coefficient `Q^{ij}_{s,k}` of `eps^s d_x^k`.
    pub fn coeff(&self, s: u32, k: u32) -> Result<[[Expr; 2]; 2]> {
        let b = self.block(s)?;
        Ok([
            [b[0][0].coeff(k), b[0][1].coeff(k)],
            [b[1][0].coeff(k), b[1][1].coeff(k)],
        ])
    }

    pub fn order(&self) -> u32 {
        self.blocks.keys().next_back().copied().unwrap_or(0)
    }
}

fn continuum_field(f: Field) -> Result<Field> {
    match f {
        Field::P => Ok(Field::U1),
        Field::Q => Ok(Field::U2),
        _ => Err(Error::Unsupported(format!("continuum image of {}", f.name()))),
    }
}

fn inv_factorial(m: u32) -> Rational {
    (1..=m).fold(Rational::one(), |acc, i| acc / Rational::from_integer(i.into()))
}

fn pow_i(j: i32, m: u32) -> Rational {
    Rational::from_integer(num_bigint::BigInt::from(j).pow(m))
}

type Series = Vec<Expr>;

fn series_mul(a: &Series, b: &Series, n: usize) -> Series {
    let mut out = vec![Expr::zero(); n];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            if !y.is_zero() {
                out[i + j] = &out[i + j] + &(x * y);
            }
        }
    }
    out
}

fn series_inv(a: &Series, n: usize) -> Result<Series> {
    let a0 = a[0].inv()?;
    let mut out = vec![Expr::zero(); n];
    out[0] = a0.clone();
    for k in 1..n {
        let mut acc = Expr::zero();
        for i in 1..=k {
            acc = acc + &a[i] * &out[k - i];
        }
        out[k] = -(&a0 * &acc);
    }
    Ok(out)
}

/// Taylor series in `eps` of a lattice variable, `n` terms.
fn var_series(v: Var, n: usize) -> Result<Series> {
    let Slot::Shift(j) = v.slot else {
        return Err(Error::WrongMode { expected: crate::symkernel::Mode::Lattice });
    };
    let f = continuum_field(v.field)?;
    Ok((0..n as u32)
        .map(|m| Expr::var(Var::jet(f, m)).scale(&(pow_i(j, m) * inv_factorial(m))))
        .collect())
}

/// Taylor series in `eps` of a lattice expression, `n` terms.
pub fn eps_series(e: &Expr, n: usize) -> Result<Vec<Expr>> {
    if !e.odd_vars().is_empty() || e.has_logs() {
        return Err(Error::Unsupported("eps-expansion of odd or log terms".into()));
    }
    let poly_series = |p: &crate::symkernel::Poly| -> Result<Series> {
        let mut out = vec![Expr::zero(); n];
        for (m, c) in p.terms() {
            let mut t: Series = vec![Expr::zero(); n];
            t[0] = Expr::constant(c.clone());
            for &(v, ex) in m.even_factors() {
                let s = var_series(v, n)?;
                let base = if ex < 0 { series_inv(&s, n)? } else { s };
                for _ in 0..ex.unsigned_abs() {
                    t = series_mul(&t, &base, n);
                }
            }
            for (o, x) in out.iter_mut().zip(t) {
                *o = &*o + &x;
            }
        }
        Ok(out)
    };
    let num = poly_series(e.num())?;
    if e.frac().is_poly() {
        return Ok(num);
    }
    let den = poly_series(e.den())?;
    Ok(series_mul(&num, &series_inv(&den, n)?, n))
}

fn expand_entry(x: &LambdaSeries, order: u32) -> Result<Vec<DiffOp>> {
    if !x.is_finite() {
        return Err(Error::Window("eps-expansion needs a finite operator".into()));
    }
    let n = order as usize + 2;
    let mut raw = vec![DiffOp::zero(); n];
    for (&j, f) in x.coeffs() {
        let fs = eps_series(f, n)?;
        for (a, fa) in fs.iter().enumerate() {
            for m in 0..(n - a) as u32 {
                let c = pow_i(j, m) * inv_factorial(m);
                raw[a + m as usize] = raw[a + m as usize].add(&DiffOp::term(fa.scale(&c), m));
            }
        }
    }
    if !raw[0].is_zero() {
        return Err(Error::Identity(format!(
            "eps^0 part {} survives, so the 1/eps rescaling is singular",
            raw[0]
        )));
    }
    Ok(raw.into_iter().skip(1).collect())
}

/// Blocks `s = 0..=order` of `op / eps`.
pub fn eps_expand(op: &MatrixOp, order: u32) -> Result<EpsOperator> {
    let mut entries: Vec<Vec<DiffOp>> = Vec::with_capacity(4);
    for i in 0..2 {
        for j in 0..2 {
            entries.push(expand_entry(op.entry(i, j), order)?);
        }
    }
    let mut out = EpsOperator::default();
    for s in 0..=order as usize {
        out.blocks.insert(
            s as u32,
            [
                [entries[0][s].clone(), entries[1][s].clone()],
                [entries[2][s].clone(), entries[3][s].clone()],
            ],
        );
    }
    Ok(out)
}

/// Differential degree with `deg u^{(l)} = l`, if homogeneous.
pub fn differential_degree(e: &Expr) -> Option<u32> {
    let deg = |p: &crate::symkernel::Poly| -> Option<Option<u32>> {
        let mut d: Option<u32> = None;
        for (m, _) in p.terms() {
            let mut t = 0i64;
            for &(v, ex) in m.even_factors() {
                if let Slot::Jet(l) = v.slot {
                    t += l as i64 * ex as i64;
                }
            }
            let t = u32::try_from(t).ok()?;
            match d {
                None => d = Some(t),
                Some(x) if x != t => return None,
                _ => {}
            }
        }
        Some(d)
    };
    let num = deg(e.num())?;
    let den = deg(e.den())?.unwrap_or(0);
    match num {
        None => Some(0),
        Some(n) => n.checked_sub(den),
    }
}

/// Checks that the coefficient of `eps^s d^k` has differential degree
/// `s + 1 - k`; returns the offending `(s, k, i, j)` entries.
pub fn grading_audit(eo: &EpsOperator) -> Vec<(u32, u32, usize, usize)> {
    let mut bad = Vec::new();
    for (&s, b) in &eo.blocks {
        for i in 0..2 {
            for j in 0..2 {
                for (&k, c) in b[i][j].coeffs() {
                    let want = (s + 1).checked_sub(k);
                    if want.is_none() || differential_degree(c) != want {
                        bad.push((s, k, i, j));
                    }
                }
            }
        }
    }
    bad
}

fn u(a: u8, l: u32) -> Expr {
    let f = if a == 1 { Field::U1 } else { Field::U2 };
    Expr::var(Var::jet(f, l))
}

fn r(n: i64, d: i64) -> Expr {
    Expr::rational(n, d)
}

fn t(f: Expr, k: u32) -> DiffOp {
    DiffOp::term(f, k)
}

fn sum(ts: Vec<DiffOp>) -> DiffOp {
    ts.into_iter().fold(DiffOp::zero(), |a, b| a.add(&b))
}

/// Reference blocks `s = 0, 1, 2` of the first (`id = 1`) and second
/// (`id = 2`) operators, assembled from the operators `A, ..., F`.
pub fn reference_blocks(id: u8) -> Result<Vec<DiffMatrix>> {
    let (u1, u2) = (u(1, 0), u(2, 0));
    let d = DiffOp::d(1);
    let m = DiffOp::mul_by;
    let z = DiffOp::zero;
    match id {
        1 => {
            let b0 = [
                [
                    d.compose(&m(u2.clone()))?.add(&m(u2.clone()).compose(&d)?).neg(),
                    d.compose(&m(u2.clone()))?.neg(),
                ],
                [m(u2.clone()).compose(&d)?.neg(), z()],
            ];
            let a = t(&u2 * &r(1, 2), 2);
            let b1 = [
                [sum(vec![t(-(&u(2, 2) * &r(1, 2)), 0), t(-u(2, 1), 1)]), a.adjoint()?.neg()],
                [a, z()],
            ];
            let bb = sum(vec![
                t(-(&u(2, 3) * &r(1, 6)), 0),
                t(-(&u(2, 2) * &r(1, 2)), 1),
                t(-(&u(2, 1) * &r(1, 2)), 2),
                t(-(&u2 * &r(1, 3)), 3),
            ]);
            let c = t(-(&u2 * &r(1, 6)), 3);
            let b2 = [[bb, c.adjoint()?.neg()], [c, z()]];
            Ok(vec![b0, b1, b2])
        }
        2 => {
            let b0 = [
                [z(), m(u1.clone()).compose(&d)?.compose(&m(u2.clone()))?],
                [
                    m(u2.clone()).compose(&d)?.compose(&m(u1.clone()))?,
                    m(&u2 * &Expr::int(2)).compose(&d)?.compose(&m(u2.clone()))?,
                ],
            ];
            let dd = sum(vec![
                t(-(&u(1, 2) * &u2 * r(1, 2)), 0),
                t(-(&u(1, 1) * &u2), 1),
                t(-(&u1 * &u2 * r(1, 2)), 2),
            ]);
            let b1 = [[z(), dd.adjoint()?.neg()], [dd, z()]];
            let e = sum(vec![
                t(&u(1, 3) * &u2 * r(1, 6), 0),
                t(&u(1, 2) * &u2 * r(1, 2), 1),
                t(&u(1, 1) * &u2 * r(1, 2), 2),
                t(&u1 * &u2 * r(1, 6), 3),
            ]);
            let f = sum(vec![
                t(&u2 * &u(2, 3) * r(1, 3), 0),
                t(&u2 * &u(2, 2), 1),
                t(&u2 * &u(2, 1), 2),
                t(&u2 * &u2 * r(1, 3), 3),
            ]);
            let b2 = [[z(), e.adjoint()?.neg()], [e, f]];
            Ok(vec![b0, b1, b2])
        }
        _ => Err(Error::Unsupported(format!("no reference expansion for operator {id}"))),
    }
}
