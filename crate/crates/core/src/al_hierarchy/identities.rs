//! Coefficient recursions, residue identities behind the Hamiltonian
//! representations, and flow commutators.

use std::collections::BTreeMap;

use super::{p, q, FlowPair, Lax};
use crate::error::{Error, Result};
use crate::lambda_ops::LambdaSeries;
use crate::symkernel::{prolong, Expr};

/// `a, b, c, d` coefficients for `k <= kmax`, `l <= lmax`.
#[derive(Clone, Debug, Default)]
pub struct CoefficientTable {
    pub a: BTreeMap<(u32, u32), Expr>,
    pub b: BTreeMap<(u32, u32), Expr>,
    pub c: BTreeMap<(u32, u32), Expr>,
    pub d: BTreeMap<(u32, u32), Expr>,
}

fn product_of_shifts(base: &Expr, k: u32) -> Result<Expr> {
    let mut acc = Expr::one();
    for i in 0..k {
        acc = acc * base.shift(-(i as i32))?;
    }
    Ok(acc)
}

fn all_equal(label: &str, xs: &[Expr]) -> Result<()> {
    for (i, x) in xs.iter().enumerate().skip(1) {
        if *x != xs[0] {
            return Err(Error::Identity(format!(
                "{label}: member {} differs from member 1 by {}",
                i + 1,
                x - &xs[0]
            )));
        }
    }
    Ok(())
}

/// Builds the table from direct Lax powers and checks every instance of the
/// four-way coefficient recursions for `L` and `M` together with the initial
/// conditions. Needs `lax.kmax() >= kmax + 1` and depth `>= lmax + 1`.
pub fn coefficient_recursions(lax: &Lax, kmax: u32, lmax: u32) -> Result<CoefficientTable> {
    let mut t = CoefficientTable::default();
    for k in 0..=kmax + 1 {
        for l in 0..=lmax + 1 {
            t.a.insert((k, l), lax.a(k, l)?);
            t.b.insert((k, l), lax.b(k, l)?);
            t.c.insert((k, l), lax.c(k, l)?);
            t.d.insert((k, l), lax.d(k, l)?);
        }
    }
    let (pp, qq) = (p(), q());
    for k in 0..=kmax + 1 {
        if t.a[&(k, 0)] != Expr::one() || t.b[&(k, 0)] != Expr::one() {
            return Err(Error::Identity(format!("a^{k}_0 or b^{k}_0 differs from 1")));
        }
        let c0 = product_of_shifts(&(&qq / &pp), k)?;
        let d0 = product_of_shifts(&(&qq / &pp.shift(-1)?), k)?;
        if t.c[&(k, 0)] != c0 || t.d[&(k, 0)] != d0 {
            return Err(Error::Identity(format!("c^{k}_0 or d^{k}_0 differs from the product formula")));
        }
    }
    for l in 1..=lmax + 1 {
        for m in [&t.a, &t.b, &t.c, &t.d] {
            if !m[&(0, l)].is_zero() {
                return Err(Error::Identity(format!("zeroth power has nonzero coefficient at l = {l}")));
            }
        }
    }
    for k in 0..=kmax {
        for l in 0..=lmax {
            let (ki, li) = (k as i32, l as i32);
            let a = |k: u32, l: u32| &t.a[&(k, l)];
            let b = |k: u32, l: u32| &t.b[&(k, l)];
            let c = |k: u32, l: u32| &t.c[&(k, l)];
            let d = |k: u32, l: u32| &t.d[&(k, l)];
            let lc = [
                a(k, l + 1).shift(1)? - &pp * a(k, l),
                b(k, l + 1) - &(b(k, l) * &pp.shift(ki - li)?),
                b(k + 1, l + 1) - &(b(k + 1, l) * &qq.shift(ki + 1 - li)?),
                a(k + 1, l + 1) - &(&qq * &a(k + 1, l).shift(-1)?),
            ];
            all_equal(&format!("L recursion k={k} l={l}"), &lc)?;
            let mc = [
                c(k, l) - &(&qq * &c(k, l + 1).shift(-1)?),
                d(k, l) - &(qq.shift(-ki + li + 1)? * d(k, l + 1)),
                d(k + 1, l) - &(pp.shift(-ki + li)? * d(k + 1, l + 1)),
                c(k + 1, l).shift(1)? - &pp * c(k + 1, l + 1),
            ];
            all_equal(&format!("M recursion k={k} l={l}"), &mc)?;
        }
    }
    Ok(t)
}

/// The four residue identities used to prove the first two Hamiltonian
/// representations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProofIdentity {
    /// `res(L L^{k+1}) - res(L~^{k+1} L) = -(L Q - Q L^-1) res(L^{k+1} B^-1) + (L - 1) Q res(L^-1 L^{k+2} B^-1)`
    /// with `L` standing for the shift.
    First,
    /// `L res(L~^{k+1}) - res(L^{k+1}) = (L - 1) res(L^{k+1} B^-1)`.
    Second,
    /// `res(L L^{k+1}) - res(L~^{k+1} L) = P (1 - L) Q res(L^-1 L^{k+1} B^-1)`.
    SecondA,
    /// `res(L~^{k+1}) - L^-1 res(L^{k+1}) = (L^-1 - 1) P res(L^k B^-1) + (L - L^-1) Q res(L^-1 L^{k+1} B^-1)`.
    SecondB,
}

impl ProofIdentity {
    pub const ALL: [ProofIdentity; 4] = [
        ProofIdentity::First,
        ProofIdentity::Second,
        ProofIdentity::SecondA,
        ProofIdentity::SecondB,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProofIdentity::First => "residue-1",
            ProofIdentity::Second => "residue-2",
            ProofIdentity::SecondA => "residue-2a",
            ProofIdentity::SecondB => "residue-2b",
        }
    }
}

fn sh(j: i32) -> LambdaSeries {
    LambdaSeries::shift_op(j)
}

fn res_left(j: i32, x: &LambdaSeries) -> Result<Expr> {
    sh(j).compose(x)?.residue()
}

fn res_right(x: &LambdaSeries, j: i32) -> Result<Expr> {
    x.compose(&sh(j))?.residue()
}

fn op(terms: &[(i32, Expr)]) -> LambdaSeries {
    LambdaSeries::from_terms(terms.iter().cloned())
}

/// Returns `lhs - rhs` of the identity at level `k` (zero when it holds).
pub fn proof_identity(lax: &Lax, id: ProofIdentity, k: u32) -> Result<Expr> {
    let binv = lax.b_inv();
    let lk1 = lax.l_pow(k + 1)?;
    let ltk1 = lax.lt_pow(k + 1)?;
    let (pp, qq) = (p(), q());
    let one = Expr::one();
    let lhs_shift = || -> Result<Expr> { Ok(res_left(1, lk1)? - res_right(ltk1, 1)?) };
    Ok(match id {
        ProofIdentity::First => {
            let r1 = lk1.compose(binv)?.residue()?;
            let r2 = res_left(-1, &lax.l_pow(k + 2)?.compose(binv)?)?;
            // L Q - Q L^-1 as an operator
            let o1 = op(&[(1, qq.shift(1)?), (-1, -&qq)]);
            let o2 = op(&[(1, qq.shift(1)?), (0, -&qq)]);
            lhs_shift()? - (-o1.apply(&r1)? + o2.apply(&r2)?)
        }
        ProofIdentity::Second => {
            let lhs = ltk1.residue()?.shift(1)? - lk1.residue()?;
            let r = lk1.compose(binv)?.residue()?;
            lhs - op(&[(1, one.clone()), (0, -&one)]).apply(&r)?
        }
        ProofIdentity::SecondA => {
            let r = res_left(-1, &lk1.compose(binv)?)?;
            // P (1 - L) Q
            let o = op(&[(0, &pp * &qq), (1, -(&pp * &qq.shift(1)?))]);
            lhs_shift()? - o.apply(&r)?
        }
        ProofIdentity::SecondB => {
            let lhs = ltk1.residue()? - lk1.residue()?.shift(-1)?;
            let r1 = lax.l_pow(k)?.compose(binv)?.residue()?;
            let r2 = res_left(-1, &lk1.compose(binv)?)?;
            // (L^-1 - 1) P and (L - L^-1) Q
            let o1 = op(&[(-1, pp.shift(-1)?), (0, -&pp)]);
            let o2 = op(&[(1, qq.shift(1)?), (-1, -qq.shift(-1)?)]);
            lhs - (o1.apply(&r1)? + o2.apply(&r2)?)
        }
    })
}

/// Lie bracket of two evolutionary vector fields on the lattice:
/// `[X, Y]_f = X(Y_f) - Y(X_f)`.
pub fn flow_commutator(x: &FlowPair, y: &FlowPair) -> Result<[Expr; 2]> {
    let xf = x.as_fields();
    let yf = y.as_fields();
    let comp = |xc: &Expr, yc: &Expr| -> Result<Expr> { Ok(prolong(yc, &xf)? - prolong(xc, &yf)?) };
    Ok([comp(&x.p, &y.p)?, comp(&x.q, &y.q)?])
}
