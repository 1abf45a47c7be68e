//! Canonical coordinates and central invariants of the pairs `(P_a, P_b)`.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::expand::{eps_expand, EpsOperator};
use crate::error::{Error, Result};
use crate::symkernel::{Expr, Field, Rational, Var};
use crate::trihamiltonian::hamiltonian_operator;

type M2 = [[Expr; 2]; 2];

/// Expansions of the three operators through `eps^2`.
#[derive(Clone, Debug)]
pub struct Expansions {
    ops: [EpsOperator; 3],
}

impl Expansions {
    pub fn new() -> Result<Self> {
        Ok(Expansions {
            ops: [
                eps_expand(&hamiltonian_operator(1), 2)?,
                eps_expand(&hamiltonian_operator(2), 2)?,
                eps_expand(&hamiltonian_operator(3), 2)?,
            ],
        })
    }

    pub fn get(&self, id: u8) -> &EpsOperator {
        &self.ops[id as usize - 1]
    }

    /// Leading metrics of the pair `(P_a, P_b)`.
    pub fn hydrodynamic_pair(&self, a: u8, b: u8) -> Result<HydroPair> {
        Ok(HydroPair {
            a,
            b,
            g1: self.get(a).coeff(0, 1)?,
            g2: self.get(b).coeff(0, 1)?,
        })
    }
}

/// Leading metrics `g1 = g_a`, `g2 = g_b` of a pair.
#[derive(Clone, Debug)]
pub struct HydroPair {
    pub a: u8,
    pub b: u8,
    pub g1: M2,
    pub g2: M2,
}

impl HydroPair {
    /// Coefficients `[c0, c1, c2]` of `det(g2 - lambda g1)`.
    pub fn characteristic(&self) -> [Expr; 3] {
        let (a, b) = (&self.g1, &self.g2);
        let c0 = &b[0][0] * &b[1][1] - &b[0][1] * &b[1][0];
        let c1 = -(&a[0][0] * &b[1][1] + &b[0][0] * &a[1][1] - &a[0][1] * &b[1][0] - &b[0][1] * &a[1][0]);
        let c2 = &a[0][0] * &a[1][1] - &a[0][1] * &a[1][0];
        [c0, c1, c2]
    }
}

/// Arithmetic needed at a sample point: `f64`, or exact rationals where
/// every square root taken is rational.
pub trait Scalar:
    Clone
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn of(r: Rational) -> Self;
    fn sqrt(&self) -> Option<Self>;
    fn is_zero(&self) -> bool;
    fn eval(e: &Expr, u1: &Self, u2: &Self) -> Result<Self>;
    fn to_f64(&self) -> f64;
}

impl Scalar for f64 {
    fn of(r: Rational) -> Self {
        ToPrimitive::to_f64(&r).unwrap_or(f64::NAN)
    }
    fn sqrt(&self) -> Option<Self> {
        (*self >= 0.0).then(|| f64::sqrt(*self))
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn eval(e: &Expr, u1: &Self, u2: &Self) -> Result<Self> {
        e.eval(&|v| point_value(v, u1, u2))
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

impl Scalar for Rational {
    fn of(r: Rational) -> Self {
        r
    }
    fn sqrt(&self) -> Option<Self> {
        Some(Rational::new(exact_sqrt(self.numer())?, exact_sqrt(self.denom())?))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn eval(e: &Expr, u1: &Self, u2: &Self) -> Result<Self> {
        e.eval_exact(&|v| point_value(v, u1, u2))
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

fn point_value<T: Clone>(v: Var, u1: &T, u2: &T) -> Option<T> {
    match (v.field, v.slot) {
        (Field::U1, crate::symkernel::Slot::Jet(0)) => Some(u1.clone()),
        (Field::U2, crate::symkernel::Slot::Jet(0)) => Some(u2.clone()),
        _ => None,
    }
}

/// Everything computed for one pair at one point.
#[derive(Clone, Debug)]
pub struct InvariantResult<T> {
    pub pair: (u8, u8),
    /// Canonical coordinates of the pair, labelled so that `lambda[i]` shares
    /// its eigendirection with the `i`-th canonical coordinate of `(P1, P2)`.
    pub lambda: [T; 2],
    pub f: [T; 2],
    pub c: [T; 2],
}

fn eval_m<T: Scalar>(m: &M2, u1: &T, u2: &T) -> Result<[[T; 2]; 2]> {
    let e = |x: &Expr| T::eval(x, u1, u2);
    Ok([[e(&m[0][0])?, e(&m[0][1])?], [e(&m[1][0])?, e(&m[1][1])?]])
}

fn congruence<T: Scalar>(j: &[[T; 2]; 2], m: &[[T; 2]; 2]) -> [[T; 2]; 2] {
    let mut out: [[T; 2]; 2] = [
        [T::of(Rational::zero()), T::of(Rational::zero())],
        [T::of(Rational::zero()), T::of(Rational::zero())],
    ];
    for i in 0..2 {
        for k in 0..2 {
            let mut acc = T::of(Rational::zero());
            for a in 0..2 {
                for b in 0..2 {
                    acc = acc + j[i][a].clone() * m[a][b].clone() * j[k][b].clone();
                }
            }
            out[i][k] = acc;
        }
    }
    out
}

/// Roots of `c2 x^2 + c1 x + c0`, `+` branch first.
fn roots<T: Scalar>(c: &[T; 3]) -> Result<[T; 2]> {
    let two = T::of(Rational::from_integer(2.into()));
    let four = T::of(Rational::from_integer(4.into()));
    if c[2].is_zero() {
        return Err(Error::Degenerate("characteristic polynomial is not quadratic".into()));
    }
    let disc = c[1].clone() * c[1].clone() - four * c[2].clone() * c[0].clone();
    if disc.to_f64() <= 0.0 {
        return Err(Error::Degenerate("coincident or complex canonical coordinates".into()));
    }
    let s = disc
        .sqrt()
        .ok_or_else(|| Error::Degenerate("square root is irrational at this point".into()))?;
    let den = two * c[2].clone();
    Ok([
        (-c[1].clone() + s.clone()) / den.clone(),
        (-c[1].clone() - s) / den,
    ])
}

/// Null direction of `g2 - lambda g1` as a unit-free pair.
fn null_direction<T: Scalar>(g1: &[[T; 2]; 2], g2: &[[T; 2]; 2], l: &T) -> [T; 2] {
    let m = |i: usize, j: usize| g2[i][j].clone() - l.clone() * g1[i][j].clone();
    let r0 = [m(0, 1), -m(0, 0)];
    let r1 = [m(1, 1), -m(1, 0)];
    let n0 = r0[0].to_f64().abs() + r0[1].to_f64().abs();
    let n1 = r1[0].to_f64().abs() + r1[1].to_f64().abs();
    let [x, y] = if n0 >= n1 { r0 } else { r1 };
    [y, -x]
}

fn misalignment<T: Scalar>(a: &[T; 2], b: &[T; 2]) -> f64 {
    let (a0, a1, b0, b1) = (a[0].to_f64(), a[1].to_f64(), b[0].to_f64(), b[1].to_f64());
    (a0 * b1 - a1 * b0).abs() / ((a0.hypot(a1)) * (b0.hypot(b1)))
}

struct PairData {
    hydro: HydroPair,
    char_poly: [Expr; 3],
    dchar: [[Expr; 3]; 2],
    q12: [M2; 2],
    q23: [M2; 2],
}

/// Central invariants of all six pairs.
#[derive(Clone, Debug)]
pub struct CentralInvariants {
    exp: Expansions,
}

impl CentralInvariants {
    pub fn new() -> Result<Self> {
        Ok(CentralInvariants { exp: Expansions::new()? })
    }

    pub fn expansions(&self) -> &Expansions {
        &self.exp
    }

    fn pair_data(&self, a: u8, b: u8) -> Result<PairData> {
        let hydro = self.exp.hydrodynamic_pair(a, b)?;
        let char_poly = hydro.characteristic();
        let d = |f: Field| char_poly.clone().map(|c| c.partial(Var::jet(f, 0)));
        let (qa, qb) = (self.exp.get(a), self.exp.get(b));
        Ok(PairData {
            dchar: [d(Field::U1), d(Field::U2)],
            char_poly,
            hydro,
            q12: [qa.coeff(1, 2)?, qb.coeff(1, 2)?],
            q23: [qa.coeff(2, 3)?, qb.coeff(2, 3)?],
        })
    }

    /// Canonical coordinates of `(P_a, P_b)` at `(u1, u2)`, `+` branch first.
    pub fn canonical_coordinates<T: Scalar>(&self, a: u8, b: u8, u1: &T, u2: &T) -> Result<[T; 2]> {
        let pd = self.pair_data(a, b)?;
        let c = pd.char_poly.clone().map(|e| T::eval(&e, u1, u2));
        let [c0, c1, c2] = c;
        roots(&[c0?, c1?, c2?])
    }

    /// Evaluates the central-invariant formula for `(P_a, P_b)` at `(u1, u2)`.
    pub fn at<T: Scalar>(&self, a: u8, b: u8, u1: &T, u2: &T) -> Result<InvariantResult<T>> {
        let pd = self.pair_data(a, b)?;
        let ev = |e: &Expr| T::eval(e, u1, u2);
        let c: Vec<T> = pd.char_poly.iter().map(ev).collect::<Result<_>>()?;
        let c = [c[0].clone(), c[1].clone(), c[2].clone()];
        let mut lam = roots(&c)?;
        let g1 = eval_m(&pd.hydro.g1, u1, u2)?;
        let g2 = eval_m(&pd.hydro.g2, u1, u2)?;

        if (a, b) != (1, 2) {
            let base = self.pair_data(1, 2)?;
            let bg1 = eval_m(&base.hydro.g1, u1, u2)?;
            let bg2 = eval_m(&base.hydro.g2, u1, u2)?;
            let bc: Vec<T> = base.char_poly.iter().map(ev).collect::<Result<_>>()?;
            let mu = roots(&[bc[0].clone(), bc[1].clone(), bc[2].clone()])?;
            let w = mu.clone().map(|m| null_direction(&bg1, &bg2, &m));
            let v = lam.clone().map(|l| null_direction(&g1, &g2, &l));
            let keep = misalignment(&v[0], &w[0]) + misalignment(&v[1], &w[1]);
            let swap = misalignment(&v[1], &w[0]) + misalignment(&v[0], &w[1]);
            if swap < keep {
                lam.swap(0, 1);
            }
        }

        // d lambda / d u from p(lambda, u) = 0
        let mut jac: [[T; 2]; 2] = [
            [T::of(Rational::zero()), T::of(Rational::zero())],
            [T::of(Rational::zero()), T::of(Rational::zero())],
        ];
        let two = T::of(Rational::from_integer(2.into()));
        for i in 0..2 {
            let l = &lam[i];
            let dp = two.clone() * c[2].clone() * l.clone() + c[1].clone();
            if dp.is_zero() {
                return Err(Error::Degenerate("double root".into()));
            }
            for (alpha, dc) in pd.dchar.iter().enumerate() {
                let d0 = ev(&dc[0])?;
                let d1 = ev(&dc[1])?;
                let d2 = ev(&dc[2])?;
                let num = d2 * l.clone() * l.clone() + d1 * l.clone() + d0;
                jac[i][alpha] = -(num / dp.clone());
            }
        }

        let g1c = congruence(&jac, &g1);
        let f = [g1c[0][0].clone(), g1c[1][1].clone()];
        if f.iter().any(|x| x.is_zero()) {
            return Err(Error::Degenerate("vanishing f^i".into()));
        }
        let tr = |m: &M2| -> Result<[[T; 2]; 2]> { Ok(congruence(&jac, &eval_m(m, u1, u2)?)) };
        let q1_12 = tr(&pd.q12[0])?;
        let q2_12 = tr(&pd.q12[1])?;
        let q1_23 = tr(&pd.q23[0])?;
        let q2_23 = tr(&pd.q23[1])?;

        let three = T::of(Rational::from_integer(3.into()));
        let mut cs = Vec::with_capacity(2);
        for i in 0..2 {
            let k = 1 - i;
            let li = lam[i].clone();
            let x = q2_12[k][i].clone() - li.clone() * q1_12[k][i].clone();
            let corr = x.clone() * x / (f[k].clone() * (lam[k].clone() - li.clone()));
            let top = q2_23[i][i].clone() - li * q1_23[i][i].clone() + corr;
            cs.push(top / (three.clone() * f[i].clone() * f[i].clone()));
        }
        Ok(InvariantResult {
            pair: (a, b),
            lambda: lam,
            f,
            c: [cs[0].clone(), cs[1].clone()],
        })
    }
}

/// All ordered pairs `(a, b)`, `a != b`.
pub const PAIRS: [(u8, u8); 6] = [(1, 2), (2, 1), (1, 3), (3, 1), (2, 3), (3, 2)];

/// Tabulated central invariant of `(P_a, P_b)` as a function of the pair's
/// own canonical coordinate `lambda`. Rows with `sqrt(lambda)` give NaN for
/// negative `lambda`.
pub fn table_value(a: u8, b: u8, lambda: f64) -> Option<f64> {
    Some(match (a, b) {
        (1, 2) => 1.0 / 24.0,
        (2, 1) => -1.0 / (24.0 * lambda),
        (1, 3) | (3, 1) => -1.0 / (48.0 * lambda.sqrt()),
        (2, 3) => 1.0 / (24.0 * lambda),
        (3, 2) => -1.0 / 24.0,
        _ => return None,
    })
}

/// True for rows whose tabulated value involves `sqrt(lambda)`.
pub fn needs_positive_coordinates(a: u8, b: u8) -> bool {
    matches!((a, b), (1, 3) | (3, 1))
}

/// The closed form `u1 - 2 u2 +- 2 sqrt(u2^2 - u1 u2)`. These are the roots
/// of `det(g2 + lambda g1)`; the canonical coordinates of `(P1, P2)` are
/// their negatives, with the same labels.
pub fn closed_form_coordinates(u1: f64, u2: f64) -> Option<[f64; 2]> {
    let r = u2 * u2 - u1 * u2;
    (r > 0.0).then(|| {
        let s = 2.0 * r.sqrt();
        [u1 - 2.0 * u2 + s, u1 - 2.0 * u2 - s]
    })
}

/// One row check at one point.
#[derive(Clone, Debug)]
pub struct RowCheck {
    pub pair: (u8, u8),
    pub point: (f64, f64),
    pub lambda: [f64; 2],
    pub computed: [f64; 2],
    pub expected: [f64; 2],
}

impl RowCheck {
    /// Largest deviation; NaN expectations count as infinite.
    pub fn max_error(&self) -> f64 {
        (0..2)
            .map(|i| {
                let e = (self.computed[i] - self.expected[i]).abs();
                if e.is_nan() {
                    f64::INFINITY
                } else {
                    e
                }
            })
            .fold(0.0, f64::max)
    }
}

/// Samples semisimple points with a seeded generator: `u2 (u2 - u1) > 0`,
/// canonical coordinates of `(P1, P2)` bounded away from zero and from each
/// other.
pub fn sample_points(n: usize, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let u1: f64 = rng.gen_range(-4.0..4.0);
        let u2: f64 = rng.gen_range(-4.0..4.0);
        let Some(mu) = closed_form_coordinates(u1, u2) else {
            continue;
        };
        let sep = (mu[0] - mu[1]).abs();
        let small = mu[0].abs().min(mu[1].abs());
        if sep < 0.5 || small < 0.1 || u1.abs() < 0.1 || u2.abs() < 0.1 {
            continue;
        }
        out.push((u1, u2));
    }
    out
}

/// Computed versus tabulated invariants of `(P_a, P_b)` at the given points.
/// For square-root rows only points where both of the pair's canonical
/// coordinates are positive are admissible.
pub fn check_row(ci: &CentralInvariants, a: u8, b: u8, points: &[(f64, f64)]) -> Result<Vec<RowCheck>> {
    let mut out = Vec::new();
    for &(u1, u2) in points {
        let res = ci.at(a, b, &u1, &u2)?;
        if needs_positive_coordinates(a, b) && res.lambda.iter().any(|&l| l <= 0.0) {
            continue;
        }
        let expected = [0, 1].map(|i| table_value(a, b, res.lambda[i]).unwrap_or(f64::NAN));
        out.push(RowCheck {
            pair: (a, b),
            point: (u1, u2),
            lambda: res.lambda,
            computed: res.c,
            expected,
        });
    }
    Ok(out)
}

/// Integer sample point for exact evaluation.
pub fn rational_point(u1: i64, u2: i64) -> (Rational, Rational) {
    (Rational::from_integer(u1.into()), Rational::from_integer(u2.into()))
}
