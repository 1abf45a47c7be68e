//! Lax operators, coefficient tables, flows and Hamiltonians of the
//! Ablowitz-Ladik hierarchy.
//!
//! `L = B^{-1} A`, `L~ = A B^{-1}`, `M = A^{-1} B`, `M~ = B A^{-1}` with
//! `A = Lambda - P`, `B = 1 - Q Lambda^{-1}`. Coefficients:
//! `L^k = sum a^k_l Lambda^{k-l}`, `L~^k = sum b^k_l Lambda^{k-l}`,
//! `M^k = sum c^k_l Lambda^{-k+l}`, `M~^k = sum d^k_l Lambda^{-k+l}`.

mod identities;

use std::fmt;

use num_traits::One;

use crate::error::{Error, Result};
use crate::lambda_ops::{op_a, op_b, Direction, LambdaSeries, MatrixOp, Projection};
use crate::symkernel::{variational_derivative, Expr, Field, Rational, Target, Var};
use crate::trihamiltonian::operators::{p1, p2, p3};

pub use identities::{
    coefficient_recursions, flow_commutator, proof_identity, CoefficientTable, ProofIdentity,
};

/// Environment variable overriding the expansion depth.
pub const DEPTH_ENV: &str = "ALKIT_DEPTH";

/// Expansion depth for work at flow level `k`: `k + 3`, unless overridden.
pub fn default_depth(k: u32) -> u32 {
    depth_override().unwrap_or(k + 3)
}

pub fn depth_override() -> Option<u32> {
    std::env::var(DEPTH_ENV).ok().and_then(|s| s.trim().parse().ok())
}

pub fn factorial(n: u32) -> Rational {
    (1..=n).fold(Rational::one(), |acc, i| acc * Rational::from_integer(i.into()))
}

pub(crate) fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn p() -> Expr {
    Expr::var(Var::shifted(Field::P, 0))
}

pub fn q() -> Expr {
    Expr::var(Var::shifted(Field::Q, 0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    /// Positive flows `t_k`.
    T,
    /// Negative flows `s_k`.
    S,
}

impl fmt::Display for Dir {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dir::T => "t",
            Dir::S => "s",
        })
    }
}

/// Right-hand side `(P_t, Q_t)` of one flow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowPair {
    pub dir: Dir,
    pub k: u32,
    pub p: Expr,
    pub q: Expr,
}

impl FlowPair {
    pub fn components(&self) -> [&Expr; 2] {
        [&self.p, &self.q]
    }

    pub fn as_fields(&self) -> [(Field, &Expr); 2] {
        [(Field::P, &self.p), (Field::Q, &self.q)]
    }
}

impl fmt::Display for FlowPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "P_{}{} = {}", self.dir, self.k, self.p)?;
        write!(f, "Q_{}{} = {}", self.dir, self.k, self.q)
    }
}

/// Truncated Lax operators and their powers at a fixed depth.
#[derive(Clone, Debug)]
pub struct Lax {
    depth: u32,
    binv: LambdaSeries,
    l: Vec<LambdaSeries>,
    lt: Vec<LambdaSeries>,
    m: Vec<LambdaSeries>,
    mt: Vec<LambdaSeries>,
}

impl Lax {
    /// Builds `L^k, L~^k, M^k, M~^k` for `k <= kmax` with geometric inverses
    /// of `depth` terms.
    pub fn new(depth: u32, kmax: u32) -> Result<Lax> {
        let a = op_a();
        let b = op_b();
        let binv = b.truncated_inverse(depth, Direction::Descending)?;
        let ainv = a.truncated_inverse(depth, Direction::Ascending)?;
        let l = binv.compose(&a)?;
        let lt = a.compose(&binv)?;
        let m = ainv.compose(&b)?;
        let mt = b.compose(&ainv)?;
        let powers = |x: &LambdaSeries| -> Result<Vec<LambdaSeries>> {
            let mut v = vec![LambdaSeries::one()];
            for k in 1..=kmax as usize {
                let next = v[k - 1].compose(x)?;
                v.push(next);
            }
            Ok(v)
        };
        Ok(Lax {
            depth,
            l: powers(&l)?,
            lt: powers(&lt)?,
            m: powers(&m)?,
            mt: powers(&mt)?,
            binv,
        })
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn kmax(&self) -> u32 {
        self.l.len() as u32 - 1
    }

    fn pick<'a>(&self, v: &'a [LambdaSeries], k: u32, name: &str) -> Result<&'a LambdaSeries> {
        v.get(k as usize).ok_or_else(|| {
            Error::Window(format!("{name}^{k} not built (kmax = {})", self.kmax()))
        })
    }

    pub fn l_pow(&self, k: u32) -> Result<&LambdaSeries> {
        self.pick(&self.l, k, "L")
    }

    pub fn lt_pow(&self, k: u32) -> Result<&LambdaSeries> {
        self.pick(&self.lt, k, "L~")
    }

    pub fn m_pow(&self, k: u32) -> Result<&LambdaSeries> {
        self.pick(&self.m, k, "M")
    }

    pub fn mt_pow(&self, k: u32) -> Result<&LambdaSeries> {
        self.pick(&self.mt, k, "M~")
    }

    pub fn b_inv(&self) -> &LambdaSeries {
        &self.binv
    }

    pub fn a(&self, k: u32, l: u32) -> Result<Expr> {
        self.l_pow(k)?.coeff(k as i32 - l as i32)
    }

    pub fn b(&self, k: u32, l: u32) -> Result<Expr> {
        self.lt_pow(k)?.coeff(k as i32 - l as i32)
    }

    pub fn c(&self, k: u32, l: u32) -> Result<Expr> {
        self.m_pow(k)?.coeff(l as i32 - k as i32)
    }

    pub fn d(&self, k: u32, l: u32) -> Result<Expr> {
        self.mt_pow(k)?.coeff(l as i32 - k as i32)
    }

    /// Flow from the coefficient formulas.
    pub fn flow(&self, dir: Dir, k: u32) -> Result<FlowPair> {
        let f = factorial(k + 1).recip();
        let (pf, qf) = match dir {
            Dir::T => {
                let a = self.a(k + 1, k + 1)?;
                let b = self.b(k + 1, k + 1)?;
                ((&b - &a) * p(), (&b - &a.shift(-1)?) * q())
            }
            Dir::S => {
                let c = self.c(k + 1, k)?;
                let d = self.d(k + 1, k)?;
                (c.shift(1)? - &d, c - d)
            }
        };
        Ok(FlowPair {
            dir,
            k,
            p: pf.scale(&f),
            q: qf.scale(&f),
        })
    }

    /// Flow read off from the Lax equations for `A` and `B`.
    pub fn lax_flow(&self, dir: Dir, k: u32, conv: Projection) -> Result<FlowPair> {
        let (x, xt) = match dir {
            Dir::T => (
                self.l_pow(k + 1)?.project_plus(conv)?,
                self.lt_pow(k + 1)?.project_plus(conv)?,
            ),
            Dir::S => (
                self.m_pow(k + 1)?.project_minus(conv)?,
                self.mt_pow(k + 1)?.project_minus(conv)?,
            ),
        };
        let f = factorial(k + 1).recip();
        let rhs = |op: &LambdaSeries| -> Result<LambdaSeries> {
            Ok(xt.compose(op)?.sub(&op.compose(&x)?).scale(&f))
        };
        let at = rhs(&op_a())?;
        let bt = rhs(&op_b())?;
        // A_t = -P_t, B_t = -Q_t Lambda^{-1}
        let only = |s: &LambdaSeries, j: i32, name: &str| -> Result<Expr> {
            if s.coeffs().keys().any(|&i| i != j) {
                return Err(Error::Identity(format!(
                    "{name} equation has terms besides Lambda^{j}: {s}"
                )));
            }
            s.coeff(j)
        };
        Ok(FlowPair {
            dir,
            k,
            p: -only(&at, 0, "A")?,
            q: -only(&bt, -1, "B")?,
        })
    }

    /// `h_k = res L^{k+2} / (k+2)!`, `k >= -1`.
    pub fn h(&self, k: i32) -> Result<Expr> {
        let n = (k + 2) as u32;
        Ok(self.l_pow(n)?.residue()?.scale(&factorial(n).recip()))
    }

    /// `g_0 = -log P`, `g_k = res M^k / (k (k+1)!)`.
    pub fn g(&self, k: u32) -> Result<Expr> {
        if k == 0 {
            return Ok(-Expr::log(&p())?);
        }
        let c = (factorial(k + 1) * Rational::from_integer(k.into())).recip();
        Ok(self.m_pow(k)?.residue()?.scale(&c))
    }

    /// `(dH_k/dP, dH_k/dQ) = (-res(L^{k+1} B^{-1}), res(Lambda^{-1} L^{k+2} B^{-1})) / (k+1)!`.
    pub fn gradient_closed_form(&self, k: u32) -> Result<[Expr; 2]> {
        let f = factorial(k + 1).recip();
        let gp = self.l_pow(k + 1)?.compose(&self.binv)?.residue()?;
        let lb = self.l_pow(k + 2)?.compose(&self.binv)?;
        let gq = LambdaSeries::shift_op(-1).compose(&lb)?.residue()?;
        Ok([-gp.scale(&f), gq.scale(&f)])
    }
}

/// Variational gradient `(dh/dP, dh/dQ)`.
pub fn gradient(h: &Expr) -> Result<[Expr; 2]> {
    Ok([
        variational_derivative(h, Target::Even(Field::P))?,
        variational_derivative(h, Target::Even(Field::Q))?,
    ])
}

/// Which Hamiltonian representation to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Structure {
    /// `t_k = P1 grad H_k`, `s_k = P1 grad G_k`.
    P1,
    /// `t_k = P2 grad H_{k-1} / (k+1)`, `s_k = (k+2) P2 grad G_{k+1}`.
    P2,
    /// `t_0 = P3 grad G_0`, `t_k = P3 grad H_{k-2} / (k(k+1))`,
    /// `s_k = (k+2)(k+3) P3 grad G_{k+2}`.
    P3,
}

impl Structure {
    pub const ALL: [Structure; 3] = [Structure::P1, Structure::P2, Structure::P3];

    pub fn operator(self) -> MatrixOp {
        match self {
            Structure::P1 => p1(),
            Structure::P2 => p2(),
            Structure::P3 => p3(),
        }
    }

    /// Largest Lax power needed to check level `k` in direction `dir`.
    pub fn kmax_needed(self, dir: Dir, k: u32) -> u32 {
        match (self, dir) {
            (_, Dir::T) => k + 2,
            (Structure::P1, Dir::S) => k + 1,
            (Structure::P2, Dir::S) => k + 2,
            (Structure::P3, Dir::S) => k + 3,
        }
    }
}

/// Density and prefactor such that `flow = factor * op grad density`.
pub fn representation(lax: &Lax, s: Structure, dir: Dir, k: u32) -> Result<(Expr, Rational)> {
    let ki = k as i64;
    Ok(match (s, dir) {
        (Structure::P1, Dir::T) => (lax.h(k as i32)?, Rational::one()),
        (Structure::P1, Dir::S) => (lax.g(k)?, Rational::one()),
        (Structure::P2, Dir::T) => (lax.h(k as i32 - 1)?, rat(1, ki + 1)),
        (Structure::P2, Dir::S) => (lax.g(k + 1)?, rat(ki + 2, 1)),
        (Structure::P3, Dir::T) if k == 0 => (lax.g(0)?, Rational::one()),
        (Structure::P3, Dir::T) => (lax.h(k as i32 - 2)?, rat(1, ki * (ki + 1))),
        (Structure::P3, Dir::S) => (lax.g(k + 2)?, rat((ki + 2) * (ki + 3), 1)),
    })
}

/// Residual `factor * op grad density - flow` of a Hamiltonian representation.
pub fn representation_residual(
    lax: &Lax,
    s: Structure,
    dir: Dir,
    k: u32,
) -> Result<[Expr; 2]> {
    let flow = lax.flow(dir, k)?;
    let (h, c) = representation(lax, s, dir, k)?;
    let g = gradient(&h)?;
    let [x, y] = s.operator().apply([&g[0], &g[1]])?;
    Ok([x.scale(&c) - &flow.p, y.scale(&c) - &flow.q])
}

/// Reference forms of `t_0, t_1, s_0, s_1` as `(P, Q)` strings.
pub fn reference_flow(dir: Dir, k: u32) -> Option<[&'static str; 2]> {
    Some(match (dir, k) {
        (Dir::T, 0) => ["P*(Q[1] - Q)", "Q*(Q[1] - Q[-1] - P + P[-1])"],
        (Dir::T, 1) => [
            "1/2*P*(P*Q - P*Q[1] + P[-1]*Q - P[1]*Q[1] + Q[1]*Q[2] + Q[1]*Q[1] - Q*Q[-1] - Q^2)",
            "1/2*Q*(P^2 - P[-1]*P[-1] - P[1]*Q[1] - 2*P*Q[1] - P*Q + P[-1]*Q + 2*P[-1]*Q[-1] \
             + P[-2]*Q[-1] + Q[1]*Q[2] + Q[1]*Q[1] + Q*Q[1] - Q[-1]*Q[-2] - Q*Q[-1] - Q[-1]*Q[-1])",
        ],
        (Dir::S, 0) => ["Q[1]/P[1] - Q/P[-1]", "Q/P - Q/P[-1]"],
        (Dir::S, 1) => [
            "1/(2*P[1])*(Q[1]*Q[2]/(P[1]*P[2]) - Q[1]/P[1] + Q[1]*Q[1]/(P*P[1]) - Q[1]/P) \
             - 1/(2*P[-1])*(Q*Q[-1]/(P[-1]*P[-2]) - Q/P[-1] + Q^2/(P*P[-1]) - Q/P)",
            "1/(2*P)*(Q*Q[1]/(P*P[1]) - Q/P + Q^2/(P*P[-1])) \
             - 1/(2*P[-1])*(Q*Q[-1]/(P[-1]*P[-2]) - Q/P[-1] + Q^2/(P*P[-1]))",
        ],
        _ => return None,
    })
}

/// `flow - reference` for the levels with a reference form.
pub fn reference_residual(lax: &Lax, dir: Dir, k: u32) -> Result<[Expr; 2]> {
    let [rp, rq] = reference_flow(dir, k)
        .ok_or_else(|| Error::Unsupported(format!("no reference form for {dir}{k}")))?;
    let f = lax.flow(dir, k)?;
    Ok([&f.p - &Expr::parse(rp)?, &f.q - &Expr::parse(rq)?])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(s: &str) -> Expr {
        Expr::parse(s).unwrap()
    }

    #[test]
    fn first_flows() {
        let lax = Lax::new(4, 2).unwrap();
        let t0 = lax.flow(Dir::T, 0).unwrap();
        assert_eq!(t0.p, ex("P*(Q[1] - Q)"));
        assert_eq!(t0.q, ex("Q*(Q[1] - Q[-1] - P + P[-1])"));
        let s0 = lax.flow(Dir::S, 0).unwrap();
        assert_eq!(s0.p, ex("Q[1]/P[1] - Q/P[-1]"));
        assert_eq!(s0.q, ex("Q/P - Q/P[-1]"));
    }

    #[test]
    fn reference_forms() {
        let lax = Lax::new(5, 3).unwrap();
        for dir in [Dir::T, Dir::S] {
            for k in 0..2 {
                let r = reference_residual(&lax, dir, k).unwrap();
                assert!(r[0].is_zero() && r[1].is_zero(), "{dir}{k}: {} | {}", r[0], r[1]);
            }
        }
    }

    #[test]
    fn lax_equations_agree_at_level_zero() {
        let lax = Lax::new(4, 2).unwrap();
        for dir in [Dir::T, Dir::S] {
            assert_eq!(
                lax.lax_flow(dir, 0, Projection::Standard).unwrap(),
                lax.flow(dir, 0).unwrap()
            );
        }
    }

    #[test]
    fn too_shallow_is_a_window_error() {
        let lax = Lax::new(1, 3).unwrap();
        assert!(matches!(lax.flow(Dir::T, 2), Err(Error::Window(_))));
    }
}
