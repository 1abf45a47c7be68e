use std::collections::BTreeMap;
use std::fmt;

use crate::error::Result;
use crate::symkernel::{total_x_derivative_n, Expr, Rational};

/// Scalar differential operator `sum_k f_k d_x^k` in normal order, with
/// coefficients in the jet ring.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiffOp {
    coeffs: BTreeMap<u32, Expr>,
}

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

impl DiffOp {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(f: Expr, k: u32) -> Self {
        let mut d = Self::zero();
        d.add_term(k, f);
        d
    }

    /// Multiplication by `f`.
    pub fn mul_by(f: Expr) -> Self {
        Self::term(f, 0)
    }

    /// `d_x^k`.
    pub fn d(k: u32) -> Self {
        Self::term(Expr::one(), k)
    }

    fn add_term(&mut self, k: u32, f: Expr) {
        if f.is_zero() {
            return;
        }
        let sum = match self.coeffs.remove(&k) {
            Some(g) => g + f,
            None => f,
        };
        if !sum.is_zero() {
            self.coeffs.insert(k, sum);
        }
    }

    pub fn coeff(&self, k: u32) -> Expr {
        self.coeffs.get(&k).cloned().unwrap_or_else(Expr::zero)
    }

    pub fn coeffs(&self) -> &BTreeMap<u32, Expr> {
        &self.coeffs
    }

    pub fn order(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, o: &DiffOp) -> DiffOp {
        let mut out = self.clone();
        for (&k, f) in &o.coeffs {
            out.add_term(k, f.clone());
        }
        out
    }

    pub fn neg(&self) -> DiffOp {
        DiffOp {
            coeffs: self.coeffs.iter().map(|(&k, f)| (k, -f)).collect(),
        }
    }

    pub fn sub(&self, o: &DiffOp) -> DiffOp {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Rational) -> DiffOp {
        let mut out = DiffOp::zero();
        for (&k, f) in &self.coeffs {
            out.add_term(k, f.scale(c));
        }
        out
    }

    /// `(f d^a)(g d^b) = f sum_i C(a,i) g^{(i)} d^{a-i+b}`.
    pub fn compose(&self, o: &DiffOp) -> Result<DiffOp> {
        let mut out = DiffOp::zero();
        for (&a, f) in &self.coeffs {
            for (&b, g) in &o.coeffs {
                for i in 0..=a {
                    let gi = total_x_derivative_n(g, i)?;
                    out.add_term(a - i + b, f * &gi * Expr::int(binomial(a, i)));
                }
            }
        }
        Ok(out)
    }

    /// Formal adjoint: `(f d^k)^* = (-d)^k f`.
    pub fn adjoint(&self) -> Result<DiffOp> {
        let mut out = DiffOp::zero();
        for (&k, f) in &self.coeffs {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            for i in 0..=k {
                let fi = total_x_derivative_n(f, i)?;
                out.add_term(k - i, fi * Expr::int(sign * binomial(k, i)));
            }
        }
        Ok(out)
    }

    pub fn apply(&self, e: &Expr) -> Result<Expr> {
        let mut out = Expr::zero();
        for (&k, f) in &self.coeffs {
            out = out + f * &total_x_derivative_n(e, k)?;
        }
        Ok(out)
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (i, (k, c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            match k {
                0 => write!(f, "({c})")?,
                _ => write!(f, "({c})*d^{k}")?,
            }
        }
        Ok(())
    }
}

/// 2x2 matrix of differential operators.
pub type DiffMatrix = [[DiffOp; 2]; 2];

pub fn matrix_adjoint(m: &DiffMatrix) -> Result<DiffMatrix> {
    Ok([
        [m[0][0].adjoint()?, m[1][0].adjoint()?],
        [m[0][1].adjoint()?, m[1][1].adjoint()?],
    ])
}
