use std::fmt;

use super::LambdaSeries;
use crate::error::Result;
use crate::symkernel::{Expr, Rational};

/// 2x2 matrix of Lambda-series acting on pairs of functions.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MatrixOp(pub [[LambdaSeries; 2]; 2]);

impl MatrixOp {
    pub fn new(a: LambdaSeries, b: LambdaSeries, c: LambdaSeries, d: LambdaSeries) -> Self {
        MatrixOp([[a, b], [c, d]])
    }

    pub fn entry(&self, i: usize, j: usize) -> &LambdaSeries {
        &self.0[i][j]
    }

    pub fn compose(&self, o: &MatrixOp) -> Result<MatrixOp> {
        let mut out = MatrixOp::default();
        for i in 0..2 {
            for j in 0..2 {
                let a = self.0[i][0].compose(&o.0[0][j])?;
                let b = self.0[i][1].compose(&o.0[1][j])?;
                out.0[i][j] = a.add(&b);
            }
        }
        Ok(out)
    }

    pub fn add(&self, o: &MatrixOp) -> MatrixOp {
        self.zip(o, |a, b| a.add(b))
    }

    pub fn sub(&self, o: &MatrixOp) -> MatrixOp {
        self.zip(o, |a, b| a.sub(b))
    }

    pub fn neg(&self) -> MatrixOp {
        self.map(|a| a.neg())
    }

    pub fn scale(&self, c: &Rational) -> MatrixOp {
        self.map(|a| a.scale(c))
    }

    fn map(&self, f: impl Fn(&LambdaSeries) -> LambdaSeries) -> MatrixOp {
        MatrixOp([
            [f(&self.0[0][0]), f(&self.0[0][1])],
            [f(&self.0[1][0]), f(&self.0[1][1])],
        ])
    }

    fn zip(&self, o: &MatrixOp, f: impl Fn(&LambdaSeries, &LambdaSeries) -> LambdaSeries) -> MatrixOp {
        MatrixOp([
            [f(&self.0[0][0], &o.0[0][0]), f(&self.0[0][1], &o.0[0][1])],
            [f(&self.0[1][0], &o.0[1][0]), f(&self.0[1][1], &o.0[1][1])],
        ])
    }

    /// Transpose with entrywise formal adjoints.
    pub fn adjoint(&self) -> Result<MatrixOp> {
        Ok(MatrixOp([
            [self.0[0][0].adjoint()?, self.0[1][0].adjoint()?],
            [self.0[0][1].adjoint()?, self.0[1][1].adjoint()?],
        ]))
    }

    pub fn is_antisymmetric(&self) -> Result<bool> {
        Ok(self.adjoint()? == self.neg())
    }

    /// Action on a pair of functions.
    pub fn apply(&self, v: [&Expr; 2]) -> Result<[Expr; 2]> {
        let row = |i: usize| -> Result<Expr> {
            Ok(self.0[i][0].apply(v[0])? + self.0[i][1].apply(v[1])?)
        };
        Ok([row(0)?, row(1)?])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().flatten().all(|e| e.is_zero())
    }
}

impl fmt::Display for MatrixOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..2 {
            for j in 0..2 {
                writeln!(f, "[{}{}] {}", i + 1, j + 1, self.0[i][j])?;
            }
        }
        Ok(())
    }
}
