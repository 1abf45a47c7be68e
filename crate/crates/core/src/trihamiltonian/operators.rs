//! The three lattice Hamiltonian operators as 2x2 matrices of Lambda-series.

use crate::lambda_ops::{LambdaSeries, MatrixOp};
use crate::symkernel::{Expr, Field, Var};

/// Small builder for finite operators written as products.
#[derive(Clone)]
pub(crate) struct Op(pub LambdaSeries);

impl Op {
    pub fn f(e: Expr) -> Op {
        Op(LambdaSeries::function(e))
    }

    pub fn p() -> Op {
        Op::f(Expr::var(Var::shifted(Field::P, 0)))
    }

    pub fn q() -> Op {
        Op::f(Expr::var(Var::shifted(Field::Q, 0)))
    }

    pub fn shift(j: i32) -> Op {
        Op(LambdaSeries::shift_op(j))
    }

    pub fn one() -> Op {
        Op::shift(0)
    }

    pub fn zero() -> Op {
        Op(LambdaSeries::zero())
    }
}

impl std::ops::Mul for Op {
    type Output = Op;
    fn mul(self, o: Op) -> Op {
        Op(self.0.compose(&o.0).expect("finite operators compose"))
    }
}

impl std::ops::Add for Op {
    type Output = Op;
    fn add(self, o: Op) -> Op {
        Op(self.0.add(&o.0))
    }
}

impl std::ops::Sub for Op {
    type Output = Op;
    fn sub(self, o: Op) -> Op {
        Op(self.0.sub(&o.0))
    }
}

impl std::ops::Mul<Op> for i64 {
    type Output = Op;
    fn mul(self, o: Op) -> Op {
        Op(o.0.scale(&crate::symkernel::Rational::from_integer(self.into())))
    }
}

fn matrix(a: Op, b: Op, c: Op, d: Op) -> MatrixOp {
    MatrixOp::new(a.0, b.0, c.0, d.0)
}

use Op as O;

/// `[[Q L^-1 - L Q, (1 - L) Q], [Q (L^-1 - 1), 0]]`.
pub fn p1() -> MatrixOp {
    matrix(
        O::q() * O::shift(-1) - O::shift(1) * O::q(),
        (O::one() - O::shift(1)) * O::q(),
        O::q() * (O::shift(-1) - O::one()),
        O::zero(),
    )
}

/// `[[0, P (L - 1) Q], [Q (1 - L^-1) P, Q (L - L^-1) Q]]`.
pub fn p2() -> MatrixOp {
    matrix(
        O::zero(),
        O::p() * (O::shift(1) - O::one()) * O::q(),
        O::q() * (O::one() - O::shift(-1)) * O::p(),
        O::q() * (O::shift(1) - O::shift(-1)) * O::q(),
    )
}

fn q_minus_lql() -> Op {
    O::q() - O::shift(1) * O::q() * O::shift(1)
}

/// The third operator, with `K22` in its compact form.
pub fn p3() -> MatrixOp {
    let k11 = O::p() * (O::q() * O::shift(-1) - O::shift(1) * O::q()) * O::p();
    let k12 = O::p()
        * (q_minus_lql() * (O::one() + O::shift(-1)) - O::p() * (O::one() - O::shift(1)))
        * O::q();
    let k21 = O::q()
        * ((O::shift(1) + O::one()) * (O::shift(-1) * O::q() * O::shift(-1) - O::q())
            + (O::one() - O::shift(-1)) * O::p())
        * O::p();
    matrix(k11, k12, k21, k22_compact())
}

pub(crate) fn k22_compact() -> Op {
    let s = O::one() + O::shift(-1);
    O::q()
        * (s.clone() * q_minus_lql() * s + 2 * (O::p() * O::shift(1) - O::shift(-1) * O::p()))
        * O::q()
}

/// `K22` as the three-term sum it is first written as.
pub fn k22_expanded() -> LambdaSeries {
    let s = || O::one() + O::shift(-1);
    let p_minus = O::f(Expr::var(Var::shifted(Field::P, -1)));
    let t1 = O::q() * s() * q_minus_lql() * s() * O::q();
    let t2 = O::q() * s() * O::p() * (O::shift(1) - O::one()) * O::q();
    let t3 = O::q() * (O::shift(1) - O::one()) * p_minus * s() * O::q();
    (t1 + t2 + t3).0
}

/// The composition `R P2` with `R = P2 P1^{-1}`, written locally.
///
/// The second row of `P2` factors as `Q (1 - L) Y` with
/// `Y = [-L^-1 P, -(1 + L^-1) Q]`, which cancels the `(1 - L)^{-1} Q^{-1}`
/// in the second column of `R`.
pub fn recursion_times_p2() -> MatrixOp {
    let p_minus = O::f(Expr::var(Var::shifted(Field::P, -1)));
    let s = || O::one() + O::shift(-1);
    let y = p2_second_row_factor();
    let c1 = O::p() * q_minus_lql();
    let c2 = O::q() * ((O::shift(1) - O::one()) * p_minus + s() * q_minus_lql());
    let row0 = O::p() * (O::shift(1) - O::one()) * O::q();
    let [y1, y2] = y;
    matrix(
        c1.clone() * y1.clone(),
        O::zero() - O::p() * row0.clone() + c1 * y2.clone(),
        c2.clone() * y1,
        O::zero() - O::q() * s() * row0 + c2 * y2,
    )
}

fn p2_second_row_factor() -> [Op; 2] {
    [O::zero() - O::shift(-1) * O::p(), O::zero() - (O::one() + O::shift(-1)) * O::q()]
}

/// Operator by index 1, 2, 3.
pub fn hamiltonian_operator(id: u8) -> MatrixOp {
    match id {
        1 => p1(),
        2 => p2(),
        3 => p3(),
        _ => panic!("Hamiltonian operator index must be 1, 2 or 3"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k22_forms_agree() {
        assert_eq!(p3().entry(1, 1), &k22_expanded());
    }

    #[test]
    fn second_row_of_p2_factors_through_one_minus_shift() {
        let [y1, y2] = p2_second_row_factor();
        let lead = || O::q() * (O::one() - O::shift(1));
        assert_eq!((lead() * y1).0, *p2().entry(1, 0));
        assert_eq!((lead() * y2).0, *p2().entry(1, 1));
    }

    #[test]
    fn third_operator_is_minus_recursion_times_second() {
        assert_eq!(recursion_times_p2(), p3().neg());
    }

    #[test]
    fn operators_are_antisymmetric() {
        for id in 1..=3 {
            assert!(hamiltonian_operator(id).is_antisymmetric().unwrap(), "P{id}");
        }
    }
}
