//! The two-dimensional Frobenius manifold with potential
//! `F = 1/2 v1^2 v2 + v1 e^{v2} + 1/2 v1^2 log v1` and `eta = [[0,1],[1,0]]`.

use crate::check::SymbolicCheck;
use crate::error::Result;
use crate::symkernel::{jet_partial, Expr, Field, Var};

pub type M2 = [[Expr; 2]; 2];

pub fn v(alpha: usize) -> Var {
    match alpha {
        0 => Var::jet(Field::V1, 0),
        _ => Var::jet(Field::V2, 0),
    }
}

pub fn v1() -> Expr {
    Expr::var(v(0))
}

pub fn v2() -> Expr {
    Expr::var(v(1))
}

/// `w = e^{v2}`.
pub fn w() -> Expr {
    Expr::var(Var::jet(Field::W, 0))
}

/// `d f / d v^alpha`, with `dw/dv2 = w`.
pub fn d(f: &Expr, alpha: usize) -> Expr {
    jet_partial(f, v(alpha))
}

#[derive(Clone, Debug)]
pub struct FrobeniusData {
    pub potential: Expr,
    pub eta: M2,
    pub unity: [Expr; 2],
    pub euler: [Expr; 2],
    pub intersection_form: M2,
}

pub fn potential() -> Result<Expr> {
    let half = Expr::rational(1, 2);
    let (a, b) = (v1(), v2());
    Ok(&half * &a * &a * &b + &a * &w() + (&half * &a * &a).try_mul(&Expr::log(&a)?)?)
}

pub fn eta() -> M2 {
    [[Expr::zero(), Expr::one()], [Expr::one(), Expr::zero()]]
}

/// `e = v1/(v1 - w) d/dv1 - 1/(v1 - w) d/dv2`.
pub fn unity() -> Result<[Expr; 2]> {
    let den = v1() - w();
    Ok([v1().try_div(&den)?, -den.inv()?])
}

/// `E = v1 d/dv1 + d/dv2`.
pub fn euler() -> [Expr; 2] {
    [v1(), Expr::one()]
}

/// `c_{abc} = d^3 F / dv^a dv^b dv^c`.
pub fn third_derivatives(f: &Expr) -> [[[Expr; 2]; 2]; 2] {
    std::array::from_fn(|a| std::array::from_fn(|b| std::array::from_fn(|c| d(&d(&d(f, a), b), c))))
}

/// `g^{ab} = E^c eta^{ax} eta^{by} c_{cxy}`; `eta` swaps the two indices.
pub fn intersection_form_from(f: &Expr) -> M2 {
    let c = third_derivatives(f);
    let e = euler();
    std::array::from_fn(|a| {
        std::array::from_fn(|b| (0..2).map(|g| &e[g] * &c[g][1 - a][1 - b]).sum())
    })
}

pub fn reference_intersection_form() -> M2 {
    let (a, ww) = (v1(), w());
    [
        [Expr::int(2) * &a * &ww, &a + &ww],
        [&a + &ww, Expr::int(2)],
    ]
}

pub fn frobenius_data() -> Result<FrobeniusData> {
    let f = potential()?;
    Ok(FrobeniusData {
        eta: eta(),
        unity: unity()?,
        euler: euler(),
        intersection_form: intersection_form_from(&f),
        potential: f,
    })
}

fn diff(a: &M2, b: &M2) -> Vec<Expr> {
    a.iter().flatten().zip(b.iter().flatten()).map(|(x, y)| x - y).collect()
}

/// Intersection form, unity (`e^c c_{cab} = eta_{ab}`) and quasi-homogeneity.
pub fn frobenius_checks() -> Result<Vec<SymbolicCheck>> {
    let data = frobenius_data()?;
    let c = third_derivatives(&data.potential);
    let e = &data.unity;
    let unit: M2 = std::array::from_fn(|a| std::array::from_fn(|b| (0..2).map(|g| &e[g] * &c[g][a][b]).sum()));
    Ok(vec![
        SymbolicCheck::new(
            "intersection form",
            diff(&data.intersection_form, &reference_intersection_form()),
        ),
        SymbolicCheck::new("unity", diff(&unit, &data.eta)),
        SymbolicCheck::new("symmetric g", vec![&data.intersection_form[0][1] - &data.intersection_form[1][0]]),
        SymbolicCheck::new("E(F) = 2F + v1^2", {
            let f = &data.potential;
            let ef = &data.euler[0] * &d(f, 0) + &data.euler[1] * &d(f, 1);
            vec![ef - Expr::int(2) * f - v1() * v1()]
        }),
    ])
}
