//! Derivations on the ring: total x-derivative, variational derivatives,
//! prolonged evolutionary derivatives, and the canonical form of densities
//! modulo total differences.
//!
//! Odd derivatives are left derivatives: write the term as `theta * R` with
//! `theta` moved to the front (tracking the sign), then `d/dtheta` gives `R`.

use std::collections::BTreeSet;

use super::expr::Expr;
use super::poly::Poly;
use super::var::{Field, Mode, Odd, Slot, Var};
use crate::error::{Error, Result};

/// Dependent variable in a variational derivative.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Even(Field),
    Odd(u8),
}

/// Partial derivative in a jet variable, applying `dw/dv2 = w` for `v2{0}`.
pub fn jet_partial(e: &Expr, v: Var) -> Expr {
    let d = e.partial(v);
    if v == Var::jet(Field::V2, 0) {
        let w = Var::jet(Field::W, 0);
        let dw = e.partial(w);
        if !dw.is_zero() {
            return d + Expr::var(w) * dw;
        }
    }
    d
}

fn check_not_lattice(e: &Expr) -> Result<()> {
    if e.mode() == Some(Mode::Lattice) {
        return Err(Error::WrongMode {
            expected: Mode::Continuum,
        });
    }
    Ok(())
}

fn check_not_continuum(e: &Expr) -> Result<()> {
    if e.mode() == Some(Mode::Continuum) {
        return Err(Error::WrongMode {
            expected: Mode::Lattice,
        });
    }
    Ok(())
}

fn next_jet(slot: Slot) -> Slot {
    match slot {
        Slot::Jet(m) => Slot::Jet(m + 1),
        s => s,
    }
}

/// Total x-derivative on the jet ring; `d_x w = w * v2{1}`.
pub fn total_x_derivative(e: &Expr) -> Result<Expr> {
    check_not_lattice(e)?;
    let mut out = Expr::zero();
    for v in e.vars() {
        let d = e.partial(v);
        if d.is_zero() {
            continue;
        }
        let dv = if v == Var::jet(Field::W, 0) {
            Expr::var(v) * Expr::var(Var::jet(Field::V2, 1))
        } else {
            Expr::var(Var {
                field: v.field,
                slot: next_jet(v.slot),
            })
        };
        out = out + d * dv;
    }
    for o in e.odd_vars() {
        let d = e.partial_odd(o);
        let next = Expr::odd(Odd {
            alpha: o.alpha,
            slot: next_jet(o.slot),
        });
        out = out + next * d;
    }
    Ok(out)
}

/// `n`-fold total x-derivative.
pub fn total_x_derivative_n(e: &Expr, n: u32) -> Result<Expr> {
    let mut out = e.clone();
    for _ in 0..n {
        out = total_x_derivative(&out)?;
    }
    Ok(out)
}

fn field_vars(e: &Expr, field: Field) -> Vec<Var> {
    let vars = e.vars();
    let mut out: Vec<Var> = vars.iter().copied().filter(|v| v.field == field).collect();
    let v2 = Var::jet(Field::V2, 0);
    if field == Field::V2 && vars.contains(&Var::jet(Field::W, 0)) && !out.contains(&v2) {
        out.push(v2);
    }
    out
}

fn odd_slots(e: &Expr, alpha: u8) -> Vec<Odd> {
    e.odd_vars().into_iter().filter(|o| o.alpha == alpha).collect()
}

/// Variational derivative of the functional with density `h`.
///
/// Lattice: `sum_l Lambda^{-l} dh/dx^{(l)}`. Continuum: `sum_s (-d_x)^s dh/dx^{(s)}`.
pub fn variational_derivative(h: &Expr, x: Target) -> Result<Expr> {
    let mode = h.mode().unwrap_or(Mode::Lattice);
    let parts: Vec<(Slot, Expr)> = match x {
        Target::Even(f) => field_vars(h, f)
            .into_iter()
            .map(|v| {
                let d = if mode == Mode::Continuum {
                    jet_partial(h, v)
                } else {
                    h.partial(v)
                };
                (v.slot, d)
            })
            .collect(),
        Target::Odd(a) => odd_slots(h, a)
            .into_iter()
            .map(|o| (o.slot, h.partial_odd(o)))
            .collect(),
    };
    let mut out = Expr::zero();
    for (slot, d) in parts {
        let term = match slot {
            Slot::Shift(l) => d.shift(-l)?,
            Slot::Jet(s) => {
                let t = total_x_derivative_n(&d, s)?;
                if s % 2 == 1 {
                    -t
                } else {
                    t
                }
            }
        };
        out = out + term;
    }
    Ok(out)
}

/// Canonical representative of a lattice density modulo the image of
/// `Lambda - 1`: every term is shifted so its smallest shift index is 0.
pub fn functional_canonical_form(h: &Expr) -> Result<Expr> {
    check_not_continuum(h)?;
    if h.has_logs() {
        return Err(Error::UnexpectedLog("density canonicalization"));
    }
    let p = h.as_poly().ok_or(Error::NonMonomialDenominator)?;
    Ok(Expr::from_poly(canonical_poly(p)))
}

pub(crate) fn canonical_poly(p: &Poly) -> Poly {
    let mut out = Poly::zero();
    for (m, c) in p.terms() {
        let m2 = match m.shift_range() {
            Some((lo, _)) if lo != 0 => m.map_slots_monotone(|sl| sl.shifted(-lo)),
            _ => m.clone(),
        };
        out.add_term(m2, c.clone());
    }
    out
}

/// True when the density is a total difference.
pub fn is_total_difference(h: &Expr) -> Result<bool> {
    Ok(functional_canonical_form(h)?.is_zero())
}

/// Derivative of `e` along the evolutionary vector field with components
/// `x = [(field, X_field)]`: `sum_j de/dx^{(j)} * D^j X_field`, where `D` is
/// the shift (lattice) or the total x-derivative (continuum).
pub fn prolong(e: &Expr, x: &[(Field, &Expr)]) -> Result<Expr> {
    let mut out = Expr::zero();
    for v in e.vars() {
        let Some((_, xf)) = x.iter().find(|(f, _)| *f == v.field) else {
            continue;
        };
        let d = e.partial(v);
        if d.is_zero() {
            continue;
        }
        let image = match v.slot {
            Slot::Shift(j) => xf.shift(j)?,
            Slot::Jet(s) => total_x_derivative_n(xf, s)?,
        };
        out = out + d * image;
    }
    Ok(out)
}

/// Even lattice fields present in the expression.
pub fn fields(e: &Expr) -> BTreeSet<Field> {
    e.vars().into_iter().map(|v| v.field).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(s: &str) -> Expr {
        Expr::parse(s).unwrap()
    }

    #[test]
    fn x_derivative_of_exponential_generator() {
        let d = total_x_derivative(&ex("v1 + w")).unwrap();
        assert_eq!(d, ex("v1{1} + w*v2{1}"));
    }

    #[test]
    fn odd_jets_advance() {
        let d = total_x_derivative(&ex("th1{0}*th2{1}")).unwrap();
        assert_eq!(d, ex("th1{1}*th2{1} + th1{0}*th2{2}"));
    }

    #[test]
    fn lattice_input_rejected() {
        assert!(total_x_derivative(&ex("P")).is_err());
    }

    #[test]
    fn log_density_gradient() {
        let g = variational_derivative(&ex("-log(P)"), Target::Even(Field::P)).unwrap();
        assert_eq!(g, ex("-1/P"));
    }

    #[test]
    fn canonical_form_kills_differences() {
        let h = ex("Q[1]*th1[1]*th2[1] - Q*th1*th2");
        assert!(functional_canonical_form(&h).unwrap().is_zero());
    }
}
