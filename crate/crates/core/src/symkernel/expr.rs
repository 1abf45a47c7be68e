//! `Expr`: the universal coefficient type. A reduced fraction of Laurent
//! super-polynomials plus an optional sum of `coeff * log(arg)` terms.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, ToPrimitive, Zero};

use super::gcd::{clear_monomial, div_exact, gcd};
use super::monomial::Monomial;
use super::poly::Poly;
use super::var::{Mode, Odd, Var};
use super::Rational;
use crate::error::{Error, Result};

/// Reduced fraction `num / den`. `den` is even, has no monomial factor and
/// unit leading coefficient; `den == 1` whenever the value is a Laurent
/// polynomial.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Frac {
    num: Poly,
    den: Poly,
}

impl Default for Frac {
    fn default() -> Frac {
        Frac::zero()
    }
}

impl Frac {
    pub fn from_poly(p: Poly) -> Frac {
        Frac {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn zero() -> Frac {
        Frac::from_poly(Poly::zero())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    /// Builds the reduced form of `num / den`.
    pub fn new(num: Poly, den: Poly) -> Result<Frac> {
        if den.is_zero() {
            return Err(Error::NotInvertible("zero denominator".into()));
        }
        if !den.is_even() {
            return Err(Error::NotInvertible("odd denominator".into()));
        }
        if num.is_zero() {
            return Ok(Frac::zero());
        }
        if let Some((m, c)) = den.as_single_term() {
            let inv = m.inverse_even().unwrap();
            let c = c.recip();
            return Ok(Frac::from_poly(num.mul_monomial(&inv).scale(&c)));
        }
        let (mut d, m) = clear_monomial(&den);
        let mut num = num.mul_monomial(&m.inverse_even().unwrap());
        let groups = num.split_odd();
        let mut parts: Vec<&Poly> = vec![&d];
        parts.extend(groups.values());
        let g = gcd(&parts);
        if !g.is_one() {
            num = div_exact(&num, &g).expect("gcd divides numerator");
            d = div_exact(&d, &g).expect("gcd divides denominator");
        }
        if let Some((m, c)) = d.as_single_term() {
            let inv = m.inverse_even().unwrap();
            let c = c.recip();
            return Ok(Frac::from_poly(num.mul_monomial(&inv).scale(&c)));
        }
        let lc = d.leading_coefficient().unwrap().recip();
        Ok(Frac {
            num: num.scale(&lc),
            den: d.scale(&lc),
        })
    }

    /// Normalises `num / den` when the two are already coprime and `den` has
    /// no monomial factor.
    fn from_coprime(num: Poly, den: Poly) -> Frac {
        if num.is_zero() {
            return Frac::zero();
        }
        if let Some((m, c)) = den.as_single_term() {
            let inv = m.inverse_even().unwrap();
            let c = c.recip();
            return Frac::from_poly(num.mul_monomial(&inv).scale(&c));
        }
        let lc = den.leading_coefficient().unwrap().recip();
        Frac {
            num: num.scale(&lc),
            den: den.scale(&lc),
        }
    }

    pub fn add(&self, o: &Frac) -> Frac {
        if self.den == o.den {
            if self.is_poly() {
                return Frac::from_poly(&self.num + &o.num);
            }
            return Frac::new(&self.num + &o.num, self.den.clone()).unwrap();
        }
        let g = gcd(&[&self.den, &o.den]);
        let b1 = div_exact(&self.den, &g).expect("gcd divides denominator");
        let d1 = div_exact(&o.den, &g).expect("gcd divides denominator");
        let num = &(&self.num * &d1) + &(&o.num * &b1);
        if num.is_zero() || g.is_one() {
            return Frac::from_coprime(num, &self.den * &d1);
        }
        let groups = num.split_odd();
        let mut parts: Vec<&Poly> = vec![&g];
        parts.extend(groups.values());
        let h = gcd(&parts);
        if h.is_one() {
            return Frac::from_coprime(num, &self.den * &d1);
        }
        let num = div_exact(&num, &h).expect("gcd divides numerator");
        let g1 = div_exact(&g, &h).expect("gcd divides denominator");
        Frac::from_coprime(num, &(&b1 * &d1) * &g1)
    }

    pub fn neg(&self) -> Frac {
        Frac {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &Frac) -> Frac {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Frac) -> Frac {
        if self.is_poly() && o.is_poly() {
            return Frac::from_poly(&self.num * &o.num);
        }
        let x = Frac::new(self.num.clone(), o.den.clone()).unwrap();
        let y = Frac::new(o.num.clone(), self.den.clone()).unwrap();
        Frac::from_coprime(&x.num * &y.num, &x.den * &y.den)
    }

    pub fn scale(&self, c: &Rational) -> Frac {
        Frac {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Result<Frac> {
        if !self.num.is_even() {
            return Err(Error::NotInvertible("odd element".into()));
        }
        Frac::new(self.den.clone(), self.num.clone())
    }

    pub fn shift(&self, s: i32) -> Frac {
        Frac {
            num: self.num.shift(s),
            den: self.den.shift(s),
        }
    }

    pub fn partial(&self, v: Var) -> Frac {
        if self.is_poly() {
            return Frac::from_poly(self.num.partial(v));
        }
        let dn = self.num.partial(v);
        let dd = self.den.partial(v);
        if dd.is_zero() {
            return Frac::new(dn, self.den.clone()).unwrap();
        }
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        Frac::new(num, &self.den * &self.den).unwrap()
    }

    pub fn partial_odd(&self, o: Odd) -> Frac {
        Frac::new(self.num.partial_odd(o), self.den.clone()).unwrap()
    }
}

/// Normalized exact expression. See module docs.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Expr {
    rat: Frac,
    logs: BTreeMap<Poly, Frac>,
    mode: Option<Mode>,
}

fn mode_of(p: &Poly) -> Result<Option<Mode>> {
    p.mode().map_err(|_| Error::ModeMismatch)
}

fn join_modes(a: Option<Mode>, b: Option<Mode>) -> Result<Option<Mode>> {
    match (a, b) {
        (Some(x), Some(y)) if x != y => Err(Error::ModeMismatch),
        (Some(x), _) | (_, Some(x)) => Ok(Some(x)),
        _ => Ok(None),
    }
}

impl Expr {
    pub fn zero() -> Expr {
        Expr::default()
    }

    pub fn one() -> Expr {
        Expr::from_poly(Poly::one())
    }

    pub fn int(n: i64) -> Expr {
        Expr::from_poly(Poly::int(n))
    }

    pub fn rational(n: i64, d: i64) -> Expr {
        Expr::constant(Rational::new(n.into(), d.into()))
    }

    pub fn constant(c: Rational) -> Expr {
        Expr::from_poly(Poly::constant(c))
    }

    pub fn var(v: Var) -> Expr {
        Expr::from_poly(Poly::var(v))
    }

    pub fn odd(o: Odd) -> Expr {
        Expr::from_poly(Poly::odd(o))
    }

    /// Panics if the polynomial mixes modes; use [`Expr::try_from_poly`] for
    /// untrusted input.
    pub fn from_poly(p: Poly) -> Expr {
        Expr::try_from_poly(p).expect("polynomial mixes lattice and continuum variables")
    }

    pub fn try_from_poly(p: Poly) -> Result<Expr> {
        let mode = mode_of(&p)?;
        Ok(Expr {
            rat: Frac::from_poly(p),
            logs: BTreeMap::new(),
            mode,
        })
    }

    pub fn from_frac(f: Frac) -> Result<Expr> {
        let mode = join_modes(mode_of(&f.num)?, mode_of(&f.den)?)?;
        Ok(Expr {
            rat: f,
            logs: BTreeMap::new(),
            mode,
        })
    }

    /// `num / den` for polynomials.
    pub fn ratio(num: Poly, den: Poly) -> Result<Expr> {
        Expr::from_frac(Frac::new(num, den)?)
    }

    /// `log(arg)` for an even polynomial argument. Monomial arguments with unit
    /// coefficient are split into single-variable logs.
    pub fn log(arg: &Expr) -> Result<Expr> {
        if !arg.logs.is_empty() {
            return Err(Error::Unsupported("log of an expression with log terms".into()));
        }
        if !arg.rat.num.is_even() {
            return Err(Error::Unsupported("log of an odd expression".into()));
        }
        let mut out = Expr {
            mode: arg.mode,
            ..Expr::zero()
        };
        let parts: Vec<(Poly, Rational)> = if arg.rat.is_poly() {
            vec![(arg.rat.num.clone(), Rational::one())]
        } else {
            vec![
                (arg.rat.num.clone(), Rational::one()),
                (arg.rat.den.clone(), -Rational::one()),
            ]
        };
        for (p, sign) in parts {
            match p.as_single_term() {
                Some((m, c)) if c.is_one() => {
                    for &(v, e) in m.even_factors() {
                        out.add_log(Poly::var(v), Frac::from_poly(Poly::constant(&sign * Rational::from_integer(e.into()))));
                    }
                }
                _ => {
                    if p.is_zero() {
                        return Err(Error::NotInvertible("log of zero".into()));
                    }
                    out.add_log(p, Frac::from_poly(Poly::constant(sign)));
                }
            }
        }
        Ok(out)
    }

    fn add_log(&mut self, arg: Poly, c: Frac) {
        if c.is_zero() || arg.is_one() {
            return;
        }
        let entry = self.logs.entry(arg).or_insert_with(Frac::zero);
        *entry = entry.add(&c);
        self.logs.retain(|_, c| !c.is_zero());
    }

    pub fn mode(&self) -> Option<Mode> {
        self.mode
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.logs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.logs.is_empty() && self.rat.is_poly() && self.rat.num.is_one()
    }

    pub fn frac(&self) -> &Frac {
        &self.rat
    }

    pub fn num(&self) -> &Poly {
        &self.rat.num
    }

    pub fn den(&self) -> &Poly {
        &self.rat.den
    }

    pub fn logs(&self) -> &BTreeMap<Poly, Frac> {
        &self.logs
    }

    pub fn has_logs(&self) -> bool {
        !self.logs.is_empty()
    }

    /// The Laurent polynomial, if this is one.
    pub fn as_poly(&self) -> Option<&Poly> {
        (self.logs.is_empty() && self.rat.is_poly()).then_some(&self.rat.num)
    }

    pub fn as_constant(&self) -> Option<Rational> {
        self.as_poly().and_then(|p| p.as_constant())
    }

    pub fn try_add(&self, o: &Expr) -> Result<Expr> {
        let mode = join_modes(self.mode, o.mode)?;
        let mut out = Expr {
            rat: self.rat.add(&o.rat),
            logs: self.logs.clone(),
            mode,
        };
        for (a, c) in &o.logs {
            out.add_log(a.clone(), c.clone());
        }
        Ok(out.refresh_mode())
    }

    pub fn try_sub(&self, o: &Expr) -> Result<Expr> {
        self.try_add(&-o)
    }

    pub fn try_mul(&self, o: &Expr) -> Result<Expr> {
        let mode = join_modes(self.mode, o.mode)?;
        if !self.logs.is_empty() && !o.logs.is_empty() {
            return Err(Error::Unsupported("product of two log terms".into()));
        }
        let mut out = Expr {
            rat: self.rat.mul(&o.rat),
            logs: BTreeMap::new(),
            mode,
        };
        for (a, c) in &self.logs {
            out.add_log(a.clone(), c.mul(&o.rat));
        }
        for (a, c) in &o.logs {
            out.add_log(a.clone(), self.rat.mul(c));
        }
        Ok(out.refresh_mode())
    }

    pub fn try_div(&self, o: &Expr) -> Result<Expr> {
        self.try_mul(&o.inv()?)
    }

    fn refresh_mode(mut self) -> Expr {
        if self.is_zero() {
            self.mode = None;
        } else if self.as_constant().is_some() {
            self.mode = None;
        }
        self
    }

    pub fn scale(&self, c: &Rational) -> Expr {
        if c.is_zero() {
            return Expr::zero();
        }
        Expr {
            rat: self.rat.scale(c),
            logs: self.logs.iter().map(|(a, k)| (a.clone(), k.scale(c))).collect(),
            mode: self.mode,
        }
    }

    pub fn inv(&self) -> Result<Expr> {
        if !self.logs.is_empty() {
            return Err(Error::NotInvertible("expression with log terms".into()));
        }
        if self.rat.is_zero() {
            return Err(Error::NotInvertible("zero".into()));
        }
        Ok(Expr {
            rat: self.rat.inv()?,
            logs: BTreeMap::new(),
            mode: self.mode,
        })
    }

    pub fn pow(&self, n: i32) -> Result<Expr> {
        if n < 0 {
            return self.inv()?.pow(-n);
        }
        if !self.logs.is_empty() && n > 1 {
            return Err(Error::Unsupported("power of a log term".into()));
        }
        if n == 0 {
            return Ok(Expr::one());
        }
        if self.rat.is_poly() {
            return Ok(Expr::from_poly(self.rat.num.pow(n as u32)));
        }
        let mut acc = Expr::one();
        for _ in 0..n {
            acc = acc.try_mul(self)?;
        }
        Ok(acc)
    }

    /// Uniform lattice shift; the ring automorphism `Lambda^s`.
    pub fn shift(&self, s: i32) -> Result<Expr> {
        if self.mode == Some(Mode::Continuum) {
            return Err(Error::WrongMode {
                expected: Mode::Lattice,
            });
        }
        Ok(self.shift_unchecked(s))
    }

    pub(crate) fn shift_unchecked(&self, s: i32) -> Expr {
        if s == 0 {
            return self.clone();
        }
        Expr {
            rat: self.rat.shift(s),
            logs: self
                .logs
                .iter()
                .map(|(a, c)| (a.shift(s), c.shift(s)))
                .collect(),
            mode: self.mode,
        }
    }

    /// Partial derivative with respect to an even variable (`w` is treated as
    /// an independent variable here).
    pub fn partial(&self, v: Var) -> Expr {
        let mut out = Expr {
            rat: self.rat.partial(v),
            logs: BTreeMap::new(),
            mode: self.mode,
        };
        for (a, c) in &self.logs {
            out.add_log(a.clone(), c.partial(v));
            let da = a.partial(v);
            if !da.is_zero() {
                let term = c.mul(&Frac::new(da, a.clone()).expect("log argument is nonzero"));
                out.rat = out.rat.add(&term);
            }
        }
        out.refresh_mode()
    }

    /// Left derivative with respect to an odd generator.
    pub fn partial_odd(&self, o: Odd) -> Expr {
        let mut out = Expr {
            rat: self.rat.partial_odd(o),
            logs: BTreeMap::new(),
            mode: self.mode,
        };
        for (a, c) in &self.logs {
            out.add_log(a.clone(), c.partial_odd(o));
        }
        out.refresh_mode()
    }

    pub fn vars(&self) -> std::collections::BTreeSet<Var> {
        let mut s = self.rat.num.vars();
        s.extend(self.rat.den.vars());
        for (a, c) in &self.logs {
            s.extend(a.vars());
            s.extend(c.num.vars());
            s.extend(c.den.vars());
        }
        s
    }

    pub fn odd_vars(&self) -> std::collections::BTreeSet<Odd> {
        let mut s = self.rat.num.odd_vars();
        for c in self.logs.values() {
            s.extend(c.num.odd_vars());
        }
        s
    }

    /// Odd degree if every term has the same number of odd factors.
    pub fn odd_degree(&self) -> Option<usize> {
        let mut degs = self
            .rat
            .num
            .terms()
            .map(|(m, _)| m.odd_degree())
            .chain(self.logs.values().flat_map(|c| c.num.terms().map(|(m, _)| m.odd_degree())));
        let first = degs.next().unwrap_or(0);
        degs.all(|d| d == first).then_some(first)
    }

    /// Substitutes even variables; unmapped variables are kept.
    pub fn substitute(&self, f: &dyn Fn(Var) -> Option<Expr>) -> Result<Expr> {
        let mut cache: HashMap<(Var, i32), Expr> = HashMap::new();
        let sub_frac = |fr: &Frac, cache: &mut HashMap<(Var, i32), Expr>| -> Result<Expr> {
            let num = substitute_poly(&fr.num, f, cache)?;
            if fr.is_poly() {
                return Ok(num);
            }
            let den = substitute_poly(&fr.den, f, cache)?;
            num.try_div(&den)
        };
        let mut out = sub_frac(&self.rat, &mut cache)?;
        for (a, c) in &self.logs {
            let arg = substitute_poly(a, f, &mut cache)?;
            let coeff = sub_frac(c, &mut cache)?;
            out = out.try_add(&coeff.try_mul(&Expr::log(&arg)?)?)?;
        }
        Ok(out)
    }

    /// Double-precision evaluation. Log terms evaluate as `log|arg|`.
    pub fn eval(&self, assignment: &dyn Fn(Var) -> Option<f64>) -> Result<f64> {
        if !self.odd_vars().is_empty() {
            return Err(Error::Unsupported("numeric evaluation of odd generators".into()));
        }
        let ev = |p: &Poly| eval_poly(p, assignment);
        let den = ev(&self.rat.den)?;
        if den == 0.0 {
            return Err(Error::DivisionByZero);
        }
        let mut total = ev(&self.rat.num)? / den;
        for (a, c) in &self.logs {
            let arg = ev(a)?;
            if arg == 0.0 {
                return Err(Error::DivisionByZero);
            }
            let cd = ev(&c.den)?;
            if cd == 0.0 {
                return Err(Error::DivisionByZero);
            }
            total += ev(&c.num)? / cd * arg.abs().ln();
        }
        Ok(total)
    }

    /// Exact evaluation at a rational point; log terms are rejected.
    pub fn eval_exact(&self, assignment: &dyn Fn(Var) -> Option<Rational>) -> Result<Rational> {
        if !self.odd_vars().is_empty() {
            return Err(Error::Unsupported("numeric evaluation of odd generators".into()));
        }
        if self.has_logs() {
            return Err(Error::UnexpectedLog("exact evaluation"));
        }
        let den = eval_poly_exact(&self.rat.den, assignment)?;
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(eval_poly_exact(&self.rat.num, assignment)? / den)
    }

    pub fn eval_map(&self, assignment: &BTreeMap<Var, f64>) -> Result<f64> {
        self.eval(&|v| assignment.get(&v).copied())
    }

    /// Maps every monomial of the rational part through `f` (used by grading
    /// audits and canonicalization). Requires a polynomial expression.
    pub fn poly_terms(&self) -> Option<impl Iterator<Item = (&Monomial, &Rational)>> {
        self.as_poly().map(|p| p.terms())
    }
}

fn substitute_poly(
    p: &Poly,
    f: &dyn Fn(Var) -> Option<Expr>,
    cache: &mut HashMap<(Var, i32), Expr>,
) -> Result<Expr> {
    let mut out = Expr::zero();
    for (m, c) in p.terms() {
        let mut t = Expr::from_poly(Poly::term(Monomial::from_parts(Default::default(), m.odd_factors().iter().copied().collect()), c.clone()));
        for &(v, e) in m.even_factors() {
            let factor = match cache.get(&(v, e)) {
                Some(x) => x.clone(),
                None => {
                    let x = match f(v) {
                        Some(img) => img.pow(e)?,
                        None => Expr::from_poly(Poly::term(Monomial::var(v, e), Rational::one())),
                    };
                    cache.insert((v, e), x.clone());
                    x
                }
            };
            t = t.try_mul(&factor)?;
        }
        out = out.try_add(&t)?;
    }
    Ok(out)
}

fn eval_poly(p: &Poly, assignment: &dyn Fn(Var) -> Option<f64>) -> Result<f64> {
    let mut total = 0.0;
    for (m, c) in p.terms() {
        let mut t = c.to_f64().unwrap_or(f64::NAN);
        for &(v, e) in m.even_factors() {
            let x = assignment(v).ok_or_else(|| Error::Unassigned(v.to_string()))?;
            if e < 0 && x == 0.0 {
                return Err(Error::DivisionByZero);
            }
            t *= x.powi(e);
        }
        total += t;
    }
    Ok(total)
}

fn eval_poly_exact(p: &Poly, assignment: &dyn Fn(Var) -> Option<Rational>) -> Result<Rational> {
    let mut total = Rational::zero();
    for (m, c) in p.terms() {
        let mut t = c.clone();
        for &(v, e) in m.even_factors() {
            let x = assignment(v).ok_or_else(|| Error::Unassigned(v.to_string()))?;
            if e < 0 && x.is_zero() {
                return Err(Error::DivisionByZero);
            }
            t *= num_traits::Pow::pow(&x, e);
        }
        total += t;
    }
    Ok(total)
}

macro_rules! binop {
    ($tr:ident, $f:ident, $try:ident) => {
        impl $tr<&Expr> for &Expr {
            type Output = Expr;
            fn $f(self, rhs: &Expr) -> Expr {
                self.$try(rhs).unwrap_or_else(|e| panic!("{}: {e}", stringify!($f)))
            }
        }
        impl $tr<Expr> for Expr {
            type Output = Expr;
            fn $f(self, rhs: Expr) -> Expr {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Expr> for Expr {
            type Output = Expr;
            fn $f(self, rhs: &Expr) -> Expr {
                (&self).$f(rhs)
            }
        }
    };
}
binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);
binop!(Div, div, try_div);

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr {
            rat: self.rat.neg(),
            logs: self.logs.iter().map(|(a, c)| (a.clone(), c.neg())).collect(),
            mode: self.mode,
        }
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -&self
    }
}

impl From<Poly> for Expr {
    fn from(p: Poly) -> Expr {
        Expr::from_poly(p)
    }
}

impl std::iter::Sum for Expr {
    fn sum<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        iter.fold(Expr::zero(), |a, b| a + b)
    }
}

impl fmt::Display for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_poly() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        if !self.rat.is_zero() || self.logs.is_empty() {
            write!(f, "{}", self.rat)?;
            first = false;
        }
        for (a, c) in &self.logs {
            if !first {
                f.write_str(" + ")?;
            }
            write!(f, "({c})*log({a})")?;
            first = false;
        }
        Ok(())
    }
}

#[allow(dead_code)]
fn _assert_traits() {
    fn is_send_sync<T: Send + Sync>() {}
    is_send_sync::<Expr>();
    let _ = Rational::zero().is_zero();
}
