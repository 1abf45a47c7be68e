//! Sparse Laurent polynomials over the rationals in even variables and odd
//! generators. Terms are kept in a `BTreeMap`, which fixes the total order
//! used for printing and comparison.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use super::monomial::Monomial;
use super::var::{Mode, Odd, Var};
use super::Rational;

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Poly {
    pub(crate) terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn int(n: i64) -> Self {
        Self::constant(Rational::from_integer(n.into()))
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn var(v: Var) -> Self {
        Self::term(Monomial::var(v, 1), Rational::one())
    }

    pub fn odd(o: Odd) -> Self {
        Self::term(Monomial::odd(o), Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// The value if this is a constant (including zero).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// The single term if this polynomial has exactly one.
    pub fn as_single_term(&self) -> Option<(&Monomial, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|m| m.odd.is_empty())
    }

    pub fn has_negative_exponents(&self) -> bool {
        self.terms.keys().any(|m| m.has_negative_exponent())
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        let mut out = Poly::zero();
        for (a, c) in &self.terms {
            if let Some((p, neg)) = a.mul(m) {
                out.add_term(p, if neg { -c.clone() } else { c.clone() });
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Uniform lattice shift of every variable.
    pub fn shift(&self, s: i32) -> Poly {
        if s == 0 {
            return self.clone();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.map_slots_monotone(|sl| sl.shifted(s)), c.clone()))
                .collect(),
        }
    }

    /// The mode of the variables present, `None` for constants; `Err(())` if
    /// both kinds appear.
    pub fn mode(&self) -> Result<Option<Mode>, ()> {
        let mut mode = None;
        for m in self.terms.keys() {
            let slots = m
                .even
                .iter()
                .map(|(v, _)| v.slot)
                .chain(m.odd.iter().map(|o| o.slot));
            for s in slots {
                let sm = s.mode();
                match mode {
                    None => mode = Some(sm),
                    Some(x) if x != sm => return Err(()),
                    _ => {}
                }
            }
        }
        Ok(mode)
    }

    pub fn vars(&self) -> std::collections::BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.vars()).collect()
    }

    pub fn odd_vars(&self) -> std::collections::BTreeSet<Odd> {
        self.terms
            .keys()
            .flat_map(|m| m.odd.iter().copied())
            .collect()
    }

    /// Componentwise minimum exponent of each even variable over all terms.
    pub(crate) fn min_exponents(&self) -> Monomial {
        let mut mins: BTreeMap<Var, i32> = BTreeMap::new();
        let vars = self.vars();
        for v in &vars {
            mins.insert(*v, i32::MAX);
        }
        for m in self.terms.keys() {
            for v in &vars {
                let e = m.exponent(*v);
                let slot = mins.get_mut(v).unwrap();
                *slot = (*slot).min(e);
            }
        }
        let even: SmallVec<[(Var, i32); 4]> = mins.into_iter().filter(|&(_, e)| e != 0).collect();
        Monomial::from_parts(even, SmallVec::new())
    }

    /// Leading (largest in term order) coefficient.
    pub(crate) fn leading_coefficient(&self) -> Option<&Rational> {
        self.terms.values().next_back()
    }

    /// Splits by odd part: `self = sum_S coeff_S * theta^S` with even coeffs.
    pub(crate) fn split_odd(&self) -> BTreeMap<Monomial, Poly> {
        let mut out: BTreeMap<Monomial, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.odd_part())
                .or_default()
                .add_term(m.even_part(), c.clone());
        }
        out
    }

    /// Derivative with respect to an even variable.
    pub fn partial(&self, v: Var) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                continue;
            }
            let mut rest = m.without_var(v);
            if e != 1 {
                let (r, _) = rest.mul(&Monomial::var(v, e - 1)).unwrap();
                rest = r;
            }
            out.add_term(rest, c * Rational::from_integer(e.into()));
        }
        out
    }

    /// Left derivative with respect to an odd generator.
    pub fn partial_odd(&self, o: Odd) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if let Some(i) = m.odd.iter().position(|x| *x == o) {
                let (rest, neg) = m.remove_odd_at(i);
                out.add_term(rest, if neg { -c.clone() } else { c.clone() });
            }
        }
        out
    }

    pub fn max_abs_coefficient(&self) -> Rational {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (mut big, small) = if self.len() >= rhs.len() {
            (self.clone(), rhs)
        } else {
            (rhs.clone(), self)
        };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = self.as_constant() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.as_constant() {
            return self.scale(&c);
        }
        let mut acc: std::collections::HashMap<Monomial, Rational> =
            std::collections::HashMap::with_capacity(self.len() * rhs.len());
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                if let Some((m, neg)) = a.mul(b) {
                    let c = ca * cb;
                    let c = if neg { -c } else { c };
                    *acc.entry(m).or_insert_with(Rational::zero) += c;
                }
            }
        }
        Poly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}
