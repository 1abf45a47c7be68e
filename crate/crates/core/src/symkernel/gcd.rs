//! Multivariate polynomial GCD over the rationals (recursive primitive PRS).
//!
//! Works on even polynomials. Laurent inputs are first multiplied by a
//! monomial so all exponents are nonnegative; monomials are units in the
//! Laurent ring, so the result is the gcd up to a unit.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::monomial::Monomial;
use super::poly::Poly;
use super::var::Var;
use super::Rational;

type Exps = Vec<u32>;

/// Dense-exponent polynomial over a fixed variable list; lex order with
/// variable 0 most significant.
#[derive(Clone, Debug, PartialEq)]
struct MPoly {
    n: usize,
    terms: BTreeMap<Exps, Rational>,
}

impl MPoly {
    fn zero(n: usize) -> Self {
        MPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    fn constant(n: usize, c: Rational) -> Self {
        let mut p = Self::zero(n);
        if !c.is_zero() {
            p.terms.insert(vec![0; n], c);
        }
        p
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    fn add_term(&mut self, e: Exps, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn sub(&self, o: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }

    fn mul(&self, o: &MPoly) -> MPoly {
        let mut acc: BTreeMap<Exps, Rational> = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                let e: Exps = a.iter().zip(b).map(|(x, y)| x + y).collect();
                *acc.entry(e).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        MPoly {
            n: self.n,
            terms: acc,
        }
    }

    fn scale(&self, c: &Rational) -> MPoly {
        MPoly {
            n: self.n,
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k * c)).collect(),
        }
    }

    fn mul_var_pow(&self, i: usize, k: u32) -> MPoly {
        MPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = e.clone();
                    e[i] += k;
                    (e, c.clone())
                })
                .collect(),
        }
    }

    fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    /// Coefficient of `x_i^d` as a polynomial in the remaining variables.
    fn coeff_in(&self, i: usize, d: u32) -> MPoly {
        let mut out = MPoly::zero(self.n);
        for (e, c) in &self.terms {
            if e[i] == d {
                let mut e2 = e.clone();
                e2[i] = 0;
                out.terms.insert(e2, c.clone());
            }
        }
        out
    }

    fn coeffs_in(&self, i: usize) -> BTreeMap<u32, MPoly> {
        let mut out: BTreeMap<u32, MPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let d = e2[i];
            e2[i] = 0;
            out.entry(d)
                .or_insert_with(|| MPoly::zero(self.n))
                .terms
                .insert(e2, c.clone());
        }
        out
    }

    fn leading(&self) -> Option<(&Exps, &Rational)> {
        self.terms.iter().next_back()
    }

    fn monic(&self) -> MPoly {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
        }
    }

    /// Exact division; `None` if `d` does not divide `self`.
    fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        let (de, dc) = d.leading()?;
        let (de, dc) = (de.clone(), dc.clone());
        let bound: Vec<u32> = (0..self.n)
            .map(|i| self.degree_in(i).checked_sub(d.degree_in(i)))
            .collect::<Option<_>>()?;
        let mut rem = self.clone();
        let mut q = MPoly::zero(self.n);
        while let Some((re, rc)) = rem.leading() {
            if re.iter().zip(&de).any(|(a, b)| a < b) {
                return None;
            }
            let e: Exps = re.iter().zip(&de).map(|(a, b)| a - b).collect();
            if e.iter().zip(&bound).any(|(a, b)| a > b) {
                return None;
            }
            let c = rc / &dc;
            let mut t = MPoly::zero(self.n);
            t.terms.insert(e.clone(), c.clone());
            rem = rem.sub(&t.mul(d));
            q.terms.insert(e, c);
        }
        Some(q)
    }

    /// Pseudo-remainder of `self` by `b` with respect to `x_i` (up to a
    /// nonzero factor from the coefficient ring).
    fn prem(&self, b: &MPoly, i: usize) -> MPoly {
        let db = b.degree_in(i);
        let lcb = b.coeff_in(i, db);
        let mut r = self.clone();
        while !r.is_zero() {
            let dr = r.degree_in(i);
            if dr < db {
                break;
            }
            let lcr = r.coeff_in(i, dr);
            r = r.mul(&lcb).sub(&b.mul(&lcr).mul_var_pow(i, dr - db));
        }
        r
    }

    fn content_in(&self, i: usize) -> MPoly {
        let mut g = MPoly::zero(self.n);
        for c in self.coeffs_in(i).into_values() {
            g = gcd_rec(&g, &c);
            if g.is_constant() && !g.is_zero() {
                return MPoly::constant(self.n, Rational::one());
            }
        }
        g
    }

    fn primitive_in(&self, i: usize) -> MPoly {
        let c = self.content_in(i);
        self.div_exact(&c).expect("content divides")
    }
}

/// Dense univariate polynomial, lowest degree first, no trailing zeros.
type UPoly = Vec<Rational>;

fn trim(p: &mut UPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn urem(a: &UPoly, b: &UPoly) -> UPoly {
    let mut r = a.clone();
    let lb = b.last().unwrap();
    while r.len() >= b.len() {
        let f = r.last().unwrap() / lb;
        let shift = r.len() - b.len();
        for (j, c) in b.iter().enumerate() {
            r[shift + j] -= &f * c;
        }
        r.pop();
        trim(&mut r);
    }
    r
}

fn ugcd_degree(a: &UPoly, b: &UPoly) -> usize {
    let (mut p, mut q) = (a.clone(), b.clone());
    while !q.is_empty() {
        let r = urem(&p, &q);
        p = q;
        q = r;
    }
    p.len().saturating_sub(1)
}

impl MPoly {
    /// Image in `x_i` after substituting `pt` for the other variables.
    fn image_in(&self, i: usize, pt: &[Rational]) -> UPoly {
        let mut out = vec![Rational::zero(); self.degree_in(i) as usize + 1];
        for (e, c) in &self.terms {
            let mut v = c.clone();
            for (j, &k) in e.iter().enumerate() {
                if j != i && k > 0 {
                    v *= num_traits::pow(pt[j].clone(), k as usize);
                }
            }
            out[e[i] as usize] += v;
        }
        trim(&mut out);
        out
    }
}

/// True when evaluation proves that `gcd(a, b)` does not involve `x_i`.
/// Both inputs must have positive degree in `x_i`.
fn gcd_free_of(a: &MPoly, b: &MPoly, i: usize) -> bool {
    let (da, db) = (a.degree_in(i) as usize, b.degree_in(i) as usize);
    for attempt in 0..3i64 {
        let pt: Vec<Rational> = (0..a.n as i64)
            .map(|j| Rational::from_integer((2 + 3 * j + 5 * attempt * (j + 1) + j * j).into()))
            .collect();
        let (ia, ib) = (a.image_in(i, &pt), b.image_in(i, &pt));
        if ia.len() != da + 1 || ib.len() != db + 1 {
            continue;
        }
        return ugcd_degree(&ia, &ib) == 0;
    }
    false
}

fn gcd_of_coefficients(a: &MPoly, b: &MPoly, i: usize) -> MPoly {
    let one = MPoly::constant(a.n, Rational::one());
    let mut g = MPoly::zero(a.n);
    for c in a.coeffs_in(i).into_values().chain(b.coeffs_in(i).into_values()) {
        g = gcd_rec(&g, &c);
        if g.is_constant() && !g.is_zero() {
            return one;
        }
    }
    g
}

fn gcd_rec(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return MPoly::constant(a.n, Rational::one());
    }
    if b.terms.len() <= a.terms.len() && a.div_exact(b).is_some() {
        return b.monic();
    }
    if a.terms.len() <= b.terms.len() && b.div_exact(a).is_some() {
        return a.monic();
    }
    for i in 0..a.n {
        if a.degree_in(i) > 0 && b.degree_in(i) > 0 && gcd_free_of(a, b, i) {
            return gcd_of_coefficients(a, b, i);
        }
    }
    let i = (0..a.n)
        .find(|&i| a.degree_in(i) > 0 || b.degree_in(i) > 0)
        .unwrap();
    if a.degree_in(i) == 0 {
        return gcd_rec(a, &b.content_in(i));
    }
    if b.degree_in(i) == 0 {
        return gcd_rec(&a.content_in(i), b);
    }
    let c = gcd_rec(&a.content_in(i), &b.content_in(i));
    let (mut p, mut q) = (a.primitive_in(i), b.primitive_in(i));
    if p.degree_in(i) < q.degree_in(i) {
        std::mem::swap(&mut p, &mut q);
    }
    while !q.is_zero() {
        let r = p.prem(&q, i);
        p = q;
        q = if r.is_zero() { r } else { r.primitive_in(i) };
    }
    let g = p.primitive_in(i);
    c.mul(&g).monic()
}

struct Layout {
    vars: Vec<Var>,
}

impl Layout {
    fn new<'a>(polys: impl IntoIterator<Item = &'a Poly>) -> Self {
        let mut set = std::collections::BTreeSet::new();
        for p in polys {
            set.extend(p.vars());
        }
        Layout {
            vars: set.into_iter().collect(),
        }
    }

    /// Converts an even polynomial with nonnegative exponents.
    fn to_mpoly(&self, p: &Poly) -> MPoly {
        let n = self.vars.len();
        let mut out = MPoly::zero(n);
        for (m, c) in p.terms() {
            let mut e = vec![0u32; n];
            for &(v, k) in m.even_factors() {
                let i = self.vars.binary_search(&v).unwrap();
                e[i] = k as u32;
            }
            out.terms.insert(e, c.clone());
        }
        out
    }

    fn to_poly(&self, p: &MPoly) -> Poly {
        let mut out = Poly::zero();
        for (e, c) in &p.terms {
            let mut m = Monomial::one();
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    m = m.mul(&Monomial::var(self.vars[i], k as i32)).unwrap().0;
                }
            }
            out.add_term(m, c.clone());
        }
        out
    }
}

/// Clears negative exponents and the monomial content of an even polynomial.
pub(crate) fn clear_monomial(p: &Poly) -> (Poly, Monomial) {
    let m = p.min_exponents();
    let inv = m.inverse_even().unwrap();
    (p.mul_monomial(&inv), m)
}

/// Monic gcd of even polynomials, ignoring monomial factors.
pub fn gcd(polys: &[&Poly]) -> Poly {
    let cleared: Vec<Poly> = polys.iter().map(|p| clear_monomial(p).0).collect();
    let layout = Layout::new(cleared.iter());
    let mut g = MPoly::zero(layout.vars.len());
    for p in &cleared {
        g = gcd_rec(&g, &layout.to_mpoly(p));
        if g.is_constant() && !g.is_zero() {
            return Poly::one();
        }
    }
    layout.to_poly(&g)
}

/// Exact quotient `p / d` for an even `d` with nonnegative exponents;
/// `p` may be Laurent and odd.
pub fn div_exact(p: &Poly, d: &Poly) -> Option<Poly> {
    let mut out = Poly::zero();
    for (odd, coeff) in p.split_odd() {
        let (c, m) = clear_monomial(&coeff);
        let layout = Layout::new([&c, d]);
        let q = layout.to_mpoly(&c).div_exact(&layout.to_mpoly(d))?;
        let q = layout.to_poly(&q).mul_monomial(&m).mul_monomial(&odd);
        out = &out + &q;
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symkernel::parse::parse_poly;

    fn p(s: &str) -> Poly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn gcd_of_products() {
        let a = p("(v1 - w)^2*(v1 + 3)");
        let b = p("(v1 - w)*(v1^2 + w)");
        assert_eq!(gcd(&[&a, &b]), p("v1 - w"));
    }

    #[test]
    fn gcd_coprime_is_one() {
        assert!(gcd(&[&p("v1 + 1"), &p("v1 - 1")]).is_one());
    }

    #[test]
    fn exact_division() {
        let a = p("(v1 - w)^3*v2");
        assert_eq!(div_exact(&a, &p("(v1-w)^2")).unwrap(), p("(v1-w)*v2"));
        assert!(div_exact(&p("v1 + 1"), &p("v1 - 1")).is_none());
    }
}
