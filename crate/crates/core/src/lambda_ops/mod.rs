//! Formal series in the shift symbol `Lambda` with exactness windows.
//!
//! A [`LambdaSeries`] stores coefficients `x_j` of `Lambda^j` together with an
//! interval `[lo, hi]` (either end may be infinite) on which every coefficient
//! is known exactly; absent entries inside the window are exact zeros, and
//! nothing is known outside it. All operations propagate the window, so a
//! truncated inverse can never leak a wrong coefficient into a result.

mod matrix;

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::symkernel::{Expr, Field, Rational, Var};

pub use matrix::MatrixOp;

/// Which half of a series `(.)_+` keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Projection {
    /// `(.)_+` keeps `j >= 0`, `(.)_-` keeps `j < 0`.
    #[default]
    Standard,
    /// `(.)_+` keeps `j > 0`, `(.)_-` keeps `j <= 0`. Only useful as a
    /// negative control.
    Flipped,
}

/// Direction of a geometric-series inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `x_0 (1 - N)` with `N` strictly lowering; result exact on `[-depth, inf)`.
    Descending,
    /// `x_0 (1 - N)` with `N` strictly raising; result exact on `(-inf, depth]`.
    Ascending,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LambdaSeries {
    coeffs: BTreeMap<i32, Expr>,
    lo: Option<i32>,
    hi: Option<i32>,
}

fn le(a: Option<i32>, b: i32) -> bool {
    a.is_none_or(|a| a <= b)
}

fn ge(a: Option<i32>, b: i32) -> bool {
    a.is_none_or(|a| a >= b)
}

fn max_opt(a: Option<i32>, b: Option<i32>) -> Option<i32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) | (None, x) => x,
    }
}

fn min_opt(a: Option<i32>, b: Option<i32>) -> Option<i32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) | (None, x) => x,
    }
}

impl LambdaSeries {
    /// The zero operator (exact everywhere).
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::term(Expr::one(), 0)
    }

    /// `f Lambda^j`.
    pub fn term(f: Expr, j: i32) -> Self {
        let mut s = Self::zero();
        s.insert(j, f);
        s
    }

    /// `Lambda^j`.
    pub fn shift_op(j: i32) -> Self {
        Self::term(Expr::one(), j)
    }

    /// Multiplication by a function.
    pub fn function(f: Expr) -> Self {
        Self::term(f, 0)
    }

    /// Finite operator from `(power, coefficient)` pairs.
    pub fn from_terms(terms: impl IntoIterator<Item = (i32, Expr)>) -> Self {
        let mut s = Self::zero();
        for (j, f) in terms {
            let cur = s.coeffs.remove(&j).unwrap_or_default();
            s.insert(j, cur + f);
        }
        s
    }

    fn insert(&mut self, j: i32, f: Expr) {
        if !f.is_zero() {
            self.coeffs.insert(j, f);
        }
    }

    /// Restricts the exact window to `[lo, hi]` (intersected with the current
    /// one), discarding coefficients outside it.
    pub fn with_window(mut self, lo: Option<i32>, hi: Option<i32>) -> Self {
        self.lo = max_opt(self.lo, lo);
        self.hi = min_opt(self.hi, hi);
        let (l, h) = (self.lo, self.hi);
        self.coeffs.retain(|&j, _| le(l, j) && ge(h, j));
        self
    }

    pub fn window(&self) -> (Option<i32>, Option<i32>) {
        (self.lo, self.hi)
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_none() && self.hi.is_none()
    }

    pub fn in_window(&self, j: i32) -> bool {
        le(self.lo, j) && ge(self.hi, j)
    }

    pub fn coeffs(&self) -> &BTreeMap<i32, Expr> {
        &self.coeffs
    }

    /// Coefficient of `Lambda^j`; an error outside the exact window.
    pub fn coeff(&self, j: i32) -> Result<Expr> {
        if !self.in_window(j) {
            return Err(Error::Window(format!(
                "coefficient of Lambda^{j} requested outside exact window {}",
                self.window_string()
            )));
        }
        Ok(self.coeffs.get(&j).cloned().unwrap_or_default())
    }

    fn window_string(&self) -> String {
        let lo = self.lo.map_or("-inf".to_string(), |x| x.to_string());
        let hi = self.hi.map_or("inf".to_string(), |x| x.to_string());
        format!("[{lo}, {hi}]")
    }

    /// Coefficient of `Lambda^0`.
    pub fn residue(&self) -> Result<Expr> {
        self.coeff(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn min_power(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    fn max_power(&self) -> Option<i32> {
        self.coeffs.keys().next_back().copied()
    }

    /// Window of the exactly known coefficients of `self * other`, or `None`
    /// when no coefficient is exact.
    fn product_window(&self, o: &Self) -> Option<(Option<i32>, Option<i32>)> {
        let (lx, hx, ly, hy) = (self.lo, self.hi, o.lo, o.hi);
        let mut lo: Option<i32> = None;
        let mut hi: Option<i32> = None;
        let mut raise = |v: Option<i32>| lo = max_opt(lo, v);
        let add = |a: Option<i32>, b: Option<i32>| a.zip(b).map(|(a, b)| a + b);
        // stored terms of one factor need the matching coefficient of the other
        raise(add(ly, self.max_power()));
        raise(add(lx, o.max_power()));
        let mut lower = |v: Option<i32>| hi = min_opt(hi, v);
        lower(add(hy, self.min_power()));
        lower(add(hx, o.min_power()));
        // unknown tails must meet known zeros
        let mut lo_req = Vec::new();
        let mut hi_req = Vec::new();
        if let Some(lx) = lx {
            if hy.is_some() {
                return None;
            }
            lo_req.push(o.max_power().map(|m| lx + m));
            lo_req.push(ly.map(|ly| lx + ly - 1));
        }
        if let Some(hx) = hx {
            if ly.is_some() {
                return None;
            }
            hi_req.push(o.min_power().map(|m| hx + m));
            hi_req.push(hy.map(|hy| hx + hy + 1));
        }
        if let Some(ly) = ly {
            if hx.is_some() {
                return None;
            }
            lo_req.push(self.max_power().map(|m| ly + m));
            lo_req.push(lx.map(|lx| lx + ly - 1));
        }
        if let Some(hy) = hy {
            if lx.is_some() {
                return None;
            }
            hi_req.push(self.min_power().map(|m| hy + m));
            hi_req.push(hx.map(|hx| hx + hy + 1));
        }
        for r in lo_req {
            lo = max_opt(lo, r);
        }
        for r in hi_req {
            hi = min_opt(hi, r);
        }
        if let (Some(l), Some(h)) = (lo, hi) {
            if l > h {
                return None;
            }
        }
        Some((lo, hi))
    }

    /// Composition `self o other`, exact on the propagated window.
    pub fn compose(&self, o: &Self) -> Result<Self> {
        self.compose_in(o, None, None)
    }

    /// Composition restricted to powers in `[floor, ceil]`; only the products
    /// landing there are computed.
    pub fn compose_in(&self, o: &Self, floor: Option<i32>, ceil: Option<i32>) -> Result<Self> {
        let (lo, hi) = self.product_window(o).ok_or_else(|| {
            Error::Window(format!(
                "composition of series with windows {} and {} has no exact coefficient",
                self.window_string(),
                o.window_string()
            ))
        })?;
        let lo = max_opt(lo, floor);
        let hi = min_opt(hi, ceil);
        if let (Some(l), Some(h)) = (lo, hi) {
            if l > h {
                return Err(Error::Window("requested range lies outside the exact window".into()));
            }
        }
        let mut acc: BTreeMap<i32, Expr> = BTreeMap::new();
        for (&a, f) in &self.coeffs {
            for (&b, g) in &o.coeffs {
                let n = a + b;
                if !(le(lo, n) && ge(hi, n)) {
                    continue;
                }
                let t = f * &g.shift(a)?;
                let e = acc.entry(n).or_default();
                *e = &*e + &t;
            }
        }
        acc.retain(|_, e| !e.is_zero());
        Ok(LambdaSeries {
            coeffs: acc,
            lo,
            hi,
        })
    }

    /// `self^k` for `k >= 1`, by repeated composition.
    pub fn power(&self, k: u32) -> Result<Self> {
        self.power_in(k, None, None)
    }

    pub fn power_in(&self, k: u32, floor: Option<i32>, ceil: Option<i32>) -> Result<Self> {
        if k == 0 {
            return Ok(Self::one());
        }
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.compose(self)?;
        }
        Ok(acc.with_window(floor, ceil))
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (&j, f) in &o.coeffs {
            let cur = out.coeffs.remove(&j).unwrap_or_default();
            out.insert(j, cur + f);
        }
        out.with_window(o.lo, o.hi)
    }

    pub fn neg(&self) -> Self {
        LambdaSeries {
            coeffs: self.coeffs.iter().map(|(&j, f)| (j, -f)).collect(),
            lo: self.lo,
            hi: self.hi,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = LambdaSeries {
            coeffs: BTreeMap::new(),
            lo: self.lo,
            hi: self.hi,
        };
        for (&j, f) in &self.coeffs {
            out.insert(j, f.scale(c));
        }
        out
    }

    /// `f o self`.
    pub fn mul_left(&self, f: &Expr) -> Self {
        let mut out = LambdaSeries {
            coeffs: BTreeMap::new(),
            lo: self.lo,
            hi: self.hi,
        };
        for (&j, g) in &self.coeffs {
            out.insert(j, f * g);
        }
        out
    }

    /// `self o f`.
    pub fn mul_right(&self, f: &Expr) -> Result<Self> {
        let mut out = LambdaSeries {
            coeffs: BTreeMap::new(),
            lo: self.lo,
            hi: self.hi,
        };
        for (&j, g) in &self.coeffs {
            out.insert(j, g * &f.shift(j)?);
        }
        Ok(out)
    }

    /// `(.)_+` under the given convention.
    pub fn project_plus(&self, conv: Projection) -> Result<Self> {
        let cut = match conv {
            Projection::Standard => 0,
            Projection::Flipped => 1,
        };
        if !le(self.lo, cut) {
            return Err(Error::Window(format!(
                "(.)_+ needs coefficients down to Lambda^{cut}; exact window is {}",
                self.window_string()
            )));
        }
        Ok(LambdaSeries {
            coeffs: self.coeffs.range(cut..).map(|(&j, f)| (j, f.clone())).collect(),
            lo: None,
            hi: self.hi,
        })
    }

    /// `(.)_-` under the given convention.
    pub fn project_minus(&self, conv: Projection) -> Result<Self> {
        let cut = match conv {
            Projection::Standard => -1,
            Projection::Flipped => 0,
        };
        if !ge(self.hi, cut) {
            return Err(Error::Window(format!(
                "(.)_- needs coefficients up to Lambda^{cut}; exact window is {}",
                self.window_string()
            )));
        }
        Ok(LambdaSeries {
            coeffs: self.coeffs.range(..=cut).map(|(&j, f)| (j, f.clone())).collect(),
            lo: self.lo,
            hi: None,
        })
    }

    /// Formal adjoint: `(f Lambda^j)^dagger = Lambda^{-j} o f`.
    pub fn adjoint(&self) -> Result<Self> {
        let mut out = LambdaSeries {
            coeffs: BTreeMap::new(),
            lo: self.hi.map(|h| -h),
            hi: self.lo.map(|l| -l),
        };
        for (&j, f) in &self.coeffs {
            out.insert(-j, f.shift(-j)?);
        }
        Ok(out)
    }

    /// Action on a function: `sum_j x_j Lambda^j(g)`. Requires a finite operator.
    pub fn apply(&self, g: &Expr) -> Result<Expr> {
        if !self.is_finite() {
            return Err(Error::Window(format!(
                "applying a series with window {} to a function",
                self.window_string()
            )));
        }
        let mut out = Expr::zero();
        for (&j, f) in &self.coeffs {
            out = out + f * &g.shift(j)?;
        }
        Ok(out)
    }

    /// Geometric-series inverse of a finite triangular operator.
    pub fn truncated_inverse(&self, depth: u32, dir: Direction) -> Result<Self> {
        if !self.is_finite() {
            return Err(Error::NotTriangular("operator must be finite".into()));
        }
        let edge = match dir {
            Direction::Descending => self.max_power(),
            Direction::Ascending => self.min_power(),
        };
        if edge != Some(0) {
            return Err(Error::NotTriangular(format!(
                "expected {:?} shape with invertible Lambda^0 coefficient, got powers {:?}",
                dir,
                self.coeffs.keys().collect::<Vec<_>>()
            )));
        }
        let x0 = &self.coeffs[&0];
        let x0_inv = x0
            .inv()
            .map_err(|e| Error::NotTriangular(format!("leading coefficient: {e}")))?;
        // X = x0 (1 - N), N = -x0^{-1} (X - x0)
        let mut n = LambdaSeries::zero();
        for (&j, f) in &self.coeffs {
            if j != 0 {
                n.insert(j, -(&x0_inv * f));
            }
        }
        let d = depth as i32;
        let (floor, ceil) = match dir {
            Direction::Descending => (Some(-d), None),
            Direction::Ascending => (None, Some(d)),
        };
        let mut sum = LambdaSeries::one();
        for _ in 0..depth {
            sum = LambdaSeries::one().add(&n.compose_in(&sum, floor, ceil)?);
        }
        let sum = sum.with_window(floor, ceil);
        sum.mul_right(&x0_inv)
    }

    /// Coefficients agree on the intersection of both windows.
    pub fn agrees_with(&self, o: &Self) -> bool {
        let lo = max_opt(self.lo, o.lo);
        let hi = min_opt(self.hi, o.hi);
        let keys: std::collections::BTreeSet<i32> =
            self.coeffs.keys().chain(o.coeffs.keys()).copied().collect();
        keys.into_iter()
            .filter(|&j| le(lo, j) && ge(hi, j))
            .all(|j| self.coeffs.get(&j) == o.coeffs.get(&j))
    }
}

/// Frechet derivative of a lattice expression in one field:
/// `sum_l d e / d field^{(l)} Lambda^l`.
pub fn frechet(e: &Expr, field: Field) -> LambdaSeries {
    let mut out = LambdaSeries::zero();
    for v in e.vars() {
        if v.field != field {
            continue;
        }
        if let crate::symkernel::Slot::Shift(l) = v.slot {
            let d = e.partial(v);
            let cur = out.coeffs.remove(&l).unwrap_or_default();
            out.insert(l, cur + d);
        }
    }
    out
}

/// `A = Lambda - P`.
pub fn op_a() -> LambdaSeries {
    let p = Expr::var(Var::shifted(Field::P, 0));
    LambdaSeries::from_terms([(1, Expr::one()), (0, -p)])
}

/// `B = 1 - Q Lambda^{-1}`.
pub fn op_b() -> LambdaSeries {
    let q = Expr::var(Var::shifted(Field::Q, 0));
    LambdaSeries::from_terms([(0, Expr::one()), (-1, -q)])
}

impl fmt::Display for LambdaSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            f.write_str("0")?;
        }
        for (i, (j, c)) in self.coeffs.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})*L^{j}")?;
        }
        if !self.is_finite() {
            write!(f, "  exact on {}", self.window_string())?;
        }
        Ok(())
    }
}
