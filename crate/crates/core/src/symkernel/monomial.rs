use smallvec::SmallVec;

use super::var::{Odd, Var};

/// A Laurent monomial in even variables times an ordered product of distinct
/// odd generators. Even factors are sorted by variable with nonzero exponents;
/// odd factors are sorted ascending.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub(crate) even: SmallVec<[(Var, i32); 4]>,
    pub(crate) odd: SmallVec<[Odd; 4]>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(v: Var, exp: i32) -> Self {
        let mut m = Self::default();
        if exp != 0 {
            m.even.push((v, exp));
        }
        m
    }

    pub fn odd(o: Odd) -> Self {
        let mut m = Self::default();
        m.odd.push(o);
        m
    }

    pub fn is_one(&self) -> bool {
        self.even.is_empty() && self.odd.is_empty()
    }

    pub fn even_factors(&self) -> &[(Var, i32)] {
        &self.even
    }

    pub fn odd_factors(&self) -> &[Odd] {
        &self.odd
    }

    pub fn odd_degree(&self) -> usize {
        self.odd.len()
    }

    pub fn exponent(&self, v: Var) -> i32 {
        self.even
            .binary_search_by(|(w, _)| w.cmp(&v))
            .map(|i| self.even[i].1)
            .unwrap_or(0)
    }

    pub fn has_negative_exponent(&self) -> bool {
        self.even.iter().any(|&(_, e)| e < 0)
    }

    /// Product of two monomials with the sign produced by reordering odd
    /// factors; `None` when an odd generator repeats.
    pub fn mul(&self, other: &Monomial) -> Option<(Monomial, bool)> {
        let mut odd: SmallVec<[Odd; 4]> = SmallVec::with_capacity(self.odd.len() + other.odd.len());
        let mut negative = false;
        let (a, b) = (&self.odd, &other.odd);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    odd.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    // b[j] moves past the remaining a[i..]
                    if (a.len() - i) % 2 == 1 {
                        negative = !negative;
                    }
                    odd.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => return None,
            }
        }
        odd.extend_from_slice(&a[i..]);
        odd.extend_from_slice(&b[j..]);

        let mut even: SmallVec<[(Var, i32); 4]> =
            SmallVec::with_capacity(self.even.len() + other.even.len());
        let (a, b) = (&self.even, &other.even);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    even.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    even.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let e = a[i].1 + b[j].1;
                    if e != 0 {
                        even.push((a[i].0, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        even.extend_from_slice(&a[i..]);
        even.extend_from_slice(&b[j..]);
        Some((Monomial { even, odd }, negative))
    }

    /// Inverse of the even part. Only defined for purely even monomials.
    pub fn inverse_even(&self) -> Option<Monomial> {
        if !self.odd.is_empty() {
            return None;
        }
        Some(Monomial {
            even: self.even.iter().map(|&(v, e)| (v, -e)).collect(),
            odd: SmallVec::new(),
        })
    }

    pub fn pow_even(&self, n: i32) -> Option<Monomial> {
        if !self.odd.is_empty() && n != 1 {
            return if n == 0 { Some(Monomial::one()) } else { None };
        }
        if n == 0 {
            return Some(Monomial::one());
        }
        Some(Monomial {
            even: self.even.iter().map(|&(v, e)| (v, e * n)).collect(),
            odd: self.odd.clone(),
        })
    }

    /// Applies `f` to every slot; `f` must be order-preserving within each
    /// field (true for uniform shifts).
    pub(crate) fn map_slots_monotone(&self, f: impl Fn(super::var::Slot) -> super::var::Slot) -> Monomial {
        Monomial {
            even: self
                .even
                .iter()
                .map(|&(v, e)| {
                    (
                        Var {
                            field: v.field,
                            slot: f(v.slot),
                        },
                        e,
                    )
                })
                .collect(),
            odd: self
                .odd
                .iter()
                .map(|o| Odd {
                    alpha: o.alpha,
                    slot: f(o.slot),
                })
                .collect(),
        }
    }

    /// Minimum and maximum lattice shift among all factors.
    pub fn shift_range(&self) -> Option<(i32, i32)> {
        let shifts = self
            .even
            .iter()
            .map(|(v, _)| v.slot)
            .chain(self.odd.iter().map(|o| o.slot))
            .filter_map(|s| match s {
                super::var::Slot::Shift(j) => Some(j),
                _ => None,
            });
        shifts.fold(None, |acc, j| match acc {
            None => Some((j, j)),
            Some((lo, hi)) => Some((lo.min(j), hi.max(j))),
        })
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.even.iter().map(|&(v, _)| v)
    }

    /// Removes the odd factor at position `i`, returning the remaining
    /// monomial and whether moving it to the front costs a sign.
    pub(crate) fn remove_odd_at(&self, i: usize) -> (Monomial, bool) {
        let mut m = self.clone();
        m.odd.remove(i);
        (m, i % 2 == 1)
    }

    pub(crate) fn without_var(&self, v: Var) -> Monomial {
        Monomial {
            even: self.even.iter().copied().filter(|&(w, _)| w != v).collect(),
            odd: self.odd.clone(),
        }
    }

    pub(crate) fn even_part(&self) -> Monomial {
        Monomial {
            even: self.even.clone(),
            odd: SmallVec::new(),
        }
    }

    pub(crate) fn odd_part(&self) -> Monomial {
        Monomial {
            even: SmallVec::new(),
            odd: self.odd.clone(),
        }
    }

    pub(crate) fn from_parts(even: SmallVec<[(Var, i32); 4]>, odd: SmallVec<[Odd; 4]>) -> Monomial {
        Monomial { even, odd }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symkernel::var::Field;

    #[test]
    fn odd_product_signs() {
        let a = Monomial::odd(Odd::shifted(1, 0));
        let b = Monomial::odd(Odd::shifted(1, -1));
        let (ab, neg_ab) = a.mul(&b).unwrap();
        let (ba, neg_ba) = b.mul(&a).unwrap();
        assert_eq!(ab, ba);
        assert_ne!(neg_ab, neg_ba);
        assert!(a.mul(&a).is_none());
    }

    #[test]
    fn even_exponents_cancel() {
        let p = Var::shifted(Field::P, 0);
        let m = Monomial::var(p, 2);
        let (r, neg) = m.mul(&Monomial::var(p, -2)).unwrap();
        assert!(r.is_one());
        assert!(!neg);
    }
}
