//! Fractions with restricted denominators: `num / f^k` for a declared base
//! polynomial `f`.

use std::fmt::{self, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::rings::poly::LaurentPoly;
use crate::scalar::Scalar;

/// An element of the localization `A_f`: `num / base^pow`.
///
/// Kept reduced so that `base` does not divide `num` while `pow > 0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Localized<K: Scalar> {
    pub num: LaurentPoly<K>,
    pub base: LaurentPoly<K>,
    pub pow: u32,
}

impl<K: Scalar> Localized<K> {
    pub fn new(num: LaurentPoly<K>, base: LaurentPoly<K>, pow: u32) -> Self {
        let mut l = Localized { num, base, pow };
        l.reduce();
        l
    }

    pub fn from_poly(p: LaurentPoly<K>, base: &LaurentPoly<K>) -> Self {
        Localized { num: p, base: base.clone(), pow: 0 }
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.pow = 0;
            return;
        }
        while self.pow > 0 {
            match self.num.div_exact_poly(&self.base) {
                Some(q) => {
                    self.num = q;
                    self.pow -= 1;
                }
                None => break,
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The underlying polynomial when the denominator is trivial.
    pub fn as_poly(&self) -> Option<&LaurentPoly<K>> {
        if self.pow == 0 {
            Some(&self.num)
        } else {
            None
        }
    }

    fn align(&self, rhs: &Self) -> (LaurentPoly<K>, LaurentPoly<K>, u32) {
        assert_eq!(self.base, rhs.base, "localization base mismatch");
        let k = self.pow.max(rhs.pow);
        let a = self.num.clone() * self.base.pow(k - self.pow);
        let b = rhs.num.clone() * rhs.base.pow(k - rhs.pow);
        (a, b, k)
    }
}

impl<K: Scalar> Add for Localized<K> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (a, b, k) = self.align(&rhs);
        Localized::new(a + b, self.base, k)
    }
}
impl<K: Scalar> Sub for Localized<K> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let (a, b, k) = self.align(&rhs);
        Localized::new(a - b, self.base, k)
    }
}
impl<K: Scalar> Mul for Localized<K> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        assert_eq!(self.base, rhs.base, "localization base mismatch");
        Localized::new(self.num * rhs.num, self.base, self.pow + rhs.pow)
    }
}
impl<K: Scalar> Neg for Localized<K> {
    type Output = Self;
    fn neg(self) -> Self {
        Localized { num: -self.num, base: self.base, pow: self.pow }
    }
}

impl<K: Scalar> Display for Localized<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pow == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})^{}", self.num, self.base, self.pow)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::poly::VarSet;
    use crate::scalar::Rational;

    #[test]
    fn reduction_cancels_base_powers() {
        let vs = VarSet::poly(&["Y"]);
        let y = LaurentPoly::<Rational>::var(&vs, "Y");
        let base = y.clone() * (LaurentPoly::one_over(&vs) - y.clone());
        // (Y(1-Y)) * Y / base^2 reduces to Y / base
        let num = base.clone() * y.clone();
        let l = Localized::new(num, base.clone(), 2);
        assert_eq!(l.pow, 1);
        assert_eq!(l.num, y);
    }

    #[test]
    fn localized_arithmetic_matches_cleared_denominators() {
        let vs = VarSet::poly(&["Y"]);
        let y = LaurentPoly::<Rational>::var(&vs, "Y");
        let one = LaurentPoly::one_over(&vs);
        let base = y.clone() * (one.clone() - y.clone());
        // 1/Y + 1/(1-Y) = 1/(Y(1-Y))  (partial fractions, cleared)
        let a = Localized::new(one.clone() - y.clone(), base.clone(), 1); // 1/Y
        let b = Localized::new(y.clone(), base.clone(), 1); // 1/(1-Y)
        let s = a + b;
        assert_eq!(s.pow, 1);
        assert_eq!(s.num, one);
    }
}
