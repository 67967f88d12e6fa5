//! Rational functions over a scalar field: fractions of polynomials with a
//! gcd-reduced canonical form. Used both as the field `k(X)` and, with more
//! variables, as the coefficient field of recursive factorizations.

use std::fmt::{self, Display};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::rings::poly::{LaurentPoly, VarSet};
use crate::rings::uni;
use crate::scalar::{Scalar, ScalarField};

/// Multivariate gcd by content/primitive-part recursion with pseudo-division.
/// Inputs must be genuine polynomials (no negative exponents).
pub fn mgcd<K: ScalarField>(a: &LaurentPoly<K>, b: &LaurentPoly<K>) -> LaurentPoly<K> {
    if a.is_zero() {
        return normalize_lead(b);
    }
    if b.is_zero() {
        return normalize_lead(a);
    }
    // Choose the highest-index variable occurring in either.
    let nv = a.vars.len();
    let mut var = None;
    for v in (0..nv).rev() {
        if a.degree(v) > 0 || b.degree(v) > 0 {
            var = Some(v);
            break;
        }
    }
    let Some(v) = var else {
        // Both constants.
        return LaurentPoly::one_over(&a.vars);
    };
    let only_v = (0..nv).all(|w| w == v || (a.degree(w) == 0 && b.degree(w) == 0));
    if only_v {
        return normalize_lead(&uni::gcd(a, b, v));
    }
    // content = gcd of v-coefficients (polynomials in fewer variables)
    let content = |p: &LaurentPoly<K>| -> LaurentPoly<K> {
        let mut c = LaurentPoly::zero_over(&p.vars);
        for d in 0..=p.degree(v) {
            let coeff = p.coeff_of(v, d);
            if !coeff.is_zero() {
                c = mgcd(&c, &coeff);
            }
        }
        c
    };
    let ca = content(a);
    let cb = content(b);
    let pa = a.div_exact_poly(&ca).expect("content divides");
    let pb = b.div_exact_poly(&cb).expect("content divides");
    let cg = mgcd(&ca, &cb);
    // pseudo-remainder sequence on primitive parts
    let mut f = pa;
    let mut g = pb;
    if f.degree(v) < g.degree(v) {
        std::mem::swap(&mut f, &mut g);
    }
    loop {
        if g.is_zero() {
            break;
        }
        let r = pseudo_rem(&f, &g, v);
        f = g;
        g = primitive_part(&r, v);
    }
    let pp = primitive_part(&f, v);
    normalize_lead(&(pp * cg))
}

/// Pseudo-remainder of f by g in variable v: lead(g)^(df-dg+1) * f mod g.
fn pseudo_rem<K: ScalarField>(f: &LaurentPoly<K>, g: &LaurentPoly<K>, v: usize) -> LaurentPoly<K> {
    let dg = g.degree(v);
    let lg = g.coeff_of(v, dg);
    let mut r = f.clone();
    while !r.is_zero() && r.degree(v) >= dg {
        let dr = r.degree(v);
        let lr = r.coeff_of(v, dr);
        let shift = LaurentPoly::var_pow(&r.vars, r.vars.name(v), dr - dg);
        r = r * lg.clone() - g.clone() * lr * shift;
    }
    r
}

fn primitive_part<K: ScalarField>(p: &LaurentPoly<K>, v: usize) -> LaurentPoly<K> {
    if p.is_zero() {
        return p.clone();
    }
    let mut c = LaurentPoly::zero_over(&p.vars);
    for d in 0..=p.degree(v) {
        let coeff = p.coeff_of(v, d);
        if !coeff.is_zero() {
            c = mgcd(&c, &coeff);
        }
    }
    if c.is_zero() {
        return p.clone();
    }
    p.div_exact_poly(&c).expect("content divides")
}

/// Scale so the lex-leading coefficient is 1.
fn normalize_lead<K: ScalarField>(p: &LaurentPoly<K>) -> LaurentPoly<K> {
    match p.terms.iter().next_back() {
        None => p.clone(),
        Some((_, c)) => p.scale(&c.inv().expect("field scalar")),
    }
}

/// A reduced fraction of polynomials over `K`, with monic-normalized
/// denominator. Forms a field.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatFrac<K: ScalarField> {
    pub num: LaurentPoly<K>,
    pub den: LaurentPoly<K>,
}

impl<K: ScalarField> RatFrac<K> {
    pub fn from_poly(p: LaurentPoly<K>) -> Self {
        let one = LaurentPoly::one_over(&p.vars);
        RatFrac { num: p, den: one }
    }

    pub fn new(num: LaurentPoly<K>, den: LaurentPoly<K>) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut f = RatFrac { num, den };
        f.reduce();
        f
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = LaurentPoly::one_over(&self.den.vars);
            return;
        }
        if !self.den.is_one() && !self.den.is_constant() && !self.num.is_constant() {
            let g = mgcd(&self.num, &self.den);
            if !g.is_constant() {
                self.num = self.num.div_exact_poly(&g).expect("gcd divides");
                self.den = self.den.div_exact_poly(&g).expect("gcd divides");
            }
        }
        // monic denominator
        let lc = self.den.terms.iter().next_back().unwrap().1.clone();
        if !lc.is_one() {
            let i = lc.inv().expect("field scalar");
            self.num = self.num.scale(&i);
            self.den = self.den.scale(&i);
        }
    }

    pub fn as_poly(&self) -> Option<&LaurentPoly<K>> {
        if self.den.is_one() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.num.vars
    }
}

impl<K: ScalarField> Add for RatFrac<K> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        if self.num.is_zero() {
            return rhs;
        }
        if rhs.num.is_zero() {
            return self;
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFrac { num: self.num + rhs.num, den: rhs.den };
        }
        if self.den == rhs.den {
            return RatFrac::new(self.num + rhs.num, self.den);
        }
        // lcm-style combination to limit growth
        let d = mgcd(&self.den, &rhs.den);
        if d.is_constant() {
            return RatFrac::new(
                self.num * rhs.den.clone() + rhs.num * self.den.clone(),
                self.den * rhs.den,
            );
        }
        let l = rhs.den.div_exact_poly(&d).expect("gcd divides");
        let r = self.den.div_exact_poly(&d).expect("gcd divides");
        RatFrac::new(self.num * l.clone() + rhs.num * r, self.den * l)
    }
}
impl<K: ScalarField> Sub for RatFrac<K> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}
impl<K: ScalarField> Mul for RatFrac<K> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.num.is_zero() || rhs.num.is_zero() {
            let vars = self.num.vars.clone();
            return RatFrac {
                num: LaurentPoly::zero_over(&vars),
                den: LaurentPoly::one_over(&vars),
            };
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFrac { num: self.num * rhs.num, den: rhs.den };
        }
        // cross-cancel before multiplying
        let a = RatFrac::new(self.num, rhs.den);
        let b = RatFrac::new(rhs.num, self.den);
        RatFrac { num: a.num * b.num, den: a.den * b.den }
    }
}
impl<K: ScalarField> Neg for RatFrac<K> {
    type Output = Self;
    fn neg(self) -> Self {
        RatFrac { num: -self.num, den: self.den }
    }
}

impl<K: ScalarField> Zero for RatFrac<K> {
    fn zero() -> Self {
        RatFrac::from_poly(LaurentPoly::zero())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}
impl<K: ScalarField> One for RatFrac<K> {
    fn one() -> Self {
        let vs = VarSet::poly(&[]);
        RatFrac::from_poly(LaurentPoly::one_over(&vs))
    }
    fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }
}

impl<K: ScalarField> Scalar for RatFrac<K> {
    fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            None
        } else {
            Some(RatFrac::new(self.den.clone(), self.num.clone()))
        }
    }
    fn from_i64(n: i64) -> Self {
        let vs = VarSet::poly(&[]);
        RatFrac::from_poly(LaurentPoly::int(&vs, n))
    }
    fn characteristic() -> u64 {
        K::characteristic()
    }
    fn ring_name() -> String {
        format!("{}(..)", K::ring_name())
    }
}
impl<K: ScalarField> ScalarField for RatFrac<K> {}

impl<K: ScalarField> Display for RatFrac<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
impl<K: ScalarField> fmt::Debug for RatFrac<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn fraction_reduction_is_canonical() {
        let vs = VarSet::poly(&["X"]);
        let x = LaurentPoly::<Rational>::var(&vs, "X");
        let one = LaurentPoly::one_over(&vs);
        // (X^2-1)/(X-1) == X+1
        let f = RatFrac::new(
            x.clone() * x.clone() - one.clone(),
            x.clone() - one.clone(),
        );
        assert_eq!(f.as_poly().unwrap().clone(), x + one);
    }

    #[test]
    fn multivariate_gcd_finds_common_factor() {
        let vs = VarSet::poly(&["X", "Y"]);
        let x = LaurentPoly::<Rational>::var(&vs, "X");
        let y = LaurentPoly::<Rational>::var(&vs, "Y");
        let common = x.clone() + y.clone();
        let a = common.clone() * (x.clone() - y.clone());
        let b = common.clone() * (x.clone() * y.clone() + LaurentPoly::int(&vs, 2));
        let g = mgcd(&a, &b);
        assert!(a.div_exact_poly(&g).is_some());
        assert!(b.div_exact_poly(&g).is_some());
        assert!(g.div_exact_poly(&common).is_some());
    }
}
