//! Multivariate Laurent polynomials over an exact scalar, with per-variable
//! control of whether negative exponents are admitted.

use std::collections::BTreeMap;
use std::fmt::{self, Display};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::RingError;
use crate::scalar::Scalar;

/// Ordered variable table shared by all polynomials of one computation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarSet {
    names: Vec<String>,
    laurent: Vec<bool>,
}

impl VarSet {
    pub fn new(names: &[&str], laurent: &[bool]) -> Arc<Self> {
        assert_eq!(names.len(), laurent.len());
        Arc::new(VarSet {
            names: names.iter().map(|s| s.to_string()).collect(),
            laurent: laurent.to_vec(),
        })
    }

    /// All variables polynomial-only.
    pub fn poly(names: &[&str]) -> Arc<Self> {
        Arc::new(VarSet {
            names: names.iter().map(|s| s.to_string()).collect(),
            laurent: vec![false; names.len()],
        })
    }

    /// All variables Laurent.
    pub fn laurent(names: &[&str]) -> Arc<Self> {
        Arc::new(VarSet {
            names: names.iter().map(|s| s.to_string()).collect(),
            laurent: vec![true; names.len()],
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }
    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }
    pub fn names(&self) -> &[String] {
        &self.names
    }
    pub fn is_laurent(&self, i: usize) -> bool {
        self.laurent[i]
    }
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

pub type Exps = Vec<i32>;

/// A Laurent polynomial: a term map from exponent vectors to nonzero scalars.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly<K: Scalar> {
    pub vars: Arc<VarSet>,
    pub terms: BTreeMap<Exps, K>,
}

impl<K: Scalar> LaurentPoly<K> {
    pub fn zero_over(vars: &Arc<VarSet>) -> Self {
        LaurentPoly { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &Arc<VarSet>, c: K) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; vars.len()], c);
        }
        LaurentPoly { vars: vars.clone(), terms }
    }

    pub fn one_over(vars: &Arc<VarSet>) -> Self {
        Self::constant(vars, K::one())
    }

    pub fn int(vars: &Arc<VarSet>, n: i64) -> Self {
        Self::constant(vars, K::from_i64(n))
    }

    /// The monomial `c * prod vars[i]^exps[i]`.
    pub fn monomial(vars: &Arc<VarSet>, exps: Exps, c: K) -> Self {
        assert_eq!(exps.len(), vars.len());
        for (i, &e) in exps.iter().enumerate() {
            if e < 0 && !vars.is_laurent(i) {
                panic!("negative exponent on polynomial-only variable {}", vars.name(i));
            }
        }
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        LaurentPoly { vars: vars.clone(), terms }
    }

    /// The variable `name` to the first power.
    pub fn var(vars: &Arc<VarSet>, name: &str) -> Self {
        let i = vars.index_of(name).unwrap_or_else(|| panic!("unknown variable {name}"));
        let mut exps = vec![0; vars.len()];
        exps[i] = 1;
        Self::monomial(vars, exps, K::one())
    }

    pub fn var_pow(vars: &Arc<VarSet>, name: &str, e: i32) -> Self {
        let i = vars.index_of(name).unwrap_or_else(|| panic!("unknown variable {name}"));
        let mut exps = vec![0; vars.len()];
        exps[i] = e;
        Self::monomial(vars, exps, K::one())
    }

    fn insert_term(&mut self, exps: Exps, c: K) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    /// Bring `rhs` over to `self`'s variable table when the tables differ and
    /// `rhs` is a constant (as produced by context-free `zero()`/`one()`).
    fn unify(&self, rhs: &Self) -> Self {
        if self.vars == rhs.vars || Arc::ptr_eq(&self.vars, &rhs.vars) {
            return rhs.clone();
        }
        if let Some(c) = rhs.as_constant() {
            return Self::constant(&self.vars, c);
        }
        panic!("variable table mismatch: {:?} vs {:?}", self.vars.names(), rhs.vars.names());
    }

    pub fn constant_term(&self) -> K {
        self.terms
            .get(&vec![0; self.vars.len()])
            .cloned()
            .unwrap_or_else(K::zero)
    }

    /// As a constant scalar, if the polynomial is one.
    pub fn as_constant(&self) -> Option<K> {
        if self.is_constant() {
            Some(self.constant_term())
        } else {
            None
        }
    }

    /// Degree range (min, max) of `var` across all terms; None if zero poly.
    pub fn degree_range(&self, var: usize) -> Option<(i32, i32)> {
        let mut r: Option<(i32, i32)> = None;
        for e in self.terms.keys() {
            let d = e.get(var).copied().unwrap_or(0);
            r = Some(match r {
                None => (d, d),
                Some((lo, hi)) => (lo.min(d), hi.max(d)),
            });
        }
        r
    }

    pub fn degree(&self, var: usize) -> i32 {
        self.degree_range(var).map(|(_, hi)| hi).unwrap_or(0)
    }

    pub fn min_degree(&self, var: usize) -> i32 {
        self.degree_range(var).map(|(lo, _)| lo).unwrap_or(0)
    }

    /// True when every exponent of `var` is >= 0.
    pub fn poly_in(&self, var: usize) -> bool {
        self.min_degree(var) >= 0
    }

    /// True when every exponent of `var` is <= 0.
    pub fn inv_poly_in(&self, var: usize) -> bool {
        self.degree(var) <= 0
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero_over(&self.vars);
        }
        let mut terms = BTreeMap::new();
        for (e, k) in &self.terms {
            let v = k.clone() * c.clone();
            if !v.is_zero() {
                terms.insert(e.clone(), v);
            }
        }
        LaurentPoly { vars: self.vars.clone(), terms }
    }

    /// Multiply by a single monomial.
    pub fn mul_monomial(&self, exps: &Exps, c: &K) -> Self {
        let mut terms = BTreeMap::new();
        for (e, k) in &self.terms {
            let v = k.clone() * c.clone();
            if v.is_zero() {
                continue;
            }
            let ne: Exps = e.iter().zip(exps).map(|(a, b)| a + b).collect();
            terms.insert(ne, v);
        }
        LaurentPoly { vars: self.vars.clone(), terms }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one_over(&self.vars);
        for _ in 0..n {
            acc = acc * self.clone();
        }
        acc
    }

    /// Coefficient of `var^d`, as a polynomial in the remaining variables.
    pub fn coeff_of(&self, var: usize, d: i32) -> Self {
        let mut out = Self::zero_over(&self.vars);
        for (e, k) in &self.terms {
            if e.get(var).copied().unwrap_or(0) == d {
                let mut ne = e.clone();
                if var < ne.len() {
                    ne[var] = 0;
                }
                out.insert_term(ne, k.clone());
            }
        }
        out
    }

    /// Split into (part with negative `var`-degree, part with degree >= 0).
    pub fn split_at_zero(&self, var: usize) -> (Self, Self) {
        let mut neg = Self::zero_over(&self.vars);
        let mut pos = Self::zero_over(&self.vars);
        for (e, k) in &self.terms {
            if e.get(var).copied().unwrap_or(0) < 0 {
                neg.insert_term(e.clone(), k.clone());
            } else {
                pos.insert_term(e.clone(), k.clone());
            }
        }
        (neg, pos)
    }

    /// Substitute each listed variable by a polynomial. Variables occurring
    /// with negative exponents require the substitute to be invertible.
    pub fn substitute(&self, subs: &BTreeMap<usize, LaurentPoly<K>>) -> Result<Self, RingError> {
        let mut out = Self::zero_over(&self.vars);
        for (e, k) in &self.terms {
            let mut term = Self::constant(&self.vars, k.clone());
            let mut rest: Exps = e.clone();
            for (&v, sub) in subs {
                let d = e.get(v).copied().unwrap_or(0);
                if v < rest.len() {
                    rest[v] = 0;
                }
                if d == 0 {
                    continue;
                }
                if d > 0 {
                    term = term * sub.pow(d as u32);
                } else {
                    let inv = sub.invert().ok_or_else(|| {
                        RingError::NonUnit(format!(
                            "substitution of a non-unit into {}^{}",
                            self.vars.name(v),
                            d
                        ))
                    })?;
                    term = term * inv.pow((-d) as u32);
                }
            }
            out = out + term.mul_monomial(&rest, &K::one());
        }
        Ok(out)
    }

    /// Substitute one variable.
    pub fn subst_var(&self, var: usize, value: &LaurentPoly<K>) -> Result<Self, RingError> {
        let mut m = BTreeMap::new();
        m.insert(var, value.clone());
        self.substitute(&m)
    }

    /// Invert when the polynomial is a unit: a single term with unit
    /// coefficient whose non-monomial part is empty (unit monomials), or a
    /// constant unit of the scalar ring.
    pub fn invert(&self) -> Option<Self> {
        if self.terms.len() == 1 {
            let (e, k) = self.terms.iter().next().unwrap();
            let ok = e
                .iter()
                .enumerate()
                .all(|(i, &x)| x == 0 || self.vars.is_laurent(i));
            if ok {
                if let Some(ki) = k.inv() {
                    let ne: Exps = e.iter().map(|x| -x).collect();
                    return Some(Self::monomial(&self.vars, ne, ki));
                }
            }
            return None;
        }
        // Dual-number-style local scalars allow units with nilpotent tails
        // only at the constant level; handled by as_constant.
        if let Some(c) = self.as_constant() {
            return c.inv().map(|ci| Self::constant(&self.vars, ci));
        }
        None
    }

    /// Evaluate all variables at scalar values.
    pub fn eval_all(&self, vals: &[K]) -> Result<K, RingError> {
        assert_eq!(vals.len(), self.vars.len());
        let mut acc = K::zero();
        for (e, k) in &self.terms {
            let mut t = k.clone();
            for (i, &d) in e.iter().enumerate() {
                if d == 0 {
                    continue;
                }
                let base = if d > 0 {
                    vals[i].clone()
                } else {
                    vals[i]
                        .inv()
                        .ok_or_else(|| RingError::NonUnit("evaluation at non-unit".into()))?
                };
                for _ in 0..d.abs() {
                    t = t * base.clone();
                }
            }
            acc = acc + t;
        }
        Ok(acc)
    }

    /// Map scalars through a ring homomorphism.
    pub fn map_scalars<L: Scalar>(&self, f: &impl Fn(&K) -> L) -> LaurentPoly<L> {
        let mut terms = BTreeMap::new();
        for (e, k) in &self.terms {
            let v = f(k);
            if !v.is_zero() {
                terms.insert(e.clone(), v);
            }
        }
        LaurentPoly { vars: self.vars.clone(), terms }
    }

    /// Move to another variable table; `map[i]` is the index in `to` of the
    /// i-th variable here. Fails on exponent-flag mismatch.
    pub fn relabel(&self, to: &Arc<VarSet>, map: &[usize]) -> Self {
        let mut terms = BTreeMap::new();
        for (e, k) in &self.terms {
            let mut ne = vec![0; to.len()];
            for (i, &d) in e.iter().enumerate() {
                if d != 0 {
                    ne[map[i]] = d;
                    assert!(d >= 0 || to.is_laurent(map[i]), "laurent flag mismatch in relabel");
                }
            }
            terms.insert(ne, k.clone());
        }
        LaurentPoly { vars: to.clone(), terms }
    }

    /// Exact division by `d` (single-divisor reduction). Returns None when
    /// `d` does not divide `self` over the scalar field. Requires both to be
    /// genuine polynomials in all variables.
    pub fn div_exact_poly(&self, d: &Self) -> Option<Self> {
        assert_eq!(self.vars, d.vars);
        if self.terms.is_empty() {
            return Some(Self::zero_over(&self.vars));
        }
        if d.terms.is_empty() {
            return None;
        }
        // leading term of d in the BTreeMap (lex) order: take the maximal key
        let (dl, dc) = d.terms.iter().next_back().unwrap();
        let dci = dc.inv()?;
        let mut rem = self.clone();
        let mut quo = Self::zero_over(&self.vars);
        let budget = self.terms.len() * (d.terms.len() + 2) * 64 + 1024;
        let mut steps = 0usize;
        while !rem.terms.is_empty() {
            steps += 1;
            if steps > budget {
                return None;
            }
            let (rl, rc) = rem.terms.iter().next_back().unwrap();
            let q: Exps = rl.iter().zip(dl).map(|(a, b)| a - b).collect();
            if q.iter().enumerate().any(|(i, &x)| x < 0 && !self.vars.is_laurent(i)) {
                return None;
            }
            let qc = rc.clone() * dci.clone();
            let mono = Self::monomial(&self.vars, q, qc);
            rem = rem - mono.clone() * d.clone();
            quo = quo + mono;
        }
        Some(quo)
    }
}

impl<K: Scalar> Add for LaurentPoly<K> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        if self.vars != rhs.vars {
            if let Some(c) = self.as_constant() {
                let mut out = rhs;
                out.insert_term(vec![0; out.vars.len()], c);
                return out;
            }
            let r = self.unify(&rhs);
            return self + r;
        }
        let mut out = self;
        for (e, k) in rhs.terms {
            out.insert_term(e, k);
        }
        out
    }
}
impl<K: Scalar> Sub for LaurentPoly<K> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}
impl<K: Scalar> Neg for LaurentPoly<K> {
    type Output = Self;
    fn neg(self) -> Self {
        let terms = self.terms.into_iter().map(|(e, k)| (e, -k)).collect();
        LaurentPoly { vars: self.vars, terms }
    }
}
impl<K: Scalar> Mul for LaurentPoly<K> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.vars != rhs.vars {
            if self.is_constant() {
                let l = rhs.unify(&self);
                return l * rhs;
            }
            let r = self.unify(&rhs);
            return self * r;
        }
        let mut out = Self::zero_over(&self.vars);
        for (e1, k1) in &self.terms {
            for (e2, k2) in &rhs.terms {
                let c = k1.clone() * k2.clone();
                if c.is_zero() {
                    continue;
                }
                let e: Exps = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.insert_term(e, c);
            }
        }
        out
    }
}

impl<K: Scalar> Zero for LaurentPoly<K> {
    fn zero() -> Self {
        // Zero over the empty variable set; ops assert matching tables, so
        // this is only useful as a sentinel.
        LaurentPoly { vars: VarSet::poly(&[]), terms: BTreeMap::new() }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

// Polynomials form a scalar ring themselves, so matrices and words can be
// carried uniformly over `LaurentPoly<K>` entries. Context-free constants
// live over the empty variable table and unify on contact.
impl<K: Scalar> Scalar for LaurentPoly<K> {
    fn inv(&self) -> Option<Self> {
        self.invert()
    }
    fn from_i64(n: i64) -> Self {
        Self::constant(&VarSet::poly(&[]), K::from_i64(n))
    }
    fn characteristic() -> u64 {
        K::characteristic()
    }
    fn ring_name() -> String {
        format!("{}[vars]", K::ring_name())
    }
}

impl<K: Scalar> One for LaurentPoly<K> {
    fn one() -> Self {
        Self::one_over(&VarSet::poly(&[]))
    }
    fn is_one(&self) -> bool {
        LaurentPoly::is_one(self)
    }
}

impl<K: Scalar> Display for LaurentPoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        // Highest term first, for readability.
        for (e, k) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut parts: Vec<String> = Vec::new();
            let trivial = e.iter().all(|&x| x == 0);
            if !k.is_one() || trivial {
                parts.push(format!("{k}"));
            }
            for (i, &d) in e.iter().enumerate() {
                if d == 1 {
                    parts.push(self.vars.name(i).to_string());
                } else if d != 0 {
                    parts.push(format!("{}^{}", self.vars.name(i), d));
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl<K: Scalar> fmt::Debug for LaurentPoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64) -> Rational {
        Rational::new(n, 1)
    }

    #[test]
    fn product_difference_of_squares() {
        let vs = VarSet::poly(&["X"]);
        let x = LaurentPoly::<Rational>::var(&vs, "X");
        let one = LaurentPoly::one_over(&vs);
        let p = (x.clone() + one.clone()) * (x.clone() - one.clone());
        let expect = x.clone() * x - LaurentPoly::one_over(&vs);
        assert_eq!(p, expect);
    }

    #[test]
    fn laurent_substitution_at_one() {
        let vs = VarSet::laurent(&["X"]);
        let p = LaurentPoly::<Rational>::var_pow(&vs, "X", 1) + LaurentPoly::var_pow(&vs, "X", -1);
        let v = p.eval_all(&[q(1)]).unwrap();
        assert_eq!(v, q(2));
    }

    #[test]
    fn substitution_is_multiplicative() {
        let vs = VarSet::poly(&["X", "Y"]);
        let x = LaurentPoly::<Rational>::var(&vs, "X");
        let y = LaurentPoly::var(&vs, "Y");
        let a = x.clone() * x.clone() + y.clone();
        let b = x.clone() - y.clone() * y.clone();
        let sub = x.clone() * x.clone() + LaurentPoly::int(&vs, 3);
        let xi = vs.index_of("X").unwrap();
        let lhs = (a.clone() * b.clone()).subst_var(xi, &sub).unwrap();
        let rhs = a.subst_var(xi, &sub).unwrap() * b.subst_var(xi, &sub).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn exact_division_detects_divisibility() {
        let vs = VarSet::poly(&["X", "Y"]);
        let x = LaurentPoly::<Rational>::var(&vs, "X");
        let y = LaurentPoly::var(&vs, "Y");
        let d = x.clone() + y.clone();
        let p = d.clone() * (x.clone() * y.clone() - LaurentPoly::int(&vs, 2));
        let q = p.div_exact_poly(&d).unwrap();
        assert_eq!(q * d.clone(), p);
        let not_div = x.clone() * y + LaurentPoly::int(&vs, 1);
        assert!(not_div.div_exact_poly(&d).is_none());
    }
}
