//! Exact scalar carriers: rationals, prime fields, dual numbers, and
//! rational-function fields, all behind one [`Scalar`] trait.

use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use num::BigRational;
use num_traits::{One, Zero};

/// An exact commutative ring with decidable equality and unit inversion.
///
/// All carriers here are local rings: an element is either a unit or lies in
/// the unique maximal ideal, so `inv` doubles as the unit test.
pub trait Scalar:
    Clone
    + PartialEq
    + Eq
    + Debug
    + Display
    + Hash
    + Ord
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Multiplicative inverse, `None` when the element is not a unit.
    fn inv(&self) -> Option<Self>;

    /// Ring map from the integers.
    fn from_i64(n: i64) -> Self;

    /// Characteristic of the ring (0 or p >= 5 here).
    fn characteristic() -> u64;

    /// Short name used in ring declarations of certificates.
    fn ring_name() -> String;

    fn is_unit(&self) -> bool {
        self.inv().is_some()
    }

    /// Exact division; `None` when `d` is not a unit.
    fn div_exact(&self, d: &Self) -> Option<Self> {
        d.inv().map(|i| self.clone() * i)
    }
}

/// Scalars that form a field. Dual numbers are excluded.
pub trait ScalarField: Scalar {}

// ---------------------------------------------------------------------------
// Rationals
// ---------------------------------------------------------------------------

/// Arbitrary-precision rational number.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(pub BigRational);

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        Rational(BigRational::new(num.into(), den.into()))
    }
}

impl Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Add for Rational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Rational(self.0 + rhs.0)
    }
}
impl Sub for Rational {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Rational(self.0 - rhs.0)
    }
}
impl Mul for Rational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Rational(self.0 * rhs.0)
    }
}
impl Neg for Rational {
    type Output = Self;
    fn neg(self) -> Self {
        Rational(-self.0)
    }
}
impl Zero for Rational {
    fn zero() -> Self {
        Rational(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}
impl One for Rational {
    fn one() -> Self {
        Rational(BigRational::one())
    }
}

impl Scalar for Rational {
    fn inv(&self) -> Option<Self> {
        if self.0.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }
    fn from_i64(n: i64) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }
    fn characteristic() -> u64 {
        0
    }
    fn ring_name() -> String {
        "Q".into()
    }
}
impl ScalarField for Rational {}

// ---------------------------------------------------------------------------
// Prime fields
// ---------------------------------------------------------------------------

/// The field with `P` elements, `P` an odd prime >= 5.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fp<const P: u64>(pub u64);

impl<const P: u64> Fp<P> {
    pub fn new(n: i64) -> Self {
        Fp(n.rem_euclid(P as i64) as u64)
    }
}

impl<const P: u64> Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}
impl<const P: u64> Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Fp((self.0 + rhs.0) % P)
    }
}
impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Fp((self.0 + P - rhs.0) % P)
    }
}
impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Fp((self.0 * rhs.0) % P)
    }
}
impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp((P - self.0) % P)
    }
}
impl<const P: u64> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}
impl<const P: u64> One for Fp<P> {
    fn one() -> Self {
        Fp(1)
    }
}

impl<const P: u64> Scalar for Fp<P> {
    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            return None;
        }
        // Fermat: a^(p-2) mod p.
        let mut base = self.0;
        let mut exp = P - 2;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % P;
            }
            base = base * base % P;
            exp >>= 1;
        }
        Some(Fp(acc))
    }
    fn from_i64(n: i64) -> Self {
        Fp::new(n)
    }
    fn characteristic() -> u64 {
        P
    }
    fn ring_name() -> String {
        format!("F{P}")
    }
}
impl<const P: u64> ScalarField for Fp<P> {}

// ---------------------------------------------------------------------------
// Dual numbers
// ---------------------------------------------------------------------------

/// Dual numbers `a + b t` with `t^2 = 0` over a field `K`: the smallest local
/// ring with nonzero maximal ideal `(t)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Dual<K> {
    pub re: K,
    pub eps: K,
}

impl<K: ScalarField> Dual<K> {
    pub fn new(re: K, eps: K) -> Self {
        Dual { re, eps }
    }
    pub fn t() -> Self {
        Dual { re: K::zero(), eps: K::one() }
    }
    pub fn from_re(re: K) -> Self {
        Dual { re, eps: K::zero() }
    }
    /// Reduction modulo the maximal ideal (t).
    pub fn reduce_mod_t(&self) -> K {
        self.re.clone()
    }
}

macro_rules! fmt_dual {
    () => {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            if self.eps.is_zero() {
                write!(f, "{}", self.re)
            } else if self.re.is_zero() {
                write!(f, "{}*t", self.eps)
            } else {
                write!(f, "{}+{}*t", self.re, self.eps)
            }
        }
    };
}

impl<K: ScalarField> Debug for Dual<K> {
    fmt_dual!();
}
impl<K: ScalarField> Display for Dual<K> {
    fmt_dual!();
}

impl<K: ScalarField> Add for Dual<K> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Dual { re: self.re + rhs.re, eps: self.eps + rhs.eps }
    }
}
impl<K: ScalarField> Sub for Dual<K> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Dual { re: self.re - rhs.re, eps: self.eps - rhs.eps }
    }
}
impl<K: ScalarField> Mul for Dual<K> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Dual {
            re: self.re.clone() * rhs.re.clone(),
            eps: self.re * rhs.eps + self.eps * rhs.re,
        }
    }
}
impl<K: ScalarField> Neg for Dual<K> {
    type Output = Self;
    fn neg(self) -> Self {
        Dual { re: -self.re, eps: -self.eps }
    }
}
impl<K: ScalarField> Zero for Dual<K> {
    fn zero() -> Self {
        Dual { re: K::zero(), eps: K::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.eps.is_zero()
    }
}
impl<K: ScalarField> One for Dual<K> {
    fn one() -> Self {
        Dual { re: K::one(), eps: K::zero() }
    }
}

impl<K: ScalarField> Scalar for Dual<K> {
    fn inv(&self) -> Option<Self> {
        // (a+bt)^{-1} = a^{-1} - a^{-2} b t, unit iff a is.
        let ai = self.re.inv()?;
        Some(Dual {
            re: ai.clone(),
            eps: -(ai.clone() * ai * self.eps.clone()),
        })
    }
    fn from_i64(n: i64) -> Self {
        Dual { re: K::from_i64(n), eps: K::zero() }
    }
    fn characteristic() -> u64 {
        K::characteristic()
    }
    fn ring_name() -> String {
        format!("{}[t]/(t^2)", K::ring_name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type F7 = Fp<7>;

    #[test]
    fn fp_field_ops() {
        let a = F7::new(3);
        let b = F7::new(5);
        assert_eq!(a + b, F7::new(1));
        assert_eq!(a * b, F7::new(1));
        assert_eq!(a.inv().unwrap() * a, F7::one());
        assert!(F7::zero().inv().is_none());
    }

    #[test]
    fn dual_t_squares_to_zero() {
        let t = Dual::<Rational>::t();
        assert!((t.clone() * t).is_zero());
    }

    #[test]
    fn dual_multiplication_rule() {
        // (a+bt)(c+dt) = ac + (ad+bc) t
        let x = Dual::new(Rational::new(2, 1), Rational::new(3, 1));
        let y = Dual::new(Rational::new(5, 1), Rational::new(-1, 1));
        let z = x * y;
        assert_eq!(z.re, Rational::new(10, 1));
        assert_eq!(z.eps, Rational::new(13, 1));
    }

    #[test]
    fn dual_units_are_exactly_nonzero_residue() {
        let u = Dual::new(Rational::new(2, 1), Rational::new(7, 1));
        let v = u.inv().unwrap();
        assert!((u * v).is_one());
        let n = Dual::new(Rational::zero(), Rational::one());
        assert!(n.inv().is_none());
    }
}
