//! Exact coefficient arithmetic: Laurent polynomials, localizations,
//! rational functions, and ideal reductions.

pub mod frac;
pub mod grammar;
pub mod localized;
pub mod poly;
pub mod uni;

use num_traits::Zero;

use crate::error::RingError;
use crate::scalar::{Dual, Scalar, ScalarField};
use poly::LaurentPoly;

/// Ideals supported by [`reduce_mod_ideal`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdealSpec {
    /// The ideal (t) in a dual-number coefficient ring.
    DualT,
    /// The ideal generated by the named variables.
    Vars(Vec<String>),
}

/// Canonical representative of `p` modulo the ideal.
pub fn reduce_mod_ideal<K: Scalar>(
    p: &LaurentPoly<K>,
    ideal: &IdealSpec,
) -> Result<LaurentPoly<K>, RingError> {
    match ideal {
        IdealSpec::DualT => Err(RingError::UnsupportedIdeal(
            "(t) reduction requires dual-number coefficients; use reduce_dual_mod_t".into(),
        )),
        IdealSpec::Vars(names) => {
            let mut out = p.clone();
            for n in names {
                let i = out
                    .vars
                    .index_of(n)
                    .ok_or_else(|| RingError::UnsupportedIdeal(format!("unknown variable {n}")))?;
                if !out.poly_in(i) {
                    return Err(RingError::UnsupportedIdeal(format!(
                        "variable {n} occurs with negative exponents"
                    )));
                }
                out = out.subst_var(i, &LaurentPoly::zero_over(&out.vars))?;
            }
            Ok(out)
        }
    }
}

/// Reduction of dual-number coefficients modulo (t).
pub fn reduce_dual_mod_t<K: ScalarField>(p: &LaurentPoly<Dual<K>>) -> LaurentPoly<K> {
    p.map_scalars(&|d| d.reduce_mod_t())
}

/// Embedding along `K -> K[t]/(t^2)`.
pub fn lift_to_dual<K: ScalarField>(p: &LaurentPoly<K>) -> LaurentPoly<Dual<K>> {
    p.map_scalars(&|c| Dual::from_re(c.clone()))
}

/// Membership test `p ∈ <vars> · A[vars]`.
pub fn in_variable_ideal<K: Scalar>(p: &LaurentPoly<K>, names: &[String]) -> bool {
    reduce_mod_ideal(p, &IdealSpec::Vars(names.to_vec()))
        .map(|r| r.is_zero())
        .unwrap_or(false)
}

/// Partial fractions over comaximal powers: writes `num / (f g)^k` as
/// `a / f^k + b / g^k`, given `gcd(f, g) = 1` in the single variable `v`.
pub fn partial_fractions<K: ScalarField>(
    num: &LaurentPoly<K>,
    f: &LaurentPoly<K>,
    g: &LaurentPoly<K>,
    k: u32,
    v: usize,
) -> Option<(LaurentPoly<K>, LaurentPoly<K>)> {
    // 1 = s f^k + t g^k  =>  num/(fg)^k = (num t)/f^k + (num s)/g^k
    let (s, t) = uni::bezout_powers(f, g, k, v)?;
    Some((num.clone() * t, num.clone() * s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::localized::Localized;
    use crate::rings::poly::VarSet;
    use crate::scalar::Rational;


    #[test]
    fn mod_t_and_mod_var() {
        let vs = VarSet::poly(&["X"]);
        let x = LaurentPoly::<Dual<Rational>>::var(&vs, "X");
        let t = LaurentPoly::constant(&vs, Dual::t());
        let p = x.clone() + t.clone() * x.clone() * x.clone();
        let r = reduce_dual_mod_t(&p);
        assert_eq!(r, LaurentPoly::<Rational>::var(&vs, "X"));

        // X^2 + X mod (X) = 0
        let q = LaurentPoly::<Rational>::var(&vs, "X");
        let q2 = q.clone() * q.clone() + q.clone();
        assert!(in_variable_ideal(&q2, &["X".to_string()]));
        let q3 = q2 + LaurentPoly::one_over(&vs);
        assert!(!in_variable_ideal(&q3, &["X".to_string()]));
    }

    #[test]
    fn partial_fractions_clear_check() {
        // 1/(Y(1-Y)) = 1/Y + 1/(1-Y)
        let vs = VarSet::poly(&["Y"]);
        let y = LaurentPoly::<Rational>::var(&vs, "Y");
        let one = LaurentPoly::one_over(&vs);
        let f = y.clone();
        let g = one.clone() - y.clone();
        let (a, b) = partial_fractions(&one, &f, &g, 1, 0).unwrap();
        // a/f + b/g over the base f*g
        let base = f.clone() * g.clone();
        let lhs = Localized::new(one.clone(), base.clone(), 1);
        let rhs = Localized::new(a * g.clone(), base.clone(), 1)
            + Localized::new(b * f.clone(), base.clone(), 1);
        assert_eq!(lhs, rhs);
        assert!(lhs.num.is_one() || lhs.pow == 1);
    }
}
