//! Splitting words over a doubly localized ring along a comaximal pair.

use num_traits::Zero;

use crate::decomp::shrink::{den_pattern_ok, shift_apply, shift_prepare, subst_word_var};
use crate::error::GroupError;
use crate::relgrp::{RelLetter, RelSystem, RelWord};
use crate::rings::frac::RatFrac;
use crate::rings::poly::LaurentPoly;
use crate::rings::uni;
use crate::scalar::ScalarField;

/// Split `x` (a word with denominators in powers of `f g`) into a word with
/// `f`-denominators only followed by one with `g`-denominators only, their
/// product evaluating to `x` exactly.
///
/// The variable table must reserve three scratch variables (a homotopy
/// variable and two shift internals), given by `tvar`, `yvar`, `zvar`; `f`
/// and `g` must be comaximal univariate polynomials in `uvar`.
#[allow(clippy::too_many_arguments)]
pub fn suslin_factor<K: ScalarField>(
    sys: &RelSystem,
    x: &RelWord<RatFrac<K>>,
    f: &LaurentPoly<K>,
    g: &LaurentPoly<K>,
    uvar: usize,
    tvar: usize,
    yvar: usize,
    zvar: usize,
) -> Result<(RelWord<RatFrac<K>>, RelWord<RatFrac<K>>, u32), GroupError> {
    // comaximality check
    let (gcd, _, _) = uni::ext_gcd(f, g, uvar);
    if !gcd.is_one() {
        return Err(GroupError::Rejected(
            "the denominators are not comaximal".into(),
        ));
    }
    // trivial case: no denominators at all
    let no_denoms = x.letters.iter().all(|l| match l {
        RelLetter::X { v, .. } => v.iter().all(|p| p.den.is_one()),
        RelLetter::Chi { u, .. } => u.den.is_one(),
    });
    if no_denoms {
        return Ok((x.clone(), RelWord::empty(), 0));
    }
    // homotopy x(T): scale every letter parameter by T
    let vars = f.vars.clone();
    let tmono = LaurentPoly::<K>::var_pow(&vars, vars.name(tvar), 1);
    let xt = x.map_params(&|p: &RatFrac<K>| {
        RatFrac::new(p.num.clone() * tmono.clone(), p.den.clone())
    });
    // prepared shifts for both localizations
    let prep_g = shift_prepare(sys, &xt, tvar, yvar, zvar, g, Some(f))?;
    let prep_f = shift_prepare(sys, &xt, tvar, yvar, zvar, f, Some(g))?;
    let kk = prep_g.k.max(prep_f.k);
    // 1 = f^K s + g^K t
    let (s, _t) = uni::bezout_powers(f, g, kk, uvar).ok_or_else(|| {
        GroupError::Rejected("comaximality witness unavailable".into())
    })?;
    let c = f.pow(kk) * s;
    let one = LaurentPoly::<K>::one_over(&vars);
    let zero = LaurentPoly::<K>::zero_over(&vars);
    // x = [x(T) x(cT)^{-1}] [x(cT)] at T = 1;
    // 1 - c = g^K t, so the first bracket shifts over s := g (f-denominators
    // stay); c - 0 = f^K s, the second shifts over s := f.
    let x1 = shift_apply(&prep_g, &one, &c)?;
    let x2 = shift_apply(&prep_f, &c, &zero)?;
    let x1 = subst_word_var(&x1, tvar, &one).simplify();
    let x2 = subst_word_var(&x2, tvar, &one).simplify();
    // pattern checks
    for l in &x1.letters {
        if let RelLetter::X { v, .. } = l {
            for p in v {
                if !den_pattern_ok(p, Some(f)) {
                    return Err(GroupError::Rejected(
                        "internal: first part escapes the f-pattern".into(),
                    ));
                }
            }
        }
    }
    for l in &x2.letters {
        if let RelLetter::X { v, .. } = l {
            for p in v {
                if !den_pattern_ok(p, Some(g)) {
                    return Err(GroupError::Rejected(
                        "internal: second part escapes the g-pattern".into(),
                    ));
                }
            }
        }
    }
    // exact reassembly
    let lhs = sys.evaluate(&x1.concat(&x2))?;
    let rhs = sys.evaluate(x)?;
    if !lhs.eq_exact(&rhs) {
        return Err(GroupError::Rejected("internal: suslin parts mismatch".into()));
    }
    Ok((x1, x2, kk))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::poly::VarSet;
    use crate::rootsys::TypeLabel;
    use crate::scalar::Rational;

    type P = LaurentPoly<Rational>;
    type F = RatFrac<Rational>;

    fn setup() -> (RelSystem, std::sync::Arc<VarSet>, P, P) {
        let sys = RelSystem::split(TypeLabel::A(2)).unwrap();
        let vs = VarSet::poly(&["Y", "T", "YY", "ZZ"]);
        let y = P::var(&vs, "Y");
        let one = P::one_over(&vs);
        (sys, vs.clone(), y.clone(), one - y)
    }

    #[test]
    fn partial_fraction_letter_splits() {
        let (sys, _vs, f, g) = setup();
        // x = X_a(1/(Y(1-Y)))
        let fg = f.clone() * g.clone();
        let one = P::one_over(&f.vars);
        let x = RelWord::single(vec![1, 0], vec![F::new(one, fg)]);
        let (x1, x2, _) = suslin_factor(&sys, &x, &f, &g, 0, 1, 2, 3).unwrap();
        assert!(!x1.is_empty() || !x2.is_empty());
    }

    #[test]
    fn word_without_denominators_passes_through() {
        let (sys, _vs, f, g) = setup();
        let y = f.clone();
        let x = RelWord::single(vec![1, 0], vec![F::from_poly(y)]);
        let (x1, x2, k) = suslin_factor(&sys, &x, &f, &g, 0, 1, 2, 3).unwrap();
        assert_eq!(k, 0);
        assert_eq!(x1, x);
        assert!(x2.is_empty());
    }

    #[test]
    fn non_comaximal_rejected() {
        let (sys, _vs, f, _g) = setup();
        let x = RelWord::single(vec![1, 0], vec![F::from_poly(f.clone())]);
        let f2 = f.clone() * f.clone();
        assert!(suslin_factor(&sys, &x, &f, &f2, 0, 1, 2, 3).is_err());
    }

    #[test]
    fn random_word_splits_and_reassembles() {
        let (sys, _vs, f, g) = setup();
        let fg = f.clone() * g.clone();
        let one = P::one_over(&f.vars);
        let roots = [vec![1, 0], vec![0, 1], vec![1, 1], vec![-1, 0]];
        let mut letters = Vec::new();
        for (i, r) in roots.iter().enumerate() {
            let num = if i % 2 == 0 { f.clone() + one.clone() } else { one.clone() };
            letters.push(RelLetter::X {
                alpha: r.clone(),
                v: vec![F::new(num, fg.clone())],
            });
        }
        let x = RelWord { letters };
        let (x1, x2, _) = suslin_factor(&sys, &x, &f, &g, 0, 1, 2, 3).unwrap();
        let lhs = sys.evaluate(&x1.concat(&x2)).unwrap();
        let rhs = sys.evaluate(&x).unwrap();
        assert!(lhs.eq_exact(&rhs));
    }
}
