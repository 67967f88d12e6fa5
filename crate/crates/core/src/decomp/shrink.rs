//! Dilation of congruence words to clear localized denominators, and the
//! induced congruence shifts.

use num_traits::Zero;

use crate::decomp::rewrite::RewriteBudget;
use crate::error::GroupError;
use crate::relgrp::{RelLetter, RelSystem, RelWord, SplitIdeal};
use crate::rings::frac::RatFrac;
use crate::rings::poly::LaurentPoly;
use crate::scalar::ScalarField;

/// Budget scale hook (`ISOK1_BUDGET_SCALE`).
pub fn budget_scale() -> f64 {
    std::env::var("ISOK1_BUDGET_SCALE")
        .ok()
        .and_then(|v| v.parse::<f64>().ok())
        .filter(|v| *v > 0.0)
        .unwrap_or(1.0)
}

/// Exponent deepening schedule: 1, 2, 4, ..., 64 (scaled).
pub fn exponent_schedule() -> Vec<u32> {
    let scale = budget_scale();
    let top = ((64.0 * scale).round() as u32).max(1);
    let mut out = vec![];
    let mut k = 1;
    while k <= top {
        out.push(k);
        k *= 2;
    }
    out
}

pub fn subst_frac_var<K: ScalarField>(
    p: &RatFrac<K>,
    var: usize,
    by: &LaurentPoly<K>,
) -> RatFrac<K> {
    let num = p.num.subst_var(var, by).expect("polynomial substitution");
    let den = p.den.subst_var(var, by).expect("polynomial substitution");
    RatFrac::new(num, den)
}

pub fn subst_word_var<K: ScalarField>(
    w: &RelWord<RatFrac<K>>,
    var: usize,
    by: &LaurentPoly<K>,
) -> RelWord<RatFrac<K>> {
    w.map_params(&|p| subst_frac_var(p, var, by))
}

/// Does the reduced denominator divide a power of `f` (times a power of the
/// optional `allowed` element)?
pub fn den_pattern_ok<K: ScalarField>(
    p: &RatFrac<K>,
    allowed: Option<&LaurentPoly<K>>,
) -> bool {
    let mut den = p.den.clone();
    if den.is_one() {
        return true;
    }
    if let Some(a) = allowed {
        for _ in 0..64 {
            if den.is_one() {
                return true;
            }
            match den.div_exact_poly(a) {
                Some(q) => den = q,
                None => break,
            }
        }
    }
    den.is_one() || den.as_constant().map(|c| c.is_unit()).unwrap_or(false)
}

fn word_den_ok<K: ScalarField>(
    w: &RelWord<RatFrac<K>>,
    allowed: Option<&LaurentPoly<K>>,
) -> bool {
    w.letters.iter().all(|l| match l {
        RelLetter::X { v, .. } => v.iter().all(|p| den_pattern_ok(p, allowed)),
        RelLetter::Chi { u, .. } => den_pattern_ok(u, allowed),
    })
}

/// Rewrite `g(Z)` (congruent to 1 mod Z, denominators in powers of `s`) into
/// a word `h` free of `s`-denominators with `h(Z) = g(s^k Z)` exactly.
/// Returns `(h, k)` with `k` minimal along the deepening schedule.
pub fn dilation_shrink<K: ScalarField>(
    sys: &RelSystem,
    g: &RelWord<RatFrac<K>>,
    zvar: usize,
    s: &LaurentPoly<K>,
    allowed: Option<&LaurentPoly<K>>,
) -> Result<(RelWord<RatFrac<K>>, u32), GroupError> {
    if sys.rrd.rank < 2 {
        return Err(GroupError::Rejected(
            "dilation requires relative rank at least 2".into(),
        ));
    }
    // denominators must be free of the congruence variable
    for l in &g.letters {
        if let RelLetter::X { v, .. } = l {
            for p in v {
                if p.den.degree(zvar) != 0 {
                    return Err(GroupError::Rejected(
                        "denominators may not involve the congruence variable".into(),
                    ));
                }
            }
        }
    }
    let ideal = SplitIdeal::<RatFrac<K>>::frac_var(zvar, "Z");
    let gens = sys.congruence_normal_form(g, &ideal)?;
    let geval = sys.evaluate(g)?;
    let budget = RewriteBudget::default();
    for k in exponent_schedule() {
        let sk = s.pow(k);
        let split_pow = s.pow(k / 2 + 1);
        let split = RatFrac::from_poly(split_pow.clone());
        // substitute Z -> s^k Z in a polynomial: Z * s^k as the image
        let zimg = {
            let mut e = vec![0i32; sk.vars.len()];
            e[zvar] = 1;
            LaurentPoly::monomial(&sk.vars, e, crate::scalar::Scalar::from_i64(1)) * sk.clone()
        };
        let mut out = RelWord::empty();
        let mut ok = true;
        for gen in &gens {
            let mid = {
                let mut w = RelWord::empty();
                for (i, blk) in gen.params.iter().enumerate() {
                    let ka: Vec<i32> =
                        gen.alpha.iter().map(|&x| x * (i as i32 + 1)).collect();
                    let dil: Vec<RatFrac<K>> =
                        blk.iter().map(|p| subst_frac_var(p, zvar, &zimg)).collect();
                    if dil.iter().any(|p| !p.is_zero()) {
                        w.letters.push(RelLetter::X { alpha: ka, v: dil });
                    }
                }
                w
            };
            match sys.expand_conjugation(&gen.conj, &mid, &split, &budget) {
                Ok(w) => out = out.concat(&w),
                Err(GroupError::Budget(m)) => return Err(GroupError::Budget(m)),
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok || !word_den_ok(&out, allowed) {
            continue;
        }
        // exactness: evaluate(h) must equal evaluate(g) at Z -> s^k Z
        let target = geval.map(&|p: &RatFrac<K>| subst_frac_var(p, zvar, &zimg));
        let heval = sys.evaluate(&out)?;
        if !heval.eq_exact(&target) {
            return Err(GroupError::Rejected(
                "internal: dilated word mismatch".into(),
            ));
        }
        return Ok((out.simplify(), k));
    }
    Err(GroupError::Budget("dilation exponent schedule exhausted".into()))
}

/// Prepared congruence shift: `h(Z)` with `h = f(s^k Z)` for the homotopy
/// `f(Z) = g(X(Y+Z)) g(XY)^{-1}`.
pub struct ShiftPrep<K: ScalarField> {
    pub h: RelWord<RatFrac<K>>,
    pub k: u32,
    pub xvar: usize,
    pub yvar: usize,
    pub zvar: usize,
    pub s: LaurentPoly<K>,
}

/// Phase one of the congruence shift: independent of the endpoints `a, b`.
pub fn shift_prepare<K: ScalarField>(
    sys: &RelSystem,
    g: &RelWord<RatFrac<K>>,
    xvar: usize,
    yvar: usize,
    zvar: usize,
    s: &LaurentPoly<K>,
    allowed: Option<&LaurentPoly<K>>,
) -> Result<ShiftPrep<K>, GroupError> {
    let vars = match g.letters.first() {
        Some(RelLetter::X { v, .. }) => v[0].num.vars.clone(),
        _ => s.vars.clone(),
    };
    let x = LaurentPoly::<K>::var_pow(&vars, vars.name(xvar), 1);
    let y = LaurentPoly::<K>::var_pow(&vars, vars.name(yvar), 1);
    let z = LaurentPoly::<K>::var_pow(&vars, vars.name(zvar), 1);
    // f(Z) = g(X(Y+Z)) * g(XY)^{-1}
    let xyz = x.clone() * (y.clone() + z.clone());
    let xy = x.clone() * y.clone();
    let g1 = subst_word_var(g, xvar, &xyz);
    let g2 = subst_word_var(g, xvar, &xy).inverse()?;
    let f = g1.concat(&g2);
    let (h, k) = dilation_shrink(sys, &f, zvar, s, allowed)?;
    Ok(ShiftPrep { h, k, xvar, yvar, zvar, s: s.clone() })
}

/// Phase two: specialize the prepared shift at endpoints `a ≡ b mod s^k`,
/// producing a word whose localization equals `g(aX) g(bX)^{-1}`.
pub fn shift_apply<K: ScalarField>(
    prep: &ShiftPrep<K>,
    a: &LaurentPoly<K>,
    b: &LaurentPoly<K>,
) -> Result<RelWord<RatFrac<K>>, GroupError> {
    let diff = a.clone() - b.clone();
    let sk = prep.s.pow(prep.k);
    let t = diff.div_exact_poly(&sk).ok_or_else(|| {
        GroupError::Rejected(format!(
            "endpoints are not congruent modulo the {}-th power of the localized element",
            prep.k
        ))
    })?;
    let w = subst_word_var(&prep.h, prep.yvar, b);
    let w = subst_word_var(&w, prep.zvar, &t);
    Ok(w.simplify())
}

/// One-call congruence shift with verification.
pub fn shift_congruence<K: ScalarField>(
    sys: &RelSystem,
    g: &RelWord<RatFrac<K>>,
    xvar: usize,
    yvar: usize,
    zvar: usize,
    s: &LaurentPoly<K>,
    allowed: Option<&LaurentPoly<K>>,
    a: &LaurentPoly<K>,
    b: &LaurentPoly<K>,
) -> Result<(RelWord<RatFrac<K>>, u32), GroupError> {
    let prep = shift_prepare(sys, g, xvar, yvar, zvar, s, allowed)?;
    let w = shift_apply(&prep, a, b)?;
    // verify against g(aX) g(bX)^{-1}
    let ga = subst_word_var(g, xvar, &{
        let mut e = vec![0i32; a.vars.len()];
        e[xvar] = 1;
        LaurentPoly::monomial(&a.vars, e, crate::scalar::Scalar::from_i64(1)) * a.clone()
    });
    let gb = subst_word_var(g, xvar, &{
        let mut e = vec![0i32; b.vars.len()];
        e[xvar] = 1;
        LaurentPoly::monomial(&b.vars, e, crate::scalar::Scalar::from_i64(1)) * b.clone()
    });
    let lhs = sys.evaluate(&w)?;
    let rhs = sys.evaluate(&ga)?.mul(&sys.evaluate(&gb)?.inverse().expect("group element"));
    if !lhs.eq_exact(&rhs) {
        return Err(GroupError::Rejected("internal: shifted word mismatch".into()));
    }
    Ok((w, prep.k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::poly::VarSet;
    use crate::rootsys::TypeLabel;
    use crate::scalar::Rational;

    type F = RatFrac<Rational>;

    fn frac(p: LaurentPoly<Rational>) -> F {
        RatFrac::from_poly(p)
    }

    #[test]
    fn shrink_single_letter_with_denominator() {
        let sys = RelSystem::split(TypeLabel::A(2)).unwrap();
        let vs = VarSet::poly(&["Y", "Z"]);
        let s = LaurentPoly::<Rational>::var(&vs, "Y");
        let z = LaurentPoly::<Rational>::var(&vs, "Z");
        // g = X_a(Z / s)
        let g = RelWord::single(
            vec![1, 0],
            vec![RatFrac::new(z.clone(), s.clone())],
        );
        let (h, k) = dilation_shrink(&sys, &g, 1, &s, None).unwrap();
        assert_eq!(k, 1);
        // h = X_a(Z) exactly
        let expect = RelWord::single(vec![1, 0], vec![frac(z.clone())]);
        assert!(sys
            .evaluate(&h)
            .unwrap()
            .eq_exact(&sys.evaluate(&expect).unwrap()));
    }

    #[test]
    fn shrink_no_denominator_is_k0_shape() {
        // without denominators the first schedule step succeeds; the word is
        // the dilated original
        let sys = RelSystem::split(TypeLabel::A(2)).unwrap();
        let vs = VarSet::poly(&["Y", "Z"]);
        let s = LaurentPoly::<Rational>::var(&vs, "Y");
        let z = LaurentPoly::<Rational>::var(&vs, "Z");
        let g = RelWord::single(vec![1, 0], vec![frac(z.clone())]);
        let (h, k) = dilation_shrink(&sys, &g, 1, &s, None).unwrap();
        let zimg = z.clone() * s.pow(k);
        let expect = RelWord::single(vec![1, 0], vec![frac(zimg)]);
        assert!(sys
            .evaluate(&h)
            .unwrap()
            .eq_exact(&sys.evaluate(&expect).unwrap()));
    }

    #[test]
    fn shrink_conjugated_generator() {
        // g = Z_alpha(X_{-alpha}(1/s), Z u): conjugator with denominators
        let sys = RelSystem::split(TypeLabel::A(2)).unwrap();
        let vs = VarSet::poly(&["Y", "Z", "u"]);
        let s = LaurentPoly::<Rational>::var(&vs, "Y");
        let z = LaurentPoly::<Rational>::var(&vs, "Z");
        let u = LaurentPoly::<Rational>::var(&vs, "u");
        let one = LaurentPoly::<Rational>::one_over(&vs);
        let conj = RelWord::single(vec![-1, 0], vec![RatFrac::new(one.clone(), s.clone())]);
        let mid = RelWord::single(vec![1, 0], vec![frac(z.clone() * u.clone())]);
        let g = conj.concat(&mid).concat(&conj.inverse().unwrap());
        let (h, k) = dilation_shrink(&sys, &g, 1, &s, None).unwrap();
        // verify F_s(h)(Z) = g(s^k Z) (checked internally); also k is small
        assert!(k <= 8);
        assert!(!h.letters.is_empty());
        // all parameters are denominator-free
        for l in &h.letters {
            if let RelLetter::X { v, .. } = l {
                for p in v {
                    assert!(p.den.is_one());
                }
            }
        }
    }

    #[test]
    fn shift_congruence_basic() {
        let sys = RelSystem::split(TypeLabel::A(2)).unwrap();
        let vs = VarSet::poly(&["Y", "X", "YY", "ZZ", "u"]);
        let s = LaurentPoly::<Rational>::var(&vs, "Y");
        let x = LaurentPoly::<Rational>::var(&vs, "X");
        // g = X_a(X/s) over A_s[X]
        let g = RelWord::single(vec![1, 0], vec![RatFrac::new(x.clone(), s.clone())]);
        let one = LaurentPoly::<Rational>::one_over(&vs);
        // a - b = s
        let a = one.clone() + s.clone();
        let b = one.clone();
        let (w, k) = shift_congruence(&sys, &g, 1, 2, 3, &s, None, &a, &b).unwrap();
        assert!(k >= 1);
        // the result is s-denominator-free
        for l in &w.letters {
            if let RelLetter::X { v, .. } = l {
                for p in v {
                    assert!(den_pattern_ok(p, None));
                }
            }
        }
        // a = b gives the empty-equivalent word
        let (w0, _) = shift_congruence(&sys, &g, 1, 2, 3, &s, None, &b, &b).unwrap();
        assert!(sys.evaluate(&w0).unwrap().is_identity());
    }
}
