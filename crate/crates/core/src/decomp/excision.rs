//! Splitting a word over `A_h` into a part over `A` and a part over `B_h`,
//! for a subring `B` of `A` surjecting onto `A/Ah`.

use num_traits::Zero;

use crate::decomp::rewrite::RewriteBudget;
use crate::decomp::shrink::exponent_schedule;
use crate::error::GroupError;
use crate::relgrp::{eval_map_at, RelLetter, RelSystem, RelWord};
use crate::rings::frac::RatFrac;
use crate::rings::poly::LaurentPoly;
use crate::scalar::ScalarField;

/// The ring pair data: `B ⊆ A`, `h ∈ B`, with a section of `B -> A/Ah`.
pub struct ExcisionData<K: ScalarField> {
    /// The localized element.
    pub h: LaurentPoly<K>,
    /// B-part of an element of `A` modulo `h A` (a polynomial in `B`).
    pub section: Box<dyn Fn(&LaurentPoly<K>) -> LaurentPoly<K> + Send + Sync>,
    /// Membership test for `A` (reduced fractions allowed in `A`).
    pub in_a: Box<dyn Fn(&RatFrac<K>) -> bool + Send + Sync>,
    /// Membership test for `B`.
    pub in_b: Box<dyn Fn(&LaurentPoly<K>) -> bool + Send + Sync>,
}

impl<K: ScalarField> ExcisionData<K> {
    /// Iterated section: `b` with `p ≡ b mod h^n A` and `b ∈ B`.
    fn section_pow(&self, p: &LaurentPoly<K>, n: u32) -> Result<LaurentPoly<K>, GroupError> {
        let mut rest = p.clone();
        let mut b = LaurentPoly::zero_over(&p.vars);
        let mut hp = LaurentPoly::one_over(&p.vars);
        for _ in 0..n {
            let b0 = (self.section)(&rest);
            b = b + b0.clone() * hp.clone();
            let diff = rest - b0;
            rest = diff.div_exact_poly(&self.h).ok_or_else(|| {
                GroupError::Rejected("section residue is not divisible by h".into())
            })?;
            hp = hp * self.h.clone();
        }
        Ok(b)
    }
}

/// `x = F_h(y) z` with `y` over `A` and `z` over `B_h`.
pub fn excision_split<K: ScalarField>(
    sys: &RelSystem,
    x: &RelWord<RatFrac<K>>,
    data: &ExcisionData<K>,
) -> Result<(RelWord<RatFrac<K>>, RelWord<RatFrac<K>>), GroupError> {
    if sys.rrd.rank < 2 {
        return Err(GroupError::Rejected("relative rank at least 2 required".into()));
    }
    let budget = RewriteBudget::default();
    let mut y_acc: RelWord<RatFrac<K>> = RelWord::empty();
    let mut z: RelWord<RatFrac<K>> = RelWord::empty();
    // worklist of pending letters, processed left to right
    let mut queue: std::collections::VecDeque<(Vec<i32>, Vec<RatFrac<K>>)> =
        std::collections::VecDeque::new();
    for l in &x.letters {
        match l {
            RelLetter::X { alpha, v } => queue.push_back((alpha.clone(), v.clone())),
            RelLetter::Chi { .. } => {
                return Err(GroupError::Rejected(
                    "excision expects unipotent letters".into(),
                ))
            }
        }
    }
    let mut guard = 0usize;
    while let Some((beta, c)) = queue.pop_front() {
        guard += 1;
        if guard > 10_000 {
            return Err(GroupError::Budget("excision worklist".into()));
        }
        if c.iter().all(|p| p.is_zero()) {
            continue;
        }
        // depth M: clear denominators of c
        let mut mdepth = 0u32;
        for p in &c {
            let mut den = p.den.clone();
            let mut m = 0u32;
            while !den.is_one() {
                den = den.div_exact_poly(&data.h).ok_or_else(|| {
                    GroupError::Rejected("parameter denominator is not an h-power".into())
                })?;
                m += 1;
            }
            mdepth = mdepth.max(m);
        }
        let hm = data.h.pow(mdepth);
        // h^M c as polynomials
        let cm: Vec<LaurentPoly<K>> = c
            .iter()
            .map(|p| {
                let q = RatFrac::new(p.num.clone() * hm.clone(), p.den.clone());
                debug_assert!(q.den.is_one());
                q.num
            })
            .collect();
        // find N that clears the z-conjugation of X_beta(h^N *) letterwise
        let mut placed = false;
        for n in exponent_schedule() {
            // split c = a h^N + h^{-M} b
            let nb = n + mdepth;
            let mut bvec = Vec::with_capacity(c.len());
            let mut avec = Vec::with_capacity(c.len());
            let mut ok = true;
            for p in &cm {
                let b = match data.section_pow(p, nb) {
                    Ok(b) => b,
                    Err(_) => {
                        ok = false;
                        break;
                    }
                };
                let rest = p.clone() - b.clone();
                let a = match rest.div_exact_poly(&data.h.pow(nb)) {
                    Some(a) => a,
                    None => {
                        ok = false;
                        break;
                    }
                };
                if !(data.in_b)(&b) {
                    ok = false;
                    break;
                }
                bvec.push(b);
                avec.push(a);
            }
            if !ok {
                continue;
            }
            // conjugate X_beta(a h^N) by the current prefix z
            let ha: Vec<RatFrac<K>> = avec
                .iter()
                .map(|a| RatFrac::from_poly(a.clone() * data.h.pow(n)))
                .collect();
            let inner = RelWord::single(beta.clone(), ha.clone());
            let split = RatFrac::from_poly(data.h.pow(n / 2 + 1));
            let conj = match sys.expand_conjugation(&z, &inner, &split, &budget) {
                Ok(w) => w,
                Err(GroupError::Budget(m)) => return Err(GroupError::Budget(m)),
                Err(_) => continue,
            };
            // every parameter must lie in A
            let all_in_a = conj.letters.iter().all(|l| match l {
                RelLetter::X { v, .. } => v.iter().all(|p| (data.in_a)(p)),
                RelLetter::Chi { u, .. } => (data.in_a)(u),
            });
            if !all_in_a {
                continue;
            }
            y_acc = y_acc.concat(&conj);
            // z gains the B_h letter
            let hb: Vec<RatFrac<K>> = bvec
                .iter()
                .map(|b| RatFrac::new(b.clone(), hm.clone()))
                .collect();
            // sum corrections: X_beta(c) = X_beta(a h^N) X_beta(h^{-M} b)
            //                  prod_{i>=2} X_{i beta}(q^i(a h^N, h^{-M} b))
            let ray: Vec<i32> = beta.clone();
            let qs = sys.q_maps_cached(&ray)?;
            z.letters.push(RelLetter::X { alpha: beta.clone(), v: hb.clone() });
            let vals: Vec<RatFrac<K>> =
                ha.iter().cloned().chain(hb.iter().cloned()).collect();
            // X(c) = X(a h^N) X(h^{-M} b) [prod X_{i beta}(q^i)]^{-1}: the
            // correction letters enter inverted, in reverse order
            for (i, maps) in qs.iter().rev() {
                let ka: Vec<i32> = beta.iter().map(|&x| x * *i as i32).collect();
                let params: Result<Vec<RatFrac<K>>, _> =
                    maps.iter().map(|p| eval_map_at(p, &vals)).collect();
                let params: Vec<RatFrac<K>> =
                    params?.iter().map(|p| -p.clone()).collect();
                if params.iter().any(|p| !p.is_zero()) {
                    // higher letters go back on the worklist, to be split in
                    // turn; they sit between z and the rest, so push front
                    queue.push_front((ka, params));
                }
            }
            placed = true;
            break;
        }
        if !placed {
            return Err(GroupError::Budget(
                "excision exponent schedule exhausted".into(),
            ));
        }
    }
    // verification
    let lhs = sys.evaluate(&y_acc.concat(&z))?;
    let rhs = sys.evaluate(x)?;
    if !lhs.eq_exact(&rhs) {
        return Err(GroupError::Rejected("internal: excision parts mismatch".into()));
    }
    Ok((y_acc.simplify(), z.simplify()))
}

/// The pair `B = k[t]` inside `A = k[t]_{t-1}` with `h = t`, over a variable
/// table whose `tvar` is the polynomial variable `t`.
pub fn polynomial_in_localization<K: ScalarField>(
    vars: &std::sync::Arc<crate::rings::poly::VarSet>,
    tvar: usize,
) -> ExcisionData<K> {
    let t = LaurentPoly::<K>::var_pow(vars, vars.name(tvar), 1);
    let one = LaurentPoly::<K>::one_over(vars);
    let tm1 = t.clone() - one;
    let tm1_in = tm1.clone();
    let tm1_a = tm1.clone();
    ExcisionData {
        h: t,
        section: Box::new(move |p: &LaurentPoly<K>| {
            // constant term as the B-representative (p may have been cleared
            // of (t-1)-denominators by the caller): evaluate at t = 0
            p.coeff_of(tvar, 0)
        }),
        in_a: Box::new(move |p: &RatFrac<K>| {
            let mut den = p.den.clone();
            for _ in 0..64 {
                if den.is_one() {
                    return true;
                }
                match den.div_exact_poly(&tm1_a) {
                    Some(q) => den = q,
                    None => return false,
                }
            }
            den.is_one()
        }),
        in_b: Box::new(move |_p: &LaurentPoly<K>| true),
    }
}

#[allow(dead_code)]
fn unused<K: ScalarField>(_d: &ExcisionData<K>) {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::poly::VarSet;
    use crate::rootsys::TypeLabel;
    use crate::scalar::Rational;

    type P = LaurentPoly<Rational>;
    type F = RatFrac<Rational>;

    #[test]
    fn single_letter_excision() {
        // B = Q[t], A = Q[t]_{t-1}, h = t: X_beta(c/t^M) splits
        let sys = RelSystem::split(TypeLabel::A(2)).unwrap();
        let vs = VarSet::poly(&["t"]);
        let data = polynomial_in_localization::<Rational>(&vs, 0);
        let t = P::var(&vs, "t");
        let one = P::one_over(&vs);
        // c = (2 + t(t-1)) / t^2 over A_h
        let num = P::int(&vs, 2) + t.clone() * (t.clone() - one.clone());
        let c = F::new(num, t.clone() * t.clone());
        let x = RelWord::single(vec![1, 0], vec![c]);
        let (y, z) = excision_split(&sys, &x, &data).unwrap();
        // y over A (no t-denominators), z over B_h
        for l in &y.letters {
            if let RelLetter::X { v, .. } = l {
                for p in v {
                    assert!((data.in_a)(p));
                }
            }
        }
        let lhs = sys.evaluate(&y.concat(&z)).unwrap();
        let rhs = sys.evaluate(&x).unwrap();
        assert!(lhs.eq_exact(&rhs));
    }

    #[test]
    fn trivial_case_b_equals_a() {
        let sys = RelSystem::split(TypeLabel::A(2)).unwrap();
        let vs = VarSet::poly(&["t"]);
        let data = polynomial_in_localization::<Rational>(&vs, 0);
        let t = P::var(&vs, "t");
        // no denominators: x is already over B_h (in fact over B)
        let x = RelWord::single(vec![0, 1], vec![F::from_poly(t)]);
        let (y, z) = excision_split(&sys, &x, &data).unwrap();
        let lhs = sys.evaluate(&y.concat(&z)).unwrap();
        assert!(lhs.eq_exact(&sys.evaluate(&x).unwrap()));
    }

    #[test]
    fn three_letter_word_reassembles() {
        let sys = RelSystem::split(TypeLabel::A(2)).unwrap();
        let vs = VarSet::poly(&["t"]);
        let data = polynomial_in_localization::<Rational>(&vs, 0);
        let t = P::var(&vs, "t");
        let one = P::one_over(&vs);
        let tm1 = t.clone() - one.clone();
        let x = RelWord {
            letters: vec![
                RelLetter::X {
                    alpha: vec![1, 0],
                    v: vec![F::new(one.clone(), t.clone())],
                },
                RelLetter::X {
                    alpha: vec![-1, -1],
                    v: vec![F::new(tm1.clone(), t.clone())],
                },
                RelLetter::X {
                    alpha: vec![0, 1],
                    v: vec![F::new(P::int(&vs, 3), t.clone() * t.clone())],
                },
            ],
        };
        let (y, z) = excision_split(&sys, &x, &data).unwrap();
        let lhs = sys.evaluate(&y.concat(&z)).unwrap();
        assert!(lhs.eq_exact(&sys.evaluate(&x).unwrap()));
    }
}
