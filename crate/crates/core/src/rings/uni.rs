//! Univariate helpers over a scalar field: Euclidean division, gcd, Bezout
//! identities, squarefree parts. Polynomials are carried as `LaurentPoly`
//! values that only involve the designated variable.

use num_traits::Zero;

use crate::rings::poly::LaurentPoly;
use crate::scalar::ScalarField;

/// Dense coefficient vector of `p` in variable `v` (index = degree).
pub fn dense<K: ScalarField>(p: &LaurentPoly<K>, v: usize) -> Vec<K> {
    assert!(p.poly_in(v), "negative exponents in univariate view");
    let d = p.degree(v).max(0);
    let mut out = vec![K::zero(); (d + 1) as usize];
    for (e, k) in &p.terms {
        debug_assert!(
            e.iter().enumerate().all(|(i, &x)| i == v || x == 0),
            "polynomial not univariate in the designated variable"
        );
        out[e.get(v).copied().unwrap_or(0) as usize] = k.clone();
    }
    out
}

pub fn from_dense<K: ScalarField>(
    coeffs: &[K],
    model: &LaurentPoly<K>,
    v: usize,
) -> LaurentPoly<K> {
    let mut out = LaurentPoly::zero_over(&model.vars);
    for (d, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            let mut e = vec![0; model.vars.len()];
            e[v] = d as i32;
            out = out + LaurentPoly::monomial(&model.vars, e, c.clone());
        }
    }
    out
}

fn trim<K: ScalarField>(v: &mut Vec<K>) {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
}

fn dmul<K: ScalarField>(a: &[K], b: &[K]) -> Vec<K> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![K::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    trim(&mut out);
    out
}

fn dsub<K: ScalarField>(a: &[K], b: &[K]) -> Vec<K> {
    let n = a.len().max(b.len());
    let mut out = vec![K::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] = x.clone();
    }
    for (i, y) in b.iter().enumerate() {
        out[i] = out[i].clone() - y.clone();
    }
    trim(&mut out);
    out
}

/// Division with remainder: a = q*b + r, deg r < deg b.
fn ddivmod<K: ScalarField>(a: &[K], b: &[K]) -> (Vec<K>, Vec<K>) {
    assert!(!b.is_empty(), "division by zero polynomial");
    let lb = b.last().unwrap().inv().expect("field");
    let mut r = a.to_vec();
    trim(&mut r);
    let mut q = vec![K::zero(); a.len().saturating_sub(b.len()) + 1];
    while r.len() >= b.len() {
        let d = r.len() - b.len();
        let c = r.last().unwrap().clone() * lb.clone();
        q[d] = c.clone();
        let mut shifted = vec![K::zero(); d];
        shifted.extend(b.iter().map(|x| x.clone() * c.clone()));
        r = dsub(&r, &shifted);
        if r.is_empty() {
            break;
        }
    }
    trim(&mut q);
    (q, r)
}

/// Monic gcd in the single variable `v`.
pub fn gcd<K: ScalarField>(a: &LaurentPoly<K>, b: &LaurentPoly<K>, v: usize) -> LaurentPoly<K> {
    let mut x = dense(a, v);
    let mut y = dense(b, v);
    while !y.is_empty() {
        let (_, r) = ddivmod(&x, &y);
        x = y;
        y = r;
    }
    if let Some(l) = x.last() {
        let li = l.inv().expect("field");
        for c in &mut x {
            *c = c.clone() * li.clone();
        }
    }
    from_dense(&x, a, v)
}

/// Extended gcd: returns monic g and (s, t) with s*a + t*b = g.
pub fn ext_gcd<K: ScalarField>(
    a: &LaurentPoly<K>,
    b: &LaurentPoly<K>,
    v: usize,
) -> (LaurentPoly<K>, LaurentPoly<K>, LaurentPoly<K>) {
    let mut r0 = dense(a, v);
    let mut r1 = dense(b, v);
    let mut s0 = vec![K::one()];
    let mut s1: Vec<K> = vec![];
    let mut t0: Vec<K> = vec![];
    let mut t1 = vec![K::one()];
    while !r1.is_empty() {
        let (q, r) = ddivmod(&r0, &r1);
        let ns = dsub(&s0, &dmul(&q, &s1));
        let nt = dsub(&t0, &dmul(&q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, ns);
        t0 = std::mem::replace(&mut t1, nt);
    }
    if let Some(l) = r0.last() {
        let li = l.inv().expect("field");
        for c in r0.iter_mut().chain(s0.iter_mut()).chain(t0.iter_mut()) {
            *c = c.clone() * li.clone();
        }
    }
    (from_dense(&r0, a, v), from_dense(&s0, a, v), from_dense(&t0, a, v))
}

/// Bezout cofactors with `s*a^k + t*b^k = 1`; requires gcd(a, b) = 1.
pub fn bezout_powers<K: ScalarField>(
    a: &LaurentPoly<K>,
    b: &LaurentPoly<K>,
    k: u32,
    v: usize,
) -> Option<(LaurentPoly<K>, LaurentPoly<K>)> {
    let ak = a.pow(k);
    let bk = b.pow(k);
    let (g, s, t) = ext_gcd(&ak, &bk, v);
    if g.is_one() {
        Some((s, t))
    } else {
        None
    }
}

/// Squarefree part of `p` in variable `v` (characteristic 0 or large enough
/// for the inputs used here; p-th power degeneracies are handled by gcd
/// refinement at the call sites).
pub fn squarefree_part<K: ScalarField>(p: &LaurentPoly<K>, v: usize) -> LaurentPoly<K> {
    let d = derivative(p, v);
    if d.is_zero() {
        return p.clone();
    }
    let g = gcd(p, &d, v);
    let dp = dense(p, v);
    let dg = dense(&g, v);
    let (q, r) = ddivmod(&dp, &dg);
    debug_assert!(r.is_empty());
    from_dense(&q, p, v)
}

pub fn derivative<K: ScalarField>(p: &LaurentPoly<K>, v: usize) -> LaurentPoly<K> {
    let c = dense(p, v);
    let mut out = vec![K::zero(); c.len().saturating_sub(1)];
    for (d, x) in c.iter().enumerate().skip(1) {
        out[d - 1] = x.clone() * K::from_i64(d as i64);
    }
    from_dense(&out, p, v)
}

/// Division with remainder lifted back to `LaurentPoly`.
pub fn divmod<K: ScalarField>(
    a: &LaurentPoly<K>,
    b: &LaurentPoly<K>,
    v: usize,
) -> (LaurentPoly<K>, LaurentPoly<K>) {
    let (q, r) = ddivmod(&dense(a, v), &dense(b, v));
    (from_dense(&q, a, v), from_dense(&r, a, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::poly::VarSet;
    use crate::scalar::Rational;

    #[test]
    fn ext_gcd_bezout_identity() {
        let vs = VarSet::poly(&["Y"]);
        let y = LaurentPoly::<Rational>::var(&vs, "Y");
        let one = LaurentPoly::one_over(&vs);
        let a = y.clone() * y.clone() + one.clone(); // Y^2+1
        let b = y.clone() - LaurentPoly::int(&vs, 2); // Y-2
        let (g, s, t) = ext_gcd(&a, &b, 0);
        assert!(g.is_one());
        assert!((s * a + t * b).is_one());
    }

    #[test]
    fn bezout_powers_of_comaximal_pair() {
        let vs = VarSet::poly(&["Y"]);
        let y = LaurentPoly::<Rational>::var(&vs, "Y");
        let one = LaurentPoly::one_over(&vs);
        let f = y.clone();
        let g = one.clone() - y.clone();
        let (s, t) = bezout_powers(&f, &g, 3, 0).unwrap();
        assert!((s * f.pow(3) + t * g.pow(3)).is_one());
    }
}
