//! Words in root-element and torus letters, their evaluation, and the
//! factorization of unipotent matrices back into root-element products.

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::chevgrp::matrix::Mat;
use crate::chevgrp::rep::GroupRep;
use crate::error::{GroupError, RingError};
use crate::rings::grammar::{parse_poly, print_poly, ScalarText};
use crate::rings::poly::{LaurentPoly, VarSet};
use crate::rootsys::{Root, RootDatum};
use crate::scalar::Scalar;

/// One letter of a word over the coefficient ring `R`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Letter<R> {
    /// Root unipotent `x_root(t)`.
    X { root: Root, t: R },
    /// Torus element of the cocharacter with pairings `chi` at the unit `u`.
    Chi { chi: Vec<i64>, u: R },
}

/// A finite product of letters (left to right).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Word<R> {
    pub letters: Vec<Letter<R>>,
}

impl<R: Scalar> Word<R> {
    pub fn empty() -> Self {
        Word { letters: Vec::new() }
    }

    pub fn single(root: Root, t: R) -> Self {
        Word { letters: vec![Letter::X { root, t }] }
    }

    pub fn from_letters(letters: Vec<Letter<R>>) -> Self {
        Word { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        Word { letters }
    }

    /// Letterwise formal inverse.
    pub fn inverse(&self) -> Result<Self, GroupError> {
        let mut letters = Vec::with_capacity(self.letters.len());
        for l in self.letters.iter().rev() {
            letters.push(match l {
                Letter::X { root, t } => Letter::X { root: root.clone(), t: -t.clone() },
                Letter::Chi { chi, u } => Letter::Chi {
                    chi: chi.clone(),
                    u: u.inv().ok_or_else(|| {
                        GroupError::Rejected("torus letter with non-unit".into())
                    })?,
                },
            });
        }
        Ok(Word { letters })
    }

    /// Drop identity letters and merge adjacent same-root letters.
    pub fn simplify(&self) -> Self {
        let mut out: Vec<Letter<R>> = Vec::new();
        for l in &self.letters {
            match l {
                Letter::X { t, .. } if t.is_zero() => continue,
                Letter::X { root, t } => {
                    if let Some(Letter::X { root: pr, t: pt }) = out.last_mut() {
                        if pr == root {
                            let merged = pt.clone() + t.clone();
                            if merged.is_zero() {
                                out.pop();
                            } else {
                                *pt = merged;
                            }
                            continue;
                        }
                    }
                    out.push(l.clone());
                }
                Letter::Chi { chi, u } => {
                    if chi.iter().all(|&c| c == 0) || u.is_one_value() {
                        continue;
                    }
                    out.push(l.clone());
                }
            }
        }
        Word { letters: out }
    }

    /// Apply a ring map to all parameters.
    pub fn map_params<S: Scalar>(&self, f: &impl Fn(&R) -> S) -> Word<S> {
        Word {
            letters: self
                .letters
                .iter()
                .map(|l| match l {
                    Letter::X { root, t } => Letter::X { root: root.clone(), t: f(t) },
                    Letter::Chi { chi, u } => Letter::Chi { chi: chi.clone(), u: f(u) },
                })
                .collect(),
        }
    }
}

trait IsOneValue {
    fn is_one_value(&self) -> bool;
}
impl<R: Scalar> IsOneValue for R {
    fn is_one_value(&self) -> bool {
        use num_traits::One;
        self.is_one()
    }
}

/// Evaluate a word to a matrix in the given representation.
pub fn evaluate_word<R: Scalar>(rep: &GroupRep, w: &Word<R>) -> Result<Mat<R>, GroupError> {
    let mut acc: Mat<R> = Mat::identity(rep.dim);
    for l in &w.letters {
        let m = match l {
            Letter::X { root, t } => rep.unipotent(root, t)?,
            Letter::Chi { chi, u } => rep.cocharacter(chi, u)?,
        };
        acc = acc.mul(&m);
    }
    Ok(acc)
}

/// Factor a unipotent matrix into one root letter per root of `root_list`
/// (which must be closed under positive sums and ordered by ascending
/// height). Errors when a residual remains.
pub fn unipotent_factorize<R: Scalar>(
    rep: &GroupRep,
    m: &Mat<R>,
    root_list: &[Root],
) -> Result<Word<R>, GroupError> {
    let mut rest = m.clone();
    let mut letters = Vec::new();
    for beta in root_list {
        let bi = rep
            .root_index(beta)
            .ok_or_else(|| GroupError::Rejected(format!("not a root: {beta:?}")))?;
        // probe entry: any nonzero entry of the linear divided power
        let ad = &rep.powers[bi][1];
        let mut probe = None;
        'outer: for (r, row) in ad.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                if v != 0 {
                    probe = Some((r, c, v));
                    break 'outer;
                }
            }
        }
        let (r, c, v) = probe.expect("nonzero nilpotent");
        let t = rest[(r, c)]
            .clone()
            .div_exact(&R::from_i64(v))
            .ok_or_else(|| GroupError::Rejected("non-invertible structure constant".into()))?;
        if !t.is_zero() {
            let inv = rep.unipotent(beta, &(-t.clone()))?;
            rest = inv.mul(&rest);
            letters.push(Letter::X { root: beta.clone(), t });
        }
    }
    if !rest.is_identity() {
        return Err(GroupError::Rejected(
            "matrix is not in the unipotent group generated by the given roots".into(),
        ));
    }
    Ok(Word { letters })
}

/// Roots `i a + j b` (i, j >= 1) of the system, by ascending height.
pub fn positive_combinations(rd: &RootDatum, a: &Root, b: &Root) -> Vec<(Root, u32, u32)> {
    let mut out = Vec::new();
    for i in 1..=4u32 {
        for j in 1..=4u32 {
            let cand: Root = a
                .iter()
                .zip(b.iter())
                .map(|(&x, &y)| i as i32 * x + j as i32 * y)
                .collect();
            if rd.is_root(&cand) {
                out.push((cand, i, j));
            }
        }
    }
    out.sort_by_key(|(r, _, _)| (RootDatum::height(r), r.clone()));
    out
}

/// Constants `C_ij` with `[x_a(t), x_b(u)] = prod x_{ia+jb}(C_ij t^i u^j)`,
/// factors ordered by ascending height of `ia+jb`.
pub fn derive_commutator_constants(
    rep: &GroupRep,
    a: &Root,
    b: &Root,
) -> Result<Vec<(u32, u32, i64)>, GroupError> {
    // reject proportional pairs
    let cross_zero = {
        let mut ok = true;
        'find: for i in 0..a.len() {
            for j in 0..a.len() {
                if a[i] as i64 * b[j] as i64 != a[j] as i64 * b[i] as i64 {
                    ok = false;
                    break 'find;
                }
            }
        }
        ok
    };
    if cross_zero {
        return Err(GroupError::Rejected("proportional roots".into()));
    }
    let vs = VarSet::poly(&["t", "u"]);
    type P = LaurentPoly<crate::scalar::Rational>;
    let t = P::var(&vs, "t");
    let u = P::var(&vs, "u");
    let xa = rep.unipotent(a, &t)?;
    let xb = rep.unipotent(b, &u)?;
    let xai = rep.unipotent(a, &(-t.clone()))?;
    let xbi = rep.unipotent(b, &(-u.clone()))?;
    let comm = xa.mul(&xb).mul(&xai).mul(&xbi);
    let combos = positive_combinations(&rep.rd, a, b);
    let roots: Vec<Root> = combos.iter().map(|(r, _, _)| r.clone()).collect();
    let word = unipotent_factorize(rep, &comm, &roots)?;
    let mut out = Vec::new();
    for (root, i, j) in &combos {
        let mut c = 0i64;
        for l in &word.letters {
            if let Letter::X { root: r, t: param } = l {
                if r == root && !param.is_zero() {
                    // parameter must be C * t^i u^j
                    let mut exps = vec![0i32; 2];
                    exps[0] = *i as i32;
                    exps[1] = *j as i32;
                    let coeff = param.terms.get(&exps).cloned().ok_or_else(|| {
                        GroupError::Rejected("commutator parameter not homogeneous".into())
                    })?;
                    if param.terms.len() != 1 {
                        return Err(GroupError::Rejected(
                            "commutator parameter not a monomial".into(),
                        ));
                    }
                    // integer constant
                    let num = coeff.0.numer().clone();
                    let den = coeff.0.denom().clone();
                    if den != num::BigInt::from(1) {
                        return Err(GroupError::Rejected(
                            "commutator constant not integral".into(),
                        ));
                    }
                    c = i64::try_from(num)
                        .map_err(|_| GroupError::Rejected("constant overflow".into()))?;
                }
            }
        }
        if c != 0 {
            out.push((*i, *j, c));
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Text grammar
// ---------------------------------------------------------------------------

/// Print in the grammar `x[a,b](param) * chi[c,d](unit)`.
pub fn print_word<K: Scalar>(w: &Word<LaurentPoly<K>>) -> String {
    if w.letters.is_empty() {
        return "1".into();
    }
    let items: Vec<String> = w
        .letters
        .iter()
        .map(|l| match l {
            Letter::X { root, t } => {
                let r: Vec<String> = root.iter().map(|x| x.to_string()).collect();
                format!("x[{}]({})", r.join(","), print_poly(t))
            }
            Letter::Chi { chi, u } => {
                let r: Vec<String> = chi.iter().map(|x| x.to_string()).collect();
                format!("chi[{}]({})", r.join(","), print_poly(u))
            }
        })
        .collect();
    items.join(" * ")
}

/// Parse the word grammar; `^-1` after a letter inverts it.
pub fn parse_word<K: ScalarText>(
    s: &str,
    vars: &Arc<VarSet>,
) -> Result<Word<LaurentPoly<K>>, RingError> {
    let s = s.trim();
    if s == "1" {
        return Ok(Word::empty());
    }
    let mut letters = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0usize;
    let mut first = true;
    while i < chars.len() {
        while i < chars.len() && (chars[i].is_whitespace() || (!first && chars[i] == '*')) {
            if chars[i] == '*' {
                first = true;
            }
            i += 1;
        }
        if i >= chars.len() {
            break;
        }
        first = false;
        let kind = if chars[i..].starts_with(&['x', '[']) {
            i += 1;
            'x'
        } else if i + 3 <= chars.len() && chars[i] == 'c' && chars[i + 1] == 'h' && chars[i + 2] == 'i'
        {
            i += 3;
            'c'
        } else {
            return Err(RingError::Parse(format!("unexpected letter at {i}")));
        };
        if i >= chars.len() || chars[i] != '[' {
            return Err(RingError::Parse("expected [".into()));
        }
        let close = chars[i..]
            .iter()
            .position(|&c| c == ']')
            .ok_or_else(|| RingError::Parse("unclosed [".into()))?
            + i;
        let rootstr: String = chars[i + 1..close].iter().collect();
        let root: Result<Vec<i64>, _> =
            rootstr.split(',').map(|p| p.trim().parse::<i64>()).collect();
        let root = root.map_err(|e| RingError::Parse(format!("bad root vector: {e}")))?;
        i = close + 1;
        if i >= chars.len() || chars[i] != '(' {
            return Err(RingError::Parse("expected (".into()));
        }
        // matching close paren
        let mut depth = 0i32;
        let mut j = i;
        loop {
            if j >= chars.len() {
                return Err(RingError::Parse("unclosed (".into()));
            }
            if chars[j] == '(' {
                depth += 1;
            } else if chars[j] == ')' {
                depth -= 1;
                if depth == 0 {
                    break;
                }
            }
            j += 1;
        }
        let param: String = chars[i + 1..j].iter().collect();
        i = j + 1;
        // optional ^-1
        let mut inverted = false;
        if i + 2 < chars.len() && chars[i] == '^' && chars[i + 1] == '-' && chars[i + 2] == '1' {
            inverted = true;
            i += 3;
        }
        let p: LaurentPoly<K> = parse_poly(&param, vars)?;
        match kind {
            'x' => {
                let r: Root = root.iter().map(|&x| x as i32).collect();
                let t = if inverted { -p } else { p };
                letters.push(Letter::X { root: r, t });
            }
            _ => {
                let u = if inverted {
                    p.invert().ok_or_else(|| {
                        RingError::Parse("inverted torus letter with non-unit".into())
                    })?
                } else {
                    p
                };
                letters.push(Letter::Chi { chi: root, u });
            }
        }
    }
    Ok(Word { letters })
}

impl<K: Scalar> fmt::Display for Word<LaurentPoly<K>> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", print_word(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::TypeLabel;
    use crate::scalar::Rational;

    type P = LaurentPoly<Rational>;

    #[test]
    fn empty_word_is_identity_and_inverse_cancels() {
        let rep = GroupRep::adjoint(TypeLabel::A(2)).unwrap();
        let vs = VarSet::poly(&["t", "u"]);
        let w: Word<P> = Word::empty();
        assert!(evaluate_word(&rep, &w).unwrap().is_identity());
        let t = P::var(&vs, "t");
        let u = P::var(&vs, "u");
        let w = Word::from_letters(vec![
            Letter::X { root: vec![1, 0], t: t.clone() },
            Letter::X { root: vec![0, 1], t: u.clone() },
            Letter::Chi { chi: vec![1, 0], u: P::int(&vs, 2) },
        ]);
        let wi = w.inverse().unwrap();
        assert!(evaluate_word(&rep, &w.concat(&wi)).unwrap().is_identity());
    }

    #[test]
    fn a2_commutator_constant_is_unit() {
        let rep = GroupRep::adjoint(TypeLabel::A(2)).unwrap();
        let table = derive_commutator_constants(&rep, &vec![1, 0], &vec![0, 1]).unwrap();
        assert_eq!(table.len(), 1);
        let (i, j, c) = table[0];
        assert_eq!((i, j), (1, 1));
        assert_eq!(c.abs(), 1);
    }

    #[test]
    fn orthogonal_pair_empty_table() {
        let rep = GroupRep::adjoint(TypeLabel::A(3)).unwrap();
        let table = derive_commutator_constants(&rep, &vec![1, 0, 0], &vec![0, 0, 1]).unwrap();
        assert!(table.is_empty());
        assert!(derive_commutator_constants(&rep, &vec![1, 0, 0], &vec![-1, 0, 0]).is_err());
    }

    #[test]
    fn b2_commutator_table() {
        let rep = GroupRep::adjoint(TypeLabel::B(2)).unwrap();
        // alpha_1 long, alpha_2 short: [x_a1(t), x_a2(u)] lands on a1+a2 and
        // a1+2a2
        let table = derive_commutator_constants(&rep, &vec![1, 0], &vec![0, 1]).unwrap();
        let ijs: Vec<(u32, u32)> = table.iter().map(|&(i, j, _)| (i, j)).collect();
        assert!(ijs.contains(&(1, 1)));
        assert!(ijs.contains(&(1, 2)));
        for (_, _, c) in &table {
            assert!(c.abs() <= 2);
        }
    }

    #[test]
    fn factorize_round_trip() {
        let rep = GroupRep::adjoint(TypeLabel::A(2)).unwrap();
        let vs = VarSet::poly(&["t", "u", "v"]);
        let t = P::var(&vs, "t");
        let u = P::var(&vs, "u");
        let v = P::var(&vs, "v");
        let w = Word::from_letters(vec![
            Letter::X { root: vec![1, 0], t: t.clone() },
            Letter::X { root: vec![0, 1], t: u.clone() },
            Letter::X { root: vec![1, 1], t: v.clone() },
        ]);
        let m = evaluate_word(&rep, &w).unwrap();
        let roots = vec![vec![1, 0], vec![0, 1], vec![1, 1]];
        let rec = unipotent_factorize(&rep, &m, &roots).unwrap();
        let m2 = evaluate_word(&rep, &rec).unwrap();
        assert!(m.eq_exact(&m2));
        assert_eq!(rec.letters.len(), 3);
    }

    #[test]
    fn factorize_rejects_lower_triangular_leak() {
        let rep = GroupRep::adjoint(TypeLabel::A(2)).unwrap();
        let one = P::from_i64(3);
        let m = rep.unipotent(&vec![-1, 0], &one).unwrap();
        let roots = vec![vec![1, 0], vec![0, 1], vec![1, 1]];
        assert!(unipotent_factorize(&rep, &m, &roots).is_err());
    }

    #[test]
    fn single_letter_factorizes() {
        let rep = GroupRep::adjoint(TypeLabel::A(2)).unwrap();
        let m = rep.unipotent(&vec![1, 0], &P::from_i64(3)).unwrap();
        let roots = vec![vec![1, 0], vec![0, 1], vec![1, 1]];
        let w = unipotent_factorize(&rep, &m, &roots).unwrap();
        assert_eq!(w.letters.len(), 1);
    }

    #[test]
    fn word_grammar_round_trip() {
        let vs = VarSet::new(&["X"], &[true]);
        let w: Word<P> =
            parse_word("x[1,0](3/2*X^2) * x[0,1](X^-1)^-1 * chi[1,0](X)", &vs).unwrap();
        assert_eq!(w.letters.len(), 3);
        let printed = print_word(&w);
        let w2: Word<P> = parse_word(&printed, &vs).unwrap();
        assert_eq!(w, w2);
    }
}
