//! Matrix realizations of the split group: the adjoint representation for
//! every type, and the natural vector representation for type A.

use std::collections::BTreeMap;

use crate::chevgrp::lie::LieData;
use crate::chevgrp::matrix::Mat;
use crate::error::GroupError;
use crate::rootsys::{Root, RootDatum, TypeLabel};
use crate::scalar::Scalar;

pub type IntMat = Vec<Vec<i64>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepKind {
    Adjoint,
    VectorA,
}

/// A representation with the data the word calculus needs: divided powers of
/// each root nilpotent, and the torus weight of each basis vector.
#[derive(Debug, Clone)]
pub struct GroupRep {
    pub kind: RepKind,
    pub rd: RootDatum,
    pub index: BTreeMap<Root, usize>,
    pub dim: usize,
    /// `powers[i][k]` is `(ad e_i)^k / k!` (identity at k = 0).
    pub powers: Vec<Vec<IntMat>>,
    /// Weight of each basis vector in simple-root coordinates (rational
    /// weights scaled by `weight_den` to stay integral).
    pub weights: Vec<Vec<i64>>,
    pub weight_den: i64,
    /// For the adjoint representation, the underlying structure data.
    pub lie: Option<LieData>,
}

fn imat_zero(n: usize) -> IntMat {
    vec![vec![0; n]; n]
}

fn imat_id(n: usize) -> IntMat {
    let mut m = imat_zero(n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1;
    }
    m
}

fn imat_mul(a: &IntMat, b: &IntMat) -> IntMat {
    let n = a.len();
    let mut out = imat_zero(n);
    for i in 0..n {
        for k in 0..n {
            let x = a[i][k];
            if x == 0 {
                continue;
            }
            for j in 0..n {
                out[i][j] += x * b[k][j];
            }
        }
    }
    out
}

fn imat_is_zero(a: &IntMat) -> bool {
    a.iter().all(|r| r.iter().all(|&x| x == 0))
}

fn divided_powers(ad: &IntMat) -> Vec<IntMat> {
    let n = ad.len();
    let mut out = vec![imat_id(n), ad.clone()];
    let mut k = 2i64;
    loop {
        let prev = out.last().unwrap();
        let next = imat_mul(prev, ad);
        if imat_is_zero(&next) {
            break;
        }
        // divide by k: (ad^k / k!) = (ad^{k-1}/(k-1)!) * ad / k
        let divided: IntMat = next
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&x| {
                        debug_assert_eq!(x % k, 0, "divided power not integral");
                        x / k
                    })
                    .collect()
            })
            .collect();
        if imat_is_zero(&divided) {
            break;
        }
        out.push(divided);
        k += 1;
        assert!(k < 16, "runaway nilpotency");
    }
    out
}

impl GroupRep {
    /// Adjoint representation of the given type.
    pub fn adjoint(label: TypeLabel) -> Result<GroupRep, GroupError> {
        let lie = LieData::build(label)?;
        let rd = lie.rd.clone();
        let nr = rd.roots.len();
        let rank = rd.rank;
        let dim = nr + rank;
        let mut powers = Vec::with_capacity(nr);
        for (i, alpha) in rd.roots.iter().enumerate() {
            let mut ad = imat_zero(dim);
            for (j, beta) in rd.roots.iter().enumerate() {
                let sum: Root = alpha.iter().zip(beta.iter()).map(|(&x, &y)| x + y).collect();
                if sum.iter().all(|&x| x == 0) {
                    // [e_a, e_{-a}] = coroot in the h block
                    for (k, c) in lie.coroot[i].iter().enumerate() {
                        ad[nr + k][j] = *c;
                    }
                } else if let Some(&k) = lie.index.get(&sum) {
                    ad[k][j] = lie.n_table.get(&(i, j)).copied().unwrap_or(0);
                }
            }
            // [e_a, h_i] = -<a, alpha_i^vee> e_a
            for hi in 0..rank {
                let pairing: i64 =
                    (0..rank).map(|c| alpha[c] as i64 * rd.cartan[hi][c]).sum();
                ad[i][nr + hi] = -pairing;
            }
            powers.push(divided_powers(&ad));
        }
        let mut weights: Vec<Vec<i64>> = rd
            .roots
            .iter()
            .map(|r| r.iter().map(|&x| x as i64).collect())
            .collect();
        for _ in 0..rank {
            weights.push(vec![0; rank]);
        }
        let index = lie.index.clone();
        Ok(GroupRep {
            kind: RepKind::Adjoint,
            rd,
            index,
            dim,
            powers,
            weights,
            weight_den: 1,
            lie: Some(lie),
        })
    }

    /// Natural (m = n+1 dimensional) representation of type A_n.
    pub fn vector_a(n: usize) -> Result<GroupRep, GroupError> {
        let rd = RootDatum::build(TypeLabel::A(n))?;
        let m = n + 1;
        let index: BTreeMap<Root, usize> =
            rd.roots.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
        let mut powers = Vec::new();
        for r in &rd.roots {
            let (i, j) = a_type_entry(r);
            let mut ad = imat_zero(m);
            ad[i][j] = 1;
            powers.push(divided_powers(&ad));
        }
        // weight of basis e_i: eps_i = sum of fundamental-ish combinations;
        // pairings with roots are what matter: store eps_i in simple-root
        // coordinates scaled by m: eps_i = (coordinates such that
        // <eps_i - eps_j, chi> behaves): use eps_i with integer pairings via
        // partial sums; here we only need differences, so set
        // weights[i] = -(alpha_1 + ... + alpha_i) scaled... differences:
        // eps_i - eps_{i+1} = alpha_{i+1}? Natural: eps_k = eps_1 - sum_{l<k} alpha_l.
        // Take eps_1 = 0; then weight(e_k) = -(alpha_1 + ... + alpha_{k-1}).
        let mut weights = Vec::new();
        for k in 0..m {
            let mut w = vec![0i64; n];
            for l in 0..k {
                w[l] = -1;
            }
            weights.push(w);
        }
        Ok(GroupRep {
            kind: RepKind::VectorA,
            rd,
            index,
            dim: m,
            powers,
            weights,
            weight_den: 1,
            lie: None,
        })
    }

    pub fn root_index(&self, r: &Root) -> Option<usize> {
        self.index.get(r).copied()
    }

    /// Unipotent `x_beta(t) = exp(t ad e_beta)` over any scalar ring.
    pub fn unipotent<R: Scalar>(&self, beta: &Root, t: &R) -> Result<Mat<R>, GroupError> {
        let i = self
            .root_index(beta)
            .ok_or_else(|| GroupError::Rejected(format!("not a root: {beta:?}")))?;
        let mut out: Mat<R> = Mat::identity(self.dim);
        let mut tk = t.clone();
        for pw in self.powers[i].iter().skip(1) {
            for (r, row) in pw.iter().enumerate() {
                for (c, &v) in row.iter().enumerate() {
                    if v != 0 {
                        out[(r, c)] =
                            out[(r, c)].clone() + tk.clone() * R::from_i64(v);
                    }
                }
            }
            tk = tk * t.clone();
        }
        Ok(out)
    }

    /// Diagonal torus element of the cocharacter with pairings
    /// `<alpha_i, chi> = chi[i]`, evaluated at the unit `u`.
    pub fn cocharacter<R: Scalar>(&self, chi: &[i64], u: &R) -> Result<Mat<R>, GroupError> {
        let ui = u
            .inv()
            .ok_or_else(|| GroupError::Rejected("cocharacter needs a unit".into()))?;
        let rank = self.rd.rank;
        assert_eq!(chi.len(), rank);
        let mut out: Mat<R> = Mat::zero(self.dim);
        for b in 0..self.dim {
            let pairing: i64 = (0..rank).map(|i| self.weights[b][i] * chi[i]).sum();
            debug_assert_eq!(pairing % self.weight_den, 0);
            let e = pairing / self.weight_den;
            let mut v = R::one();
            let base = if e >= 0 { u.clone() } else { ui.clone() };
            for _ in 0..e.abs() {
                v = v * base.clone();
            }
            out[(b, b)] = v;
        }
        Ok(out)
    }

    /// Weight pairing `<weight(basis b), chi>`.
    pub fn weight_pairing(&self, b: usize, chi: &[i64]) -> i64 {
        let s: i64 = (0..self.rd.rank).map(|i| self.weights[b][i] * chi[i]).sum();
        s / self.weight_den
    }
}

/// The matrix position of a type-A root: contiguous runs of +-1 coefficients.
pub fn a_type_entry(r: &Root) -> (usize, usize) {
    let n = r.len();
    let positive = r.iter().sum::<i32>() > 0;
    let (lo, hi) = {
        let mut lo = None;
        let mut hi = None;
        for (i, &c) in r.iter().enumerate() {
            if c != 0 {
                if lo.is_none() {
                    lo = Some(i);
                }
                hi = Some(i);
            }
        }
        (lo.unwrap(), hi.unwrap())
    };
    debug_assert!(r[lo..=hi].iter().all(|&c| c == if positive { 1 } else { -1 }));
    let _ = n;
    if positive {
        (lo, hi + 1)
    } else {
        (hi + 1, lo)
    }
}
