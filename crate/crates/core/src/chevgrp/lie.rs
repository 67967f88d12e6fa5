//! Integral structure constants for the split simple Lie algebras, and the
//! adjoint action built from them. Simply-laced types use a cocycle sign
//! rule, B/C/D come from the classical matrix models, G2 and F4 by folding
//! D4 and E6.

use std::collections::BTreeMap;

use crate::error::GroupError;
use crate::rootsys::{Root, RootDatum, TypeLabel};

/// Structure data: `n_table[(i, j)]` is the constant in
/// `[e_{roots[i]}, e_{roots[j]}] = N e_{roots[i]+roots[j]}` for index pairs
/// whose root sum is again a root.
#[derive(Debug, Clone)]
pub struct LieData {
    pub rd: RootDatum,
    pub index: BTreeMap<Root, usize>,
    pub n_table: BTreeMap<(usize, usize), i64>,
    /// Coroot coefficients: `coroot[i]` expresses roots[i]^vee in the basis
    /// alpha_1^vee..alpha_n^vee.
    pub coroot: Vec<Vec<i64>>,
}

impl LieData {
    pub fn n_of(&self, a: &Root, b: &Root) -> i64 {
        let (Some(&i), Some(&j)) = (self.index.get(a), self.index.get(b)) else {
            return 0;
        };
        self.n_table.get(&(i, j)).copied().unwrap_or(0)
    }

    fn coroot_coeffs(rd: &RootDatum, r: &Root) -> Vec<i64> {
        // r^vee = sum_i b_i (alpha_i,alpha_i)/(r,r) alpha_i^vee
        let rr = rd.form(r, r);
        (0..rd.rank)
            .map(|i| {
                let mut ei = vec![0i32; rd.rank];
                ei[i] = 1;
                let num = r[i] as i64 * rd.form(&ei, &ei);
                debug_assert_eq!(num % rr, 0);
                num / rr
            })
            .collect()
    }

    /// Uniform construction from a raw pair table (positive-sum pairs only
    /// need to be present with both orderings filled by the caller).
    fn assemble(rd: RootDatum, n_table: BTreeMap<(usize, usize), i64>) -> LieData {
        let index: BTreeMap<Root, usize> =
            rd.roots.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
        let coroot = rd.roots.iter().map(|r| Self::coroot_coeffs(&rd, r)).collect();
        LieData { rd, index, n_table, coroot }
    }

    /// Rescale basis vectors so every extraspecial pair has a positive
    /// constant: processing positive roots by (height, lex), the pair of the
    /// lexicographically least positive summand is made positive.
    fn normalize_extraspecial(&mut self) {
        let mut pos: Vec<Root> = self.rd.positive_roots();
        pos.sort_by_key(|r| (RootDatum::height(r), r.clone()));
        let mut xi: BTreeMap<Root, i64> = BTreeMap::new();
        for r in &self.rd.roots {
            xi.insert(r.clone(), 1);
        }
        for gamma in pos.iter().filter(|r| RootDatum::height(r) >= 2) {
            // lexicographically least positive alpha with gamma - alpha positive
            let mut found = None;
            for alpha in self.rd.roots.iter().filter(|r| RootDatum::is_positive(r)) {
                let beta: Root = gamma.iter().zip(alpha.iter()).map(|(&g, &a)| g - a).collect();
                if RootDatum::is_positive(&beta) && self.rd.is_root(&beta) {
                    found = Some((alpha.clone(), beta));
                    break;
                }
            }
            let (alpha, beta) = found.expect("decomposable positive root");
            let i = self.index[&alpha];
            let j = self.index[&beta];
            let n = self.n_table.get(&(i, j)).copied().unwrap_or(0);
            debug_assert!(n != 0, "missing extraspecial constant");
            let s = xi[&alpha] * xi[&beta] * n.signum();
            if s < 0 {
                xi.insert(gamma.clone(), -1);
                let neg: Root = gamma.iter().map(|x| -x).collect();
                xi.insert(neg, -1);
            }
        }
        let index = self.index.clone();
        let roots = self.rd.roots.clone();
        for ((i, j), v) in self.n_table.iter_mut() {
            let a = &roots[*i];
            let b = &roots[*j];
            let sum: Root = a.iter().zip(b.iter()).map(|(&x, &y)| x + y).collect();
            let _ = index;
            *v *= xi[a] * xi[b] * xi[&sum];
        }
    }

    pub fn build(label: TypeLabel) -> Result<LieData, GroupError> {
        let mut data = match label {
            TypeLabel::A(_) | TypeLabel::D(_) | TypeLabel::E6 | TypeLabel::E7 | TypeLabel::E8 => {
                build_simply_laced(label)?
            }
            TypeLabel::B(2) => build_folded(TypeLabel::A(3), vec![vec![2, 1, 0]], TypeLabel::B(2))?,
            TypeLabel::B(n) => {
                // fold D_{n+1} along the swap of the two terminal fork nodes
                let mut p: Vec<usize> = (0..n + 1).collect();
                p.swap(n - 1, n);
                build_folded(TypeLabel::D(n + 1), vec![p], TypeLabel::B(n))?
            }
            TypeLabel::C(n) => {
                let m = 2 * n - 1;
                let p: Vec<usize> = (0..m).rev().collect();
                build_folded(TypeLabel::A(m), vec![p], TypeLabel::C(n))?
            }
            TypeLabel::G2 => build_folded(TypeLabel::D(4), vec![vec![2, 1, 3, 0]], TypeLabel::G2)?,
            TypeLabel::F4 => {
                build_folded(TypeLabel::E6, vec![vec![5, 1, 4, 3, 2, 0]], TypeLabel::F4)?
            }
            TypeLabel::BC(_) => {
                return Err(GroupError::Rejected("no split group of type BC".into()))
            }
        };
        data.normalize_extraspecial();
        Ok(data)
    }
}

/// Simply-laced constants via the asymmetry cocycle of a bilinear form `D`
/// with `D(x,y) + D(y,x) = (x,y)` and `D(a,a) = 1` on simple roots.
fn build_simply_laced(label: TypeLabel) -> Result<LieData, GroupError> {
    let rd = RootDatum::build(label)?;
    let n = rd.rank;
    // D(alpha_i, alpha_j) = (alpha_i,alpha_j) for i < j; 1 for i == j; 0 else.
    let mut d = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i < j {
                d[i][j] = rd.form(
                    &{
                        let mut e = vec![0i32; n];
                        e[i] = 1;
                        e
                    },
                    &{
                        let mut e = vec![0i32; n];
                        e[j] = 1;
                        e
                    },
                ) / 1;
            } else if i == j {
                d[i][j] = 1;
            }
        }
    }
    // normalized simply-laced form has (a,a) = 2; rescale if symmetrize gave
    // another normalization
    let norm = rd.form(
        &{
            let mut e = vec![0i32; n];
            e[0] = 1;
            e
        },
        &{
            let mut e = vec![0i32; n];
            e[0] = 1;
            e
        },
    );
    debug_assert!(norm % 2 == 0);
    let scale = norm / 2;
    for row in &mut d {
        for v in row.iter_mut() {
            *v = if *v == 1 { 1 } else { *v / scale.max(1) };
        }
    }
    let dd = |a: &Root, b: &Root| -> i64 {
        let mut s = 0;
        for i in 0..n {
            for j in 0..n {
                s += a[i] as i64 * b[j] as i64 * d[i][j];
            }
        }
        s
    };
    let mut table = BTreeMap::new();
    let index: BTreeMap<Root, usize> =
        rd.roots.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
    // The cocycle convention brackets opposite pairs to the negated coroot;
    // twisting negative root vectors by -1 restores [e, f] = h.
    let xi = |r: &Root| -> i64 {
        if RootDatum::is_positive(r) {
            1
        } else {
            -1
        }
    };
    for (i, a) in rd.roots.iter().enumerate() {
        for (j, b) in rd.roots.iter().enumerate() {
            let sum: Root = a.iter().zip(b.iter()).map(|(&x, &y)| x + y).collect();
            if sum.iter().all(|&x| x == 0) {
                continue;
            }
            if index.contains_key(&sum) {
                let sign = if dd(a, b) % 2 == 0 { 1 } else { -1 };
                table.insert((i, j), sign * xi(a) * xi(b) * xi(&sum));
            }
        }
    }
    Ok(LieData::assemble(rd, table))
}

// ---------------------------------------------------------------------------
// Folding
// ---------------------------------------------------------------------------

/// Vector in the ambient algebra: root coordinates then Cartan coordinates.
type LieVec = Vec<i64>;

fn ambient_bracket(data: &LieData, x: &LieVec, y: &LieVec) -> LieVec {
    let nr = data.rd.roots.len();
    let rank = data.rd.rank;
    let dim = nr + rank;
    let mut out = vec![0i64; dim];
    // e-e brackets
    for i in 0..nr {
        if x[i] == 0 {
            continue;
        }
        for j in 0..nr {
            if y[j] == 0 {
                continue;
            }
            let c = x[i] * y[j];
            let a = &data.rd.roots[i];
            let b = &data.rd.roots[j];
            let sum: Root = a.iter().zip(b.iter()).map(|(&p, &q)| p + q).collect();
            if sum.iter().all(|&v| v == 0) {
                for (k, co) in data.coroot[i].iter().enumerate() {
                    out[nr + k] += c * co;
                }
            } else if let Some(&k) = data.index.get(&sum) {
                out[k] += c * data.n_table.get(&(i, j)).copied().unwrap_or(0);
            }
        }
    }
    // h-e brackets: [h_i, e_b] = <b, alpha_i^vee> e_b
    for hi in 0..rank {
        let xh = x[nr + hi];
        let yh = y[nr + hi];
        for j in 0..nr {
            let b = &data.rd.roots[j];
            let mut ei = vec![0i32; rank];
            ei[hi] = 1;
            let pairing: i64 = {
                // <b, alpha_i^vee> = row hi of cartan dotted into b
                (0..rank).map(|c| b[c] as i64 * data.rd.cartan[hi][c]).sum()
            };
            if xh != 0 && y[j] != 0 {
                out[j] += xh * y[j] * pairing;
            }
            if yh != 0 && x[j] != 0 {
                out[j] -= yh * x[j] * pairing;
            }
        }
    }
    out
}

/// Fold an ADE algebra along the diagram automorphism `perm` (one generator)
/// and return the structure data of the fixed subalgebra, re-expressed over
/// the abstractly built target system.
fn build_folded(
    ambient_label: TypeLabel,
    gens: Vec<Vec<usize>>,
    target: TypeLabel,
) -> Result<LieData, GroupError> {
    let ambient = build_simply_laced(ambient_label)?;
    let rd = &ambient.rd;
    let n = rd.rank;
    let nr = rd.roots.len();
    let perm = &gens[0];
    // signs of the lifted automorphism on root vectors
    let sigma_root = |r: &Root| -> Root {
        let mut out = vec![0i32; n];
        for (i, &c) in r.iter().enumerate() {
            out[perm[i]] += c;
        }
        out
    };
    // c_gamma by height; simples get +1
    let mut sign: BTreeMap<Root, i64> = BTreeMap::new();
    let mut pos: Vec<Root> = rd.positive_roots();
    pos.sort_by_key(|r| (RootDatum::height(r), r.clone()));
    for r in &pos {
        if RootDatum::height(r) == 1 {
            sign.insert(r.clone(), 1);
            let neg: Root = r.iter().map(|x| -x).collect();
            sign.insert(neg, 1);
            continue;
        }
        // r = simple + delta
        let mut done = false;
        for i in 0..n {
            let mut delta = r.clone();
            delta[i] -= 1;
            if rd.is_root(&delta) && RootDatum::is_positive(&delta) {
                let mut simple = vec![0i32; n];
                simple[i] = 1;
                let na = ambient.n_of(&simple, &delta);
                let ns = ambient.n_of(&sigma_root(&simple), &sigma_root(&delta));
                debug_assert!(na != 0 && ns.abs() == na.abs());
                let c = sign[&simple] * sign[&delta] * ns / na;
                sign.insert(r.clone(), c);
                let neg: Root = r.iter().map(|x| -x).collect();
                sign.insert(neg, c);
                done = true;
                break;
            }
        }
        debug_assert!(done, "positive root decomposes through a simple");
    }
    let sigma_vec = |x: &LieVec| -> LieVec {
        let mut out = vec![0i64; nr + n];
        for i in 0..nr {
            if x[i] != 0 {
                let r = &rd.roots[i];
                let sr = sigma_root(r);
                let k = ambient.index[&sr];
                out[k] += x[i] * sign[r];
            }
        }
        for i in 0..n {
            out[nr + perm[i]] += x[nr + i];
        }
        out
    };

    // orbit sums of root vectors, keyed by the folded (orbit-sum) coordinates
    let order = {
        // order of the permutation
        let mut k = 1usize;
        let mut p: Vec<usize> = perm.clone();
        let id: Vec<usize> = (0..n).collect();
        while p != id {
            p = (0..n).map(|i| perm[p[i]]).collect();
            k += 1;
        }
        k
    };
    // node orbits, sorted: folded coordinates
    let mut node_orbits: Vec<Vec<usize>> = Vec::new();
    let mut seen = vec![false; n];
    for i in 0..n {
        if seen[i] {
            continue;
        }
        let mut orb = vec![i];
        seen[i] = true;
        let mut j = perm[i];
        while j != i {
            orb.push(j);
            seen[j] = true;
            j = perm[j];
        }
        orb.sort_unstable();
        node_orbits.push(orb);
    }
    node_orbits.sort();
    let fold_root = |r: &Root| -> Root {
        node_orbits
            .iter()
            .map(|orb| orb.iter().map(|&i| r[i]).sum())
            .collect()
    };

    let mut folded_vectors: BTreeMap<Root, LieVec> = BTreeMap::new();
    let mut visited = vec![false; nr];
    for i in 0..nr {
        if visited[i] {
            continue;
        }
        let r = rd.roots[i].clone();
        // mark orbit
        let mut cur = r.clone();
        loop {
            visited[ambient.index[&cur]] = true;
            cur = sigma_root(&cur);
            if cur == r {
                break;
            }
        }
        let mut v = vec![0i64; nr + n];
        v[i] = 1;
        let mut acc = v.clone();
        let mut w = v;
        for _ in 1..order {
            w = sigma_vec(&w);
            acc = acc.iter().zip(&w).map(|(a, b)| a + b).collect();
        }
        if acc.iter().all(|&x| x == 0) {
            continue;
        }
        // primitive integer vector
        let g = acc.iter().fold(0i64, |g, &x| gcd_i64(g, x.abs()));
        let acc: LieVec = acc.iter().map(|x| x / g.max(1)).collect();
        folded_vectors.entry(fold_root(&r)).or_insert(acc);
    }

    // identify the folded system with the abstractly built target
    let trd = RootDatum::build(target)?;
    // folded simple roots: images of node orbits
    let folded_simples: Vec<Root> = node_orbits
        .iter()
        .map(|orb| {
            let mut r = vec![0i32; n];
            r[orb[0]] = 1;
            fold_root(&r)
        })
        .collect();
    // match folded simples to target simples via Cartan rows
    // target simple i has cartan row trd.cartan[i]; compute folded pairings
    let folded_pairing = |a: &Root, b: &Root| -> i64 {
        // strings within the folded root set
        let set: std::collections::BTreeSet<Root> = folded_vectors.keys().cloned().collect();
        let mut p = 0i64;
        loop {
            let cand: Root =
                a.iter().zip(b.iter()).map(|(&x, &y)| x - (p as i32 + 1) * y).collect();
            if set.contains(&cand) {
                p += 1;
            } else {
                break;
            }
        }
        let mut q = 0i64;
        loop {
            let cand: Root =
                a.iter().zip(b.iter()).map(|(&x, &y)| x + (q as i32 + 1) * y).collect();
            if set.contains(&cand) {
                q += 1;
            } else {
                break;
            }
        }
        p - q
    };
    let k = folded_simples.len();
    debug_assert_eq!(k, trd.rank);
    // find a permutation matching Cartan matrices
    let perms = permutations(k);
    let mut matched = None;
    'outer: for pm in &perms {
        for i in 0..k {
            for j in 0..k {
                let c = if i == j {
                    2
                } else {
                    folded_pairing(&folded_simples[pm[j]], &folded_simples[pm[i]])
                };
                if c != trd.cartan[i][j] {
                    continue 'outer;
                }
            }
        }
        matched = Some(pm.clone());
        break;
    }
    let pm = matched.ok_or_else(|| GroupError::Rejected("folded system mismatch".into()))?;
    // express each folded root in the folded simple basis, then map to the
    // target's coordinates
    let to_target = |fr: &Root| -> Root {
        // solve fr = sum c_i folded_simples[pm[i]]
        let simples: Vec<Root> = (0..k).map(|i| folded_simples[pm[i]].clone()).collect();
        solve_int(&simples, fr).expect("folded root decomposes")
    };

    let mut table: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    let tindex: BTreeMap<Root, usize> =
        trd.roots.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
    // normalize opposite pairs: rescale negative vectors so [h,[e,f]] acts by 2
    let mut vecs: BTreeMap<usize, LieVec> = BTreeMap::new();
    for (fr, v) in &folded_vectors {
        let t = to_target(fr);
        let ti = *tindex.get(&t).ok_or_else(|| {
            GroupError::Rejected("folded root missing in target system".into())
        })?;
        vecs.insert(ti, v.clone());
    }
    for (i, r) in trd.roots.iter().enumerate() {
        if !RootDatum::is_positive(r) {
            continue;
        }
        let neg: Root = r.iter().map(|x| -x).collect();
        let j = tindex[&neg];
        let e = vecs[&i].clone();
        let f = vecs[&j].clone();
        let h = ambient_bracket(&ambient, &e, &f);
        let back = ambient_bracket(&ambient, &h, &e);
        let c = vec_coeff(&back, &e).expect("eigenvector");
        debug_assert!(c != 0 && 2 % c == 0 || c == 2 || c == -2, "bad normalization {c}");
        if c != 2 {
            // rescale f by 2/c (c = -2 only; folds keep integrality)
            debug_assert_eq!(c, -2);
            let f2: LieVec = f.iter().map(|x| -x).collect();
            vecs.insert(j, f2);
        }
    }
    for (i, a) in trd.roots.iter().enumerate() {
        for (j, b) in trd.roots.iter().enumerate() {
            let sum: Root = a.iter().zip(b.iter()).map(|(&x, &y)| x + y).collect();
            if sum.iter().all(|&x| x == 0) || !tindex.contains_key(&sum) {
                continue;
            }
            let kk = tindex[&sum];
            let br = ambient_bracket(&ambient, &vecs[&i], &vecs[&j]);
            let c = vec_coeff(&br, &vecs[&kk])
                .ok_or_else(|| GroupError::Rejected("folded bracket mismatch".into()))?;
            debug_assert!(c != 0);
            table.insert((i, j), c);
        }
    }
    Ok(LieData::assemble(trd, table))
}

fn vec_coeff(m: &LieVec, base: &LieVec) -> Option<i64> {
    let mut c = None;
    for (&a, &b) in m.iter().zip(base) {
        if b != 0 {
            if a % b != 0 {
                return None;
            }
            let q = a / b;
            match c {
                None => c = Some(q),
                Some(p) if p != q => return None,
                _ => {}
            }
        } else if a != 0 {
            return None;
        }
    }
    c.or(if m.iter().all(|&x| x == 0) { Some(0) } else { None })
}

fn solve_int(basis: &[Root], target: &Root) -> Option<Root> {
    let dim = target.len();
    let k = basis.len();
    let mut a: Vec<Vec<i128>> = (0..dim)
        .map(|r| {
            (0..k)
                .map(|c| basis[c][r] as i128)
                .chain(std::iter::once(target[r] as i128))
                .collect()
        })
        .collect();
    let mut row = 0;
    let mut pivots = Vec::new();
    for col in 0..k {
        let Some(pr) = (row..dim).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(row, pr);
        let pv = a[row][col];
        for r in 0..dim {
            if r != row && a[r][col] != 0 {
                let f = a[r][col];
                for c in 0..=k {
                    a[r][c] = a[r][c] * pv - a[row][c] * f;
                }
            }
        }
        pivots.push((row, col));
        row += 1;
        if row == dim {
            break;
        }
    }
    for r in row..dim {
        if a[r][k] != 0 {
            return None;
        }
    }
    let mut out = vec![0i32; k];
    for &(r, c) in &pivots {
        if a[r][c] == 0 || a[r][k] % a[r][c] != 0 {
            return None;
        }
        out[c] = (a[r][k] / a[r][c]) as i32;
    }
    Some(out)
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for i in 0..k {
            let mut q = p.clone();
            q.insert(i, k - 1);
            out.push(q);
        }
    }
    out
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd_i64(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jacobi_ok(data: &LieData) -> bool {
        let nr = data.rd.roots.len();
        let rank = data.rd.rank;
        let dim = nr + rank;
        let basis = |i: usize| -> LieVec {
            let mut v = vec![0i64; dim];
            v[i] = 1;
            v
        };
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    let a = basis(i);
                    let b = basis(j);
                    let c = basis(k);
                    let t1 = ambient_bracket(data, &a, &ambient_bracket(data, &b, &c));
                    let t2 = ambient_bracket(data, &b, &ambient_bracket(data, &c, &a));
                    let t3 = ambient_bracket(data, &c, &ambient_bracket(data, &a, &b));
                    let sum: Vec<i64> = t1
                        .iter()
                        .zip(&t2)
                        .zip(&t3)
                        .map(|((x, y), z)| x + y + z)
                        .collect();
                    if sum.iter().any(|&x| x != 0) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn n_magnitudes_ok(data: &LieData) -> bool {
        for (i, a) in data.rd.roots.iter().enumerate() {
            for (j, b) in data.rd.roots.iter().enumerate() {
                let sum: Root = a.iter().zip(b.iter()).map(|(&x, &y)| x + y).collect();
                if sum.iter().all(|&x| x == 0) || !data.rd.is_root(&sum) {
                    continue;
                }
                let p = data.rd.string_down(b, a);
                let n = data.n_table.get(&(i, j)).copied().unwrap_or(0);
                if n.abs() != (p + 1) as i64 {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn a2_structure() {
        let d = LieData::build(TypeLabel::A(2)).unwrap();
        assert!(jacobi_ok(&d));
        assert!(n_magnitudes_ok(&d));
        // N antisymmetry
        let a = vec![1, 0];
        let b = vec![0, 1];
        assert_eq!(d.n_of(&a, &b), -d.n_of(&b, &a));
        assert_eq!(d.n_of(&a, &b).abs(), 1);
    }

    #[test]
    fn orthogonal_pair_brackets_to_zero() {
        let d = LieData::build(TypeLabel::A(3)).unwrap();
        // alpha_1 and alpha_3 span an A1 x A1 pair
        let a = vec![1, 0, 0];
        let b = vec![0, 0, 1];
        assert_eq!(d.n_of(&a, &b), 0);
    }

    #[test]
    fn classical_types_structure() {
        for label in [TypeLabel::B(2), TypeLabel::B(3), TypeLabel::C(2), TypeLabel::C(3)] {
            let d = LieData::build(label).unwrap();
            assert!(jacobi_ok(&d), "jacobi {label}");
            assert!(n_magnitudes_ok(&d), "string magnitudes {label}");
        }
    }

    #[test]
    fn g2_structure_max_constant_three() {
        let d = LieData::build(TypeLabel::G2).unwrap();
        assert!(jacobi_ok(&d));
        assert!(n_magnitudes_ok(&d));
        let max = d.n_table.values().map(|v| v.abs()).max().unwrap();
        assert_eq!(max, 3);
    }

    #[test]
    fn extraspecial_pairs_positive() {
        for label in [TypeLabel::A(3), TypeLabel::C(3), TypeLabel::G2] {
            let d = LieData::build(label).unwrap();
            let mut pos = d.rd.positive_roots();
            pos.sort_by_key(|r| (RootDatum::height(r), r.clone()));
            for gamma in pos.iter().filter(|r| RootDatum::height(r) >= 2) {
                let alpha = d
                    .rd
                    .roots
                    .iter()
                    .filter(|r| RootDatum::is_positive(r))
                    .find(|alpha| {
                        let beta: Root =
                            gamma.iter().zip(alpha.iter()).map(|(&g, &a)| g - a).collect();
                        RootDatum::is_positive(&beta) && d.rd.is_root(&beta)
                    })
                    .unwrap()
                    .clone();
                let beta: Root =
                    gamma.iter().zip(alpha.iter()).map(|(&g, &a)| g - a).collect();
                assert!(d.n_of(&alpha, &beta) > 0, "{label}: {alpha:?}+{beta:?}");
            }
        }
    }

    #[test]
    fn f4_structure() {
        let d = LieData::build(TypeLabel::F4).unwrap();
        assert!(n_magnitudes_ok(&d));
        // spot-check Jacobi on a sample of triples
        let nr = d.rd.roots.len();
        let dim = nr + d.rd.rank;
        let basis = |i: usize| -> LieVec {
            let mut v = vec![0i64; dim];
            v[i] = 1;
            v
        };
        for (i, j, k) in [(0, 1, 2), (3, 17, 40), (5, 20, 33), (10, 48, 50), (2, 30, 49)] {
            let t1 = ambient_bracket(&d, &basis(i), &ambient_bracket(&d, &basis(j), &basis(k)));
            let t2 = ambient_bracket(&d, &basis(j), &ambient_bracket(&d, &basis(k), &basis(i)));
            let t3 = ambient_bracket(&d, &basis(k), &ambient_bracket(&d, &basis(i), &basis(j)));
            let sum: Vec<i64> =
                t1.iter().zip(&t2).zip(&t3).map(|((x, y), z)| x + y + z).collect();
            assert!(sum.iter().all(|&x| x == 0));
        }
    }
}
