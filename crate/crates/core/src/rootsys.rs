//! Classical root systems in simple-root coordinates, and relative root data
//! of a standard parabolic: the projection killing the Levi part, its fibers,
//! multiplicities, and type recognition (including non-reduced BC).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::GroupError;

/// Classical type labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
pub enum TypeLabel {
    A(usize),
    B(usize),
    C(usize),
    D(usize),
    E6,
    E7,
    E8,
    F4,
    G2,
    /// Non-reduced relative type.
    BC(usize),
}

impl TypeLabel {
    pub fn rank(&self) -> usize {
        match *self {
            TypeLabel::A(n) | TypeLabel::B(n) | TypeLabel::C(n) | TypeLabel::D(n)
            | TypeLabel::BC(n) => n,
            TypeLabel::E6 => 6,
            TypeLabel::E7 => 7,
            TypeLabel::E8 => 8,
            TypeLabel::F4 => 4,
            TypeLabel::G2 => 2,
        }
    }

    pub fn parse(letter: &str, rank: usize) -> Result<TypeLabel, GroupError> {
        let t = match letter {
            "A" | "a" => TypeLabel::A(rank),
            "B" | "b" => TypeLabel::B(rank),
            "C" | "c" => TypeLabel::C(rank),
            "D" | "d" => TypeLabel::D(rank),
            "E" | "e" => match rank {
                6 => TypeLabel::E6,
                7 => TypeLabel::E7,
                8 => TypeLabel::E8,
                _ => return Err(GroupError::Rejected(format!("no type E{rank}"))),
            },
            "F" | "f" if rank == 4 => TypeLabel::F4,
            "G" | "g" if rank == 2 => TypeLabel::G2,
            _ => return Err(GroupError::Rejected(format!("unknown type {letter}{rank}"))),
        };
        Ok(t)
    }
}

impl fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeLabel::A(n) => write!(f, "A{n}"),
            TypeLabel::B(n) => write!(f, "B{n}"),
            TypeLabel::C(n) => write!(f, "C{n}"),
            TypeLabel::D(n) => write!(f, "D{n}"),
            TypeLabel::E6 => write!(f, "E6"),
            TypeLabel::E7 => write!(f, "E7"),
            TypeLabel::E8 => write!(f, "E8"),
            TypeLabel::F4 => write!(f, "F4"),
            TypeLabel::G2 => write!(f, "G2"),
            TypeLabel::BC(n) => write!(f, "BC{n}"),
        }
    }
}

/// A root in simple-root integer coordinates.
pub type Root = Vec<i32>;

/// A finite root system with Cartan data, roots enumerated by reflection
/// closure from the simple roots.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootDatum {
    pub label: TypeLabel,
    pub rank: usize,
    /// Cartan matrix: `cartan[i][j] = <alpha_j, alpha_i^vee>`.
    pub cartan: Vec<Vec<i64>>,
    /// All roots, sorted; closed under negation.
    pub roots: Vec<Root>,
    /// Symmetrized form `bilinear[i][j] = (alpha_i, alpha_j)`, integer scaled.
    pub bilinear: Vec<Vec<i64>>,
    pub reduced: bool,
}

fn cartan_matrix(label: TypeLabel) -> Result<Vec<Vec<i64>>, GroupError> {
    let n = label.rank();
    let chain = |n: usize| {
        let mut a = vec![vec![0i64; n]; n];
        for i in 0..n {
            a[i][i] = 2;
            if i + 1 < n {
                a[i][i + 1] = -1;
                a[i + 1][i] = -1;
            }
        }
        a
    };
    let m = match label {
        TypeLabel::A(n) => {
            if n < 1 {
                return Err(GroupError::Rejected("A_n needs n >= 1".into()));
            }
            chain(n)
        }
        TypeLabel::B(n) => {
            if n < 2 {
                return Err(GroupError::Rejected("B_n needs n >= 2".into()));
            }
            let mut a = chain(n);
            // alpha_n short: <alpha_{n-1}, alpha_n^vee> = -2
            a[n - 1][n - 2] = -2;
            a
        }
        TypeLabel::C(n) => {
            if n < 2 {
                return Err(GroupError::Rejected("C_n needs n >= 2".into()));
            }
            let mut a = chain(n);
            // alpha_n long: <alpha_n, alpha_{n-1}^vee> = -2
            a[n - 2][n - 1] = -2;
            a
        }
        TypeLabel::D(n) => {
            if n < 4 {
                return Err(GroupError::Rejected("D_n needs n >= 4".into()));
            }
            let mut a = chain(n - 1);
            for row in &mut a {
                row.push(0);
            }
            a.push(vec![0; n]);
            a[n - 1][n - 1] = 2;
            // node n attached to node n-2
            a[n - 1][n - 3] = -1;
            a[n - 3][n - 1] = -1;
            a
        }
        TypeLabel::E6 | TypeLabel::E7 | TypeLabel::E8 => {
            // Bourbaki: node 2 attached to node 4; chain 1-3-4-5-...-n
            let mut a = vec![vec![0i64; n]; n];
            for i in 0..n {
                a[i][i] = 2;
            }
            let mut link = |i: usize, j: usize| {
                a[i - 1][j - 1] = -1;
                a[j - 1][i - 1] = -1;
            };
            link(1, 3);
            link(3, 4);
            link(2, 4);
            link(4, 5);
            link(5, 6);
            if n >= 7 {
                link(6, 7);
            }
            if n >= 8 {
                link(7, 8);
            }
            a
        }
        TypeLabel::F4 => {
            let mut a = chain(4);
            // alpha_1, alpha_2 long; alpha_3, alpha_4 short
            a[2][1] = -2;
            a
        }
        TypeLabel::G2 => {
            // alpha_1 short, alpha_2 long; highest root 3a1 + 2a2
            vec![vec![2, -3], vec![-1, 2]]
        }
        TypeLabel::BC(_) => {
            return Err(GroupError::Rejected(
                "BC systems arise only as relative root data".into(),
            ))
        }
    };
    Ok(m)
}

/// Integer symmetrization d_i * a_ij with d from the valued graph.
fn symmetrize(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = cartan.len();
    // d_j / d_i = a_ij / a_ji on edges; propagate rational d, then scale.
    let mut num = vec![0i64; n];
    let mut den = vec![1i64; n];
    num[0] = 1;
    let mut queue = vec![0usize];
    let mut seen = vec![false; n];
    seen[0] = true;
    while let Some(i) = queue.pop() {
        for j in 0..n {
            if i != j && cartan[i][j] != 0 && !seen[j] {
                // d_j = d_i * a_ij / a_ji
                num[j] = num[i] * cartan[i][j];
                den[j] = den[i] * cartan[j][i];
                let g = gcd_i64(num[j].abs(), den[j].abs()).max(1);
                num[j] /= g;
                den[j] /= g;
                if den[j] < 0 {
                    num[j] = -num[j];
                    den[j] = -den[j];
                }
                seen[j] = true;
                queue.push(j);
            }
        }
    }
    let lcm = den.iter().fold(1i64, |acc, &d| acc / gcd_i64(acc.abs(), d.abs()).max(1) * d);
    let d: Vec<i64> = (0..n).map(|i| num[i] * (lcm / den[i])).collect();
    let mut b = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            b[i][j] = d[i] * cartan[i][j];
        }
    }
    b
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd_i64(b, a % b)
    }
}

impl RootDatum {
    /// Build the root system of the given type by reflection closure.
    pub fn build(label: TypeLabel) -> Result<RootDatum, GroupError> {
        let cartan = cartan_matrix(label)?;
        let n = label.rank();
        let mut set: BTreeSet<Root> = BTreeSet::new();
        let mut frontier: Vec<Root> = Vec::new();
        for i in 0..n {
            let mut r = vec![0i32; n];
            r[i] = 1;
            set.insert(r.clone());
            frontier.push(r);
        }
        while let Some(beta) = frontier.pop() {
            for i in 0..n {
                // s_i(beta) = beta - <beta, alpha_i^vee> alpha_i
                let pairing: i64 =
                    (0..n).map(|j| beta[j] as i64 * cartan[i][j]).sum();
                let mut r = beta.clone();
                r[i] -= pairing as i32;
                if set.insert(r.clone()) {
                    frontier.push(r.clone());
                }
                let neg: Root = r.iter().map(|x| -x).collect();
                if set.insert(neg.clone()) {
                    frontier.push(neg);
                }
            }
        }
        let bilinear = symmetrize(&cartan);
        Ok(RootDatum {
            label,
            rank: n,
            cartan,
            roots: set.into_iter().collect(),
            bilinear,
            reduced: true,
        })
    }

    pub fn is_root(&self, r: &Root) -> bool {
        self.roots.binary_search(r).is_ok()
    }

    pub fn height(r: &Root) -> i32 {
        r.iter().sum()
    }

    pub fn is_positive(r: &Root) -> bool {
        Self::height(r) > 0
    }

    pub fn positive_roots(&self) -> Vec<Root> {
        self.roots.iter().filter(|r| Self::is_positive(r)).cloned().collect()
    }

    /// `(beta, gamma)` under the scaled invariant form.
    pub fn form(&self, beta: &Root, gamma: &Root) -> i64 {
        let n = self.rank;
        let mut s = 0i64;
        for i in 0..n {
            for j in 0..n {
                s += beta[i] as i64 * gamma[j] as i64 * self.bilinear[i][j];
            }
        }
        s
    }

    /// Cartan integer `<beta, alpha^vee> = 2 (beta, alpha) / (alpha, alpha)`.
    pub fn pairing(&self, beta: &Root, alpha: &Root) -> i64 {
        let num = 2 * self.form(beta, alpha);
        let den = self.form(alpha, alpha);
        debug_assert!(den != 0 && num % den == 0);
        num / den
    }

    pub fn reflect(&self, beta: &Root, alpha: &Root) -> Root {
        let c = self.pairing(beta, alpha);
        beta.iter().zip(alpha).map(|(&b, &a)| b - c as i32 * a).collect()
    }

    /// The highest root and its simple-root coefficients.
    pub fn highest_root(&self) -> (Root, Vec<i32>) {
        let r = self
            .positive_roots()
            .into_iter()
            .max_by_key(|r| (Self::height(r), r.clone()))
            .expect("nonempty system");
        let coeffs = r.clone();
        (r, coeffs)
    }

    /// Largest `p >= 0` with `beta - p*alpha` a root (down-string length).
    pub fn string_down(&self, beta: &Root, alpha: &Root) -> i32 {
        let mut p = 0;
        loop {
            let cand: Root = beta
                .iter()
                .zip(alpha)
                .map(|(&b, &a)| b - (p + 1) * a)
                .collect();
            if self.is_root(&cand) {
                p += 1;
            } else {
                return p;
            }
        }
    }

    pub fn string_up(&self, beta: &Root, alpha: &Root) -> i32 {
        let mut q = 0;
        loop {
            let cand: Root = beta
                .iter()
                .zip(alpha)
                .map(|(&b, &a)| b + (q + 1) * a)
                .collect();
            if self.is_root(&cand) {
                q += 1;
            } else {
                return q;
            }
        }
    }
}

/// A permutation group action on Dynkin nodes, given by generators.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct DiagramAction {
    pub generators: Vec<Vec<usize>>,
}

impl DiagramAction {
    pub fn trivial() -> Self {
        DiagramAction { generators: Vec::new() }
    }

    /// Close the generators into the full permutation list (identity first).
    fn elements(&self, n: usize) -> Result<Vec<Vec<usize>>, GroupError> {
        let id: Vec<usize> = (0..n).collect();
        let mut set = BTreeSet::new();
        set.insert(id.clone());
        for g in &self.generators {
            if g.len() != n || {
                let mut s = g.clone();
                s.sort_unstable();
                s != id
            } {
                return Err(GroupError::Rejected("malformed node permutation".into()));
            }
        }
        let mut changed = true;
        while changed {
            changed = false;
            let cur: Vec<_> = set.iter().cloned().collect();
            for a in &cur {
                for g in &self.generators {
                    let comp: Vec<usize> = (0..n).map(|i| g[a[i]]).collect();
                    if set.insert(comp) {
                        changed = true;
                    }
                }
            }
        }
        Ok(set.into_iter().collect())
    }
}

/// Relative root datum of a standard parabolic: the projection onto
/// Gamma-orbit sums over `J`, with fibers and multiplicities.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RelativeRootDatum {
    pub source: RootDatum,
    /// Nodes generating the split part (circled nodes).
    pub j_nodes: Vec<usize>,
    /// Gamma-orbits of `J`, each sorted; projection coordinates in this order.
    pub orbits: Vec<Vec<usize>>,
    /// Nonzero images, sorted.
    pub relative_roots: Vec<Root>,
    /// Fiber of each relative root.
    pub fibers: BTreeMap<Root, Vec<Root>>,
    /// Multiplicity m_alpha for each relative root.
    pub multiples: BTreeMap<Root, u32>,
    pub rank: usize,
    pub label: TypeLabel,
    pub reduced: bool,
}

impl RelativeRootDatum {
    /// Compute the relative root datum for the parabolic with circled nodes
    /// `j_nodes` (0-based) and diagram action `gamma`.
    pub fn project(
        source: &RootDatum,
        j_nodes: &[usize],
        gamma: &DiagramAction,
    ) -> Result<RelativeRootDatum, GroupError> {
        let n = source.rank;
        for &j in j_nodes {
            if j >= n {
                return Err(GroupError::Rejected(format!("node {j} out of range")));
            }
        }
        let elements = gamma.elements(n)?;
        // gamma must consist of diagram automorphisms
        for g in &elements {
            for i in 0..n {
                for j in 0..n {
                    if source.cartan[g[i]][g[j]] != source.cartan[i][j] {
                        return Err(GroupError::Rejected(
                            "permutation is not a diagram automorphism".into(),
                        ));
                    }
                }
            }
        }
        let jset: BTreeSet<usize> = j_nodes.iter().copied().collect();
        // J must be Gamma-invariant
        for g in &elements {
            for &j in &jset {
                if !jset.contains(&g[j]) {
                    return Err(GroupError::Rejected("J is not Gamma-invariant".into()));
                }
            }
        }
        // orbits of J under Gamma
        let mut orbits: Vec<Vec<usize>> = Vec::new();
        let mut seen: BTreeSet<usize> = BTreeSet::new();
        for &j in &jset {
            if seen.contains(&j) {
                continue;
            }
            let mut orb: BTreeSet<usize> = BTreeSet::new();
            orb.insert(j);
            for g in &elements {
                orb.insert(g[j]);
            }
            for &o in &orb {
                seen.insert(o);
            }
            orbits.push(orb.into_iter().collect());
        }
        orbits.sort();

        let project_root = |r: &Root| -> Root {
            orbits
                .iter()
                .map(|orb| orb.iter().map(|&i| r[i]).sum())
                .collect()
        };

        let mut fibers: BTreeMap<Root, Vec<Root>> = BTreeMap::new();
        for r in &source.roots {
            let img = project_root(r);
            if img.iter().any(|&x| x != 0) {
                fibers.entry(img).or_default().push(r.clone());
            }
        }
        let relative_roots: Vec<Root> = fibers.keys().cloned().collect();
        let relset: BTreeSet<&Root> = relative_roots.iter().collect();
        let mut multiples = BTreeMap::new();
        for a in &relative_roots {
            let mut m = 1u32;
            loop {
                let next: Root = a.iter().map(|&x| x * (m as i32 + 1)).collect();
                if relset.contains(&next) {
                    m += 1;
                } else {
                    break;
                }
            }
            multiples.insert(a.clone(), m);
        }
        let reduced = multiples.values().all(|&m| m == 1);
        let rank = orbits.len();
        let label = classify_relative(&relative_roots, rank, reduced)?;
        Ok(RelativeRootDatum {
            source: source.clone(),
            j_nodes: j_nodes.to_vec(),
            orbits,
            relative_roots,
            fibers,
            multiples,
            rank,
            label,
            reduced,
        })
    }

    pub fn project_root(&self, r: &Root) -> Root {
        self.orbits
            .iter()
            .map(|orb| orb.iter().map(|&i| r[i]).sum())
            .collect()
    }

    pub fn is_relative_root(&self, a: &Root) -> bool {
        self.fibers.contains_key(a)
    }

    pub fn positive_relative_roots(&self) -> Vec<Root> {
        self.relative_roots
            .iter()
            .filter(|r| r.iter().sum::<i32>() > 0)
            .cloned()
            .collect()
    }

    /// Simple relative roots: indecomposable positives.
    pub fn simple_relative_roots(&self) -> Vec<Root> {
        let pos = self.positive_relative_roots();
        let posset: BTreeSet<&Root> = pos.iter().collect();
        pos.iter()
            .filter(|a| {
                !pos.iter().any(|b| {
                    if b == *a {
                        return false;
                    }
                    let diff: Root = a.iter().zip(b.iter()).map(|(&x, &y)| x - y).collect();
                    diff.iter().sum::<i32>() > 0 && posset.contains(&diff)
                })
            })
            .cloned()
            .collect()
    }

    /// m_alpha and the fibers of k*alpha for 1 <= k <= m_alpha.
    pub fn relative_multiples(&self, a: &Root) -> Result<(u32, Vec<Vec<Root>>), GroupError> {
        let m = *self
            .multiples
            .get(a)
            .ok_or_else(|| GroupError::Rejected("not a relative root".into()))?;
        let mut out = Vec::new();
        for k in 1..=m {
            let ka: Root = a.iter().map(|&x| x * k as i32).collect();
            out.push(self.fibers[&ka].clone());
        }
        Ok((m, out))
    }

    /// Highest positive relative root with its coefficients in the simple
    /// relative basis.
    pub fn highest_relative_root(&self) -> (Root, Vec<i32>) {
        let pos = self.positive_relative_roots();
        let simples = self.simple_relative_roots();
        let hi = pos
            .into_iter()
            .max_by_key(|r| (r.iter().sum::<i32>(), r.clone()))
            .expect("nonempty");
        let coeffs = express_in_simples(&hi, &simples).expect("highest root decomposes");
        (hi, coeffs)
    }

    /// Coefficient vector of `a` in the simple relative basis.
    pub fn simple_coeffs(&self, a: &Root) -> Option<Vec<i32>> {
        express_in_simples(&a.clone(), &self.simple_relative_roots())
    }

    /// Relative Cartan integer via root strings inside the relative system.
    pub fn rel_pairing(&self, beta: &Root, alpha: &Root) -> i64 {
        let member = |r: &Root| self.is_relative_root(r);
        let mut p = 0i64;
        loop {
            let cand: Root = beta
                .iter()
                .zip(alpha)
                .map(|(&b, &a)| b - (p as i32 + 1) * a)
                .collect();
            if member(&cand) {
                p += 1;
            } else {
                break;
            }
        }
        let mut q = 0i64;
        loop {
            let cand: Root = beta
                .iter()
                .zip(alpha)
                .map(|(&b, &a)| b + (q as i32 + 1) * a)
                .collect();
            if member(&cand) {
                q += 1;
            } else {
                break;
            }
        }
        p - q
    }

    /// The distinguished simple relative root index per the terminal-vertex
    /// convention, with the coefficient `m_1(highest)` it carries.
    pub fn pick_alpha1(&self) -> Result<(usize, i64), GroupError> {
        if self.rank < 2 {
            return Err(GroupError::Rejected(
                "isotropic rank >= 2 required to choose a distinguished simple root".into(),
            ));
        }
        let simples = self.simple_relative_roots();
        let (hi, _) = self.highest_relative_root();
        let m = express_in_simples(&hi, &simples)
            .ok_or_else(|| GroupError::Rejected("highest root does not decompose".into()))?;
        // Dynkin adjacency among relative simples via strings.
        let k = simples.len();
        let deg = |i: usize| -> usize {
            (0..k)
                .filter(|&j| j != i && self.rel_pairing(&simples[j], &simples[i]) != 0)
                .count()
        };
        for i in 0..k {
            if deg(i) <= 1 && m[i] == 1 {
                return Ok((i, 1));
            }
        }
        // fall back: unique root adjacent to the lowest root, coefficient 2
        for i in 0..k {
            if m[i] == 2 && self.rel_pairing(&hi, &simples[i]) != 0 {
                return Ok((i, 2));
            }
        }
        Err(GroupError::Rejected("no admissible distinguished vertex".into()))
    }
}

/// Solve `target = sum c_i simples_i` over the nonnegative integers (exact
/// rational elimination; relative simples are linearly independent).
fn express_in_simples(target: &Root, simples: &[Root]) -> Option<Vec<i32>> {
    let dim = target.len();
    let k = simples.len();
    // rational Gaussian elimination on the k x dim system
    let mut m: Vec<Vec<f64>> = Vec::new();
    let _ = &mut m;
    // exact integer elimination via i128 fractions
    let mut a: Vec<Vec<i128>> = (0..dim)
        .map(|r| {
            (0..k)
                .map(|c| simples[c][r] as i128)
                .chain(std::iter::once(target[r] as i128))
                .collect()
        })
        .collect();
    let mut row = 0usize;
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
    // consistency: rows beyond pivots must vanish
    for r in row..dim {
        if a[r][k] != 0 {
            return None;
        }
    }
    let mut out = vec![0i32; k];
    for &(r, c) in &pivots {
        let pv = a[r][c];
        let rhs = a[r][k];
        if pv == 0 || rhs % pv != 0 {
            return None;
        }
        out[c] = (rhs / pv) as i32;
    }
    Some(out)
}

/// Recognize the type of a (possibly non-reduced) relative system from its
/// non-divisible part.
fn classify_relative(
    roots: &[Root],
    rank: usize,
    reduced: bool,
) -> Result<TypeLabel, GroupError> {
    if !reduced {
        return Ok(TypeLabel::BC(rank));
    }
    let set: BTreeSet<&Root> = roots.iter().collect();
    let pos: Vec<Root> = roots
        .iter()
        .filter(|r| r.iter().sum::<i32>() > 0)
        .cloned()
        .collect();
    let posset: BTreeSet<&Root> = pos.iter().collect();
    let simples: Vec<Root> = pos
        .iter()
        .filter(|a| {
            !pos.iter().any(|b| {
                if b == *a {
                    return false;
                }
                let diff: Root = a.iter().zip(b.iter()).map(|(&x, &y)| x - y).collect();
                diff.iter().sum::<i32>() > 0 && posset.contains(&diff)
            })
        })
        .cloned()
        .collect();
    let k = simples.len();
    if k != rank {
        // reducible or degenerate; report by rank only
        return Ok(TypeLabel::A(rank.max(1)));
    }
    if k == 1 {
        return Ok(TypeLabel::A(1));
    }
    // string-based Cartan integers
    let pairing = |beta: &Root, alpha: &Root| -> i64 {
        let mut p = 0i64;
        loop {
            let cand: Root = beta
                .iter()
                .zip(alpha)
                .map(|(&b, &a)| b - (p as i32 + 1) * a)
                .collect();
            if set.contains(&cand) {
                p += 1;
            } else {
                break;
            }
        }
        let mut q = 0i64;
        loop {
            let cand: Root = beta
                .iter()
                .zip(alpha)
                .map(|(&b, &a)| b + (q as i32 + 1) * a)
                .collect();
            if set.contains(&cand) {
                q += 1;
            } else {
                break;
            }
        }
        p - q
    };
    let mut cart = vec![vec![0i64; k]; k];
    for i in 0..k {
        for j in 0..k {
            cart[i][j] = if i == j { 2 } else { pairing(&simples[j], &simples[i]) };
        }
    }
    classify_cartan(&cart)
}

/// Identify an irreducible Cartan matrix.
pub fn classify_cartan(cart: &[Vec<i64>]) -> Result<TypeLabel, GroupError> {
    let k = cart.len();
    if k == 1 {
        return Ok(TypeLabel::A(1));
    }
    let mut triple = None;
    let mut double = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for i in 0..k {
        for j in (i + 1)..k {
            let m = cart[i][j] * cart[j][i];
            match m {
                0 => {}
                1 => edges.push((i, j)),
                2 => {
                    double = Some((i, j));
                    edges.push((i, j));
                }
                3 => {
                    triple = Some((i, j));
                    edges.push((i, j));
                }
                _ => return Err(GroupError::Rejected("not a finite Cartan matrix".into())),
            }
        }
    }
    let degree = |i: usize| edges.iter().filter(|(a, b)| *a == i || *b == i).count();
    if triple.is_some() {
        return if k == 2 {
            Ok(TypeLabel::G2)
        } else {
            Err(GroupError::Rejected("triple edge outside G2".into()))
        };
    }
    if let Some((i, j)) = double {
        if k == 2 {
            return Ok(TypeLabel::B(2));
        }
        // component sizes on each side of the double edge
        let mut comp = vec![false; k];
        let mut stack = vec![i];
        comp[i] = true;
        while let Some(v) = stack.pop() {
            for &(a, b) in &edges {
                if (a, b) == (i.min(j), i.max(j)) {
                    continue;
                }
                for (x, y) in [(a, b), (b, a)] {
                    if x == v && !comp[y] {
                        comp[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        let side_i = comp.iter().filter(|&&b| b).count();
        let side_j = k - side_i;
        if side_i >= 2 && side_j >= 2 {
            return Ok(TypeLabel::F4);
        }
        // cart[i][j] = -2 means alpha_i is short relative to alpha_j
        let (short, _long) = if cart[i][j] == -2 { (i, j) } else { (j, i) };
        let short_is_terminal = degree(short) == 1;
        if short_is_terminal {
            Ok(TypeLabel::B(k))
        } else {
            Ok(TypeLabel::C(k))
        }
    } else {
        // simply laced: A (chain), D (fork at distance 1 from two leaves), E
        let forks: Vec<usize> = (0..k).filter(|&i| degree(i) >= 3).collect();
        match forks.len() {
            0 => Ok(TypeLabel::A(k)),
            1 => {
                let f = forks[0];
                // branch lengths from the fork
                let mut lens = Vec::new();
                for &(a, b) in &edges {
                    let nb = if a == f {
                        Some(b)
                    } else if b == f {
                        Some(a)
                    } else {
                        None
                    };
                    if let Some(mut prev) = Some(f) {
                        if let Some(mut cur) = nb {
                            let mut len = 1;
                            loop {
                                let next = edges
                                    .iter()
                                    .filter_map(|&(x, y)| {
                                        if x == cur && y != prev {
                                            Some(y)
                                        } else if y == cur && x != prev {
                                            Some(x)
                                        } else {
                                            None
                                        }
                                    })
                                    .next();
                                match next {
                                    Some(nx) => {
                                        prev = cur;
                                        cur = nx;
                                        len += 1;
                                    }
                                    None => break,
                                }
                            }
                            lens.push(len);
                        }
                    }
                }
                lens.sort_unstable();
                match lens.as_slice() {
                    [1, 1, _] => Ok(TypeLabel::D(k)),
                    [1, 2, 2] => Ok(TypeLabel::E6),
                    [1, 2, 3] => Ok(TypeLabel::E7),
                    [1, 2, 4] => Ok(TypeLabel::E8),
                    _ => Err(GroupError::Rejected("unrecognized fork".into())),
                }
            }
            _ => Err(GroupError::Rejected("multiple forks".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_one_roots() {
        let rd = RootDatum::build(TypeLabel::A(1)).unwrap();
        assert_eq!(rd.roots, vec![vec![-1], vec![1]]);
    }

    #[test]
    fn classical_counts() {
        // brute-force closure enumeration is the builder itself; counts are
        // the classical values
        for (label, count) in [
            (TypeLabel::A(2), 6),
            (TypeLabel::A(3), 12),
            (TypeLabel::B(2), 8),
            (TypeLabel::B(3), 18),
            (TypeLabel::C(3), 18),
            (TypeLabel::D(4), 24),
            (TypeLabel::G2, 12),
            (TypeLabel::F4, 48),
            (TypeLabel::E6, 72),
        ] {
            let rd = RootDatum::build(label).unwrap();
            assert_eq!(rd.roots.len(), count, "{label}");
        }
    }

    #[test]
    fn reflection_closure_property() {
        for label in [TypeLabel::A(3), TypeLabel::B(3), TypeLabel::G2] {
            let rd = RootDatum::build(label).unwrap();
            for a in &rd.roots {
                for b in &rd.roots {
                    assert!(rd.is_root(&rd.reflect(b, a)));
                }
            }
        }
    }

    #[test]
    fn highest_roots() {
        let a2 = RootDatum::build(TypeLabel::A(2)).unwrap();
        assert_eq!(a2.highest_root().0, vec![1, 1]);
        let c2 = RootDatum::build(TypeLabel::C(2)).unwrap();
        assert_eq!(c2.highest_root().0, vec![2, 1]);
        let g2 = RootDatum::build(TypeLabel::G2).unwrap();
        assert_eq!(g2.highest_root().0, vec![3, 2]);
    }

    #[test]
    fn invalid_types_rejected() {
        assert!(RootDatum::build(TypeLabel::B(1)).is_err());
        assert!(RootDatum::build(TypeLabel::D(3)).is_err());
        assert!(TypeLabel::parse("E", 9).is_err());
    }

    #[test]
    fn relative_a3_middle_node() {
        let rd = RootDatum::build(TypeLabel::A(3)).unwrap();
        let rel = RelativeRootDatum::project(&rd, &[1], &DiagramAction::trivial()).unwrap();
        assert_eq!(rel.rank, 1);
        assert_eq!(rel.label, TypeLabel::A(1));
        assert_eq!(rel.relative_roots.len(), 2);
        let fiber = &rel.fibers[&vec![1]];
        assert_eq!(fiber.len(), 4);
    }

    #[test]
    fn relative_c2_first_node_is_bc1() {
        let rd = RootDatum::build(TypeLabel::C(2)).unwrap();
        let rel = RelativeRootDatum::project(&rd, &[0], &DiagramAction::trivial()).unwrap();
        assert_eq!(rel.label, TypeLabel::BC(1));
        let (m, fibers) = rel.relative_multiples(&vec![1]).unwrap();
        assert_eq!(m, 2);
        assert_eq!(fibers[1], vec![vec![2, 1]]);
    }

    #[test]
    fn relative_c3_two_nodes_is_bc2() {
        let rd = RootDatum::build(TypeLabel::C(3)).unwrap();
        let rel = RelativeRootDatum::project(&rd, &[0, 1], &DiagramAction::trivial()).unwrap();
        assert_eq!(rel.label, TypeLabel::BC(2));
        assert_eq!(rel.relative_roots.len(), 12);
        // middle-length simple image has multiplicity 1
        let (m, _) = rel.relative_multiples(&vec![1, 0]).unwrap();
        assert_eq!(m, 1);
    }

    #[test]
    fn relative_d12_paper_example() {
        let rd = RootDatum::build(TypeLabel::D(12)).unwrap();
        let rel =
            RelativeRootDatum::project(&rd, &[3, 7], &DiagramAction::trivial()).unwrap();
        assert_eq!(rel.label, TypeLabel::BC(2));
    }

    #[test]
    fn fibers_partition() {
        let rd = RootDatum::build(TypeLabel::C(3)).unwrap();
        let rel = RelativeRootDatum::project(&rd, &[0, 1], &DiagramAction::trivial()).unwrap();
        let fiber_total: usize = rel.fibers.values().map(|f| f.len()).sum();
        let kernel = rd
            .roots
            .iter()
            .filter(|r| rel.project_root(r).iter().all(|&x| x == 0))
            .count();
        assert_eq!(fiber_total + kernel, rd.roots.len());
    }

    #[test]
    fn projection_is_linear_on_root_pairs() {
        let rd = RootDatum::build(TypeLabel::B(3)).unwrap();
        let rel = RelativeRootDatum::project(&rd, &[0, 1], &DiagramAction::trivial()).unwrap();
        for a in &rd.roots {
            for b in &rd.roots {
                let sum: Root = a.iter().zip(b.iter()).map(|(&x, &y)| x + y).collect();
                let pa = rel.project_root(a);
                let pb = rel.project_root(b);
                let ps: Root = pa.iter().zip(pb.iter()).map(|(&x, &y)| x + y).collect();
                assert_eq!(rel.project_root(&sum), ps);
            }
        }
    }

    #[test]
    fn pick_alpha1_examples() {
        // split A_n: any terminal vertex works with coefficient 1
        let rd = RootDatum::build(TypeLabel::A(3)).unwrap();
        let rel = RelativeRootDatum::project(&rd, &[0, 1, 2], &DiagramAction::trivial()).unwrap();
        let (_, m) = rel.pick_alpha1().unwrap();
        assert_eq!(m, 1);

        // split C_3: the long terminal node carries coefficient 1
        let rd = RootDatum::build(TypeLabel::C(3)).unwrap();
        let rel =
            RelativeRootDatum::project(&rd, &[0, 1, 2], &DiagramAction::trivial()).unwrap();
        let (i, m) = rel.pick_alpha1().unwrap();
        assert_eq!(m, 1);
        let simples = rel.simple_relative_roots();
        // chosen vertex is terminal
        let others: Vec<_> = (0..simples.len()).filter(|&j| j != i).collect();
        let deg = others
            .iter()
            .filter(|&&j| rel.rel_pairing(&simples[j], &simples[i]) != 0)
            .count();
        assert_eq!(deg, 1);

        // split G2: no coefficient-1 terminal vertex; the fallback applies
        let rd = RootDatum::build(TypeLabel::G2).unwrap();
        let rel = RelativeRootDatum::project(&rd, &[0, 1], &DiagramAction::trivial()).unwrap();
        let (i, m) = rel.pick_alpha1().unwrap();
        assert_eq!(m, 2);
        let (hi, coeffs) = rel.highest_relative_root();
        assert_eq!(coeffs[i], 2);
        assert_ne!(rel.rel_pairing(&hi, &rel.simple_relative_roots()[i]), 0);
        // the highest root is the only positive root with that coefficient 2
        let simples = rel.simple_relative_roots();
        let count = rel
            .positive_relative_roots()
            .iter()
            .filter(|r| {
                express_in_simples(r, &simples)
                    .map(|c| c[i] == 2)
                    .unwrap_or(false)
            })
            .count();
        assert_eq!(count, 1);

        // rank 1 rejected
        let rd = RootDatum::build(TypeLabel::A(3)).unwrap();
        let rel = RelativeRootDatum::project(&rd, &[1], &DiagramAction::trivial()).unwrap();
        assert!(rel.pick_alpha1().is_err());
    }

    #[test]
    fn gamma_invariance_enforced() {
        let rd = RootDatum::build(TypeLabel::A(3)).unwrap();
        // the flip automorphism of A3: 1<->3
        let flip = DiagramAction { generators: vec![vec![2, 1, 0]] };
        assert!(RelativeRootDatum::project(&rd, &[0], &flip).is_err());
        let rel = RelativeRootDatum::project(&rd, &[0, 2], &flip).unwrap();
        assert_eq!(rel.rank, 1);
    }
}
