//! Dense exact matrices over a scalar ring.

use std::fmt;

use num_traits::{One, Zero};

use crate::scalar::Scalar;

/// Square matrix over `R`, column-action convention (`M * v`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat<R: Scalar> {
    pub n: usize,
    pub a: Vec<R>,
}

impl<R: Scalar> Mat<R> {
    pub fn zero(n: usize) -> Self {
        Mat { n, a: vec![R::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m[(i, i)] = R::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Self {
        let n = rows.len();
        let mut m = Self::zero(n);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), n);
            for (j, v) in row.into_iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = Self::zero(n);
        for i in 0..n {
            for k in 0..n {
                let x = self[(i, k)].clone();
                if x.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let y = rhs[(k, j)].clone();
                    if y.is_zero() {
                        continue;
                    }
                    out[(i, j)] = out[(i, j)].clone() + x.clone() * y;
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zero(n);
        for i in 0..n * n {
            out.a[i] = self.a[i].clone() + rhs.a[i].clone();
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zero(n);
        for i in 0..n * n {
            out.a[i] = self.a[i].clone() - rhs.a[i].clone();
        }
        out
    }

    pub fn scale(&self, c: &R) -> Self {
        let mut out = self.clone();
        for v in &mut out.a {
            *v = v.clone() * c.clone();
        }
        out
    }

    /// Mathematical equality (tolerates different constant representations).
    pub fn eq_exact(&self, rhs: &Self) -> bool {
        self.n == rhs.n && self.sub(rhs).a.iter().all(|v| v.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.eq_exact(&Self::identity(self.n))
    }

    pub fn is_zero_mat(&self) -> bool {
        self.a.iter().all(|v| v.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut out = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self[(j, i)].clone();
            }
        }
        out
    }

    /// Map entries through a function.
    pub fn map<S: Scalar>(&self, f: &impl Fn(&R) -> S) -> Mat<S> {
        Mat { n: self.n, a: self.a.iter().map(f).collect() }
    }

    /// Gauss-Jordan inverse; `None` if a pivot fails to be a unit.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.n;
        let mut a = self.clone();
        let mut b = Self::identity(n);
        for col in 0..n {
            // find a unit pivot in rows col..
            let mut piv = None;
            for r in col..n {
                if a[(r, col)].inv().is_some() {
                    piv = Some(r);
                    break;
                }
            }
            let piv = piv?;
            if piv != col {
                for j in 0..n {
                    let (x, y) = (a[(piv, j)].clone(), a[(col, j)].clone());
                    a[(piv, j)] = y;
                    a[(col, j)] = x;
                    let (x, y) = (b[(piv, j)].clone(), b[(col, j)].clone());
                    b[(piv, j)] = y;
                    b[(col, j)] = x;
                }
            }
            let inv = a[(col, col)].inv()?;
            for j in 0..n {
                a[(col, j)] = a[(col, j)].clone() * inv.clone();
                b[(col, j)] = b[(col, j)].clone() * inv.clone();
            }
            for r in 0..n {
                if r != col && !a[(r, col)].is_zero() {
                    let f = a[(r, col)].clone();
                    for j in 0..n {
                        a[(r, j)] = a[(r, j)].clone() - f.clone() * a[(col, j)].clone();
                        b[(r, j)] = b[(r, j)].clone() - f.clone() * b[(col, j)].clone();
                    }
                }
            }
        }
        Some(b)
    }

    /// Determinant by fraction-free-ish elimination with unit pivots; falls
    /// back to cofactor expansion for small non-unit-pivot cases.
    pub fn det(&self) -> R {
        let n = self.n;
        if n == 0 {
            return R::one();
        }
        // cofactor expansion (dims here are small: <= 8 in practice)
        if n == 1 {
            return self[(0, 0)].clone();
        }
        let mut acc = R::zero();
        let mut sign = R::one();
        for j in 0..n {
            let c = self[(0, j)].clone();
            if !c.is_zero() {
                let minor = self.minor(0, j);
                acc = acc + sign.clone() * c * minor.det();
            }
            sign = -sign;
        }
        acc
    }

    fn minor(&self, row: usize, col: usize) -> Self {
        let n = self.n;
        let mut out = Self::zero(n - 1);
        let mut r2 = 0;
        for i in 0..n {
            if i == row {
                continue;
            }
            let mut c2 = 0;
            for j in 0..n {
                if j == col {
                    continue;
                }
                out[(r2, c2)] = self[(i, j)].clone();
                c2 += 1;
            }
            r2 += 1;
        }
        out
    }
}

impl<R: Scalar> std::ops::Index<(usize, usize)> for Mat<R> {
    type Output = R;
    fn index(&self, (i, j): (usize, usize)) -> &R {
        &self.a[i * self.n + j]
    }
}
impl<R: Scalar> std::ops::IndexMut<(usize, usize)> for Mat<R> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut R {
        &mut self.a[i * self.n + j]
    }
}

impl<R: Scalar> fmt::Debug for Mat<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| format!("{}", self[(i, j)])).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}
