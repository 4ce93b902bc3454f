//! Symmetric matrices over a generic scalar, with the exact rational instance.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{common_denominator, fmt_rational, parse_rational, rat, ratio, Rational, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymMatrix<T> {
    q: usize,
    entries: Vec<T>,
}

impl<T: Scalar> SymMatrix<T> {
    /// Fails with `Asymmetric` at the first offending pair.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let q = rows.len();
        if rows.iter().any(|r| r.len() != q) {
            return Err(Error::Dimension(format!("matrix rows must all have length {q}")));
        }
        for i in 0..q {
            for j in i + 1..q {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::Asymmetric { i, j });
                }
            }
        }
        Ok(SymMatrix {
            q,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds from the upper triangle: `f(i, j)` is called for i ≤ j only.
    pub fn from_fn(q: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut entries = vec![T::zero(); q * q];
        for i in 0..q {
            for j in i..q {
                let x = f(i, j);
                entries[j * q + i] = x.clone();
                entries[i * q + j] = x;
            }
        }
        SymMatrix { q, entries }
    }

    pub fn identity(q: usize) -> Self {
        Self::from_fn(q, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn diag(d: &[T]) -> Self {
        Self::from_fn(d.len(), |i, j| if i == j { d[i].clone() } else { T::zero() })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.q + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.entries[i * self.q..(i + 1) * self.q]
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        (0..self.q).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> SymMatrix<U> {
        SymMatrix {
            q: self.q,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| x.clone() * c.clone())
    }

    /// (Mσ)ᵢⱼ = M_{σ(i)σ(j)}.
    pub fn permute(&self, sigma: &[usize]) -> Self {
        assert_eq!(sigma.len(), self.q);
        Self::from_fn(self.q, |i, j| self.get(sigma[i], sigma[j]).clone())
    }

    /// Entrywise n-th power.
    pub fn hadamard_pow(&self, n: u32) -> Self {
        self.map(|x| pow(x, n))
    }

    /// Kronecker product; index (a, b) of A ⊗ B is a·q_B + b.
    pub fn tensor(&self, b: &Self) -> Self {
        let (qa, qb) = (self.q, b.q);
        Self::from_fn(qa * qb, |i, j| {
            self.get(i / qb, j / qb).clone() * b.get(i % qb, j % qb).clone()
        })
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, b: &Self) -> Self {
        let qa = self.q;
        Self::from_fn(qa + b.q, |i, j| {
            if i < qa && j < qa {
                self.get(i, j).clone()
            } else if i >= qa && j >= qa {
                b.get(i - qa, j - qa).clone()
            } else {
                T::zero()
            }
        })
    }

    /// Principal submatrix on `idx`.
    pub fn submatrix(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), |i, j| self.get(idx[i], idx[j]).clone())
    }

    /// Product with another symmetric matrix that commutes with this one
    /// (powers of one matrix); the result is checked to be symmetric.
    pub fn mul_commuting(&self, b: &Self) -> Self {
        let p = square_mul(&self.entries, &b.entries, self.q);
        let out = SymMatrix {
            q: self.q,
            entries: p,
        };
        debug_assert!(out.is_symmetric());
        out
    }

    /// Matrix power Mⁿ (M⁰ = I).
    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::identity(self.q);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_commuting(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_commuting(&base);
            }
        }
        acc
    }

    pub fn trace(&self) -> T {
        (0..self.q).fold(T::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.q).all(|i| (i + 1..self.q).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Determinant by Gaussian elimination over the field.
    pub fn det(&self) -> T {
        det_field(self.rows())
    }

    /// Distinct entry values in first-seen row-major order.
    pub fn distinct_entries(&self) -> Vec<T> {
        let mut out: Vec<T> = Vec::new();
        for x in &self.entries {
            if !out.contains(x) {
                out.push(x.clone());
            }
        }
        out
    }
}

pub(crate) fn pow<T: Scalar>(x: &T, n: u32) -> T {
    let mut acc = T::one();
    for _ in 0..n {
        acc = acc * x.clone();
    }
    acc
}

pub(crate) fn square_mul<T: Scalar>(a: &[T], b: &[T], q: usize) -> Vec<T> {
    let mut out = vec![T::zero(); q * q];
    for i in 0..q {
        for k in 0..q {
            let aik = &a[i * q + k];
            if aik.is_zero() {
                continue;
            }
            for j in 0..q {
                out[i * q + j] = out[i * q + j].clone() + aik.clone() * b[k * q + j].clone();
            }
        }
    }
    out
}

pub(crate) fn det_field<T: Scalar>(mut a: Vec<Vec<T>>) -> T {
    let n = a.len();
    let mut det = T::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return T::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let piv = a[c][c].clone();
        det = det * piv.clone();
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].clone() / piv.clone();
            for k in c..n {
                let t = a[c][k].clone() * f.clone();
                a[r][k] = a[r][k].clone() - t;
            }
        }
    }
    det
}

pub type RatMatrix = SymMatrix<Rational>;

/// Fraction-free (Bareiss) determinant of an integer matrix.
pub fn det_bareiss_int(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

impl RatMatrix {
    /// Determinant via row scaling to integers and Bareiss elimination.
    pub fn det_fraction_free(&self) -> Rational {
        let mut scale = BigInt::one();
        let rows: Vec<Vec<BigInt>> = (0..self.q)
            .map(|i| {
                let d = common_denominator(self.row(i));
                scale *= &d;
                self.row(i)
                    .iter()
                    .map(|x| (x * Rational::from_integer(d.clone())).to_integer())
                    .collect()
            })
            .collect();
        Rational::new(det_bareiss_int(rows), scale)
    }

    pub fn has_negative(&self) -> bool {
        self.entries.iter().any(|x| x.is_negative())
    }

    pub fn has_zero(&self) -> bool {
        self.entries.iter().any(|x| x.is_zero())
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let file: MatrixFile = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            msg: e.to_string(),
        })?;
        if file.entries.len() != file.q {
            return Err(Error::parse(0, format!("q = {} but {} rows", file.q, file.entries.len())));
        }
        let rows = file
            .entries
            .iter()
            .map(|r| {
                if r.len() != file.q {
                    return Err(Error::parse(0, format!("row of length {} for q = {}", r.len(), file.q)));
                }
                r.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("serializable")
    }

    pub fn to_file(&self) -> MatrixFile {
        MatrixFile {
            q: self.q,
            entries: self.rows().iter().map(|r| r.iter().map(fmt_rational).collect()).collect(),
        }
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.q {
            let r: Vec<String> = self.row(i).iter().map(fmt_rational).collect();
            writeln!(f, "[{}]", r.join(", "))?;
        }
        Ok(())
    }
}

/// On-disk matrix format.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub q: usize,
    pub entries: Vec<Vec<String>>,
}

pub fn parse_matrix(text: &str) -> Result<RatMatrix> {
    RatMatrix::parse_json(text)
}

/// Off-diagonal 1, diagonal x.
pub fn potts(q: usize, x: Rational) -> RatMatrix {
    SymMatrix::from_fn(q, |i, j| if i == j { x.clone() } else { Rational::one() })
}

/// [[a, b], [b, a]].
pub fn ising(a: Rational, b: Rational) -> RatMatrix {
    SymMatrix::from_fn(2, |i, j| if i == j { a.clone() } else { b.clone() })
}

/// K·κ·diag(1, x, y, z)·Kᵀ with K = ½[[1,1,1,1],[1,−1,1,−1],[1,1,−1,−1],[1,−1,−1,1]].
pub fn make_kdk(kappa: &Rational, x: &Rational, y: &Rational, z: &Rational) -> RatMatrix {
    let k = |i: usize, j: usize| -> i64 {
        let s = ((i & j) as u32).count_ones();
        if s % 2 == 0 {
            1
        } else {
            -1
        }
    };
    // Column order of K is (0, 1, 2, 3) ↔ index bits (b1, b0) with i = 2·b1 + b0.
    let d = [Rational::one(), x.clone(), y.clone(), z.clone()];
    SymMatrix::from_fn(4, |i, j| {
        let mut s = Rational::zero();
        for c in 0..4 {
            s += &d[c] * rat(k(i, c) * k(j, c));
        }
        s * kappa * ratio(1, 4)
    })
}
