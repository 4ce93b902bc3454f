//! Exact Pfaffians: a dense generic routine and a sparse multi-modular one
//! for the large integer matrices produced by the FKT construction.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numtheory::{crt_symmetric, invmod, large_primes, mod_bigint, mulmod};
use crate::scalar::Scalar;

/// Antisymmetric n×n matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewMatrix<T> {
    n: usize,
    a: Vec<T>,
}

impl<T: Scalar> SkewMatrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("skew matrix must be square".into()));
        }
        let a: Vec<T> = rows.into_iter().flatten().collect();
        for i in 0..n {
            for j in i..n {
                if a[i * n + j] != -a[j * n + i].clone() {
                    return Err(Error::NotSkew);
                }
            }
        }
        Ok(SkewMatrix { n, a })
    }

    pub fn zero(n: usize) -> Self {
        SkewMatrix {
            n,
            a: vec![T::zero(); n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.a[i * self.n + j]
    }

    /// Sets a_ij = v and a_ji = −v.
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.a[j * self.n + i] = -v.clone();
        self.a[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.a.chunks(self.n.max(1)).take(self.n).map(|r| r.to_vec()).collect()
    }
}

/// Pf(A) by skew Gaussian elimination, pivoting on the first nonzero entry.
pub fn pfaffian<T: Scalar>(m: &SkewMatrix<T>) -> T {
    let n = m.n;
    if n % 2 == 1 {
        return T::zero();
    }
    let mut a = m.a.clone();
    let at = |i: usize, j: usize| i * n + j;
    let mut result = T::one();
    for k in (0..n).step_by(2) {
        let Some(p) = (k + 1..n).find(|&j| !a[at(k, j)].is_zero()) else {
            return T::zero();
        };
        if p != k + 1 {
            // Swap rows and columns k+1 and p; this flips the sign.
            for c in 0..n {
                a.swap(at(k + 1, c), at(p, c));
            }
            for r in 0..n {
                a.swap(at(r, k + 1), at(r, p));
            }
            result = -result;
        }
        let pivot = a[at(k, k + 1)].clone();
        result = result * pivot.clone();
        for i in k + 2..n {
            let fi = a[at(k, i)].clone() / pivot.clone();
            let gi = a[at(k + 1, i)].clone() / pivot.clone();
            if fi.is_zero() && gi.is_zero() {
                continue;
            }
            for j in k + 2..n {
                // a_ij += (a_{k+1,i} a_{k,j} − a_{k,i} a_{k+1,j}) / a_{k,k+1}
                let delta = gi.clone() * a[at(k, j)].clone() - fi.clone() * a[at(k + 1, j)].clone();
                if !delta.is_zero() {
                    a[at(i, j)] = a[at(i, j)].clone() + delta;
                }
            }
        }
    }
    result
}

/// Sparse integer skew matrix: upper-triangle entries (i < j).
#[derive(Clone, Debug, Default)]
pub struct SparseSkew {
    pub n: usize,
    pub entries: HashMap<(usize, usize), BigInt>,
}

impl SparseSkew {
    pub fn new(n: usize) -> Self {
        SparseSkew {
            n,
            entries: HashMap::new(),
        }
    }

    /// Adds v to a_ij (and −v to a_ji).
    pub fn add(&mut self, i: usize, j: usize, v: BigInt) {
        let (key, v) = if i < j { ((i, j), v) } else { ((j, i), -v) };
        let slot = self.entries.entry(key).or_default();
        *slot += v;
        if slot.is_zero() {
            self.entries.remove(&key);
        }
    }

    /// log₂ of a Hadamard-type bound on |Pf| = √|det|.
    fn bound_bits(&self) -> u64 {
        let mut norms = vec![BigInt::zero(); self.n];
        for (&(i, j), v) in &self.entries {
            let sq = v * v;
            norms[i] += &sq;
            norms[j] += &sq;
        }
        norms
            .iter()
            .filter(|x| !x.is_zero())
            .map(|x| x.bits() / 2 + 1)
            .sum::<u64>()
            + 1
    }
}

struct Fenwick(Vec<i64>);

impl Fenwick {
    fn new(n: usize) -> Self {
        let mut f = Fenwick(vec![0; n + 1]);
        for i in 0..n {
            f.add(i, 1);
        }
        f
    }

    fn add(&mut self, i: usize, v: i64) {
        let mut i = i + 1;
        while i < self.0.len() {
            self.0[i] += v;
            i += i & i.wrapping_neg();
        }
    }

    /// Number of live indices strictly below i.
    fn prefix(&self, i: usize) -> i64 {
        let mut s = 0;
        let mut i = i;
        while i > 0 {
            s += self.0[i];
            i -= i & i.wrapping_neg();
        }
        s
    }
}

/// Pf mod p by pairwise elimination with minimum-degree pivots.
fn pfaffian_mod(m: &SparseSkew, p: u64) -> u64 {
    let n = m.n;
    if n % 2 == 1 {
        return 0;
    }
    // rows[i][j] = a_ij mod p, stored for both orders.
    let mut rows: Vec<HashMap<usize, u64>> = vec![HashMap::new(); n];
    for (&(i, j), v) in &m.entries {
        let r = mod_bigint(v, p);
        if r != 0 {
            rows[i].insert(j, r);
            rows[j].insert(i, (p - r) % p);
        }
    }
    let mut alive = vec![true; n];
    let mut pos = Fenwick::new(n);
    let mut result = 1u64;
    // Lazy min-heap of (degree, index); stale entries are skipped.
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> = (0..n).map(|i| Reverse((rows[i].len(), i))).collect();
    for _ in 0..n / 2 {
        let (i, deg) = loop {
            let Reverse((d, i)) = heap.pop().expect("live rows remain");
            if alive[i] && rows[i].len() == d {
                break (i, d);
            }
        };
        if deg == 0 {
            return 0;
        }
        let j = *rows[i]
            .keys()
            .min_by_key(|&&k| (rows[k].len(), k))
            .unwrap();
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        let c = rows[lo][&hi];
        let pl = pos.prefix(lo);
        let ph = pos.prefix(hi);
        result = mulmod(result, c, p);
        if (pl + ph - 1) % 2 != 0 {
            result = (p - result) % p;
        }
        let cinv = invmod(c, p);
        let ni: Vec<(usize, u64)> = rows[lo].iter().filter(|(&k, _)| k != hi).map(|(&k, &v)| (k, v)).collect();
        let nj: Vec<(usize, u64)> = rows[hi].iter().filter(|(&k, _)| k != lo).map(|(&k, &v)| (k, v)).collect();
        for &(k, aik) in &ni {
            let f = mulmod(aik, cinv, p);
            for &(l, ajl) in &nj {
                if k == l {
                    continue;
                }
                let delta = mulmod(f, ajl, p);
                // a_kl −= delta, a_lk += delta
                let e = rows[k].entry(l).or_insert(0);
                *e = (*e + p - delta) % p;
                if *e == 0 {
                    rows[k].remove(&l);
                }
                let e = rows[l].entry(k).or_insert(0);
                *e = (*e + delta) % p;
                if *e == 0 {
                    rows[l].remove(&k);
                }
            }
        }
        for x in [lo, hi] {
            let nbrs: Vec<usize> = rows[x].keys().copied().collect();
            for k in nbrs {
                rows[k].remove(&x);
            }
            rows[x].clear();
            alive[x] = false;
            pos.add(x, -1);
        }
        for &(k, _) in ni.iter().chain(&nj) {
            if alive[k] {
                heap.push(Reverse((rows[k].len(), k)));
            }
        }
    }
    result
}

/// Exact Pfaffian of an integer skew matrix via CRT over 62-bit primes.
pub fn pfaffian_sparse(m: &SparseSkew) -> BigInt {
    if m.n % 2 == 1 {
        return BigInt::zero();
    }
    let count = (m.bound_bits() / 61 + 2) as usize;
    let primes = large_primes(count);
    let residues: Vec<u64> = primes.par_iter().map(|&p| pfaffian_mod(m, p)).collect();
    crt_symmetric(&residues, &primes)
}

/// Sign of a BigInt as −1, 0, 1.
pub(crate) fn signum(x: &BigInt) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_negative() {
        -1
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};
    use rand::{Rng, SeedableRng};

    fn skew(rows: &[&[i64]]) -> SkewMatrix<Rational> {
        SkewMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(pfaffian(&skew(&[&[0, 7], &[-7, 0]])), rat(7));
        let (a, b, c, d, e, f) = (2, 3, 5, 7, 11, 13);
        let m = skew(&[&[0, a, b, c], &[-a, 0, d, e], &[-b, -d, 0, f], &[-c, -e, -f, 0]]);
        assert_eq!(pfaffian(&m), rat(a * f - b * e + c * d));
        assert_eq!(pfaffian(&skew(&[&[0, 1, 2], &[-1, 0, 3], &[-2, -3, 0]])), rat(0));
        assert_eq!(SkewMatrix::from_rows(vec![vec![rat(1)]]), Err(Error::NotSkew));
    }

    #[test]
    fn sparse_matches_dense() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in [2usize, 4, 6, 8, 10, 12] {
            for _ in 0..5 {
                let mut dense = SkewMatrix::<Rational>::zero(n);
                let mut sparse = SparseSkew::new(n);
                for i in 0..n {
                    for j in i + 1..n {
                        if rng.gen_bool(0.5) {
                            let v: i64 = rng.gen_range(-1_000_000_000..1_000_000_000);
                            dense.set(i, j, rat(v));
                            sparse.add(i, j, BigInt::from(v));
                        }
                    }
                }
                let pf = pfaffian(&dense);
                assert_eq!(Rational::from_integer(pfaffian_sparse(&sparse)), pf);
            }
        }
    }
}
