//! Multiplicative relation lattices of positive rational tuples, the δ_ij
//! criterion, confluence, and the polynomials φ_x, Φ_x, Ψ_x.

mod confluence;
mod psi;
mod sympoly;

pub use confluence::{is_confluent, PairedPartition};
pub use psi::{phi_sympoly, psi_x, psi_x_symbolic, psi_x_with, DEFAULT_DEGREE_BUDGET};
pub use sympoly::{symmetric_reduce, EPoly, SymPoly};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numtheory::factorize;
use crate::scalar::{fmt_rational, pow_signed, Rational};
use crate::structure::permutations;

/// Basis of {x ∈ ℤ^q : Σxᵢ = 0, Π aᵢ^{xᵢ} = 1} in Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeBasis {
    pub q: usize,
    pub vectors: Vec<Vec<i64>>,
}

impl LatticeBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }
}

/// Checks x ∈ χ_q: integer vector with zero coordinate sum.
pub fn check_chi(x: &[i64]) -> Result<()> {
    if x.iter().sum::<i64>() != 0 {
        return Err(Error::Domain(format!("exponent vector {x:?} does not sum to 0")));
    }
    Ok(())
}

fn check_len(x: &[i64], q: usize) -> Result<()> {
    if x.len() != q {
        return Err(Error::DimensionMismatch {
            expected: q,
            got: x.len(),
        });
    }
    Ok(())
}

/// Prime exponent rows: one row per prime, one column per tuple entry.
fn exponent_rows(a: &[Rational]) -> Result<Vec<Vec<BigInt>>> {
    let mut per_entry: Vec<Vec<(BigUint, i64)>> = Vec::with_capacity(a.len());
    for x in a {
        if !x.is_positive() {
            return Err(Error::NonPositive(fmt_rational(x)));
        }
        let mut f: Vec<(BigUint, i64)> = factorize(&x.numer().to_biguint().unwrap())?
            .into_iter()
            .map(|(p, e)| (p, e as i64))
            .collect();
        f.extend(factorize(&x.denom().to_biguint().unwrap())?.into_iter().map(|(p, e)| (p, -(e as i64))));
        per_entry.push(f);
    }
    let mut primes: Vec<BigUint> = per_entry.iter().flatten().map(|(p, _)| p.clone()).collect();
    primes.sort();
    primes.dedup();
    let mut rows = vec![vec![BigInt::zero(); a.len()]; primes.len()];
    for (j, f) in per_entry.iter().enumerate() {
        for (p, e) in f {
            rows[primes.binary_search(p).unwrap()][j] += *e;
        }
    }
    Ok(rows)
}

/// Integer row echelon form over the first `cols` columns using only
/// unimodular row operations. Returns the number of pivot rows.
fn echelon(w: &mut [Vec<BigInt>], cols: usize, reduce_above: bool) -> usize {
    let mut r = 0;
    for c in 0..cols {
        loop {
            let pick = (r..w.len())
                .filter(|&i| !w[i][c].is_zero())
                .min_by(|&i, &j| w[i][c].abs().cmp(&w[j][c].abs()));
            let Some(p) = pick else { break };
            w.swap(r, p);
            let mut done = true;
            for i in r + 1..w.len() {
                if w[i][c].is_zero() {
                    continue;
                }
                let f = &w[i][c] / &w[r][c];
                let pivot_row = w[r].clone();
                for (x, y) in w[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
                if !w[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < w.len() && !w[r][c].is_zero() {
            if w[r][c].is_negative() {
                for x in w[r].iter_mut() {
                    *x = -x.clone();
                }
            }
            if reduce_above {
                for i in 0..r {
                    let f = num_integer::Integer::div_floor(&w[i][c], &w[r][c]);
                    if f.is_zero() {
                        continue;
                    }
                    let pivot_row = w[r].clone();
                    for (x, y) in w[i].iter_mut().zip(&pivot_row) {
                        *x -= &f * y;
                    }
                }
            }
            r += 1;
        }
    }
    r
}

/// Lattice basis via the integer kernel of [prime exponents; 1 … 1].
pub fn lattice_of(a: &[Rational]) -> Result<LatticeBasis> {
    let q = a.len();
    let mut rows = exponent_rows(a)?;
    rows.push(vec![BigInt::one(); q]);
    let r = rows.len();
    // Row j of w is (column j of the constraint matrix | e_j).
    let mut w: Vec<Vec<BigInt>> = (0..q)
        .map(|j| {
            let mut row: Vec<BigInt> = rows.iter().map(|row| row[j].clone()).collect();
            row.extend((0..q).map(|k| BigInt::from(u8::from(k == j))));
            row
        })
        .collect();
    let rank = echelon(&mut w, r, false);
    let mut kernel: Vec<Vec<BigInt>> = w[rank..].iter().map(|row| row[r..].to_vec()).collect();
    let dim = echelon(&mut kernel, q, true);
    kernel.truncate(dim);
    let vectors = kernel
        .into_iter()
        .map(|v| {
            v.iter()
                .map(|x| x.to_i64().ok_or_else(|| Error::Internal("lattice coordinate overflow".into())))
                .collect::<Result<Vec<i64>>>()
        })
        .collect::<Result<_>>()?;
    Ok(LatticeBasis { q, vectors })
}

/// Π aᵢ^{xᵢ} = 1, checked exactly.
pub fn in_lattice(x: &[i64], a: &[Rational]) -> Result<bool> {
    check_len(x, a.len())?;
    if x.iter().sum::<i64>() != 0 {
        return Ok(false);
    }
    let mut prod = Rational::one();
    for (xi, ai) in x.iter().zip(a) {
        if !ai.is_positive() {
            return Err(Error::NonPositive(fmt_rational(ai)));
        }
        prod *= pow_signed(ai, *xi)?;
    }
    Ok(prod.is_one())
}

/// Some coordinate permutation of x lies in L(a).
pub fn in_lattice_bar(x: &[i64], a: &[Rational]) -> Result<bool> {
    check_len(x, a.len())?;
    check_chi(x)?;
    let rows = exponent_rows(a)?;
    for sigma in permutations(x.len()) {
        let ok = rows.iter().all(|row| {
            sigma
                .iter()
                .enumerate()
                .fold(BigInt::zero(), |acc, (i, &s)| acc + &row[i] * x[s])
                .is_zero()
        });
        if ok {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Every basis vector is ±δ_ij for some i ≠ j.
pub fn basis_subset_of_d(b: &LatticeBasis) -> bool {
    b.vectors.iter().all(|v| {
        let nz: Vec<i64> = v.iter().copied().filter(|&x| x != 0).collect();
        nz.len() == 2 && nz[0] == -nz[1] && nz[0].abs() == 1
    })
}

/// Π_{xᵢ>0} αᵢ^{xᵢ} − Π_{xᵢ<0} αᵢ^{−xᵢ}.
pub fn phi_x(x: &[i64], alpha: &[Rational]) -> Result<Rational> {
    check_len(x, alpha.len())?;
    if alpha.iter().any(Zero::is_zero) {
        return Err(Error::ZeroBase);
    }
    let mut pos = Rational::one();
    let mut neg = Rational::one();
    for (xi, ai) in x.iter().zip(alpha) {
        if *xi > 0 {
            pos *= pow_signed(ai, *xi)?;
        } else if *xi < 0 {
            neg *= pow_signed(ai, -*xi)?;
        }
    }
    Ok(pos - neg)
}

/// Π over σ ∈ S_q of φ_x(α∘σ).
#[allow(non_snake_case)]
pub fn Phi_x(x: &[i64], alpha: &[Rational]) -> Result<Rational> {
    check_len(x, alpha.len())?;
    if alpha.iter().any(Zero::is_zero) {
        return Err(Error::ZeroBase);
    }
    let mut acc = Rational::one();
    for sigma in permutations(x.len()) {
        let permuted: Vec<Rational> = sigma.iter().map(|&s| alpha[s].clone()).collect();
        acc *= phi_x(x, &permuted)?;
        if acc.is_zero() {
            break;
        }
    }
    Ok(acc)
}
