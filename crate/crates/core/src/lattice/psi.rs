//! Ψ_x(M) = Φ_x(λ₁,…,λ_q) written through the characteristic polynomial of M.
//!
//! The fast path multiplies the q! factors of Φ_x inside the universal
//! splitting algebra of det(tI − M): ℚ[λ₁,…,λ_{q−1}] modulo the relations
//! f_k(λ_k) = 0, where f₁ = det(tI − M) and f_{k+1} = f_k / (t − λ_k).
//! The monomials λ^a with a_k ≤ q − k form a basis, and every symmetric
//! expression reduces to a constant. The symbolic path expands Φ_x and
//! rewrites it in e₁,…,e_q.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::sympoly::{symmetric_reduce, SymPoly};
use super::{check_chi, check_len};
use crate::charpoly::charpoly;
use crate::error::{Error, Result};
use crate::scalar::Rational;
use crate::structure::permutations;
use crate::symmatrix::RatMatrix;

/// Default cap on Σ xᵢ⁺.
pub const DEFAULT_DEGREE_BUDGET: u64 = 4;

type Poly = BTreeMap<Vec<u32>, Rational>;

fn add_into(p: &mut Poly, k: Vec<u32>, c: Rational) {
    if c.is_zero() {
        return;
    }
    match p.entry(k) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

fn mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ka, va) in a {
        for (kb, vb) in b {
            let k = ka.iter().zip(kb).map(|(x, y)| x + y).collect();
            add_into(&mut out, k, va * vb);
        }
    }
    out
}

fn constant(nv: usize, c: Rational) -> Poly {
    let mut p = Poly::new();
    add_into(&mut p, vec![0; nv], c);
    p
}

struct SplittingAlgebra {
    q: usize,
    /// rels[k]: λ_k^{q−k} = Σ_j rels[k][j]·λ_k^j (0-based k, j < q − k).
    rels: Vec<Vec<Poly>>,
    /// λ_q expressed in the basis.
    last: Poly,
}

impl SplittingAlgebra {
    fn new(e: &[Rational]) -> Self {
        let q = e.len();
        let nv = q.saturating_sub(1);
        let mut alg = SplittingAlgebra {
            q,
            rels: Vec::new(),
            last: Poly::new(),
        };
        // f[j] = coefficient of t^j of the current f_k.
        let mut f: Vec<Poly> = (0..=q)
            .map(|j| {
                let k = q - j;
                let c = if k == 0 {
                    Rational::one()
                } else if k % 2 == 1 {
                    -e[k - 1].clone()
                } else {
                    e[k - 1].clone()
                };
                constant(nv, c)
            })
            .collect();
        for k in 0..nv {
            let d = f.len() - 1;
            let rel: Vec<Poly> = f[..d]
                .iter()
                .map(|c| c.iter().map(|(key, v)| (key.clone(), -v.clone())).collect())
                .collect();
            alg.rels.push(rel);
            let mut lam = Poly::new();
            let mut key = vec![0; nv];
            key[k] = 1;
            add_into(&mut lam, key, Rational::one());
            let mut quotient = vec![Poly::new(); d];
            quotient[d - 1] = f[d].clone();
            for j in (1..d).rev() {
                let mut next = f[j].clone();
                for (key, v) in mul(&lam, &quotient[j]) {
                    add_into(&mut next, key, v);
                }
                quotient[j - 1] = alg.reduce(next);
            }
            f = quotient;
        }
        // f is now t − λ_q.
        alg.last = f[0].iter().map(|(k, v)| (k.clone(), -v.clone())).collect();
        alg
    }

    /// Normal form: λ_k exponents brought below q − k, highest k first.
    fn reduce(&self, mut p: Poly) -> Poly {
        for k in (0..self.rels.len()).rev() {
            let d = (self.q - k) as u32;
            loop {
                let high: Vec<Vec<u32>> = p.keys().filter(|key| key[k] >= d).cloned().collect();
                if high.is_empty() {
                    break;
                }
                for key in high {
                    let Some(c) = p.remove(&key) else { continue };
                    let mut base = key.clone();
                    base[k] -= d;
                    for (j, coeff) in self.rels[k].iter().enumerate() {
                        for (ck, cv) in coeff {
                            let mut nk: Vec<u32> = base.iter().zip(ck).map(|(a, b)| a + b).collect();
                            nk[k] += j as u32;
                            add_into(&mut p, nk, &c * cv);
                        }
                    }
                }
            }
        }
        p
    }

    /// λ_i (0-based) as a basis element.
    fn lambda(&self, i: usize) -> Poly {
        let nv = self.q - 1;
        if i == nv {
            return self.last.clone();
        }
        let mut key = vec![0; nv];
        key[i] = 1;
        let mut p = Poly::new();
        add_into(&mut p, key, Rational::one());
        p
    }

    fn pow(&self, base: &Poly, e: u32) -> Poly {
        let mut acc = constant(self.q - 1, Rational::one());
        for _ in 0..e {
            acc = self.reduce(mul(&acc, base));
        }
        acc
    }
}

fn positive_degree(x: &[i64]) -> u64 {
    x.iter().filter(|&&v| v > 0).map(|&v| v as u64).sum()
}

fn check_inputs(x: &[i64], m: &RatMatrix, budget: u64) -> Result<()> {
    check_len(x, m.q())?;
    check_chi(x)?;
    let deg = positive_degree(x);
    if deg > budget {
        return Err(Error::DegreeBudget { degree: deg, cap: budget });
    }
    Ok(())
}

pub fn psi_x(x: &[i64], m: &RatMatrix) -> Result<Rational> {
    psi_x_with(x, m, DEFAULT_DEGREE_BUDGET)
}

/// Ψ_x(M), exact, homogeneous of degree q!·Σxᵢ⁺ in the eigenvalues.
pub fn psi_x_with(x: &[i64], m: &RatMatrix, budget: u64) -> Result<Rational> {
    check_inputs(x, m, budget)?;
    let q = m.q();
    if q == 1 {
        return Ok(Rational::zero());
    }
    let alg = SplittingAlgebra::new(&charpoly(m).e);
    let lambdas: Vec<Poly> = (0..q).map(|i| alg.lambda(i)).collect();
    let mut acc = constant(q - 1, Rational::one());
    for sigma in permutations(q) {
        let mut pos = constant(q - 1, Rational::one());
        let mut neg = constant(q - 1, Rational::one());
        for (i, &xi) in x.iter().enumerate() {
            if xi > 0 {
                pos = alg.reduce(mul(&pos, &alg.pow(&lambdas[sigma[i]], xi as u32)));
            } else if xi < 0 {
                neg = alg.reduce(mul(&neg, &alg.pow(&lambdas[sigma[i]], (-xi) as u32)));
            }
        }
        for (k, v) in neg {
            add_into(&mut pos, k, -v);
        }
        acc = alg.reduce(mul(&acc, &pos));
        if acc.is_empty() {
            return Ok(Rational::zero());
        }
    }
    let zero_key = vec![0; q - 1];
    if acc.len() != 1 || !acc.contains_key(&zero_key) {
        return Err(Error::Internal("Ψ_x did not reduce to a constant".into()));
    }
    Ok(acc.remove(&zero_key).unwrap())
}

/// Φ_x(λ₁,…,λ_q) as an explicit polynomial.
pub fn phi_sympoly(x: &[i64]) -> SymPoly {
    let q = x.len();
    let mut acc = SymPoly::one(q);
    for sigma in permutations(q) {
        let mut pos = SymPoly::one(q);
        let mut neg = SymPoly::one(q);
        for (i, &xi) in x.iter().enumerate() {
            if xi > 0 {
                pos = pos.mul(&SymPoly::var_pow(q, sigma[i], xi as u32));
            } else if xi < 0 {
                neg = neg.mul(&SymPoly::var_pow(q, sigma[i], (-xi) as u32));
            }
        }
        acc = acc.mul(&pos.sub(&neg));
        if acc.is_zero() {
            break;
        }
    }
    acc
}

/// Ψ_x by full expansion and leading-term reduction; only practical at very
/// small degree.
pub fn psi_x_symbolic(x: &[i64], m: &RatMatrix, budget: u64) -> Result<Rational> {
    check_inputs(x, m, budget)?;
    let reduced = symmetric_reduce(&phi_sympoly(x))?;
    Ok(reduced.eval(&charpoly(m).e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Phi_x;
    use crate::scalar::rat;
    use crate::symmatrix::SymMatrix;

    fn diag(v: &[i64]) -> RatMatrix {
        SymMatrix::diag(&v.iter().map(|&x| rat(x)).collect::<Vec<_>>())
    }

    #[test]
    fn diagonal_examples() {
        assert_eq!(psi_x(&[1, -1, 0, 0], &diag(&[1, 2, 3, 4])).unwrap(), rat(20736));
        let form_vi = RatMatrix::from_ints(&[&[4, 1, 1, 1], &[1, 4, 1, 1], &[1, 1, 4, 1], &[1, 1, 1, 4]]).unwrap();
        assert_eq!(psi_x(&[1, -1, 0, 0], &form_vi).unwrap(), rat(0));
    }

    #[test]
    fn matches_phi_on_spectrum() {
        for (x, d) in [
            (vec![1, -1, 0], vec![2, 3, 5]),
            (vec![2, -1, -1], vec![1, 3, 7]),
            (vec![1, 1, -1, -1], vec![1, 2, 3, 5]),
            (vec![2, 0, -1, -1], vec![2, 3, 4, 9]),
            (vec![4, -2, -1, -1], vec![1, 2, 3, 5]),
            (vec![2, 2, -1, -3], vec![1, 3, 4, 7]),
        ] {
            let alpha: Vec<Rational> = d.iter().map(|&v| rat(v)).collect();
            assert_eq!(psi_x(&x, &diag(&d)).unwrap(), Phi_x(&x, &alpha).unwrap(), "{x:?}");
        }
    }

    #[test]
    fn symbolic_agrees_small() {
        let m = RatMatrix::from_ints(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 5]]).unwrap();
        for x in [[1, -1, 0], [2, -1, -1], [1, 1, -2]] {
            assert_eq!(psi_x(&x, &m).unwrap(), psi_x_symbolic(&x, &m, 4).unwrap(), "{x:?}");
        }
    }

    #[test]
    fn budget_and_shape() {
        let m = diag(&[1, 2, 3, 4]);
        assert!(matches!(psi_x(&[5, -5, 0, 0], &m), Err(Error::DegreeBudget { degree: 5, cap: 4 })));
        assert!(matches!(psi_x(&[1, -1, 0], &m), Err(Error::DimensionMismatch { .. })));
    }
}
