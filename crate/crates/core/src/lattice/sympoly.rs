use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Rational;

/// Sparse polynomial in λ₁,…,λ_q with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl SymPoly {
    pub fn zero(nvars: usize) -> Self {
        SymPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c.into());
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, 1)
    }

    /// λ_i (0-based) raised to `power`.
    pub fn var_pow(nvars: usize, i: usize, power: u32) -> Self {
        let mut e = vec![0; nvars];
        e[i] = power;
        let mut p = Self::zero(nvars);
        p.add_term(e, BigInt::one());
        p
    }

    /// e_k(λ₁,…,λ_q).
    pub fn elementary(nvars: usize, k: usize) -> Self {
        let mut p = Self::zero(nvars);
        for mask in 0usize..1 << nvars {
            if mask.count_ones() as usize == k {
                p.add_term((0..nvars).map(|i| (mask >> i & 1) as u32).collect(), BigInt::one());
            }
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigInt)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exps).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            let key = self
                .terms
                .iter()
                .find(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone())
                .unwrap();
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, o: &SymPoly) -> SymPoly {
        let mut out = self.clone();
        for (k, v) in &o.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }

    pub fn sub(&self, o: &SymPoly) -> SymPoly {
        let mut out = self.clone();
        for (k, v) in &o.terms {
            out.add_term(k.clone(), -v.clone());
        }
        out
    }

    pub fn mul(&self, o: &SymPoly) -> SymPoly {
        let mut acc: HashMap<Vec<u32>, BigInt> = HashMap::new();
        for (ka, va) in &self.terms {
            for (kb, vb) in &o.terms {
                let k: Vec<u32> = ka.iter().zip(kb).map(|(a, b)| a + b).collect();
                *acc.entry(k).or_insert_with(BigInt::zero) += va * vb;
            }
        }
        SymPoly {
            nvars: self.nvars,
            terms: acc.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
        }
    }

    /// Invariant under every adjacent transposition, hence under S_q.
    pub fn is_symmetric(&self) -> bool {
        (0..self.nvars.saturating_sub(1)).all(|i| {
            self.terms.iter().all(|(k, v)| {
                let mut s = k.clone();
                s.swap(i, i + 1);
                self.terms.get(&s) == Some(v)
            })
        })
    }

    pub fn eval(&self, at: &[Rational]) -> Rational {
        self.terms
            .iter()
            .map(|(k, v)| {
                k.iter()
                    .zip(at)
                    .fold(Rational::from_integer(v.clone()), |acc, (&e, x)| acc * num_traits::pow(x.clone(), e as usize))
            })
            .sum()
    }
}

impl fmt::Display for SymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &self.terms, "l")
    }
}

fn write_terms(f: &mut fmt::Formatter<'_>, terms: &BTreeMap<Vec<u32>, BigInt>, var: &str) -> fmt::Result {
    if terms.is_empty() {
        return write!(f, "0");
    }
    for (n, (k, v)) in terms.iter().rev().enumerate() {
        if n > 0 {
            write!(f, " + ")?;
        }
        write!(f, "{v}")?;
        for (i, &e) in k.iter().enumerate() {
            match e {
                0 => {}
                1 => write!(f, "*{var}{}", i + 1)?,
                _ => write!(f, "*{var}{}^{e}", i + 1)?,
            }
        }
    }
    Ok(())
}

/// Polynomial in e₁,…,e_q with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EPoly {
    q: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl EPoly {
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigInt)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    /// Coefficient of e₁^{b₁}⋯e_q^{b_q}.
    pub fn coefficient(&self, b: &[u32]) -> BigInt {
        self.terms.get(b).cloned().unwrap_or_default()
    }

    pub fn eval(&self, e: &[Rational]) -> Rational {
        self.terms
            .iter()
            .map(|(k, v)| {
                k.iter()
                    .zip(e)
                    .fold(Rational::from_integer(v.clone()), |acc, (&b, x)| acc * num_traits::pow(x.clone(), b as usize))
            })
            .sum()
    }
}

impl fmt::Display for EPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &self.terms, "e")
    }
}

/// Rewrites a symmetric polynomial in elementary symmetric polynomials by
/// repeatedly cancelling the lexicographically leading term.
pub fn symmetric_reduce(p: &SymPoly) -> Result<EPoly> {
    if !p.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let q = p.nvars;
    let elementary: Vec<SymPoly> = (1..=q).map(|k| SymPoly::elementary(q, k)).collect();
    let mut memo: HashMap<Vec<u32>, SymPoly> = HashMap::new();
    let mut rest = p.clone();
    let mut out = EPoly {
        q,
        terms: BTreeMap::new(),
    };
    while let Some((lead, c)) = rest.terms.iter().next_back().map(|(k, v)| (k.clone(), v.clone())) {
        let b: Vec<u32> = (0..q)
            .map(|i| lead[i] - if i + 1 < q { lead[i + 1] } else { 0 })
            .collect();
        let expanded = e_monomial(&b, &elementary, &mut memo);
        let mut scaled = expanded.clone();
        for v in scaled.terms.values_mut() {
            *v *= &c;
        }
        rest = rest.sub(&scaled);
        out.terms.insert(b, c);
    }
    Ok(out)
}

fn e_monomial(b: &[u32], elementary: &[SymPoly], memo: &mut HashMap<Vec<u32>, SymPoly>) -> SymPoly {
    let q = b.len();
    let Some(k) = b.iter().position(|&x| x > 0) else {
        return SymPoly::one(q);
    };
    if let Some(p) = memo.get(b) {
        return p.clone();
    }
    let mut smaller = b.to_vec();
    smaller[k] -= 1;
    let p = e_monomial(&smaller, elementary, memo).mul(&elementary[k]);
    memo.insert(b.to_vec(), p.clone());
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn reductions() {
        let q = 4;
        let sum = (0..q).fold(SymPoly::zero(q), |acc, i| acc.add(&SymPoly::var_pow(q, i, 1)));
        let r = symmetric_reduce(&sum).unwrap();
        assert_eq!(r.to_string(), "1*e1");
        let squares = (0..q).fold(SymPoly::zero(q), |acc, i| acc.add(&SymPoly::var_pow(q, i, 2)));
        let r = symmetric_reduce(&squares).unwrap();
        assert_eq!(r.coefficient(&[2, 0, 0, 0]), BigInt::from(1));
        assert_eq!(r.coefficient(&[0, 1, 0, 0]), BigInt::from(-2));
        assert_eq!(r.terms().count(), 2);
        let r = symmetric_reduce(&SymPoly::elementary(q, 2)).unwrap();
        assert_eq!(r.to_string(), "1*e2");
        assert_eq!(symmetric_reduce(&SymPoly::var_pow(q, 0, 1)), Err(Error::NotSymmetric));
    }

    #[test]
    fn reduction_evaluates_back() {
        let q = 3;
        let x = SymPoly::var_pow(q, 0, 1);
        let y = SymPoly::var_pow(q, 1, 1);
        let z = SymPoly::var_pow(q, 2, 1);
        let d = x.sub(&y).mul(&y.sub(&z)).mul(&z.sub(&x));
        let disc = d.mul(&d);
        let r = symmetric_reduce(&disc).unwrap();
        let vals = [rat(2), rat(-5), rat(7)];
        let e: Vec<Rational> = (1..=q).map(|k| SymPoly::elementary(q, k).eval(&vals)).collect();
        assert_eq!(r.eval(&e), disc.eval(&vals));
    }
}
