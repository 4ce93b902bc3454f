//! Recovering #_M(G, x) from thickened evaluations by solving a Vandermonde
//! system, and re-evaluating Z under entry substitution.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gadgets::GeneratingForm;
use crate::multigraph::Multigraph;
use crate::partition::{z_brute_with, CountMap, EvalOptions};
use crate::scalar::{fmt_rational, pow_signed, Rational};
use crate::symmatrix::RatMatrix;

/// Default cap on the number of compositions walked by `enumerate_x`.
pub const DEFAULT_X_BUDGET: u64 = 100_000;

/// X(G): the distinct edge-product values, each with one k-vector over the
/// distinct matrix entries that produces it.
#[derive(Clone, Debug, PartialEq)]
pub struct ValueSet {
    pub distinct: Vec<Rational>,
    pub values: Vec<Rational>,
    pub kvectors: Vec<Vec<u32>>,
}

impl ValueSet {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn kvector(&self, x: &Rational) -> Option<&[u32]> {
        self.values
            .binary_search(x)
            .ok()
            .map(|i| self.kvectors[i].as_slice())
    }
}

fn binomial(n: u64, k: u64) -> Option<u64> {
    let mut r: u128 = 1;
    for i in 0..k.min(n - k) {
        r = r * (n - i) as u128 / (i + 1) as u128;
        if r > u64::MAX as u128 {
            return None;
        }
    }
    Some(r as u64)
}

pub fn enumerate_x(m: &RatMatrix, edge_count: usize) -> Result<ValueSet> {
    enumerate_x_with(m, edge_count, DEFAULT_X_BUDGET)
}

pub fn enumerate_x_with(m: &RatMatrix, edge_count: usize, budget: u64) -> Result<ValueSet> {
    let distinct = m.distinct_entries();
    let s = distinct.len();
    let compositions = binomial((edge_count + s - 1) as u64, (s - 1) as u64);
    match compositions {
        Some(c) if c <= budget => {}
        other => {
            let needed = other.map_or_else(|| "overflow".to_string(), |c| c.to_string());
            return Err(Error::budget("value-set composition", needed, budget));
        }
    }
    let mut found: BTreeMap<Rational, Vec<u32>> = BTreeMap::new();
    let mut k = vec![0u32; s];
    compose(&distinct, edge_count as u32, 0, &mut k, Rational::one(), &mut found);
    let (values, kvectors) = found.into_iter().unzip();
    Ok(ValueSet {
        distinct,
        values,
        kvectors,
    })
}

fn compose(
    d: &[Rational],
    left: u32,
    pos: usize,
    k: &mut Vec<u32>,
    acc: Rational,
    found: &mut BTreeMap<Rational, Vec<u32>>,
) {
    if pos + 1 == d.len() {
        k[pos] = left;
        let x = acc * num_traits::pow(d[pos].clone(), left as usize);
        found.entry(x).or_insert_with(|| k.clone());
        k[pos] = 0;
        return;
    }
    let mut power = Rational::one();
    for take in 0..=left {
        k[pos] = take;
        compose(d, left - take, pos + 1, k, &acc * &power, found);
        power *= &d[pos];
    }
    k[pos] = 0;
}

/// Solves Σ_s c_s · x_s^n = t_n for n = 1..m exactly.
///
/// With y_s = c_s x_s this is the dual Vandermonde system Σ_s x_s^{n−1} y_s = t_n,
/// solved by Newton-style divided differences in O(m²).
pub fn vandermonde_solve(nodes: &[Rational], targets: &[Rational]) -> Result<Vec<Rational>> {
    if nodes.len() != targets.len() {
        return Err(Error::DimensionMismatch {
            expected: nodes.len(),
            got: targets.len(),
        });
    }
    let mut sorted: Vec<&Rational> = nodes.iter().collect();
    sorted.sort();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateNode(fmt_rational(w[0])));
    }
    if nodes.iter().any(Zero::is_zero) {
        return Err(Error::DegenerateNode);
    }
    let x = nodes;
    let n = x.len();
    let mut b = targets.to_vec();
    for k in 0..n.saturating_sub(1) {
        for i in (k + 1..n).rev() {
            let t = &x[k] * &b[i - 1];
            b[i] -= t;
        }
    }
    for k in (0..n.saturating_sub(1)).rev() {
        for i in k + 1..n {
            b[i] = &b[i] / (&x[i] - &x[i - k - 1]);
        }
        for i in k..n - 1 {
            let t = b[i + 1].clone();
            b[i] -= t;
        }
    }
    Ok(b.into_iter().zip(x).map(|(y, xs)| y / xs).collect())
}

#[derive(Clone, Copy, Debug)]
pub struct RecoverOptions {
    pub eval: EvalOptions,
    pub x_budget: u64,
}

impl Default for RecoverOptions {
    fn default() -> Self {
        RecoverOptions {
            eval: EvalOptions::default(),
            x_budget: DEFAULT_X_BUDGET,
        }
    }
}

pub fn recover_counts(m: &RatMatrix, g: &Multigraph) -> Result<CountMap> {
    recover_counts_with(m, g, &RecoverOptions::default())
}

/// Counts from Z_{T_n M}(G), n = 1..|X∖{0}|; the count of 0 is the
/// complement q^{|V|} − Σ.
pub fn recover_counts_with(m: &RatMatrix, g: &Multigraph, opts: &RecoverOptions) -> Result<CountMap> {
    let xs = enumerate_x_with(m, g.n_edges(), opts.x_budget)?;
    let nodes: Vec<Rational> = xs.values.iter().filter(|x| !x.is_zero()).cloned().collect();
    let targets: Vec<Rational> = (1..=nodes.len() as u32)
        .into_par_iter()
        .map(|n| z_brute_with(&m.hadamard_pow(n), g, &opts.eval))
        .collect::<Result<_>>()?;
    let coeffs = vandermonde_solve(&nodes, &targets)?;
    let total = BigInt::from(m.q()).pow(g.n_vertices() as u32);
    let mut rest = total.clone();
    let mut out = CountMap::default();
    for (x, c) in nodes.into_iter().zip(coeffs) {
        if !c.denom().is_one() || c.is_negative() {
            return Err(Error::Internal(format!("non-integral count {c} at {x}")));
        }
        rest -= c.numer();
        out.add(x, c.numer().to_biguint().unwrap());
    }
    if rest.is_negative() {
        return Err(Error::Internal("recovered counts exceed q^|V|".into()));
    }
    if xs.values.iter().any(Zero::is_zero) {
        out.add(Rational::zero(), rest.to_biguint().unwrap());
    } else if !rest.is_zero() {
        return Err(Error::Internal("counts do not sum to q^|V|".into()));
    }
    Ok(out)
}

/// Σ_x ŷ(x)·#(x), where ŷ substitutes `p` into x's exponent vector over the
/// form's generators. The exponent vector of x comes from its k-vector in
/// `source`.
pub fn transport_eval(form: &GeneratingForm, counts: &CountMap, source: &ValueSet, p: &[Rational]) -> Result<Rational> {
    if p.len() != form.generators.len() {
        return Err(Error::DimensionMismatch {
            expected: form.generators.len(),
            got: p.len(),
        });
    }
    if form.min_exponent() < 0 {
        return Err(Error::NegativeExponent);
    }
    let q = form.q;
    // Exponents and sign for each distinct entry value of the source matrix.
    let mut entry_forms: Vec<(u8, &[i64])> = Vec::with_capacity(source.distinct.len());
    for d in &source.distinct {
        let pos = (0..q * q)
            .find(|&k| form.value(k / q, k % q) == *d)
            .ok_or_else(|| Error::UnrepresentableValue(fmt_rational(d)))?;
        entry_forms.push((form.signs[pos], &form.exponents[pos]));
    }
    let gens = form.generators_rational();
    let mut total = Rational::zero();
    for (x, c) in counts.iter() {
        let k = source
            .kvector(x)
            .ok_or_else(|| Error::UnrepresentableValue(fmt_rational(x)))?;
        let mut sign = 0u32;
        let mut exps = vec![0i64; gens.len()];
        for (ks, (s, e)) in k.iter().zip(&entry_forms) {
            sign += ks * u32::from(*s);
            for (acc, et) in exps.iter_mut().zip(e.iter()) {
                *acc += i64::from(*ks) * et;
            }
        }
        let mut check = if sign % 2 == 1 { -Rational::one() } else { Rational::one() };
        let mut y = check.clone();
        for (t, &e) in exps.iter().enumerate() {
            check *= pow_signed(&gens[t], e)?;
            y *= pow_signed(&p[t], e)?;
        }
        if check != *x {
            return Err(Error::UnrepresentableValue(fmt_rational(x)));
        }
        total += y * Rational::from_integer(BigInt::from(c.clone()));
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::{normalize_cm, t_general};
    use crate::multigraph::named;
    use crate::partition::{count_map, z_brute};
    use crate::scalar::{rat, ratio};
    use crate::symmatrix::potts;

    fn m(rows: &[&[i64]]) -> RatMatrix {
        RatMatrix::from_ints(rows).unwrap()
    }

    fn rats(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn value_sets() {
        let a = m(&[&[1, 2], &[2, 3]]);
        assert_eq!(enumerate_x(&a, 1).unwrap().values, rats(&[1, 2, 3]));
        assert_eq!(enumerate_x(&a, 2).unwrap().values, rats(&[1, 2, 3, 4, 6, 9]));
        let five = SymMatrix::from_fn(3, |_, _| rat(5));
        assert_eq!(enumerate_x(&five, 3).unwrap().values, rats(&[125]));
        assert!(matches!(
            enumerate_x_with(&potts(4, rat(2)), 1000, 10),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    use crate::symmatrix::SymMatrix;

    #[test]
    fn solve_examples() {
        assert_eq!(vandermonde_solve(&rats(&[1, 2]), &rats(&[5, 9])).unwrap(), rats(&[1, 2]));
        assert_eq!(vandermonde_solve(&rats(&[1, 2, 3]), &rats(&[6, 14, 36])).unwrap(), rats(&[1, 1, 1]));
        assert!(matches!(vandermonde_solve(&rats(&[2, 2]), &rats(&[1, 1])), Err(Error::DuplicateNode(_))));
        assert_eq!(vandermonde_solve(&rats(&[0, 1]), &rats(&[1, 1])), Err(Error::DegenerateNode));
        let nodes = vec![ratio(-1, 2), rat(3), ratio(7, 5), rat(-4)];
        let c = vec![rat(2), ratio(1, 3), rat(-1), rat(5)];
        let t: Vec<Rational> = (1..=4)
            .map(|n| nodes.iter().zip(&c).map(|(x, ci)| ci * pow_signed(x, n).unwrap()).sum())
            .collect();
        assert_eq!(vandermonde_solve(&nodes, &t).unwrap(), c);
    }

    #[test]
    fn recovery_matches_enumeration() {
        for (a, g) in [
            (m(&[&[1, 2], &[2, 3]]), named::path(2)),
            (potts(2, rat(0)), named::path(2)),
            (m(&[&[1, 2], &[2, 3]]), named::complete(3)),
            (m(&[&[0, 1, 2], &[1, -1, 0], &[2, 0, 3]]), named::cycle(4)),
        ] {
            assert_eq!(recover_counts(&a, &g).unwrap(), count_map(&a, &g).unwrap());
        }
    }

    #[test]
    fn transport() {
        let a = m(&[&[1, 2], &[2, 8]]);
        let g = named::path(2);
        let form = normalize_cm(&a).unwrap().form;
        let xs = enumerate_x(&a, g.n_edges()).unwrap();
        let counts = count_map(&a, &g).unwrap();
        assert_eq!(transport_eval(&form, &counts, &xs, &[rat(2)]).unwrap(), z_brute(&a, &g).unwrap());
        assert_eq!(transport_eval(&form, &counts, &xs, &[rat(3)]).unwrap(), rat(34));
        assert_eq!(transport_eval(&form, &counts, &xs, &[rat(1)]).unwrap(), rat(4));
        let g = named::complete(4);
        let xs = enumerate_x(&a, g.n_edges()).unwrap();
        let counts = count_map(&a, &g).unwrap();
        for p in [ratio(-2, 3), rat(0), rat(5)] {
            let lhs = transport_eval(&form, &counts, &xs, std::slice::from_ref(&p)).unwrap();
            assert_eq!(lhs, z_brute(&t_general(&form, &[p]).unwrap(), &g).unwrap());
        }
    }
}
