//! Exact evaluation of Z_M(G) and of the assignment-count map #_M(G, x).

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multigraph::Multigraph;
use crate::scalar::{fmt_rational, parse_rational, Rational, Scalar};
use crate::symmatrix::{RatMatrix, SymMatrix};

/// Default cap on enumerated assignments (and on elimination table sizes).
pub const DEFAULT_ASSIGN_BUDGET: u64 = 1 << 26;
/// Components with at most this many assignments are always enumerated.
const ENUMERATE_BELOW: u64 = 1 << 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalOptions {
    pub assign_budget: u64,
    /// Evaluate connected components separately and multiply.
    pub factor_components: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            assign_budget: DEFAULT_ASSIGN_BUDGET,
            factor_components: true,
        }
    }
}

fn assignments(q: usize, n: usize) -> Option<u64> {
    (q as u64).checked_pow(n as u32)
}

fn pieces(g: &Multigraph, opts: &EvalOptions) -> Vec<Multigraph> {
    if opts.factor_components {
        g.component_subgraphs()
    } else {
        vec![g.clone()]
    }
}

/// Z_M(G) = Σ_σ Π_{(u,v) ∈ E} M_{σ(u)σ(v)}.
pub fn z_brute<T: Scalar>(m: &SymMatrix<T>, g: &Multigraph) -> Result<T> {
    z_brute_with(m, g, &EvalOptions::default())
}

/// Small pieces are enumerated; larger ones are summed exactly by variable
/// elimination when its tables fit the budget, else enumerated if that fits.
pub fn z_brute_with<T: Scalar>(m: &SymMatrix<T>, g: &Multigraph, opts: &EvalOptions) -> Result<T> {
    let mut z = T::one();
    for piece in pieces(g, opts) {
        let count = assignments(m.q(), piece.n_vertices());
        let v = if count.is_some_and(|c| c <= ENUMERATE_BELOW.min(opts.assign_budget)) {
            enumerate_z(m, &piece)
        } else {
            match eliminate(m, &piece, opts.assign_budget) {
                Ok(v) => v,
                Err(_) if count.is_some_and(|c| c <= opts.assign_budget) => enumerate_z(m, &piece),
                Err(e) => return Err(e),
            }
        };
        z = z * v;
    }
    Ok(z)
}

/// Z by plain enumeration only.
pub fn z_enumerate<T: Scalar>(m: &SymMatrix<T>, g: &Multigraph, opts: &EvalOptions) -> Result<T> {
    let mut z = T::one();
    for piece in pieces(g, opts) {
        check_enum_budget(m.q(), piece.n_vertices(), opts.assign_budget)?;
        z = z * enumerate_z(m, &piece);
    }
    Ok(z)
}

/// Z by variable elimination only.
pub fn z_eliminate<T: Scalar>(m: &SymMatrix<T>, g: &Multigraph, budget: u64) -> Result<T> {
    eliminate(m, g, budget)
}

fn check_enum_budget(q: usize, n: usize, budget: u64) -> Result<()> {
    match assignments(q, n) {
        Some(c) if c <= budget => Ok(()),
        Some(c) => Err(Error::budget("assignment", c, budget)),
        None => Err(Error::budget("assignment", format!("{q}^{n}"), budget)),
    }
}

fn enumerate_z<T: Scalar>(m: &SymMatrix<T>, g: &Multigraph) -> T {
    let distinct = m.distinct_entries();
    let counts = kvector_counts(m, &distinct, g);
    let mut z = T::zero();
    for (k, c) in counts {
        let mut term = T::from_int(c as i64);
        for (s, &ks) in k.iter().enumerate() {
            for _ in 0..ks {
                term = term * distinct[s].clone();
            }
        }
        z = z + term;
    }
    z
}

/// Assignment counts keyed by how many edges land on each distinct entry.
fn kvector_counts<T: Scalar>(m: &SymMatrix<T>, distinct: &[T], g: &Multigraph) -> Vec<(Vec<u32>, u64)> {
    let q = m.q();
    let n = g.n_vertices();
    let s = distinct.len();
    let class: Vec<usize> = m
        .entries()
        .iter()
        .map(|x| distinct.iter().position(|d| d == x).unwrap())
        .collect();
    if n == 0 {
        return vec![(vec![0; s], 1)];
    }
    // Edges hang off their later endpoint so a counter step only touches the changed suffix.
    let mut by_last: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for &(u, v) in g.edges() {
        by_last[u.max(v)].push((u.min(v), u.max(v)));
    }
    let shard_depth = shard_depth(q, n);
    let shards = q.pow(shard_depth as u32);
    let maps: Vec<HashMap<Vec<u32>, u64>> = (0..shards)
        .into_par_iter()
        .map(|prefix| {
            let mut color = vec![0usize; n];
            let mut p = prefix;
            for i in (0..shard_depth).rev() {
                color[i] = p % q;
                p /= q;
            }
            let mut map: HashMap<Vec<u32>, u64> = HashMap::new();
            // k[v] = edge-class counts over edges whose later endpoint is ≤ v.
            let mut k = vec![vec![0u32; s]; n + 1];
            let recompute = |k: &mut Vec<Vec<u32>>, color: &[usize], from: usize| {
                for v in from..n {
                    let mut cur = if v == 0 { vec![0; s] } else { k[v - 1].clone() };
                    for &(a, b) in &by_last[v] {
                        cur[class[color[a] * q + color[b]]] += 1;
                    }
                    k[v] = cur;
                }
            };
            recompute(&mut k, &color, 0);
            loop {
                *map.entry(k[n - 1].clone()).or_insert(0) += 1;
                // Increment the free suffix as a base-q counter.
                let mut i = n;
                loop {
                    if i == shard_depth {
                        return map;
                    }
                    i -= 1;
                    color[i] += 1;
                    if color[i] < q {
                        break;
                    }
                    color[i] = 0;
                }
                recompute(&mut k, &color, i);
            }
        })
        .collect();
    let mut total: HashMap<Vec<u32>, u64> = HashMap::new();
    for map in maps {
        for (k, c) in map {
            *total.entry(k).or_insert(0) += c;
        }
    }
    let mut out: Vec<_> = total.into_iter().collect();
    out.sort();
    out
}

fn shard_depth(q: usize, n: usize) -> usize {
    let target = 4 * rayon::current_num_threads().max(1);
    let mut d = 0;
    let mut shards = 1;
    while d < n.saturating_sub(1) && shards < target && q > 1 {
        shards *= q;
        d += 1;
    }
    d
}

struct Factor<T> {
    vars: Vec<usize>,
    table: Vec<T>,
}

/// Sum-product over vertex variables, eliminating a minimum-scope variable first.
fn eliminate<T: Scalar>(m: &SymMatrix<T>, g: &Multigraph, budget: u64) -> Result<T> {
    let q = m.q();
    let n = g.n_vertices();
    let mut factors: Vec<Factor<T>> = Vec::new();
    for &(u, v) in g.edges() {
        if u == v {
            factors.push(Factor {
                vars: vec![u],
                table: (0..q).map(|a| m.get(a, a).clone()).collect(),
            });
        } else {
            let (a, b) = (u.min(v), u.max(v));
            factors.push(Factor {
                vars: vec![a, b],
                table: m.entries().to_vec(),
            });
        }
    }
    let mut scalar = T::one();
    let mut alive = vec![true; n];
    for _ in 0..n {
        // Pick the live variable whose combined scope is smallest.
        let mut best: Option<(usize, usize)> = None;
        for v in (0..n).filter(|&v| alive[v]) {
            let mut scope: Vec<usize> = factors
                .iter()
                .filter(|f| f.vars.contains(&v))
                .flat_map(|f| f.vars.iter().copied())
                .collect();
            scope.sort_unstable();
            scope.dedup();
            let size = scope.len().max(1);
            if best.is_none_or(|(_, s)| size < s) {
                best = Some((v, size));
            }
        }
        let (v, size) = best.unwrap();
        alive[v] = false;
        let cells = assignments(q, size).filter(|&c| c <= budget);
        if cells.is_none() {
            return Err(Error::budget("elimination table", format!("{q}^{size}"), budget));
        }
        let (touching, rest): (Vec<_>, Vec<_>) = factors.into_iter().partition(|f| f.vars.contains(&v));
        factors = rest;
        if touching.is_empty() {
            scalar = scalar * T::from_int(q as i64);
            continue;
        }
        let mut scope: Vec<usize> = touching.iter().flat_map(|f| f.vars.iter().copied()).collect();
        scope.sort_unstable();
        scope.dedup();
        let out_vars: Vec<usize> = scope.iter().copied().filter(|&x| x != v).collect();
        let vpos = scope.iter().position(|&x| x == v).unwrap();
        // Strides of each factor's variables inside `scope` (most significant first).
        let strides: Vec<Vec<usize>> = touching
            .iter()
            .map(|f| f.vars.iter().map(|x| scope.iter().position(|y| y == x).unwrap()).collect())
            .collect();
        let out_len = q.pow(out_vars.len() as u32);
        let mut table = vec![T::zero(); out_len];
        let mut digits = vec![0usize; scope.len()];
        let total = q.pow(scope.len() as u32);
        for _ in 0..total {
            let mut prod = T::one();
            for (f, pos) in touching.iter().zip(&strides) {
                let idx = pos.iter().fold(0, |acc, &p| acc * q + digits[p]);
                prod = prod * f.table[idx].clone();
                if prod.is_zero() {
                    break;
                }
            }
            let oidx = (0..scope.len()).filter(|&p| p != vpos).fold(0, |acc, p| acc * q + digits[p]);
            table[oidx] = table[oidx].clone() + prod;
            for d in digits.iter_mut().rev() {
                *d += 1;
                if *d < q {
                    break;
                }
                *d = 0;
            }
        }
        if out_vars.is_empty() {
            scalar = scalar * table.pop().unwrap();
        } else {
            factors.push(Factor {
                vars: out_vars,
                table,
            });
        }
    }
    debug_assert!(factors.is_empty());
    Ok(scalar)
}

/// x ↦ #_M(G, x), ordered by value.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CountMap(pub BTreeMap<Rational, BigUint>);

impl CountMap {
    pub fn get(&self, x: &Rational) -> BigUint {
        self.0.get(x).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Rational, &BigUint)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> BigUint {
        self.0.values().sum()
    }

    /// Adds `count` to `x`, dropping entries that stay at zero.
    pub fn add(&mut self, x: Rational, count: BigUint) {
        if count.is_zero() {
            return;
        }
        *self.0.entry(x).or_default() += count;
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_entries()).expect("serializable")
    }

    pub fn to_entries(&self) -> Vec<CountEntry> {
        self.0
            .iter()
            .map(|(x, c)| CountEntry {
                value: fmt_rational(x),
                count: c.to_string(),
            })
            .collect()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let entries: Vec<CountEntry> = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            msg: e.to_string(),
        })?;
        let mut out = CountMap::default();
        for e in entries {
            let c: BigUint = e.count.parse().map_err(|_| Error::parse(0, format!("bad count {:?}", e.count)))?;
            out.add(parse_rational(&e.value)?, c);
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountEntry {
    pub value: String,
    pub count: String,
}

pub fn count_map(m: &RatMatrix, g: &Multigraph) -> Result<CountMap> {
    count_map_with(m, g, &EvalOptions::default())
}

/// Products over different components multiply, so per-component maps are
/// convolved.
pub fn count_map_with(m: &RatMatrix, g: &Multigraph, opts: &EvalOptions) -> Result<CountMap> {
    let distinct = m.distinct_entries();
    let mut acc = CountMap::default();
    acc.add(Rational::one(), BigUint::one());
    for piece in pieces(g, opts) {
        check_enum_budget(m.q(), piece.n_vertices(), opts.assign_budget)?;
        let mut local = CountMap::default();
        for (k, c) in kvector_counts(m, &distinct, &piece) {
            let mut x = Rational::one();
            for (s, &ks) in k.iter().enumerate() {
                x *= num_traits::pow(distinct[s].clone(), ks as usize);
            }
            local.add(x, BigUint::from(c));
        }
        let mut next = CountMap::default();
        for (x, a) in acc.iter() {
            for (y, b) in local.iter() {
                next.add(x * y, a * b);
            }
        }
        acc = next;
    }
    Ok(acc)
}

pub fn z_from_counts(c: &CountMap) -> Rational {
    c.iter()
        .map(|(x, n)| x * Rational::from_integer(n.clone().into()))
        .sum()
}

/// Count as a machine integer when it fits.
pub fn count_u64(c: &BigUint) -> Option<u64> {
    c.to_u64()
}
