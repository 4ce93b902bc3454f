#![allow(dead_code)]

use plhom_core::scalar::ratio;
use plhom_core::{Multigraph, RatMatrix, Rational, SymMatrix};
use rand::Rng;

/// p/q with 1 ≤ |p|, q ≤ bound (zero allowed when `zero`).
pub fn rand_rat<R: Rng>(rng: &mut R, bound: i64, zero: bool) -> Rational {
    let lo = if zero { 0 } else { 1 };
    let p = rng.gen_range(lo..=bound) * if rng.gen_bool(0.5) { 1 } else { -1 };
    ratio(p, rng.gen_range(1..=bound))
}

pub fn rand_matrix<R: Rng>(rng: &mut R, q: usize, bound: i64) -> RatMatrix {
    let mut rows = vec![vec![Rational::from_integer(0.into()); q]; q];
    for i in 0..q {
        for j in i..q {
            let x = rand_rat(rng, bound, true);
            rows[i][j] = x.clone();
            rows[j][i] = x;
        }
    }
    SymMatrix::from_rows(rows).unwrap()
}

/// Uniform endpoints, loops and parallel edges allowed.
pub fn rand_graph<R: Rng>(rng: &mut R, max_v: usize, max_e: usize) -> Multigraph {
    let n = rng.gen_range(1..=max_v);
    let e = rng.gen_range(0..=max_e);
    let edges: Vec<(usize, usize)> = (0..e).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
    Multigraph::from_edges(n, &edges)
}

pub fn m(rows: &[&[i64]]) -> RatMatrix {
    RatMatrix::from_ints(rows).unwrap()
}
