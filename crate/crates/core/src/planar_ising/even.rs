use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::multigraph::Multigraph;
use crate::scalar::Rational;

/// Largest edge count accepted by the exhaustive even-subgraph oracle.
pub const EVEN_SUBGRAPH_EDGE_CAP: usize = 24;

/// c_k = number of even edge subsets of size k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvenSubgraphPoly {
    pub coeffs: Vec<BigUint>,
}

impl EvenSubgraphPoly {
    pub fn eval(&self, t: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * t + Rational::from_integer(c.clone().into()))
    }
}

/// Gray-code walk over all 2^|E| subsets, tracking vertex parities.
pub fn even_subgraph_poly_brute(g: &Multigraph) -> Result<EvenSubgraphPoly> {
    let m = g.n_edges();
    if m > EVEN_SUBGRAPH_EDGE_CAP {
        return Err(Error::budget("even-subgraph edge", m, EVEN_SUBGRAPH_EDGE_CAP));
    }
    let mut counts = vec![0u64; m + 1];
    let mut odd = vec![false; g.n_vertices()];
    let mut n_odd = 0usize;
    let mut size = 0usize;
    let mut chosen = vec![false; m];
    counts[0] = 1;
    for step in 1u64..1 << m {
        let e = step.trailing_zeros() as usize;
        chosen[e] = !chosen[e];
        if chosen[e] {
            size += 1;
        } else {
            size -= 1;
        }
        let (u, v) = g.edges()[e];
        if u != v {
            for x in [u, v] {
                odd[x] = !odd[x];
                if odd[x] {
                    n_odd += 1;
                } else {
                    n_odd -= 1;
                }
            }
        }
        if n_odd == 0 {
            counts[size] += 1;
        }
    }
    Ok(EvenSubgraphPoly {
        coeffs: counts.into_iter().map(BigUint::from).collect(),
    })
}
