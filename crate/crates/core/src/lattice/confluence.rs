use serde::Serialize;

use crate::error::{Error, Result};

/// Pairs (S_a, T_a) of 0-based coordinate indices, S_a ⊆ I⁺ and T_a ⊆ I⁻.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairedPartition {
    pub pairs: Vec<(Vec<usize>, Vec<usize>)>,
}

struct Supports {
    pos: Vec<usize>,
    neg: Vec<usize>,
    pos_sum: Vec<i64>,
    neg_sum: Vec<i64>,
}

impl Supports {
    fn new(x: &[i64]) -> Self {
        let pos: Vec<usize> = (0..x.len()).filter(|&i| x[i] > 0).collect();
        let neg: Vec<usize> = (0..x.len()).filter(|&i| x[i] < 0).collect();
        let sums = |idx: &[usize], sign: i64| -> Vec<i64> {
            (0..1usize << idx.len())
                .map(|mask| {
                    idx.iter()
                        .enumerate()
                        .filter(|(b, _)| mask >> b & 1 == 1)
                        .map(|(_, &i)| sign * x[i])
                        .sum()
                })
                .collect()
        };
        Supports {
            pos_sum: sums(&pos, 1),
            neg_sum: sums(&neg, -1),
            pos,
            neg,
        }
    }

    /// All balanced (S, T) as bitmask pairs, including (∅, ∅).
    fn balanced(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (s, a) in self.pos_sum.iter().enumerate() {
            for (t, b) in self.neg_sum.iter().enumerate() {
                if a == b {
                    out.push((s, t));
                }
            }
        }
        out
    }
}

/// The two-condition definition, checked over every pair of balanced pairs.
fn by_definition(sup: &Supports) -> bool {
    let full = (sup.pos_sum.len() - 1, sup.neg_sum.len() - 1);
    if sup.pos_sum[full.0] != sup.neg_sum[full.1] {
        return false;
    }
    let c = sup.balanced();
    c.iter()
        .all(|&(s1, t1)| c.iter().all(|&(s2, t2)| sup.pos_sum[s1 & s2] == sup.neg_sum[t1 & t2]))
}

/// Minimal nonempty balanced pairs; confluent iff they partition both
/// supports and their unions are exactly the balanced pairs.
fn by_minimal_members(sup: &Supports) -> Option<Vec<(usize, usize)>> {
    let c = sup.balanced();
    let sub = |a: (usize, usize), b: (usize, usize)| a.0 & b.0 == a.0 && a.1 & b.1 == a.1;
    let minimal: Vec<(usize, usize)> = c
        .iter()
        .copied()
        .filter(|&p| p != (0, 0))
        .filter(|&p| !c.iter().any(|&o| o != (0, 0) && o != p && sub(o, p)))
        .collect();
    let (mut s_all, mut t_all) = (0usize, 0usize);
    for &(s, t) in &minimal {
        if s & s_all != 0 || t & t_all != 0 {
            return None;
        }
        s_all |= s;
        t_all |= t;
    }
    if s_all != sup.pos_sum.len() - 1 || t_all != sup.neg_sum.len() - 1 {
        return None;
    }
    let mut unions: Vec<(usize, usize)> = (0..1usize << minimal.len())
        .map(|p| {
            minimal
                .iter()
                .enumerate()
                .filter(|(a, _)| p >> a & 1 == 1)
                .fold((0, 0), |acc, (_, &(s, t))| (acc.0 | s, acc.1 | t))
        })
        .collect();
    let mut c = c;
    unions.sort_unstable();
    c.sort_unstable();
    (unions == c).then_some(minimal)
}

fn expand(mask: usize, idx: &[usize]) -> Vec<usize> {
    idx.iter()
        .enumerate()
        .filter(|(b, _)| mask >> b & 1 == 1)
        .map(|(_, &i)| i)
        .collect()
}

/// Decides confluence by both routes and, when confluent, returns the
/// confluence basis ordered by smallest index in S_a.
pub fn is_confluent(x: &[i64]) -> Result<(bool, Option<PairedPartition>)> {
    if x.iter().all(|&v| v == 0) {
        return Err(Error::ZeroVector);
    }
    super::check_chi(x)?;
    let sup = Supports::new(x);
    let def = by_definition(&sup);
    let built = by_minimal_members(&sup);
    if def != built.is_some() {
        return Err(Error::Internal(format!("confluence checks disagree on {x:?}")));
    }
    Ok(match built {
        None => (false, None),
        Some(minimal) => {
            let mut pairs: Vec<(Vec<usize>, Vec<usize>)> = minimal
                .into_iter()
                .map(|(s, t)| (expand(s, &sup.pos), expand(t, &sup.neg)))
                .collect();
            pairs.sort();
            (true, Some(PairedPartition { pairs }))
        }
    })
}
