//! Kasteleyn orientations and weighted perfect-matching sums on plane graphs.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::pfaffian::{pfaffian_sparse, signum, SparseSkew};
use crate::error::{Error, Result};
use crate::multigraph::{euler_holds, faces, EdgeEnd, Multigraph, RotationSystem};
use crate::scalar::{common_denominator, pow_u, Rational};

/// Per edge, `true` when oriented from its end 0 to its end 1. Every face
/// except one per component is traversed along an odd number of its edges.
pub fn kasteleyn_orientation(g: &Multigraph, rot: &RotationSystem) -> Result<Vec<bool>> {
    if let Some(e) = (0..g.n_edges()).find(|&e| g.is_loop(e)) {
        return Err(Error::HasLoop(e));
    }
    let fs = faces(g, rot)?;
    if !euler_holds(g, rot) {
        return Err(Error::NonPlanarEmbedding);
    }
    let m = g.n_edges();
    let mut face_of = vec![usize::MAX; 2 * m];
    for (f, darts) in fs.iter().enumerate() {
        for d in darts {
            face_of[2 * d.edge + d.end as usize] = f;
        }
    }
    // Spanning forest by BFS in edge-index order; tree edges keep end 0 → end 1.
    let inc = g.incidence();
    let mut orient = vec![true; m];
    let mut in_tree = vec![false; m];
    let mut seen = vec![false; g.n_vertices()];
    for s in 0..g.n_vertices() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &x in &inc[v] {
                let w = g.endpoint(x.other());
                if !seen[w] {
                    seen[w] = true;
                    in_tree[x.edge] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    // Dual spanning tree on the remaining edges, rooted at the lowest face.
    let nf = fs.len();
    let mut dual: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nf];
    for e in (0..m).filter(|&e| !in_tree[e]) {
        let (f0, f1) = (face_of[2 * e], face_of[2 * e + 1]);
        if f0 == f1 {
            return Err(Error::Internal("non-tree edge bounds a single face".into()));
        }
        dual[f0].push((f1, e));
        dual[f1].push((f0, e));
    }
    let mut parent_edge = vec![usize::MAX; nf];
    let mut visited = vec![false; nf];
    let mut order = Vec::with_capacity(nf);
    for root in 0..nf {
        if visited[root] {
            continue;
        }
        visited[root] = true;
        let mut stack = vec![root];
        while let Some(f) = stack.pop() {
            order.push(f);
            for &(h, e) in &dual[f] {
                if !visited[h] {
                    visited[h] = true;
                    parent_edge[h] = e;
                    stack.push(h);
                }
            }
        }
    }
    // Children precede parents in reverse discovery order.
    for &f in order.iter().rev() {
        let pe = parent_edge[f];
        if pe == usize::MAX {
            continue;
        }
        let agrees = |d: &EdgeEnd, o: &[bool]| o[d.edge] == (d.end == 0);
        let count = fs[f].iter().filter(|d| d.edge != pe && agrees(d, &orient)).count();
        let own = fs[f].iter().find(|d| d.edge == pe).unwrap();
        // Make the face total odd.
        let want_agree = count % 2 == 0;
        orient[pe] = want_agree == (own.end == 0);
    }
    Ok(orient)
}

fn skew_of(g: &Multigraph, orient: &[bool], weights: &[BigInt]) -> SparseSkew {
    let mut s = SparseSkew::new(g.n_vertices());
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if orient[e] {
            s.add(u, v, weights[e].clone());
        } else {
            s.add(v, u, weights[e].clone());
        }
    }
    s
}

/// Σ over perfect matchings of Π edge weights.
///
/// All matchings share one Pfaffian sign under a Kasteleyn orientation; that
/// sign is read off the unit-weight Pfaffian, which counts the matchings.
pub fn count_pm_planar(g: &Multigraph, rot: &RotationSystem, weights: &[Rational]) -> Result<Rational> {
    if weights.len() != g.n_edges() {
        return Err(Error::DimensionMismatch {
            expected: g.n_edges(),
            got: weights.len(),
        });
    }
    let orient = kasteleyn_orientation(g, rot)?;
    let n = g.n_vertices();
    if n % 2 == 1 {
        return Ok(Rational::zero());
    }
    let unit = pfaffian_sparse(&skew_of(g, &orient, &vec![BigInt::one(); g.n_edges()]));
    if unit.is_zero() {
        return Ok(Rational::zero());
    }
    let d = common_denominator(weights);
    let scaled: Vec<BigInt> = weights.iter().map(|w| (w * Rational::from_integer(d.clone())).to_integer()).collect();
    let pf = pfaffian_sparse(&skew_of(g, &orient, &scaled));
    let signed = if signum(&unit) < 0 { -pf } else { pf };
    Ok(Rational::from_integer(signed) / pow_u(&Rational::from_integer(d), (n / 2) as u64))
}

/// Weighted matching sum by exhaustive search; exponential oracle.
pub fn count_pm_brute(g: &Multigraph, weights: &[Rational]) -> Rational {
    fn go(v: usize, matched: &mut Vec<bool>, inc: &[Vec<(usize, usize)>], w: &[Rational]) -> Rational {
        let Some(u) = (v..matched.len()).find(|&u| !matched[u]) else {
            return Rational::one();
        };
        matched[u] = true;
        let mut total = Rational::zero();
        for &(e, x) in &inc[u] {
            if !matched[x] {
                matched[x] = true;
                total += &w[e] * go(u + 1, matched, inc, w);
                matched[x] = false;
            }
        }
        matched[u] = false;
        total
    }
    let mut inc = vec![Vec::new(); g.n_vertices()];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if u != v {
            inc[u].push((e, v));
            inc[v].push((e, u));
        }
    }
    go(0, &mut vec![false; g.n_vertices()], &inc, weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multigraph::named;
    use crate::planarity::planar_embed;
    use crate::scalar::{rat, ratio};

    fn unit(g: &Multigraph) -> Vec<Rational> {
        vec![rat(1); g.n_edges()]
    }

    fn pm(g: &Multigraph) -> Rational {
        let rot = planar_embed(g).unwrap();
        count_pm_planar(g, &rot, &unit(g)).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(pm(&named::complete(4)), rat(3));
        assert_eq!(pm(&named::path(4)), rat(1));
        assert_eq!(pm(&named::cube()), rat(9));
        assert_eq!(pm(&named::grid(4, 4)), rat(36));
        assert_eq!(pm(&named::grid(8, 8)), rat(12988816));
    }

    #[test]
    fn weighted_against_brute() {
        let graphs = [
            named::cube(),
            named::wheel(6),
            named::grid(3, 4),
            Multigraph::from_edges(4, &[(0, 1), (0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]),
            named::cycle(6).disjoint_union(&named::complete(4)),
        ];
        for g in graphs {
            let w: Vec<Rational> = (0..g.n_edges()).map(|e| ratio(e as i64 % 5 - 2, 1 + e as i64 % 3)).collect();
            let rot = planar_embed(&g).unwrap();
            assert_eq!(count_pm_planar(&g, &rot, &w).unwrap(), count_pm_brute(&g, &w));
        }
    }

    #[test]
    fn loops_rejected() {
        let g = Multigraph::from_edges(2, &[(0, 1), (1, 1)]);
        let rot = planar_embed(&g).unwrap();
        assert_eq!(count_pm_planar(&g, &rot, &unit(&g)), Err(Error::HasLoop(1)));
    }
}
