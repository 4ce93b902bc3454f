//! Structural predicates, Form (I)–(VI) patterns, and tensor / direct-sum /
//! bipartite decompositions of small symmetric matrices.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Rational;
use crate::symmatrix::{RatMatrix, SymMatrix};

/// All permutations of 0..q in lexicographic order.
pub fn permutations(q: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (0..q).collect();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..q).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..q).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

pub fn invert_permutation(sigma: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; sigma.len()];
    for (i, &s) in sigma.iter().enumerate() {
        inv[s] = i;
    }
    inv
}

fn require_q4(m: &RatMatrix) -> Result<()> {
    if m.q() != 4 {
        return Err(Error::Dimension(format!("operation needs q = 4, got q = {}", m.q())));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Predicates {
    pub diag_distinct: bool,
    pub row_full: bool,
    pub po_distinct: bool,
    pub po_independent: bool,
    /// ϱ_tensor(M) (q = 4 only).
    #[serde(serialize_with = "ser_opt_rat")]
    pub varrho_tensor: Option<Rational>,
    pub varrho_tensor_zero: Option<bool>,
    pub rho_tensor_zero: Option<bool>,
}

fn ser_opt_rat<S: serde::Serializer>(v: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Predicate {
    DiagDistinct,
    RowFull,
    PoDistinct,
    PoIndependent,
    VarrhoTensorZero,
    RhoTensorZero,
}

/// Every predicate evaluated as a polynomial condition; the tensor entries are
/// filled in for q = 4 regardless of zero entries.
pub fn predicates(m: &RatMatrix) -> Predicates {
    let (v, rho) = if m.q() == 4 {
        let v = varrho_tensor(m);
        let rho = permutations(4).iter().any(|s| varrho_tensor(&m.permute(s)).is_zero());
        (Some(v), Some(rho))
    } else {
        (None, None)
    };
    Predicates {
        diag_distinct: diag_distinct(m),
        row_full: row_full(m),
        po_distinct: po_distinct(m),
        po_independent: po_independent(m),
        varrho_tensor_zero: v.as_ref().map(|x| x.is_zero()),
        varrho_tensor: v,
        rho_tensor_zero: rho,
    }
}

/// One predicate with the strict domain checks of the tensor polynomial.
pub fn eval_predicate(m: &RatMatrix, p: Predicate) -> Result<bool> {
    match p {
        Predicate::DiagDistinct => Ok(diag_distinct(m)),
        Predicate::RowFull => Ok(row_full(m)),
        Predicate::PoDistinct => Ok(po_distinct(m)),
        Predicate::PoIndependent => Ok(po_independent(m)),
        Predicate::VarrhoTensorZero | Predicate::RhoTensorZero => {
            require_q4(m)?;
            if m.has_zero() {
                return Err(Error::Domain("tensor predicates need nonzero entries".into()));
            }
            if p == Predicate::VarrhoTensorZero {
                Ok(varrho_tensor(m).is_zero())
            } else {
                Ok(permutations(4).iter().any(|s| varrho_tensor(&m.permute(s)).is_zero()))
            }
        }
    }
}

fn all_distinct(xs: &[&Rational]) -> bool {
    (0..xs.len()).all(|i| (i + 1..xs.len()).all(|j| xs[i] != xs[j]))
}

pub fn diag_distinct(m: &RatMatrix) -> bool {
    let d: Vec<&Rational> = (0..m.q()).map(|i| m.get(i, i)).collect();
    all_distinct(&d)
}

pub fn row_full(m: &RatMatrix) -> bool {
    (0..m.q()).all(|i| all_distinct(&m.row(i).iter().collect::<Vec<_>>()))
}

/// No two rows agree as multisets.
pub fn po_distinct(m: &RatMatrix) -> bool {
    let sorted: Vec<Vec<Rational>> = (0..m.q())
        .map(|i| {
            let mut r = m.row(i).to_vec();
            r.sort();
            r
        })
        .collect();
    (0..m.q()).all(|i| (i + 1..m.q()).all(|j| sorted[i] != sorted[j]))
}

/// No row is parallel to a rearrangement of another (Gram determinants).
pub fn po_independent(m: &RatMatrix) -> bool {
    let q = m.q();
    let perms = permutations(q);
    let dot = |a: &[Rational], b: &[Rational]| -> Rational { a.iter().zip(b).map(|(x, y)| x * y).sum() };
    for i in 0..q {
        for j in 0..q {
            if i == j {
                continue;
            }
            let ri = m.row(i);
            let nii = dot(ri, ri);
            let nj = dot(m.row(j), m.row(j));
            for s in &perms {
                let rj: Vec<Rational> = s.iter().map(|&k| m.get(j, k).clone()).collect();
                let c = dot(ri, &rj);
                if (&nii * &nj - &c * &c).is_zero() {
                    return false;
                }
            }
        }
    }
    true
}

/// (N₁₄−N₂₃)⁴ + (N₁₁N₄₄−N₂₂N₃₃)² + Σᵢ(Nᵢ₁Nᵢ₄−Nᵢ₂Nᵢ₃)².
pub fn varrho_tensor(n: &RatMatrix) -> Rational {
    assert_eq!(n.q(), 4);
    let g = |i: usize, j: usize| n.get(i, j);
    let a = g(0, 3) - g(1, 2);
    let b = g(0, 0) * g(3, 3) - g(1, 1) * g(2, 2);
    let mut s = &a * &a * &a * &a + &b * &b;
    for i in 0..4 {
        let r = g(i, 0) * g(i, 3) - g(i, 1) * g(i, 2);
        s += &r * &r;
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorFactors {
    pub sigma: Vec<usize>,
    pub a: RatMatrix,
    pub b: RatMatrix,
}

/// Smallest σ with Mσ = A ⊗ B, normalized to A₁₁ = 1.
pub fn tensor_decompose(m: &RatMatrix) -> Result<Option<TensorFactors>> {
    require_q4(m)?;
    if m.has_zero() {
        return Err(Error::Domain("tensor decomposition needs nonzero entries".into()));
    }
    for sigma in permutations(4) {
        let n = m.permute(&sigma);
        if !varrho_tensor(&n).is_zero() {
            continue;
        }
        let n11 = n.get(0, 0);
        let x = n.get(0, 2) / n11;
        let y = n.get(2, 2) / n11;
        let a = SymMatrix::from_rows(vec![vec![Rational::one(), x.clone()], vec![x, y]])?;
        let b = n.submatrix(&[0, 1]);
        if a.tensor(&b) == n {
            return Ok(Some(TensorFactors { sigma, a, b }));
        }
    }
    Ok(None)
}

fn block(n: &RatMatrix, a: usize, c: usize) -> [[Rational; 2]; 2] {
    let g = |i: usize, j: usize| n.get(2 * a + i, 2 * c + j).clone();
    [[g(0, 0), g(0, 1)], [g(1, 0), g(1, 1)]]
}

/// N = A ⊗ B for 2×2 symmetric A, B, allowing zero entries; A is scaled so its
/// first nonzero entry in (A₁₁, A₂₂, A₁₂) order is 1.
pub fn factor_tensor(n: &RatMatrix) -> Option<(RatMatrix, RatMatrix)> {
    if n.q() != 4 {
        return None;
    }
    let nonzero = |b: &[[Rational; 2]; 2]| b.iter().flatten().any(|x| !x.is_zero());
    let base = [(0, 0), (1, 1), (0, 1)]
        .into_iter()
        .map(|(a, c)| block(n, a, c))
        .find(nonzero)?;
    if base[0][1] != base[1][0] {
        return None;
    }
    let (pb, pd) = (0..2)
        .flat_map(|b| (0..2).map(move |d| (b, d)))
        .find(|&(b, d)| !base[b][d].is_zero())?;
    let mut a = [[Rational::zero(), Rational::zero()], [Rational::zero(), Rational::zero()]];
    for ai in 0..2 {
        for ci in 0..2 {
            let blk = block(n, ai, ci);
            let f = &blk[pb][pd] / &base[pb][pd];
            for b in 0..2 {
                for d in 0..2 {
                    if blk[b][d] != &f * &base[b][d] {
                        return None;
                    }
                }
            }
            a[ai][ci] = f;
        }
    }
    let scale = [&a[0][0], &a[1][1], &a[0][1]].into_iter().find(|x| !x.is_zero())?.clone();
    let am = SymMatrix::from_rows(a.iter().map(|r| r.iter().map(|x| x / &scale).collect()).collect()).ok()?;
    let bm = SymMatrix::from_rows(base.iter().map(|r| r.iter().map(|x| x * &scale).collect()).collect()).ok()?;
    debug_assert_eq!(&am.tensor(&bm), n);
    Some((am, bm))
}

/// Support-graph components (i ~ j iff M_ij ≠ 0, i ≠ j) in order of smallest index.
fn support_components(m: &RatMatrix) -> Vec<Vec<usize>> {
    let q = m.q();
    let mut comp = vec![usize::MAX; q];
    let mut out = Vec::new();
    for s in 0..q {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut members = vec![s];
        comp[s] = id;
        let mut i = 0;
        while i < members.len() {
            let x = members[i];
            for y in 0..q {
                if y != x && comp[y] == usize::MAX && !m.get(x, y).is_zero() {
                    comp[y] = id;
                    members.push(y);
                }
            }
            i += 1;
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectSum {
    pub partition: Vec<Vec<usize>>,
    pub blocks: Vec<RatMatrix>,
}

pub fn direct_sum_decompose(m: &RatMatrix) -> Option<DirectSum> {
    let partition = support_components(m);
    if partition.len() < 2 {
        return None;
    }
    let blocks = partition.iter().map(|p| m.submatrix(p)).collect();
    Some(DirectSum { partition, blocks })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartition {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    /// Rows indexed by `left`, columns by `right`.
    pub block: Vec<Vec<Rational>>,
}

pub fn bipartite_detect(m: &RatMatrix) -> Option<Bipartition> {
    let q = m.q();
    if (0..q).any(|i| !m.get(i, i).is_zero()) {
        return None;
    }
    let mut side = vec![u8::MAX; q];
    let mut edges = 0;
    for s in 0..q {
        if side[s] != u8::MAX {
            continue;
        }
        side[s] = 0;
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for y in 0..q {
                if y == x || m.get(x, y).is_zero() {
                    continue;
                }
                edges += 1;
                if side[y] == u8::MAX {
                    side[y] = 1 - side[x];
                    stack.push(y);
                } else if side[y] == side[x] {
                    return None;
                }
            }
        }
    }
    if edges == 0 {
        return None;
    }
    let left: Vec<usize> = (0..q).filter(|&i| side[i] == 0).collect();
    let right: Vec<usize> = (0..q).filter(|&i| side[i] == 1).collect();
    let block = left
        .iter()
        .map(|&i| right.iter().map(|&j| m.get(i, j).clone()).collect())
        .collect();
    Some(Bipartition { left, right, block })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FormTag {
    I,
    II,
    III,
    IV,
    V,
    VI,
}

impl FormTag {
    pub const ALL: [FormTag; 6] = [FormTag::I, FormTag::II, FormTag::III, FormTag::IV, FormTag::V, FormTag::VI];

    fn pattern(self) -> [&'static [u8; 4]; 4] {
        match self {
            FormTag::I => [b"axyz", b"xayz", b"yybt", b"zztc"],
            FormTag::II => [b"axyz", b"xazy", b"yzbt", b"zytc"],
            FormTag::III => [b"axyz", b"xazy", b"yzbt", b"zytb"],
            FormTag::IV => [b"axxz", b"xaxz", b"xxaz", b"zzzb"],
            FormTag::V => [b"axyz", b"xazy", b"yzax", b"zyxb"],
            FormTag::VI => [b"axyz", b"xazy", b"yzax", b"zyxa"],
        }
    }

    /// Equal symbols must carry equal values; distinct symbols may collide.
    pub fn matches(self, n: &RatMatrix) -> bool {
        let p = self.pattern();
        let mut seen: Vec<(u8, &Rational)> = Vec::new();
        for i in 0..4 {
            for j in i..4 {
                let s = p[i][j];
                let v = n.get(i, j);
                match seen.iter().find(|(t, _)| *t == s) {
                    Some((_, w)) if *w != v => return false,
                    Some(_) => {}
                    None => seen.push((s, v)),
                }
            }
        }
        true
    }
}

impl fmt::Display for FormTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FormTag::I => "I",
            FormTag::II => "II",
            FormTag::III => "III",
            FormTag::IV => "IV",
            FormTag::V => "V",
            FormTag::VI => "VI",
        };
        f.write_str(s)
    }
}

/// Each matched form with its lexicographically smallest witness σ.
pub fn form_detect(m: &RatMatrix) -> Result<Vec<(FormTag, Vec<usize>)>> {
    require_q4(m)?;
    let perms = permutations(4);
    let mut out = Vec::new();
    for tag in FormTag::ALL {
        if let Some(s) = perms.iter().find(|s| tag.matches(&m.permute(s))) {
            out.push((tag, s.clone()));
        }
    }
    Ok(out)
}
