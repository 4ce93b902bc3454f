//! Tractable / hard classification of nonnegative full-rank 2×2 and 4×4
//! matrices, with certificates that can be re-checked exactly.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::{fmt_rational, Rational};
use crate::structure::{bipartite_detect, direct_sum_decompose, factor_tensor, permutations, varrho_tensor};
use crate::symmatrix::{RatMatrix, SymMatrix};

pub const REASON_DOMAIN2: &str = "fullDomain2Hardness";
pub const REASON_DIRECT_SUM: &str = "domainSeparableDichotomy";
pub const REASON_BIPARTITE: &str = "bipartiteDichotomy";
pub const REASON_NONNEGATIVE: &str = "fullRankNonNegativeDichotomy";
pub const REASON_POSITIVE: &str = "fullRankPositiveDichotomy";
pub const REASON_TENSOR: &str = "tensorTractable";
pub const REASON_POTTS: &str = "tutteHardness-family";
pub const REASON_ONE: &str = "oneByOne";
pub const REASON_Q3: &str = "unknown(q=3)";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    Tractable,
    Hard,
    Unknown,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Tractable => "tractable",
            Outcome::Hard => "hard",
            Outcome::Unknown => "unknown",
        })
    }
}

/// Tractable 2×2 cases for [[x,y],[y,z]], tested in this order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TwoByTwoCase {
    XEqZ,
    YZero,
    Rank1,
}

impl fmt::Display for TwoByTwoCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TwoByTwoCase::XEqZ => "x=z",
            TwoByTwoCase::YZero => "y=0",
            TwoByTwoCase::Rank1 => "xz=y^2",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Certificate {
    /// permute(m, σ) = A ⊗ B with A₁₁ = A₂₂ and B₁₁ = B₂₂.
    TensorFactorization { sigma: Vec<usize>, a: RatMatrix, b: RatMatrix },
    /// Support components and a verdict per block.
    DirectSum { partition: Vec<Vec<usize>>, parts: Vec<Verdict> },
    TwoByTwo { case: TwoByTwoCase },
    OneByOne { value: Rational },
    /// permute(m, σ) = [[0,1],[1,0]] ⊗ A with A₁₁ = A₂₂.
    BipartiteTensor { sigma: Vec<usize>, a: RatMatrix },
    /// 2×2 entries failing every tractable case.
    TwoByTwoHard { x: Rational, y: Rational, z: Rational },
    /// c · Potts₄(x) with c > 0 and x ≠ 1.
    Potts { c: Rational, x: Rational },
    /// Bipartite 2+2 support whose off-diagonal block is not cross-equal.
    BipartiteNotCrossEqual { left: Vec<usize>, right: Vec<usize> },
    /// Connected non-bipartite support; `n_star` is the least odd power with
    /// all entries positive, `tensor` the first σ with a tensor factorization
    /// (whose factors then fail the diagonal test).
    NoTractableTensor { n_star: u32, tensor: Option<(Vec<usize>, RatMatrix, RatMatrix)> },
    /// A connected 3×3 block.
    UndecidedBlock { block: RatMatrix },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub outcome: Outcome,
    pub reason: String,
    pub certificate: Option<Certificate>,
}

impl Verdict {
    fn new(outcome: Outcome, reason: &str, certificate: Certificate) -> Self {
        Verdict {
            outcome,
            reason: reason.to_string(),
            certificate: Some(certificate),
        }
    }

    pub fn is_tractable(&self) -> bool {
        self.outcome == Outcome::Tractable
    }

    pub fn to_json(&self) -> Value {
        json!({
            "outcome": self.outcome.to_string(),
            "reason": self.reason,
            "certificate": self.certificate.as_ref().map(Certificate::to_json),
        })
    }
}

fn mat_json(m: &RatMatrix) -> Value {
    json!(m.rows().iter().map(|r| r.iter().map(fmt_rational).collect::<Vec<_>>()).collect::<Vec<_>>())
}

impl Certificate {
    pub fn to_json(&self) -> Value {
        match self {
            Certificate::TensorFactorization { sigma, a, b } => {
                json!({"kind": "TensorFactorization", "sigma": sigma, "a": mat_json(a), "b": mat_json(b)})
            }
            Certificate::DirectSum { partition, parts } => json!({
                "kind": "DirectSum",
                "partition": partition,
                "parts": parts.iter().map(Verdict::to_json).collect::<Vec<_>>(),
            }),
            Certificate::TwoByTwo { case } => json!({"kind": "TwoByTwoCase", "case": case.to_string()}),
            Certificate::OneByOne { value } => json!({"kind": "OneByOne", "value": fmt_rational(value)}),
            Certificate::BipartiteTensor { sigma, a } => {
                json!({"kind": "BipartiteTensor", "sigma": sigma, "a": mat_json(a)})
            }
            Certificate::TwoByTwoHard { x, y, z } => json!({
                "kind": "TwoByTwoHard", "x": fmt_rational(x), "y": fmt_rational(y), "z": fmt_rational(z),
            }),
            Certificate::Potts { c, x } => json!({"kind": "Potts", "c": fmt_rational(c), "x": fmt_rational(x)}),
            Certificate::BipartiteNotCrossEqual { left, right } => {
                json!({"kind": "BipartiteNotCrossEqual", "left": left, "right": right})
            }
            Certificate::NoTractableTensor { n_star, tensor } => json!({
                "kind": "NoTractableTensor",
                "connected": true,
                "bipartite": false,
                "n_star": n_star,
                "tensor": tensor.as_ref().map(|(s, a, b)| json!({"sigma": s, "a": mat_json(a), "b": mat_json(b)})),
            }),
            Certificate::UndecidedBlock { block } => json!({"kind": "UndecidedBlock", "block": mat_json(block)}),
        }
    }
}

fn check_nonnegative(m: &RatMatrix) -> Result<()> {
    if m.has_negative() {
        return Err(Error::NegativeEntry);
    }
    Ok(())
}

fn two_by_two_case(m: &RatMatrix) -> Option<TwoByTwoCase> {
    let (x, y, z) = (m.get(0, 0), m.get(0, 1), m.get(1, 1));
    if x == z {
        Some(TwoByTwoCase::XEqZ)
    } else if y.is_zero() {
        Some(TwoByTwoCase::YZero)
    } else if x * z == y * y {
        Some(TwoByTwoCase::Rank1)
    } else {
        None
    }
}

/// [[x,y],[y,z]] is tractable iff x = z, y = 0 or xz = y².
pub fn classify2(m: &RatMatrix) -> Result<Verdict> {
    if m.q() != 2 {
        return Err(Error::Dimension(format!("classify2 needs q = 2, got q = {}", m.q())));
    }
    check_nonnegative(m)?;
    Ok(match two_by_two_case(m) {
        Some(case) => Verdict::new(Outcome::Tractable, REASON_DOMAIN2, Certificate::TwoByTwo { case }),
        None => Verdict::new(
            Outcome::Hard,
            REASON_DOMAIN2,
            Certificate::TwoByTwoHard {
                x: m.get(0, 0).clone(),
                y: m.get(0, 1).clone(),
                z: m.get(1, 1).clone(),
            },
        ),
    })
}

fn classify_block(b: &RatMatrix) -> Result<Verdict> {
    match b.q() {
        1 => Ok(Verdict::new(
            Outcome::Tractable,
            REASON_ONE,
            Certificate::OneByOne { value: b.get(0, 0).clone() },
        )),
        2 => classify2(b),
        _ => Ok(Verdict::new(Outcome::Unknown, REASON_Q3, Certificate::UndecidedBlock { block: b.clone() })),
    }
}

fn swap_x() -> RatMatrix {
    RatMatrix::from_ints(&[&[0, 1], &[1, 0]]).unwrap()
}

fn equal_diagonal(a: &RatMatrix) -> bool {
    a.get(0, 0) == a.get(1, 1)
}

/// Lexicographically first σ with permute(m, σ) = [[0,1],[1,0]] ⊗ A, A₁₁ = A₂₂.
fn bipartite_tensor(m: &RatMatrix) -> Option<(Vec<usize>, RatMatrix)> {
    let x = swap_x();
    permutations(4).into_iter().find_map(|sigma| {
        let n = m.permute(&sigma);
        let a = SymMatrix::from_rows(vec![
            vec![n.get(0, 2).clone(), n.get(0, 3).clone()],
            vec![n.get(1, 2).clone(), n.get(1, 3).clone()],
        ])
        .ok()?;
        (equal_diagonal(&a) && x.tensor(&a) == n).then_some((sigma, a))
    })
}

/// c and x when m = c · Potts₄(x) with c > 0 and x ≠ 1.
fn potts_form(m: &RatMatrix) -> Option<(Rational, Rational)> {
    let q = m.q();
    let d = m.get(0, 0);
    let o = m.get(0, 1);
    if !o.is_positive() {
        return None;
    }
    let uniform = (0..q).all(|i| (0..q).all(|j| m.get(i, j) == if i == j { d } else { o }));
    let x = d / o;
    (uniform && !x.is_one()).then(|| (o.clone(), x))
}

/// Least odd n with every entry of mⁿ positive (None past n = 2q + 1).
fn odd_positive_power(m: &RatMatrix) -> Option<(u32, RatMatrix)> {
    let sq = m.pow(2);
    let mut p = m.clone();
    let mut n = 1;
    while n <= 2 * m.q() as u32 + 1 {
        if p.entries().iter().all(Signed::is_positive) {
            return Some((n, p));
        }
        p = p.mul_commuting(&sq);
        n += 2;
    }
    None
}

/// Decision tree for nonnegative full-rank 4×4 matrices: direct sum, then
/// bipartite, then tensor search on the connected non-bipartite branch.
pub fn classify4(m: &RatMatrix) -> Result<Verdict> {
    if m.q() != 4 {
        return Err(Error::Dimension(format!("classify4 needs q = 4, got q = {}", m.q())));
    }
    check_nonnegative(m)?;
    if m.det_fraction_free().is_zero() {
        return Err(Error::RankDeficient);
    }
    if let Some(ds) = direct_sum_decompose(m) {
        let parts: Vec<Verdict> = ds.blocks.iter().map(classify_block).collect::<Result<_>>()?;
        let outcome = if parts.iter().any(|v| v.outcome == Outcome::Hard) {
            Outcome::Hard
        } else if parts.iter().any(|v| v.outcome == Outcome::Unknown) {
            Outcome::Unknown
        } else {
            Outcome::Tractable
        };
        return Ok(Verdict::new(
            outcome,
            REASON_DIRECT_SUM,
            Certificate::DirectSum {
                partition: ds.partition,
                parts,
            },
        ));
    }
    if let Some(bp) = bipartite_detect(m) {
        return Ok(match bipartite_tensor(m) {
            Some((sigma, a)) => Verdict::new(Outcome::Tractable, REASON_BIPARTITE, Certificate::BipartiteTensor { sigma, a }),
            None => Verdict::new(
                Outcome::Hard,
                REASON_BIPARTITE,
                Certificate::BipartiteNotCrossEqual {
                    left: bp.left,
                    right: bp.right,
                },
            ),
        });
    }
    if let Some((c, x)) = potts_form(m) {
        return Ok(Verdict::new(Outcome::Hard, REASON_POTTS, Certificate::Potts { c, x }));
    }
    let positive = m.entries().iter().all(Signed::is_positive);
    let (n_star, power) =
        odd_positive_power(m).ok_or_else(|| Error::Internal("connected non-bipartite support without a positive odd power".into()))?;
    let mut first_tensor = None;
    for sigma in permutations(4) {
        if !varrho_tensor(&power.permute(&sigma)).is_zero() {
            continue;
        }
        let Some((a, b)) = factor_tensor(&m.permute(&sigma)) else { continue };
        if equal_diagonal(&a) && equal_diagonal(&b) {
            let reason = if positive { REASON_POSITIVE } else { REASON_NONNEGATIVE };
            return Ok(Verdict::new(Outcome::Tractable, reason, Certificate::TensorFactorization { sigma, a, b }));
        }
        if first_tensor.is_none() {
            first_tensor = Some((sigma, a, b));
        }
    }
    let reason = match (&first_tensor, positive) {
        (Some(_), _) => REASON_TENSOR,
        (None, true) => REASON_POSITIVE,
        (None, false) => REASON_NONNEGATIVE,
    };
    Ok(Verdict::new(
        Outcome::Hard,
        reason,
        Certificate::NoTractableTensor {
            n_star,
            tensor: first_tensor,
        },
    ))
}

/// Dispatches on q ∈ {2, 4}.
pub fn classify(m: &RatMatrix) -> Result<Verdict> {
    match m.q() {
        2 => classify2(m),
        4 => classify4(m),
        q => Err(Error::Dimension(format!("classification covers q = 2 and q = 4, got q = {q}"))),
    }
}

fn is_partition(p: &[Vec<usize>], q: usize) -> bool {
    let mut seen = vec![false; q];
    for &i in p.iter().flatten() {
        if i >= q || std::mem::replace(&mut seen[i], true) {
            return false;
        }
    }
    seen.iter().all(|&s| s)
}

/// Re-derives the structure a certificate claims, exactly.
pub fn validate_certificate(m: &RatMatrix, v: &Verdict) -> bool {
    let Some(cert) = &v.certificate else { return false };
    let q = m.q();
    let is_perm = |s: &[usize]| s.len() == q && is_partition(&[s.to_vec()], q);
    match cert {
        Certificate::TensorFactorization { sigma, a, b } => {
            v.outcome == Outcome::Tractable
                && is_perm(sigma)
                && a.q() == 2
                && b.q() == 2
                && equal_diagonal(a)
                && equal_diagonal(b)
                && m.permute(sigma) == a.tensor(b)
        }
        Certificate::BipartiteTensor { sigma, a } => {
            v.outcome == Outcome::Tractable
                && is_perm(sigma)
                && a.q() == 2
                && equal_diagonal(a)
                && m.permute(sigma) == swap_x().tensor(a)
        }
        Certificate::DirectSum { partition, parts } => {
            if partition.len() < 2 || partition.len() != parts.len() || !is_partition(partition, q) {
                return false;
            }
            let separated = partition.iter().enumerate().all(|(s, ps)| {
                partition
                    .iter()
                    .enumerate()
                    .filter(|&(t, _)| t != s)
                    .all(|(_, pt)| ps.iter().all(|&i| pt.iter().all(|&j| m.get(i, j).is_zero())))
            });
            let outcome_ok = match v.outcome {
                Outcome::Tractable => parts.iter().all(Verdict::is_tractable),
                Outcome::Hard => parts.iter().any(|p| p.outcome == Outcome::Hard),
                Outcome::Unknown => {
                    parts.iter().any(|p| p.outcome == Outcome::Unknown) && parts.iter().all(|p| p.outcome != Outcome::Hard)
                }
            };
            separated
                && outcome_ok
                && partition
                    .iter()
                    .zip(parts)
                    .all(|(p, sub)| validate_certificate(&m.submatrix(p), sub))
        }
        Certificate::TwoByTwo { case } => {
            v.outcome == Outcome::Tractable && q == 2 && {
                let (x, y, z) = (m.get(0, 0), m.get(0, 1), m.get(1, 1));
                match case {
                    TwoByTwoCase::XEqZ => x == z,
                    TwoByTwoCase::YZero => y.is_zero(),
                    TwoByTwoCase::Rank1 => x * z == y * y,
                }
            }
        }
        Certificate::OneByOne { value } => v.outcome == Outcome::Tractable && q == 1 && m.get(0, 0) == value,
        Certificate::TwoByTwoHard { x, y, z } => {
            v.outcome == Outcome::Hard
                && q == 2
                && (m.get(0, 0), m.get(0, 1), m.get(1, 1)) == (x, y, z)
                && two_by_two_case(m).is_none()
        }
        Certificate::Potts { c, x } => v.outcome == Outcome::Hard && potts_form(m) == Some((c.clone(), x.clone())),
        Certificate::BipartiteNotCrossEqual { left, right } => {
            v.outcome == Outcome::Hard
                && q == 4
                && bipartite_detect(m).is_some_and(|b| &b.left == left && &b.right == right)
                && bipartite_tensor(m).is_none()
        }
        Certificate::NoTractableTensor { n_star, tensor } => {
            v.outcome == Outcome::Hard
                && q == 4
                && direct_sum_decompose(m).is_none()
                && bipartite_detect(m).is_none()
                && odd_positive_power(m).is_some_and(|(n, _)| n == *n_star)
                && tensor.as_ref().is_none_or(|(s, a, b)| is_perm(s) && m.permute(s) == a.tensor(b))
                && permutations(4).iter().all(|s| {
                    factor_tensor(&m.permute(s)).is_none_or(|(a, b)| !(equal_diagonal(&a) && equal_diagonal(&b)))
                })
        }
        Certificate::UndecidedBlock { block } => v.outcome == Outcome::Unknown && block == m && q == 3,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use crate::symmatrix::potts;

    fn m(rows: &[&[i64]]) -> RatMatrix {
        RatMatrix::from_ints(rows).unwrap()
    }

    #[test]
    fn two_by_two() {
        let v = classify2(&m(&[&[2, 1], &[1, 2]])).unwrap();
        assert_eq!(v.certificate, Some(Certificate::TwoByTwo { case: TwoByTwoCase::XEqZ }));
        assert_eq!(classify2(&m(&[&[1, 2], &[2, 3]])).unwrap().outcome, Outcome::Hard);
        let v = classify2(&m(&[&[1, 2], &[2, 4]])).unwrap();
        assert_eq!(v.certificate, Some(Certificate::TwoByTwo { case: TwoByTwoCase::Rank1 }));
    }

    #[test]
    fn four_by_four() {
        let v = classify4(&potts(4, rat(0))).unwrap();
        assert_eq!(v.outcome, Outcome::Hard);
        assert!(validate_certificate(&potts(4, rat(0)), &v));
        let a = m(&[&[2, 1], &[1, 2]]);
        let b = m(&[&[3, 1], &[1, 3]]);
        let t = a.tensor(&b);
        let v = classify4(&t).unwrap();
        assert_eq!(v.outcome, Outcome::Tractable);
        assert_eq!(v.reason, REASON_POSITIVE);
        assert!(validate_certificate(&t, &v));
        let hard = m(&[&[2, 1], &[1, 3]]).tensor(&b);
        let v = classify4(&hard).unwrap();
        assert_eq!((v.outcome, v.reason.as_str()), (Outcome::Hard, REASON_TENSOR));
        assert!(validate_certificate(&hard, &v));
        assert_eq!(classify4(&m(&[&[1, 1, 1, 1], &[1, 1, 1, 1], &[1, 1, 1, 1], &[1, 1, 1, 1]])), Err(Error::RankDeficient));
        assert_eq!(
            classify4(&RatMatrix::from_ints(&[&[1, -1, 0, 0], &[-1, 2, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]).unwrap()),
            Err(Error::NegativeEntry)
        );
    }

    #[test]
    fn perturbed_certificates_fail() {
        let a = m(&[&[2, 1], &[1, 2]]);
        let b = m(&[&[3, 1], &[1, 3]]);
        let t = a.tensor(&b);
        let mut v = classify4(&t).unwrap();
        if let Some(Certificate::TensorFactorization { a, .. }) = &mut v.certificate {
            *a = m(&[&[2, 1], &[1, 2]]);
        }
        assert!(!validate_certificate(&t, &v));
        let blocks = m(&[&[2, 1], &[1, 2]]).direct_sum(&m(&[&[3, 1], &[1, 3]]));
        let v = classify4(&blocks).unwrap();
        assert!(validate_certificate(&blocks, &v));
        assert!(!validate_certificate(&t, &v));
    }

    #[test]
    fn bipartite_cases() {
        let good = m(&[&[0, 0, 3, 1], &[0, 0, 1, 3], &[3, 1, 0, 0], &[1, 3, 0, 0]]);
        let v = classify4(&good).unwrap();
        assert_eq!((v.outcome, v.reason.as_str()), (Outcome::Tractable, REASON_BIPARTITE));
        assert!(validate_certificate(&good, &v));
        let bad = m(&[&[0, 0, 3, 1], &[0, 0, 1, 2], &[3, 1, 0, 0], &[1, 2, 0, 0]]);
        let v = classify4(&bad).unwrap();
        assert_eq!((v.outcome, v.reason.as_str()), (Outcome::Hard, REASON_BIPARTITE));
        assert!(validate_certificate(&bad, &v));
    }

    #[test]
    fn one_plus_three_is_unknown() {
        let mm = m(&[&[5, 0, 0, 0], &[0, 2, 1, 0], &[0, 1, 3, 1], &[0, 0, 1, 4]]);
        let v = classify4(&mm).unwrap();
        assert_eq!(v.outcome, Outcome::Unknown);
        assert!(validate_certificate(&mm, &v));
        let json = v.to_json();
        assert_eq!(json["outcome"], "unknown");
        assert_eq!(json["certificate"]["kind"], "DirectSum");
    }
}
