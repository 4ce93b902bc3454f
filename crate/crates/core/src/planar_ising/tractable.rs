use num_traits::{One, Signed, Zero};

use crate::dichotomy::{validate_certificate, Certificate, Outcome, TwoByTwoCase, Verdict};
use crate::error::{Error, Result};
use crate::multigraph::Multigraph;
use crate::planarity::planar_embed;
use crate::scalar::{pow_u, Rational};
use crate::symmatrix::RatMatrix;

use super::fisher::ising_fkt;

/// Z_m(g) in polynomial time, following a tractability certificate for m.
pub fn eval_tractable(m: &RatMatrix, g: &Multigraph, cert: &Verdict) -> Result<Rational> {
    if cert.outcome != Outcome::Tractable || !validate_certificate(m, cert) {
        return Err(Error::CertificateMismatch);
    }
    let mut gg = g.clone();
    if gg.rotation().is_none() {
        gg.set_rotation(planar_embed(g)?)?;
    }
    eval_cert(m, &gg, cert.certificate.as_ref().expect("validated"))
}

fn eval_cert(m: &RatMatrix, g: &Multigraph, cert: &Certificate) -> Result<Rational> {
    match cert {
        Certificate::OneByOne { value } => Ok(pow_u(value, g.n_edges() as u64)),
        Certificate::TwoByTwo { case } => {
            let (x, y, z) = (m.get(0, 0), m.get(0, 1), m.get(1, 1));
            match case {
                TwoByTwoCase::XEqZ => ising_fkt(g, x, y),
                TwoByTwoCase::YZero => Ok(g
                    .component_subgraphs()
                    .iter()
                    .map(|c| pow_u(x, c.n_edges() as u64) + pow_u(z, c.n_edges() as u64))
                    .product()),
                TwoByTwoCase::Rank1 => rank_one(g, x, y),
            }
        }
        Certificate::TensorFactorization { a, b, .. } => {
            Ok(ising_fkt(g, a.get(0, 0), a.get(0, 1))? * ising_fkt(g, b.get(0, 0), b.get(0, 1))?)
        }
        Certificate::BipartiteTensor { a, .. } => {
            Ok(ising_fkt(g, &Rational::zero(), &Rational::one())? * ising_fkt(g, a.get(0, 0), a.get(0, 1))?)
        }
        Certificate::DirectSum { partition, parts } => {
            let blocks: Vec<RatMatrix> = partition.iter().map(|p| m.submatrix(p)).collect();
            let mut total = Rational::one();
            for comp in g.component_subgraphs() {
                let mut sum = Rational::zero();
                for (block, part) in blocks.iter().zip(parts) {
                    let cert = part.certificate.as_ref().ok_or(Error::CertificateMismatch)?;
                    sum += eval_cert(block, &comp, cert)?;
                }
                total *= sum;
            }
            Ok(total)
        }
        _ => Err(Error::CertificateMismatch),
    }
}

/// p + r·√x with √x formal.
#[derive(Clone)]
struct Quad {
    p: Rational,
    r: Rational,
}

impl Quad {
    fn mul(&self, o: &Quad, x: &Rational) -> Quad {
        Quad {
            p: &self.p * &o.p + &self.r * &o.r * x,
            r: &self.p * &o.r + &self.r * &o.p,
        }
    }
}

/// √x^d as an element of ℚ(√x).
fn sqrt_pow(x: &Rational, d: u64) -> Quad {
    let half = pow_u(x, d / 2);
    if d % 2 == 0 {
        Quad { p: half, r: Rational::zero() }
    } else {
        Quad { p: Rational::zero(), r: half }
    }
}

fn rational_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let (n, d) = (x.numer().sqrt(), x.denom().sqrt());
    (&n * &n == *x.numer() && &d * &d == *x.denom()).then(|| Rational::new(n, d))
}

/// m = u uᵀ with u = (√x, y/√x): Z = Π_v Σ_i u_i^deg(v).
fn rank_one(g: &Multigraph, x: &Rational, y: &Rational) -> Result<Rational> {
    if x.is_zero() {
        return Err(Error::CertificateMismatch);
    }
    let mut acc = Quad { p: Rational::one(), r: Rational::zero() };
    for d in g.degrees() {
        let d = d as u64;
        // (y/√x)^d = y^d · √x^d / x^d
        let s = sqrt_pow(x, d);
        let scale = pow_u(y, d) / pow_u(x, d);
        let term = Quad {
            p: &s.p + &s.p * &scale,
            r: &s.r + &s.r * &scale,
        };
        acc = acc.mul(&term, x);
    }
    if acc.r.is_zero() {
        return Ok(acc.p);
    }
    match rational_sqrt(x) {
        Some(s) => Ok(acc.p + acc.r * s),
        None => Err(Error::Internal("rank-one evaluation left an irrational part".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dichotomy::{classify2, classify4};
    use crate::multigraph::named;
    use crate::partition::z_brute;
    use crate::scalar::rat;

    fn m(rows: &[&[i64]]) -> RatMatrix {
        RatMatrix::from_ints(rows).unwrap()
    }

    #[test]
    fn leaves_on_k3() {
        let k3 = named::complete(3);
        for (mm, want) in [(m(&[&[2, 0], &[0, 3]]), 35), (m(&[&[1, 2], &[2, 4]]), 125), (m(&[&[2, 1], &[1, 2]]), 28)] {
            let v = classify2(&mm).unwrap();
            assert_eq!(eval_tractable(&mm, &k3, &v).unwrap(), rat(want));
        }
    }

    #[test]
    fn direct_sum_of_isings() {
        let mm = m(&[&[2, 1], &[1, 2]]).direct_sum(&m(&[&[3, 1], &[1, 3]]));
        let v = classify4(&mm).unwrap();
        let k3 = named::complete(3);
        assert_eq!(eval_tractable(&mm, &k3, &v).unwrap(), rat(100));
        let g = k3.disjoint_union(&named::path(3));
        assert_eq!(eval_tractable(&mm, &g, &v).unwrap(), z_brute(&mm, &g).unwrap());
    }

    #[test]
    fn rank_one_nonsquare_and_loops() {
        let mm = m(&[&[2, 2], &[2, 2]]);
        let mut g = named::cycle(3);
        g.add_edge(0, 0);
        g.add_edge(1, 2);
        let v = classify2(&mm).unwrap();
        assert_eq!(eval_tractable(&mm, &g, &v).unwrap(), z_brute(&mm, &g).unwrap());
        let mm = m(&[&[3, 6], &[6, 12]]);
        let v = classify2(&mm).unwrap();
        let g = named::path(2);
        assert_eq!(eval_tractable(&mm, &g, &v).unwrap(), z_brute(&mm, &g).unwrap());
    }

    #[test]
    fn tensor_and_bipartite() {
        let g = named::wheel(5);
        let t = m(&[&[2, 1], &[1, 2]]).tensor(&m(&[&[3, 1], &[1, 3]]));
        let v = classify4(&t).unwrap();
        assert_eq!(eval_tractable(&t, &g, &v).unwrap(), z_brute(&t, &g).unwrap());
        let b = m(&[&[0, 0, 3, 1], &[0, 0, 1, 3], &[3, 1, 0, 0], &[1, 3, 0, 0]]);
        let v = classify4(&b).unwrap();
        assert_eq!(eval_tractable(&b, &g, &v).unwrap(), z_brute(&b, &g).unwrap());
    }

    #[test]
    fn mismatch_and_nonplanar() {
        let t = m(&[&[2, 1], &[1, 2]]).tensor(&m(&[&[3, 1], &[1, 3]]));
        let v = classify4(&t).unwrap();
        let other = m(&[&[2, 1], &[1, 2]]).tensor(&m(&[&[4, 1], &[1, 4]]));
        assert_eq!(eval_tractable(&other, &named::complete(3), &v), Err(Error::CertificateMismatch));
        assert!(matches!(eval_tractable(&t, &named::complete(5), &v), Err(Error::NonPlanar { .. })));
        let hard = classify4(&crate::symmatrix::potts(4, rat(0))).unwrap();
        assert_eq!(
            eval_tractable(&crate::symmatrix::potts(4, rat(0)), &named::complete(3), &hard),
            Err(Error::CertificateMismatch)
        );
    }
}
