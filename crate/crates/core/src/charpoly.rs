//! Characteristic polynomials and rational spectra.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::numtheory::divisors;
use crate::scalar::{common_denominator, Rational, Scalar};
use crate::symmatrix::{square_mul, RatMatrix, SymMatrix};

/// det(tI − M) = t^q − e₁t^{q−1} + e₂t^{q−2} − ⋯ + (−1)^q e_q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharPoly<T> {
    pub e: Vec<T>,
}

impl<T: Scalar> CharPoly<T> {
    /// Monic coefficients, highest degree first.
    pub fn coefficients(&self) -> Vec<T> {
        let mut out = vec![T::one()];
        for (k, ek) in self.e.iter().enumerate() {
            out.push(if k % 2 == 0 { -ek.clone() } else { ek.clone() });
        }
        out
    }

    pub fn eval(&self, t: &T) -> T {
        self.coefficients()
            .into_iter()
            .fold(T::zero(), |acc, c| acc * t.clone() + c)
    }
}

/// Faddeev–LeVerrier recurrence; exact over any field of characteristic 0.
pub fn charpoly<T: Scalar>(m: &SymMatrix<T>) -> CharPoly<T> {
    let q = m.q();
    let a = m.entries();
    // c[k] is the coefficient of t^k.
    let mut c = vec![T::zero(); q + 1];
    c[q] = T::one();
    let mut mk = vec![T::zero(); q * q];
    for k in 1..=q {
        let mut next = square_mul(a, &mk, q);
        for i in 0..q {
            next[i * q + i] = next[i * q + i].clone() + c[q + 1 - k].clone();
        }
        mk = next;
        let am = square_mul(a, &mk, q);
        let tr = (0..q).fold(T::zero(), |s, i| s + am[i * q + i].clone());
        c[q - k] = -(tr / T::from_int(k as i64));
    }
    let e = (1..=q)
        .map(|k| {
            let ck = c[q - k].clone();
            if k % 2 == 1 {
                -ck
            } else {
                ck
            }
        })
        .collect();
    CharPoly { e }
}

/// All eigenvalues, descending with multiplicity, when det(tI − M) splits over ℚ.
///
/// Candidates come from the rational root theorem, so a constant term beyond
/// the factorization budget also yields `None`.
pub fn rational_spectrum(m: &RatMatrix) -> Option<Vec<Rational>> {
    let coeffs = charpoly(m).coefficients();
    let n = coeffs.len() - 1;
    // Substituting t = u/d gives a monic integer polynomial in u.
    let d = common_denominator(&coeffs);
    let dr = Rational::from_integer(d.clone());
    let mut poly: Vec<BigInt> = Vec::with_capacity(n + 1);
    let mut dk = Rational::from_integer(1.into());
    for c in &coeffs {
        poly.push((c * &dk).to_integer());
        dk *= &dr;
    }
    let mut roots: Vec<BigInt> = Vec::new();
    while poly.len() > 1 && poly.last().unwrap().is_zero() {
        poly.pop();
        roots.push(BigInt::zero());
    }
    if poly.len() > 1 {
        let constant = poly.last().unwrap().abs();
        let divs = divisors(&constant.to_biguint().unwrap()).ok()?;
        'outer: for dv in divs {
            let dv = BigInt::from(dv);
            for cand in [dv.clone(), -dv] {
                while poly.len() > 1 {
                    let (quot, rem) = synthetic_division(&poly, &cand);
                    if !rem.is_zero() {
                        break;
                    }
                    poly = quot;
                    roots.push(cand.clone());
                }
                if poly.len() == 1 {
                    break 'outer;
                }
            }
        }
    }
    if poly.len() > 1 {
        return None;
    }
    let mut out: Vec<Rational> = roots
        .into_iter()
        .map(|u| Rational::new(u, d.clone()))
        .collect();
    out.sort_by(|a, b| b.cmp(a));
    Some(out)
}

/// Quotient and remainder of p(u) / (u − r), coefficients highest first.
fn synthetic_division(p: &[BigInt], r: &BigInt) -> (Vec<BigInt>, BigInt) {
    let mut out = Vec::with_capacity(p.len() - 1);
    let mut acc = BigInt::zero();
    for c in p {
        acc = acc * r + c;
        out.push(acc.clone());
    }
    let rem = out.pop().unwrap();
    (out, rem)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, ratio};
    use crate::symmatrix::potts;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn examples() {
        let d = RatMatrix::diag(&ints(&[1, 2, 3, 4]));
        assert_eq!(charpoly(&d).e, ints(&[10, 35, 50, 24]));
        assert_eq!(charpoly(&potts(4, rat(0))).e, ints(&[0, -6, 8, -3]));
        assert_eq!(charpoly(&RatMatrix::identity(4)).e, ints(&[4, 6, 4, 1]));
    }

    #[test]
    fn spectra() {
        assert_eq!(rational_spectrum(&potts(4, rat(0))), Some(ints(&[3, -1, -1, -1])));
        let f6 = RatMatrix::from_ints(&[&[5, 1, 2, 3], &[1, 5, 3, 2], &[2, 3, 5, 1], &[3, 2, 1, 5]]).unwrap();
        assert_eq!(rational_spectrum(&f6), Some(ints(&[11, 5, 3, 1])));
        let golden = RatMatrix::from_ints(&[&[0, 1], &[1, 1]]).unwrap();
        assert_eq!(rational_spectrum(&golden), None);
        let frac = RatMatrix::diag(&[ratio(1, 2), ratio(-2, 3), rat(0)]);
        assert_eq!(rational_spectrum(&frac), Some(vec![ratio(1, 2), rat(0), ratio(-2, 3)]));
    }

    #[test]
    fn float_instance() {
        let m = SymMatrix::<f64>::from_fn(3, |i, j| if i == j { 2.0 } else { 1.0 });
        let e = charpoly(&m).e;
        assert!((e[0] - 6.0).abs() < 1e-12 && (e[1] - 9.0).abs() < 1e-12 && (e[2] - 4.0).abs() < 1e-12);
    }
}
