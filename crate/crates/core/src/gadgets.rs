//! Edge gadgets on graphs and the matching transforms on matrices, plus
//! generating sets and generalized thickening.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::multigraph::Multigraph;
use crate::numtheory::factorize;
use crate::scalar::{pow_signed, Rational, Scalar};
use crate::symmatrix::{RatMatrix, SymMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GadgetKind {
    /// n parallel copies of every edge.
    Thicken(u32),
    /// Every edge becomes a path of length n.
    Stretch(u32),
    /// Path of length 3 whose middle edge is thickened n times.
    MidThicken(u32),
    /// Edge u–v becomes two new vertices a, b joined to each other and to both ends.
    Bridge,
}

impl GadgetKind {
    pub fn validate(self) -> Result<Self> {
        match self {
            GadgetKind::Thicken(0) | GadgetKind::Stretch(0) | GadgetKind::MidThicken(0) => {
                Err(Error::Domain("gadget parameter must be at least 1".into()))
            }
            k => Ok(k),
        }
    }

    fn aux_vertices(self) -> usize {
        match self {
            GadgetKind::Thicken(_) => 0,
            GadgetKind::Stretch(n) => n as usize - 1,
            GadgetKind::MidThicken(_) | GadgetKind::Bridge => 2,
        }
    }
}

impl fmt::Display for GadgetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GadgetKind::Thicken(n) => write!(f, "thicken:{n}"),
            GadgetKind::Stretch(n) => write!(f, "stretch:{n}"),
            GadgetKind::MidThicken(n) => write!(f, "midthicken:{n}"),
            GadgetKind::Bridge => write!(f, "bridge"),
        }
    }
}

/// Parses `thicken:n`, `stretch:n`, `midthicken:n` or `bridge`.
impl FromStr for GadgetKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Domain(format!("unknown gadget {s:?}"));
        let (name, arg) = match s.split_once(':') {
            Some((a, b)) => (a, Some(b)),
            None => (s, None),
        };
        let n = || -> Result<u32> { arg.ok_or_else(bad)?.parse().map_err(|_| bad()) };
        let kind = match name.to_ascii_lowercase().as_str() {
            "thicken" | "t" => GadgetKind::Thicken(n()?),
            "stretch" | "s" => GadgetKind::Stretch(n()?),
            "midthicken" | "rmid" | "r" => GadgetKind::MidThicken(n()?),
            "bridge" | "b" if arg.is_none() => GadgetKind::Bridge,
            _ => return Err(bad()),
        };
        kind.validate()
    }
}

/// Rewrites every edge in edge order. Auxiliary vertices for edge k are
/// numbered n + k·(aux per edge) onward. The result carries no rotation.
pub fn gadget_graph(kind: GadgetKind, g: &Multigraph) -> Multigraph {
    let n0 = g.n_vertices();
    let aux = kind.aux_vertices();
    let mut out = Multigraph::new(n0 + aux * g.n_edges());
    for (k, &(u, v)) in g.edges().iter().enumerate() {
        let base = n0 + aux * k;
        match kind {
            GadgetKind::Thicken(n) => {
                for _ in 0..n {
                    out.add_edge(u, v);
                }
            }
            GadgetKind::Stretch(n) => {
                let mut prev = u;
                for i in 0..n as usize - 1 {
                    out.add_edge(prev, base + i);
                    prev = base + i;
                }
                out.add_edge(prev, v);
            }
            GadgetKind::MidThicken(n) => {
                let (a, b) = (base, base + 1);
                out.add_edge(u, a);
                for _ in 0..n {
                    out.add_edge(a, b);
                }
                out.add_edge(b, v);
            }
            GadgetKind::Bridge => {
                let (a, b) = (base, base + 1);
                out.add_edge(u, a);
                out.add_edge(u, b);
                out.add_edge(v, a);
                out.add_edge(v, b);
                out.add_edge(a, b);
            }
        }
    }
    out
}

pub fn gadget_matrix<T: Scalar>(kind: GadgetKind, m: &SymMatrix<T>) -> SymMatrix<T> {
    let q = m.q();
    match kind {
        GadgetKind::Thicken(n) => m.hadamard_pow(n),
        GadgetKind::Stretch(n) => m.pow(n),
        GadgetKind::MidThicken(n) => {
            let mid = m.hadamard_pow(n);
            SymMatrix::from_fn(q, |i, j| {
                let mut s = T::zero();
                for a in 0..q {
                    for b in 0..q {
                        s = s + mid.get(a, b).clone() * m.get(i, a).clone() * m.get(j, b).clone();
                    }
                }
                s
            })
        }
        GadgetKind::Bridge => SymMatrix::from_fn(q, |i, j| {
            let mut s = T::zero();
            for a in 0..q {
                for b in 0..q {
                    s = s + m.get(i, a).clone()
                        * m.get(i, b).clone()
                        * m.get(j, a).clone()
                        * m.get(j, b).clone()
                        * m.get(a, b).clone();
                }
            }
            s
        }),
    }
}

/// M_ij = (−1)^{sign_ij} Π_t g_t^{exponents_ij[t]}, entries row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratingForm {
    pub q: usize,
    pub generators: Vec<BigUint>,
    pub signs: Vec<u8>,
    pub exponents: Vec<Vec<i64>>,
}

impl GeneratingForm {
    pub fn sign(&self, i: usize, j: usize) -> u8 {
        self.signs[i * self.q + j]
    }

    pub fn exponent(&self, i: usize, j: usize) -> &[i64] {
        &self.exponents[i * self.q + j]
    }

    pub fn generators_rational(&self) -> Vec<Rational> {
        self.generators
            .iter()
            .map(|g| Rational::from_integer(BigInt::from(g.clone())))
            .collect()
    }

    /// Entry value recovered from the form.
    pub fn value(&self, i: usize, j: usize) -> Rational {
        let gens = self.generators_rational();
        monomial(self.sign(i, j), self.exponent(i, j), &gens).expect("generators are nonzero")
    }

    pub fn min_exponent(&self) -> i64 {
        self.exponents.iter().flatten().copied().min().unwrap_or(0)
    }
}

fn monomial(sign: u8, exps: &[i64], p: &[Rational]) -> Result<Rational> {
    let mut v = if sign == 1 { -Rational::one() } else { Rational::one() };
    for (e, pt) in exps.iter().zip(p) {
        if *e != 0 {
            v *= pow_signed(pt, *e)?;
        }
    }
    Ok(v)
}

pub fn generating_form(m: &RatMatrix) -> Result<GeneratingForm> {
    let q = m.q();
    let mut factored = Vec::with_capacity(q * q);
    for x in m.entries() {
        if x.is_zero() {
            return Err(Error::Domain("generating form needs nonzero entries".into()));
        }
        let num = factorize(&x.numer().abs().to_biguint().unwrap())?;
        let den = factorize(&x.denom().to_biguint().unwrap())?;
        factored.push((x.is_negative(), num, den));
    }
    let mut generators: Vec<BigUint> = factored
        .iter()
        .flat_map(|(_, n, d)| n.iter().chain(d).map(|(p, _)| p.clone()))
        .collect();
    generators.sort();
    generators.dedup();
    let mut signs = Vec::with_capacity(q * q);
    let mut exponents = Vec::with_capacity(q * q);
    for (neg, num, den) in factored {
        signs.push(u8::from(neg));
        let mut e = vec![0i64; generators.len()];
        for (p, k) in num {
            e[generators.binary_search(&p).unwrap()] += k as i64;
        }
        for (p, k) in den {
            e[generators.binary_search(&p).unwrap()] -= k as i64;
        }
        exponents.push(e);
    }
    Ok(GeneratingForm {
        q,
        generators,
        signs,
        exponents,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Normalized {
    pub c: Rational,
    pub n: RatMatrix,
    pub form: GeneratingForm,
}

/// Scales m by c = (Π g_t)^{−e_min} so every exponent is ≥ 0. When all
/// exponents already are, c = 1.
pub fn normalize_cm(m: &RatMatrix) -> Result<Normalized> {
    let mut form = generating_form(m)?;
    let e_min = form.min_exponent().min(0);
    let prod: BigUint = form.generators.iter().product();
    let c = pow_signed(&Rational::from_integer(prod.into()), -e_min)?;
    for e in form.exponents.iter_mut().flatten() {
        *e -= e_min;
    }
    Ok(Normalized {
        n: m.scale(&c),
        c,
        form,
    })
}

/// Entry (i,j) = (−1)^{e_ij0} Π_t p_t^{e_ijt}, with 0⁰ = 1.
pub fn t_general(form: &GeneratingForm, p: &[Rational]) -> Result<RatMatrix> {
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
    let mut rows = vec![vec![Rational::zero(); q]; q];
    for (i, row) in rows.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = monomial(form.sign(i, j), form.exponent(i, j), p)?;
        }
    }
    SymMatrix::from_rows(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multigraph::named;
    use crate::partition::z_brute;
    use crate::scalar::{rat, ratio};
    use crate::symmatrix::potts;

    fn m(rows: &[&[i64]]) -> RatMatrix {
        RatMatrix::from_ints(rows).unwrap()
    }

    #[test]
    fn graph_rewrites() {
        let e = named::path(2);
        let t = gadget_graph(GadgetKind::Thicken(3), &e);
        assert_eq!((t.n_vertices(), t.edges()), (2, &[(0, 1); 3][..]));
        let s = gadget_graph(GadgetKind::Stretch(2), &e);
        assert_eq!((s.n_vertices(), s.edges()), (3, &[(0, 2), (2, 1)][..]));
        let r = gadget_graph(GadgetKind::MidThicken(2), &e);
        assert_eq!((r.n_vertices(), r.edges()), (4, &[(0, 2), (2, 3), (2, 3), (3, 1)][..]));
        let b = gadget_graph(GadgetKind::Bridge, &Multigraph::from_edges(1, &[(0, 0)]));
        assert_eq!((b.n_vertices(), b.n_edges()), (3, 5));
    }

    #[test]
    fn matrix_transforms() {
        let a = m(&[&[1, 2], &[2, 3]]);
        assert_eq!(gadget_matrix(GadgetKind::Thicken(2), &a), m(&[&[1, 4], &[4, 9]]));
        assert_eq!(gadget_matrix(GadgetKind::MidThicken(1), &a), a.pow(3));
        let x = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(gadget_matrix(GadgetKind::MidThicken(1), &x), x);
        assert_eq!(gadget_matrix(GadgetKind::Bridge, &RatMatrix::identity(2)), RatMatrix::identity(2));
    }

    #[test]
    fn commutation_small() {
        let a = m(&[&[1, 2, 0], &[2, -1, 3], &[0, 3, 2]]);
        let g = named::cycle(3).disjoint_union(&Multigraph::from_edges(1, &[(0, 0)]));
        for kind in [
            GadgetKind::Thicken(2),
            GadgetKind::Stretch(3),
            GadgetKind::MidThicken(2),
            GadgetKind::Bridge,
        ] {
            let lhs = z_brute(&a, &gadget_graph(kind, &g)).unwrap();
            let rhs = z_brute(&gadget_matrix(kind, &a), &g).unwrap();
            assert_eq!(lhs, rhs, "{kind}");
        }
    }

    #[test]
    fn parse_kinds() {
        assert_eq!("thicken:3".parse::<GadgetKind>().unwrap(), GadgetKind::Thicken(3));
        assert_eq!("bridge".parse::<GadgetKind>().unwrap(), GadgetKind::Bridge);
        assert!("stretch:0".parse::<GadgetKind>().is_err());
        assert!("bridge:2".parse::<GadgetKind>().is_err());
    }

    #[test]
    fn forms() {
        let f = generating_form(&m(&[&[2, 3], &[3, 6]])).unwrap();
        assert_eq!(f.generators, vec![BigUint::from(2u32), BigUint::from(3u32)]);
        assert_eq!(f.exponent(1, 1), &[1, 1]);
        let h = SymMatrix::from_rows(vec![vec![ratio(1, 2), rat(4)], vec![rat(4), ratio(1, 2)]]).unwrap();
        let f = generating_form(&h).unwrap();
        assert_eq!((f.exponent(0, 0), f.exponent(0, 1)), (&[-1i64][..], &[2i64][..]));
        let f = generating_form(&m(&[&[-3, 3], &[3, 3]])).unwrap();
        assert_eq!((f.sign(0, 0), f.exponent(0, 0)), (1, &[1i64][..]));
        assert!(matches!(generating_form(&potts(2, rat(0))), Err(Error::Domain(_))));
    }

    #[test]
    fn normalization() {
        let h = SymMatrix::from_rows(vec![vec![ratio(1, 2), rat(1)], vec![rat(1), rat(4)]]).unwrap();
        let nz = normalize_cm(&h).unwrap();
        assert_eq!(nz.c, rat(2));
        assert_eq!(nz.n, m(&[&[1, 2], &[2, 8]]));
        assert_eq!(normalize_cm(&m(&[&[1, 2], &[2, 3]])).unwrap().c, rat(1));
        let third = SymMatrix::from_fn(2, |_, _| ratio(1, 3));
        let nz = normalize_cm(&third).unwrap();
        assert_eq!((nz.c, nz.n), (rat(3), m(&[&[1, 1], &[1, 1]])));
    }

    #[test]
    fn generalized_thickening() {
        let f = normalize_cm(&m(&[&[1, 2], &[2, 8]])).unwrap().form;
        assert_eq!(f.exponents, vec![vec![0], vec![1], vec![1], vec![3]]);
        assert_eq!(t_general(&f, &[rat(3)]).unwrap(), m(&[&[1, 3], &[3, 27]]));
        assert_eq!(t_general(&f, &[rat(2)]).unwrap(), m(&[&[1, 2], &[2, 8]]));
        assert_eq!(t_general(&f, &[rat(0)]).unwrap(), m(&[&[1, 0], &[0, 0]]));
        let raw = generating_form(&SymMatrix::from_fn(2, |_, _| ratio(1, 2))).unwrap();
        assert_eq!(t_general(&raw, &[rat(2)]), Err(Error::NegativeExponent));
    }
}
