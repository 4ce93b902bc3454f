mod common;

use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{rand_graph, rand_matrix, rand_rat};
use plhom_core::dichotomy::{classify4, validate_certificate, Outcome};
use plhom_core::gadgets::{gadget_graph, gadget_matrix, generating_form, t_general, GadgetKind};
use plhom_core::interpolation::{enumerate_x, recover_counts, transport_eval};
use plhom_core::lattice::{in_lattice, is_confluent, lattice_of, psi_x, Phi_x};
use plhom_core::multigraph::named;
use plhom_core::partition::{count_map, z_brute, z_enumerate, EvalOptions};
use plhom_core::planar_ising::{
    count_pm_brute, count_pm_planar, even_subgraph_poly_brute, eval_tractable, ising_fkt, pfaffian, SkewMatrix,
};
use plhom_core::planarity::planar_embed;
use plhom_core::scalar::{pow_u, rat, ratio};
use plhom_core::structure::{permutations, varrho_tensor};
use plhom_core::symmatrix::ising;
use plhom_core::{Multigraph, RatMatrix, Rational, SymMatrix};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random subgraph of a small grid with extra parallel edges and loops.
fn rand_planar(r: &mut ChaCha8Rng) -> Multigraph {
    let base = named::grid(r.gen_range(1..=3), r.gen_range(2..=3));
    let mut g = Multigraph::new(base.n_vertices());
    for &(u, v) in base.edges() {
        if r.gen_bool(0.8) {
            g.add_edge(u, v);
            if r.gen_bool(0.2) {
                g.add_edge(u, v);
            }
        }
    }
    for v in 0..g.n_vertices() {
        if r.gen_bool(0.15) {
            g.add_edge(v, v);
        }
    }
    g
}

fn rand_skew(r: &mut ChaCha8Rng, n: usize) -> (SkewMatrix<Rational>, Vec<Vec<Rational>>) {
    let mut a = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let x = rand_rat(r, 5, true);
            a[i][j] = x.clone();
            a[j][i] = -x;
        }
    }
    (SkewMatrix::from_rows(a.clone()).unwrap(), a)
}

/// Plain Gaussian elimination, independent of the library.
fn det(mut a: Vec<Vec<Rational>>) -> Rational {
    let n = a.len();
    let mut d = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else { return Rational::zero() };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        let piv = a[c][c].clone();
        d *= &piv;
        for r in c + 1..n {
            let f = &a[r][c] / &piv;
            for k in c..n {
                let t = &f * &a[c][k];
                a[r][k] -= t;
            }
        }
    }
    d
}

/// 2×2 [[a,b],[b,a]] with a > 0, b ≥ 0, a ≠ b.
fn equal_diag(r: &mut ChaCha8Rng) -> RatMatrix {
    let a = r.gen_range(1..=6);
    let b = loop {
        let b = r.gen_range(0..=6);
        if b != a {
            break b;
        }
    };
    ising(rat(a), rat(b))
}

/// Nonnegative full-rank 4×4 matrices from a mix of structured families.
fn rand_classifiable(r: &mut ChaCha8Rng) -> RatMatrix {
    loop {
        let two = |r: &mut ChaCha8Rng| {
            let (x, y, z) = (r.gen_range(0..=5), r.gen_range(0..=5), r.gen_range(0..=5));
            RatMatrix::from_ints(&[&[x, y], &[y, z]]).unwrap()
        };
        let m = match r.gen_range(0..5) {
            0 => equal_diag(r).tensor(&equal_diag(r)),
            1 => two(r).tensor(&two(r)),
            2 => two(r).direct_sum(&two(r)),
            3 => {
                let a = two(r);
                RatMatrix::from_fn(4, |i, j| match (i < 2, j < 2) {
                    (true, false) => a.get(i, j - 2).clone(),
                    (false, true) => a.get(i - 2, j).clone(),
                    _ => Rational::zero(),
                })
            }
            _ => RatMatrix::from_fn(4, |i, j| rat(((i * 7 + j * 7 + i * j * 3) % 5) as i64 + r.gen_range(0..2))),
        };
        let m = if m.is_symmetric() { m } else { continue };
        if !m.det_fraction_free().is_zero() {
            return m;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gadget_commutes_with_matrix(seed in any::<u64>(), kind in 0usize..4, n in 1u32..=3) {
        let mut r = rng(seed);
        let q = r.gen_range(1..=3);
        let m = rand_matrix(&mut r, q, 6);
        let g = rand_graph(&mut r, 4, 5);
        let kind = [GadgetKind::Thicken(n), GadgetKind::Stretch(n), GadgetKind::MidThicken(n), GadgetKind::Bridge][kind];
        prop_assert_eq!(z_brute(&m, &gadget_graph(kind, &g)).unwrap(), z_brute(&gadget_matrix(kind, &m), &g).unwrap());
    }

    #[test]
    fn elimination_matches_enumeration(seed in any::<u64>()) {
        let mut r = rng(seed);
        let q = r.gen_range(1..=4);
        let m = rand_matrix(&mut r, q, 5);
        let g = rand_graph(&mut r, 7, 10);
        let opts = EvalOptions::default();
        prop_assert_eq!(z_brute(&m, &g).unwrap(), z_enumerate(&m, &g, &opts).unwrap());
        prop_assert_eq!(plhom_core::partition::z_from_counts(&count_map(&m, &g).unwrap()), z_brute(&m, &g).unwrap());
    }

    #[test]
    fn relabelling_preserves_z(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = rand_matrix(&mut r, 3, 5);
        let g = rand_graph(&mut r, 5, 6);
        let mut perm: Vec<usize> = (0..g.n_vertices()).collect();
        for i in (1..perm.len()).rev() {
            perm.swap(i, r.gen_range(0..=i));
        }
        prop_assert_eq!(z_brute(&m, &g).unwrap(), z_brute(&m, &g.relabel(&perm)).unwrap());
        let sigma = &permutations(3)[r.gen_range(0..6)];
        prop_assert_eq!(z_brute(&m, &g).unwrap(), z_brute(&m.permute(sigma), &g).unwrap());
    }

    #[test]
    fn tensor_identity(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = rand_matrix(&mut r, 2, 5);
        let b = rand_matrix(&mut r, 2, 5);
        let g = rand_graph(&mut r, 4, 6);
        prop_assert_eq!(z_brute(&a.tensor(&b), &g).unwrap(), z_brute(&a, &g).unwrap() * z_brute(&b, &g).unwrap());
        prop_assert!(varrho_tensor(&a.tensor(&b)).is_zero());
    }

    #[test]
    fn recovered_counts_match(seed in any::<u64>()) {
        let mut r = rng(seed);
        let vals = [rat(0), rat(1), rat(2), rat(3), ratio(1, 2), rat(-1)];
        let q = r.gen_range(2..=3);
        let picks: Vec<Rational> = (0..3).map(|_| vals[r.gen_range(0..vals.len())].clone()).collect();
        let m = RatMatrix::from_fn(q, |i, j| picks[(i + j) % picks.len()].clone());
        let g = rand_graph(&mut r, 4, 5);
        prop_assert_eq!(recover_counts(&m, &g).unwrap(), count_map(&m, &g).unwrap());
    }

    #[test]
    fn transport_matches_direct(seed in any::<u64>()) {
        let mut r = rng(seed);
        let gens = [2i64, 3, 5, 6];
        let (x, y, z) = (gens[r.gen_range(0..4)], gens[r.gen_range(0..4)], gens[r.gen_range(0..4)]);
        let m = RatMatrix::from_ints(&[&[x, y], &[y, z]]).unwrap();
        let g = rand_graph(&mut r, 4, 5);
        let form = generating_form(&m).unwrap();
        let xs = enumerate_x(&m, g.n_edges()).unwrap();
        let counts = count_map(&m, &g).unwrap();
        let p: Vec<Rational> = (0..form.generators.len()).map(|_| rand_rat(&mut r, 6, true)).collect();
        prop_assert_eq!(
            transport_eval(&form, &counts, &xs, &p).unwrap(),
            z_brute(&t_general(&form, &p).unwrap(), &g).unwrap()
        );
    }

    #[test]
    fn pfaffian_squares_to_det(seed in any::<u64>(), half in 0usize..=5) {
        let mut r = rng(seed);
        let (s, rows) = rand_skew(&mut r, 2 * half);
        let pf = pfaffian(&s);
        prop_assert_eq!(&pf * &pf, det(rows));
    }

    #[test]
    fn matchings_match_brute(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = rand_planar(&mut r).without_loops().0;
        let w: Vec<Rational> = (0..g.n_edges()).map(|_| rand_rat(&mut r, 4, false)).collect();
        let rot = planar_embed(&g).unwrap();
        prop_assert_eq!(count_pm_planar(&g, &rot, &w).unwrap(), count_pm_brute(&g, &w));
    }

    #[test]
    fn ising_matches_brute_and_expansion(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = rand_planar(&mut r);
        let a = rand_rat(&mut r, 5, true);
        let b = rand_rat(&mut r, 5, true);
        let fkt = ising_fkt(&g, &a, &b).unwrap();
        prop_assert_eq!(&fkt, &z_brute(&ising(a.clone(), b.clone()), &g).unwrap());
        let sum = &a + &b;
        if !sum.is_zero() {
            let (h, _) = g.without_loops();
            let t = (&a - &b) / &sum;
            let poly = even_subgraph_poly_brute(&h).unwrap();
            let expect = pow_u(&a, g.n_loops() as u64)
                * pow_u(&(sum / rat(2)), h.n_edges() as u64)
                * pow_u(&rat(2), h.n_vertices() as u64)
                * poly.eval(&t);
            prop_assert_eq!(fkt, expect);
        }
    }

    #[test]
    fn confluence_agrees_and_is_rare(x in prop::collection::vec(-20i64..=20, 3)) {
        let v = vec![x[0], x[1], x[2], -(x[0] + x[1] + x[2])];
        prop_assume!(v.iter().any(|&c| c != 0));
        let (ok, part) = is_confluent(&v).unwrap();
        prop_assert_eq!(ok, part.is_some());
        if !ok {
            prop_assert!(v.iter().all(|c| c.abs() == v[0].abs()));
        }
    }

    #[test]
    fn psi_vanishes_exactly_on_lattice_orbits(
        eig in prop::collection::vec(prop::sample::select(vec![1i64, 2, 3, 4, 6]), 3),
        x in prop::collection::vec(-1i64..=1, 2),
    ) {
        let m = SymMatrix::diag(&eig.iter().map(|&s| rat(s)).collect::<Vec<_>>());
        let v = vec![x[0], x[1], -(x[0] + x[1])];
        prop_assume!(v.iter().any(|&c| c != 0));
        let a: Vec<Rational> = eig.iter().map(|&s| rat(s)).collect();
        let psi = psi_x(&v, &m).unwrap();
        prop_assert_eq!(psi.is_zero(), Phi_x(&v, &a).unwrap().is_zero());
        let c = rat(3);
        let plus: i64 = v.iter().filter(|&&t| t > 0).sum();
        prop_assert_eq!(psi_x(&v, &m.scale(&c)).unwrap(), psi * pow_u(&c, (6 * plus) as u64));
    }

    #[test]
    fn lattice_basis_vectors_are_members(vals in prop::collection::vec(prop::sample::select(vec![1i64, 2, 3, 4, 6, 8, 9, 12]), 4)) {
        let a: Vec<Rational> = vals.iter().map(|&v| rat(v)).collect();
        let b = lattice_of(&a).unwrap();
        for v in &b.vectors {
            prop_assert!(in_lattice(v, &a).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn classify_invariant_under_permutation_and_scaling(seed in any::<u64>(), c in 1i64..=5) {
        let mut r = rng(seed);
        let m = rand_classifiable(&mut r);
        let v = classify4(&m).unwrap();
        if v.outcome == Outcome::Tractable {
            prop_assert!(validate_certificate(&m, &v));
        }
        let scaled = classify4(&m.scale(&ratio(c, 2))).unwrap();
        prop_assert_eq!(scaled.outcome, v.outcome);
        let sigma = &permutations(4)[r.gen_range(0..24)];
        let p = classify4(&m.permute(sigma)).unwrap();
        prop_assert_eq!((p.outcome, &p.reason), (v.outcome, &v.reason));
    }

    #[test]
    fn equal_diagonal_tensors_are_tractable(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b) = (equal_diag(&mut r), equal_diag(&mut r));
        let m = a.tensor(&b);
        let v = classify4(&m).unwrap();
        prop_assert_eq!(v.outcome, Outcome::Tractable);
        prop_assert!(validate_certificate(&m, &v));
        let g = rand_planar(&mut r);
        prop_assert_eq!(eval_tractable(&m, &g, &v).unwrap(), z_brute(&m, &g).unwrap());
    }
}
