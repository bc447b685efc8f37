use std::sync::Arc;

use proptest::prelude::*;

use symtwist::arith::{candidate_places, cup, hilbert, square_class, Place, Rat};
use symtwist::clifford::CliffordAlgebra;
use symtwist::groupalg::{FiniteGroup, OrthRep};
use symtwist::linalg::Matrix;
use symtwist::poly::Poly;
use symtwist::quadform::QuadForm;
use symtwist::ramify::inertia_ranks_full;

fn nonzero_rat() -> impl Strategy<Value = Rat> {
    (-300i64..300, 1i64..40)
        .prop_filter("nonzero", |(n, _)| *n != 0)
        .prop_map(|(n, d)| Rat::frac(n, d))
}

fn nonzero_int() -> impl Strategy<Value = i64> {
    (-500i64..500).prop_filter("nonzero", |n| *n != 0)
}

fn pow_mod(mut b: i64, mut e: i64, m: i64) -> i64 {
    let mut r = 1;
    b = b.rem_euclid(m);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

fn split(mut n: i64, p: i64) -> (u32, i64) {
    let mut k = 0;
    while n % p == 0 {
        n /= p;
        k += 1;
    }
    (k, n)
}

// Local symbol from the textbook formulas, Legendre by Euler's criterion.
fn oracle(a: i64, b: i64, v: Place) -> i8 {
    let p = match v {
        Place::Real => return if a < 0 && b < 0 { -1 } else { 1 },
        Place::Prime(p) => p as i64,
    };
    let (al, u) = split(a, p);
    let (be, w) = split(b, p);
    let par = |x: i64| if x.rem_euclid(2) == 0 { 1 } else { -1 };
    if p == 2 {
        let eps = |x: i64| ((x.rem_euclid(8) - 1) / 2) % 2;
        let omega = |x: i64| ((x.rem_euclid(16) * x.rem_euclid(16) - 1) / 8) % 2;
        let e = eps(u) * eps(w) + al as i64 * omega(w) + be as i64 * omega(u);
        return par(e);
    }
    let leg = |x: i64| if pow_mod(x, (p - 1) / 2, p) == 1 { 1 } else { -1 };
    let sign = par((al * be) as i64 * ((p - 1) / 2));
    let mut s = sign;
    if be % 2 == 1 {
        s *= leg(u);
    }
    if al % 2 == 1 {
        s *= leg(w);
    }
    s as i8
}

fn places_of(xs: &[&Rat]) -> Vec<Place> {
    let classes: Vec<_> = xs.iter().map(|x| square_class(x).unwrap()).collect();
    candidate_places(&classes).into_iter().collect()
}

fn diag(entries: &[i64]) -> QuadForm {
    QuadForm::diagonal(&entries.iter().map(|&x| Rat::from(x)).collect::<Vec<_>>()).unwrap()
}

// Unit lower triangular times a permutation, then a nonzero diagonal scale.
fn invertible(n: usize) -> impl Strategy<Value = Matrix<Rat>> {
    (
        proptest::collection::vec(-3i64..=3, n * n),
        Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
        proptest::collection::vec(nonzero_int().prop_map(|x| x.clamp(-5, 5)).prop_filter("nz", |x| *x != 0), n),
    )
        .prop_map(move |(l, perm, scale)| {
            let low = Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
                std::cmp::Ordering::Greater => Rat::from(l[i * n + j]),
                std::cmp::Ordering::Equal => Rat::one(),
                std::cmp::Ordering::Less => Rat::zero(),
            });
            let p = Matrix::from_fn(n, n, |i, j| Rat::from((perm[j] == i) as i64));
            let d = Matrix::diagonal(&scale.iter().map(|&x| Rat::from(x)).collect::<Vec<_>>());
            low.mul(&p).mul(&d)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn hilbert_matches_local_formulas(a in nonzero_int(), b in nonzero_int()) {
        let (ra, rb) = (Rat::from(a), Rat::from(b));
        for v in places_of(&[&ra, &rb]) {
            prop_assert_eq!(hilbert(&ra, &rb, v).unwrap(), oracle(a, b, v), "({}, {}) at {:?}", a, b, v);
        }
    }

    #[test]
    fn hilbert_symmetric_and_bimultiplicative(a in nonzero_rat(), b in nonzero_rat(), c in nonzero_rat()) {
        let ac = &a * &c;
        for v in places_of(&[&a, &b, &c]) {
            prop_assert_eq!(hilbert(&a, &b, v).unwrap(), hilbert(&b, &a, v).unwrap());
            prop_assert_eq!(
                hilbert(&ac, &b, v).unwrap(),
                hilbert(&a, &b, v).unwrap() * hilbert(&c, &b, v).unwrap()
            );
            prop_assert_eq!(hilbert(&(&a * &(&c * &c)), &b, v).unwrap(), hilbert(&a, &b, v).unwrap());
        }
    }

    #[test]
    fn hilbert_product_formula(a in nonzero_rat(), b in nonzero_rat()) {
        let prod: i32 = places_of(&[&a, &b]).into_iter().map(|v| hilbert(&a, &b, v).unwrap() as i32).product();
        prop_assert_eq!(prod, 1);
    }

    #[test]
    fn square_class_is_a_homomorphism(a in nonzero_rat(), b in nonzero_rat()) {
        let ab = square_class(&(&a * &b)).unwrap();
        prop_assert_eq!(ab, square_class(&a).unwrap().mul(&square_class(&b).unwrap()));
        prop_assert!(square_class(&(&a * &a)).unwrap().is_trivial());
    }

    #[test]
    fn invariants_survive_congruence(
        entries in proptest::collection::vec(nonzero_int().prop_map(|x| x % 40).prop_filter("nz", |x| *x != 0), 3),
        p in invertible(3),
    ) {
        let q = diag(&entries);
        prop_assert_eq!(q.transform(&p).unwrap().invariants(), q.invariants());
    }

    #[test]
    fn whitney_sum_formula(
        x in proptest::collection::vec(nonzero_int().prop_map(|x| x % 30).prop_filter("nz", |x| *x != 0), 1..4),
        y in proptest::collection::vec(nonzero_int().prop_map(|x| x % 30).prop_filter("nz", |x| *x != 0), 1..4),
    ) {
        let (q, r) = (diag(&x).invariants(), diag(&y).invariants());
        let s = diag(&x).orth_sum(&diag(&y)).invariants();
        prop_assert_eq!(s.w1.clone(), q.w1.mul(&r.w1));
        prop_assert_eq!(s.w2, q.w2.add(&r.w2).add(&cup(&q.w1, &r.w1)));
    }

    #[test]
    fn clifford_vectors_square_to_the_form(
        a in proptest::collection::vec(nonzero_int().prop_map(|x| x % 12).prop_filter("nz", |x| *x != 0), 1..5),
        v in proptest::collection::vec(-6i64..6, 4),
    ) {
        let alg = CliffordAlgebra::over_q(a.iter().map(|&x| Rat::from(x)).collect()).unwrap();
        let v: Vec<Rat> = v[..a.len()].iter().map(|&x| Rat::from(x)).collect();
        let x = alg.vector(&v);
        let sq = x.mul(&x).unwrap().as_scalar().unwrap();
        prop_assert_eq!(sq, vec![alg.q(&v)]);
    }

    #[test]
    fn clifford_reversion_is_an_antiautomorphism(
        a in proptest::collection::vec(nonzero_int().prop_map(|x| x % 12).prop_filter("nz", |x| *x != 0), 3),
        cx in proptest::collection::vec(-4i64..4, 8),
        cy in proptest::collection::vec(-4i64..4, 8),
    ) {
        let alg = CliffordAlgebra::over_q(a.iter().map(|&x| Rat::from(x)).collect()).unwrap();
        let elem = |c: &[i64]| alg.from_coeffs(c.iter().map(|&k| vec![Rat::from(k)]).collect()).unwrap();
        let (x, y) = (elem(&cx), elem(&cy));
        prop_assert_eq!(x.mul(&y).unwrap().sigma(), y.sigma().mul(&x.sigma()).unwrap());
    }

    #[test]
    fn inertia_ranks_match_cycle_count(
        e in prop::sample::select(vec![3usize, 5, 7, 9, 15]),
        picks in proptest::collection::vec(0usize..4, 1..5),
    ) {
        let divisors: Vec<usize> = (1..=e).filter(|c| e % c == 0).collect();
        let cycles: Vec<usize> = picks.iter().map(|&i| divisors[i % divisors.len()]).collect();
        let n: usize = cycles.iter().sum();
        let mut image = vec![0usize; n];
        let mut off = 0;
        for &c in &cycles {
            for i in 0..c {
                image[off + i] = off + (i + 1) % c;
            }
            off += c;
        }
        let gen = Matrix::from_fn(n, n, |i, j| Rat::from((image[j] == i) as i64));
        let d = inertia_ranks_full(e, &gen).unwrap();
        prop_assert_eq!(d.len(), e);
        prop_assert_eq!(d.iter().sum::<usize>(), n);
        for k in 0..e {
            // a c-cycle has every c-th root of unity once as an eigenvalue
            let expected = cycles.iter().filter(|&&c| k % (e / c) == 0).count();
            prop_assert_eq!(d[k], expected, "k = {}", k);
            prop_assert_eq!(d[k], d[(e - k) % e]);
        }
    }

    #[test]
    fn ext_gcd_is_a_bezout_identity(
        a in proptest::collection::vec(-5i64..5, 1..6),
        b in proptest::collection::vec(-5i64..5, 1..6),
        c in proptest::collection::vec(-3i64..3, 1..3),
    ) {
        let c = Poly::from_i64(&c);
        let (a, b) = (Poly::from_i64(&a).mul(&c), Poly::from_i64(&b).mul(&c));
        prop_assume!(!a.is_zero() || !b.is_zero());
        let (g, s, t) = Poly::ext_gcd(&a, &b);
        prop_assert_eq!(s.mul(&a).add(&t.mul(&b)), g.clone());
        prop_assert!(a.rem(&g).unwrap().is_zero());
        prop_assert!(b.rem(&g).unwrap().is_zero());
        if !c.is_zero() {
            prop_assert!(g.rem(&c).unwrap().is_zero());
        }
    }

    #[test]
    fn double_coset_sizes(which in 0usize..4, i in 0usize..64, j in 0usize..64) {
        let g = match which {
            0 => FiniteGroup::symmetric(4),
            1 => FiniteGroup::dihedral(6),
            2 => FiniteGroup::metacyclic(7, 2).unwrap(),
            _ => FiniteGroup::metacyclic(5, 2).unwrap(),
        };
        let subs = g.subgroups();
        let (a, b) = (&subs[i % subs.len()], &subs[j % subs.len()]);
        let dc = g.double_cosets(a, b);
        prop_assert_eq!(dc.iter().map(|(_, s)| s).sum::<usize>(), g.order());
        for &(x, size) in &dc {
            let meet = g.intersect(a, &g.conjugate(x, b));
            prop_assert_eq!(size * meet.order(), a.order() * b.order());
        }
    }

    #[test]
    fn permutation_modules_are_orthogonal(which in 0usize..3, i in 0usize..64) {
        let g = Arc::new(match which {
            0 => FiniteGroup::symmetric(3),
            1 => FiniteGroup::dihedral(4),
            _ => FiniteGroup::metacyclic(5, 4).unwrap(),
        });
        let subs = g.subgroups();
        let rep = OrthRep::permutation(g.clone(), &subs[i % subs.len()]);
        prop_assert!(rep.verify().is_ok());
        prop_assert_eq!(rep.rank() * subs[i % subs.len()].order(), g.order());
    }
}
