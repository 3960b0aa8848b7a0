use novikov_core::checks::{random_cochain, random_complex};
use novikov_core::complexes::{
    lambda_twisted_complex, twisted_complex_over_field, CohomologyBasis, FlatBundle,
};
use novikov_core::cuplen::{cup, is_coboundary};
use novikov_core::linalg::{det, smith, Matrix, SparseMatrix};
use novikov_core::pidmod::cohomology_modules;
use novikov_core::{algebra::laurent_normalize, EuclideanRing, Field, FiniteField, LaurentRing, PolyRing, Rationals, Ring};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fields_under_test() -> Vec<FiniteField> {
    [(2, 1), (5, 1), (2, 2), (3, 2), (2, 3)].iter().map(|&(p, m)| FiniteField::new(p, m).unwrap()).collect()
}

fn axioms<F: Field>(k: &F, a: &F::Elem, b: &F::Elem, c: &F::Elem) {
    assert_eq!(k.mul(&k.mul(a, b), c), k.mul(a, &k.mul(b, c)));
    assert_eq!(k.add(&k.add(a, b), c), k.add(a, &k.add(b, c)));
    assert_eq!(k.mul(a, &k.add(b, c)), k.add(&k.mul(a, b), &k.mul(a, c)));
    assert_eq!(k.mul(a, b), k.mul(b, a));
    if !k.is_zero(a) {
        assert!(k.is_one(&k.mul(a, &k.inv(a).unwrap())));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn finite_field_axioms(i in 0u64..1000, j in 0u64..1000, l in 0u64..1000) {
        for k in fields_under_test() {
            let q = k.order().unwrap();
            let e = |n: u64| k.element(n % q).unwrap();
            axioms(&k, &e(i), &e(j), &e(l));
        }
    }

    #[test]
    fn rational_axioms(a in -50i64..50, b in 1i64..20, c in -50i64..50, d in 1i64..20, e in -50i64..50) {
        let k = Rationals;
        let x = k.div(&k.from_int(a), &k.from_int(b)).unwrap();
        let y = k.div(&k.from_int(c), &k.from_int(d)).unwrap();
        axioms(&k, &x, &y, &k.from_int(e));
    }
}

fn poly_from(k: &Rationals, c: &[i64]) -> novikov_core::Poly<<Rationals as Ring>::Elem> {
    PolyRing::new(*k).from_coeffs(c.iter().map(|&x| k.from_int(x)).collect())
}

proptest! {
    #[test]
    fn laurent_normalize_round_trips(val in -5i64..5, c in proptest::collection::vec(-4i64..4, 1..6)) {
        let lam = LaurentRing::new(Rationals);
        let f = lam.from_parts(val, c.iter().map(|&x| Rationals.from_int(x)).collect());
        prop_assume!(!f.is_zero());
        let (unit, n) = laurent_normalize(&lam, &f).unwrap();
        prop_assert!(lam.is_unit(&unit));
        prop_assert_eq!(lam.mul(&unit, &lam.from_poly(&n)), f);
    }

    #[test]
    fn gcd_has_a_certificate(a in proptest::collection::vec(-4i64..4, 0..6), b in proptest::collection::vec(-4i64..4, 0..6)) {
        let k = Rationals;
        let pr = PolyRing::new(k);
        let (f, g) = (poly_from(&k, &a), poly_from(&k, &b));
        let (d, s, t) = pr.xgcd(&f, &g);
        prop_assert_eq!(pr.add(&pr.mul(&s, &f), &pr.mul(&t, &g)), d.clone());
        if !d.is_zero() {
            prop_assert!(pr.divides(&d, &f) && pr.divides(&d, &g));
        }
    }

    #[test]
    fn smith_transforms_are_unimodular(entries in proptest::collection::vec(proptest::collection::vec(-3i64..3, 3), 3)) {
        let pr = PolyRing::new(FiniteField::prime(3).unwrap());
        let k = pr.base().clone();
        // entries a + b tau
        let m = Matrix::from_rows(
            entries.iter().map(|r| r.windows(2).chain([&r[..2]]).map(|w| pr.from_coeffs(vec![k.from_int(w[0]), k.from_int(w[1])])).collect()).collect(),
            3,
        );
        let s = smith(&pr, m.clone(), true);
        let (u, v) = (s.u.unwrap(), s.v.unwrap());
        prop_assert!(pr.is_unit(&det(&pr, &u)));
        prop_assert!(pr.is_unit(&det(&pr, &v)));
        let d = u.mul(&pr, &m).mul(&pr, &v);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { s.diag.get(i).cloned().unwrap_or_else(|| pr.zero()) } else { pr.zero() };
                prop_assert_eq!(d.get(i, j), &want);
            }
        }
    }

    #[test]
    fn complexes_square_to_zero_and_modules_ignore_ordering(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, z) = random_complex(&mut rng);
        let k = FiniteField::prime(5).unwrap();
        let c = lambda_twisted_complex(&k, &x, &z, &FlatBundle::trivial(&k, &x, 1));
        c.check_d_squared().unwrap();
        let a = k.element(rng.gen_range(1..5)).unwrap();
        twisted_complex_over_field(&k, &x, &FlatBundle::twist(&k, &x, &z, &a).unwrap()).check_d_squared().unwrap();
        let modules = cohomology_modules(&c).unwrap();
        // permute the simplices of every degree
        let perms: Vec<Vec<usize>> = c.dims().iter().map(|&n| {
            let mut p: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() { p.swap(i, rng.gen_range(0..=i)); }
            p
        }).collect();
        let deltas: Vec<SparseMatrix<_>> = (0..c.dims().len())
            .map(|q| c.delta(q).permuted(perms.get(q + 1).map_or(&[][..], |p| p), &perms[q]))
            .collect();
        let shuffled = novikov_core::complexes::TwistedComplex::new(c.ring().clone(), c.dims().to_vec(), deltas).unwrap();
        prop_assert_eq!(cohomology_modules(&shuffled).unwrap(), modules);
    }

    #[test]
    fn cup_is_a_twisted_chain_map(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, z) = random_complex(&mut rng);
        let k = FiniteField::prime(7).unwrap();
        let e = FlatBundle::twist(&k, &x, &z, &k.from_int(3)).unwrap();
        let f = FlatBundle::twist(&k, &x, &z, &k.from_int(2)).unwrap();
        let ce = twisted_complex_over_field(&k, &x, &e);
        let cf = twisted_complex_over_field(&k, &x, &f);
        let cef = twisted_complex_over_field(&k, &x, &e.tensor(&k, &f));
        let p = rng.gen_range(0..=1);
        let q = rng.gen_range(0..=1);
        let u = random_cochain(&k, &mut rng, ce.dims()[p]);
        let v = random_cochain(&k, &mut rng, cf.dims()[q]);
        let lhs = cef.delta(p + q).mul_vec(&k, &cup(&k, &x, &e, p, &u, &f, q, &v).unwrap());
        let du = ce.delta(p).mul_vec(&k, &u);
        let dv = cf.delta(q).mul_vec(&k, &v);
        let a = cup(&k, &x, &e, p + 1, &du, &f, q, &v).unwrap();
        let b = cup(&k, &x, &e, p, &u, &f, q + 1, &dv).unwrap();
        let rhs: Vec<_> = a.iter().zip(&b).map(|(s, t)| if p % 2 == 0 { k.add(s, t) } else { k.sub(s, t) }).collect();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn cup_is_associative_on_cochains(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, z) = random_complex(&mut rng);
        let k = FiniteField::new(3, 2).unwrap();
        let bundles: Vec<_> = (0..3).map(|_| {
            let a = k.element(rng.gen_range(1..9)).unwrap();
            FlatBundle::twist(&k, &x, &z, &a).unwrap()
        }).collect();
        let (e, f, g) = (&bundles[0], &bundles[1], &bundles[2]);
        let (d0, d1) = (rng.gen_range(0..=1), rng.gen_range(0..=1));
        let degs = [d0, d1, rng.gen_range(0..=2 - d0 - d1)];
        let cs: Vec<_> = degs.iter().map(|&d| random_cochain(&k, &mut rng, x.count(d))).collect();
        let ef = e.tensor(&k, f);
        let left = cup(&k, &x, &ef, degs[0] + degs[1], &cup(&k, &x, e, degs[0], &cs[0], f, degs[1], &cs[1]).unwrap(), g, degs[2], &cs[2]).unwrap();
        let right = cup(&k, &x, e, degs[0], &cs[0], &f.tensor(&k, g), degs[1] + degs[2], &cup(&k, &x, f, degs[1], &cs[1], g, degs[2], &cs[2]).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }
}

#[test]
fn cup_unit_and_graded_commutativity() {
    let k = Rationals;
    let s = novikov_core::corpus::build("torus2").unwrap();
    let x = &s.x;
    let triv = FlatBundle::trivial(&k, x, 1);
    let c = twisted_complex_over_field(&k, x, &triv);
    let h1 = CohomologyBasis::new(&c, 1);
    let one = vec![k.one(); x.count(0)];
    let (a, b) = (&h1.reps()[0], &h1.reps()[1]);
    assert_eq!(cup(&k, x, &triv, 0, &one, &triv, 1, a).unwrap(), *a);
    let ab = cup(&k, x, &triv, 1, a, &triv, 1, b).unwrap();
    let ba = cup(&k, x, &triv, 1, b, &triv, 1, a).unwrap();
    let sum: Vec<_> = ab.iter().zip(&ba).map(|(p, q)| k.add(p, q)).collect();
    assert!(is_coboundary(&c, 2, &sum));
    assert!(!is_coboundary(&c, 2, &ab));
}
