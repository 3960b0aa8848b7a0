use novikov_core::checks::*;
use novikov_core::complexes::FlatBundle;
use novikov_core::corpus;
use novikov_core::cuplen::cuplength_massey;
use novikov_core::{FiniteField, Rationals, Ring};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn fields() -> (Rationals, FiniteField, FiniteField) {
    (Rationals, FiniteField::prime(2).unwrap(), FiniteField::new(2, 2).unwrap())
}

#[test]
fn spectral_oracle_on_the_corpus() {
    let (q, f2, f4) = fields();
    for name in corpus::NAMES {
        let s = corpus::build(name).unwrap();
        spectral_oracle(&q, &s.x, &s.xi).unwrap_or_else(|e| panic!("{name} over Q: {e}"));
        spectral_oracle(&f2, &s.x, &s.xi).unwrap_or_else(|e| panic!("{name} over F2: {e}"));
    }
    let s = corpus::build("rp3_handle").unwrap();
    spectral_oracle(&f4, &s.x, &s.xi).unwrap();
}

#[test]
fn spectral_oracle_on_random_complexes() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let f3 = FiniteField::prime(3).unwrap();
    for i in 0..20 {
        let (x, z) = random_complex(&mut rng);
        let total: usize = (0..=x.dim()).map(|q| x.count(q)).sum();
        assert!(total <= 200);
        spectral_oracle(&Rationals, &x, &z).unwrap_or_else(|e| panic!("complex {i}: {e}"));
        spectral_oracle(&f3, &x, &z).unwrap_or_else(|e| panic!("complex {i} over F3: {e}"));
        spectral_oracle(&Rationals, &x, &z.scale(2)).unwrap_or_else(|e| panic!("complex {i}, 2z: {e}"));
    }
}

#[test]
fn uct_duality_and_gauge() {
    let (q, f2, _) = fields();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let f7 = FiniteField::prime(7).unwrap();
    for name in corpus::NAMES {
        let s = corpus::build(name).unwrap();
        let pts: Vec<_> = (0..5).map(|_| random_unit(&q, &mut rng)).collect();
        uct_check(&q, &s.x, &s.xi, &FlatBundle::trivial(&q, &s.x, 1), &pts).unwrap_or_else(|e| panic!("{name}: {e}"));
        let pts: Vec<_> = (0..5).map(|_| random_unit(&f7, &mut rng)).collect();
        uct_check(&f7, &s.x, &s.xi, &FlatBundle::trivial(&f7, &s.x, 1), &pts).unwrap_or_else(|e| panic!("{name}: {e}"));
        duality_check(&q, &s.x, &s.xi).unwrap_or_else(|e| panic!("{name}: {e}"));
        duality_check(&f2, &s.x, &s.xi).unwrap_or_else(|e| panic!("{name}: {e}"));
        gauge_check(&q, &s.x, &s.xi, &mut rng).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn cut_models_and_leibniz() {
    let (q, _, _) = fields();
    let f5 = FiniteField::prime(5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for name in corpus::NAMES {
        let s = corpus::build(name).unwrap();
        let Some(cut) = s.cut_presentation(&q) else { continue };
        let pts: Vec<_> = (0..5).map(|_| random_unit(&q, &mut rng)).collect();
        cut_check(&q, &cut, &pts).unwrap_or_else(|e| panic!("{name}: {e}"));
        let t = random_unit(&q, &mut rng);
        if !q.is_zero(&q.add(&q.one(), &t)) {
            leibniz_check(&q, &cut, &t, 20, &mut rng).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
        let cut5 = s.cut_presentation(&f5).unwrap();
        leibniz_check(&f5, &cut5, &f5.from_int(2), 20, &mut rng).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn zero_class_recovers_the_classical_cup_length() {
    let (q, f2, _) = fields();
    for name in ["circle", "torus2", "torus3", "surface2", "rp2", "s1_x_s2"] {
        let s = corpus::build(name).unwrap().with_xi("0").unwrap();
        for (label, m, naive) in [
            ("Q", cuplength_massey(&q, &s.x, &s.xi, &[], false).unwrap().m, naive_cup_length(&q, &s.x)),
            ("F2", cuplength_massey(&f2, &s.x, &s.xi, &[], false).unwrap().m, naive_cup_length(&f2, &s.x)),
        ] {
            assert_eq!(m, naive + 2, "{name} over {label}");
        }
    }
}

#[test]
fn extra_bundles_never_lower_the_bound() {
    let f4 = FiniteField::new(2, 2).unwrap();
    let s = corpus::build("rp3_handle").unwrap();
    let e = s.bundle(&f4, "E").unwrap();
    let plain = cuplength_massey(&f4, &s.x, &s.xi, &[], false).unwrap();
    let more = cuplength_massey(&f4, &s.x, &s.xi, &[("E".into(), e)], false).unwrap();
    assert!(more.m >= plain.m);
    assert!(more.m <= s.x.dim());
}
