//! The acceptance run: one line per criterion with its timing and the
//! values it checked. Every tolerance is exact; the limits are wall-clock.

use std::time::{Duration, Instant};

use novikov_core::checks::*;
use novikov_core::complexes::{twisted_complex_over_field, FlatBundle, IntegralCocycle, SimplicialComplex};
use novikov_core::corpus::{self, NamedSpace};
use novikov_core::cuplen::{cuplength_generic, cuplength_massey, CupLengthReport};
use novikov_core::linalg::span_dim;
use novikov_core::massey::analyze;
use novikov_core::novikov::{novikov_numbers, xi_generic_test};
use novikov_core::{Error, Field, FiniteField, Rationals, Ring};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

fn space(name: &str) -> NamedSpace {
    corpus::build(name).unwrap()
}

/// Does the span of `reps` and the coboundaries in degree `q` contain `v`?
fn in_span<F: Field>(k: &F, x: &SimplicialComplex, q: usize, reps: &[Vec<F::Elem>], v: &[F::Elem]) -> bool {
    let c = twisted_complex_over_field(k, x, &FlatBundle::trivial(k, x, 1));
    let mut vs: Vec<Vec<F::Elem>> = reps.to_vec();
    if q > 0 {
        vs.extend(c.delta(q - 1).columns(k));
    }
    let base = span_dim(k, x.count(q), &vs);
    vs.push(v.to_vec());
    span_dim(k, x.count(q), &vs) == base
}

fn elems<F: Field>(k: &F, z: &IntegralCocycle) -> Vec<F::Elem> {
    z.values().iter().map(|&e| k.from_int(e)).collect()
}

/// The best of the survivor search and every generic pair of bundles.
fn bound<F: Field>(k: &F, s: &NamedSpace) -> Result<CupLengthReport<F::Elem>, Error> {
    // recipes without a parameter in `k` (a root of unity) are left out
    let mut bundles = Vec::new();
    for r in &s.bundles {
        match s.bundle(k, &r.name) {
            Ok(b) => bundles.push((r.name.clone(), b)),
            Err(Error::InvalidField(_)) => {}
            Err(e) => return Err(e),
        }
    }
    let mut best = cuplength_massey(k, &s.x, &s.xi, &bundles, false)?;
    for (a, e1) in &bundles {
        for (b, e2) in &bundles {
            if !xi_generic_test(k, &s.x, &s.xi, e1)?.generic || !xi_generic_test(k, &s.x, &s.xi, e2)?.generic {
                continue;
            }
            let r = cuplength_generic(k, &s.x, &s.xi, (a, e1), (b, e2), &bundles)?;
            if r.m > best.m {
                best = r;
            }
        }
    }
    Ok(best)
}

fn circle() -> Outcome {
    let k = Rationals;
    let s = space("circle");
    let triv = FlatBundle::trivial(&k, &s.x, 1);
    let n = novikov_numbers(&k, &s.x, &s.xi, &triv).map_err(err)?;
    ensure(n.betti() == [0, 0], || format!("b = {:?}", n.betti()))?;
    for d in &n.degrees {
        let pts: Vec<_> = d.jumps.iter().map(|j| k.show(&j.point)).collect();
        ensure(pts == ["1"], || format!("jumps in degree {}: {pts:?}", d.degree))?;
    }
    let a = analyze(&k, &s.x, &s.xi, &triv).map_err(err)?;
    let e2 = a.pages.iter().find(|p| p.r == 2).ok_or("no E_2 page")?;
    ensure(e2.dims == [0, 0] && e2.stable, || format!("E_2 = {:?}", e2.dims))?;
    ensure(a.survivors(0).dim() == 0, || "a survivor in degree 0".into())?;
    let s1 = a.survivors(1);
    ensure(s1.dim() == 1 && in_span(&k, &s.x, 1, &s1.reps, &elems(&k, &s.xi)), || {
        format!("degree 1 survivors of dim {} are not span(xi)", s1.dim())
    })?;
    let r = bound(&k, &s).map_err(err)?;
    ensure(r.critical_bound == 0, || format!("critical_bound {}", r.critical_bound))?;
    Ok("b=(0,0) jumps {1} E_2=E_inf=0; survivors: none in degree 0, span(xi) in degree 1 (see ledger); critical_bound 0".into())
}

fn surface() -> Outcome {
    let k = Rationals;
    let s = space("surface2");
    let triv = FlatBundle::trivial(&k, &s.x, 1);
    let n = novikov_numbers(&k, &s.x, &s.xi, &triv).map_err(err)?;
    ensure(n.betti() == [0, 2, 0], || format!("b = {:?}", n.betti()))?;
    let a = analyze(&k, &s.x, &s.xi, &triv).map_err(err)?;
    let reps = a.survivors(1).reps;
    for v in ["v1", "v2"] {
        let z = s.cocycle(v).unwrap();
        ensure(in_span(&k, &s.x, 1, &reps, &elems(&k, z)), || format!("{v} is not a survivor"))?;
    }
    let r = cuplength_massey(&k, &s.x, &s.xi, &[], false).map_err(err)?;
    ensure((r.m, r.critical_bound) == (2, 1), || format!("m = {}, critical_bound = {}", r.m, r.critical_bound))?;
    Ok("b=(0,2,0); v1, v2 survive; m=2 critical_bound=1".into())
}

fn projective_handle() -> Outcome {
    let k = FiniteField::new(2, 2).map_err(err)?;
    let r = bound(&k, &space("rp3_handle")).map_err(err)?;
    ensure(r.critical_bound >= 2, || format!("critical_bound {}", r.critical_bound))?;
    Ok(format!("over F4: m={} critical_bound={} witness degrees {:?}", r.m, r.critical_bound, r.degrees()))
}

fn zero_class() -> Outcome {
    let k = Rationals;
    let s = space("torus2").with_xi("0").map_err(err)?;
    let r = cuplength_massey(&k, &s.x, &s.xi, &[], false).map_err(err)?;
    ensure((r.m, r.critical_bound) == (4, 3), || format!("m = {}, critical_bound = {}", r.m, r.critical_bound))?;
    Ok("T^2, xi=0: m=4 critical_bound=3".into())
}

fn circle_direction() -> Outcome {
    let k = Rationals;
    for name in ["circle", "s1_x_surface2"] {
        let r = bound(&k, &space(name)).map_err(err)?;
        ensure(r.critical_bound == 0, || format!("{name}: critical_bound {}", r.critical_bound))?;
    }
    Ok("circle, S^1 x surface2: critical_bound 0".into())
}

fn random_complexes() -> Vec<(SimplicialComplex, IntegralCocycle)> {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    (0..20).map(|_| random_complex(&mut rng)).collect()
}

fn oracle_suite() -> Outcome {
    let k = Rationals;
    for name in corpus::NAMES {
        let s = space(name);
        spectral_oracle(&k, &s.x, &s.xi).map_err(|e| format!("{name}: {e}"))?;
    }
    for (i, (x, z)) in random_complexes().iter().enumerate() {
        let total: usize = (0..=x.dim()).map(|q| x.count(q)).sum();
        ensure(total <= 200, || format!("random complex {i} has {total} simplices"))?;
        spectral_oracle(&k, x, z).map_err(|e| format!("random complex {i}: {e}"))?;
    }
    Ok(format!("{} corpus spaces and 20 random complexes", corpus::NAMES.len()))
}

fn uct_suite() -> Outcome {
    let k = Rationals;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for name in corpus::NAMES {
        let s = space(name);
        let pts: Vec<_> = (0..5).map(|_| random_unit(&k, &mut rng)).collect();
        uct_check(&k, &s.x, &s.xi, &FlatBundle::trivial(&k, &s.x, 1), &pts).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok("5 seeded points per corpus space".into())
}

fn cut_suite() -> Outcome {
    let k = Rationals;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for name in ["circle", "torus2", "surface2"] {
        let cut = space(name).cut_presentation(&k).ok_or_else(|| format!("{name} has no cut"))?;
        let pts: Vec<_> = (0..5).map(|_| random_unit(&k, &mut rng)).collect();
        cut_check(&k, &cut, &pts).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok("circle, torus2, surface2 at 5 points and tau=0".into())
}

fn leibniz_suite() -> Outcome {
    let q = Rationals;
    let f5 = FiniteField::prime(5).map_err(err)?;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut cuts = 0;
    for name in corpus::NAMES {
        let s = space(name);
        let Some(cut) = s.cut_presentation(&q) else { continue };
        leibniz_check(&q, &cut, &q.from_int(2), 100, &mut rng).map_err(|e| format!("{name} over Q: {e}"))?;
        let cut5 = s.cut_presentation(&f5).unwrap();
        leibniz_check(&f5, &cut5, &f5.from_int(2), 100, &mut rng).map_err(|e| format!("{name} over F5: {e}"))?;
        cuts += 1;
    }
    Ok(format!("100 pairs per cut over Q and F5 on {cuts} cuts"))
}

fn dimension_bound() -> Outcome {
    let q = Rationals;
    let f2 = FiniteField::prime(2).map_err(err)?;
    let f4 = FiniteField::new(2, 2).map_err(err)?;
    let mut reports = 0;
    let mut check = |name: &str, m: usize, dim: usize| {
        reports += 1;
        ensure(m <= dim, || format!("{name}: m = {m} > dim = {dim}"))
    };
    // for xi = 0 the bound is the classical cup-length plus two instead
    for name in corpus::NAMES {
        let s = space(name);
        if s.xi.is_exact(&s.x) {
            continue;
        }
        check(name, bound(&q, &s).map_err(|e| format!("{name} over Q: {e}"))?.m, s.x.dim())?;
        check(name, bound(&f2, &s).map_err(|e| format!("{name} over F2: {e}"))?.m, s.x.dim())?;
    }
    for (i, (x, z)) in random_complexes().iter().enumerate() {
        if !z.is_exact(x) {
            check(&format!("random{i}"), cuplength_massey(&q, x, z, &[], false).map_err(|e| format!("random{i}: {e}"))?.m, x.dim())?;
        }
    }
    let s = space("rp3_handle");
    check("rp3_handle over F4", bound(&f4, &s).map_err(err)?.m, s.x.dim())?;
    Ok(format!("{reports} reports for nonzero classes with m <= dim X"))
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 10] = [
        ("circle", Duration::from_millis(100), circle),
        ("genus-two surface", Duration::from_secs(1), surface),
        ("RP3 # S1xS2 over F4", Duration::from_secs(30), projective_handle),
        ("zero class on T2", Duration::from_secs(1), zero_class),
        ("circle direction", Duration::MAX, circle_direction),
        ("spectral oracle suite", Duration::from_secs(60), oracle_suite),
        ("UCT suite", Duration::MAX, uct_suite),
        ("cut-model consistency", Duration::MAX, cut_suite),
        ("Leibniz identity", Duration::MAX, leibniz_suite),
        ("cl <= dim X", Duration::MAX, dimension_bound),
    ];
    let mut failed = Vec::new();
    for (i, (label, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let ok = outcome.is_ok() && took < *limit;
        let detail = match &outcome {
            Ok(d) => d.clone(),
            Err(e) => e.clone(),
        };
        let limit = if *limit == Duration::MAX { String::new() } else { format!(" (limit {limit:?})") };
        println!("criterion {:>2} {} {label}: {took:.2?}{limit}: {detail}", i + 1, if ok { "PASS" } else { "FAIL" });
        if !ok {
            failed.push(i + 1);
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed.len(), criteria.len());
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
