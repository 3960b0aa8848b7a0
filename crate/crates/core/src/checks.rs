//! Cross-checks between independent computations, shared by the test suites
//! and the command-line self-test. Each check returns `Err` with a
//! description of the first disagreement.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::{Field, Rationals};
use crate::complexes::{
    cohomology_dims, lambda_twisted_complex, twisted_complex_over_field, CohomologyBasis, CutPresentation, FlatBundle,
    IntegralCocycle, SimplicialComplex,
};
use crate::cuplen::{cup, is_coboundary, PsiProduct};
use crate::linalg::kernel;
use crate::massey::analyze;
use crate::novikov::novikov_numbers;
use crate::pidmod::{cohomology_modules, dims_at};
use crate::Error;

pub type CheckResult = Result<(), String>;

fn fail(e: Error) -> String {
    e.to_string()
}

/// A random nonzero element: a small integer ratio, or a uniform element of
/// a finite field.
pub fn random_unit<F: Field, R: Rng>(k: &F, rng: &mut R) -> F::Elem {
    match k.order() {
        Some(q) => k.element(rng.gen_range(1..q)).unwrap(),
        None => loop {
            let (a, b) = (rng.gen_range(-9..=9), rng.gen_range(1..=5));
            if a != 0 {
                break k.div(&k.from_int(a), &k.from_int(b)).unwrap();
            }
        },
    }
}

pub fn random_cochain<F: Field, R: Rng>(k: &F, rng: &mut R, n: usize) -> Vec<F::Elem> {
    (0..n)
        .map(|_| if rng.gen_bool(0.3) { k.zero() } else { random_unit(k, rng) })
        .collect()
}

/// A random 2-dimensional complex on 5 to 9 vertices with an integral
/// cocycle, drawn from the integral span of a basis of `Z^1(X; Q)`.
pub fn random_complex<R: Rng>(rng: &mut R) -> (SimplicialComplex, IntegralCocycle) {
    let n = rng.gen_range(5..=9);
    let mut triples = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                triples.push(vec![a, b, c]);
            }
        }
    }
    triples.shuffle(rng);
    let mut facets: Vec<Vec<usize>> = triples.into_iter().take(rng.gen_range(3..=12)).collect();
    // keep every vertex in use and the whole thing connected through a path
    for v in 0..n - 1 {
        facets.push(vec![v, v + 1]);
    }
    if rng.gen_bool(0.7) {
        facets.push(vec![0, n - 1]);
    }
    let x = SimplicialComplex::from_facets(n, facets).unwrap();
    let q = Rationals;
    let c = twisted_complex_over_field(&q, &x, &FlatBundle::trivial(&q, &x, 1));
    let mut values = vec![0i64; x.count(1)];
    for z in kernel(&q, c.delta(1)) {
        let w = rng.gen_range(-2i64..=2);
        if w == 0 {
            continue;
        }
        let den = z.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        for (v, r) in values.iter_mut().zip(&z) {
            *v += w * (r.numer() * &den / r.denom()).to_i64().unwrap();
        }
    }
    let z = IntegralCocycle::from_values(&x, values).unwrap();
    (x, z)
}

/// Pages and differential ranks from the module decomposition equal the
/// chain-level ones; `E_infinity` has the Novikov dimensions; survivors are
/// killed by `d_1`, i.e. `v cup xi` is a coboundary; all `d_r` vanish iff
/// `H^*(X; k)` already has the generic dimensions.
pub fn spectral_oracle<F: Field>(k: &F, x: &SimplicialComplex, z: &IntegralCocycle) -> CheckResult {
    let triv = FlatBundle::trivial(k, x, 1);
    let a = analyze(k, x, z, &triv).map_err(fail)?;
    let chain = a.chain_pages();
    if chain != a.pages {
        return Err(format!("module pages {:?} differ from chain-level pages {chain:?}", a.pages));
    }
    let last = a.pages.last().unwrap();
    let free: Vec<usize> = a.modules.iter().map(|m| m.free_rank).collect();
    if last.dims != free {
        return Err(format!("E_infinity {:?} differs from the Novikov numbers {free:?}", last.dims));
    }
    let plain = twisted_complex_over_field(k, x, &triv);
    let xi: Vec<F::Elem> = z.values().iter().map(|&e| k.from_int(e)).collect();
    for q in 0..x.dim() {
        for v in a.survivors(q).reps {
            let p = cup(k, x, &triv, q, &v, &triv, 1, &xi).map_err(fail)?;
            if !is_coboundary(&plain, q + 1, &p) {
                return Err(format!("a survivor of degree {q} has v cup xi != 0"));
            }
        }
    }
    let all_zero = a.pages.iter().all(|p| p.ranks.iter().all(|&r| r == 0));
    if all_zero != (cohomology_dims(&plain) == free) {
        return Err("vanishing of all d_r disagrees with the untwisted dimensions".into());
    }
    Ok(())
}

/// `dims_at(a)` equals the dimensions of the evaluated complex.
pub fn uct_check<F: Field>(
    k: &F,
    x: &SimplicialComplex,
    z: &IntegralCocycle,
    f: &FlatBundle<F>,
    points: &[F::Elem],
) -> CheckResult {
    let modules = cohomology_modules(&lambda_twisted_complex(k, x, z, f)).map_err(fail)?;
    for a in points {
        let predicted = dims_at(k, &modules, a).map_err(fail)?;
        let direct = cohomology_dims(&twisted_complex_over_field(k, x, &f.twisted_by(k, x, z, a).map_err(fail)?));
        if predicted != direct {
            return Err(format!("at a = {}: module gives {predicted:?}, direct {direct:?}", k.show(a)));
        }
    }
    Ok(())
}

/// The deformation complex at `tau = a` against the glued complex twisted
/// by `a^-1` and against the boundary-condition complex; at `tau = 0`
/// against the relative complex.
pub fn cut_check<F: Field>(k: &F, cut: &CutPresentation<F>, points: &[F::Elem]) -> CheckResult {
    let def = cut.deformation_complex(k).map_err(fail)?;
    def.complex.check_d_squared().map_err(fail)?;
    let g = cut.glue(k).map_err(fail)?;
    for a in points {
        let at = cohomology_dims(&def.evaluate(a));
        let inv = k.inv(a).unwrap();
        let direct = cohomology_dims(&twisted_complex_over_field(
            k,
            &g.x,
            &g.bundle.twisted_by(k, &g.x, &g.z, &inv).map_err(fail)?,
        ));
        let bc = cohomology_dims(&cut.boundary_condition_complex(k, a).map_err(fail)?);
        let direct = &direct[..];
        if at[..direct.len()] != *direct || at[direct.len()..].iter().any(|&d| d != 0) {
            return Err(format!("at tau = {}: deformation {at:?}, direct {direct:?}", k.show(a)));
        }
        if bc[..] != at[..bc.len()] {
            return Err(format!("at tau = {}: deformation {at:?}, boundary condition {bc:?}", k.show(a)));
        }
    }
    let at0 = cohomology_dims(&def.evaluate(&k.zero()));
    let rel = cohomology_dims(&cut.relative_complex(k).map_err(fail)?);
    if at0[..rel.len()] != rel[..] || at0[rel.len()..].iter().any(|&d| d != 0) {
        return Err(format!("at tau = 0: deformation {at0:?}, relative {rel:?}"));
    }
    Ok(())
}

/// The Leibniz rule for `psi_t` on random cochain pairs.
pub fn leibniz_check<F: Field, R: Rng>(
    k: &F,
    cut: &CutPresentation<F>,
    t: &F::Elem,
    pairs: usize,
    rng: &mut R,
) -> CheckResult {
    let psi = PsiProduct::new(k, cut, t).map_err(fail)?;
    let dims = psi.d0.dims().to_vec();
    for _ in 0..pairs {
        let q = rng.gen_range(0..dims.len());
        let q2 = rng.gen_range(0..dims.len());
        let c = random_cochain(k, rng, dims[q]);
        let c2 = random_cochain(k, rng, dims[q2]);
        let (l, r) = psi.leibniz_sides(q, &c, q2, &c2).map_err(fail)?;
        if l != r {
            return Err(format!("Leibniz rule fails for degrees {q}, {q2}"));
        }
    }
    Ok(())
}

/// The classical cup-length over `k` by a search over products of basis
/// classes of positive degree.
pub fn naive_cup_length<F: Field>(k: &F, x: &SimplicialComplex) -> usize {
    let triv = FlatBundle::trivial(k, x, 1);
    let c = twisted_complex_over_field(k, x, &triv);
    let basis: Vec<(usize, Vec<F::Elem>)> = (1..=x.dim())
        .flat_map(|q| CohomologyBasis::new(&c, q).reps().iter().map(move |r| (q, r.clone())).collect::<Vec<_>>())
        .collect();
    fn search<F: Field>(
        k: &F,
        x: &SimplicialComplex,
        c: &crate::complexes::TwistedComplex<F>,
        triv: &FlatBundle<F>,
        basis: &[(usize, Vec<F::Elem>)],
        q: usize,
        v: &[F::Elem],
    ) -> usize {
        let mut best = 0;
        for (h, b) in basis {
            if q + h > x.dim() {
                continue;
            }
            let p = cup(k, x, triv, q, v, triv, *h, b).unwrap();
            if !is_coboundary(c, q + h, &p) {
                best = best.max(1 + search(k, x, c, triv, basis, q + h, &p));
            }
        }
        best
    }
    let one = vec![k.one(); x.count(0)];
    search(k, x, &c, &triv, &basis, 0, &one)
}

/// Novikov numbers of `xi` and `-xi` agree and the jump sets are inverse.
pub fn duality_check<F: Field>(k: &F, x: &SimplicialComplex, z: &IntegralCocycle) -> CheckResult {
    let triv = FlatBundle::trivial(k, x, 1);
    let r = novikov_numbers(k, x, z, &triv).map_err(fail)?;
    let s = novikov_numbers(k, x, &z.neg(), &triv).map_err(fail)?;
    if r.betti() != s.betti() {
        return Err(format!("b(xi) = {:?} but b(-xi) = {:?}", r.betti(), s.betti()));
    }
    for (d, e) in r.degrees.iter().zip(&s.degrees) {
        let mut mine: Vec<String> = d.jumps.iter().map(|j| k.show(&k.inv(&j.point).unwrap())).collect();
        let mut theirs: Vec<String> = e.jumps.iter().map(|j| k.show(&j.point)).collect();
        mine.sort();
        theirs.sort();
        if mine != theirs {
            return Err(format!("degree {}: inverted jumps {mine:?} vs {theirs:?}", d.degree));
        }
        if d.jumps.iter().any(|j| j.excess == 0) {
            return Err(format!("degree {}: a jump point without excess dimension", d.degree));
        }
    }
    Ok(())
}

/// Changing `z` by an integral coboundary leaves the modules unchanged.
pub fn gauge_check<F: Field, R: Rng>(k: &F, x: &SimplicialComplex, z: &IntegralCocycle, rng: &mut R) -> CheckResult {
    let h: Vec<i64> = (0..x.vertex_count()).map(|_| rng.gen_range(-2..=2)).collect();
    let z2 = z.add(&IntegralCocycle::coboundary(x, &h));
    let triv = FlatBundle::trivial(k, x, 1);
    let m1 = cohomology_modules(&lambda_twisted_complex(k, x, z, &triv)).map_err(fail)?;
    let m2 = cohomology_modules(&lambda_twisted_complex(k, x, &z2, &triv)).map_err(fail)?;
    if m1 != m2 {
        return Err("modules change under a gauge transformation".into());
    }
    Ok(())
}
