//! Novikov numbers and jump points of the family `a^xi (x) F`, read off the
//! `Lambda`-module `H^*(X; tau^xi (x) F)`.

use crate::algebra::{EuclideanRing, Field, Poly, PolyRing};
use crate::complexes::{cohomology_dims, lambda_twisted_complex, twisted_complex_over_field};
use crate::complexes::{FlatBundle, IntegralCocycle, SimplicialComplex};
use crate::pidmod::{cohomology_modules, dims_at, ModuleDecomposition};
use crate::Error;

/// A parameter where `dim H^q(X; a^xi (x) F)` exceeds the Novikov number.
#[derive(Clone, Debug, PartialEq)]
pub struct Jump<E> {
    pub point: E,
    /// `dim H^q(a) - b_q`.
    pub excess: usize,
    /// Total multiplicity of `tau - a` in the factors of degrees `q`, `q+1`.
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DegreeReport<E> {
    pub degree: usize,
    /// `b_q(xi)`, the generic dimension.
    pub betti: usize,
    /// Torsion invariant factors of `H^q` over `Lambda`.
    pub torsion: Vec<Poly<E>>,
    pub jumps: Vec<Jump<E>>,
    /// Parts of the factors of degrees `q`, `q+1` with no root in the
    /// working field; their roots are jump points after extension.
    pub unsplit: Vec<Poly<E>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NovikovReport<E> {
    pub degrees: Vec<DegreeReport<E>>,
    pub modules: Vec<ModuleDecomposition<E>>,
    /// A non-jump parameter at which the direct twisted dimensions were
    /// checked against `b_q`; `None` if every element of `k^*` is a jump.
    pub check_point: Option<E>,
}

impl<E> NovikovReport<E> {
    pub fn betti(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.betti).collect()
    }
}

/// Strip the roots found in `k` from `f`; returns the roots and the rest.
fn split_off_roots<F: Field>(pr: &PolyRing<F>, f: &Poly<F::Elem>) -> (Vec<(F::Elem, usize)>, Poly<F::Elem>) {
    let Some(roots) = pr.roots(f) else {
        return (Vec::new(), f.clone());
    };
    let mut rest = f.clone();
    for (a, m) in &roots {
        for _ in 0..*m {
            rest = pr.div_exact(&rest, &pr.linear(a)).unwrap();
        }
    }
    (roots, rest)
}

/// Candidate parameters in a fixed order: field elements by index for
/// finite fields, `2, 3, -2, -3, ...` over the rationals.
fn probe_points<F: Field>(k: &F, count: usize) -> Vec<F::Elem> {
    match k.order() {
        Some(q) => (1..q).filter_map(|i| k.element(i)).take(count).collect(),
        None => (2..).flat_map(|i| [k.from_int(i), k.from_int(-i)]).take(count).collect(),
    }
}

/// Novikov numbers, torsion and jump points of `H^*(X; a^z (x) F)`.
pub fn novikov_numbers<F: Field>(
    k: &F,
    x: &SimplicialComplex,
    z: &IntegralCocycle,
    f: &FlatBundle<F>,
) -> Result<NovikovReport<F::Elem>, Error> {
    if let Some(d) = z.violations(x).first() {
        return Err(Error::Invalid(format!("xi is not a cocycle: {d}")));
    }
    if let Some(d) = f.violations(k, x).first() {
        return Err(Error::Invalid(format!("bundle: {d}")));
    }
    let c = lambda_twisted_complex(k, x, z, f);
    let modules = cohomology_modules(&c)?;
    let pr = PolyRing::new(k.clone());
    let top = modules.len();
    let mut degrees = Vec::with_capacity(top);
    for q in 0..top {
        let mut roots: Vec<(F::Elem, usize)> = Vec::new();
        let mut unsplit = Vec::new();
        for m in modules[q..].iter().take(2) {
            for fac in &m.invariant_factors {
                let (rs, rest) = split_off_roots(&pr, fac);
                for (a, mult) in rs {
                    match roots.iter_mut().find(|(b, _)| *b == a) {
                        Some(slot) => slot.1 += mult,
                        None => roots.push((a, mult)),
                    }
                }
                if !pr.is_unit(&rest) && !unsplit.contains(&rest) {
                    unsplit.push(rest);
                }
            }
        }
        let mut jumps = Vec::with_capacity(roots.len());
        for (a, multiplicity) in roots {
            let excess = dims_at(k, &modules, &a)?[q] - modules[q].free_rank;
            jumps.push(Jump { point: a, excess, multiplicity });
        }
        degrees.push(DegreeReport {
            degree: q,
            betti: modules[q].free_rank,
            torsion: modules[q].invariant_factors.clone(),
            jumps,
            unsplit,
        });
    }
    let is_jump = |a: &F::Elem| {
        modules.iter().flat_map(|m| &m.invariant_factors).any(|fac| k.is_zero(&pr.eval(fac, a)))
    };
    let check_point = probe_points(k, 64).into_iter().find(|a| !is_jump(a));
    if let Some(a) = &check_point {
        let direct = cohomology_dims(&twisted_complex_over_field(k, x, &f.twisted_by(k, x, z, a)?));
        let generic: Vec<usize> = modules.iter().map(|m| m.free_rank).collect();
        if direct != generic {
            return Err(Error::Invariant(format!(
                "dimensions {direct:?} at a non-jump point differ from the Novikov numbers {generic:?}"
            )));
        }
    }
    Ok(NovikovReport { degrees, modules, check_point })
}

/// Outcome of the genericity test on the slice `a^xi (x) F`.
#[derive(Clone, Debug, PartialEq)]
pub struct GenericTest<E> {
    pub generic: bool,
    /// First degree with a torsion factor vanishing at `tau = 1`, and that
    /// factor.
    pub witness: Option<(usize, Poly<E>)>,
    /// Content of `z` (0 for the zero class); the test uses `z / content`.
    pub content: u64,
}

/// Is `F` generic in the family `a^xi (x) F`, i.e. is `tau = 1` not a root
/// of any torsion factor of `H^*(X; tau^xi' (x) F)` with `xi'` the
/// primitive class of `xi`? The zero class is generic vacuously.
pub fn xi_generic_test<F: Field>(
    k: &F,
    x: &SimplicialComplex,
    z: &IntegralCocycle,
    f: &FlatBundle<F>,
) -> Result<GenericTest<F::Elem>, Error> {
    let (zp, content) = z.primitive(x);
    if content == 0 {
        return Ok(GenericTest { generic: true, witness: None, content });
    }
    let modules = cohomology_modules(&lambda_twisted_complex(k, x, &zp, f))?;
    let pr = PolyRing::new(k.clone());
    let one = k.one();
    let witness = modules
        .iter()
        .flat_map(|m| m.invariant_factors.iter().map(move |fac| (m.degree, fac)))
        .find(|(_, fac)| k.is_zero(&pr.eval(fac, &one)))
        .map(|(q, fac)| (q, fac.clone()));
    Ok(GenericTest { generic: witness.is_none(), witness, content })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{FiniteField, Rationals, Ring};
    use crate::corpus;

    #[test]
    fn circle_numbers_and_jumps() {
        let k = Rationals;
        let s = corpus::circle();
        let r = novikov_numbers(&k, &s.x, &s.xi, &FlatBundle::trivial(&k, &s.x, 1)).unwrap();
        assert_eq!(r.betti(), vec![0, 0]);
        for d in &r.degrees {
            assert_eq!(d.jumps, vec![Jump { point: k.one(), excess: 1, multiplicity: 1 }]);
        }
        assert_eq!(r.check_point, Some(k.from_int(2)));
    }

    #[test]
    fn jumps_of_multiple_classes() {
        // tau^2 - 1 splits over Q; tau^4 - 1 leaves tau^2 + 1 over F_3
        let k = Rationals;
        let s = corpus::circle();
        let z = s.xi.scale(2);
        let r = novikov_numbers(&k, &s.x, &z, &FlatBundle::trivial(&k, &s.x, 1)).unwrap();
        let pts: Vec<_> = r.degrees[1].jumps.iter().map(|j| k.show(&j.point)).collect();
        assert_eq!(pts, ["1", "-1"]);
        let f3 = FiniteField::prime(3).unwrap();
        let r = novikov_numbers(&f3, &s.x, &s.xi.scale(4), &FlatBundle::trivial(&f3, &s.x, 1)).unwrap();
        let pr = PolyRing::new(f3.clone());
        assert_eq!(r.degrees[1].unsplit.iter().map(|f| pr.show(f)).collect::<Vec<_>>(), ["tau^2+1"]);
    }

    #[test]
    fn genericity_on_the_circle() {
        let k = Rationals;
        let s = corpus::circle();
        let triv = FlatBundle::trivial(&k, &s.x, 1);
        let t = xi_generic_test(&k, &s.x, &s.xi, &triv).unwrap();
        assert!(!t.generic);
        assert_eq!(t.witness.as_ref().map(|w| w.0), Some(1));
        let two = FlatBundle::twist(&k, &s.x, &s.xi, &k.from_int(2)).unwrap();
        assert!(xi_generic_test(&k, &s.x, &s.xi, &two).unwrap().generic);
        let zero = IntegralCocycle::zero(&s.x);
        assert!(xi_generic_test(&k, &s.x, &zero, &triv).unwrap().generic);
    }
}
