//! Cohomology of free cochain complexes over `k[tau]` and `Lambda` as
//! free part plus torsion invariant factors.

use crate::algebra::{laurent_normalize, EuclideanRing, Field, LaurentRing, Poly, PolyRing, Ring};
use crate::complexes::TwistedComplex;
use crate::linalg::invariant_factors;
use crate::Error;

pub use crate::linalg::{smith as snf, Smith};

/// A univariate PID whose canonical associates are ordinary polynomials.
pub trait PolynomialPid: EuclideanRing {
    type Base: Field;
    fn base_field(&self) -> &Self::Base;
    /// Canonical associate of a nonzero element as a monic polynomial.
    fn normalized_poly(&self, a: &Self::Elem) -> Poly<<Self::Base as Ring>::Elem>;
    /// Whether `tau` is invertible (so `tau = 0` is not a valid point).
    fn is_laurent(&self) -> bool;
}

impl<F: Field> PolynomialPid for PolyRing<F> {
    type Base = F;
    fn base_field(&self) -> &F {
        self.base()
    }
    fn normalized_poly(&self, a: &Self::Elem) -> Poly<F::Elem> {
        self.normalize(a).1
    }
    fn is_laurent(&self) -> bool {
        false
    }
}

impl<F: Field> PolynomialPid for LaurentRing<F> {
    type Base = F;
    fn base_field(&self) -> &F {
        self.base()
    }
    fn normalized_poly(&self, a: &Self::Elem) -> Poly<F::Elem> {
        laurent_normalize(self, a).expect("nonzero").1
    }
    fn is_laurent(&self) -> bool {
        true
    }
}

/// `H^q ~ R^free_rank (+) R/(f_1) (+) ... (+) R/(f_s)` with monic nonunit
/// `f_i | f_{i+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleDecomposition<E> {
    pub degree: usize,
    pub free_rank: usize,
    pub invariant_factors: Vec<Poly<E>>,
    pub laurent: bool,
}

/// Decompose every `H^q` of a complex over `k[tau]` or `Lambda`.
pub fn cohomology_modules<R: PolynomialPid>(
    c: &TwistedComplex<R>,
) -> Result<Vec<ModuleDecomposition<<R::Base as Ring>::Elem>>, Error> {
    c.check_d_squared()?;
    let ring = c.ring();
    let factors: Vec<Vec<R::Elem>> = (0..c.dims().len()).map(|q| invariant_factors(ring, c.delta(q))).collect();
    let pr = PolyRing::new(ring.base_field().clone());
    Ok((0..c.dims().len())
        .map(|q| {
            let below = if q > 0 { factors[q - 1].len() } else { 0 };
            let torsion = if q > 0 {
                factors[q - 1]
                    .iter()
                    .map(|f| ring.normalized_poly(f))
                    .filter(|f| !pr.is_unit(f))
                    .collect()
            } else {
                Vec::new()
            };
            ModuleDecomposition {
                degree: q,
                free_rank: c.dims()[q] - factors[q].len() - below,
                invariant_factors: torsion,
                laurent: ring.is_laurent(),
            }
        })
        .collect())
}

/// `dim_k H^q(C (x) k_a)` from the decompositions: free rank plus the
/// factors of degrees `q` and `q + 1` vanishing at `a`.
pub fn dims_at<F: Field>(k: &F, decomps: &[ModuleDecomposition<F::Elem>], a: &F::Elem) -> Result<Vec<usize>, Error> {
    if decomps.first().is_some_and(|d| d.laurent) && k.is_zero(a) {
        return Err(Error::Domain("tau = 0 is not a point of Lambda".into()));
    }
    let pr = PolyRing::new(k.clone());
    let vanishing = |d: &ModuleDecomposition<F::Elem>| {
        d.invariant_factors.iter().filter(|f| k.is_zero(&pr.eval(f, a))).count()
    };
    Ok((0..decomps.len())
        .map(|q| decomps[q].free_rank + vanishing(&decomps[q]) + decomps.get(q + 1).map_or(0, vanishing))
        .collect())
}

/// Multiplicities of `(tau - a)` in each invariant factor (zeros included).
pub fn multiplicities_at<F: Field>(k: &F, d: &ModuleDecomposition<F::Elem>, a: &F::Elem) -> Vec<usize> {
    let pr = PolyRing::new(k.clone());
    d.invariant_factors.iter().map(|f| pr.root_multiplicity(f, a)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Rationals;
    use crate::complexes::{lambda_twisted_complex, FlatBundle, IntegralCocycle, SimplicialComplex};

    #[test]
    fn circle_module() {
        let k = Rationals;
        let x = SimplicialComplex::from_facets(3, [[0, 1], [0, 2], [1, 2]]).unwrap();
        let z = IntegralCocycle::from_edges(&x, [(0, 1, 1)]).unwrap();
        let c = lambda_twisted_complex(&k, &x, &z, &FlatBundle::trivial(&k, &x, 1));
        let m = cohomology_modules(&c).unwrap();
        assert_eq!((m[0].free_rank, m[0].invariant_factors.len()), (0, 0));
        assert_eq!(m[1].free_rank, 0);
        let pr = PolyRing::new(k);
        let shown: Vec<String> = m[1].invariant_factors.iter().map(|f| pr.show(f)).collect();
        assert_eq!(shown, ["tau-1"]);
        assert_eq!(dims_at(&k, &m, &k.one()).unwrap(), vec![1, 1]);
        assert_eq!(dims_at(&k, &m, &k.from_int(2)).unwrap(), vec![0, 0]);
        assert!(dims_at(&k, &m, &k.zero()).is_err());
    }
}
