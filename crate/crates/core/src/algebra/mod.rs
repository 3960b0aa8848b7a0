//! Exact coefficient rings.
//!
//! Every ring is a *context object*: elements are plain data and all
//! arithmetic goes through the ring value. This lets one generic code path
//! serve fields whose parameters are only known at run time (a prime `p`, a
//! modulus for `F_{p^m}`) as well as the polynomial rings built over them.

mod finite;
mod laurent;
mod poly;
mod rational;
mod spec;

use std::fmt::Debug;

pub use finite::{FiniteField, Gf};
pub use laurent::{laurent_normalize, LaurentPoly, LaurentRing};
pub use poly::{Poly, PolyRing};
pub use rational::Rationals;
pub use spec::{FieldKind, FieldSpec};

use crate::Error;

/// A commutative ring with identity.
pub trait Ring: Clone + Debug + Send + Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn from_int(&self, n: i64) -> Self::Elem;
    /// Canonical printable form.
    fn show(&self, a: &Self::Elem) -> String;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn add_assign(&self, a: &mut Self::Elem, b: &Self::Elem) {
        *a = self.add(a, b);
    }

    /// `a += b * c`
    fn mul_add_assign(&self, a: &mut Self::Elem, b: &Self::Elem, c: &Self::Elem) {
        if self.is_zero(b) || self.is_zero(c) {
            return;
        }
        *a = self.add(a, &self.mul(b, c));
    }

    fn pow(&self, a: &Self::Elem, mut n: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        acc
    }
}

/// A Euclidean domain. `normalize` picks the canonical associate, which is
/// what makes invariant factors unique.
pub trait EuclideanRing: Ring {
    fn is_unit(&self, a: &Self::Elem) -> bool;
    /// Inverse of a unit; `None` for non-units.
    fn unit_inverse(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// Euclidean size; only meaningful for nonzero elements.
    fn norm(&self, a: &Self::Elem) -> usize;
    /// `a = q*b + r` with `r = 0` or `norm(r) < norm(b)`. Panics on `b = 0`.
    fn div_rem(&self, a: &Self::Elem, b: &Self::Elem) -> (Self::Elem, Self::Elem);
    /// Returns `(u, n)` with `a = u * n`, `u` a unit and `n` canonical.
    /// For `a = 0` returns `(1, 0)`.
    fn normalize(&self, a: &Self::Elem) -> (Self::Elem, Self::Elem);

    fn divides(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        if self.is_zero(a) {
            return self.is_zero(b);
        }
        self.is_zero(&self.div_rem(b, a).1)
    }

    /// Exact quotient `a / b`, `None` if `b` does not divide `a`.
    fn div_exact(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        if self.is_zero(b) {
            return None;
        }
        let (q, r) = self.div_rem(a, b);
        self.is_zero(&r).then_some(q)
    }

    /// Extended gcd: `(g, s, t)` with `g = s*a + t*b`, `g` normalized.
    fn xgcd(&self, a: &Self::Elem, b: &Self::Elem) -> (Self::Elem, Self::Elem, Self::Elem) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (self.one(), self.zero());
        let (mut t0, mut t1) = (self.zero(), self.one());
        while !self.is_zero(&r1) {
            let (q, r) = self.div_rem(&r0, &r1);
            let s2 = self.sub(&s0, &self.mul(&q, &s1));
            let t2 = self.sub(&t0, &self.mul(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        let (u, g) = self.normalize(&r0);
        let ui = self.unit_inverse(&u).expect("normalize returns a unit");
        (g, self.mul(&s0, &ui), self.mul(&t0, &ui))
    }

    fn gcd(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.xgcd(a, b).0
    }
}

/// An exact field.
pub trait Field: EuclideanRing {
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// 0 for the rationals.
    fn characteristic(&self) -> u64;
    /// Number of elements, `None` when infinite.
    fn order(&self) -> Option<u64>;
    /// Parse the canonical string form produced by [`Ring::show`].
    fn parse(&self, s: &str) -> Result<Self::Elem, Error>;
    /// The `i`-th element in canonical order (finite fields only).
    fn element(&self, i: u64) -> Option<Self::Elem>;
    /// A short label such as `Q`, `5` or `2^2`.
    fn label(&self) -> String;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    /// Integer power allowing negative exponents. Panics on `0^{-k}`.
    fn zpow(&self, a: &Self::Elem, n: i64) -> Self::Elem {
        if n >= 0 {
            self.pow(a, n as u64)
        } else {
            let ai = self.inv(a).expect("negative power of zero");
            self.pow(&ai, n.unsigned_abs())
        }
    }

    /// A finite set containing every root of the polynomial with the given
    /// coefficients (lowest first), or `None` if it cannot be enumerated.
    /// Finite fields list all elements.
    fn root_candidates(&self, _coeffs: &[Self::Elem]) -> Option<Vec<Self::Elem>> {
        let q = self.order()?;
        (0..q).map(|i| self.element(i)).collect()
    }

    /// Least `a` in canonical order with `a^n = 1` and `a != 1`.
    ///
    /// Over the rationals the only candidate is `-1` (for even `n`).
    fn root_of_unity(&self, n: u64) -> Option<Self::Elem> {
        if n <= 1 {
            return None;
        }
        match self.order() {
            None => {
                let m1 = self.from_int(-1);
                (n % 2 == 0 && !self.is_one(&m1)).then_some(m1)
            }
            Some(q) => (2..q)
                .filter_map(|i| self.element(i))
                .find(|a| self.is_one(&self.pow(a, n)) && !self.is_one(a)),
        }
    }
}

macro_rules! field_is_euclidean {
    ($t:ty) => {
        impl EuclideanRing for $t {
            fn is_unit(&self, a: &Self::Elem) -> bool {
                !self.is_zero(a)
            }
            fn unit_inverse(&self, a: &Self::Elem) -> Option<Self::Elem> {
                self.inv(a)
            }
            fn norm(&self, _a: &Self::Elem) -> usize {
                0
            }
            fn div_rem(&self, a: &Self::Elem, b: &Self::Elem) -> (Self::Elem, Self::Elem) {
                let bi = self.inv(b).expect("division by zero");
                (self.mul(a, &bi), self.zero())
            }
            fn normalize(&self, a: &Self::Elem) -> (Self::Elem, Self::Elem) {
                if self.is_zero(a) {
                    (self.one(), self.zero())
                } else {
                    (a.clone(), self.one())
                }
            }
        }
    };
}

field_is_euclidean!(Rationals);
field_is_euclidean!(FiniteField);

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn xgcd_certificate_over_rationals() {
        let k = Rationals;
        let (g, s, t) = k.xgcd(&q(3, 1), &q(6, 5));
        assert!(k.is_one(&g));
        assert_eq!(k.add(&k.mul(&s, &q(3, 1)), &k.mul(&t, &q(6, 5))), g);
    }

    #[test]
    fn zpow_negative() {
        let k = FiniteField::prime(7).unwrap();
        let three = k.from_int(3);
        let inv = k.zpow(&three, -1);
        assert!(k.is_one(&k.mul(&inv, &three)));
    }
}
