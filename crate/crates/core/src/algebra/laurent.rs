use super::{EuclideanRing, Field, Poly, PolyRing, Ring};
use crate::Error;

/// `tau^val * (c_0 + c_1 tau + ...)`. Canonical form: `c_0 != 0` (so `val`
/// is the lowest exponent) and the last coefficient nonzero; zero is the
/// empty list with `val = 0`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LaurentPoly<E> {
    pub(crate) val: i64,
    pub(crate) coeffs: Vec<E>,
}

impl<E> LaurentPoly<E> {
    pub fn valuation(&self) -> i64 {
        self.val
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest minus lowest exponent; `None` for zero.
    pub fn span(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }
}

/// `Lambda = k[tau, tau^-1]`. It is a Euclidean domain with units `c tau^k`
/// and Euclidean size given by the span; normalized elements are monic
/// polynomials with nonzero constant term.
#[derive(Clone, Debug)]
pub struct LaurentRing<F> {
    poly: PolyRing<F>,
}

impl<F: Field> LaurentRing<F> {
    pub fn new(base: F) -> Self {
        LaurentRing { poly: PolyRing::new(base) }
    }

    pub fn base(&self) -> &F {
        self.poly.base()
    }

    pub fn poly_ring(&self) -> &PolyRing<F> {
        &self.poly
    }

    pub fn from_parts(&self, val: i64, coeffs: Vec<F::Elem>) -> LaurentPoly<F::Elem> {
        let k = self.base();
        let start = coeffs.iter().position(|c| !k.is_zero(c));
        match start {
            None => LaurentPoly { val: 0, coeffs: Vec::new() },
            Some(s) => {
                let end = coeffs.iter().rposition(|c| !k.is_zero(c)).unwrap();
                LaurentPoly { val: val + s as i64, coeffs: coeffs[s..=end].to_vec() }
            }
        }
    }

    /// `c tau^k`
    pub fn monomial(&self, c: F::Elem, k: i64) -> LaurentPoly<F::Elem> {
        self.from_parts(k, vec![c])
    }

    /// `tau^k`
    pub fn tau_pow(&self, k: i64) -> LaurentPoly<F::Elem> {
        self.monomial(self.base().one(), k)
    }

    pub fn from_poly(&self, f: &Poly<F::Elem>) -> LaurentPoly<F::Elem> {
        self.from_parts(0, f.coeffs().to_vec())
    }

    /// The polynomial part for an element with nonnegative valuation.
    pub fn to_poly(&self, f: &LaurentPoly<F::Elem>) -> Option<Poly<F::Elem>> {
        if f.is_zero() {
            return Some(self.poly.zero());
        }
        if f.val < 0 {
            return None;
        }
        let mut v = vec![self.base().zero(); f.val as usize];
        v.extend(f.coeffs.iter().cloned());
        Some(self.poly.from_coeffs(v))
    }

    /// Value at `tau = a`; `a` must be nonzero when the valuation is negative.
    pub fn eval(&self, f: &LaurentPoly<F::Elem>, a: &F::Elem) -> F::Elem {
        let k = self.base();
        if f.is_zero() {
            return k.zero();
        }
        let body = f.coeffs.iter().rev().fold(k.zero(), |acc, c| k.add(&k.mul(&acc, a), c));
        k.mul(&body, &k.zpow(a, f.val))
    }

    /// `tau -> tau^-1`
    pub fn invert_variable(&self, f: &LaurentPoly<F::Elem>) -> LaurentPoly<F::Elem> {
        if f.is_zero() {
            return f.clone();
        }
        let mut c = f.coeffs.clone();
        c.reverse();
        LaurentPoly { val: -(f.val + c.len() as i64 - 1), coeffs: c }
    }
}

/// Split `f != 0` as `unit * normalized`, with `unit = c tau^k` and
/// `normalized` monic with nonzero constant term.
pub fn laurent_normalize<F: Field>(
    ring: &LaurentRing<F>,
    f: &LaurentPoly<F::Elem>,
) -> Result<(LaurentPoly<F::Elem>, Poly<F::Elem>), Error> {
    if f.is_zero() {
        return Err(Error::Domain("cannot normalize the zero Laurent polynomial".into()));
    }
    let k = ring.base();
    let lead = f.coeffs.last().unwrap();
    let li = k.inv(lead).unwrap();
    let unit = ring.monomial(lead.clone(), f.val);
    let normalized = ring.poly.from_coeffs(f.coeffs.iter().map(|c| k.mul(c, &li)).collect());
    Ok((unit, normalized))
}

impl<F: Field> Ring for LaurentRing<F> {
    type Elem = LaurentPoly<F::Elem>;

    fn zero(&self) -> Self::Elem {
        LaurentPoly { val: 0, coeffs: Vec::new() }
    }
    fn one(&self) -> Self::Elem {
        self.tau_pow(0)
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.coeffs.is_empty()
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        if a.is_zero() {
            return b.clone();
        }
        if b.is_zero() {
            return a.clone();
        }
        let k = self.base();
        let lo = a.val.min(b.val);
        let hi = (a.val + a.coeffs.len() as i64).max(b.val + b.coeffs.len() as i64);
        let mut v = vec![k.zero(); (hi - lo) as usize];
        for (i, c) in a.coeffs.iter().enumerate() {
            k.add_assign(&mut v[(a.val - lo) as usize + i], c);
        }
        for (i, c) in b.coeffs.iter().enumerate() {
            k.add_assign(&mut v[(b.val - lo) as usize + i], c);
        }
        self.from_parts(lo, v)
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        LaurentPoly { val: a.val, coeffs: a.coeffs.iter().map(|c| self.base().neg(c)).collect() }
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        let k = self.base();
        let mut v = vec![k.zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            for (j, y) in b.coeffs.iter().enumerate() {
                k.mul_add_assign(&mut v[i + j], x, y);
            }
        }
        self.from_parts(a.val + b.val, v)
    }

    fn from_int(&self, n: i64) -> Self::Elem {
        self.monomial(self.base().from_int(n), 0)
    }

    fn show(&self, a: &Self::Elem) -> String {
        if a.is_zero() {
            return "0".into();
        }
        if a.val >= 0 {
            return self.poly.show(&self.to_poly(a).unwrap());
        }
        let body = self.poly.show(&self.poly.from_coeffs(a.coeffs.clone()));
        format!("tau^{}*({body})", a.val)
    }
}

impl<F: Field> EuclideanRing for LaurentRing<F> {
    fn is_unit(&self, a: &Self::Elem) -> bool {
        a.coeffs.len() == 1
    }

    fn unit_inverse(&self, a: &Self::Elem) -> Option<Self::Elem> {
        if a.coeffs.len() != 1 {
            return None;
        }
        self.base().inv(&a.coeffs[0]).map(|c| self.monomial(c, -a.val))
    }

    fn norm(&self, a: &Self::Elem) -> usize {
        a.span().unwrap_or(0)
    }

    fn div_rem(&self, a: &Self::Elem, b: &Self::Elem) -> (Self::Elem, Self::Elem) {
        assert!(!b.is_zero(), "Laurent division by zero");
        if a.is_zero() {
            return (self.zero(), self.zero());
        }
        // a = tau^va a', b = tau^vb b' with a', b' having nonzero constant term.
        let pa = self.poly.from_coeffs(a.coeffs.clone());
        let pb = self.poly.from_coeffs(b.coeffs.clone());
        let (q, r) = self.poly.div_rem(&pa, &pb);
        let q = self.from_parts(a.val - b.val, q.into_coeffs());
        let r = self.from_parts(a.val, r.into_coeffs());
        (q, r)
    }

    fn normalize(&self, a: &Self::Elem) -> (Self::Elem, Self::Elem) {
        if a.is_zero() {
            return (self.one(), self.zero());
        }
        let (u, n) = laurent_normalize(self, a).unwrap();
        (u, self.from_poly(&n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Rationals;

    fn lp(val: i64, c: &[i64]) -> LaurentPoly<num_rational::BigRational> {
        let r = LaurentRing::new(Rationals);
        r.from_parts(val, c.iter().map(|&x| Rationals.from_int(x)).collect())
    }

    #[test]
    fn normalize_examples() {
        let r = LaurentRing::new(Rationals);
        let p = r.poly_ring();
        let (u, n) = laurent_normalize(&r, &lp(-2, &[-3, 3])).unwrap();
        assert_eq!(u, lp(-2, &[3]));
        assert_eq!(p.show(&n), "tau-1");
        let (u, n) = laurent_normalize(&r, &lp(3, &[1])).unwrap();
        assert_eq!(u, lp(3, &[1]));
        assert!(p.is_one(&n));
        let (u, n) = laurent_normalize(&r, &lp(0, &[0, -1, 1])).unwrap();
        assert_eq!(u, lp(1, &[1]));
        assert_eq!(p.show(&n), "tau-1");
        assert!(laurent_normalize(&r, &r.zero()).is_err());
    }

    #[test]
    fn division_reduces_span() {
        let r = LaurentRing::new(Rationals);
        let a = lp(-3, &[1, 0, 2, 0, 5]);
        let b = lp(4, &[1, 1]);
        let (q, rem) = r.div_rem(&a, &b);
        assert_eq!(r.add(&r.mul(&q, &b), &rem), a);
        assert!(rem.is_zero() || r.norm(&rem) < r.norm(&b));
    }

    #[test]
    fn invert_variable_evaluates_at_inverse() {
        let r = LaurentRing::new(Rationals);
        let f = lp(-1, &[2, 0, 7]);
        let a = Rationals.from_int(3);
        let ai = Rationals.inv(&a).unwrap();
        assert_eq!(r.eval(&r.invert_variable(&f), &a), r.eval(&f, &ai));
    }
}
