use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::{Field, Ring};
use crate::Error;

/// The field of rationals with arbitrary-precision numerators and denominators.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn add_assign(&self, a: &mut BigRational, b: &BigRational) {
        *a += b;
    }
    fn from_int(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn show(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
}

impl Field for Rationals {
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }

    fn characteristic(&self) -> u64 {
        0
    }

    fn order(&self) -> Option<u64> {
        None
    }

    fn parse(&self, s: &str) -> Result<BigRational, Error> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a rational number: {s:?}"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(BigRational::new(n, d))
    }

    fn element(&self, _i: u64) -> Option<BigRational> {
        None
    }

    fn label(&self) -> String {
        "Q".into()
    }

    /// Rational root theorem on the integral multiple of the polynomial.
    fn root_candidates(&self, coeffs: &[BigRational]) -> Option<Vec<BigRational>> {
        let den = common_denominator(coeffs);
        let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * &den).to_integer()).collect();
        let mut out = Vec::new();
        let Some(low) = ints.iter().position(|c| !c.is_zero()) else {
            return Some(out);
        };
        if low > 0 {
            out.push(BigRational::zero());
        }
        let lead = ints.iter().rev().find(|c| !c.is_zero()).unwrap();
        let (ps, qs) = (divisors(&ints[low])?, divisors(lead)?);
        let mut seen = std::collections::BTreeSet::new();
        for &p in &ps {
            for &q in &qs {
                for sign in [1i64, -1] {
                    let r = BigRational::new(BigInt::from(p) * sign, BigInt::from(q));
                    if seen.insert(r.clone()) {
                        out.push(r);
                    }
                }
            }
        }
        Some(out)
    }
}

/// Least common multiple of the denominators.
pub(crate) fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| num_integer::lcm(acc, x.denom().clone()))
}

/// Positive divisors by trial division; `None` above `10^12`.
fn divisors(n: &BigInt) -> Option<Vec<u64>> {
    let n = n.magnitude().to_u64().filter(|&n| n <= 1_000_000_000_000)?;
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Some(small)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_show_are_canonical() {
        let k = Rationals;
        let x = k.parse("6/-4").unwrap();
        assert_eq!(k.show(&x), "-3/2");
        assert_eq!(k.show(&k.parse(" 7 ").unwrap()), "7");
        assert!(k.parse("1/0").is_err());
        assert!(k.parse("x").is_err());
    }

    #[test]
    fn rational_roots() {
        use crate::algebra::PolyRing;
        let k = Rationals;
        let pr = PolyRing::new(k);
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        // x^2 (2x - 1)(x + 3)/5
        let f = pr.from_coeffs(vec![r(0, 1), r(0, 1), r(-3, 5), r(5, 5), r(2, 5)]);
        let mut roots = pr.roots(&f).unwrap();
        roots.sort();
        assert_eq!(roots, vec![(r(-3, 1), 1), (r(0, 1), 2), (r(1, 2), 1)]);
        let g = pr.from_coeffs(vec![r(-2, 1), r(0, 1), r(1, 1)]);
        assert!(pr.roots(&g).unwrap().is_empty());
    }
}
