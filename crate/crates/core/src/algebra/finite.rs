use std::fmt;
use std::sync::Arc;

use super::{Field, Ring};
use crate::Error;

/// Largest extension field order for which log/antilog tables are built.
const MAX_EXTENSION_ORDER: u64 = 1 << 22;

/// Element of a finite field, encoded as `sum c_i p^i` where `c_i` is the
/// coefficient of `t^i` in the residue modulo the defining polynomial.
/// The encoding is also the canonical element order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Gf(pub u32);

/// `F_p` or `F_{p^m}` with an explicit monic irreducible modulus.
#[derive(Clone)]
pub struct FiniteField {
    p: u32,
    m: u32,
    q: u64,
    /// Monic, ascending coefficients, length `m + 1`.
    modulus: Vec<u32>,
    tables: Option<Arc<Tables>>,
}

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteField({})", self.label())
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl Eq for FiniteField {}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// --- dense polynomial helpers over F_p (ascending coefficients) ---

fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn fp_inv(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let (mut b, mut e) = (a % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn fp_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = fp_inv(b[db], p);
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let c = r[r.len() - 1] * lead_inv % p;
        for (i, &bi) in b.iter().enumerate() {
            let idx = shift + i;
            r[idx] = (r[idx] + p - c * bi % p) % p;
        }
        trim(&mut r);
    }
    r
}

fn fp_mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    fp_rem(&out, f, p)
}

fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = fp_rem(&a, &b, p);
        a = std::mem::replace(&mut b, r);
    }
    a
}

fn digits(mut e: u64, p: u64, len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(e % p);
        e /= p;
    }
    out
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
fn irreducible_by_search(f: &[u64], p: u64) -> bool {
    let m = f.len() - 1;
    for d in 1..=m / 2 {
        for e in 0..p.pow(d as u32) {
            let mut g = digits(e, p, d);
            g.push(1);
            if fp_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Rabin's test: `x^{p^m} = x mod f` and `gcd(x^{p^{m/r}} - x, f) = 1` for
/// every prime `r | m`.
fn irreducible_by_rabin(f: &[u64], p: u64) -> bool {
    let m = (f.len() - 1) as u64;
    let frob = |g: &[u64], times: u64| -> Vec<u64> {
        let mut g = g.to_vec();
        for _ in 0..times {
            // g <- g^p mod f
            let mut acc = vec![1u64];
            let mut base = g.clone();
            let mut e = p;
            while e > 0 {
                if e & 1 == 1 {
                    acc = fp_mulmod(&acc, &base, f, p);
                }
                base = fp_mulmod(&base, &base, f, p);
                e >>= 1;
            }
            g = acc;
        }
        g
    };
    let x = fp_rem(&[0, 1], f, p);
    let sub_x = |mut g: Vec<u64>| {
        if g.len() < 2 {
            g.resize(2, 0);
        }
        g[1] = (g[1] + p - 1) % p;
        fp_rem(&g, f, p)
    };
    if !sub_x(frob(&x, m)).is_empty() {
        return false;
    }
    for r in prime_factors(m) {
        let h = sub_x(frob(&x, m / r));
        if fp_gcd(&h, f, p).len() != 1 {
            return false;
        }
    }
    true
}

pub(crate) fn is_irreducible_mod_p(f: &[u64], p: u64) -> bool {
    let m = f.len() - 1;
    if m == 0 {
        return false;
    }
    if m <= 16 {
        irreducible_by_search(f, p)
    } else {
        irreducible_by_rabin(f, p)
    }
}

impl FiniteField {
    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Self, Error> {
        Self::new(p, 1)
    }

    /// `F_{p^m}` defined by the least monic irreducible polynomial of degree
    /// `m`, where polynomials `t^m + c_{m-1} t^{m-1} + ... + c_0` are ordered
    /// by the integer `sum c_i p^i`.
    pub fn new(p: u64, m: u32) -> Result<Self, Error> {
        Self::check_params(p, m)?;
        if m == 1 {
            return Self::with_modulus(p, &[0, 1]);
        }
        let pm = p.pow(m);
        for e in 0..pm {
            let mut f = digits(e, p, m as usize);
            f.push(1);
            if is_irreducible_mod_p(&f, p) {
                let f: Vec<u32> = f.into_iter().map(|c| c as u32).collect();
                return Self::with_modulus(p, &f);
            }
        }
        unreachable!("an irreducible polynomial of every degree exists")
    }

    fn check_params(p: u64, m: u32) -> Result<(), Error> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if m == 0 {
            return Err(Error::InvalidField("extension degree must be at least 1".into()));
        }
        if p >= 1 << 31 {
            return Err(Error::InvalidField(format!("prime {p} too large")));
        }
        if m > 1 && p.checked_pow(m).is_none_or(|q| q > MAX_EXTENSION_ORDER) {
            return Err(Error::InvalidField(format!(
                "{p}^{m} exceeds the supported extension order {MAX_EXTENSION_ORDER}"
            )));
        }
        Ok(())
    }

    /// `F_p[t]/(f)` for an explicit monic irreducible `f` (ascending coefficients).
    pub fn with_modulus(p: u64, modulus: &[u32]) -> Result<Self, Error> {
        let m = modulus.len().saturating_sub(1) as u32;
        Self::check_params(p, m)?;
        if modulus.last() != Some(&1) || modulus.iter().any(|&c| c as u64 >= p) {
            return Err(Error::InvalidField("modulus must be monic with reduced coefficients".into()));
        }
        let f64s: Vec<u64> = modulus.iter().map(|&c| c as u64).collect();
        if !is_irreducible_mod_p(&f64s, p) {
            return Err(Error::InvalidField(format!("modulus {modulus:?} is reducible mod {p}")));
        }
        let mut field = FiniteField {
            p: p as u32,
            m,
            q: p.pow(m),
            modulus: modulus.to_vec(),
            tables: None,
        };
        if m > 1 {
            field.tables = Some(Arc::new(field.build_tables()));
        }
        Ok(field)
    }

    pub fn p(&self) -> u64 {
        self.p as u64
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Smallest `m` such that `F_{p^m}` has an element `a != 1` with `a^n = 1`.
    pub fn extension_degree_for_root_of_unity(p: u64, n: u64) -> Option<u32> {
        if n <= 1 {
            return None;
        }
        // a^n = 1, a != 1 exists iff gcd(n, p^m - 1) > 1; the order of p modulo
        // any prime divisor r != p of n bounds m.
        let mut q: u128 = 1;
        for m in 1..=64u32 {
            q *= p as u128;
            if num_integer::gcd((q - 1) as u128, n as u128) > 1 {
                return Some(m);
            }
            if q > u64::MAX as u128 {
                break;
            }
        }
        None
    }

    fn build_tables(&self) -> Tables {
        let q = self.q as usize;
        let slow = |a: u32, b: u32| self.mul_slow(a, b);
        let factors = prime_factors(self.q - 1);
        let is_generator = |g: u32| {
            factors.iter().all(|&r| {
                let mut acc = 1u32;
                let mut base = g;
                let mut e = (self.q - 1) / r;
                while e > 0 {
                    if e & 1 == 1 {
                        acc = slow(acc, base);
                    }
                    base = slow(base, base);
                    e >>= 1;
                }
                acc != 1
            })
        };
        let g = (2..q as u32).find(|&g| is_generator(g)).unwrap_or(1);
        let mut exp = vec![0u32; q - 1];
        let mut log = vec![0u32; q];
        let mut x = 1u32;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = x;
            log[x as usize] = i as u32;
            x = slow(x, g);
        }
        Tables { exp, log }
    }

    fn unpack(&self, a: u32) -> Vec<u64> {
        digits(a as u64, self.p as u64, self.m as usize)
    }

    fn pack(&self, c: &[u64]) -> u32 {
        c.iter().rev().fold(0u64, |acc, &x| acc * self.p as u64 + x) as u32
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let f: Vec<u64> = self.modulus.iter().map(|&c| c as u64).collect();
        let mut x = self.unpack(a);
        let mut y = self.unpack(b);
        trim(&mut x);
        trim(&mut y);
        let mut r = fp_mulmod(&x, &y, &f, self.p as u64);
        r.resize(self.m as usize, 0);
        self.pack(&r)
    }

    pub fn elem(&self, v: u64) -> Gf {
        debug_assert!(v < self.q);
        Gf(v as u32)
    }

    /// The class of `t` (for `m > 1`).
    pub fn generator_t(&self) -> Gf {
        if self.m == 1 {
            Gf(0)
        } else {
            Gf(self.p)
        }
    }
}

impl Ring for FiniteField {
    type Elem = Gf;

    fn zero(&self) -> Gf {
        Gf(0)
    }
    fn one(&self) -> Gf {
        Gf(1)
    }
    fn is_zero(&self, a: &Gf) -> bool {
        a.0 == 0
    }
    fn is_one(&self, a: &Gf) -> bool {
        a.0 == 1
    }

    fn add(&self, a: &Gf, b: &Gf) -> Gf {
        let p = self.p as u64;
        if self.m == 1 {
            return Gf(((a.0 as u64 + b.0 as u64) % p) as u32);
        }
        if p == 2 {
            return Gf(a.0 ^ b.0);
        }
        let (mut x, mut y) = (a.0 as u64, b.0 as u64);
        let (mut out, mut place) = (0u64, 1u64);
        while x > 0 || y > 0 {
            out += ((x % p + y % p) % p) * place;
            x /= p;
            y /= p;
            place *= p;
        }
        Gf(out as u32)
    }

    fn neg(&self, a: &Gf) -> Gf {
        let p = self.p as u64;
        if self.m == 1 {
            return Gf(((p - a.0 as u64) % p) as u32);
        }
        if p == 2 {
            return *a;
        }
        let mut x = a.0 as u64;
        let (mut out, mut place) = (0u64, 1u64);
        while x > 0 {
            out += ((p - x % p) % p) * place;
            x /= p;
            place *= p;
        }
        Gf(out as u32)
    }

    fn mul(&self, a: &Gf, b: &Gf) -> Gf {
        if a.0 == 0 || b.0 == 0 {
            return Gf(0);
        }
        match &self.tables {
            None => Gf(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32),
            Some(t) => {
                let n = self.q as usize - 1;
                let s = t.log[a.0 as usize] as usize + t.log[b.0 as usize] as usize;
                Gf(t.exp[if s >= n { s - n } else { s }])
            }
        }
    }

    fn from_int(&self, n: i64) -> Gf {
        Gf(n.rem_euclid(self.p as i64) as u32)
    }

    fn show(&self, a: &Gf) -> String {
        if self.m == 1 {
            return a.0.to_string();
        }
        let c = self.unpack(a.0);
        let terms: Vec<String> = c
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &ci)| ci != 0)
            .map(|(i, &ci)| match (i, ci) {
                (0, _) => ci.to_string(),
                (1, 1) => "t".into(),
                (1, _) => format!("{ci}t"),
                (_, 1) => format!("t^{i}"),
                _ => format!("{ci}t^{i}"),
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
}

impl Field for FiniteField {
    fn inv(&self, a: &Gf) -> Option<Gf> {
        if a.0 == 0 {
            return None;
        }
        Some(match &self.tables {
            None => Gf(fp_inv(a.0 as u64, self.p as u64) as u32),
            Some(t) => {
                let n = self.q as usize - 1;
                let l = t.log[a.0 as usize] as usize;
                Gf(t.exp[(n - l) % n])
            }
        })
    }

    fn characteristic(&self) -> u64 {
        self.p as u64
    }

    fn order(&self) -> Option<u64> {
        Some(self.q)
    }

    fn parse(&self, s: &str) -> Result<Gf, Error> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("not an element of F_{}: {s:?}", self.label()));
        if s.is_empty() {
            return Err(bad());
        }
        if self.m == 1 {
            let n: i64 = s.parse().map_err(|_| bad())?;
            return Ok(self.from_int(n));
        }
        let mut acc = self.zero();
        let t = self.generator_t();
        // split into signed terms
        let mut terms = Vec::new();
        let mut cur = String::new();
        for ch in s.chars() {
            if (ch == '+' || ch == '-') && !cur.is_empty() {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        terms.push(cur);
        for term in terms {
            let (neg, body) = match term.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, term.strip_prefix('+').unwrap_or(&term)),
            };
            let (coef, power) = match body.find('t') {
                None => (body.parse::<i64>().map_err(|_| bad())?, 0u64),
                Some(pos) => {
                    let c = &body[..pos];
                    let c = if c.is_empty() { 1 } else { c.trim_end_matches('*').parse::<i64>().map_err(|_| bad())? };
                    let rest = &body[pos + 1..];
                    let e = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^').ok_or_else(bad)?.parse::<u64>().map_err(|_| bad())?
                    };
                    (c, e)
                }
            };
            let mut term = self.mul(&self.from_int(coef), &self.pow(&t, power));
            if neg {
                term = self.neg(&term);
            }
            acc = self.add(&acc, &term);
        }
        Ok(acc)
    }

    fn element(&self, i: u64) -> Option<Gf> {
        (i < self.q).then_some(Gf(i as u32))
    }

    fn label(&self) -> String {
        if self.m == 1 {
            self.p.to_string()
        } else {
            format!("{}^{}", self.p, self.m)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f4_modulus_is_the_unique_irreducible_quadratic() {
        let k = FiniteField::new(2, 2).unwrap();
        assert_eq!(k.modulus(), &[1, 1, 1]);
        // exhaustive: x^2, x^2+1, x^2+x are reducible over F_2
        for e in 0..3u64 {
            let mut f = digits(e, 2, 2);
            f.push(1);
            assert!(!is_irreducible_mod_p(&f, 2));
        }
    }

    #[test]
    fn non_prime_and_zero_degree_rejected() {
        assert!(FiniteField::prime(4).is_err());
        assert!(FiniteField::new(3, 0).is_err());
        assert!(FiniteField::with_modulus(2, &[1, 0, 1]).is_err());
    }

    #[test]
    fn rabin_agrees_with_search() {
        for p in [2u64, 3, 5] {
            for m in 1..=4usize {
                for e in 0..p.pow(m as u32) {
                    let mut f = digits(e, p, m);
                    f.push(1);
                    assert_eq!(
                        irreducible_by_search(&f, p),
                        irreducible_by_rabin(&f, p),
                        "p={p} f={f:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn roots_of_unity() {
        let f4 = FiniteField::new(2, 2).unwrap();
        let w = f4.root_of_unity(3).unwrap();
        assert!(f4.is_one(&f4.pow(&w, 3)));
        assert!(!f4.is_one(&w));
        // least in canonical order: t
        assert_eq!(w, f4.generator_t());
        let f2 = FiniteField::prime(2).unwrap();
        assert!(f2.root_of_unity(3).is_none());
        assert!(f4.root_of_unity(1).is_none());
        assert_eq!(FiniteField::extension_degree_for_root_of_unity(2, 3), Some(2));
        assert_eq!(FiniteField::extension_degree_for_root_of_unity(5, 4), Some(1));
        assert_eq!(FiniteField::extension_degree_for_root_of_unity(2, 2), None);
    }

    #[test]
    fn show_parse_round_trip() {
        let k = FiniteField::new(5, 3).unwrap();
        for i in 0..k.order().unwrap() {
            let a = k.element(i).unwrap();
            assert_eq!(k.parse(&k.show(&a)).unwrap(), a);
        }
        let f4 = FiniteField::new(2, 2).unwrap();
        assert_eq!(f4.show(&f4.parse("t^2").unwrap()), "t+1");
    }
}
