use super::{EuclideanRing, Field, Ring};

/// Univariate polynomial with ascending coefficients. The coefficient list
/// is trimmed: the last entry is nonzero unless the polynomial is zero, in
/// which case the list is empty.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly<E> {
    coeffs: Vec<E>,
}

impl<E> Poly<E> {
    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&E> {
        self.coeffs.last()
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.coeffs
    }
}

/// `k[x]` over an exact field, as a Euclidean ring. Normalized elements are
/// monic.
#[derive(Clone, Debug)]
pub struct PolyRing<F> {
    base: F,
    var: &'static str,
}

impl<F: Field> PolyRing<F> {
    pub fn new(base: F) -> Self {
        PolyRing { base, var: "tau" }
    }

    /// Same ring, printed with a different variable name.
    pub fn with_var(base: F, var: &'static str) -> Self {
        PolyRing { base, var }
    }

    pub fn base(&self) -> &F {
        &self.base
    }

    pub fn var(&self) -> &'static str {
        self.var
    }

    pub fn from_coeffs(&self, mut coeffs: Vec<F::Elem>) -> Poly<F::Elem> {
        while coeffs.last().is_some_and(|c| self.base.is_zero(c)) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(&self, c: F::Elem) -> Poly<F::Elem> {
        self.from_coeffs(vec![c])
    }

    /// `c x^k`
    pub fn monomial(&self, c: F::Elem, k: usize) -> Poly<F::Elem> {
        let mut v = vec![self.base.zero(); k];
        v.push(c);
        self.from_coeffs(v)
    }

    /// The variable itself.
    pub fn x(&self) -> Poly<F::Elem> {
        self.monomial(self.base.one(), 1)
    }

    /// `x - a`
    pub fn linear(&self, a: &F::Elem) -> Poly<F::Elem> {
        self.from_coeffs(vec![self.base.neg(a), self.base.one()])
    }

    pub fn coeff(&self, f: &Poly<F::Elem>, i: usize) -> F::Elem {
        f.coeffs.get(i).cloned().unwrap_or_else(|| self.base.zero())
    }

    pub fn eval(&self, f: &Poly<F::Elem>, a: &F::Elem) -> F::Elem {
        let k = &self.base;
        f.coeffs.iter().rev().fold(k.zero(), |acc, c| k.add(&k.mul(&acc, a), c))
    }

    pub fn scale(&self, f: &Poly<F::Elem>, c: &F::Elem) -> Poly<F::Elem> {
        self.from_coeffs(f.coeffs.iter().map(|x| self.base.mul(x, c)).collect())
    }

    /// `f * x^k`
    pub fn shift(&self, f: &Poly<F::Elem>, k: usize) -> Poly<F::Elem> {
        if f.is_zero() {
            return f.clone();
        }
        let mut v = vec![self.base.zero(); k];
        v.extend(f.coeffs.iter().cloned());
        Poly { coeffs: v }
    }

    /// `f(x + a)`
    pub fn translate(&self, f: &Poly<F::Elem>, a: &F::Elem) -> Poly<F::Elem> {
        // Horner in the ring: acc = acc*(x+a) + c
        let xa = self.from_coeffs(vec![a.clone(), self.base.one()]);
        f.coeffs.iter().rev().fold(self.zero(), |acc, c| {
            self.add(&self.mul(&acc, &xa), &self.constant(c.clone()))
        })
    }

    /// Largest `e` with `(x - a)^e | f`. Panics on `f = 0`.
    pub fn root_multiplicity(&self, f: &Poly<F::Elem>, a: &F::Elem) -> usize {
        assert!(!f.is_zero(), "root multiplicity of the zero polynomial");
        let lin = self.linear(a);
        let mut g = f.clone();
        let mut e = 0;
        loop {
            let (q, r) = self.div_rem(&g, &lin);
            if !r.is_zero() {
                return e;
            }
            g = q;
            e += 1;
        }
    }

    /// Roots in the base field with multiplicities, in candidate order;
    /// `None` when the candidates cannot be enumerated.
    pub fn roots(&self, f: &Poly<F::Elem>) -> Option<Vec<(F::Elem, usize)>> {
        let mut out = Vec::new();
        for a in self.base.root_candidates(&f.coeffs)? {
            if self.base.is_zero(&self.eval(f, &a)) {
                out.push((a.clone(), self.root_multiplicity(f, &a)));
            }
        }
        Some(out)
    }

    fn show_coeff(&self, c: &F::Elem) -> String {
        let s = self.base.show(c);
        if s[1..].contains(['+', '-']) {
            format!("({s})")
        } else {
            s
        }
    }
}

impl<F: Field> Ring for PolyRing<F> {
    type Elem = Poly<F::Elem>;

    fn zero(&self) -> Self::Elem {
        Poly { coeffs: Vec::new() }
    }
    fn one(&self) -> Self::Elem {
        self.constant(self.base.one())
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.coeffs.is_empty()
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let (long, short) = if a.coeffs.len() >= b.coeffs.len() { (a, b) } else { (b, a) };
        let mut v = long.coeffs.clone();
        for (x, y) in v.iter_mut().zip(&short.coeffs) {
            self.base.add_assign(x, y);
        }
        self.from_coeffs(v)
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        Poly { coeffs: a.coeffs.iter().map(|c| self.base.neg(c)).collect() }
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        let k = &self.base;
        let mut v = vec![k.zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if k.is_zero(x) {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                k.mul_add_assign(&mut v[i + j], x, y);
            }
        }
        self.from_coeffs(v)
    }

    fn from_int(&self, n: i64) -> Self::Elem {
        self.constant(self.base.from_int(n))
    }

    fn show(&self, a: &Self::Elem) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let k = &self.base;
        let mut out = String::new();
        for (i, c) in a.coeffs.iter().enumerate().rev() {
            if k.is_zero(c) {
                continue;
            }
            let (negative, mag) = {
                let s = self.show_coeff(c);
                match s.strip_prefix('-') {
                    Some(rest) => (true, rest.to_string()),
                    None => (false, s),
                }
            };
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push(if negative { '-' } else { '+' });
            }
            let mono = match i {
                0 => String::new(),
                1 => self.var.to_string(),
                _ => format!("{}^{i}", self.var),
            };
            if i == 0 {
                out.push_str(&mag);
            } else if mag == "1" {
                out.push_str(&mono);
            } else {
                out.push_str(&mag);
                out.push('*');
                out.push_str(&mono);
            }
        }
        out
    }
}

impl<F: Field> EuclideanRing for PolyRing<F> {
    fn is_unit(&self, a: &Self::Elem) -> bool {
        a.coeffs.len() == 1
    }

    fn unit_inverse(&self, a: &Self::Elem) -> Option<Self::Elem> {
        if a.coeffs.len() != 1 {
            return None;
        }
        self.base.inv(&a.coeffs[0]).map(|c| self.constant(c))
    }

    fn norm(&self, a: &Self::Elem) -> usize {
        a.degree().unwrap_or(0)
    }

    fn div_rem(&self, a: &Self::Elem, b: &Self::Elem) -> (Self::Elem, Self::Elem) {
        let k = &self.base;
        let db = b.degree().expect("polynomial division by zero");
        let lead_inv = k.inv(&b.coeffs[db]).expect("nonzero leading coefficient");
        let mut r = a.coeffs.clone();
        if r.len() <= db {
            return (self.zero(), a.clone());
        }
        let mut q = vec![k.zero(); r.len() - db];
        for i in (0..q.len()).rev() {
            let c = k.mul(&r[i + db], &lead_inv);
            if k.is_zero(&c) {
                continue;
            }
            let negc = k.neg(&c);
            for (j, bj) in b.coeffs.iter().enumerate() {
                k.mul_add_assign(&mut r[i + j], &negc, bj);
            }
            q[i] = c;
        }
        r.truncate(db);
        (self.from_coeffs(q), self.from_coeffs(r))
    }

    fn normalize(&self, a: &Self::Elem) -> (Self::Elem, Self::Elem) {
        match a.lead() {
            None => (self.one(), self.zero()),
            Some(l) => {
                let li = self.base.inv(l).expect("nonzero leading coefficient");
                (self.constant(l.clone()), self.scale(a, &li))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{FiniteField, Rationals};

    fn qp(c: &[i64]) -> Poly<num_rational::BigRational> {
        let r = PolyRing::new(Rationals);
        r.from_coeffs(c.iter().map(|&x| Rationals.from_int(x)).collect())
    }

    #[test]
    fn divmod_cube_by_linear() {
        let r = PolyRing::with_var(Rationals, "t");
        let (q, rem) = r.div_rem(&qp(&[0, 0, 0, 1]), &qp(&[-1, 1]));
        assert_eq!(r.show(&q), "t^2+t+1");
        assert_eq!(r.show(&rem), "1");
    }

    #[test]
    fn gcd_and_multiplicity() {
        let r = PolyRing::new(Rationals);
        assert_eq!(r.gcd(&qp(&[-1, 0, 1]), &qp(&[-1, 1])), qp(&[-1, 1]));
        assert_eq!(r.root_multiplicity(&qp(&[1, -2, 1]), &Rationals.from_int(1)), 2);
        assert_eq!(r.root_multiplicity(&qp(&[1, -2, 1]), &Rationals.from_int(2)), 0);
    }

    #[test]
    fn show_extension_coefficients() {
        let f4 = FiniteField::new(2, 2).unwrap();
        let r = PolyRing::new(f4.clone());
        let w = f4.generator_t();
        let f = r.linear(&f4.add(&w, &f4.one()));
        assert_eq!(r.show(&f), "tau+(t+1)");
        assert_eq!(PolyRing::new(Rationals).show(&qp(&[0, -3, 0, 2])), "2*tau^3-3*tau");
    }

    #[test]
    fn translate_recenters() {
        let r = PolyRing::new(Rationals);
        // (x-1)^2 evaluated at x+1 is x^2
        assert_eq!(r.translate(&qp(&[1, -2, 1]), &Rationals.from_int(1)), qp(&[0, 0, 1]));
    }
}
