//! Cup products with local coefficients, the product on the deformation
//! complex, and cup-length lower bounds for the number of critical points.

use std::collections::BTreeMap;

use crate::algebra::{EuclideanRing, Field, LaurentPoly, LaurentRing, Poly, PolyRing, Ring};
use crate::complexes::{
    cohomology_dims, lambda_twisted_complex, twisted_complex_over_field, CohomologyBasis, CutPresentation, EdgeTransport, FlatBundle,
    IntegralCocycle, SimplicialComplex, TwistedComplex,
};
use crate::linalg::{kernel, map_dense, rank, SparseMatrix, TaggedBasis};
use crate::massey::analyze;
use crate::pidmod::cohomology_modules;
use crate::novikov::xi_generic_test;
use crate::Error;

/// `(u cup v)(v0..v_{p+q}) = u(v0..vp) (x) g(v0 vp) v(vp..v_{p+q})` over any
/// ring. `g` transports the fibers of the second factor; the fiber of the
/// product is laid out as in [`crate::linalg::kronecker`].
#[allow(clippy::too_many_arguments)]
pub fn cup_cochains<R: Ring>(
    ring: &R,
    x: &SimplicialComplex,
    rank_u: usize,
    p: usize,
    u: &[R::Elem],
    g: &EdgeTransport<R::Elem>,
    q: usize,
    v: &[R::Elem],
) -> Result<Vec<R::Elem>, Error> {
    let rank_v = g.rank();
    if u.len() != x.count(p) * rank_u || v.len() != x.count(q) * rank_v {
        return Err(Error::Invalid(format!("cochains do not match degrees {p}, {q} of the complex")));
    }
    let d = rank_u * rank_v;
    let mut out = vec![ring.zero(); x.count(p + q) * d];
    for (r, s) in x.simplices(p + q).iter().enumerate() {
        let front = x.index_of(&s[..=p]).unwrap();
        let back = x.index_of(&s[p..]).unwrap();
        let uv = &u[front * rank_u..(front + 1) * rank_u];
        let vv = &v[back * rank_v..(back + 1) * rank_v];
        let moved: Vec<R::Elem> = if p == 0 {
            vv.to_vec()
        } else {
            let m = g.matrix(x.edge_index(s[0], s[p]).unwrap());
            (0..rank_v)
                .map(|a| {
                    let mut acc = ring.zero();
                    for (b, y) in vv.iter().enumerate() {
                        ring.mul_add_assign(&mut acc, m.get(a, b), y);
                    }
                    acc
                })
                .collect()
        };
        for (i, a) in uv.iter().enumerate() {
            if ring.is_zero(a) {
                continue;
            }
            for (j, b) in moved.iter().enumerate() {
                out[r * d + i * rank_v + j] = ring.mul(a, b);
            }
        }
    }
    Ok(out)
}

fn transport<F: Field>(f: &FlatBundle<F>) -> EdgeTransport<F::Elem> {
    EdgeTransport::new(f.rank(), f.matrices().to_vec())
}

/// `u cup v` for `u` in `C^p(X; E)` and `v` in `C^q(X; F)`; the result lies in
/// `C^{p+q}(X; E (x) F)`.
#[allow(clippy::too_many_arguments)]
pub fn cup<F: Field>(
    k: &F,
    x: &SimplicialComplex,
    e: &FlatBundle<F>,
    p: usize,
    u: &[F::Elem],
    f: &FlatBundle<F>,
    q: usize,
    v: &[F::Elem],
) -> Result<Vec<F::Elem>, Error> {
    if e.matrices().len() != x.count(1) || f.matrices().len() != x.count(1) {
        return Err(Error::Invalid("bundle does not live on this complex".into()));
    }
    cup_cochains(k, x, e.rank(), p, u, &transport(f), q, v)
}

/// Is the cocycle `c` of degree `q` a coboundary? Decided by comparing ranks,
/// independently of [`CohomologyBasis`].
pub fn is_coboundary<F: Field>(c: &TwistedComplex<F>, q: usize, v: &[F::Elem]) -> bool {
    let k = c.ring();
    let Some(inc) = c.incoming(q) else {
        return v.iter().all(|a| k.is_zero(a));
    };
    let n = inc.ncols();
    let mut trip: Vec<(usize, usize, F::Elem)> = inc.entries().map(|(i, j, a)| (i, j, a.clone())).collect();
    trip.extend(v.iter().enumerate().filter(|(_, a)| !k.is_zero(a)).map(|(i, a)| (i, n, a.clone())));
    let widened = SparseMatrix::from_triplets(k, inc.nrows(), n + 1, trip);
    rank(k, &widened) == rank(k, inc)
}

/// The product `psi_t` on the deformation complex of a cut with constant
/// rank-one coefficients:
/// `psi_t((a, b), (a', b')) = (a cup a', (-1)^|a| (1+t) i_-^*(a) cup b' + b cup i_+^*(a'))`.
/// It is a chain map `(C, delta_t) (x) (C, delta_t') -> (C, delta_0)` with
/// `1 + t' = (1 + t)^-1`.
#[derive(Clone, Debug)]
pub struct PsiProduct<F: Field> {
    k: F,
    cut: CutPresentation<F>,
    t: F::Elem,
    one: EdgeTransport<F::Elem>,
    one_v: EdgeTransport<F::Elem>,
    /// `delta_0`, `delta_t`, `delta_t'`.
    pub d0: TwistedComplex<F>,
    pub dt: TwistedComplex<F>,
    pub dt_prime: TwistedComplex<F>,
    n_dims: Vec<usize>,
}

impl<F: Field> PsiProduct<F> {
    pub fn new(k: &F, cut: &CutPresentation<F>, t: &F::Elem) -> Result<Self, Error> {
        let s = k.add(&k.one(), t);
        if k.is_zero(&s) {
            return Err(Error::Domain("psi_t needs 1 + t != 0".into()));
        }
        let id = crate::linalg::Matrix::identity(k, 1);
        if cut.rank() != 1 || !cut.f0.is_trivial(k) || cut.sigma.iter().any(|m| *m != id) {
            return Err(Error::Invalid("psi_t is defined for constant rank-one coefficients".into()));
        }
        let def = cut.deformation_complex(k)?;
        let inv = k.inv(&s).unwrap();
        Ok(PsiProduct {
            k: k.clone(),
            cut: cut.clone(),
            t: t.clone(),
            one: transport(&FlatBundle::trivial(k, &cut.n, 1)),
            one_v: transport(&FlatBundle::trivial(k, &cut.v, 1)),
            d0: def.evaluate(&k.one()),
            dt: def.evaluate(&s),
            dt_prime: def.evaluate(&inv),
            n_dims: def.n_dims,
        })
    }

    fn split<'c>(&self, q: usize, c: &'c [F::Elem]) -> Result<(&'c [F::Elem], &'c [F::Elem]), Error> {
        if q >= self.n_dims.len() || c.len() != self.d0.dims()[q] {
            return Err(Error::Invalid(format!("cochain of length {} is not in degree {q}", c.len())));
        }
        Ok(c.split_at(self.n_dims[q]))
    }

    fn pull(&self, map: &[usize], q: usize, alpha: &[F::Elem]) -> Vec<F::Elem> {
        self.cut
            .v
            .simplices(q)
            .iter()
            .map(|s| {
                let img: Vec<usize> = s.iter().map(|&v| map[v]).collect();
                alpha[self.cut.n.index_of(&img).unwrap()].clone()
            })
            .collect()
    }

    /// `psi_t(c (x) c')` for `c` of degree `q` and `c'` of degree `q2`.
    pub fn product(&self, q: usize, c: &[F::Elem], q2: usize, c2: &[F::Elem]) -> Result<Vec<F::Elem>, Error> {
        let k = &self.k;
        let (a, b) = self.split(q, c)?;
        let (a2, b2) = self.split(q2, c2)?;
        let deg = q + q2;
        let (n, v) = (&self.cut.n, &self.cut.v);
        let mut alpha = cup_cochains(k, n, 1, q, a, &self.one, q2, a2)?;
        let mut beta = vec![k.zero(); deg.checked_sub(1).map_or(0, |p| v.count(p))];
        if q2 >= 1 {
            let mut s = k.add(&k.one(), &self.t);
            if q % 2 == 1 {
                s = k.neg(&s);
            }
            let front = self.pull(&self.cut.i_minus, q, a);
            for (o, y) in beta.iter_mut().zip(cup_cochains(k, v, 1, q, &front, &self.one_v, q2 - 1, b2)?) {
                k.mul_add_assign(o, &s, &y);
            }
        }
        if q >= 1 {
            let back = self.pull(&self.cut.i_plus, q2, a2);
            for (o, y) in beta.iter_mut().zip(cup_cochains(k, v, 1, q - 1, b, &self.one_v, q2, &back)?) {
                k.add_assign(o, &y);
            }
        }
        if deg >= self.n_dims.len() {
            return Ok(Vec::new());
        }
        alpha.resize(self.n_dims[deg], k.zero());
        alpha.extend(beta);
        Ok(alpha)
    }

    /// Both sides of the Leibniz rule
    /// `delta_0 psi(c, c') = psi(delta_t c, c') + (-1)^q psi(c, delta_t' c')`.
    pub fn leibniz_sides(
        &self,
        q: usize,
        c: &[F::Elem],
        q2: usize,
        c2: &[F::Elem],
    ) -> Result<(Vec<F::Elem>, Vec<F::Elem>), Error> {
        let k = &self.k;
        let top = self.n_dims.len() - 1;
        let deg = q + q2;
        if deg >= top {
            return Ok((Vec::new(), Vec::new()));
        }
        let lhs = self.d0.delta(deg).mul_vec(k, &self.product(q, c, q2, c2)?);
        let mut rhs = self.product(q + 1, &self.dt.delta(q).mul_vec(k, c), q2, c2)?;
        let second = self.product(q, c, q2 + 1, &self.dt_prime.delta(q2).mul_vec(k, c2))?;
        for (o, y) in rhs.iter_mut().zip(&second) {
            if q % 2 == 0 {
                k.add_assign(o, y);
            } else {
                *o = k.sub(o, y);
            }
        }
        Ok((lhs, rhs))
    }
}


#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CupMode {
    /// First two factors are survivors of the spectral sequence.
    Massey,
    /// First two factors come from supplied xi-generic bundles.
    Generic,
}

/// A factor of a witness product: a cocycle of `C^degree(X; bundle)`, or for
/// the first two factors of a family witness a cocycle over `Lambda` of
/// `tau^{+-xi} (x) bundle`.
#[derive(Clone, Debug, PartialEq)]
pub enum FactorCochain<E> {
    Constant(Vec<E>),
    Family(Vec<LaurentPoly<E>>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct WitnessFactor<E> {
    pub degree: usize,
    pub bundle: String,
    pub cochain: FactorCochain<E>,
}

/// A certified lower bound `m` for the cup-length of `xi`, with a product of
/// `m` classes that does not vanish.
#[derive(Clone, Debug, PartialEq)]
pub struct CupLengthReport<E> {
    pub mode: CupMode,
    pub m: usize,
    /// `max(m - 1, 0)`, a lower bound for the number of critical points.
    pub critical_bound: usize,
    pub witness: Vec<WitnessFactor<E>>,
    /// The witness is a family in the parameter `a`, nonzero away from
    /// `excluded` and the roots of `unsplit`.
    pub family: bool,
    pub excluded: Vec<E>,
    pub unsplit: Vec<Poly<E>>,
}

impl<E> CupLengthReport<E> {
    fn empty(mode: CupMode) -> Self {
        CupLengthReport {
            mode,
            m: 0,
            critical_bound: 0,
            witness: Vec::new(),
            family: false,
            excluded: Vec::new(),
            unsplit: Vec::new(),
        }
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.witness.iter().map(|w| w.degree).collect()
    }
}

/// A nonzero class in a span of products, with the factors of one product
/// (indices into a pool) that it comes from.
#[derive(Clone, Debug)]
struct Class<E> {
    degree: usize,
    cocycle: Vec<E>,
    chain: Vec<usize>,
}

struct Branch<F: Field> {
    bundle: FlatBundle<F>,
    classes: Vec<Class<F::Elem>>,
}

/// Insert cocycles into `H^q`, keeping those independent of the earlier ones.
struct ClassFilter<F: Field> {
    complex: TwistedComplex<F>,
    spans: BTreeMap<usize, TaggedBasis<F>>,
}

impl<F: Field> ClassFilter<F> {
    fn new(k: &F, x: &SimplicialComplex, bundle: &FlatBundle<F>) -> Self {
        ClassFilter { complex: twisted_complex_over_field(k, x, bundle), spans: BTreeMap::new() }
    }

    fn admit(&mut self, q: usize, c: &[F::Elem]) -> bool {
        let complex = &self.complex;
        let span = self.spans.entry(q).or_insert_with(|| {
            let k = complex.ring();
            let mut tb = TaggedBasis::new(k.clone(), complex.dims()[q], 0);
            if let Some(inc) = complex.incoming(q) {
                for col in inc.columns(k) {
                    tb.insert_untagged(&col);
                }
            }
            tb
        });
        span.insert_untagged(c)
    }
}

/// Positive-degree cohomology bases of the bundles, registered in the pool.
fn positive_classes<F: Field>(
    k: &F,
    x: &SimplicialComplex,
    bundles: &[(String, FlatBundle<F>)],
    pool: &mut Vec<WitnessFactor<F::Elem>>,
) -> Vec<Vec<(usize, usize)>> {
    bundles
        .iter()
        .map(|(name, b)| {
            let c = twisted_complex_over_field(k, x, b);
            let mut out = Vec::new();
            for h in 1..=x.dim() {
                for rep in CohomologyBasis::new(&c, h).reps() {
                    pool.push(WitnessFactor {
                        degree: h,
                        bundle: name.clone(),
                        cochain: FactorCochain::Constant(rep.clone()),
                    });
                    out.push((h, pool.len() - 1));
                }
            }
            out
        })
        .collect()
}

/// Multiply a span of classes by positive-degree classes of the bundles as
/// long as some product survives. Returns the number of extra factors and a
/// class reached at that depth.
fn extend<F: Field>(
    k: &F,
    x: &SimplicialComplex,
    start: Branch<F>,
    bundles: &[(String, FlatBundle<F>)],
    pool: &mut Vec<WitnessFactor<F::Elem>>,
) -> Result<(usize, Class<F::Elem>), Error> {
    let hs = positive_classes(k, x, bundles, pool);
    let mut deepest = start.classes[0].clone();
    let mut level = vec![start];
    let mut depth = 0;
    loop {
        let mut next = Vec::new();
        for branch in &level {
            for ((_, e), basis) in bundles.iter().zip(&hs) {
                let bundle = branch.bundle.tensor(k, e);
                let mut filter = ClassFilter::new(k, x, &bundle);
                let mut classes = Vec::new();
                for w in &branch.classes {
                    for &(h, idx) in basis {
                        if w.degree + h > x.dim() {
                            continue;
                        }
                        let FactorCochain::Constant(b) = &pool[idx].cochain else { unreachable!() };
                        let c = cup(k, x, &branch.bundle, w.degree, &w.cocycle, e, h, b)?;
                        if filter.admit(w.degree + h, &c) {
                            let mut chain = w.chain.clone();
                            chain.push(idx);
                            classes.push(Class { degree: w.degree + h, cocycle: c, chain });
                        }
                    }
                }
                if !classes.is_empty() {
                    next.push(Branch { bundle, classes });
                }
            }
        }
        if next.is_empty() {
            return Ok((depth, deepest));
        }
        depth += 1;
        deepest = next[0].classes[0].clone();
        level = next;
    }
}

/// Outcome of recomputing a witness product from its factors.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessCheck<E> {
    pub nonzero: bool,
    pub excluded: Vec<E>,
    pub unsplit: Vec<Poly<E>>,
}

fn lookup<'b, F: Field>(bundles: &'b [(String, FlatBundle<F>)], name: &str) -> Result<&'b FlatBundle<F>, Error> {
    bundles
        .iter()
        .find(|(n, _)| n == name)
        .map(|(_, b)| b)
        .ok_or_else(|| Error::Invalid(format!("unknown bundle {name}")))
}

fn lambda_transport<F: Field>(
    lam: &LaurentRing<F>,
    z: &IntegralCocycle,
    sign: i64,
    f: &FlatBundle<F>,
) -> EdgeTransport<LaurentPoly<F::Elem>> {
    let mats = f
        .matrices()
        .iter()
        .zip(z.values())
        .map(|(m, &e)| map_dense(m, |c| lam.monomial(c.clone(), sign * e)))
        .collect();
    EdgeTransport::new(f.rank(), mats)
}

/// Recompute the product of the witness factors from raw cochains and decide
/// whether its class vanishes, by a rank test independent of the search.
/// Family factors are multiplied over `Lambda`; the product is then nonzero
/// for every `a` outside `excluded` and the roots of `unsplit`.
pub fn verify_witness<F: Field>(
    k: &F,
    x: &SimplicialComplex,
    z: &IntegralCocycle,
    witness: &[WitnessFactor<F::Elem>],
    bundles: &[(String, FlatBundle<F>)],
) -> Result<WitnessCheck<F::Elem>, Error> {
    let Some(first) = witness.first() else {
        return Err(Error::Invalid("empty witness".into()));
    };
    let mut bundle = lookup(bundles, &first.bundle)?.clone();
    let mut degree = first.degree;
    match &first.cochain {
        FactorCochain::Constant(c0) => {
            let mut acc = c0.clone();
            for w in &witness[1..] {
                let FactorCochain::Constant(c) = &w.cochain else {
                    return Err(Error::Invalid("family factor after a constant one".into()));
                };
                let e = lookup(bundles, &w.bundle)?;
                acc = cup(k, x, &bundle, degree, &acc, e, w.degree, c)?;
                bundle = bundle.tensor(k, e);
                degree += w.degree;
            }
            let complex = twisted_complex_over_field(k, x, &bundle);
            if degree > x.dim() || !complex.delta(degree).mul_vec(k, &acc).iter().all(|a| k.is_zero(a)) {
                return Err(Error::Invariant("witness product is not a cocycle".into()));
            }
            let nonzero = !is_coboundary(&complex, degree, &acc);
            Ok(WitnessCheck { nonzero, excluded: Vec::new(), unsplit: Vec::new() })
        }
        FactorCochain::Family(c0) => {
            let lam = LaurentRing::new(k.clone());
            let mut acc = c0.clone();
            for (i, w) in witness[1..].iter().enumerate() {
                let e = lookup(bundles, &w.bundle)?;
                let (c, sign) = match (&w.cochain, i) {
                    (FactorCochain::Family(c), 0) => (c.clone(), -1),
                    (FactorCochain::Constant(c), i) if i > 0 => {
                        (c.iter().map(|a| lam.monomial(a.clone(), 0)).collect(), 0)
                    }
                    _ => return Err(Error::Invalid("family witnesses start with two family factors".into())),
                };
                acc = cup_cochains(&lam, x, bundle.rank(), degree, &acc, &lambda_transport(&lam, z, sign, e), w.degree, &c)?;
                bundle = bundle.tensor(k, e);
                degree += w.degree;
            }
            if degree > x.dim() {
                return Err(Error::Invariant("witness product is not a cocycle".into()));
            }
            let complex = twisted_complex_over_field(k, x, &bundle);
            let basis = CohomologyBasis::new(&complex, degree);
            let lo = acc.iter().filter(|a| !a.is_zero()).map(|a| a.valuation()).min().unwrap_or(0);
            let mut coords: Vec<Vec<F::Elem>> = vec![Vec::new(); basis.dim()];
            let mut nonzero = false;
            for cj in laurent_coefficients(k, &acc) {
                let t = basis
                    .coordinates(&cj)
                    .ok_or_else(|| Error::Invariant("witness product is not a cocycle".into()))?;
                nonzero |= !is_coboundary(&complex, degree, &cj);
                for (slot, c) in coords.iter_mut().zip(t) {
                    slot.push(c);
                }
            }
            let mut g = lam.zero();
            for c in coords {
                g = lam.gcd(&g, &lam.from_parts(lo, c));
            }
            if !nonzero {
                return Ok(WitnessCheck { nonzero, excluded: Vec::new(), unsplit: Vec::new() });
            }
            let pr = PolyRing::new(k.clone());
            let g = lam.to_poly(&lam.from_parts(0, g.coeffs().to_vec())).unwrap();
            let (excluded, rest) = match pr.roots(&g) {
                Some(roots) => {
                    let mut rest = g.clone();
                    for (a, m) in &roots {
                        for _ in 0..*m {
                            rest = pr.div_exact(&rest, &pr.linear(a)).unwrap();
                        }
                    }
                    (roots.into_iter().map(|(a, _)| a).collect(), rest)
                }
                None => (Vec::new(), g),
            };
            let unsplit = if pr.is_unit(&rest) { Vec::new() } else { vec![rest] };
            Ok(WitnessCheck { nonzero, excluded, unsplit })
        }
    }
}

fn finish<F: Field>(
    k: &F,
    x: &SimplicialComplex,
    z: &IntegralCocycle,
    mode: CupMode,
    depth: usize,
    deepest: &Class<F::Elem>,
    pool: &[WitnessFactor<F::Elem>],
    bundles: &[(String, FlatBundle<F>)],
) -> Result<CupLengthReport<F::Elem>, Error> {
    let m = 2 + depth;
    if !z.is_exact(x) && m > x.dim() {
        return Err(Error::Invariant(format!("cup-length {m} exceeds the dimension {}", x.dim())));
    }
    let witness: Vec<WitnessFactor<F::Elem>> = deepest.chain.iter().map(|&i| pool[i].clone()).collect();
    let check = verify_witness(k, x, z, &witness, bundles)?;
    if !check.nonzero {
        return Err(Error::Invariant("witness product vanishes on recomputation".into()));
    }
    let family = matches!(witness[0].cochain, FactorCochain::Family(_));
    Ok(CupLengthReport {
        mode,
        m,
        critical_bound: m - 1,
        witness,
        family,
        excluded: check.excluded,
        unsplit: check.unsplit,
    })
}

/// The trivial line bundle `k` followed by the extra bundles.
fn with_trivial<F: Field>(k: &F, x: &SimplicialComplex, extra: &[(String, FlatBundle<F>)]) -> Vec<(String, FlatBundle<F>)> {
    let mut all = vec![("k".to_string(), FlatBundle::trivial(k, x, 1))];
    all.extend(extra.iter().cloned());
    all
}

/// Products `a cup b` over pairs of factors in complementary degrees, kept
/// when independent in `H^*(X; bundle)`.
fn pair_classes<F: Field>(
    k: &F,
    x: &SimplicialComplex,
    (b1, first): (&FlatBundle<F>, &[(usize, usize)]),
    (b2, second): (&FlatBundle<F>, &[(usize, usize)]),
    pool: &[WitnessFactor<F::Elem>],
) -> Result<Branch<F>, Error> {
    let bundle = b1.tensor(k, b2);
    let mut filter = ClassFilter::new(k, x, &bundle);
    let mut classes = Vec::new();
    for &(p, i) in first {
        for &(q, j) in second {
            if p + q > x.dim() {
                continue;
            }
            let (FactorCochain::Constant(u), FactorCochain::Constant(v)) = (&pool[i].cochain, &pool[j].cochain) else {
                unreachable!()
            };
            let c = cup(k, x, b1, p, u, b2, q, v)?;
            if filter.admit(p + q, &c) {
                classes.push(Class { degree: p + q, cocycle: c, chain: vec![i, j] });
            }
        }
    }
    Ok(Branch { bundle, classes })
}

/// Cup-length bound with survivors as the first two factors. With `strict`
/// the second factor is a survivor of `-xi`.
pub fn cuplength_massey<F: Field>(
    k: &F,
    x: &SimplicialComplex,
    z: &IntegralCocycle,
    extra: &[(String, FlatBundle<F>)],
    strict: bool,
) -> Result<CupLengthReport<F::Elem>, Error> {
    let bundles = with_trivial(k, x, extra);
    let trivial = &bundles[0].1;
    let mut pool = Vec::new();
    let register = |z: &IntegralCocycle, pool: &mut Vec<WitnessFactor<F::Elem>>| -> Result<Vec<(usize, usize)>, Error> {
        let an = analyze(k, x, z, trivial)?;
        let mut out = Vec::new();
        for q in 0..=x.dim() {
            for rep in an.survivors(q).reps {
                pool.push(WitnessFactor { degree: q, bundle: "k".into(), cochain: FactorCochain::Constant(rep) });
                out.push((q, pool.len() - 1));
            }
        }
        Ok(out)
    };
    let first = register(z, &mut pool)?;
    let second = if strict { register(&z.neg(), &mut pool)? } else { first.clone() };
    let start = pair_classes(k, x, (trivial, &first), (trivial, &second), &pool)?;
    if start.classes.is_empty() {
        return Ok(CupLengthReport::empty(CupMode::Massey));
    }
    let (depth, deepest) = extend(k, x, start, &bundles, &mut pool)?;
    finish(k, x, z, CupMode::Massey, depth, &deepest, &pool, &bundles)
}

fn probe_points<F: Field>(k: &F) -> Vec<F::Elem> {
    match k.order() {
        Some(q) => (1..q.min(64)).filter_map(|i| k.element(i)).collect(),
        None => (2..34).flat_map(|i| [k.from_int(i), k.from_int(-i)]).collect(),
    }
}

/// `Lambda`-cocycles of `tau^{sign z} (x) f` whose values at `a` form a
/// basis of `H^q(X; a^{sign z} (x) f)`, for every degree.
fn family_generators<F: Field>(
    k: &F,
    x: &SimplicialComplex,
    z: &IntegralCocycle,
    f: &FlatBundle<F>,
    a: &F::Elem,
) -> Result<Vec<Vec<Vec<LaurentPoly<F::Elem>>>>, Error> {
    let c = lambda_twisted_complex(k, x, z, f);
    let lam = c.ring().clone();
    let at = twisted_complex_over_field(k, x, &f.twisted_by(k, x, z, a)?);
    let mut out = Vec::new();
    for q in 0..=x.dim() {
        let mut filter = ClassFilter { complex: at.clone(), spans: BTreeMap::new() };
        let gens = kernel(&lam, c.delta(q))
            .into_iter()
            .filter(|g| {
                let v: Vec<F::Elem> = g.iter().map(|e| lam.eval(e, a)).collect();
                filter.admit(q, &v)
            })
            .collect();
        out.push(gens);
    }
    Ok(out)
}

/// Cup-length bound whose first two factors come from the bundles `e1`,
/// `e2`, which must be generic for `xi`. Two searches are run: classes of
/// `H^*(X; e1)`, `H^*(X; e2)` themselves, and classes of the families
/// `a^xi (x) e1`, `a^-xi (x) e2` multiplied over `Lambda`, whose products hold
/// for all but finitely many `a`. The longer product is reported.
pub fn cuplength_generic<F: Field>(
    k: &F,
    x: &SimplicialComplex,
    z: &IntegralCocycle,
    e1: (&str, &FlatBundle<F>),
    e2: (&str, &FlatBundle<F>),
    extra: &[(String, FlatBundle<F>)],
) -> Result<CupLengthReport<F::Elem>, Error> {
    for (name, e) in [e1, e2] {
        let t = xi_generic_test(k, x, z, e)?;
        if let Some((q, f)) = t.witness {
            let pr = PolyRing::new(k.clone());
            return Err(Error::Domain(format!(
                "bundle {name} is not generic: torsion factor {} of H^{q} vanishes at 1",
                pr.show(&f)
            )));
        }
    }
    let mut bundles = with_trivial(k, x, extra);
    for (name, e) in [e1, e2] {
        if !bundles.iter().any(|(n, _)| n == name) {
            bundles.push((name.to_string(), e.clone()));
        }
    }
    let mut pool = Vec::new();
    let direct = |name: &str, e: &FlatBundle<F>, pool: &mut Vec<WitnessFactor<F::Elem>>| {
        let c = twisted_complex_over_field(k, x, e);
        let mut out = Vec::new();
        for q in 0..=x.dim() {
            for rep in CohomologyBasis::new(&c, q).reps() {
                pool.push(WitnessFactor { degree: q, bundle: name.into(), cochain: FactorCochain::Constant(rep.clone()) });
                out.push((q, pool.len() - 1));
            }
        }
        out
    };
    let first = direct(e1.0, e1.1, &mut pool);
    let second = direct(e2.0, e2.1, &mut pool);
    let start = pair_classes(k, x, (e1.1, &first), (e2.1, &second), &pool)?;
    let mut best = if start.classes.is_empty() { None } else { Some(extend(k, x, start, &bundles, &mut pool)?) };
    if let Some(start) = family_start(k, x, z, e1, e2, &mut pool)? {
        let (depth, deepest) = extend(k, x, start, &bundles, &mut pool)?;
        if best.as_ref().is_none_or(|(d, _)| depth >= *d) {
            best = Some((depth, deepest));
        }
    }
    match best {
        None => Ok(CupLengthReport::empty(CupMode::Generic)),
        Some((depth, deepest)) => finish(k, x, z, CupMode::Generic, depth, &deepest, &pool, &bundles),
    }
}

/// Coefficients of the products of family generators, as classes of
/// `H^*(X; e1 (x) e2)`. `None` if no parameter is generic for both families.
fn family_start<F: Field>(
    k: &F,
    x: &SimplicialComplex,
    z: &IntegralCocycle,
    e1: (&str, &FlatBundle<F>),
    e2: (&str, &FlatBundle<F>),
    pool: &mut Vec<WitnessFactor<F::Elem>>,
) -> Result<Option<Branch<F>>, Error> {
    let lam = LaurentRing::new(k.clone());
    let zm = z.neg();
    let free = |z: &IntegralCocycle, e: &FlatBundle<F>| -> Result<Vec<usize>, Error> {
        Ok(cohomology_modules(&lambda_twisted_complex(k, x, z, e))?.iter().map(|m| m.free_rank).collect())
    };
    let (b1, b2) = (free(z, e1.1)?, free(&zm, e2.1)?);
    let generic_at = |a: &F::Elem| -> Result<bool, Error> {
        let d1 = cohomology_dims(&twisted_complex_over_field(k, x, &e1.1.twisted_by(k, x, z, a)?));
        let d2 = cohomology_dims(&twisted_complex_over_field(k, x, &e2.1.twisted_by(k, x, &zm, a)?));
        Ok(d1 == b1 && d2 == b2)
    };
    let mut point = None;
    for a in probe_points(k) {
        if generic_at(&a)? {
            point = Some(a);
            break;
        }
    }
    let Some(a) = point else { return Ok(None) };
    let g1 = family_generators(k, x, z, e1.1, &a)?;
    let g2 = family_generators(k, x, &zm, e2.1, &a)?;
    let mut register = |gens: Vec<Vec<Vec<LaurentPoly<F::Elem>>>>, name: &str| -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (q, gs) in gens.into_iter().enumerate() {
            for g in gs {
                pool.push(WitnessFactor { degree: q, bundle: name.into(), cochain: FactorCochain::Family(g) });
                out.push((q, pool.len() - 1));
            }
        }
        out
    };
    let first = register(g1, e1.0);
    let second = register(g2, e2.0);
    let bundle = e1.1.tensor(k, e2.1);
    let t2 = lambda_transport(&lam, &zm, 1, e2.1);
    let mut filter = ClassFilter::new(k, x, &bundle);
    let mut classes = Vec::new();
    for &(p, i) in &first {
        for &(q, j) in &second {
            if p + q > x.dim() {
                continue;
            }
            let (FactorCochain::Family(u), FactorCochain::Family(v)) = (&pool[i].cochain, &pool[j].cochain) else {
                unreachable!()
            };
            let prod = cup_cochains(&lam, x, e1.1.rank(), p, u, &t2, q, v)?;
            for c in laurent_coefficients(k, &prod) {
                if filter.admit(p + q, &c) {
                    classes.push(Class { degree: p + q, cocycle: c, chain: vec![i, j] });
                }
            }
        }
    }
    Ok((!classes.is_empty()).then_some(Branch { bundle, classes }))
}

/// `c = sum_j tau^j c_j`, listed from the lowest power.
fn laurent_coefficients<F: Field>(k: &F, c: &[LaurentPoly<F::Elem>]) -> Vec<Vec<F::Elem>> {
    let nz = || c.iter().filter(|a| !a.is_zero());
    let Some(lo) = nz().map(|a| a.valuation()).min() else {
        return Vec::new();
    };
    let hi = nz().map(|a| a.valuation() + a.coeffs().len() as i64).max().unwrap();
    (lo..hi)
        .map(|j| {
            c.iter()
                .map(|a| {
                    usize::try_from(j - a.valuation())
                        .ok()
                        .and_then(|i| a.coeffs().get(i).cloned())
                        .unwrap_or_else(|| k.zero())
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{FiniteField, Rationals};
    use crate::corpus;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_cochain<F: Field>(k: &F, rng: &mut ChaCha8Rng, n: usize) -> Vec<F::Elem> {
        (0..n).map(|_| k.from_int(rng.gen_range(-3..=3))).collect()
    }

    fn leibniz_holds<F: Field>(k: &F, name: &str, t: i64, pairs: usize) {
        let s = corpus::build(name).unwrap();
        let cut = s.cut_presentation(k).unwrap();
        let psi = PsiProduct::new(k, &cut, &k.from_int(t)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let dims = psi.d0.dims().to_vec();
        for _ in 0..pairs {
            let q = rng.gen_range(0..dims.len());
            let q2 = rng.gen_range(0..dims.len());
            let c = random_cochain(k, &mut rng, dims[q]);
            let c2 = random_cochain(k, &mut rng, dims[q2]);
            let (l, r) = psi.leibniz_sides(q, &c, q2, &c2).unwrap();
            assert_eq!(l, r, "{name}: degrees {q}, {q2}");
        }
    }

    #[test]
    fn leibniz_rule_on_cuts() {
        let f5 = FiniteField::prime(5).unwrap();
        for name in ["circle", "torus2", "surface2"] {
            leibniz_holds(&f5, name, 2, 30);
            leibniz_holds(&Rationals, name, 3, 30);
        }
    }

    fn massey_m<F: Field>(k: &F, name: &str, xi: &str, extra: &[&str]) -> CupLengthReport<F::Elem> {
        let s = corpus::build(name).unwrap().with_xi(xi).unwrap();
        let extra: Vec<_> = extra.iter().map(|e| (e.to_string(), s.bundle(k, e).unwrap())).collect();
        cuplength_massey(k, &s.x, &s.xi, &extra, false).unwrap()
    }

    #[test]
    fn massey_bounds_on_the_corpus() {
        let q = Rationals;
        let r = massey_m(&q, "circle", "xi", &[]);
        assert_eq!((r.m, r.critical_bound), (0, 0));
        let r = massey_m(&q, "surface2", "xi", &[]);
        assert_eq!((r.m, r.critical_bound), (2, 1));
        assert_eq!(r.degrees(), [1, 1]);
        let r = massey_m(&q, "torus2", "0", &[]);
        assert_eq!((r.m, r.critical_bound), (4, 3));
        let r = massey_m(&q, "s1_x_surface2", "xi", &[]);
        assert_eq!(r.critical_bound, 0);
        let f4 = FiniteField::new(2, 2).unwrap();
        let r = massey_m(&f4, "rp3_handle", "xi", &["E"]);
        assert_eq!((r.m, r.critical_bound), (3, 2));
    }

    fn generic_m<F: Field>(k: &F, name: &str, e: &FlatBundle<F>, e2: &FlatBundle<F>) -> Result<CupLengthReport<F::Elem>, Error> {
        let s = corpus::build(name).unwrap();
        cuplength_generic(k, &s.x, &s.xi, ("E1", e), ("E2", e2), &[])
    }

    #[test]
    fn generic_bounds_agree_with_survivors() {
        let q = Rationals;
        for (name, m) in [("surface2", 2), ("surface2_x_s1", 3)] {
            let s = corpus::build(name).unwrap();
            // a^xi against a^-xi, so that the product lands in H^*(X; k)
            let e = FlatBundle::twist(&q, &s.x, &s.xi, &q.from_int(2)).unwrap();
            let e2 = FlatBundle::twist(&q, &s.x, &s.xi.neg(), &q.from_int(2)).unwrap();
            let r = generic_m(&q, name, &e, &e2).unwrap();
            assert_eq!(r.m, m, "{name}");
            assert!(r.family);
            assert_eq!(massey_m(&q, name, "xi", &[]).m, m, "{name}");
        }
        let s = corpus::build("surface2").unwrap();
        let triv = FlatBundle::trivial(&q, &s.x, 1);
        let err = generic_m(&q, "surface2", &triv, &triv).unwrap_err();
        assert!(matches!(err, Error::Domain(ref msg) if msg.contains("H^")), "{err}");
    }

    #[test]
    fn projective_handle_generic() {
        let f4 = FiniteField::new(2, 2).unwrap();
        let s = corpus::build("rp3_handle").unwrap();
        let e = s.bundle(&f4, "E").unwrap();
        let r = generic_m(&f4, "rp3_handle", &e, &e).unwrap();
        assert_eq!((r.m, r.critical_bound), (3, 2));
        assert_eq!(r.degrees(), [1, 1, 1]);
    }
}
