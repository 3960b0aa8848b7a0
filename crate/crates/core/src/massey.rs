//! The deformation spectral sequence centered at `tau = 1` (`t = tau - 1`):
//! pages and differential ranks from the module decomposition, an
//! independent chain-level computation of the differentials `d_r`, survivor
//! classes with truncated lifts, and the support criterion for a cut.

use crate::algebra::{Field, LaurentRing, PolyRing, Ring};
use crate::complexes::{lambda_twisted_complex, CutPresentation, FlatBundle, IntegralCocycle, SimplicialComplex, TwistedComplex};
use crate::linalg::{kernel, span_dim, SparseMatrix, TaggedBasis};
use crate::pidmod::{cohomology_modules, multiplicities_at, ModuleDecomposition};
use crate::Error;

/// Page `E_r`: dimension of `E_r^i` and rank of `d_r: E_r^i -> E_r^{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralPage {
    pub r: usize,
    pub dims: Vec<usize>,
    pub ranks: Vec<usize>,
    /// No differential on this page or any later one is nonzero.
    pub stable: bool,
}

/// Multiplicities of `tau - 1` in the invariant factors of every degree.
fn multiplicities<F: Field>(k: &F, modules: &[ModuleDecomposition<F::Elem>]) -> Vec<Vec<usize>> {
    modules.iter().map(|m| multiplicities_at(k, m, &k.one())).collect()
}

/// `1 +` the largest multiplicity of `tau - 1`: the first page that is
/// already `E_infinity`.
pub fn stabilization_page<F: Field>(k: &F, modules: &[ModuleDecomposition<F::Elem>]) -> usize {
    1 + multiplicities(k, modules).iter().flatten().copied().max().unwrap_or(0)
}

/// Pages `E_1 .. E_R` with `R` the stabilization page (or `max_page`).
pub fn spectral_pages_from_modules<F: Field>(
    k: &F,
    modules: &[ModuleDecomposition<F::Elem>],
    max_page: Option<usize>,
) -> Vec<SpectralPage> {
    let mult = multiplicities(k, modules);
    let top = modules.len();
    let last = stabilization_page(k, modules);
    let count = |q: usize, pred: &dyn Fn(usize) -> bool| mult.get(q).map_or(0, |m| m.iter().filter(|&&e| pred(e)).count());
    (1..=max_page.map_or(last, |m| m.min(last)))
        .map(|r| SpectralPage {
            r,
            dims: (0..top)
                .map(|i| modules[i].free_rank + count(i, &|e| e >= r) + count(i + 1, &|e| e >= r))
                .collect(),
            ranks: (0..top).map(|i| count(i + 1, &|e| e == r)).collect(),
            stable: r == last,
        })
        .collect()
}

/// Pages for `H^*(X; tau^z (x) F)`.
pub fn spectral_pages<F: Field>(
    k: &F,
    x: &SimplicialComplex,
    z: &IntegralCocycle,
    f: &FlatBundle<F>,
    max_page: Option<usize>,
) -> Result<Vec<SpectralPage>, Error> {
    let modules = cohomology_modules(&lambda_twisted_complex(k, x, z, f))?;
    Ok(spectral_pages_from_modules(k, &modules, max_page))
}

/// Generalized binomial coefficients `C(e, l)` in `k` for `e` in
/// `emin..=emax`, `l < order`.
struct Binomials<E> {
    emin: i64,
    rows: Vec<Vec<E>>,
}

impl<E: Clone> Binomials<E> {
    fn new<F: Field<Elem = E>>(k: &F, emin: i64, emax: i64, order: usize) -> Self {
        let n = (emax.max(0) as usize).max(order + emin.unsigned_abs() as usize) + 1;
        // Pascal's triangle up to row n, computed in the field
        let mut pascal: Vec<Vec<E>> = vec![vec![k.one()]];
        for i in 1..=n {
            let prev = &pascal[i - 1];
            let row: Vec<E> = (0..=i)
                .map(|j| {
                    let a = if j < i { prev[j].clone() } else { k.zero() };
                    let b = if j > 0 { prev[j - 1].clone() } else { k.zero() };
                    k.add(&a, &b)
                })
                .collect();
            pascal.push(row);
        }
        let choose = |a: usize, b: usize| if b <= a { pascal[a][b].clone() } else { k.zero() };
        let rows = (emin..=emax)
            .map(|e| {
                (0..order)
                    .map(|l| {
                        if e >= 0 {
                            choose(e as usize, l)
                        } else {
                            // C(e, l) = (-1)^l C(l - e - 1, l)
                            let c = choose(l + e.unsigned_abs() as usize - 1, l);
                            if l % 2 == 0 {
                                c
                            } else {
                                k.neg(&c)
                            }
                        }
                    })
                    .collect()
            })
            .collect();
        Binomials { emin, rows }
    }

    fn get(&self, e: i64, l: usize) -> &E {
        &self.rows[(e - self.emin) as usize][l]
    }
}

/// The family `delta(1 + t) = sum_l delta_l t^l` of a complex over `Lambda`
/// or `k[tau]`, truncated after `t^{order-1}`.
#[derive(Clone, Debug)]
pub struct Expansion<F: Field> {
    k: F,
    dims: Vec<usize>,
    /// `coeffs[q][l]` is `delta_l` in degree `q`.
    coeffs: Vec<Vec<SparseMatrix<F::Elem>>>,
}

/// Result of the chain-level computation of `d_r(v)`.
#[derive(Clone, Debug, PartialEq)]
pub enum DrOutcome<E> {
    /// `v` does not survive to `E_step`: the lifting equations have no
    /// solution beyond order `step - 1`.
    Obstructed { step: usize },
    /// `v` lifts to `y_0 + y_1 t + ... + y_{r-1} t^{r-1}` and
    /// `d_r(v)` is represented by `image`, zero in `E_r` iff `vanishes`.
    Value { lift: Vec<Vec<E>>, image: Vec<E>, vanishes: bool },
}

/// Representatives of the survivor subspace of `H^q(X; k)`, each with a
/// lift solving the deformation equations modulo `t^order`.
#[derive(Clone, Debug, PartialEq)]
pub struct SurvivorBasis<E> {
    pub degree: usize,
    pub order: usize,
    pub reps: Vec<Vec<E>>,
    pub lifts: Vec<Vec<Vec<E>>>,
}

impl<E> SurvivorBasis<E> {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }
}

impl<F: Field> Expansion<F> {
    /// `entry(q)` lists the triplets of `delta_l` in degree `q` for each `l`.
    fn assemble(k: &F, dims: Vec<usize>, entry: impl Fn(usize) -> Vec<Vec<(usize, usize, F::Elem)>>) -> Self {
        let coeffs = (0..dims.len())
            .map(|q| {
                let rows = dims.get(q + 1).copied().unwrap_or(0);
                entry(q).into_iter().map(|trip| SparseMatrix::from_triplets(k, rows, dims[q], trip)).collect()
            })
            .collect();
        Expansion { k: k.clone(), dims, coeffs }
    }

    pub fn from_lambda(c: &TwistedComplex<LaurentRing<F>>, order: usize) -> Self {
        let lam = c.ring();
        let k = lam.base().clone();
        let (mut emin, mut emax) = (0i64, 0i64);
        for q in 0..c.dims().len() {
            for (_, _, f) in c.delta(q).entries() {
                emin = emin.min(f.valuation());
                emax = emax.max(f.valuation() + f.coeffs().len() as i64);
            }
        }
        let binom = Binomials::new(&k, emin, emax, order);
        Self::assemble(&k, c.dims().to_vec(), |q| {
            let mut out = vec![Vec::new(); order];
            for (i, j, f) in c.delta(q).entries() {
                for (l, slot) in out.iter_mut().enumerate() {
                    let mut acc = k.zero();
                    for (d, cf) in f.coeffs().iter().enumerate() {
                        k.mul_add_assign(&mut acc, cf, binom.get(f.valuation() + d as i64, l));
                    }
                    if !k.is_zero(&acc) {
                        slot.push((i, j, acc));
                    }
                }
            }
            out
        })
    }

    pub fn from_poly(c: &TwistedComplex<PolyRing<F>>, order: usize) -> Self {
        let pr = c.ring();
        let k = pr.base().clone();
        let one = k.one();
        Self::assemble(&k, c.dims().to_vec(), |q| {
            let mut out = vec![Vec::new(); order];
            for (i, j, f) in c.delta(q).entries() {
                let g = pr.translate(f, &one);
                for (l, slot) in out.iter_mut().enumerate() {
                    let v = pr.coeff(&g, l);
                    if !k.is_zero(&v) {
                        slot.push((i, j, v));
                    }
                }
            }
            out
        })
    }

    pub fn field(&self) -> &F {
        &self.k
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn order(&self) -> usize {
        self.coeffs.first().map_or(0, Vec::len)
    }

    fn rows(&self, q: usize) -> usize {
        self.dims.get(q + 1).copied().unwrap_or(0)
    }

    /// Basis of `S_r^q`: tuples `(y_0, ..., y_{r-1})` in `C^q` with
    /// `sum_{a+b=l} delta_a y_b = 0` for `l < r`.
    fn solutions(&self, q: usize, r: usize) -> Vec<Vec<F::Elem>> {
        let (n, m) = (self.dims[q], self.rows(q));
        let mut trip = Vec::new();
        for l in 0..r {
            for b in 0..=l {
                for (i, j, v) in self.coeffs[q][l - b].entries() {
                    trip.push((l * m + i, b * n + j, v.clone()));
                }
            }
        }
        kernel(&self.k, &SparseMatrix::from_triplets(&self.k, r * m, r * n, trip))
    }

    /// `sum_{b < r} delta_{r-b} y_b`, the obstruction at order `r`.
    fn coef(&self, q: usize, r: usize, y: &[F::Elem]) -> Vec<F::Elem> {
        let n = self.dims[q];
        let mut out = vec![self.k.zero(); self.rows(q)];
        for b in 0..r {
            let part = self.coeffs[q][r - b].mul_vec(&self.k, &y[b * n..(b + 1) * n]);
            for (o, p) in out.iter_mut().zip(part) {
                *o = self.k.add(o, &p);
            }
        }
        out
    }

    /// Coboundaries in `C^q` (empty past the top degree).
    fn boundaries(&self, q: usize) -> Vec<Vec<F::Elem>> {
        match q.checked_sub(1) {
            Some(p) if p < self.coeffs.len() => self.coeffs[p][0].columns(&self.k),
            _ => Vec::new(),
        }
    }
}

impl<F: Field> Expansion<F> {
    /// Pages `E_1 .. E_pages` computed from the lifting equations alone:
    /// `dim E_r^q = dim Z_r^q - dim B_r^q` and
    /// `rank d_r^q = dim B_{r+1}^{q+1} - dim B_r^{q+1}`, where `Z_r` are the
    /// leading terms of solutions mod `t^r` and `B_{r+1}^{q+1}` the order-`r`
    /// obstructions of those solutions. Needs `order > pages`.
    pub fn pages(&self, pages: usize) -> Vec<SpectralPage> {
        assert!(self.order() > pages, "expansion too short for {pages} pages");
        let k = &self.k;
        let top = self.dims.len();
        // b[q][r] = dim B_r^q, z[q][r] = dim Z_r^q
        let mut b = vec![vec![0usize; pages + 2]; top + 1];
        let mut z = vec![vec![0usize; pages + 1]; top];
        for q in 0..top {
            b[q][1] = span_dim(k, self.dims[q], &self.boundaries(q));
        }
        for q in 0..top {
            let n = self.dims[q];
            for r in 1..=pages {
                let s = self.solutions(q, r);
                let lead: Vec<Vec<F::Elem>> = s.iter().map(|y| y[..n].to_vec()).collect();
                z[q][r] = span_dim(k, n, &lead);
                // the free top coefficient contributes delta_0 y_r
                let mut obs = self.boundaries(q + 1);
                obs.extend(s.iter().map(|y| self.coef(q, r, y)));
                b[q + 1][r + 1] = span_dim(k, self.rows(q), &obs);
            }
        }
        let mut out: Vec<SpectralPage> = (1..=pages)
            .map(|r| SpectralPage {
                r,
                dims: (0..top).map(|q| z[q][r] - b[q][r]).collect(),
                ranks: (0..top).map(|q| b[q + 1][r + 1] - b[q + 1][r]).collect(),
                stable: false,
            })
            .collect();
        // stable from the last nonzero differential on
        let mut quiet = true;
        for p in out.iter_mut().rev() {
            quiet &= p.ranks.iter().all(|&x| x == 0);
            p.stable = quiet;
        }
        out
    }

    /// `d_r(v)` for a cocycle `v` of `C^q` at `t = 0`.
    pub fn dr(&self, q: usize, v: &[F::Elem], r: usize) -> Result<DrOutcome<F::Elem>, Error> {
        let k = &self.k;
        let n = self.dims[q];
        if v.len() != n {
            return Err(Error::Invalid(format!("cochain of length {} in degree {q} of dimension {n}", v.len())));
        }
        if r == 0 || self.order() <= r {
            return Err(Error::Invalid(format!("page {r} outside 1..{}", self.order())));
        }
        if !self.coeffs[q][0].mul_vec(k, v).iter().all(|x| k.is_zero(x)) {
            return Err(Error::Invalid("not a cocycle".into()));
        }
        let mut lift = None;
        for s in 1..=r {
            let sols = self.solutions(q, s);
            let mut tb = TaggedBasis::new(k.clone(), n, s * n);
            for y in &sols {
                tb.insert(&y[..n], y.clone());
            }
            match tb.coordinates(v) {
                Some(y) => lift = Some(y),
                None => return Ok(DrOutcome::Obstructed { step: s }),
            }
        }
        let y = lift.unwrap();
        let image = self.coef(q, r, &y);
        // B_r^{q+1}: obstructions at order r-1 of degree-q solutions
        let mut br = TaggedBasis::new(k.clone(), self.rows(q), 0);
        for c in self.coeffs[q][0].columns(k) {
            br.insert_untagged(&c);
        }
        if r > 1 {
            for s in self.solutions(q, r - 1) {
                br.insert_untagged(&self.coef(q, r - 1, &s));
            }
        }
        let vanishes = br.contains(&image);
        let lift = y.chunks(n.max(1)).take(r).map(<[F::Elem]>::to_vec).collect();
        Ok(DrOutcome::Value { lift, image, vanishes })
    }

    /// Leading terms of solutions modulo `t^order`, reduced to a basis of
    /// their classes in `H^q`.
    pub fn survivors(&self, q: usize, order: usize) -> SurvivorBasis<F::Elem> {
        let k = &self.k;
        let n = self.dims[q];
        let mut span = TaggedBasis::new(k.clone(), n, 0);
        for c in self.boundaries(q) {
            span.insert_untagged(&c);
        }
        let mut reps = Vec::new();
        let mut lifts = Vec::new();
        for y in self.solutions(q, order) {
            if span.insert_untagged(&y[..n]) {
                reps.push(y[..n].to_vec());
                lifts.push(y.chunks(n.max(1)).take(order).map(<[F::Elem]>::to_vec).collect());
            }
        }
        SurvivorBasis { degree: q, order, reps, lifts }
    }

    /// Do the lifts of `basis` solve the equations modulo `t^order`?
    pub fn check_lifts(&self, basis: &SurvivorBasis<F::Elem>) -> bool {
        let k = &self.k;
        let q = basis.degree;
        basis.lifts.iter().all(|lift| {
            (0..basis.order).all(|l| {
                let mut acc = vec![k.zero(); self.rows(q)];
                for (b, y) in lift.iter().enumerate().take(l + 1) {
                    for (o, p) in acc.iter_mut().zip(self.coeffs[q][l - b].mul_vec(k, y)) {
                        *o = k.add(o, &p);
                    }
                }
                acc.iter().all(|x| k.is_zero(x))
            })
        })
    }
}

/// The spectral sequence of `tau^z (x) F` at `tau = 1`: module data, pages,
/// and the expansion needed for chain-level work up to the stabilization
/// page.
#[derive(Clone, Debug)]
pub struct MasseyAnalysis<F: Field> {
    pub modules: Vec<ModuleDecomposition<F::Elem>>,
    pub pages: Vec<SpectralPage>,
    /// First page equal to `E_infinity`.
    pub stabilization: usize,
    pub expansion: Expansion<F>,
}

pub fn analyze<F: Field>(
    k: &F,
    x: &SimplicialComplex,
    z: &IntegralCocycle,
    f: &FlatBundle<F>,
) -> Result<MasseyAnalysis<F>, Error> {
    let c = lambda_twisted_complex(k, x, z, f);
    let modules = cohomology_modules(&c)?;
    let stabilization = stabilization_page(k, &modules);
    let pages = spectral_pages_from_modules(k, &modules, None);
    let expansion = Expansion::from_lambda(&c, stabilization + 1);
    Ok(MasseyAnalysis { modules, pages, stabilization, expansion })
}

impl<F: Field> MasseyAnalysis<F> {
    /// Classes of `H^q(X; F)` killed by every `d_r`.
    pub fn survivors(&self, q: usize) -> SurvivorBasis<F::Elem> {
        self.expansion.survivors(q, self.stabilization)
    }

    /// The same pages from the lifting equations.
    pub fn chain_pages(&self) -> Vec<SpectralPage> {
        self.expansion.pages(self.stabilization)
    }
}

/// `d_r(v)` for a cocycle `v` of `C^q(X; F)` from the `Lambda` model.
pub fn chain_level_dr<F: Field>(
    k: &F,
    x: &SimplicialComplex,
    z: &IntegralCocycle,
    f: &FlatBundle<F>,
    q: usize,
    v: &[F::Elem],
    r: usize,
) -> Result<DrOutcome<F::Elem>, Error> {
    Expansion::from_lambda(&lambda_twisted_complex(k, x, z, f), r + 1).dr(q, v, r)
}

/// The expansion of the deformation complex of a cut at `tau = 1`.
pub fn cut_expansion<F: Field>(k: &F, cut: &CutPresentation<F>, order: usize) -> Result<Expansion<F>, Error> {
    Ok(Expansion::from_poly(&cut.deformation_complex(k)?.complex, order))
}

/// Outcome of the support criterion.
#[derive(Clone, Debug, PartialEq)]
pub enum SupportVerdict<E> {
    /// The cochain pulled back to `N`, which with zero `V` part is a cocycle
    /// of the deformation complex for every `tau`.
    Certified { lift: Vec<E> },
    /// Simplices of the support meeting the cut locus.
    Inconclusive { touching: Vec<Vec<usize>> },
}

/// A cocycle of `C^q(X; F)` vanishing on every simplex that meets the cut
/// locus lifts to a cocycle of the deformation complex that is constant in
/// `tau`, hence its class survives. Anything else is inconclusive.
pub fn support_criterion<F: Field>(
    k: &F,
    x: &SimplicialComplex,
    z: &IntegralCocycle,
    cut: &CutPresentation<F>,
    q: usize,
    c: &[F::Elem],
) -> Result<SupportVerdict<F::Elem>, Error> {
    let glued = cut.glue(k)?;
    if glued.x != *x {
        return Err(Error::Invalid("cut does not glue to the complex".into()));
    }
    let diff = glued.z.add(&z.neg());
    let sum = glued.z.add(z);
    if !diff.tree_gauge(x).0.is_zero() && !sum.tree_gauge(x).0.is_zero() {
        return Err(Error::Invalid("cut is not dual to xi".into()));
    }
    let d = cut.rank();
    if c.len() != x.count(q) * d {
        return Err(Error::Invalid("cochain has the wrong length".into()));
    }
    let direct = crate::complexes::twisted_complex_over_field(k, x, &glued.bundle);
    if !direct.delta(q).mul_vec(k, c).iter().all(|v| k.is_zero(v)) {
        return Err(Error::Invalid("not a cocycle".into()));
    }
    let locus: std::collections::BTreeSet<usize> = cut.i_plus.iter().map(|&v| glued.p[v]).collect();
    let touching: Vec<Vec<usize>> = x
        .simplices(q)
        .iter()
        .enumerate()
        .filter(|(i, s)| s.iter().any(|v| locus.contains(v)) && c[i * d..(i + 1) * d].iter().any(|v| !k.is_zero(v)))
        .map(|(_, s)| s.clone())
        .collect();
    if !touching.is_empty() {
        return Ok(SupportVerdict::Inconclusive { touching });
    }
    let mut lift = vec![k.zero(); cut.n.count(q) * d];
    for (j, s) in cut.n.simplices(q).iter().enumerate() {
        let img: Vec<usize> = s.iter().map(|&v| glued.p[v]).collect();
        if img.iter().any(|v| locus.contains(v)) {
            continue;
        }
        let i = x.index_of(&img).ok_or_else(|| Error::Invariant("gluing is not order preserving off the cut".into()))?;
        lift[j * d..(j + 1) * d].clone_from_slice(&c[i * d..(i + 1) * d]);
    }
    let def = cut.deformation_complex(k)?;
    let pr = def.complex.ring().clone();
    let mut full: Vec<_> = lift.iter().map(|v| pr.constant(v.clone())).collect();
    full.resize(def.complex.dims()[q], pr.zero());
    if !def.complex.delta(q).mul_vec(&pr, &full).iter().all(|v| pr.is_zero(v)) {
        return Err(Error::Invariant("lift of a cocycle supported off the cut is not a cocycle".into()));
    }
    Ok(SupportVerdict::Certified { lift })
}
