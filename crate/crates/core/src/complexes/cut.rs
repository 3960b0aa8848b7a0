use std::collections::{BTreeMap, BTreeSet};

use super::{Diagnostic, EdgeTransport, FlatBundle, IntegralCocycle, SimplicialComplex, TwistedComplex};
use crate::algebra::{Field, PolyRing, Ring};
use crate::linalg::{inverse, kernel, map_dense, Matrix, SparseMatrix, TaggedBasis};
use crate::Error;

/// `X` cut open along `V`: a complex `N` with two copies `i_+(V)`, `i_-(V)`
/// of `V`, a flat bundle `F_0` on `N`, and fiber identifications
/// `sigma_v`: fiber of `F_0` at `i_+ v` -> fiber at `i_- v`.
#[derive(Clone, Debug)]
pub struct CutPresentation<F: Field> {
    pub n: SimplicialComplex,
    pub v: SimplicialComplex,
    pub i_plus: Vec<usize>,
    pub i_minus: Vec<usize>,
    pub sigma: Vec<Matrix<F::Elem>>,
    pub f0: FlatBundle<F>,
}

/// The complex `X` recovered by gluing `i_- v` to `i_+ v`, with the glued
/// bundle and the class `p_*(delta h)` where `h` is 1 on `i_-(V)` and 0
/// elsewhere.
#[derive(Clone, Debug)]
pub struct Gluing<F: Field> {
    pub x: SimplicialComplex,
    pub bundle: FlatBundle<F>,
    pub z: IntegralCocycle,
    /// Vertex map `N -> X`.
    pub p: Vec<usize>,
}

/// `C^q = C^q(N)[tau] (+) C^{q-1}(V)[tau]` with
/// `delta(alpha, beta) = (delta_N alpha, (sigma i_+^* - tau i_-^*) alpha - delta_V beta)`.
#[derive(Clone, Debug)]
pub struct DeformationComplex<F: Field> {
    pub complex: TwistedComplex<PolyRing<F>>,
    /// Size of the `C^q(N)` block in each degree (it comes first).
    pub n_dims: Vec<usize>,
}

impl<F: Field> DeformationComplex<F> {
    /// Substitute `tau = a`.
    pub fn evaluate(&self, a: &F::Elem) -> TwistedComplex<F> {
        let ring = self.complex.ring().clone();
        let k = ring.base().clone();
        self.complex.map(k, |f| ring.eval(f, a))
    }
}

impl<F: Field> CutPresentation<F> {
    pub fn rank(&self) -> usize {
        self.f0.rank()
    }

    fn image(&self, map: &[usize], s: &[usize]) -> Vec<usize> {
        s.iter().map(|&v| map[v]).collect()
    }

    /// Every way the presentation can be malformed.
    pub fn violations(&self, k: &F) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let nv = self.v.vertex_count();
        let bad = |msg: &str| Diagnostic::new("cut", Vec::new(), msg.to_string());
        if self.i_plus.len() != nv || self.i_minus.len() != nv || self.sigma.len() != nv {
            out.push(bad("i_+, i_- and sigma need one entry per vertex of V"));
            return out;
        }
        let nn = self.n.vertex_count();
        if self.i_plus.iter().chain(&self.i_minus).any(|&x| x >= nn) {
            out.push(bad("vertex map leaves N"));
            return out;
        }
        let plus: BTreeSet<usize> = self.i_plus.iter().copied().collect();
        let minus: BTreeSet<usize> = self.i_minus.iter().copied().collect();
        if plus.len() != nv || minus.len() != nv {
            out.push(bad("i_+ and i_- must be injective"));
        }
        if !plus.is_disjoint(&minus) {
            out.push(bad("i_+(V) and i_-(V) intersect"));
        }
        out.extend(self.f0.violations(k, &self.n));
        for (side, map, verts) in [("i_+", &self.i_plus, &plus), ("i_-", &self.i_minus, &minus)] {
            for q in 1..=self.v.dim() {
                for s in self.v.simplices(q) {
                    let img = self.image(map, s);
                    if img.windows(2).any(|w| w[0] > w[1]) {
                        out.push(Diagnostic::new("cut", s.clone(), format!("{side} does not preserve vertex order")));
                    } else if !self.n.contains(&img) {
                        out.push(Diagnostic::new("cut", s.clone(), format!("{side} image is not a simplex of N")));
                    }
                }
            }
            let inv: BTreeMap<usize, usize> = map.iter().enumerate().map(|(a, &b)| (b, a)).collect();
            let is_image = |t: &[usize]| {
                let pre: Vec<usize> = t.iter().map(|x| inv[x]).collect();
                pre.windows(2).all(|w| w[0] < w[1]) && self.v.contains(&pre)
            };
            for t in self.n.full_subcomplex_violations(verts, is_image) {
                out.push(Diagnostic::new("cut", t, format!("{side}(V) is not a full subcomplex")));
            }
        }
        if !out.is_empty() {
            return out;
        }
        let d = self.rank();
        for (v, s) in self.sigma.iter().enumerate() {
            if s.nrows() != d || s.ncols() != d || inverse(k, s).is_none() {
                out.push(Diagnostic::new("cut", vec![v], "sigma is not an invertible fiber map".into()));
            }
        }
        if !out.is_empty() {
            return out;
        }
        for e in self.v.simplices(1) {
            let (u, w) = (e[0], e[1]);
            let gp = self.f0.matrix(self.n.edge_index(self.i_plus[u], self.i_plus[w]).unwrap());
            let gm = self.f0.matrix(self.n.edge_index(self.i_minus[u], self.i_minus[w]).unwrap());
            if self.sigma[u].mul(k, gp) != gm.mul(k, &self.sigma[w]) {
                out.push(Diagnostic::new("cut", e.clone(), "sigma does not intertwine the transports".into()));
            }
        }
        out
    }

    pub fn validate(&self, k: &F) -> Result<(), Error> {
        match self.violations(k).first() {
            None => Ok(()),
            Some(d) => Err(Error::Invalid(format!("cut presentation: {d}"))),
        }
    }

    /// `F_0` pulled back along `i_-`.
    pub fn v_bundle(&self) -> FlatBundle<F> {
        let mats = self
            .v
            .simplices(1)
            .iter()
            .map(|e| self.f0.matrix(self.n.edge_index(self.i_minus[e[0]], self.i_minus[e[1]]).unwrap()).clone())
            .collect();
        FlatBundle::from_matrices(&self.v, self.rank(), mats).unwrap()
    }

    pub fn deformation_complex(&self, k: &F) -> Result<DeformationComplex<F>, Error> {
        self.validate(k)?;
        let ring = PolyRing::new(k.clone());
        let d = self.rank();
        let lift = |m: &Matrix<F::Elem>| map_dense(m, |c| ring.constant(c.clone()));
        let n_c = TwistedComplex::build(
            ring.clone(),
            &self.n,
            &EdgeTransport::new(d, self.f0.matrices().iter().map(lift).collect()),
        );
        let v_c = TwistedComplex::build(
            ring.clone(),
            &self.v,
            &EdgeTransport::new(d, self.v_bundle().matrices().iter().map(lift).collect()),
        );
        let top = self.n.dim().max(self.v.dim() + 1);
        let n_dims: Vec<usize> = (0..=top).map(|q| self.n.count(q) * d).collect();
        let v_dims = |q: usize| -> usize { q.checked_sub(1).map_or(0, |p| self.v.count(p) * d) };
        let dims: Vec<usize> = (0..=top).map(|q| n_dims[q] + v_dims(q)).collect();
        let neg_tau = ring.neg(&ring.x());
        let mut deltas = Vec::new();
        for q in 0..top {
            let mut trip = Vec::new();
            if q < self.n.dim() {
                for (i, j, v) in n_c.delta(q).entries() {
                    trip.push((i, j, v.clone()));
                }
            }
            // rows C^q(V) sit after C^{q+1}(N)
            let row0 = n_dims[q + 1];
            if q <= self.v.dim() {
                for (r, s) in self.v.simplices(q).iter().enumerate() {
                    let cp = self.n.index_of(&self.image(&self.i_plus, s)).unwrap();
                    let cm = self.n.index_of(&self.image(&self.i_minus, s)).unwrap();
                    let sig = &self.sigma[s[0]];
                    for a in 0..d {
                        for b in 0..d {
                            trip.push((row0 + r * d + a, cp * d + b, ring.constant(sig.get(a, b).clone())));
                        }
                        trip.push((row0 + r * d + a, cm * d + a, neg_tau.clone()));
                    }
                }
            }
            if q >= 1 && q - 1 < self.v.dim() {
                let col0 = n_dims[q];
                for (i, j, v) in v_c.delta(q - 1).entries() {
                    trip.push((row0 + i, col0 + j, ring.neg(v)));
                }
            }
            deltas.push(SparseMatrix::from_triplets(&ring, dims[q + 1], dims[q], trip));
        }
        let complex = TwistedComplex::new(ring, dims, deltas)?;
        Ok(DeformationComplex { complex, n_dims })
    }

    /// `C*(N, i_+(V); F_0)`: cochains vanishing on `i_+(V)`.
    pub fn relative_complex(&self, k: &F) -> Result<TwistedComplex<F>, Error> {
        self.validate(k)?;
        let d = self.rank();
        let full = super::twisted_complex_over_field(k, &self.n, &self.f0);
        let in_plus: BTreeSet<usize> = self.i_plus.iter().copied().collect();
        let keep: Vec<Vec<usize>> = (0..=self.n.dim())
            .map(|q| {
                (0..self.n.count(q))
                    .filter(|&i| !self.n.simplices(q)[i].iter().all(|v| in_plus.contains(v)))
                    .flat_map(|i| (0..d).map(move |a| i * d + a))
                    .collect()
            })
            .collect();
        let mut deltas = Vec::new();
        for q in 0..self.n.dim() {
            let col_pos: BTreeMap<usize, usize> = keep[q].iter().enumerate().map(|(a, &b)| (b, a)).collect();
            let trip: Vec<_> = keep[q + 1]
                .iter()
                .enumerate()
                .flat_map(|(r, &old)| {
                    full.delta(q).row(old).iter().filter_map(|(j, v)| col_pos.get(j).map(|&c| (r, c, v.clone()))).collect::<Vec<_>>()
                })
                .collect();
            deltas.push(SparseMatrix::from_triplets(k, keep[q + 1].len(), keep[q].len(), trip));
        }
        TwistedComplex::new(k.clone(), keep.iter().map(Vec::len).collect(), deltas)
    }

    /// The subcomplex `{alpha : a i_-^* alpha = sigma i_+^* alpha}` of
    /// `C*(N; F_0)`, written in a basis of each degree.
    pub fn boundary_condition_complex(&self, k: &F, a: &F::Elem) -> Result<TwistedComplex<F>, Error> {
        if k.is_zero(a) {
            return Err(Error::Domain("boundary condition needs a != 0".into()));
        }
        self.validate(k)?;
        let d = self.rank();
        let full = super::twisted_complex_over_field(k, &self.n, &self.f0);
        let na = k.neg(a);
        let bases: Vec<Vec<Vec<F::Elem>>> = (0..=self.n.dim())
            .map(|q| {
                let mut trip = Vec::new();
                for (r, s) in self.v.simplices(q).iter().enumerate() {
                    let cp = self.n.index_of(&self.image(&self.i_plus, s)).unwrap();
                    let cm = self.n.index_of(&self.image(&self.i_minus, s)).unwrap();
                    for x in 0..d {
                        for y in 0..d {
                            trip.push((r * d + x, cp * d + y, self.sigma[s[0]].get(x, y).clone()));
                        }
                        trip.push((r * d + x, cm * d + x, na.clone()));
                    }
                }
                let l = SparseMatrix::from_triplets(k, self.v.count(q) * d, self.n.count(q) * d, trip);
                kernel(k, &l)
            })
            .collect();
        let mut deltas = Vec::new();
        for q in 0..self.n.dim() {
            let target = &bases[q + 1];
            let mut tb = TaggedBasis::new(k.clone(), full.dims()[q + 1], target.len());
            for (i, b) in target.iter().enumerate() {
                let mut tag = vec![k.zero(); target.len()];
                tag[i] = k.one();
                tb.insert(b, tag);
            }
            let mut trip = Vec::new();
            for (j, b) in bases[q].iter().enumerate() {
                let img = full.delta(q).mul_vec(k, b);
                let coords = tb
                    .coordinates(&img)
                    .ok_or_else(|| Error::Invariant("boundary condition is not preserved by delta".into()))?;
                for (i, c) in coords.into_iter().enumerate() {
                    trip.push((i, j, c));
                }
            }
            deltas.push(SparseMatrix::from_triplets(k, target.len(), bases[q].len(), trip));
        }
        TwistedComplex::new(k.clone(), bases.iter().map(Vec::len).collect(), deltas)
    }

    /// Glue `i_- v` to `i_+ v`. Fails unless the result is a simplicial
    /// complex whose only identified simplex pairs are `i_+ s ~ i_- s`.
    pub fn glue(&self, k: &F) -> Result<Gluing<F>, Error> {
        self.validate(k)?;
        let nn = self.n.vertex_count();
        let minus_of: BTreeMap<usize, usize> = self.i_minus.iter().enumerate().map(|(v, &m)| (m, v)).collect();
        let mut p = vec![usize::MAX; nn];
        let mut next = 0;
        for (x, slot) in p.iter_mut().enumerate() {
            if !minus_of.contains_key(&x) {
                *slot = next;
                next += 1;
            }
        }
        for (&m, &v) in &minus_of {
            p[m] = p[self.i_plus[v]];
        }
        // which V-simplex (if any) a simplex of N is a copy of
        let copy_of = |s: &[usize]| -> Option<Vec<usize>> {
            let inv_p: BTreeMap<usize, usize> = self.i_plus.iter().enumerate().map(|(a, &b)| (b, a)).collect();
            let pre: Option<Vec<usize>> =
                s.iter().map(|x| inv_p.get(x).or_else(|| minus_of.get(x)).copied()).collect();
            pre
        };
        let mut images: BTreeMap<Vec<usize>, Vec<Vec<usize>>> = BTreeMap::new();
        for q in 0..=self.n.dim() {
            for s in self.n.simplices(q) {
                let mut img: Vec<usize> = s.iter().map(|&x| p[x]).collect();
                img.sort_unstable();
                if img.windows(2).any(|w| w[0] == w[1]) {
                    return Err(Error::Invalid(format!("gluing collapses simplex {s:?}")));
                }
                images.entry(img).or_default().push(s.clone());
            }
        }
        for (img, pre) in &images {
            if pre.len() > 1 {
                let copies: BTreeSet<Option<Vec<usize>>> = pre.iter().map(|s| copy_of(s)).collect();
                if pre.len() != 2 || copies.len() != 1 || copies.contains(&None) {
                    return Err(Error::Invalid(format!("gluing identifies unrelated simplices over {img:?}")));
                }
            }
        }
        let x = SimplicialComplex::from_simplices(next, images.keys().filter(|s| s.len() > 1))?;
        // fiber at an X vertex is the fiber at its plus (or only) preimage;
        // phi(y) maps it to the fiber at y
        let d = self.rank();
        let phi = |y: usize| -> Matrix<F::Elem> {
            match minus_of.get(&y) {
                Some(&v) => self.sigma[v].clone(),
                None => Matrix::identity(k, d),
            }
        };
        let h = |y: usize| i64::from(minus_of.contains_key(&y));
        let mut mats = vec![Matrix::identity(k, d); x.count(1)];
        let mut zvals = vec![0i64; x.count(1)];
        for (img, pre) in &images {
            if img.len() != 2 {
                continue;
            }
            let e = x.index_of(img).unwrap();
            let (a, b) = (pre[0][0], pre[0][1]);
            let g = self.f0.matrix(self.n.edge_index(a, b).unwrap());
            let t = inverse(k, &phi(a)).unwrap().mul(k, g).mul(k, &phi(b));
            let zab = h(b) - h(a);
            if p[a] < p[b] {
                mats[e] = t;
                zvals[e] = zab;
            } else {
                mats[e] = inverse(k, &t).unwrap();
                zvals[e] = -zab;
            }
        }
        let bundle = FlatBundle::from_matrices(&x, d, mats)?;
        let z = IntegralCocycle::from_values(&x, zvals)?;
        Ok(Gluing { x, bundle, z, p })
    }
}
