use super::{FlatBundle, IntegralCocycle, SimplicialComplex};
use crate::algebra::{Field, LaurentRing, Ring};
use crate::linalg::{kernel, rank, Matrix, SparseMatrix, TaggedBasis};
use crate::Error;

/// Edge transports over an arbitrary coefficient ring, one `d x d` matrix
/// per edge `u < v`, mapping the fiber at `v` to the fiber at `u`.
#[derive(Clone, Debug)]
pub struct EdgeTransport<E> {
    rank: usize,
    mats: Vec<Matrix<E>>,
}

impl<E: Clone> EdgeTransport<E> {
    pub fn new(rank: usize, mats: Vec<Matrix<E>>) -> Self {
        EdgeTransport { rank, mats }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn matrix(&self, e: usize) -> &Matrix<E> {
        &self.mats[e]
    }
}

/// Cochain complex of free modules `C^0 -> ... -> C^D` over `R`. `delta(q)`
/// is the matrix of `C^q -> C^{q+1}` (rows index `C^{q+1}`); the top one maps
/// to the zero module.
#[derive(Clone, Debug)]
pub struct TwistedComplex<R: Ring> {
    ring: R,
    dims: Vec<usize>,
    deltas: Vec<SparseMatrix<R::Elem>>,
}

impl<R: Ring> TwistedComplex<R> {
    /// `deltas[q]` must be `dims[q+1] x dims[q]` (with `dims[D+1] = 0`).
    pub fn new(ring: R, dims: Vec<usize>, mut deltas: Vec<SparseMatrix<R::Elem>>) -> Result<Self, Error> {
        if deltas.len() + 1 == dims.len() {
            deltas.push(SparseMatrix::zero(0, *dims.last().unwrap()));
        }
        if deltas.len() != dims.len() {
            return Err(Error::Invalid("one coboundary per degree expected".into()));
        }
        for (q, d) in deltas.iter().enumerate() {
            let rows = dims.get(q + 1).copied().unwrap_or(0);
            if d.nrows() != rows || d.ncols() != dims[q] {
                return Err(Error::Invalid(format!(
                    "coboundary {q} is {}x{}, expected {rows}x{}",
                    d.nrows(),
                    d.ncols(),
                    dims[q]
                )));
            }
        }
        Ok(TwistedComplex { ring, dims, deltas })
    }

    /// Ordered cochains with the transport on the leading face:
    /// `(dc)(v0..v_{q+1}) = g(v0 v1) c(v1..) + sum_{i>=1} (-1)^i c(..^v_i..)`.
    pub fn build(ring: R, x: &SimplicialComplex, g: &EdgeTransport<R::Elem>) -> Self {
        let d = g.rank;
        let top = x.dim();
        let dims: Vec<usize> = (0..=top).map(|q| x.count(q) * d).collect();
        let mut deltas = Vec::with_capacity(top + 1);
        for q in 0..top {
            let mut trip = Vec::new();
            for (r, s) in x.simplices(q + 1).iter().enumerate() {
                let f0 = x.face_index(s, 0);
                let e = x.edge_index(s[0], s[1]).unwrap();
                let m = &g.mats[e];
                for a in 0..d {
                    for b in 0..d {
                        let v = m.get(a, b);
                        if !ring.is_zero(v) {
                            trip.push((r * d + a, f0 * d + b, v.clone()));
                        }
                    }
                }
                for i in 1..s.len() {
                    let fi = x.face_index(s, i);
                    let sign = if i % 2 == 0 { ring.one() } else { ring.neg(&ring.one()) };
                    for a in 0..d {
                        trip.push((r * d + a, fi * d + a, sign.clone()));
                    }
                }
            }
            deltas.push(SparseMatrix::from_triplets(&ring, dims[q + 1], dims[q], trip));
        }
        deltas.push(SparseMatrix::zero(0, dims[top]));
        TwistedComplex { ring, dims, deltas }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn top_degree(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn delta(&self, q: usize) -> &SparseMatrix<R::Elem> {
        &self.deltas[q]
    }

    /// `delta(q - 1)`, or `None` in degree 0.
    pub fn incoming(&self, q: usize) -> Option<&SparseMatrix<R::Elem>> {
        q.checked_sub(1).map(|p| &self.deltas[p])
    }

    pub fn check_d_squared(&self) -> Result<(), Error> {
        for q in 0..self.deltas.len().saturating_sub(1) {
            if !self.deltas[q + 1].matmul(&self.ring, &self.deltas[q]).is_zero() {
                return Err(Error::Invariant(format!("delta^2 != 0 in degree {q}")));
            }
        }
        Ok(())
    }

    /// Entrywise change of rings (evaluation, reduction, expansion).
    pub fn map<S: Ring>(&self, target: S, f: impl Fn(&R::Elem) -> S::Elem) -> TwistedComplex<S> {
        let deltas = self.deltas.iter().map(|d| d.map(&target, &f)).collect();
        TwistedComplex { ring: target, dims: self.dims.clone(), deltas }
    }
}

/// `C*(X; F)` over the field of `F`.
pub fn twisted_complex_over_field<F: Field>(k: &F, x: &SimplicialComplex, f: &FlatBundle<F>) -> TwistedComplex<F> {
    let g = EdgeTransport::new(f.rank(), f.matrices().to_vec());
    TwistedComplex::build(k.clone(), x, &g)
}

/// `C*(X; tau^z (x) F)` over `Lambda`: `g(uv) = tau^{z(uv)} g_F(uv)`.
pub fn lambda_twisted_complex<F: Field>(
    k: &F,
    x: &SimplicialComplex,
    z: &IntegralCocycle,
    f: &FlatBundle<F>,
) -> TwistedComplex<LaurentRing<F>> {
    let lam = LaurentRing::new(k.clone());
    let mats = f
        .matrices()
        .iter()
        .zip(z.values())
        .map(|(m, &e)| crate::linalg::map_dense(m, |c| lam.monomial(c.clone(), e)))
        .collect();
    let g = EdgeTransport::new(f.rank(), mats);
    TwistedComplex::build(lam, x, &g)
}

/// `C*(X; F)` with constant coefficients `k[tau]` (the family at `z = 0`).
pub fn poly_twisted_complex<F: Field>(
    k: &F,
    x: &SimplicialComplex,
    f: &FlatBundle<F>,
) -> TwistedComplex<crate::algebra::PolyRing<F>> {
    let ring = crate::algebra::PolyRing::new(k.clone());
    let mats = f.matrices().iter().map(|m| crate::linalg::map_dense(m, |c| ring.constant(c.clone()))).collect();
    TwistedComplex::build(ring, x, &EdgeTransport::new(f.rank(), mats))
}

/// Dimensions of `H^q` over a field, all degrees.
pub fn cohomology_dims<F: Field>(c: &TwistedComplex<F>) -> Vec<usize> {
    let k = c.ring();
    let ranks: Vec<usize> = (0..c.dims.len()).map(|q| rank(k, c.delta(q))).collect();
    (0..c.dims.len())
        .map(|q| c.dims[q] - ranks[q] - if q > 0 { ranks[q - 1] } else { 0 })
        .collect()
}

/// A basis of `H^q` by cocycle representatives, with coordinates of any
/// cocycle in that basis.
#[derive(Clone, Debug)]
pub struct CohomologyBasis<F: Field> {
    degree: usize,
    reps: Vec<Vec<F::Elem>>,
    span: TaggedBasis<F>,
}

impl<F: Field> CohomologyBasis<F> {
    pub fn new(c: &TwistedComplex<F>, q: usize) -> Self {
        let k = c.ring();
        let cocycles = kernel(k, c.delta(q));
        let mut span = TaggedBasis::new(k.clone(), c.dims[q], cocycles.len());
        if let Some(inc) = c.incoming(q) {
            for col in inc.columns(k) {
                span.insert_untagged(&col);
            }
        }
        let mut reps = Vec::new();
        for z in cocycles {
            let mut tag = vec![k.zero(); span.tag_len()];
            tag[reps.len()] = k.one();
            if span.insert(&z, tag) {
                reps.push(z);
            }
        }
        CohomologyBasis { degree: q, reps, span }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn reps(&self) -> &[Vec<F::Elem>] {
        &self.reps
    }

    /// Coordinates of a cocycle; `None` if `c` is not a cocycle.
    pub fn coordinates(&self, c: &[F::Elem]) -> Option<Vec<F::Elem>> {
        let mut t = self.span.coordinates(c)?;
        t.truncate(self.reps.len());
        Some(t)
    }

    /// Is the cocycle `c` a coboundary?
    pub fn is_zero_class(&self, k: &F, c: &[F::Elem]) -> bool {
        self.coordinates(c).is_some_and(|t| t.iter().all(|x| k.is_zero(x)))
    }

    /// The cocycle with the given coordinates.
    pub fn combine(&self, k: &F, coords: &[F::Elem]) -> Vec<F::Elem> {
        let n = self.span.ambient_dim();
        let mut out = vec![k.zero(); n];
        for (c, r) in coords.iter().zip(&self.reps) {
            for (o, x) in out.iter_mut().zip(r) {
                k.mul_add_assign(o, c, x);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{EuclideanRing, Rationals};
    use crate::linalg::det;

    fn circle() -> (SimplicialComplex, IntegralCocycle) {
        let x = SimplicialComplex::from_facets(3, [[0, 1], [0, 2], [1, 2]]).unwrap();
        let z = IntegralCocycle::from_edges(&x, [(0, 1, 1)]).unwrap();
        (x, z)
    }

    #[test]
    fn circle_lambda_coboundary() {
        let k = Rationals;
        let (x, z) = circle();
        let c = lambda_twisted_complex(&k, &x, &z, &FlatBundle::trivial(&k, &x, 1));
        let lam = c.ring().clone();
        let d0 = c.delta(0).to_dense(&lam);
        let shown: Vec<Vec<String>> =
            (0..3).map(|i| (0..3).map(|j| lam.show(d0.get(i, j))).collect()).collect();
        assert_eq!(shown, [["-1", "tau", "0"], ["-1", "0", "1"], ["0", "-1", "1"]]);
        let (_, n) = lam.normalize(&det(&lam, &d0));
        assert_eq!(lam.show(&n), "tau-1");
    }

    #[test]
    fn untwisted_betti_numbers() {
        let k = Rationals;
        let (x, _) = circle();
        let c = twisted_complex_over_field(&k, &x, &FlatBundle::trivial(&k, &x, 1));
        c.check_d_squared().unwrap();
        assert_eq!(cohomology_dims(&c), vec![1, 1]);
        let b = CohomologyBasis::new(&c, 1);
        assert_eq!(b.dim(), 1);
        // the cocycle (1,0,0) on edge 01 generates H^1
        let e01 = vec![k.one(), k.zero(), k.zero()];
        assert!(!b.is_zero_class(&k, &e01));
    }
}
