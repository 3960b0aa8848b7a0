use super::{Diagnostic, IntegralCocycle, SimplicialComplex};
use crate::algebra::Field;
use crate::linalg::{inverse, kronecker, Matrix};
use crate::Error;

/// A flat bundle of rank `d` over a field: one invertible `d x d` matrix
/// `g(uv)` per edge `u < v`, transporting the fiber at `v` to the fiber at
/// `u`. Flatness is `g(uw) = g(uv) g(vw)` on every triangle `u < v < w`.
#[derive(Clone, Debug, PartialEq)]
pub struct FlatBundle<F: Field> {
    rank: usize,
    mats: Vec<Matrix<F::Elem>>,
}

impl<F: Field> FlatBundle<F> {
    pub fn trivial(k: &F, x: &SimplicialComplex, rank: usize) -> Self {
        FlatBundle { rank, mats: vec![Matrix::identity(k, rank); x.count(1)] }
    }

    /// The rank-one bundle `a^z`: `g(uv) = a^{z(uv)}`.
    pub fn twist(k: &F, x: &SimplicialComplex, z: &IntegralCocycle, a: &F::Elem) -> Result<Self, Error> {
        if k.is_zero(a) {
            return Err(Error::Domain("twist parameter must be nonzero".into()));
        }
        if z.values().len() != x.count(1) {
            return Err(Error::Invalid("cocycle does not match the complex".into()));
        }
        let mats = z
            .values()
            .iter()
            .map(|&e| Matrix::from_rows(vec![vec![k.zpow(a, e)]], 1))
            .collect();
        Ok(FlatBundle { rank: 1, mats })
    }

    /// One matrix per edge in edge order.
    pub fn from_matrices(x: &SimplicialComplex, rank: usize, mats: Vec<Matrix<F::Elem>>) -> Result<Self, Error> {
        if mats.len() != x.count(1) {
            return Err(Error::Invalid(format!("{} matrices for {} edges", mats.len(), x.count(1))));
        }
        if let Some(m) = mats.iter().find(|m| m.nrows() != rank || m.ncols() != rank) {
            return Err(Error::Invalid(format!("matrix of shape {}x{} in a rank {rank} bundle", m.nrows(), m.ncols())));
        }
        Ok(FlatBundle { rank, mats })
    }

    /// Matrices on listed oriented edges (`(v, u)` stores the inverse);
    /// unlisted edges carry the identity.
    pub fn from_edges(
        k: &F,
        x: &SimplicialComplex,
        rank: usize,
        edges: impl IntoIterator<Item = (usize, usize, Matrix<F::Elem>)>,
    ) -> Result<Self, Error> {
        let mut b = Self::trivial(k, x, rank);
        for (u, v, m) in edges {
            let e = x
                .edge_index(u, v)
                .ok_or_else(|| Error::Invalid(format!("bundle matrix on missing edge ({u},{v})")))?;
            if m.nrows() != rank || m.ncols() != rank {
                return Err(Error::Invalid(format!("edge ({u},{v}): expected {rank}x{rank} matrix")));
            }
            b.mats[e] = if u < v {
                m
            } else {
                inverse(k, &m).ok_or_else(|| Error::Invalid(format!("edge ({u},{v}): singular matrix")))?
            };
        }
        Ok(b)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn matrices(&self) -> &[Matrix<F::Elem>] {
        &self.mats
    }

    /// `g(uv)` for the edge with index `e`.
    pub fn matrix(&self, e: usize) -> &Matrix<F::Elem> {
        &self.mats[e]
    }

    /// Transport from the fiber at `v` to the fiber at `u` along the edge
    /// `{u, v}` in either orientation; the identity when `u == v`.
    pub fn transport(&self, k: &F, x: &SimplicialComplex, u: usize, v: usize) -> Option<Matrix<F::Elem>> {
        if u == v {
            return Some(Matrix::identity(k, self.rank));
        }
        let m = &self.mats[x.edge_index(u, v)?];
        if u < v {
            Some(m.clone())
        } else {
            inverse(k, m)
        }
    }

    pub fn is_trivial(&self, k: &F) -> bool {
        let id = Matrix::identity(k, self.rank);
        self.mats.iter().all(|m| *m == id)
    }

    /// Singular edge matrices and non-flat triangles.
    pub fn violations(&self, k: &F, x: &SimplicialComplex) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        if self.mats.len() != x.count(1) {
            out.push(Diagnostic::new("bundle", Vec::new(), "wrong number of edge matrices".into()));
            return out;
        }
        for (e, m) in x.simplices(1).iter().zip(&self.mats) {
            if inverse(k, m).is_none() {
                out.push(Diagnostic::new("bundle", e.clone(), "singular transport matrix".into()));
            }
        }
        for t in x.simplices(2) {
            let g = |a, b| &self.mats[x.edge_index(a, b).unwrap()];
            if *g(t[0], t[2]) != g(t[0], t[1]).mul(k, g(t[1], t[2])) {
                out.push(Diagnostic::new("flatness", t.clone(), "g(uw) != g(uv) g(vw)".into()));
            }
        }
        out
    }

    /// `self (x) other`, fibers combined by the Kronecker product.
    pub fn tensor(&self, k: &F, other: &Self) -> Self {
        let mats = self.mats.iter().zip(&other.mats).map(|(a, b)| kronecker(k, a, b)).collect();
        FlatBundle { rank: self.rank * other.rank, mats }
    }

    /// `a^z (x) self`
    pub fn twisted_by(&self, k: &F, x: &SimplicialComplex, z: &IntegralCocycle, a: &F::Elem) -> Result<Self, Error> {
        Ok(FlatBundle::twist(k, x, z, a)?.tensor(k, self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Rationals, Ring};

    #[test]
    fn rank_one_twist_is_flat() {
        let k = Rationals;
        let x = SimplicialComplex::from_facets(4, [[0, 1, 2], [0, 2, 3]]).unwrap();
        let z = IntegralCocycle::coboundary(&x, &[0, 2, -1, 5]);
        let b = FlatBundle::twist(&k, &x, &z, &k.from_int(3)).unwrap();
        assert!(b.violations(&k, &x).is_empty());
        let bad = FlatBundle::from_edges(&k, &x, 1, [(0, 1, Matrix::from_rows(vec![vec![k.from_int(2)]], 1))]).unwrap();
        assert_eq!(bad.violations(&k, &x).len(), 1);
    }
}
