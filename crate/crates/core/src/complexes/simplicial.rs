use std::collections::{BTreeSet, HashMap};

use super::Diagnostic;
use crate::Error;

/// A finite abstract simplicial complex on vertices `0..n`. Simplices are
/// strictly increasing vertex lists, grouped by dimension and sorted
/// lexicographically within each dimension; that order is the cochain
/// basis order everywhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    n: usize,
    simplices: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

fn check_simplex(n: usize, s: &[usize]) -> Result<Vec<usize>, String> {
    if s.is_empty() {
        return Err("empty simplex".into());
    }
    let mut v = s.to_vec();
    v.sort_unstable();
    if v.windows(2).any(|w| w[0] == w[1]) {
        return Err(format!("repeated vertex in {s:?}"));
    }
    if let Some(&x) = v.iter().find(|&&x| x >= n) {
        return Err(format!("vertex {x} out of range 0..{n}"));
    }
    Ok(v)
}

fn faces_of(s: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    (0..s.len()).map(move |i| {
        let mut f = s.to_vec();
        f.remove(i);
        f
    })
}

impl SimplicialComplex {
    fn from_set(n: usize, set: BTreeSet<Vec<usize>>) -> Self {
        let mut simplices: Vec<Vec<Vec<usize>>> = vec![(0..n).map(|v| vec![v]).collect()];
        for s in set {
            let d = s.len() - 1;
            if d == 0 {
                continue;
            }
            while simplices.len() <= d {
                simplices.push(Vec::new());
            }
            simplices[d].push(s);
        }
        for layer in &mut simplices {
            layer.sort();
        }
        while simplices.len() > 1 && simplices.last().is_some_and(Vec::is_empty) {
            simplices.pop();
        }
        let index = simplices
            .iter()
            .map(|layer| layer.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();
        SimplicialComplex { n, simplices, index }
    }

    /// The smallest complex on `0..n` containing the given simplices.
    pub fn from_facets<I, S>(n: usize, facets: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[usize]>,
    {
        let mut set = BTreeSet::new();
        let mut stack = Vec::new();
        for f in facets {
            stack.push(check_simplex(n, f.as_ref()).map_err(Error::Invalid)?);
        }
        while let Some(s) = stack.pop() {
            if s.len() > 1 && !set.contains(&s) {
                stack.extend(faces_of(&s));
            }
            set.insert(s);
        }
        Ok(Self::from_set(n, set))
    }

    /// Exactly the given simplices (vertices `0..n` are implicit); every
    /// face must be listed.
    pub fn from_simplices<I, S>(n: usize, simplices: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[usize]>,
    {
        let list: Vec<Vec<usize>> = simplices.into_iter().map(|s| s.as_ref().to_vec()).collect();
        let diags = Self::closure_violations(n, &list);
        if let Some(d) = diags.first() {
            return Err(Error::Invalid(d.to_string()));
        }
        let set = list.into_iter().map(|s| check_simplex(n, &s).unwrap()).collect();
        Ok(Self::from_set(n, set))
    }

    /// Malformed simplices, duplicates and missing faces in a raw list.
    pub fn closure_violations(n: usize, list: &[Vec<usize>]) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let mut set = BTreeSet::new();
        for s in list {
            match check_simplex(n, s) {
                Err(msg) => out.push(Diagnostic::new("simplex", s.clone(), msg)),
                Ok(v) => {
                    if !set.insert(v.clone()) {
                        out.push(Diagnostic::new("duplicate", v, "listed twice".into()));
                    }
                }
            }
        }
        for s in &set {
            if s.len() <= 2 {
                continue;
            }
            for f in faces_of(s) {
                if !set.contains(&f) {
                    out.push(Diagnostic::new("closure", s.clone(), format!("face {f:?} missing")));
                }
            }
        }
        out
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.simplices.len() - 1
    }

    /// Number of `q`-simplices (0 above the dimension).
    pub fn count(&self, q: usize) -> usize {
        self.simplices.get(q).map_or(0, Vec::len)
    }

    pub fn simplices(&self, q: usize) -> &[Vec<usize>] {
        self.simplices.get(q).map_or(&[], |v| v.as_slice())
    }

    pub fn index_of(&self, s: &[usize]) -> Option<usize> {
        self.index.get(s.len().checked_sub(1)?)?.get(s).copied()
    }

    pub fn contains(&self, s: &[usize]) -> bool {
        self.index_of(s).is_some()
    }

    /// Index of the edge `{u, v}` in either order.
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        self.index_of(&[a, b])
    }

    /// Index of the face obtained by deleting the `i`-th vertex.
    pub fn face_index(&self, s: &[usize], i: usize) -> usize {
        let mut f = s.to_vec();
        f.remove(i);
        self.index_of(&f).expect("closed complex")
    }

    pub fn euler_characteristic(&self) -> i64 {
        (0..=self.dim()).map(|q| if q % 2 == 0 { self.count(q) as i64 } else { -(self.count(q) as i64) }).sum()
    }

    /// Simplices not contained in a larger one.
    pub fn facets(&self) -> Vec<Vec<usize>> {
        let mut covered: BTreeSet<&[usize]> = BTreeSet::new();
        let mut out = Vec::new();
        for q in (0..=self.dim()).rev() {
            for s in &self.simplices[q] {
                if !covered.contains(s.as_slice()) {
                    out.push(s.clone());
                }
            }
            if q > 0 {
                for s in &self.simplices[q] {
                    for f in faces_of(s) {
                        let idx = self.index[q - 1][&f];
                        covered.insert(self.simplices[q - 1][idx].as_slice());
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// Is the subcomplex spanned by `verts` full, i.e. every simplex with
    /// all vertices in `verts` belongs to `sub` (given as a membership test)?
    pub fn full_subcomplex_violations(
        &self,
        verts: &BTreeSet<usize>,
        in_sub: impl Fn(&[usize]) -> bool,
    ) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for q in 1..=self.dim() {
            for s in &self.simplices[q] {
                if s.iter().all(|v| verts.contains(v)) && !in_sub(s) {
                    out.push(s.clone());
                }
            }
        }
        out
    }

    /// Product complex with the staircase triangulation. Vertex `(a, b)` is
    /// labelled `a * |B| + b`, which keeps every staircase simplex increasing.
    pub fn product(a: &SimplicialComplex, b: &SimplicialComplex) -> SimplicialComplex {
        let nb = b.vertex_count();
        let mut facets = Vec::new();
        for s in a.facets() {
            for t in b.facets() {
                staircases(&s, &t, nb, &mut facets);
            }
        }
        SimplicialComplex::from_facets(a.vertex_count() * nb, facets).unwrap()
    }
}

/// Monotone lattice paths from `(s_0, t_0)` to `(s_p, t_q)`.
fn staircases(s: &[usize], t: &[usize], nb: usize, out: &mut Vec<Vec<usize>>) {
    fn walk(s: &[usize], t: &[usize], nb: usize, i: usize, j: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        path.push(s[i] * nb + t[j]);
        if i + 1 == s.len() && j + 1 == t.len() {
            out.push(path.clone());
        }
        if i + 1 < s.len() {
            walk(s, t, nb, i + 1, j, path, out);
        }
        if j + 1 < t.len() {
            walk(s, t, nb, i, j + 1, path, out);
        }
        path.pop();
    }
    walk(s, t, nb, 0, 0, &mut Vec::new(), out);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_and_counts() {
        let x = SimplicialComplex::from_facets(4, [[0, 1, 2], [1, 2, 3]]).unwrap();
        assert_eq!((x.count(0), x.count(1), x.count(2)), (4, 5, 2));
        assert_eq!(x.euler_characteristic(), 1);
        assert_eq!(x.facets(), vec![vec![0, 1, 2], vec![1, 2, 3]]);
        assert_eq!(x.face_index(&[0, 1, 2], 0), x.edge_index(2, 1).unwrap());
    }

    #[test]
    fn missing_face_reported() {
        let list = vec![vec![0, 1], vec![0, 1, 2]];
        let d = SimplicialComplex::closure_violations(3, &list);
        assert_eq!(d.len(), 2);
        assert!(SimplicialComplex::from_simplices(3, &list).is_err());
        assert!(SimplicialComplex::from_facets(2, [[0, 2]]).is_err());
    }

    #[test]
    fn product_of_intervals_is_a_square() {
        let i = SimplicialComplex::from_facets(2, [[0, 1]]).unwrap();
        let sq = SimplicialComplex::product(&i, &i);
        assert_eq!(sq.count(2), 2);
        assert_eq!(sq.count(1), 5);
        assert_eq!(sq.euler_characteristic(), 1);
    }
}
