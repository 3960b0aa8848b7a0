use std::collections::VecDeque;

use super::{Diagnostic, SimplicialComplex};
use crate::Error;

/// An integral 1-cochain `z`, one value per edge `u < v` in the complex's
/// edge order; `z(vu) = -z(uv)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntegralCocycle {
    values: Vec<i64>,
}

impl IntegralCocycle {
    pub fn zero(x: &SimplicialComplex) -> Self {
        IntegralCocycle { values: vec![0; x.count(1)] }
    }

    pub fn from_values(x: &SimplicialComplex, values: Vec<i64>) -> Result<Self, Error> {
        if values.len() != x.count(1) {
            return Err(Error::Invalid(format!(
                "cochain has {} values for {} edges",
                values.len(),
                x.count(1)
            )));
        }
        Ok(IntegralCocycle { values })
    }

    /// Values on listed oriented edges; unlisted edges get 0.
    pub fn from_edges(x: &SimplicialComplex, edges: impl IntoIterator<Item = (usize, usize, i64)>) -> Result<Self, Error> {
        let mut z = Self::zero(x);
        for (u, v, val) in edges {
            let e = x
                .edge_index(u, v)
                .ok_or_else(|| Error::Invalid(format!("cocycle value on missing edge ({u},{v})")))?;
            z.values[e] = if u < v { val } else { -val };
        }
        Ok(z)
    }

    /// `z = delta h`, i.e. `z(uv) = h(v) - h(u)`.
    pub fn coboundary(x: &SimplicialComplex, h: &[i64]) -> Self {
        let values = x.simplices(1).iter().map(|e| h[e[1]] - h[e[0]]).collect();
        IntegralCocycle { values }
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    /// Value on the oriented edge `(u, v)`; `None` if it is not an edge.
    pub fn value(&self, x: &SimplicialComplex, u: usize, v: usize) -> Option<i64> {
        let e = x.edge_index(u, v)?;
        Some(if u < v { self.values[e] } else { -self.values[e] })
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    pub fn neg(&self) -> Self {
        IntegralCocycle { values: self.values.iter().map(|v| -v).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        IntegralCocycle { values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, c: i64) -> Self {
        IntegralCocycle { values: self.values.iter().map(|v| c * v).collect() }
    }

    /// Triangles `(u,v,w)` with `z(vw) - z(uw) + z(uv) != 0`.
    pub fn violations(&self, x: &SimplicialComplex) -> Vec<Diagnostic> {
        x.simplices(2)
            .iter()
            .filter_map(|t| {
                let (u, v, w) = (t[0], t[1], t[2]);
                let val = |a, b| self.values[x.edge_index(a, b).unwrap()];
                let s = val(v, w) - val(u, w) + val(u, v);
                (s != 0).then(|| Diagnostic::new("cocycle", t.clone(), format!("z(vw)-z(uw)+z(uv) = {s}")))
            })
            .collect()
    }

    /// `(z - delta phi, phi)` where `z - delta phi` vanishes on a breadth-first
    /// spanning forest rooted at the least vertex of each component.
    pub fn tree_gauge(&self, x: &SimplicialComplex) -> (IntegralCocycle, Vec<i64>) {
        let n = x.vertex_count();
        let mut adj = vec![Vec::new(); n];
        for e in x.simplices(1) {
            adj[e[0]].push(e[1]);
            adj[e[1]].push(e[0]);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        let mut phi = vec![0i64; n];
        let mut seen = vec![false; n];
        for root in 0..n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                for &v in &adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        phi[v] = phi[u] + self.value(x, u, v).unwrap();
                        queue.push_back(v);
                    }
                }
            }
        }
        (self.add(&Self::coboundary(x, &phi).neg()), phi)
    }

    /// Is the class zero, i.e. is `z` an integral coboundary?
    pub fn is_exact(&self, x: &SimplicialComplex) -> bool {
        self.tree_gauge(x).0.is_zero()
    }

    /// gcd of all periods (0 when the class vanishes).
    pub fn period_gcd(&self, x: &SimplicialComplex) -> u64 {
        let (g, _) = self.tree_gauge(x);
        g.values.iter().fold(0u64, |acc, &v| num_integer::gcd(acc, v.unsigned_abs()))
    }

    /// A primitive representative `z'` of the class with `z ~ d z'`, and `d`.
    /// The zero class returns itself with `d = 0`.
    pub fn primitive(&self, x: &SimplicialComplex) -> (IntegralCocycle, u64) {
        let d = self.period_gcd(x);
        if d == 0 {
            return (self.clone(), 0);
        }
        let (g, _) = self.tree_gauge(x);
        (IntegralCocycle { values: g.values.iter().map(|v| v / d as i64).collect() }, d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_cocycle_and_filled_triangle() {
        let circle = SimplicialComplex::from_facets(3, [[0, 1], [0, 2], [1, 2]]).unwrap();
        let z = IntegralCocycle::from_edges(&circle, [(0, 1, 1)]).unwrap();
        assert!(z.violations(&circle).is_empty());
        assert_eq!(z.period_gcd(&circle), 1);
        let disk = SimplicialComplex::from_facets(3, [[0, 1, 2]]).unwrap();
        let z = IntegralCocycle::from_edges(&disk, [(0, 1, 1)]).unwrap();
        assert_eq!(z.violations(&disk).len(), 1);
    }

    #[test]
    fn gauge_preserves_class() {
        let circle = SimplicialComplex::from_facets(3, [[0, 1], [0, 2], [1, 2]]).unwrap();
        let z = IntegralCocycle::from_edges(&circle, [(0, 1, 4), (1, 2, -2), (0, 2, 4)]).unwrap();
        // period around 0->1->2->0 is 4 - 2 - 4 = -2
        assert_eq!(z.period_gcd(&circle), 2);
        let (p, d) = z.primitive(&circle);
        assert_eq!(d, 2);
        assert_eq!(p.period_gcd(&circle), 1);
    }
}
