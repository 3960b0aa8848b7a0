//! Matrices over the coefficient rings, elimination, Smith normal form and
//! kernels.
//!
//! Large sparse matrices are first reduced by pivoting on unit entries
//! (cheapest Markowitz cost first). Over a field that finishes the job;
//! over `k[tau]` or `Lambda` the small non-unit core left behind goes to a
//! dense Smith normal form.

use std::collections::BTreeSet;

use crate::algebra::{EuclideanRing, Field, Ring};

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn filled(rows: usize, cols: usize, value: E) -> Self {
        Matrix { rows, cols, data: vec![value; rows * cols] }
    }

    pub fn zeros<R: Ring<Elem = E>>(ring: &R, rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, ring.zero())
    }

    pub fn identity<R: Ring<Elem = E>>(ring: &R, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<E>>, cols: usize) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix");
            data.extend(row);
        }
        Matrix { rows: r, cols, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    pub fn mul<R: Ring<Elem = E>>(&self, ring: &R, other: &Matrix<E>) -> Matrix<E> {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(ring, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if ring.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    ring.mul_add_assign(&mut out.data[idx], a, other.get(l, j));
                }
            }
        }
        out
    }

    // row_a += c * row_b
    fn add_row_multiple<R: Ring<Elem = E>>(&mut self, ring: &R, a: usize, b: usize, c: &E) {
        for j in 0..self.cols {
            let (x, y) = (a * self.cols + j, b * self.cols + j);
            let yb = self.data[y].clone();
            ring.mul_add_assign(&mut self.data[x], c, &yb);
        }
    }

    // col_a += c * col_b
    fn add_col_multiple<R: Ring<Elem = E>>(&mut self, ring: &R, a: usize, b: usize, c: &E) {
        for i in 0..self.rows {
            let (x, y) = (i * self.cols + a, i * self.cols + b);
            let yb = self.data[y].clone();
            ring.mul_add_assign(&mut self.data[x], c, &yb);
        }
    }

    fn scale_row<R: Ring<Elem = E>>(&mut self, ring: &R, a: usize, c: &E) {
        for j in 0..self.cols {
            let idx = a * self.cols + j;
            self.data[idx] = ring.mul(&self.data[idx], c);
        }
    }
}

/// Sparse matrix stored by rows; each row sorted by column with no zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix<E> {
    nrows: usize,
    ncols: usize,
    rows: Vec<Vec<(usize, E)>>,
}

impl<E: Clone> SparseMatrix<E> {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        SparseMatrix { nrows, ncols, rows: vec![Vec::new(); nrows] }
    }

    /// Build from `(row, col, value)` triples; duplicates are summed.
    pub fn from_triplets<R: Ring<Elem = E>>(
        ring: &R,
        nrows: usize,
        ncols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, E)>,
    ) -> Self {
        let mut rows: Vec<Vec<(usize, E)>> = vec![Vec::new(); nrows];
        for (i, j, v) in triplets {
            assert!(i < nrows && j < ncols, "entry ({i},{j}) outside {nrows}x{ncols}");
            rows[i].push((j, v));
        }
        for row in &mut rows {
            row.sort_by_key(|e| e.0);
            let mut merged: Vec<(usize, E)> = Vec::with_capacity(row.len());
            for (j, v) in row.drain(..) {
                match merged.last_mut() {
                    Some((lj, lv)) if *lj == j => ring.add_assign(lv, &v),
                    _ => merged.push((j, v)),
                }
            }
            merged.retain(|(_, v)| !ring.is_zero(v));
            *row = merged;
        }
        SparseMatrix { nrows, ncols, rows }
    }

    pub fn from_dense<R: Ring<Elem = E>>(ring: &R, m: &Matrix<E>) -> Self {
        let trip = (0..m.nrows())
            .flat_map(|i| (0..m.ncols()).map(move |j| (i, j)))
            .filter(|&(i, j)| !ring.is_zero(m.get(i, j)))
            .map(|(i, j)| (i, j, m.get(i, j).clone()));
        Self::from_triplets(ring, m.nrows(), m.ncols(), trip.collect::<Vec<_>>())
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn row(&self, i: usize) -> &[(usize, E)] {
        &self.rows[i]
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &E)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |(j, v)| (i, *j, v)))
    }

    pub fn get<R: Ring<Elem = E>>(&self, ring: &R, i: usize, j: usize) -> E {
        match self.rows[i].binary_search_by_key(&j, |e| e.0) {
            Ok(pos) => self.rows[i][pos].1.clone(),
            Err(_) => ring.zero(),
        }
    }

    /// Apply `f` entrywise into another ring, dropping entries that become zero.
    pub fn map<S: Ring>(&self, target: &S, f: impl Fn(&E) -> S::Elem) -> SparseMatrix<S::Elem> {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|(j, v)| (*j, f(v)))
                    .filter(|(_, v)| !target.is_zero(v))
                    .collect()
            })
            .collect();
        SparseMatrix { nrows: self.nrows, ncols: self.ncols, rows }
    }

    pub fn mul_vec<R: Ring<Elem = E>>(&self, ring: &R, v: &[E]) -> Vec<E> {
        assert_eq!(v.len(), self.ncols);
        self.rows
            .iter()
            .map(|r| {
                let mut acc = ring.zero();
                for (j, a) in r {
                    ring.mul_add_assign(&mut acc, a, &v[*j]);
                }
                acc
            })
            .collect()
    }

    /// `self * other`
    pub fn matmul<R: Ring<Elem = E>>(&self, ring: &R, other: &SparseMatrix<E>) -> SparseMatrix<E> {
        assert_eq!(self.ncols, other.nrows);
        let mut trip = Vec::new();
        for (i, r) in self.rows.iter().enumerate() {
            for (l, a) in r {
                for (j, b) in &other.rows[*l] {
                    trip.push((i, *j, ring.mul(a, b)));
                }
            }
        }
        SparseMatrix::from_triplets(ring, self.nrows, other.ncols, trip)
    }

    pub fn transpose(&self) -> SparseMatrix<E> {
        let mut rows: Vec<Vec<(usize, E)>> = vec![Vec::new(); self.ncols];
        for (i, r) in self.rows.iter().enumerate() {
            for (j, v) in r {
                rows[*j].push((i, v.clone()));
            }
        }
        SparseMatrix { nrows: self.ncols, ncols: self.nrows, rows }
    }

    pub fn to_dense<R: Ring<Elem = E>>(&self, ring: &R) -> Matrix<E> {
        let mut m = Matrix::zeros(ring, self.nrows, self.ncols);
        for (i, j, v) in self.entries() {
            m.set(i, j, v.clone());
        }
        m
    }

    /// Columns as dense vectors (the images of the standard basis).
    pub fn columns<R: Ring<Elem = E>>(&self, ring: &R) -> Vec<Vec<E>> {
        let mut cols = vec![vec![ring.zero(); self.nrows]; self.ncols];
        for (i, j, v) in self.entries() {
            cols[j][i] = v.clone();
        }
        cols
    }

    /// Rows permuted by `rp` and columns by `cp` (new index `k` takes old `p[k]`).
    pub fn permuted(&self, rp: &[usize], cp: &[usize]) -> SparseMatrix<E> {
        let mut inv = vec![0; cp.len()];
        for (k, &old) in cp.iter().enumerate() {
            inv[old] = k;
        }
        let rows = rp
            .iter()
            .map(|&old| {
                let mut r: Vec<(usize, E)> =
                    self.rows[old].iter().map(|(j, v)| (inv[*j], v.clone())).collect();
                r.sort_by_key(|e| e.0);
                r
            })
            .collect();
        SparseMatrix { nrows: self.nrows, ncols: self.ncols, rows }
    }
}

// ---------------------------------------------------------------------------
// Unit-pivot sparse elimination

type SparseRow<E> = Vec<(usize, E)>;

/// `a - c * b` for sorted sparse rows.
fn row_axpy<R: Ring>(ring: &R, a: &SparseRow<R::Elem>, c: &R::Elem, b: &SparseRow<R::Elem>) -> SparseRow<R::Elem> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let negc = ring.neg(c);
    while i < a.len() || j < b.len() {
        let ca = a.get(i).map_or(usize::MAX, |e| e.0);
        let cb = b.get(j).map_or(usize::MAX, |e| e.0);
        if ca < cb {
            out.push(a[i].clone());
            i += 1;
        } else if cb < ca {
            out.push((cb, ring.mul(&negc, &b[j].1)));
            j += 1;
        } else {
            let mut v = a[i].1.clone();
            ring.mul_add_assign(&mut v, &negc, &b[j].1);
            if !ring.is_zero(&v) {
                out.push((ca, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Result of pivoting on unit entries until none remain.
struct Reduced<E> {
    /// `(pivot column, pivot row as it was when chosen)`, in order.
    pivots: Vec<(usize, SparseRow<E>)>,
    /// Nonzero rows left over; they only involve `free_cols`.
    core_rows: Vec<SparseRow<E>>,
    /// Columns never pivoted on, ascending.
    free_cols: Vec<usize>,
}

fn eliminate_units<R: EuclideanRing>(ring: &R, a: &SparseMatrix<R::Elem>) -> Reduced<R::Elem> {
    let mut rows: Vec<SparseRow<R::Elem>> = a.rows.clone();
    let mut row_alive = vec![true; rows.len()];
    let mut cols: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); a.ncols];
    for (i, r) in rows.iter().enumerate() {
        for (j, _) in r {
            cols[*j].insert(i);
        }
    }
    let mut col_alive = vec![true; a.ncols];
    let mut pivots = Vec::new();
    loop {
        // cheapest unit pivot; ties broken by (row, col)
        let mut best: Option<(usize, usize, usize)> = None;
        'scan: for (i, r) in rows.iter().enumerate() {
            if !row_alive[i] || r.is_empty() {
                continue;
            }
            if best.is_some_and(|b| b.0 == 0) {
                break 'scan;
            }
            let rl = r.len() - 1;
            for (j, v) in r {
                let cost = rl * (cols[*j].len() - 1);
                if best.is_some_and(|(c, _, _)| c <= cost) {
                    continue;
                }
                if ring.is_unit(v) {
                    best = Some((cost, i, *j));
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        let prow = std::mem::take(&mut rows[pi]);
        row_alive[pi] = false;
        for (j, _) in &prow {
            cols[*j].remove(&pi);
        }
        let u = &prow[prow.binary_search_by_key(&pj, |e| e.0).unwrap()].1;
        let uinv = ring.unit_inverse(u).unwrap();
        let targets: Vec<usize> = cols[pj].iter().copied().collect();
        for k in targets {
            let akj = rows[k][rows[k].binary_search_by_key(&pj, |e| e.0).unwrap()].1.clone();
            let c = ring.mul(&akj, &uinv);
            let new_row = row_axpy(ring, &rows[k], &c, &prow);
            for (j, _) in &rows[k] {
                cols[*j].remove(&k);
            }
            for (j, _) in &new_row {
                cols[*j].insert(k);
            }
            rows[k] = new_row;
        }
        debug_assert!(cols[pj].is_empty());
        col_alive[pj] = false;
        pivots.push((pj, prow));
    }
    let core_rows = rows
        .into_iter()
        .zip(row_alive)
        .filter(|(r, alive)| *alive && !r.is_empty())
        .map(|(r, _)| r)
        .collect();
    let free_cols = (0..a.ncols).filter(|&j| col_alive[j]).collect();
    Reduced { pivots, core_rows, free_cols }
}

fn core_dense<R: Ring>(ring: &R, red: &Reduced<R::Elem>) -> Matrix<R::Elem> {
    let mut pos = std::collections::HashMap::new();
    for (k, &j) in red.free_cols.iter().enumerate() {
        pos.insert(j, k);
    }
    let mut m = Matrix::zeros(ring, red.core_rows.len(), red.free_cols.len());
    for (i, r) in red.core_rows.iter().enumerate() {
        for (j, v) in r {
            m.set(i, pos[j], v.clone());
        }
    }
    m
}

/// Rank over a field.
pub fn rank<F: Field>(k: &F, a: &SparseMatrix<F::Elem>) -> usize {
    eliminate_units(k, a).pivots.len()
}

/// Nonzero invariant factors (normalized, units written as one), in
/// divisibility order.
pub fn invariant_factors<R: EuclideanRing>(ring: &R, a: &SparseMatrix<R::Elem>) -> Vec<R::Elem> {
    let red = eliminate_units(ring, a);
    let mut out = vec![ring.one(); red.pivots.len()];
    if !red.core_rows.is_empty() {
        out.extend(smith(ring, core_dense(ring, &red), false).diag);
    }
    out
}

/// A basis of the kernel (a free module over a PID, a subspace over a field).
pub fn kernel<R: EuclideanRing>(ring: &R, a: &SparseMatrix<R::Elem>) -> Vec<Vec<R::Elem>> {
    let red = eliminate_units(ring, a);
    let core = core_dense(ring, &red);
    let core_kernel = hermite_kernel(ring, &core);
    core_kernel
        .into_iter()
        .map(|kv| {
            let mut x = vec![ring.zero(); a.ncols];
            for (k, &j) in red.free_cols.iter().enumerate() {
                x[j] = kv[k].clone();
            }
            for (pj, prow) in red.pivots.iter().rev() {
                let mut acc = ring.zero();
                let mut u = None;
                for (j, v) in prow {
                    if j == pj {
                        u = Some(v);
                    } else {
                        ring.mul_add_assign(&mut acc, v, &x[*j]);
                    }
                }
                let uinv = ring.unit_inverse(u.unwrap()).unwrap();
                x[*pj] = ring.neg(&ring.mul(&acc, &uinv));
            }
            x
        })
        .collect()
}

/// Kernel of a dense matrix by unimodular column operations: `A V = [H | 0]`
/// with `H` of full column rank, so the trailing columns of `V` span `ker A`.
fn hermite_kernel<R: EuclideanRing>(ring: &R, a: &Matrix<R::Elem>) -> Vec<Vec<R::Elem>> {
    let n = a.ncols();
    let mut m = a.clone();
    let mut v = Matrix::identity(ring, n);
    let mut c = 0;
    for i in 0..m.nrows() {
        if c == n {
            break;
        }
        for j in c + 1..n {
            if ring.is_zero(m.get(i, j)) {
                continue;
            }
            if ring.is_zero(m.get(i, c)) {
                m.swap_cols(c, j);
                v.swap_cols(c, j);
                continue;
            }
            let (x, y) = (m.get(i, c).clone(), m.get(i, j).clone());
            let (g, s, t) = ring.xgcd(&x, &y);
            let xg = ring.div_exact(&x, &g).unwrap();
            let yg = ring.div_exact(&y, &g).unwrap();
            // [col_c, col_j] <- [col_c, col_j] * [[s, -y/g], [t, x/g]]
            for mat in [&mut m, &mut v] {
                for r in 0..mat.nrows() {
                    let (pc, pj) = (mat.get(r, c).clone(), mat.get(r, j).clone());
                    let new_c = ring.add(&ring.mul(&pc, &s), &ring.mul(&pj, &t));
                    let new_j = ring.sub(&ring.mul(&pj, &xg), &ring.mul(&pc, &yg));
                    mat.set(r, c, new_c);
                    mat.set(r, j, new_j);
                }
            }
        }
        if !ring.is_zero(m.get(i, c)) {
            c += 1;
        }
    }
    (c..n).map(|j| (0..n).map(|r| v.get(r, j).clone()).collect()).collect()
}

// ---------------------------------------------------------------------------
// Dense Smith normal form

/// `u * m * v = diag(diag, 0, ...)` with each entry dividing the next.
#[derive(Clone, Debug)]
pub struct Smith<E> {
    pub diag: Vec<E>,
    pub u: Option<Matrix<E>>,
    pub v: Option<Matrix<E>>,
}

/// Smith normal form. Pivot rule: smallest Euclidean size among the
/// remaining entries, then the first such entry in row-major order.
pub fn smith<R: EuclideanRing>(ring: &R, mut m: Matrix<R::Elem>, track: bool) -> Smith<R::Elem> {
    let (nr, nc) = (m.nrows(), m.ncols());
    let mut u = track.then(|| Matrix::identity(ring, nr));
    let mut v = track.then(|| Matrix::identity(ring, nc));
    let mut diag = Vec::new();
    for t in 0..nr.min(nc) {
        let mut best: Option<(usize, usize, usize)> = None;
        for i in t..nr {
            for j in t..nc {
                let e = m.get(i, j);
                if ring.is_zero(e) {
                    continue;
                }
                let n = ring.norm(e);
                if best.is_none_or(|(bn, _, _)| n < bn) {
                    best = Some((n, i, j));
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        m.swap_rows(t, pi);
        m.swap_cols(t, pj);
        if let Some(u) = u.as_mut() {
            u.swap_rows(t, pi);
        }
        if let Some(v) = v.as_mut() {
            v.swap_cols(t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..nr {
                if ring.is_zero(m.get(i, t)) {
                    continue;
                }
                let (q, r) = ring.div_rem(m.get(i, t), m.get(t, t));
                let nq = ring.neg(&q);
                m.add_row_multiple(ring, i, t, &nq);
                if let Some(u) = u.as_mut() {
                    u.add_row_multiple(ring, i, t, &nq);
                }
                if !ring.is_zero(&r) {
                    m.swap_rows(t, i);
                    if let Some(u) = u.as_mut() {
                        u.swap_rows(t, i);
                    }
                    clean = false;
                }
            }
            for j in t + 1..nc {
                if ring.is_zero(m.get(t, j)) {
                    continue;
                }
                let (q, r) = ring.div_rem(m.get(t, j), m.get(t, t));
                let nq = ring.neg(&q);
                m.add_col_multiple(ring, j, t, &nq);
                if let Some(v) = v.as_mut() {
                    v.add_col_multiple(ring, j, t, &nq);
                }
                if !ring.is_zero(&r) {
                    m.swap_cols(t, j);
                    if let Some(v) = v.as_mut() {
                        v.swap_cols(t, j);
                    }
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility of the rest of the block
            let offender = (t + 1..nr).find(|&i| (t + 1..nc).any(|j| !ring.divides(m.get(t, t), m.get(i, j))));
            match offender {
                Some(i) => {
                    let one = ring.one();
                    m.add_row_multiple(ring, t, i, &one);
                    if let Some(u) = u.as_mut() {
                        u.add_row_multiple(ring, t, i, &one);
                    }
                }
                None => break,
            }
        }
        let (unit, normal) = ring.normalize(m.get(t, t));
        let ui = ring.unit_inverse(&unit).unwrap();
        m.scale_row(ring, t, &ui);
        if let Some(u) = u.as_mut() {
            u.scale_row(ring, t, &ui);
        }
        diag.push(normal);
    }
    Smith { diag, u, v }
}

/// Fraction-free (Bareiss) determinant.
pub fn det<R: EuclideanRing>(ring: &R, m: &Matrix<R::Elem>) -> R::Elem {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "determinant of a non-square matrix");
    if n == 0 {
        return ring.one();
    }
    let mut a = m.clone();
    let mut sign = false;
    let mut prev = ring.one();
    for k in 0..n - 1 {
        if ring.is_zero(a.get(k, k)) {
            match (k + 1..n).find(|&i| !ring.is_zero(a.get(i, k))) {
                Some(i) => {
                    a.swap_rows(k, i);
                    sign = !sign;
                }
                None => return ring.zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let x = ring.sub(&ring.mul(a.get(i, j), a.get(k, k)), &ring.mul(a.get(i, k), a.get(k, j)));
                a.set(i, j, ring.div_exact(&x, &prev).expect("Bareiss division is exact"));
            }
        }
        prev = a.get(k, k).clone();
    }
    let d = a.get(n - 1, n - 1).clone();
    if sign {
        ring.neg(&d)
    } else {
        d
    }
}

/// Inverse over a field by Gauss-Jordan elimination; `None` if singular.
pub fn inverse<F: Field>(k: &F, m: &Matrix<F::Elem>) -> Option<Matrix<F::Elem>> {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "inverse of a non-square matrix");
    let mut a = m.clone();
    let mut inv = Matrix::identity(k, n);
    for c in 0..n {
        let p = (c..n).find(|&i| !k.is_zero(a.get(i, c)))?;
        a.swap_rows(c, p);
        inv.swap_rows(c, p);
        let pi = k.inv(a.get(c, c)).unwrap();
        a.scale_row(k, c, &pi);
        inv.scale_row(k, c, &pi);
        for i in 0..n {
            if i != c && !k.is_zero(a.get(i, c)) {
                let f = k.neg(a.get(i, c));
                a.add_row_multiple(k, i, c, &f);
                inv.add_row_multiple(k, i, c, &f);
            }
        }
    }
    Some(inv)
}

/// Kronecker product; entry `(i*q + k, j*s + l)` is `a[i][j] * b[k][l]`.
pub fn kronecker<R: Ring>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    let (q, s) = (b.nrows(), b.ncols());
    let mut out = Matrix::zeros(ring, a.nrows() * q, a.ncols() * s);
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            for k in 0..q {
                for l in 0..s {
                    out.set(i * q + k, j * s + l, ring.mul(a.get(i, j), b.get(k, l)));
                }
            }
        }
    }
    out
}

/// Entrywise image of a dense matrix in another ring.
pub fn map_dense<E: Clone, T: Clone>(m: &Matrix<E>, f: impl Fn(&E) -> T) -> Matrix<T> {
    let rows = (0..m.nrows()).map(|i| m.row(i).iter().map(&f).collect()).collect();
    Matrix::from_rows(rows, m.ncols())
}

// ---------------------------------------------------------------------------
// Subspaces over a field

/// Echelon basis of a subspace where every stored vector carries a tag
/// vector; the tags extend linearly, so reducing a vector in the span also
/// yields its tag. Inserting coboundaries with zero tags and then cocycles
/// with unit tags turns tags into cohomology coordinates.
#[derive(Clone, Debug)]
pub struct TaggedBasis<F: Field> {
    k: F,
    dim: usize,
    tag_len: usize,
    rows: Vec<(usize, Vec<F::Elem>, Vec<F::Elem>)>,
}

impl<F: Field> TaggedBasis<F> {
    pub fn new(k: F, dim: usize, tag_len: usize) -> Self {
        TaggedBasis { k, dim, tag_len, rows: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn tag_len(&self) -> usize {
        self.tag_len
    }

    /// `(v - sum c_i b_i, sum c_i tag_i)`
    pub fn reduce(&self, v: &[F::Elem]) -> (Vec<F::Elem>, Vec<F::Elem>) {
        let k = &self.k;
        let mut r = v.to_vec();
        let mut tag = vec![k.zero(); self.tag_len];
        for (p, b, bt) in &self.rows {
            if k.is_zero(&r[*p]) {
                continue;
            }
            let c = r[*p].clone();
            let nc = k.neg(&c);
            for (x, y) in r.iter_mut().zip(b) {
                k.mul_add_assign(x, &nc, y);
            }
            for (x, y) in tag.iter_mut().zip(bt) {
                k.mul_add_assign(x, &c, y);
            }
        }
        (r, tag)
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        self.reduce(v).0.iter().all(|x| self.k.is_zero(x))
    }

    /// Tag of a vector in the span, `None` otherwise.
    pub fn coordinates(&self, v: &[F::Elem]) -> Option<Vec<F::Elem>> {
        let (r, tag) = self.reduce(v);
        r.iter().all(|x| self.k.is_zero(x)).then_some(tag)
    }

    /// Adds `v` if independent; returns whether it was added.
    pub fn insert(&mut self, v: &[F::Elem], tag: Vec<F::Elem>) -> bool {
        assert_eq!(v.len(), self.dim);
        let k = &self.k;
        let (r, t) = self.reduce(v);
        let Some(p) = r.iter().position(|x| !k.is_zero(x)) else {
            return false;
        };
        let inv = k.inv(&r[p]).unwrap();
        let r: Vec<_> = r.iter().map(|x| k.mul(x, &inv)).collect();
        let t: Vec<_> = tag.iter().zip(&t).map(|(a, b)| k.mul(&k.sub(a, b), &inv)).collect();
        self.rows.push((p, r, t));
        true
    }

    pub fn insert_untagged(&mut self, v: &[F::Elem]) -> bool {
        let z = vec![self.k.zero(); self.tag_len];
        self.insert(v, z)
    }
}

/// Dimension of the span of `vectors` in `k^dim`.
pub fn span_dim<F: Field>(k: &F, dim: usize, vectors: &[Vec<F::Elem>]) -> usize {
    let mut b = TaggedBasis::new(k.clone(), dim, 0);
    for v in vectors {
        b.insert_untagged(v);
    }
    b.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{FiniteField, PolyRing, Rationals};
    use num_rational::BigRational;

    fn qm(rows: &[&[i64]]) -> SparseMatrix<BigRational> {
        let k = Rationals;
        let cols = rows[0].len();
        let trip: Vec<_> = rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().enumerate().map(move |(j, &x)| (i, j, k.from_int(x))))
            .collect();
        SparseMatrix::from_triplets(&k, rows.len(), cols, trip)
    }

    #[test]
    fn rank_and_kernel_over_q() {
        let k = Rationals;
        let a = qm(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&k, &a), 2);
        let ker = kernel(&k, &a);
        assert_eq!(ker.len(), 1);
        assert!(a.mul_vec(&k, &ker[0]).iter().all(|x| k.is_zero(x)));
    }

    #[test]
    fn smith_of_diag_tau_tau_minus_one() {
        let r = PolyRing::new(Rationals);
        let tau = r.x();
        let tm1 = r.sub(&tau, &r.one());
        let m = Matrix::from_rows(vec![vec![tau.clone(), r.zero()], vec![r.zero(), tm1.clone()]], 2);
        let s = smith(&r, m.clone(), true);
        assert!(r.is_one(&s.diag[0]));
        assert_eq!(r.show(&s.diag[1]), "tau^2-tau");
        let (u, v) = (s.u.unwrap(), s.v.unwrap());
        let d = u.mul(&r, &m).mul(&r, &v);
        assert!(r.is_one(d.get(0, 0)) && r.is_zero(d.get(0, 1)) && r.is_zero(d.get(1, 0)));
        assert!(r.is_unit(&det(&r, &u)) && r.is_unit(&det(&r, &v)));
    }

    #[test]
    fn pid_kernel_spans() {
        // x*a - y*b over F_5[tau] with a = tau, b = tau^2 - 1
        let r = PolyRing::new(FiniteField::prime(5).unwrap());
        let a = r.x();
        let b = r.sub(&r.mul(&a, &a), &r.one());
        let m = SparseMatrix::from_triplets(&r, 1, 2, vec![(0, 0, a.clone()), (0, 1, b.clone())]);
        let ker = kernel(&r, &m);
        assert_eq!(ker.len(), 1);
        // generator is (b, -a) up to a unit
        let (_, n0) = r.normalize(&ker[0][0]);
        assert_eq!(n0, r.normalize(&b).1);
    }

    #[test]
    fn tagged_basis_coordinates() {
        let k = Rationals;
        let mut tb = TaggedBasis::new(k, 3, 1);
        let v = |a: i64, b: i64, c: i64| vec![k.from_int(a), k.from_int(b), k.from_int(c)];
        tb.insert(&v(1, 1, 0), vec![k.from_int(0)]);
        tb.insert(&v(0, 1, 1), vec![k.from_int(1)]);
        assert_eq!(tb.coordinates(&v(2, 3, 1)), Some(vec![k.from_int(1)]));
        assert_eq!(tb.coordinates(&v(0, 0, 1)), None);
    }
}
