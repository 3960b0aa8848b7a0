//! Deterministic triangulations of the example spaces: circle, tori,
//! orientable surfaces, real projective spaces, `S^1 x S^{n-1}`, connected
//! sums and products with a circle, each with named integral cocycles, an
//! optional cut along a codimension-one subcomplex and bundle recipes.

use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::{Field, Rationals};
use crate::complexes::{CutPresentation, FlatBundle, IntegralCocycle, SimplicialComplex};
use crate::linalg::Matrix;
use crate::Error;

/// How the parameter of a rank-one recipe `a^z` is chosen in a given field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TwistParameter {
    Integer(i64),
    /// The canonical primitive `n`-th root of unity of the field.
    RootOfUnity(u64),
}

/// The flat line bundle `a^z` for a named cocycle `z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleRecipe {
    pub name: String,
    pub cocycle: String,
    pub parameter: TwistParameter,
}

/// `X` cut along a full subcomplex `V`, recorded as topology only; the
/// bundle data (trivial `F_0`, identity `sigma`) is supplied per field.
/// The plus copy of `V` keeps the labels of `X`, the minus copy is appended
/// after the last vertex of `X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutTopology {
    pub n: SimplicialComplex,
    pub v: SimplicialComplex,
    pub i_plus: Vec<usize>,
    pub i_minus: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct NamedSpace {
    pub name: String,
    pub x: SimplicialComplex,
    pub xi: IntegralCocycle,
    pub cocycles: Vec<(String, IntegralCocycle)>,
    pub cut: Option<CutTopology>,
    pub bundles: Vec<BundleRecipe>,
}

fn circle_complex() -> SimplicialComplex {
    SimplicialComplex::from_facets(3, [[0, 1], [0, 2], [1, 2]]).unwrap()
}

/// The 7-vertex torus: triangles `{i, i+1, i+3}` and `{i, i+2, i+3}` mod 7.
fn torus7() -> SimplicialComplex {
    let mut facets = Vec::new();
    for i in 0..7 {
        facets.push([i, (i + 1) % 7, (i + 3) % 7]);
        facets.push([i, (i + 2) % 7, (i + 3) % 7]);
    }
    SimplicialComplex::from_facets(7, facets).unwrap()
}

/// The lift to the plane of the edge `u -> v` of [`torus7`], as a step in
/// `{+-1, +-2, +-3}`.
fn torus7_step(u: usize, v: usize) -> i64 {
    let d = (v as i64 - u as i64).rem_euclid(7);
    if d <= 3 {
        d
    } else {
        d - 7
    }
}

/// Two cocycles on [`torus7`] forming a basis of `H^1(T^2; Z)`.
fn torus7_coordinates(x: &SimplicialComplex) -> (IntegralCocycle, IntegralCocycle) {
    let mut first = Vec::new();
    let mut second = Vec::new();
    for e in x.simplices(1) {
        let (u, v) = (e[0], e[1]);
        let s = torus7_step(u, v);
        first.push((u as i64 + s - v as i64) / 7);
        // sevenfold increment of the second coordinate per unit step
        let inc = match s.abs() {
            1 => -2,
            2 => 3,
            _ => 1,
        } * s.signum();
        let num = (5 * u as i64) % 7 + inc - (5 * v as i64) % 7;
        debug_assert_eq!(num % 7, 0);
        second.push(num / 7);
    }
    (
        IntegralCocycle::from_values(x, first).unwrap(),
        IntegralCocycle::from_values(x, second).unwrap(),
    )
}

/// The 6-vertex real projective plane.
fn rp2_complex() -> SimplicialComplex {
    let t = [
        [0, 1, 2],
        [0, 2, 3],
        [0, 3, 4],
        [0, 4, 5],
        [0, 1, 5],
        [1, 2, 4],
        [2, 3, 5],
        [1, 3, 4],
        [2, 4, 5],
        [1, 3, 5],
    ];
    SimplicialComplex::from_facets(6, t).unwrap()
}

/// `RP^3` as the barycentric subdivision of the boundary of the 4-dimensional
/// cross-polytope modulo the antipodal map. Vertices are nonzero sign vectors
/// in `{-1, 0, 1}^4` up to sign; tetrahedra are full flags of nested supports.
fn rp3_complex() -> SimplicialComplex {
    let canon = |s: [i8; 4]| -> [i8; 4] {
        let lead = *s.iter().find(|&&c| c != 0).unwrap();
        s.map(|c| c * lead)
    };
    let mut verts = BTreeSet::new();
    for code in 1..81u32 {
        let mut s = [0i8; 4];
        let mut c = code;
        for x in &mut s {
            *x = (c % 3) as i8 - 1;
            c /= 3;
        }
        if s.iter().any(|&c| c != 0) {
            verts.insert(canon(s));
        }
    }
    let label: BTreeMap<[i8; 4], usize> = verts.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let mut facets = BTreeSet::new();
    for perm in permutations4() {
        for signs in 0..16u32 {
            let mut s = [0i8; 4];
            let mut tet = Vec::with_capacity(4);
            for &axis in &perm {
                s[axis] = if signs >> axis & 1 == 1 { -1 } else { 1 };
                tet.push(label[&canon(s)]);
            }
            tet.sort_unstable();
            facets.insert(tet);
        }
    }
    SimplicialComplex::from_facets(verts.len(), facets).unwrap()
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                if a != b && a != c && b != c {
                    out.push([a, b, c, 6 - a - b - c]);
                }
            }
        }
    }
    out
}

/// `S^n` as the boundary of the `(n+1)`-simplex.
fn sphere_complex(n: usize) -> SimplicialComplex {
    let facets: Vec<Vec<usize>> = (0..=n + 1).map(|skip| (0..=n + 1).filter(|&v| v != skip).collect()).collect();
    SimplicialComplex::from_facets(n + 2, facets).unwrap()
}

/// Push `z` forward along an injective vertex map into `dst`; edges of `dst`
/// without a preimage get 0.
fn push_cocycle(src: &SimplicialComplex, z: &IntegralCocycle, map: &[usize], dst: &SimplicialComplex) -> IntegralCocycle {
    let mut vals = vec![0i64; dst.count(1)];
    for (e, &val) in src.simplices(1).iter().zip(z.values()) {
        let (a, b) = (map[e[0]], map[e[1]]);
        let idx = dst.edge_index(a, b).expect("edge maps to an edge");
        vals[idx] = if a < b { val } else { -val };
    }
    IntegralCocycle::from_values(dst, vals).unwrap()
}

/// A cohomologous cocycle vanishing on every edge of the simplex `s`.
fn gauge_off(x: &SimplicialComplex, z: &IntegralCocycle, s: &[usize]) -> IntegralCocycle {
    let mut h = vec![0i64; x.vertex_count()];
    for &v in &s[1..] {
        h[v] = z.value(x, s[0], v).unwrap();
    }
    z.add(&IntegralCocycle::coboundary(x, &h).neg())
}

/// Pull back along a projection of a product built by
/// [`SimplicialComplex::product`]; `proj` maps product vertices to factor
/// vertices.
fn pull_back(factor: &SimplicialComplex, z: &IntegralCocycle, prod: &SimplicialComplex, proj: impl Fn(usize) -> usize) -> IntegralCocycle {
    let vals = prod
        .simplices(1)
        .iter()
        .map(|e| {
            let (a, b) = (proj(e[0]), proj(e[1]));
            if a == b {
                0
            } else {
                z.value(factor, a, b).unwrap()
            }
        })
        .collect();
    IntegralCocycle::from_values(prod, vals).unwrap()
}

/// Do `a` and `b` differ by an integral coboundary? (`x` connected)
pub fn cohomologous(x: &SimplicialComplex, a: &IntegralCocycle, b: &IntegralCocycle) -> bool {
    a.add(&b.neg()).tree_gauge(x).0.is_zero()
}

fn find(parent: &mut [usize], mut a: usize) -> usize {
    while parent[a] != a {
        parent[a] = parent[parent[a]];
        a = parent[a];
    }
    a
}

fn unite(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        parent[ra.max(rb)] = ra.min(rb);
    }
}

impl CutTopology {
    /// Cut the pure complex `x` along the full subcomplex spanned by `verts`.
    /// Corners `(top simplex, vertex of V)` are joined across codimension-one
    /// faces not contained in `V` and within each top simplex; there must be
    /// exactly two classes, and the one holding the least corner (or the
    /// other one, if `swap`) becomes the plus side.
    pub fn along(x: &SimplicialComplex, verts: &BTreeSet<usize>, swap: bool) -> Result<Self, Error> {
        let top = x.dim();
        if top == 0 {
            return Err(Error::Invalid("cannot cut a zero-dimensional complex".into()));
        }
        if x.facets().iter().any(|f| f.len() != top + 1) {
            return Err(Error::Invalid("cuts need a pure complex".into()));
        }
        let tops = x.simplices(top);
        let mut corner = BTreeMap::new();
        for (i, s) in tops.iter().enumerate() {
            for &v in s.iter().filter(|v| verts.contains(v)) {
                let id = corner.len();
                corner.insert((i, v), id);
            }
        }
        let mut parent: Vec<usize> = (0..corner.len()).collect();
        let mut cofaces: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for (i, s) in tops.iter().enumerate() {
            let inside: Vec<usize> = s.iter().copied().filter(|v| verts.contains(v)).collect();
            for w in inside.windows(2) {
                unite(&mut parent, corner[&(i, w[0])], corner[&(i, w[1])]);
            }
            for skip in 0..s.len() {
                let mut f = s.clone();
                f.remove(skip);
                if !f.iter().all(|v| verts.contains(v)) {
                    cofaces.entry(f).or_default().push(i);
                }
            }
        }
        for (f, around) in &cofaces {
            for &v in f.iter().filter(|v| verts.contains(v)) {
                for w in around.windows(2) {
                    unite(&mut parent, corner[&(w[0], v)], corner[&(w[1], v)]);
                }
            }
        }
        let roots: BTreeSet<usize> = (0..parent.len()).map(|c| find(&mut parent, c)).collect();
        if roots.len() != 2 {
            return Err(Error::Invalid(format!("cut locus has {} sides, expected 2", roots.len())));
        }
        // corner 0 is the least corner and is its own root
        let plus_root = if swap { *roots.iter().nth(1).unwrap() } else { 0 };
        let nx = x.vertex_count();
        let vlist: Vec<usize> = verts.iter().copied().collect();
        let pos: BTreeMap<usize, usize> = vlist.iter().enumerate().map(|(j, &v)| (v, j)).collect();
        let mut facets = Vec::with_capacity(tops.len());
        for (i, s) in tops.iter().enumerate() {
            let lifted: Vec<usize> = s
                .iter()
                .map(|&v| match corner.get(&(i, v)) {
                    Some(&c) if find(&mut parent, c) != plus_root => nx + pos[&v],
                    _ => v,
                })
                .collect();
            facets.push(lifted);
        }
        let n = SimplicialComplex::from_facets(nx + vlist.len(), facets)?;
        let vfaces: Vec<Vec<usize>> = (1..=top)
            .flat_map(|q| x.simplices(q).iter())
            .filter(|s| s.iter().all(|v| verts.contains(v)))
            .map(|s| s.iter().map(|v| pos[v]).collect())
            .collect();
        let v = SimplicialComplex::from_simplices(vlist.len(), vfaces)?;
        let i_minus = (0..vlist.len()).map(|j| nx + j).collect();
        Ok(CutTopology { n, v, i_plus: vlist, i_minus })
    }

    /// Trivial `F_0` of the given rank and identity fiber maps.
    pub fn presentation<F: Field>(&self, k: &F, rank: usize) -> CutPresentation<F> {
        CutPresentation {
            n: self.n.clone(),
            v: self.v.clone(),
            i_plus: self.i_plus.clone(),
            i_minus: self.i_minus.clone(),
            sigma: vec![Matrix::identity(k, rank); self.v.vertex_count()],
            f0: FlatBundle::trivial(k, &self.n, rank),
        }
    }

    /// The class of the cut on the glued complex, which is `x` itself.
    pub fn class(&self) -> Result<IntegralCocycle, Error> {
        Ok(self.presentation(&Rationals, 1).glue(&Rationals)?.z)
    }

    /// Cut `x` along `verts` with the sides chosen so that the cut class is
    /// `xi`.
    pub fn for_class(x: &SimplicialComplex, verts: &BTreeSet<usize>, xi: &IntegralCocycle) -> Result<Self, Error> {
        for swap in [false, true] {
            let cut = Self::along(x, verts, swap)?;
            let g = cut.presentation(&Rationals, 1).glue(&Rationals)?;
            if g.x != *x {
                return Err(Error::Invariant("gluing the cut does not give back the complex".into()));
            }
            if cohomologous(x, &g.z, xi) {
                return Ok(cut);
            }
        }
        Err(Error::Invalid("the cut is not dual to the given class".into()))
    }
}

impl NamedSpace {
    fn new(name: impl Into<String>, x: SimplicialComplex, xi: IntegralCocycle) -> Self {
        NamedSpace { name: name.into(), x, xi, cocycles: Vec::new(), cut: None, bundles: Vec::new() }
    }

    /// A named cocycle; `"xi"` is always defined.
    pub fn cocycle(&self, name: &str) -> Option<&IntegralCocycle> {
        if name == "xi" {
            return Some(&self.xi);
        }
        self.cocycles.iter().find(|(n, _)| n == name).map(|(_, z)| z)
    }

    /// Replace `xi` by a named cocycle (or by zero for `"0"`), dropping the
    /// cut unless it is dual to the new class.
    pub fn with_xi(mut self, name: &str) -> Result<Self, Error> {
        let z = if name == "0" {
            IntegralCocycle::zero(&self.x)
        } else {
            self.cocycle(name).cloned().ok_or_else(|| Error::Invalid(format!("no cocycle named {name}")))?
        };
        if let Some(cut) = &self.cut {
            if !cohomologous(&self.x, &cut.class()?, &z) {
                self.cut = None;
            }
        }
        self.xi = z;
        Ok(self)
    }

    /// Realize a bundle recipe over `k`.
    pub fn bundle<F: Field>(&self, k: &F, name: &str) -> Result<FlatBundle<F>, Error> {
        let r = self
            .bundles
            .iter()
            .find(|r| r.name == name)
            .ok_or_else(|| Error::Invalid(format!("no bundle named {name}")))?;
        let z = self.cocycle(&r.cocycle).ok_or_else(|| Error::Invalid(format!("no cocycle named {}", r.cocycle)))?;
        let a = match r.parameter {
            TwistParameter::Integer(i) => k.from_int(i),
            TwistParameter::RootOfUnity(n) => k.root_of_unity(n).ok_or_else(|| {
                Error::InvalidField(format!("{} has no primitive {n}-th root of unity", k.label()))
            })?,
        };
        FlatBundle::twist(k, &self.x, z, &a)
    }

    pub fn cut_presentation<F: Field>(&self, k: &F) -> Option<CutPresentation<F>> {
        self.cut.as_ref().map(|c| c.presentation(k, 1))
    }

    /// Cocycle conditions, and for a cut: validity, gluing back to `x` and
    /// duality to `xi`.
    pub fn validate(&self) -> Result<(), Error> {
        for (name, z) in std::iter::once(("xi", &self.xi)).chain(self.cocycles.iter().map(|(n, z)| (n.as_str(), z))) {
            if let Some(d) = z.violations(&self.x).first() {
                return Err(Error::Invalid(format!("{}: cocycle {name}: {d}", self.name)));
            }
        }
        if let Some(cut) = &self.cut {
            let p = cut.presentation(&Rationals, 1);
            p.validate(&Rationals)?;
            let g = p.glue(&Rationals)?;
            if g.x != self.x {
                return Err(Error::Invalid(format!("{}: cut does not glue back to the complex", self.name)));
            }
            if !cohomologous(&self.x, &g.z, &self.xi) {
                return Err(Error::Invalid(format!("{}: cut is not dual to xi", self.name)));
            }
        }
        Ok(())
    }
}

pub fn circle() -> NamedSpace {
    let x = circle_complex();
    let xi = IntegralCocycle::from_edges(&x, [(0, 1, 1)]).unwrap();
    let mut s = NamedSpace::new("circle", x, xi.clone());
    s.cocycles.push(("theta".into(), xi.clone()));
    s.cut = Some(CutTopology::for_class(&s.x, &BTreeSet::from([0]), &xi).unwrap());
    s
}

/// `T^n` for `n <= 3` with coordinate cocycles `x1..xn`; `xi = x1`, cut
/// along a curve dual to it.
pub fn torus(n: usize) -> Result<NamedSpace, Error> {
    match n {
        1 => {
            let mut s = circle();
            s.name = "torus1".into();
            s.cocycles = vec![("x1".into(), s.xi.clone())];
            Ok(s)
        }
        2 => {
            let x = torus7();
            let (a, b) = torus7_coordinates(&x);
            let mut s = NamedSpace::new("torus2", x, a.clone());
            s.cocycles = vec![("x1".into(), a.clone()), ("x2".into(), b)];
            s.cut = Some(CutTopology::for_class(&s.x, &BTreeSet::from([0, 1, 2]), &a)?);
            Ok(s)
        }
        3 => {
            let mut s = product_with_circle(&torus(2)?, CircleFactor::Base)?;
            s.name = "torus3".into();
            for (name, _) in &mut s.cocycles {
                if name == "theta" {
                    *name = "x3".into();
                }
            }
            Ok(s)
        }
        _ => Err(Error::Invalid(format!("torus of dimension {n} is not supported (1..=3)"))),
    }
}

/// `RP^n` for `n <= 3`; `xi = 0` for `n >= 2`.
pub fn rp(n: usize) -> Result<NamedSpace, Error> {
    let x = match n {
        1 => {
            let mut s = circle();
            s.name = "rp1".into();
            return Ok(s);
        }
        2 => rp2_complex(),
        3 => rp3_complex(),
        _ => return Err(Error::Invalid(format!("RP^{n} is not supported (1..=3)"))),
    };
    let xi = IntegralCocycle::zero(&x);
    Ok(NamedSpace::new(format!("rp{n}"), x, xi))
}

/// `S^1 x S^{n-1}` for `2 <= n <= 4`, `xi` the circle coordinate.
pub fn s1_x_sphere(n: usize) -> Result<NamedSpace, Error> {
    if !(2..=4).contains(&n) {
        return Err(Error::Invalid(format!("S^1 x S^{} is not supported (n in 2..=4)", n.wrapping_sub(1))));
    }
    let c = circle();
    let sph = sphere_complex(n - 1);
    let ns = sph.vertex_count();
    let x = SimplicialComplex::product(&c.x, &sph);
    let xi = pull_back(&c.x, &c.xi, &x, |v| v / ns);
    let mut s = NamedSpace::new(format!("s1_x_s{}", n - 1), x, xi.clone());
    s.cocycles.push(("theta".into(), xi.clone()));
    let verts = (0..ns).collect();
    s.cut = Some(CutTopology::for_class(&s.x, &verts, &xi)?);
    Ok(s)
}

/// `A # B`: remove the top simplices `sa` of `A` and `sb` of `B` and
/// identify their boundaries, matching vertices in increasing order. `A`
/// keeps its labels; the other vertices of `B` follow in order. Cocycles of
/// both summands are gauged to vanish on the removed simplex and extended by
/// zero; `xi` is the sum of the two classes. Returns the vertex map of `B`.
pub fn connected_sum(
    a: &NamedSpace,
    sa: &[usize],
    b: &NamedSpace,
    sb: &[usize],
    name: &str,
) -> Result<(NamedSpace, Vec<usize>), Error> {
    let d = a.x.dim();
    if d < 2 || b.x.dim() != d {
        return Err(Error::Invalid("connected sum needs equal dimensions >= 2".into()));
    }
    let (fa, fb) = (a.x.facets(), b.x.facets());
    if sa.len() != d + 1 || !fa.iter().any(|f| f == sa) || sb.len() != d + 1 || !fb.iter().any(|f| f == sb) {
        return Err(Error::Invalid("connected sum needs a top simplex in each summand".into()));
    }
    let na = a.x.vertex_count();
    let mut bmap = vec![usize::MAX; b.x.vertex_count()];
    for (&u, &v) in sb.iter().zip(sa) {
        bmap[u] = v;
    }
    let mut next = na;
    for slot in bmap.iter_mut().filter(|s| **s == usize::MAX) {
        *slot = next;
        next += 1;
    }
    let facets = fa
        .iter()
        .filter(|f| f.as_slice() != sa)
        .cloned()
        .chain(fb.iter().filter(|f| f.as_slice() != sb).map(|f| f.iter().map(|&v| bmap[v]).collect()));
    let x = SimplicialComplex::from_facets(next, facets.collect::<Vec<_>>())?;
    let ida: Vec<usize> = (0..na).collect();
    let from_a = |z: &IntegralCocycle| push_cocycle(&a.x, &gauge_off(&a.x, z, sa), &ida, &x);
    let from_b = |z: &IntegralCocycle| push_cocycle(&b.x, &gauge_off(&b.x, z, sb), &bmap, &x);
    let xi = from_a(&a.xi).add(&from_b(&b.xi));
    let mut s = NamedSpace::new(name, x.clone(), xi);
    for (n, z) in &a.cocycles {
        s.cocycles.push((n.clone(), from_a(z)));
    }
    for (n, z) in &b.cocycles {
        let mut n = n.clone();
        while s.cocycle(&n).is_some() {
            n.push('\'');
        }
        s.cocycles.push((n, from_b(z)));
    }
    for r in a.bundles.iter().chain(&b.bundles) {
        if !s.bundles.iter().any(|q| q.name == r.name) {
            s.bundles.push(r.clone());
        }
    }
    let carried = [(a, sa, &ida), (b, sb, &bmap)].into_iter().find_map(|(sp, removed, map)| {
        let cut = sp.cut.as_ref()?;
        if cut.i_plus.iter().any(|v| removed.contains(v)) {
            return None;
        }
        Some(cut.i_plus.iter().map(|&v| map[v]).collect::<BTreeSet<usize>>())
    });
    if let Some(verts) = carried {
        s.cut = CutTopology::for_class(&s.x, &verts, &s.xi).ok();
    }
    Ok((s, bmap))
}

/// Which factor of `A x S^1` carries `xi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CircleFactor {
    Base,
    Circle,
}

/// `A x S^1` with vertex `(a, b)` labelled `3a + b`. Cocycles of `A` are
/// pulled back under their names and the circle coordinate is `theta`.
pub fn product_with_circle(a: &NamedSpace, xi_from: CircleFactor) -> Result<NamedSpace, Error> {
    let c = circle();
    let x = SimplicialComplex::product(&a.x, &c.x);
    let up = |z: &IntegralCocycle| pull_back(&a.x, z, &x, |v| v / 3);
    let theta = pull_back(&c.x, &c.xi, &x, |v| v % 3);
    let (name, xi) = match xi_from {
        CircleFactor::Base => (format!("{}_x_s1", a.name), up(&a.xi)),
        CircleFactor::Circle => (format!("s1_x_{}", a.name), theta.clone()),
    };
    let mut s = NamedSpace::new(name, x.clone(), xi);
    s.cocycles = a.cocycles.iter().map(|(n, z)| (n.clone(), up(z))).collect();
    s.cocycles.push(("theta".into(), theta));
    s.bundles = a.bundles.clone();
    let verts: Option<BTreeSet<usize>> = match xi_from {
        CircleFactor::Base => a.cut.as_ref().map(|cut| cut.i_plus.iter().flat_map(|&v| (0..3).map(move |b| 3 * v + b)).collect()),
        CircleFactor::Circle => Some((0..a.x.vertex_count()).map(|v| 3 * v).collect()),
    };
    if let Some(verts) = verts {
        s.cut = Some(CutTopology::for_class(&s.x, &verts, &s.xi)?);
    }
    Ok(s)
}

/// The closed orientable surface of genus `g >= 2` as a chain of 7-vertex
/// tori. `xi` is dual to a nonseparating curve of the first torus (cut
/// along it); `v1`, `v2` are the coordinate classes of the last torus.
pub fn surface(g: usize) -> Result<NamedSpace, Error> {
    if g < 2 {
        return Err(Error::Invalid(format!("surface of genus {g} is not supported (g >= 2)")));
    }
    let mut acc = torus(2)?;
    acc.cocycles.clear();
    // the removed triangle of the previous torus, in current labels
    let mut hole = vec![3, 4, 6];
    for j in 1..g {
        let mut t = torus(2)?.with_xi("0")?;
        let last = j + 1 == g;
        if last {
            for (n, _) in &mut t.cocycles {
                *n = if n == "x1" { "v1".into() } else { "v2".into() };
            }
        } else {
            t.cocycles.clear();
        }
        let (sum, map) = connected_sum(&acc, &hole, &t, &[0, 1, 3], &format!("surface{g}"))?;
        hole = [2, 4, 5].iter().map(|&v| map[v]).collect();
        acc = sum;
    }
    if acc.cut.is_none() {
        return Err(Error::Invariant("surface lost its cut".into()));
    }
    Ok(acc)
}

/// `(v1, v2, xi)` on the genus-`g` surface.
pub fn dual_curve_cocycles(g: usize) -> Result<(IntegralCocycle, IntegralCocycle, IntegralCocycle), Error> {
    let s = surface(g)?;
    let get = |n: &str| s.cocycle(n).cloned().unwrap();
    Ok((get("v1"), get("v2"), get("xi")))
}

/// `RP^n # (S^1 x S^{n-1})` for `n in {2, 3}` with `xi` the handle class
/// and the recipe `E = omega^xi`, `omega` a primitive `n`-th root of unity.
pub fn rp_handle(n: usize) -> Result<NamedSpace, Error> {
    let a = rp(n)?;
    let b = s1_x_sphere(n)?;
    let cut_verts = b.cut.as_ref().map(|c| c.i_plus.clone()).unwrap_or_default();
    let sa = a.x.facets()[0].clone();
    let sb = b
        .x
        .facets()
        .into_iter()
        .find(|f| f.iter().all(|v| !cut_verts.contains(v)))
        .ok_or_else(|| Error::Invariant("no facet away from the cut".into()))?;
    let (mut s, _) = connected_sum(&a, &sa, &b, &sb, &format!("rp{n}_handle"))?;
    s.bundles.push(BundleRecipe { name: "E".into(), cocycle: "xi".into(), parameter: TwistParameter::RootOfUnity(n as u64) });
    Ok(s)
}

/// Names accepted by [`build`] besides the parametrized families
/// `torus<n>`, `surface<g>`, `rp<n>`, `s1_x_s<m>`.
pub const NAMES: &[&str] = &[
    "circle",
    "torus2",
    "torus3",
    "surface2",
    "surface3",
    "rp2",
    "rp3",
    "s1_x_s2",
    "rp3_handle",
    "surface2_x_s1",
    "s1_x_surface2",
];

pub fn build(name: &str) -> Result<NamedSpace, Error> {
    let num = |prefix: &str| name.strip_prefix(prefix).and_then(|r| r.parse::<usize>().ok());
    let s = match name {
        "circle" => circle(),
        "rp3_handle" => rp_handle(3)?,
        "rp2_handle" => rp_handle(2)?,
        "surface2_x_s1" => product_with_circle(&surface(2)?, CircleFactor::Base)?,
        "s1_x_surface2" => product_with_circle(&surface(2)?, CircleFactor::Circle)?,
        _ => {
            if let Some(n) = num("torus") {
                torus(n)?
            } else if let Some(g) = num("surface") {
                surface(g)?
            } else if let Some(n) = num("rp") {
                rp(n)?
            } else if let Some(m) = num("s1_x_s") {
                s1_x_sphere(m + 1)?
            } else {
                return Err(Error::Invalid(format!("unknown example space {name:?}")));
            }
        }
    };
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FiniteField;
    use crate::complexes::{cohomology_dims, twisted_complex_over_field};

    fn betti<F: Field>(k: &F, x: &SimplicialComplex) -> Vec<usize> {
        cohomology_dims(&twisted_complex_over_field(k, x, &FlatBundle::trivial(k, x, 1)))
    }

    /// Sum of `z` along a closed vertex path.
    fn period(x: &SimplicialComplex, z: &IntegralCocycle, path: &[usize]) -> i64 {
        path.windows(2).map(|w| z.value(x, w[0], w[1]).unwrap()).sum()
    }

    #[test]
    fn euler_characteristics_and_betti_numbers() {
        let f2 = FiniteField::prime(2).unwrap();
        let cases: &[(&str, i64, &[usize], &[usize])] = &[
            ("circle", 0, &[1, 1], &[1, 1]),
            ("torus2", 0, &[1, 2, 1], &[1, 2, 1]),
            ("torus3", 0, &[1, 3, 3, 1], &[1, 3, 3, 1]),
            ("surface2", -2, &[1, 4, 1], &[1, 4, 1]),
            ("surface3", -4, &[1, 6, 1], &[1, 6, 1]),
            ("rp2", 1, &[1, 0, 0], &[1, 1, 1]),
            ("rp3", 0, &[1, 0, 0, 1], &[1, 1, 1, 1]),
            ("s1_x_s2", 0, &[1, 1, 1, 1], &[1, 1, 1, 1]),
            ("rp3_handle", 0, &[1, 1, 1, 1], &[1, 2, 2, 1]),
        ];
        for &(name, chi, q, mod2) in cases {
            let s = build(name).unwrap();
            s.validate().unwrap();
            assert_eq!(s.x.euler_characteristic(), chi, "{name}");
            assert_eq!(betti(&Rationals, &s.x), q, "{name}");
            assert_eq!(betti(&f2, &s.x), mod2, "{name}");
        }
    }

    #[test]
    fn projective_three_space_is_a_closed_manifold() {
        let x = rp3_complex();
        assert_eq!((x.vertex_count(), x.count(3)), (40, 192));
        let mut around = vec![0usize; x.count(2)];
        for t in x.simplices(3) {
            for i in 0..4 {
                around[x.face_index(t, i)] += 1;
            }
        }
        assert!(around.iter().all(|&c| c == 2));
    }

    #[test]
    fn torus_coordinates_are_a_basis() {
        let s = torus(2).unwrap();
        let (a, b) = (s.cocycle("x1").unwrap(), s.cocycle("x2").unwrap());
        let long = [0, 1, 2, 3, 4, 5, 6, 0];
        let short = [0, 2, 1, 0];
        let m = [[period(&s.x, a, &long), period(&s.x, a, &short)], [period(&s.x, b, &long), period(&s.x, b, &short)]];
        assert_eq!((m[0][0] * m[1][1] - m[0][1] * m[1][0]).abs(), 1);
    }

    #[test]
    fn cuts_glue_back() {
        for name in ["circle", "torus2", "torus3", "surface2", "s1_x_s2", "rp3_handle"] {
            let s = build(name).unwrap();
            let cut = s.cut.as_ref().unwrap_or_else(|| panic!("{name} has no cut"));
            assert!(cohomologous(&s.x, &cut.class().unwrap(), &s.xi), "{name}");
            assert!(!s.xi.is_zero());
            assert_eq!(s.xi.period_gcd(&s.x), 1, "{name}");
        }
    }

    #[test]
    fn circle_cut_matches_hand_computation() {
        let c = circle();
        let cut = c.cut.unwrap();
        assert_eq!((cut.i_plus.clone(), cut.i_minus.clone()), (vec![0], vec![3]));
        assert_eq!(cut.n.simplices(1), &[vec![0, 1], vec![1, 2], vec![2, 3]]);
    }

    #[test]
    fn products_with_a_circle() {
        for (name, cut) in [("surface2_x_s1", true), ("s1_x_surface2", true)] {
            let s = build(name).unwrap();
            s.validate().unwrap();
            assert_eq!(s.cut.is_some(), cut);
            assert_eq!(betti(&Rationals, &s.x), [1, 5, 5, 1]);
        }
    }

    #[test]
    fn unsupported_parameters() {
        assert!(torus(4).is_err());
        assert!(surface(1).is_err());
        assert!(rp(4).is_err());
        assert!(build("klein").is_err());
        let t = torus(2).unwrap();
        let c = circle();
        assert!(connected_sum(&t, &[0, 1, 3], &c, &[0, 1], "bad").is_err());
    }
}
