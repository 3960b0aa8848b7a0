//! The input document: a line-oriented description of a complex, its
//! cocycles, bundles, an optional cut and options. See the README for the
//! grammar.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use novikov_core::complexes::{FlatBundle, IntegralCocycle, SimplicialComplex};
use novikov_core::corpus::{CutTopology, NamedSpace, TwistParameter};
use novikov_core::linalg::Matrix;
use novikov_core::{Error, Field, FieldSpec};

/// How a bundle is given in the document.
#[derive(Clone, Debug, PartialEq)]
pub enum BundleSource {
    /// `a^z` with `a` a field element or `root:n`.
    Twist { cocycle: String, parameter: String },
    /// Matrices on listed edges `u v` (row-major entries), identity elsewhere.
    Matrices { rank: usize, edges: Vec<(usize, usize, Vec<String>)> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct BundleSpec {
    pub name: String,
    pub source: BundleSource,
    pub line: usize,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Options {
    pub max_page: Option<usize>,
    pub strict_dual_survivor: bool,
    pub extra: Option<Vec<String>>,
    pub generic: Option<(String, String)>,
}

#[derive(Clone, Debug)]
pub struct Document {
    pub field: Option<FieldSpec>,
    pub name: String,
    pub x: SimplicialComplex,
    pub xi_name: String,
    pub cocycles: Vec<(String, IntegralCocycle)>,
    pub cut: Option<CutTopology>,
    pub bundles: Vec<BundleSpec>,
    pub options: Options,
}

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse(format!("line {line}: {}", msg.into()))
}

fn num<T: std::str::FromStr>(line: usize, s: &str, what: &str) -> Result<T, Error> {
    s.parse().map_err(|_| err(line, format!("expected {what}, found {s:?}")))
}

enum Block {
    Cocycle(String, Vec<(usize, usize, usize, i64)>),
    Bundle(String, usize, Vec<(usize, usize, Vec<String>)>),
}

impl Document {
    pub fn parse(text: &str) -> Result<Self, Error> {
        let mut field = None;
        let mut name = String::from("unnamed");
        let mut vertices: Option<usize> = None;
        let mut simplices: Vec<Vec<usize>> = Vec::new();
        let mut xi_name = String::from("xi");
        let mut cocycle_rows: Vec<(String, usize, Vec<(usize, usize, usize, i64)>)> = Vec::new();
        let mut cut: Option<(usize, BTreeSet<usize>)> = None;
        let mut bundles = Vec::new();
        let mut options = Options::default();
        let mut block: Option<(usize, Block)> = None;
        for (i, raw) in text.lines().enumerate() {
            let ln = i + 1;
            let content = raw.split('#').next().unwrap().trim();
            if content.is_empty() {
                continue;
            }
            let words: Vec<&str> = content.split_whitespace().collect();
            if block.is_some() && words == ["end"] {
                match block.take().unwrap() {
                    (start, Block::Cocycle(n, rows)) => cocycle_rows.push((n, start, rows)),
                    (start, Block::Bundle(n, rank, edges)) => bundles.push(BundleSpec {
                        name: n,
                        source: BundleSource::Matrices { rank, edges },
                        line: start,
                    }),
                }
                continue;
            }
            if let Some((_, b)) = block.as_mut() {
                match b {
                    Block::Cocycle(_, rows) => {
                        if words.len() != 3 {
                            return Err(err(ln, "cocycle rows are `u v value`"));
                        }
                        let u = num(ln, words[0], "a vertex")?;
                        let v = num(ln, words[1], "a vertex")?;
                        rows.push((ln, u, v, num(ln, words[2], "an integer")?));
                    }
                    Block::Bundle(_, rank, edges) => {
                        let d = *rank;
                        if words.len() != 2 + d * d {
                            return Err(err(ln, format!("bundle rows are `u v` and {} matrix entries", d * d)));
                        }
                        let u = num(ln, words[0], "a vertex")?;
                        let v = num(ln, words[1], "a vertex")?;
                        edges.push((u, v, words[2..].iter().map(|s| s.to_string()).collect()));
                    }
                }
                continue;
            }
            match words[0] {
                "field" if words.len() == 2 => {
                    field = Some(words[1].parse::<FieldSpec>().map_err(|e| err(ln, e.to_string()))?)
                }
                "name" if words.len() >= 2 => name = words[1..].join(" "),
                "vertices" if words.len() == 2 => vertices = Some(num(ln, words[1], "a vertex count")?),
                "simplex" if words.len() >= 2 => {
                    let s = words[1..].iter().map(|w| num(ln, w, "a vertex")).collect::<Result<Vec<usize>, _>>()?;
                    simplices.push(s);
                }
                "cocycle" if words.len() == 2 => block = Some((ln, Block::Cocycle(words[1].into(), Vec::new()))),
                "xi" if words.len() == 2 => xi_name = words[1].into(),
                "cut" if words.len() >= 2 => {
                    let v = words[1..].iter().map(|w| num(ln, w, "a vertex")).collect::<Result<_, _>>()?;
                    cut = Some((ln, v));
                }
                "bundle" if words.len() == 5 && words[2] == "twist" => bundles.push(BundleSpec {
                    name: words[1].into(),
                    source: BundleSource::Twist { cocycle: words[3].into(), parameter: words[4].into() },
                    line: ln,
                }),
                "bundle" if words.len() == 4 && words[2] == "rank" => {
                    let rank: usize = num(ln, words[3], "a rank")?;
                    if rank == 0 {
                        return Err(err(ln, "bundle rank must be positive"));
                    }
                    block = Some((ln, Block::Bundle(words[1].into(), rank, Vec::new())));
                }
                "option" if words.len() >= 2 => match (words[1], &words[2..]) {
                    ("max_page", [r]) => options.max_page = Some(num(ln, r, "a page number")?),
                    ("strict_dual_survivor", []) => options.strict_dual_survivor = true,
                    ("extra", names) => options.extra = Some(names.iter().map(|s| s.to_string()).collect()),
                    ("generic", [a, b]) => options.generic = Some((a.to_string(), b.to_string())),
                    _ => return Err(err(ln, format!("unknown option {content:?}"))),
                },
                _ => return Err(err(ln, format!("cannot read {content:?}"))),
            }
        }
        if let Some((start, _)) = block {
            return Err(err(start, "block is not closed by `end`"));
        }
        let n = vertices.ok_or_else(|| err(1, "missing `vertices` line"))?;
        let x = SimplicialComplex::from_facets(n, simplices.iter()).map_err(|e| err(1, e.to_string()))?;
        let mut cocycles = Vec::new();
        for (cname, start, rows) in cocycle_rows {
            if cocycles.iter().any(|(c, _)| *c == cname) {
                return Err(err(start, format!("cocycle {cname} defined twice")));
            }
            for &(ln, u, v, _) in &rows {
                if x.edge_index(u, v).is_none() {
                    return Err(err(ln, format!("({u},{v}) is not an edge")));
                }
            }
            let z = IntegralCocycle::from_edges(&x, rows.iter().map(|&(_, u, v, c)| (u, v, c)))
                .map_err(|e| err(start, e.to_string()))?;
            cocycles.push((cname, z));
        }
        if !cocycles.iter().any(|(c, _)| *c == xi_name) {
            return Err(err(1, format!("no cocycle named {xi_name} for xi")));
        }
        let mut names = BTreeSet::new();
        for b in &bundles {
            if !names.insert(b.name.clone()) || b.name == "k" {
                return Err(err(b.line, format!("bundle name {} is reserved or repeated", b.name)));
            }
        }
        let mut doc = Document { field, name, x, xi_name, cocycles, cut: None, bundles, options };
        if let Some((ln, verts)) = cut {
            let c = CutTopology::for_class(&doc.x, &verts, doc.xi()).map_err(|e| err(ln, e.to_string()))?;
            doc.cut = Some(c);
        }
        Ok(doc)
    }

    pub fn xi(&self) -> &IntegralCocycle {
        &self.cocycles.iter().find(|(c, _)| *c == self.xi_name).unwrap().1
    }

    pub fn cocycle(&self, name: &str) -> Option<&IntegralCocycle> {
        self.cocycles.iter().find(|(c, _)| c == name).map(|(_, z)| z)
    }

    /// The same data as a corpus space (bundles are realized separately).
    pub fn space(&self) -> NamedSpace {
        NamedSpace {
            name: self.name.clone(),
            x: self.x.clone(),
            xi: self.xi().clone(),
            cocycles: self.cocycles.iter().filter(|(c, _)| *c != "xi").cloned().collect(),
            cut: self.cut.clone(),
            bundles: Vec::new(),
        }
    }

    pub fn bundle<F: Field>(&self, k: &F, name: &str) -> Result<FlatBundle<F>, Error> {
        let b = self
            .bundles
            .iter()
            .find(|b| b.name == name)
            .ok_or_else(|| Error::Invalid(format!("no bundle named {name}")))?;
        let at = |e: Error| Error::Invalid(format!("line {}: bundle {name}: {e}", b.line));
        match &b.source {
            BundleSource::Twist { cocycle, parameter } => {
                let z = self.cocycle(cocycle).ok_or_else(|| at(Error::Invalid(format!("no cocycle named {cocycle}"))))?;
                let a = match parameter.strip_prefix("root:") {
                    None if parameter.parse::<i64>().is_ok() => k.from_int(parameter.parse().unwrap()),
                    Some(n) => {
                        let n: u64 = n.parse().map_err(|_| at(Error::Invalid(format!("bad root order {n:?}"))))?;
                        k.root_of_unity(n).ok_or_else(|| {
                            Error::InvalidField(format!("{} has no primitive {n}-th root of unity", k.label()))
                        })?
                    }
                    None => k.parse(parameter).map_err(at)?,
                };
                FlatBundle::twist(k, &self.x, z, &a).map_err(at)
            }
            BundleSource::Matrices { rank, edges } => {
                let mut mats = Vec::new();
                for (u, v, entries) in edges {
                    let vals = entries.iter().map(|s| k.parse(s)).collect::<Result<Vec<_>, _>>().map_err(at)?;
                    let rows = vals.chunks(*rank).map(|r| r.to_vec()).collect();
                    mats.push((*u, *v, Matrix::from_rows(rows, *rank)));
                }
                FlatBundle::from_edges(k, &self.x, *rank, mats).map_err(at)
            }
        }
    }

    /// Every bundle of the document, realized over `k` and checked flat.
    pub fn bundles<F: Field>(&self, k: &F) -> Result<Vec<(String, FlatBundle<F>)>, Error> {
        self.bundles
            .iter()
            .map(|b| {
                let f = self.bundle(k, &b.name)?;
                if let Some(d) = f.violations(k, &self.x).first() {
                    return Err(Error::Invalid(format!("line {}: bundle {}: {d}", b.line, b.name)));
                }
                Ok((b.name.clone(), f))
            })
            .collect()
    }
}

/// The document for a corpus space.
pub fn emit(space: &NamedSpace, field: Option<FieldSpec>) -> String {
    let mut out = String::new();
    let x = &space.x;
    writeln!(out, "name {}", space.name).unwrap();
    if let Some(f) = field {
        writeln!(out, "field {f}").unwrap();
    }
    writeln!(out, "vertices {}", x.vertex_count()).unwrap();
    for f in x.facets() {
        let vs: Vec<String> = f.iter().map(|v| v.to_string()).collect();
        writeln!(out, "simplex {}", vs.join(" ")).unwrap();
    }
    let named = std::iter::once(("xi", &space.xi)).chain(space.cocycles.iter().map(|(n, z)| (n.as_str(), z)));
    for (name, z) in named {
        writeln!(out, "cocycle {name}").unwrap();
        for (e, &c) in x.simplices(1).iter().zip(z.values()) {
            if c != 0 {
                writeln!(out, "  {} {} {c}", e[0], e[1]).unwrap();
            }
        }
        writeln!(out, "end").unwrap();
    }
    if let Some(c) = &space.cut {
        let vs: Vec<String> = c.i_plus.iter().map(|v| v.to_string()).collect();
        writeln!(out, "cut {}", vs.join(" ")).unwrap();
    }
    for r in &space.bundles {
        let p = match r.parameter {
            TwistParameter::Integer(i) => i.to_string(),
            TwistParameter::RootOfUnity(n) => format!("root:{n}"),
        };
        writeln!(out, "bundle {} twist {} {p}", r.name, r.cocycle).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use novikov_core::{corpus, FiniteField};

    #[test]
    fn corpus_documents_round_trip() {
        let f4 = FiniteField::new(2, 2).unwrap();
        for name in corpus::NAMES {
            let s = corpus::build(name).unwrap();
            let d = Document::parse(&emit(&s, None)).unwrap();
            assert_eq!(d.x, s.x, "{name}");
            assert_eq!(d.xi(), &s.xi, "{name}");
            assert_eq!(d.cut, s.cut, "{name}");
            for r in &s.bundles {
                assert_eq!(d.bundle(&f4, &r.name).unwrap(), s.bundle(&f4, &r.name).unwrap(), "{name}");
            }
        }
    }

    #[test]
    fn comments_fields_and_options() {
        let text = "# a circle\nfield 3\nvertices 3\nsimplex 0 1\nsimplex 1 2\nsimplex 0 2  # closing edge\n\
                    cocycle w\n  0 1 1\nend\nxi w\noption max_page 2\noption extra\n";
        let d = Document::parse(text).unwrap();
        assert_eq!(d.field, Some(FieldSpec::Prime(3)));
        assert_eq!(d.xi_name, "w");
        assert_eq!(d.options.max_page, Some(2));
        assert_eq!(d.options.extra, Some(vec![]));
        let bad = text.replace("field 3", "field 6");
        assert!(matches!(Document::parse(&bad), Err(Error::Parse(m)) if m.starts_with("line 2")));
    }
}
