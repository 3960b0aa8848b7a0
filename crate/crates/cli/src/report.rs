//! The report document: one `key: value` pair per line, lists in brackets.

use std::fmt::Display;

use novikov_core::cuplen::{CupLengthReport, CupMode, FactorCochain};
use novikov_core::massey::{SpectralPage, SurvivorBasis};
use novikov_core::novikov::NovikovReport;
use novikov_core::{Field, PolyRing, Ring};

#[derive(Default)]
pub struct Report {
    lines: Vec<(String, String)>,
}

pub fn list<T: Display>(items: impl IntoIterator<Item = T>) -> String {
    let parts: Vec<String> = items.into_iter().map(|t| t.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

fn elems<F: Field>(k: &F, v: &[F::Elem]) -> String {
    list(v.iter().map(|e| k.show(e)))
}

impl Report {
    pub fn put(&mut self, key: impl Into<String>, value: impl Display) {
        self.lines.push((key.into(), value.to_string()));
    }

    pub fn render(&self) -> String {
        self.lines.iter().map(|(k, v)| format!("{k}: {v}\n")).collect()
    }

    pub fn novikov<F: Field>(&mut self, k: &F, r: &NovikovReport<F::Elem>) {
        let pr = PolyRing::new(k.clone());
        self.put("novikov.betti", list(r.betti()));
        for d in &r.degrees {
            let q = d.degree;
            self.put(format!("novikov.h{q}.torsion"), list(d.torsion.iter().map(|f| pr.show(f))));
            let jumps = d.jumps.iter().map(|j| {
                let inv = k.inv(&j.point).expect("jump points are nonzero");
                format!("a={} a^-1={} excess={} multiplicity={}", k.show(&j.point), k.show(&inv), j.excess, j.multiplicity)
            });
            self.put(format!("novikov.h{q}.jumps"), list(jumps));
            self.put(format!("novikov.h{q}.unsplit"), list(d.unsplit.iter().map(|f| pr.show(f))));
        }
        let check = r.check_point.as_ref().map_or("none".to_string(), |a| k.show(a));
        self.put("novikov.check_point", check);
    }

    pub fn pages(&mut self, pages: &[SpectralPage], stabilization: usize) {
        self.put("massey.stabilization", stabilization);
        for p in pages {
            self.put(format!("massey.E{}.dims", p.r), list(&p.dims));
            self.put(format!("massey.E{}.ranks", p.r), list(&p.ranks));
            self.put(format!("massey.E{}.stable", p.r), p.stable);
        }
    }

    pub fn survivors<F: Field>(&mut self, k: &F, b: &SurvivorBasis<F::Elem>) {
        let q = b.degree;
        self.put(format!("survivors.h{q}.dim"), b.dim());
        for (i, v) in b.reps.iter().enumerate() {
            self.put(format!("survivors.h{q}.rep{i}"), elems(k, v));
        }
    }

    pub fn cuplength<F: Field>(&mut self, k: &F, r: &CupLengthReport<F::Elem>) {
        let pr = PolyRing::new(k.clone());
        let mode = match r.mode {
            CupMode::Massey => "massey",
            CupMode::Generic => "generic",
        };
        self.put("cuplength.mode", mode);
        self.put("cuplength.m", r.m);
        self.put("cuplength.critical_bound", r.critical_bound);
        self.put("cuplength.witness", list(r.witness.iter().map(|w| format!("{}:{}", w.degree, w.bundle))));
        self.put("cuplength.family", r.family);
        self.put("cuplength.excluded", list(r.excluded.iter().map(|a| k.show(a))));
        self.put("cuplength.unsplit", list(r.unsplit.iter().map(|f| pr.show(f))));
        for (i, w) in r.witness.iter().enumerate() {
            let c = match &w.cochain {
                FactorCochain::Constant(v) => elems(k, v),
                FactorCochain::Family(v) => {
                    let lr = novikov_core::LaurentRing::new(k.clone());
                    list(v.iter().map(|f| lr.show(f)))
                }
            };
            self.put(format!("cuplength.factor{i}"), c);
        }
    }
}
