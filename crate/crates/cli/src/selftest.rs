//! Cross-checks over the corpus and seeded random complexes.

use novikov_core::checks::{self, CheckResult};
use novikov_core::complexes::FlatBundle;
use novikov_core::corpus;
use novikov_core::Field;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::report::Report;

pub const RANDOM_COMPLEXES: usize = 20;

/// Runs every check and records `check.<label>: ok` or the failure; returns
/// the number of failures.
pub fn run<F: Field>(k: &F, seed: u64, report: &mut Report) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    let mut record = |label: String, r: CheckResult| {
        match r {
            Ok(()) => report.put(format!("check.{label}"), "ok"),
            Err(e) => {
                failures += 1;
                report.put(format!("check.{label}"), format!("FAIL {e}"));
            }
        }
    };
    for name in corpus::NAMES {
        let s = corpus::build(name).expect("corpus spaces build");
        let triv = FlatBundle::trivial(k, &s.x, 1);
        record(format!("{name}.spectral"), checks::spectral_oracle(k, &s.x, &s.xi));
        let pts: Vec<_> = (0..5).map(|_| checks::random_unit(k, &mut rng)).collect();
        record(format!("{name}.uct"), checks::uct_check(k, &s.x, &s.xi, &triv, &pts));
        record(format!("{name}.duality"), checks::duality_check(k, &s.x, &s.xi));
        record(format!("{name}.gauge"), checks::gauge_check(k, &s.x, &s.xi, &mut rng));
        if let Some(cut) = s.cut_presentation(k) {
            record(format!("{name}.cut"), checks::cut_check(k, &cut, &pts));
            let t = checks::random_unit(k, &mut rng);
            if !k.is_zero(&k.add(&k.one(), &t)) {
                record(format!("{name}.leibniz"), checks::leibniz_check(k, &cut, &t, 100, &mut rng));
            }
        }
    }
    for i in 0..RANDOM_COMPLEXES {
        let (x, z) = checks::random_complex(&mut rng);
        let triv = FlatBundle::trivial(k, &x, 1);
        record(format!("random{i}.spectral"), checks::spectral_oracle(k, &x, &z));
        let pts: Vec<_> = (0..5).map(|_| checks::random_unit(k, &mut rng)).collect();
        record(format!("random{i}.uct"), checks::uct_check(k, &x, &z, &triv, &pts));
    }
    failures
}
