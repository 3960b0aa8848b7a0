mod doc;
mod report;
mod selftest;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use novikov_core::complexes::FlatBundle;
use novikov_core::cuplen::{cuplength_generic, cuplength_massey, CupLengthReport};
use novikov_core::massey::{analyze, spectral_pages_from_modules};
use novikov_core::novikov::{novikov_numbers, xi_generic_test};
use novikov_core::{corpus, Error, Field, FieldKind, FieldSpec};
use sha2::{Digest, Sha256};

use doc::Document;
use report::{list, Report};

#[derive(Parser)]
#[command(name = "novikov", version, about = "Novikov numbers and cup-length bounds for closed 1-forms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and check a document.
    Validate(Input),
    /// Novikov numbers, torsion and jump points.
    Novikov(Input),
    /// Pages of the spectral sequence at tau = 1.
    Massey(Input),
    /// Classes of H^*(X; k) surviving to E_infinity.
    Survivors(Input),
    /// Cup-length bound with survivors as the first two factors.
    Cuplength(Input),
    /// Best bound over all modes, ending in the critical point count.
    Bound(Input),
    /// Print the document of a corpus space.
    Example {
        name: String,
        #[arg(long)]
        field: Option<String>,
    },
    /// Run the cross-checks.
    Selftest {
        #[arg(long, default_value = "Q")]
        field: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct Input {
    /// A document path or `example:<name>`.
    input: String,
    /// Q, p or p^m; overrides the document.
    #[arg(long)]
    field: Option<String>,
    /// Take the second factor from the survivors of -xi.
    #[arg(long)]
    strict_dual_survivor: bool,
    /// Print at most this many pages.
    #[arg(long)]
    max_page: Option<usize>,
    /// Only affects randomized sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Invariant(_) => 2,
        _ => 1,
    }
}

fn read_input(input: &str) -> Result<String, Error> {
    match input.strip_prefix("example:") {
        Some(name) => Ok(doc::emit(&corpus::build(name)?, None)),
        None => std::fs::read_to_string(input).map_err(|e| Error::Invalid(format!("{input}: {e}"))),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match dispatch(&cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn dispatch(command: &Command) -> Result<String, Error> {
    let start = Instant::now();
    match command {
        Command::Example { name, field } => {
            let field = field.as_deref().map(str::parse::<FieldSpec>).transpose()?;
            Ok(doc::emit(&corpus::build(name)?, field))
        }
        Command::Selftest { field, seed } => {
            let spec: FieldSpec = field.parse()?;
            let mut r = Report::default();
            header(&mut r, "selftest", None, &spec);
            r.put("seed", seed);
            let failures = match spec.make()? {
                FieldKind::Rationals(k) => selftest::run(&k, *seed, &mut r),
                FieldKind::Finite(k) => selftest::run(&k, *seed, &mut r),
            };
            r.put("failures", failures);
            r.put("elapsed_ms", start.elapsed().as_millis());
            if failures > 0 {
                eprint!("{}", r.render());
                return Err(Error::Invariant(format!("{failures} cross-checks failed")));
            }
            Ok(r.render())
        }
        Command::Validate(i) | Command::Novikov(i) | Command::Massey(i) | Command::Survivors(i)
        | Command::Cuplength(i) | Command::Bound(i) => {
            let text = read_input(&i.input)?;
            let d = Document::parse(&text)?;
            let spec = match &i.field {
                Some(f) => f.parse()?,
                None => d.field.unwrap_or(FieldSpec::Rationals),
            };
            let mut r = Report::default();
            header(&mut r, name(command), Some(&text), &spec);
            r.put("space", &d.name);
            match spec.make()? {
                FieldKind::Rationals(k) => run(&k, command, i, &d, &mut r)?,
                FieldKind::Finite(k) => run(&k, command, i, &d, &mut r)?,
            }
            r.put("elapsed_ms", start.elapsed().as_millis());
            Ok(r.render())
        }
    }
}

fn name(command: &Command) -> &'static str {
    match command {
        Command::Validate(_) => "validate",
        Command::Novikov(_) => "novikov",
        Command::Massey(_) => "massey",
        Command::Survivors(_) => "survivors",
        Command::Cuplength(_) => "cuplength",
        Command::Bound(_) => "bound",
        Command::Example { .. } => "example",
        Command::Selftest { .. } => "selftest",
    }
}

fn header(r: &mut Report, command: &str, text: Option<&str>, spec: &FieldSpec) {
    r.put("tool", concat!("novikov ", env!("CARGO_PKG_VERSION")));
    r.put("command", command);
    if let Some(t) = text {
        r.put("digest", format!("sha256:{}", hex::encode(Sha256::digest(t.as_bytes()))));
    }
    r.put("field", spec);
}

fn run<F: Field>(k: &F, command: &Command, i: &Input, d: &Document, r: &mut Report) -> Result<(), Error> {
    let space = d.space();
    space.validate()?;
    let bundles = d.bundles(k)?;
    let (x, z) = (&d.x, d.xi());
    let triv = FlatBundle::trivial(k, x, 1);
    let strict = i.strict_dual_survivor || d.options.strict_dual_survivor;
    let extra = || -> Result<Vec<(String, FlatBundle<F>)>, Error> {
        match &d.options.extra {
            None => Ok(bundles.clone()),
            Some(names) => names.iter().map(|n| Ok((n.clone(), d.bundle(k, n)?))).collect(),
        }
    };
    match command {
        Command::Validate(_) => {
            r.put("valid", true);
            r.put("simplices", list((0..=x.dim()).map(|q| x.count(q))));
            r.put("cocycles", list(d.cocycles.iter().map(|(n, _)| n)));
            r.put("xi", &d.xi_name);
            r.put("cut", d.cut.is_some());
            r.put("bundles", list(bundles.iter().map(|(n, b)| format!("{n}:rank{}", b.rank()))));
        }
        Command::Novikov(_) => r.novikov(k, &novikov_numbers(k, x, z, &triv)?),
        Command::Massey(_) => {
            let a = analyze(k, x, z, &triv)?;
            let max_page = i.max_page.or(d.options.max_page);
            r.pages(&spectral_pages_from_modules(k, &a.modules, max_page), a.stabilization);
        }
        Command::Survivors(_) => {
            let a = analyze(k, x, z, &triv)?;
            for q in 0..=x.dim() {
                r.survivors(k, &a.survivors(q));
            }
        }
        Command::Cuplength(_) => r.cuplength(k, &checked(x, z, cuplength_massey(k, x, z, &extra()?, strict)?)?),
        Command::Bound(_) => {
            let extra = extra()?;
            let mut runs = Vec::new();
            let mut best = checked(x, z, cuplength_massey(k, x, z, &extra, strict)?)?;
            runs.push(format!("massey m={}", best.m));
            let pairs: Vec<(&str, &str)> = match &d.options.generic {
                Some((a, b)) => vec![(a.as_str(), b.as_str())],
                None => bundles
                    .iter()
                    .flat_map(|(a, _)| bundles.iter().map(move |(b, _)| (a.as_str(), b.as_str())))
                    .collect(),
            };
            for (a, b) in pairs {
                let (e1, e2) = (d.bundle(k, a)?, d.bundle(k, b)?);
                if !xi_generic_test(k, x, z, &e1)?.generic || !xi_generic_test(k, x, z, &e2)?.generic {
                    runs.push(format!("generic({a},{b}) skipped"));
                    continue;
                }
                let rep = checked(x, z, cuplength_generic(k, x, z, (a, &e1), (b, &e2), &extra)?)?;
                runs.push(format!("generic({a},{b}) m={}", rep.m));
                if rep.m > best.m {
                    best = rep;
                }
            }
            r.put("bound.runs", list(runs));
            r.cuplength(k, &best);
            r.put("critical_bound", best.critical_bound);
        }
        Command::Example { .. } | Command::Selftest { .. } => unreachable!(),
    }
    Ok(())
}

/// A bound above `dim X` for a nonzero class would contradict `cl(xi) <= dim X`.
fn checked<E>(
    x: &novikov_core::complexes::SimplicialComplex,
    z: &novikov_core::complexes::IntegralCocycle,
    rep: CupLengthReport<E>,
) -> Result<CupLengthReport<E>, Error> {
    if !z.is_exact(x) && rep.m > x.dim() {
        return Err(Error::Invariant(format!("cup-length bound {} exceeds dim X = {}", rep.m, x.dim())));
    }
    Ok(rep)
}
