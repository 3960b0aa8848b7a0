use std::process::{Command, Output};

fn novikov(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_novikov")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn value<'a>(report: &'a str, key: &str) -> &'a str {
    report
        .lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(": ")))
        .unwrap_or_else(|| panic!("no {key} in\n{report}"))
}

fn without_timing(report: &str) -> String {
    report.lines().filter(|l| !l.starts_with("elapsed_ms")).collect::<Vec<_>>().join("\n")
}

#[test]
fn surface_bound() {
    let o = novikov(&["bound", "example:surface2", "--field", "Q"]);
    assert!(o.status.success());
    let r = stdout(&o);
    assert_eq!(value(&r, "critical_bound"), "1");
    assert_eq!(value(&r, "cuplength.m"), "2");
    assert!(value(&r, "digest").starts_with("sha256:"));
}

#[test]
fn projective_handle_bound() {
    let o = novikov(&["bound", "example:rp3_handle", "--field", "2^2"]);
    assert!(o.status.success());
    assert_eq!(value(&stdout(&o), "critical_bound"), "2");
}

#[test]
fn circle_numbers() {
    let o = novikov(&["novikov", "example:circle", "--field", "Q"]);
    let r = stdout(&o);
    assert_eq!(value(&r, "novikov.betti"), "[0, 0]");
    for q in 0..2 {
        assert_eq!(value(&r, &format!("novikov.h{q}.jumps")), "[a=1 a^-1=1 excess=1 multiplicity=1]");
    }
}

#[test]
fn reports_are_deterministic() {
    for cmd in ["novikov", "massey", "survivors", "cuplength", "bound"] {
        let a = stdout(&novikov(&[cmd, "example:surface2"]));
        let b = stdout(&novikov(&[cmd, "example:surface2"]));
        assert_eq!(without_timing(&a), without_timing(&b), "{cmd}");
    }
}

#[test]
fn example_round_trip() {
    let dir = std::env::temp_dir().join(format!("novikov-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for name in ["circle", "torus2", "rp3_handle"] {
        let text = stdout(&novikov(&["example", name]));
        let path = dir.join(format!("{name}.txt"));
        std::fs::write(&path, &text).unwrap();
        let from_file = stdout(&novikov(&["massey", path.to_str().unwrap(), "--field", "2"]));
        let direct = stdout(&novikov(&["massey", &format!("example:{name}"), "--field", "2"]));
        assert_eq!(without_timing(&from_file), without_timing(&direct), "{name}");
        let again = stdout(&novikov(&["example", name]));
        assert_eq!(text, again);
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn max_page_truncates() {
    let r = stdout(&novikov(&["massey", "example:circle", "--max-page", "1"]));
    assert_eq!(value(&r, "massey.E1.dims"), "[1, 1]");
    assert!(!r.contains("massey.E2"));
}

#[test]
fn validation_failures_exit_one() {
    let o = novikov(&["novikov", "example:circle", "--field", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("invalid field"));
    let o = novikov(&["validate", "example:nowhere"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn parse_errors_carry_line_numbers() {
    let dir = std::env::temp_dir().join(format!("novikov-cli-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cases = [
        ("vertices 3\nsimplex 0 1\nsimplex 1 2\nsimplex 0 2\ncocycle xi\n  0 1 1\n  0 5 1\nend\n", "line 7"),
        ("vertices 3\nsimplex 0 1 2\nfrobnicate\n", "line 3"),
        ("vertices 3\nsimplex 0 1 2\ncocycle xi\n  0 1 1\n", "line 3"),
        ("vertices 2\nsimplex 0 1\ncocycle xi\n  0 1 x\nend\n", "line 4"),
    ];
    for (i, (text, line)) in cases.iter().enumerate() {
        let path = dir.join(format!("bad{i}.txt"));
        std::fs::write(&path, text).unwrap();
        let o = novikov(&["validate", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(1), "case {i}");
        let err = String::from_utf8_lossy(&o.stderr);
        assert!(err.contains(line), "case {i}: {err}");
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn explicit_bundles_and_options() {
    let dir = std::env::temp_dir().join(format!("novikov-cli-opt-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let mut text = stdout(&novikov(&["example", "surface2"]));
    // (-1)^xi on a rank-two fiber, read off the cocycle block
    let xi_rows: Vec<String> = text
        .split("cocycle xi\n")
        .nth(1)
        .unwrap()
        .lines()
        .take_while(|l| *l != "end")
        .filter_map(|l| {
            let w: Vec<i64> = l.split_whitespace().map(|s| s.parse().unwrap()).collect();
            (w[2] % 2 != 0).then(|| format!("  {} {} -1 0 0 -1\n", w[0], w[1]))
        })
        .collect();
    text.push_str(&format!("bundle minus rank 2\n{}end\n", xi_rows.concat()));
    text.push_str("bundle two twist xi 2\noption generic two two\n");
    let path = dir.join("surface2.txt");
    std::fs::write(&path, &text).unwrap();
    let r = stdout(&novikov(&["validate", path.to_str().unwrap()]));
    assert_eq!(value(&r, "bundles"), "[minus:rank2, two:rank1]");
    let r = stdout(&novikov(&["bound", path.to_str().unwrap()]));
    assert!(value(&r, "bound.runs").contains("generic(two,two)"), "{r}");
    assert_eq!(value(&r, "critical_bound"), "1");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn selftest_passes() {
    let o = novikov(&["selftest", "--field", "5", "--seed", "7"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = stdout(&o);
    assert_eq!(value(&r, "failures"), "0");
    assert!(r.contains("check.surface2.leibniz: ok"));
}
