use std::path::PathBuf;
use std::process::{Command, Output};

use maass_hecke::series::CoefficientSeries;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maass-hecke")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("maass-hecke-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn verify_weight_two_fixture() {
    let o = run(&["verify", "--k", "2", "--fixture", "k2", "--relations", "auto"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.starts_with("# verify k=2 fixture=k2"));
    let row = out.lines().find(|l| l.starts_with("pos 1 2:")).expect("pos 1 2 row");
    let residual: f64 = row.split(',').nth(3).unwrap().parse().unwrap();
    assert!((residual - 5.9e-9).abs() < 0.1e-9, "{row}");
    assert!(row.contains(",Pass,"));
}

#[test]
fn verify_weight_three_fixture() {
    let o = run(&["verify", "--k", "3", "--fixture", "k3", "--errata"]);
    // positive rows reading c(6) and c(16) fail: the table lost its exponents
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    for line in out.lines().filter(|l| l.starts_with("neg ")) {
        assert!(line.contains("Skipped("), "{line}");
    }
    assert!(out.contains("[Lambda read as Lambda_6]"));
    assert!(out.lines().any(|l| l.starts_with("pos 1 2:") && l.contains(",Pass,")));
}

#[test]
fn multiplier_and_lambda() {
    let o = run(&["multiplier", "--k", "3", "--matrix", "1,1,0,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("v = e(1/4) = i"));

    let o = run(&["lambda", "--k", "6", "--R", "3.70330780105981"]);
    let out = stdout(&o);
    let values: Vec<f64> =
        out.lines().filter(|l| l.starts_with("Lambda")).map(|l| l.rsplit('=').next().unwrap().trim().parse().unwrap()).collect();
    assert_eq!(values.len(), 2);
    for v in values {
        assert!((v / 1.98096e7 - 1.0).abs() < 1e-5, "{v}");
    }
}

#[test]
fn whittaker_value() {
    let o = run(&["whittaker", "--kappa", "0", "--R", "2.0", "--y", "3.0"]);
    assert_eq!(o.status.code(), Some(0));
    let line = stdout(&o).lines().find(|l| l.starts_with("W = ")).unwrap().to_owned();
    let value: f64 = line[4..].parse().unwrap();
    assert!(value.is_finite() && value != 0.0);
}

#[test]
fn usage_errors_exit_two() {
    let o = run(&["solve", "--k", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--R"));
    assert!(stderr(&o).contains("example: maass-hecke solve"));

    let o = run(&["verify", "--k", "2", "--fixture", "k9"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown fixture"));

    let rel = scratch("bad-relations.txt");
    std::fs::write(&rel, "pos 1\n").unwrap();
    let o = run(&["verify", "--k", "2", "--fixture", "k2", "--relations", rel.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 1"), "{}", stderr(&o));

    let o = run(&["solve", "--k", "6", "--R", "3.7", "--Y", "0.9"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn solve_apply_verify_round_trip() {
    let coeffs = scratch("k6.csv");
    let o = run(&["solve", "--k", "6", "--R", "3.70330780105981", "--norm", "c0", "--out", coeffs.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("# solve k=6 R=3.70330780105981 M=25 Y=0.4 Q=80 norm=C0"));
    let f = CoefficientSeries::read_csv(&coeffs).unwrap();
    assert_eq!((f.n_min(), f.n_max()), (-25, 25));

    let image = scratch("t3.csv");
    let o = run(&[
        "apply",
        "--k",
        "6",
        "--op",
        "T",
        "--m",
        "3",
        "--coeffs",
        coeffs.to_str().unwrap(),
        "--out",
        image.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let g = CoefficientSeries::read_csv(&image).unwrap();
    let ratio = g.get(0).unwrap() / f.get(0).unwrap();
    assert!((g.get(1).unwrap() - ratio * f.get(1).unwrap()).norm() < 1e-6);

    let rel = scratch("eig.txt");
    std::fs::write(&rel, "# solver-backed\neig 3 5\neig 3 7\npos 1 2\nneg 1 1\nprop 5\n").unwrap();
    let o = run(&["verify", "--k", "6", "--coeffs", coeffs.to_str().unwrap(), "--relations", rel.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("tol=1e-4"));

    let o = run(&["apply", "--k", "6", "--op", "Theta", "--coeffs", coeffs.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("orientation=VBar"));
}

#[test]
fn output_is_deterministic() {
    let args = ["solve", "--k", "2", "--R", "2.95645894117486", "--Y", "0.45"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn algebra_reports() {
    let o = run(&["algebra", "--k", "2", "--m", "7", "--n", "13"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("T<7>T<13>"));
    let o = run(&["algebra", "--k", "2", "--m", "2", "--n", "3"]);
    assert_eq!(o.status.code(), Some(2));
}
