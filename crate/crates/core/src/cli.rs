//! Command-line front end.
//!
//! Every subcommand starts its output with a `#` banner listing the
//! effective configuration, so a run can be repeated from its own output.
//! Exit codes: 0 on success, 1 when a relation check fails, 2 on usage,
//! parse or numerical errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::fixtures;
use crate::hecke::{
    apply, auto_relations, check_algebra, lambda_const, lambda_const_alt, parse_relation_specs, verify_relations, Branch,
    OperatorDescriptor, OperatorKind, VerifyOptions,
};
use crate::modular::{eta_multiplier, GL2Int};
use crate::series::{format_complex_sci, CoefficientSeries, Normalization, RelationReport};
use crate::solver::{refine_r, solve, SolverConfig};
use crate::whittaker::{whittaker_w, WhittakerParams};
use crate::{Error, Result};

/// Hecke operators and Fourier coefficients of Maass waveforms with the
/// eta multiplier.
#[derive(Debug, Parser)]
#[command(name = "maass-hecke", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Multiplier value v(A) = v_eta(A)^(2k)
    Multiplier(MultiplierArgs),
    /// Whittaker function W_{kappa, iR}(y)
    Whittaker(WhittakerArgs),
    /// The constant Lambda_{k,R} from both product formulas
    Lambda(LambdaArgs),
    /// Apply an operator to a coefficient file
    Apply(ApplyArgs),
    /// Check coefficient relations on a fixture or file
    Verify(VerifyArgs),
    /// Compute Fourier coefficients at a spectral parameter
    Solve(SolveArgs),
    /// Check Hecke algebra identities on truncated operator matrices
    Algebra(AlgebraArgs),
}

#[derive(Debug, Args)]
pub struct MultiplierArgs {
    #[arg(long)]
    pub k: u32,
    /// entries a,b,c,d of a matrix in SL(2,Z)
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    pub matrix: Vec<i64>,
}

#[derive(Debug, Args)]
pub struct WhittakerArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub kappa: f64,
    #[arg(long = "R")]
    pub r: f64,
    #[arg(long)]
    pub y: f64,
}

#[derive(Debug, Args)]
pub struct LambdaArgs {
    #[arg(long)]
    pub k: u32,
    #[arg(long = "R")]
    pub r: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OpName {
    #[value(name = "T")]
    T,
    #[value(name = "TBar")]
    TBar,
    #[value(name = "Theta")]
    Theta,
    #[value(name = "That")]
    That,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BranchName {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum NormName {
    C0,
    C1,
}

#[derive(Debug, Args)]
pub struct ApplyArgs {
    #[arg(long)]
    pub k: u32,
    #[arg(long, value_enum)]
    pub op: OpName,
    /// index; ignored for Theta
    #[arg(long, default_value_t = 1)]
    pub m: u64,
    /// branch of T; defaults to plus when k*m = k mod 12
    #[arg(long, value_enum)]
    pub branch: Option<BranchName>,
    #[arg(long)]
    pub coeffs: PathBuf,
    /// output file; stdout when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub k: u32,
    /// shipped fixture: k2, k3, k5 or k6
    #[arg(long, conflicts_with = "coeffs", required_unless_present = "coeffs")]
    pub fixture: Option<String>,
    #[arg(long)]
    pub coeffs: Option<PathBuf>,
    /// `auto` or a file with one relation per line
    #[arg(long, default_value = "auto")]
    pub relations: String,
    /// default 1e-6 for fixtures, 1e-4 for coefficient files
    #[arg(long)]
    pub tol: Option<f64>,
    /// also report alternate readings of known misprints
    #[arg(long)]
    pub errata: bool,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub k: u32,
    #[arg(long = "R")]
    pub r: f64,
    #[arg(long = "M", default_value_t = 25)]
    pub m: usize,
    #[arg(long = "Y", default_value_t = 0.4)]
    pub y: f64,
    /// samples per period; 2M + 30 when absent
    #[arg(long = "Q")]
    pub q: Option<usize>,
    #[arg(long, value_enum, default_value_t = NormName::C1, ignore_case = true)]
    pub norm: NormName,
    /// skip the second (low-height) stage
    #[arg(long)]
    pub no_refine: bool,
    /// second starting value for a secant search on R
    #[arg(long)]
    pub refine_r: Option<f64>,
    /// output file; stdout when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AlgebraArgs {
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub m: u64,
    #[arg(long)]
    pub n: u64,
    #[arg(long, default_value_t = 200)]
    pub trunc: u64,
    /// spectral parameter entering Lambda
    #[arg(long = "R", default_value_t = 1.0)]
    pub r: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
}

fn example_for(subcommand: Option<&str>) -> &'static str {
    match subcommand {
        Some("multiplier") => "maass-hecke multiplier --k 3 --matrix 1,1,0,1",
        Some("whittaker") => "maass-hecke whittaker --kappa 1 --R 2.9 --y 1.5",
        Some("lambda") => "maass-hecke lambda --k 6 --R 3.70330780105981",
        Some("apply") => "maass-hecke apply --k 2 --op T --m 7 --coeffs f.csv --out g.csv",
        Some("verify") => "maass-hecke verify --k 2 --fixture k2 --relations auto",
        Some("solve") => "maass-hecke solve --k 6 --R 3.70330780105981 --norm c0 --out k6.csv",
        Some("algebra") => "maass-hecke algebra --k 2 --m 7 --n 13 --trunc 200",
        _ => "maass-hecke verify --k 2 --fixture k2 --relations auto",
    }
}

/// Parse `argv` (including the program name), run, and return the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let sub = argv.get(1).and_then(|s| s.to_str());
            let _ = write!(err, "{e}");
            let _ = writeln!(err, "example: {}", example_for(sub));
            return 2;
        }
    };
    match execute(&cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if matches!(e, Error::Parse { .. } | Error::InvalidConfig(_) | Error::InvalidWeight(_) | Error::UnknownFixture(_)) {
                let _ = writeln!(err, "example: {}", example_for(Some(command_name(&cli.command))));
            }
            2
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Multiplier(_) => "multiplier",
        Command::Whittaker(_) => "whittaker",
        Command::Lambda(_) => "lambda",
        Command::Apply(_) => "apply",
        Command::Verify(_) => "verify",
        Command::Solve(_) => "solve",
        Command::Algebra(_) => "algebra",
    }
}

fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

fn execute(command: &Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Multiplier(a) => multiplier(a, out),
        Command::Whittaker(a) => whittaker(a, out),
        Command::Lambda(a) => lambda(a, out),
        Command::Apply(a) => apply_cmd(a, out),
        Command::Verify(a) => verify(a, out),
        Command::Solve(a) => solve_cmd(a, out),
        Command::Algebra(a) => algebra(a, out),
    }
}

fn multiplier(a: &MultiplierArgs, out: &mut dyn Write) -> Result<i32> {
    let [p, q, r, s] = a.matrix[..] else {
        return Err(Error::InvalidConfig("--matrix needs four entries a,b,c,d".into()));
    };
    let m = GL2Int::new(p, q, r, s);
    writeln!(out, "# multiplier k={} matrix={p},{q},{r},{s}", a.k)?;
    let v = eta_multiplier(crate::arith::check_weight(i64::from(a.k))?, &m)?;
    let exact = match v.exponent() {
        0 => " = 1",
        6 => " = i",
        12 => " = -1",
        18 => " = -i",
        _ => "",
    };
    writeln!(out, "v = {v}{exact}")?;
    writeln!(out, "value = {}", format_complex_sci(v.to_complex()))?;
    Ok(0)
}

fn whittaker(a: &WhittakerArgs, out: &mut dyn Write) -> Result<i32> {
    writeln!(out, "# whittaker kappa={} R={} y={}", a.kappa, a.r, a.y)?;
    let w = whittaker_w(WhittakerParams::new(a.kappa, a.r, a.y))?;
    writeln!(out, "W = {}", sci(w.value))?;
    if w.underflow {
        writeln!(out, "underflow = true")?;
    }
    Ok(0)
}

fn lambda(a: &LambdaArgs, out: &mut dyn Write) -> Result<i32> {
    let k = crate::arith::check_weight(i64::from(a.k))?;
    writeln!(out, "# lambda k={k} R={}", a.r)?;
    let (x, y) = (lambda_const(k, a.r), lambda_const_alt(k, a.r));
    writeln!(out, "Lambda (squared products) = {}", sci(x))?;
    writeln!(out, "Lambda (single product)   = {}", sci(y))?;
    writeln!(out, "relative difference       = {}", sci(((x - y) / x).abs()))?;
    Ok(0)
}

fn check_k(k: u32, f: &CoefficientSeries) -> Result<()> {
    if f.k() != k {
        return Err(Error::InvalidConfig(format!("--k {k} does not match the series weight k={}", f.k())));
    }
    Ok(())
}

fn emit(series: &CoefficientSeries, path: Option<&PathBuf>, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => series.write_csv(p),
        None => Ok(out.write_all(series.to_csv_string().as_bytes())?),
    }
}

fn apply_cmd(a: &ApplyArgs, out: &mut dyn Write) -> Result<i32> {
    let f = CoefficientSeries::read_csv(&a.coeffs)?;
    check_k(a.k, &f)?;
    let kind = match a.op {
        OpName::T => OperatorKind::T,
        OpName::TBar => OperatorKind::TBar,
        OpName::Theta => OperatorKind::Theta,
        OpName::That => OperatorKind::That,
    };
    let op = match a.branch {
        Some(BranchName::Plus) => OperatorDescriptor::with_branch(kind, a.k, a.m, Branch::Plus)?,
        Some(BranchName::Minus) => OperatorDescriptor::with_branch(kind, a.k, a.m, Branch::Minus)?,
        None if kind == OperatorKind::Theta => OperatorDescriptor::theta(a.k)?,
        None => OperatorDescriptor::new(kind, a.k, a.m)?,
    };
    if a.out.is_some() {
        writeln!(out, "# apply k={} op={op} coeffs={}", a.k, a.coeffs.display())?;
    }
    let g = apply(&op, &f)?;
    emit(&g, a.out.as_ref(), out)?;
    if let Some(p) = &a.out {
        writeln!(out, "wrote c({}..={}) to {}", g.n_min(), g.n_max(), p.display())?;
    }
    Ok(0)
}

fn verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let (f, source, default_tol, anomaly) = match (&a.fixture, &a.coeffs) {
        (Some(name), _) => (fixtures::load(name)?, format!("fixture={name}"), 1e-6, fixtures::negative_column_anomaly(name)),
        (None, Some(path)) => (CoefficientSeries::read_csv(path)?, format!("coeffs={}", path.display()), 1e-4, None),
        (None, None) => return Err(Error::InvalidConfig("one of --fixture or --coeffs is required".into())),
    };
    check_k(a.k, &f)?;
    let specs =
        if a.relations == "auto" { auto_relations(&f) } else { parse_relation_specs(&std::fs::read_to_string(&a.relations)?)? };
    let tol = a.tol.unwrap_or(default_tol);
    writeln!(out, "# verify k={} {source} relations={} tol={tol:e} errata={}", a.k, a.relations, a.errata)?;
    let opts = VerifyOptions { tol, errata: a.errata, negative_anomaly: anomaly.map(str::to_owned) };
    let reports = verify_relations(&f, &specs, &opts)?;
    Ok(write_reports(&reports, out)?)
}

fn write_reports(reports: &[RelationReport], out: &mut dyn Write) -> std::io::Result<i32> {
    writeln!(out, "{}", RelationReport::CSV_HEADER)?;
    for r in reports {
        writeln!(out, "{}", r.to_csv_row())?;
    }
    let failed = reports.iter().filter(|r| r.status.is_fail()).count();
    let passed = reports.iter().filter(|r| r.status == crate::series::Status::Pass).count();
    writeln!(out, "# {passed} pass, {failed} fail, {} skipped", reports.len() - passed - failed)?;
    Ok(if failed > 0 { 1 } else { 0 })
}

fn solve_cmd(a: &SolveArgs, out: &mut dyn Write) -> Result<i32> {
    let mut config = SolverConfig::new(a.k, a.r)
        .with_m(a.m)
        .with_y(a.y)
        .with_normalization(match a.norm {
            NormName::C0 => Normalization::C0,
            NormName::C1 => Normalization::C1,
        })
        .with_refine(!a.no_refine);
    if let Some(q) = a.q {
        config = config.with_q(q);
    }
    config.validate()?;
    writeln!(
        out,
        "# solve k={} R={} M={} Y={} Q={} norm={} refine={}",
        config.k,
        config.r,
        config.m,
        config.y,
        config.q,
        config.normalization.as_str(),
        config.refine
    )?;
    if let Some(r1) = a.refine_r {
        config.r = refine_r(&config, a.r, r1, 1e-12, 30)?;
        writeln!(out, "# refined R = {}", sci(config.r))?;
    }
    let solution = solve(&config)?;
    writeln!(out, "# condition = {}", sci(solution.condition))?;
    writeln!(out, "# residual = {}", sci(solution.residual))?;
    emit(&solution.series, a.out.as_ref(), out)?;
    if let Some(p) = &a.out {
        writeln!(out, "wrote c({}..={}) to {}", solution.series.n_min(), solution.series.n_max(), p.display())?;
    }
    Ok(0)
}

fn algebra(a: &AlgebraArgs, out: &mut dyn Write) -> Result<i32> {
    writeln!(out, "# algebra k={} m={} n={} trunc={} R={} tol={:e}", a.k, a.m, a.n, a.trunc, a.r, a.tol)?;
    let reports = check_algebra(a.k, a.m, a.n, a.trunc, a.r, a.tol)?;
    Ok(write_reports(&reports, out)?)
}
