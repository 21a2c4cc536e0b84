//! Multiplicativity relations between Fourier coefficients of an eigenform.
//!
//! Relation lines read `pos m n`, `neg m n`, `prop l`, `eig m n`, each
//! optionally followed by `abs` or `ratio` to override the residual
//! convention (and, for `eig`, by `lambda` or `mu`). Lines starting with
//! `#` are comments.

use std::fmt::Write as _;

use num_complex::Complex64;

use super::{eigenvalue_lambda, eigenvalue_mu, lambda_const};
use crate::arith::{big_d, chi_k, divisors, exact_div, gcd0, index_class};
use crate::modular::RootOfUnity;
use crate::series::{CoefficientSeries, RelationReport, ResidualConvention, SkipReason};
use crate::{Error, Result};

/// Which eigenvalue family an `eig` relation uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Eigen {
    Lambda,
    Mu,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RelationKind {
    /// `c(m)c(n) = c(0) Σ χ(d) c(...)`
    Pos { m: u64, n: u64 },
    /// `c(-m)c(-n) = Λ c(0) Σ χ(d) c(...)`
    Neg { m: u64, n: u64 },
    /// weight 6 only: `c(-l)c(0) = c(-1)c(l-1)`
    Prop { l: u64 },
    /// `λ_m λ_n = Σ χ(d) λ_{mn/d²}` or `μ_m μ_n = Λ Σ χ(d) λ_{mn/d²}`
    Eig { m: u64, n: u64, which: Option<Eigen> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RelationSpec {
    pub kind: RelationKind,
    pub convention: Option<ResidualConvention>,
}

impl RelationSpec {
    pub fn new(kind: RelationKind) -> Self {
        RelationSpec { kind, convention: None }
    }

    pub fn with_convention(mut self, convention: ResidualConvention) -> Self {
        self.convention = Some(convention);
        self
    }

    fn default_convention(&self) -> ResidualConvention {
        match self.kind {
            RelationKind::Pos { .. } | RelationKind::Eig { which: Some(Eigen::Lambda) | None, .. } => {
                ResidualConvention::Absolute
            }
            _ => ResidualConvention::Ratio,
        }
    }

    pub fn convention(&self) -> ResidualConvention {
        self.convention.unwrap_or_else(|| self.default_convention())
    }

    fn reads_negative_indices(&self) -> bool {
        matches!(
            self.kind,
            RelationKind::Neg { .. } | RelationKind::Prop { .. } | RelationKind::Eig { which: Some(Eigen::Mu), .. }
        )
    }
}

/// Settings for [`verify_relations`].
#[derive(Clone, Debug, PartialEq)]
pub struct VerifyOptions {
    pub tol: f64,
    /// also report relations that contain `Λ` with `Λ_{6,R}` in place of `Λ_{k,R}`
    pub errata: bool,
    /// when set, relations reading negative indices are reported as skipped with this note
    pub negative_anomaly: Option<String>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { tol: 1e-6, errata: false, negative_anomaly: None }
    }
}

/// Parse a relation list.
pub fn parse_relation_specs(text: &str) -> Result<Vec<RelationSpec>> {
    let mut out = Vec::new();
    for (j, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line: j + 1, msg };
        let mut tokens = line.split_whitespace();
        let kind = tokens.next().expect("line is not empty");
        let mut numbers = Vec::new();
        let mut convention = None;
        let mut which = None;
        for tok in tokens {
            match tok {
                "abs" => convention = Some(ResidualConvention::Absolute),
                "ratio" => convention = Some(ResidualConvention::Ratio),
                "lambda" => which = Some(Eigen::Lambda),
                "mu" => which = Some(Eigen::Mu),
                _ => {
                    let v: u64 = tok.parse().map_err(|_| err(format!("expected a positive integer, got `{tok}`")))?;
                    if v == 0 {
                        return Err(err("indices must be positive".into()));
                    }
                    numbers.push(v);
                }
            }
        }
        let arity = |numbers: &[u64], want: usize| {
            if numbers.len() == want {
                Ok(())
            } else {
                Err(err(format!("`{kind}` takes {want} index(es), got {}", numbers.len())))
            }
        };
        let kind = match kind {
            "pos" => {
                arity(&numbers, 2)?;
                RelationKind::Pos { m: numbers[0], n: numbers[1] }
            }
            "neg" => {
                arity(&numbers, 2)?;
                RelationKind::Neg { m: numbers[0], n: numbers[1] }
            }
            "prop" => {
                // `prop l` or `prop 1 l`
                if numbers.len() == 2 && numbers[0] == 1 {
                    numbers.remove(0);
                }
                arity(&numbers, 1)?;
                RelationKind::Prop { l: numbers[0] }
            }
            "eig" => {
                arity(&numbers, 2)?;
                RelationKind::Eig { m: numbers[0], n: numbers[1], which }
            }
            other => return Err(err(format!("unknown relation `{other}` (expected pos, neg, prop or eig)"))),
        };
        if which.is_some() && !matches!(kind, RelationKind::Eig { .. }) {
            return Err(err("`lambda`/`mu` only apply to `eig`".into()));
        }
        out.push(RelationSpec { kind, convention });
    }
    Ok(out)
}

/// A term `χ · c(index)` of a relation, or a term known to vanish.
#[derive(Clone, Copy, Debug)]
struct Term {
    chi: RootOfUnity,
    index: Option<i64>,
}

fn chi_prefix(chi: RootOfUnity, first: bool) -> &'static str {
    match (chi, first) {
        (RootOfUnity::ONE, true) => "",
        (RootOfUnity::ONE, false) => " + ",
        (RootOfUnity::MINUS_ONE, true) => "-",
        (RootOfUnity::MINUS_ONE, false) => " - ",
        (RootOfUnity::I, true) => "i*",
        (RootOfUnity::I, false) => " + i*",
        (_, true) => "-i*",
        (_, false) => " - i*",
    }
}

fn describe_sum(terms: &[Term]) -> String {
    let mut s = String::new();
    let mut first = true;
    for t in terms {
        if let Some(i) = t.index {
            let _ = write!(s, "{}c({i})", chi_prefix(t.chi, first));
            first = false;
        }
    }
    if first {
        s.push('0');
    }
    s
}

/// Theorem-style divisor sum `Σ_{d | (a, b)} χ(d) c(k (ab/d² - 1) / 12)`.
fn divisor_terms(k: u32, a: i64, b: i64) -> Vec<Term> {
    divisors(gcd0(a, b))
        .into_iter()
        .map(|d| {
            let d = d as i64;
            Term { chi: chi_k(k, d), index: exact_div(i64::from(k) * (a * b / (d * d) - 1), 12) }
        })
        .collect()
}

fn eval_terms(f: &CoefficientSeries, terms: &[Term]) -> std::result::Result<Complex64, i64> {
    terms.iter().try_fold(Complex64::new(0.0, 0.0), |acc, t| match t.index {
        Some(i) => f.get(i).map(|c| acc + t.chi * c).ok_or(i),
        None => Ok(acc),
    })
}

/// `12m/k`, when it is an integer.
fn scaled_index(k: u32, m: u64) -> Result<i64> {
    exact_div(12 * m as i64, i64::from(k)).ok_or_else(|| Error::InadmissibleIndex {
        op: "relation",
        k,
        m,
        reason: format!("12*{m} is not divisible by {k}"),
    })
}

fn coprime_to_d(k: u32, m: u64, v: i64, label: &str) -> Result<()> {
    let d = i64::from(big_d(k));
    if gcd0(v, d) == 1 {
        Ok(())
    } else {
        Err(Error::InadmissibleIndex { op: "relation", k, m, reason: format!("{label} = {v} is not coprime to D = {d}") })
    }
}

/// Left factors, right-hand sum and scalar of a coefficient relation.
struct Instance {
    id: String,
    lhs: Vec<i64>,
    rhs_terms: Vec<Term>,
    /// `Λ` multiplies the right-hand side
    uses_lambda: bool,
}

fn instance(k: u32, kind: RelationKind) -> Result<Option<Instance>> {
    Ok(Some(match kind {
        RelationKind::Pos { m, n } => {
            let (m1, n1) = (scaled_index(k, m)?, scaled_index(k, n)?);
            coprime_to_d(k, m, m1 + 1, "12m/k + 1")?;
            coprime_to_d(k, n, n1 + 1, "12n/k + 1")?;
            let terms = divisor_terms(k, m1 + 1, n1 + 1);
            Instance {
                id: format!("pos {m} {n}: c({m})c({n}) = c(0)[{}]", describe_sum(&terms)),
                lhs: vec![m as i64, n as i64],
                rhs_terms: terms,
                uses_lambda: false,
            }
        }
        RelationKind::Neg { m, n } => {
            let (m1, n1) = (scaled_index(k, m)?, scaled_index(k, n)?);
            coprime_to_d(k, m, m1 - 1, "12m/k - 1")?;
            coprime_to_d(k, n, n1 - 1, "12n/k - 1")?;
            let terms = divisor_terms(k, m1 - 1, n1 - 1);
            Instance {
                id: format!("neg {m} {n}: c(-{m})c(-{n}) = Lambda c(0)[{}]", describe_sum(&terms)),
                lhs: vec![-(m as i64), -(n as i64)],
                rhs_terms: terms,
                uses_lambda: true,
            }
        }
        RelationKind::Prop { l } => {
            if k != 6 {
                return Err(Error::InadmissibleIndex {
                    op: "prop",
                    k,
                    m: l,
                    reason: "the proportionality relation exists only at weight 6".into(),
                });
            }
            let l = l as i64;
            Instance {
                id: format!("prop {l}: c(-{l})c(0) = c(-1)c({})", l - 1),
                lhs: vec![-l, 0],
                rhs_terms: vec![
                    Term { chi: RootOfUnity::ONE, index: Some(-1) },
                    Term { chi: RootOfUnity::ONE, index: Some(l - 1) },
                ],
                uses_lambda: false,
            }
        }
        RelationKind::Eig { .. } => return Ok(None),
    }))
}

fn missing(relation_id: String, convention: ResidualConvention, index: i64) -> RelationReport {
    RelationReport::skipped(relation_id, convention, SkipReason::MissingIndex(index))
}

fn verify_instance(f: &CoefficientSeries, spec: &RelationSpec, inst: Instance, opts: &VerifyOptions) -> Vec<RelationReport> {
    let convention = spec.convention();
    let lhs = inst.lhs.iter().try_fold(Complex64::new(1.0, 0.0), |acc, &i| f.get(i).map(|c| acc * c).ok_or(i));
    let lhs = match lhs {
        Ok(v) => v,
        Err(i) => return vec![missing(inst.id, convention, i)],
    };
    let c0 = match f.get(0) {
        Some(c) => c,
        None => return vec![missing(inst.id, convention, 0)],
    };
    let rhs = if let RelationKind::Prop { .. } = spec.kind {
        // product of the two listed coefficients
        match (f.get(-1), inst.rhs_terms[1].index.and_then(|i| f.get(i))) {
            (Some(a), Some(b)) => Ok(a * b),
            (None, _) => Err(-1),
            (_, None) => Err(inst.rhs_terms[1].index.unwrap_or(0)),
        }
    } else {
        eval_terms(f, &inst.rhs_terms).map(|s| c0 * s)
    };
    let rhs = match rhs {
        Ok(v) => v,
        Err(i) => return vec![missing(inst.id, convention, i)],
    };
    let lambda = lambda_const(f.k(), f.r());
    let scale = if inst.uses_lambda { lambda } else { 1.0 };
    let mut out = vec![finish(RelationReport::judged(inst.id.clone(), lhs, rhs * scale, convention, opts.tol), spec, opts)];
    if opts.errata && inst.uses_lambda && f.k() != 6 {
        let alt = lambda_const(6, f.r());
        out.push(
            RelationReport::judged(format!("{} [Lambda read as Lambda_6]", inst.id), lhs, rhs * alt, convention, opts.tol)
                .demoted(SkipReason::AlternateReading)
                .with_note(format!("alternate reading with Lambda_6 = {alt:.16e} in place of Lambda_{} = {lambda:.16e}", f.k())),
        );
    }
    out
}

fn finish(report: RelationReport, spec: &RelationSpec, opts: &VerifyOptions) -> RelationReport {
    match (&opts.negative_anomaly, spec.reads_negative_indices()) {
        (Some(note), true) => report.demoted(SkipReason::FixtureAnomaly).with_note(note.clone()),
        _ => report,
    }
}

fn verify_eigen(
    f: &CoefficientSeries,
    spec: &RelationSpec,
    m: u64,
    n: u64,
    which: Option<Eigen>,
    opts: &VerifyOptions,
) -> Result<RelationReport> {
    let k = f.k();
    let (cm, cn) = (index_class(k, m), index_class(k, n));
    let which = match which {
        Some(w) => w,
        None if cm.admits_plus() && cn.admits_plus() => Eigen::Lambda,
        None if cm.admits_minus() && cn.admits_minus() => Eigen::Mu,
        None => {
            return Err(Error::InadmissibleIndex {
                op: "eig",
                k,
                m,
                reason: format!("{m} and {n} are not in a common congruence class"),
            })
        }
    };
    let spec = RelationSpec { kind: RelationKind::Eig { m, n, which: Some(which) }, convention: spec.convention };
    let convention = spec.convention();
    let g = gcd0(m as i64, n as i64);
    let sum_desc: Vec<String> = divisors(g).into_iter().map(|d| format!("{} l{}", chi_k(k, d as i64), m * n / (d * d))).collect();
    let id = match which {
        Eigen::Lambda => format!("eig {m} {n}: l{m} l{n} = sum[{}]", sum_desc.join(", ")),
        Eigen::Mu => format!("eig {m} {n} mu: u{m} u{n} = Lambda sum[{}]", sum_desc.join(", ")),
    };
    let eval = || -> Result<(Complex64, Complex64)> {
        let lhs = match which {
            Eigen::Lambda => eigenvalue_lambda(m, f)? * eigenvalue_lambda(n, f)?,
            Eigen::Mu => eigenvalue_mu(m, f)? * eigenvalue_mu(n, f)?,
        };
        let mut rhs = Complex64::new(0.0, 0.0);
        for d in divisors(g) {
            rhs += chi_k(k, d as i64) * eigenvalue_lambda(m * n / (d * d), f)?;
        }
        if which == Eigen::Mu {
            rhs *= lambda_const(k, f.r());
        }
        Ok((lhs, rhs))
    };
    Ok(match eval() {
        Ok((lhs, rhs)) => finish(RelationReport::judged(id, lhs, rhs, convention, opts.tol), &spec, opts),
        Err(Error::MissingCoefficient(i)) => missing(id, convention, i),
        Err(e) => return Err(e),
    })
}

/// Evaluate each relation on `f`.
///
/// Relations that read an index outside the known block are skipped, never
/// judged. Inadmissible relations (wrong congruence or gcd side condition)
/// are errors.
pub fn verify_relations(f: &CoefficientSeries, specs: &[RelationSpec], opts: &VerifyOptions) -> Result<Vec<RelationReport>> {
    let mut out = Vec::new();
    for spec in specs {
        match spec.kind {
            RelationKind::Eig { m, n, which } => out.push(verify_eigen(f, spec, m, n, which, opts)?),
            kind => {
                let inst = instance(f.k(), kind)?.expect("coefficient relation");
                out.extend(verify_instance(f, spec, inst, opts));
            }
        }
    }
    Ok(out)
}

fn fully_known(f: &CoefficientSeries, inst: &Instance) -> bool {
    f.contains(0) && inst.lhs.iter().chain(inst.rhs_terms.iter().filter_map(|t| t.index.as_ref())).all(|&i| f.contains(i))
}

/// Every `pos`/`neg` pair `m <= n` (and, at weight 6, every `prop l`) that
/// is admissible and reads only known coefficients.
pub fn auto_relations(f: &CoefficientSeries) -> Vec<RelationSpec> {
    let k = f.k();
    let top = f.n_max().max(-f.n_min()).max(0) as u64;
    let mut out = Vec::new();
    let families: [fn(u64, u64) -> RelationKind; 2] = [|m, n| RelationKind::Pos { m, n }, |m, n| RelationKind::Neg { m, n }];
    for make in families {
        for m in 1..=top {
            for n in m..=top {
                let kind = make(m, n);
                if let Ok(Some(inst)) = instance(k, kind) {
                    if fully_known(f, &inst) {
                        out.push(RelationSpec::new(kind));
                    }
                }
            }
        }
    }
    if k == 6 {
        for l in 2..=top {
            let kind = RelationKind::Prop { l };
            if let Ok(Some(inst)) = instance(k, kind) {
                if fully_known(f, &inst) {
                    out.push(RelationSpec::new(kind));
                }
            }
        }
    }
    out
}
