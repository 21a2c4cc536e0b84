//! Operator identities checked on row maps.
//!
//! A [`RowMap`] is the matrix of an operator restricted to a window
//! `[-M, M]` of basis indices. A row is kept only when every source index
//! it reads stays in the window, which is the same as applying the
//! operator to each unit series `e_j` truncated to the window.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{lambda_const, OperatorDescriptor};
use crate::arith::{chi_k, divisors, gcd0, index_class};
use crate::series::{Orientation, RelationReport, ResidualConvention, SkipReason, Status};
use crate::{Error, Result};

type Row = BTreeMap<i64, Complex64>;

/// Truncated matrix of a linear map on coefficient sequences.
#[derive(Clone, Debug, PartialEq)]
pub struct RowMap {
    bound: i64,
    domain: Orientation,
    codomain: Orientation,
    rows: Vec<Option<Row>>,
}

impl RowMap {
    /// Rows `-bound..=bound` of `op` acting on `domain`-oriented series.
    pub fn of_operator(op: &OperatorDescriptor, domain: Orientation, lambda: f64, bound: i64) -> Self {
        let rows = (-bound..=bound)
            .map(|n| {
                let mut row = Row::new();
                for (src, w) in op.row(n, domain, lambda) {
                    if src.abs() > bound {
                        return None;
                    }
                    *row.entry(src).or_default() += w;
                }
                Some(row)
            })
            .collect();
        RowMap { bound, domain, codomain: op.codomain(domain), rows }
    }

    pub fn identity(orientation: Orientation, bound: i64) -> Self {
        let rows = (-bound..=bound).map(|n| Some(Row::from([(n, Complex64::new(1.0, 0.0))]))).collect();
        RowMap { bound, domain: orientation, codomain: orientation, rows }
    }

    pub fn domain(&self) -> Orientation {
        self.domain
    }

    pub fn codomain(&self) -> Orientation {
        self.codomain
    }

    pub fn row(&self, n: i64) -> Option<&BTreeMap<i64, Complex64>> {
        if n.abs() > self.bound {
            return None;
        }
        self.rows[(n + self.bound) as usize].as_ref()
    }

    /// Number of rows whose full fetch set lies in the window.
    pub fn safe_rows(&self) -> usize {
        self.rows.iter().filter(|r| r.is_some()).count()
    }

    fn zero_like(&self, codomain: Orientation) -> Self {
        RowMap { bound: self.bound, domain: self.domain, codomain, rows: vec![Some(Row::new()); self.rows.len()] }
    }

    /// `self + s * other`; rows unknown in either operand stay unknown.
    pub fn add_scaled(&self, s: Complex64, other: &RowMap) -> Self {
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| match (a, b) {
                (Some(a), Some(b)) => {
                    let mut out = a.clone();
                    for (&j, &w) in b {
                        *out.entry(j).or_default() += s * w;
                    }
                    Some(out)
                }
                _ => None,
            })
            .collect();
        RowMap { rows, ..self.clone() }
    }
}

/// `outer ∘ inner`: apply `inner` first.
pub fn compose(outer: &RowMap, inner: &RowMap) -> RowMap {
    let rows = outer
        .rows
        .iter()
        .map(|row| {
            let row = row.as_ref()?;
            let mut out = Row::new();
            for (&j, &w) in row {
                for (&src, &v) in inner.row(j)? {
                    *out.entry(src).or_default() += w * v;
                }
            }
            Some(out)
        })
        .collect();
    RowMap { bound: outer.bound, domain: inner.domain, codomain: outer.codomain, rows }
}

/// Largest entry-wise difference over rows known in both maps, the worst
/// pair of entries, and how many rows were compared.
pub fn compare_maps(a: &RowMap, b: &RowMap) -> (f64, Complex64, Complex64, usize) {
    let zero = Complex64::new(0.0, 0.0);
    let (mut worst, mut wa, mut wb, mut count) = (0.0, zero, zero, 0);
    for (ra, rb) in a.rows.iter().zip(&b.rows) {
        let (Some(ra), Some(rb)) = (ra, rb) else { continue };
        count += 1;
        for j in ra.keys().chain(rb.keys()) {
            let (x, y) = (ra.get(j).copied().unwrap_or(zero), rb.get(j).copied().unwrap_or(zero));
            let diff = (x - y).norm();
            if diff > worst {
                (worst, wa, wb) = (diff, x, y);
            }
        }
    }
    (worst, wa, wb, count)
}

fn report(id: String, lhs: &RowMap, rhs: &RowMap, scale: f64, tol: f64) -> RelationReport {
    let (worst, wa, wb, count) = compare_maps(lhs, rhs);
    if count == 0 {
        return RelationReport::skipped(id, ResidualConvention::Absolute, SkipReason::Empty);
    }
    let residual = worst / scale;
    RelationReport {
        relation_id: id,
        lhs: Some(wa),
        rhs: Some(wb),
        residual: Some(residual),
        convention: ResidualConvention::Absolute,
        status: if residual < tol { Status::Pass } else { Status::Fail },
        note: format!("{count} safe rows; residual scaled by {scale:.6e}"),
    }
}

/// `Σ_{d | (m,n)} χ_k(d) X<mn/d²>` for an operator family `X`.
fn divisor_sum(k: u32, m: u64, n: u64, make: impl Fn(u64) -> Result<RowMap>) -> Result<RowMap> {
    let mut acc: Option<RowMap> = None;
    for d in divisors(gcd0(m as i64, n as i64)) {
        let term = make(m * n / (d * d))?;
        let chi = chi_k(k, d as i64).to_complex();
        acc = Some(match acc {
            None => term.zero_like(term.codomain()).add_scaled(chi, &term),
            Some(a) => a.add_scaled(chi, &term),
        });
    }
    Ok(acc.expect("1 divides every gcd"))
}

/// Check every composition identity that applies to the index pair `(m, n)`
/// at weight `k`, using the window `[-trunc, trunc]`.
///
/// - both indices in the plus class: `T<m>T<n> = Σ χ(d) T<mn/d²>`
/// - mixed classes: `T<m>T<n>` with the minus operator applied last
/// - both in the minus class: `T̄<m>T<n> = Σ χ(d) T<mn/d²>`,
///   `T̂<m>T̂<n> = Λ Σ χ(d) T<mn/d²>`, and `T̂<m> = T̄<m>Θ = ΘT<m>`
///
/// Residuals of identities involving `Λ` are divided by `max(1, |Λ|)`.
pub fn check_algebra(k: u32, m: u64, n: u64, trunc: u64, r: f64, tol: f64) -> Result<Vec<RelationReport>> {
    crate::arith::check_weight(i64::from(k))?;
    let bound = trunc as i64;
    let lambda = lambda_const(k, r);
    let lscale = lambda.abs().max(1.0);
    let (cm, cn) = (index_class(k, m), index_class(k, n));
    let v = Orientation::V;
    let plus = |j: u64| OperatorDescriptor::t(k, j).map(|op| RowMap::of_operator(&op, v, lambda, bound));
    let minus = |j: u64| OperatorDescriptor::t_minus(k, j).map(|op| RowMap::of_operator(&op, v, lambda, bound));
    let bar = |j: u64| OperatorDescriptor::t_bar(k, j).map(|op| RowMap::of_operator(&op, Orientation::VBar, lambda, bound));
    let hat = |j: u64| OperatorDescriptor::that(k, j).map(|op| RowMap::of_operator(&op, v, lambda, bound));
    let theta = |o: Orientation| RowMap::of_operator(&OperatorDescriptor::theta(k).expect("theta exists"), o, lambda, bound);

    let mut out = Vec::new();
    if cm.admits_plus() && cn.admits_plus() {
        let lhs = compose(&plus(m)?, &plus(n)?);
        let rhs = divisor_sum(k, m, n, plus)?;
        out.push(report(format!("k={k}: T<{m}>T<{n}> = sum chi(d) T<{m}*{n}/d^2>"), &lhs, &rhs, 1.0, tol));
    }
    for (a, b) in [(m, n), (n, m)] {
        if index_class(k, a).admits_minus() && index_class(k, b).admits_plus() {
            let lhs = compose(&minus(a)?, &plus(b)?);
            let rhs = divisor_sum(k, a, b, minus)?;
            out.push(report(format!("k={k}: T-<{a}>T<{b}> = sum chi(d) T-<{a}*{b}/d^2>"), &lhs, &rhs, 1.0, tol));
            if a == b {
                break;
            }
        }
    }
    if cm.admits_minus() && cn.admits_minus() {
        let lhs = compose(&bar(m)?, &minus(n)?);
        let rhs = divisor_sum(k, m, n, plus)?;
        out.push(report(format!("k={k}: TBar<{m}>T-<{n}> = sum chi(d) T<{m}*{n}/d^2>"), &lhs, &rhs, 1.0, tol));

        let lhs = compose(&hat(m)?, &hat(n)?);
        let sum = divisor_sum(k, m, n, plus)?;
        let rhs = sum.zero_like(v).add_scaled(Complex64::new(lambda, 0.0), &sum);
        out.push(report(format!("k={k}: That<{m}>That<{n}> = Lambda sum chi(d) T<{m}*{n}/d^2>"), &lhs, &rhs, lscale, tol));

        let mut indices = vec![m];
        if n != m {
            indices.push(n);
        }
        for j in indices {
            let direct = hat(j)?;
            let via_bar = compose(&bar(j)?, &theta(v));
            out.push(report(format!("k={k}: That<{j}> = TBar<{j}> Theta"), &direct, &via_bar, lscale, tol));
            let via_minus = compose(&theta(Orientation::VBar), &minus(j)?);
            out.push(report(format!("k={k}: That<{j}> = Theta T-<{j}>"), &direct, &via_minus, lscale, tol));
        }
    }
    if out.is_empty() {
        return Err(Error::InadmissibleIndex {
            op: "algebra",
            k,
            m,
            reason: format!("no operator identity applies to the pair ({m}, {n})"),
        });
    }
    Ok(out)
}
