//! Hecke operators acting on Fourier coefficients.
//!
//! Every operator is described by its row map: output index `n` reads a
//! short list of source indices with exact root-of-unity weights (times
//! `Λ` for the reflected operators). Applying an operator to a truncated
//! series keeps only the output indices whose every source is known, so a
//! missing coefficient never turns into a silent zero.

mod algebra;
mod relations;

use std::fmt;

use num_complex::Complex64;

use crate::arith::{big_d, chi_k, divisors, gcd0, index_class};
use crate::series::{CoefficientSeries, Orientation};
use crate::{Error, Result};

pub use algebra::{check_algebra, compare_maps, compose, RowMap};
pub use relations::{auto_relations, parse_relation_specs, verify_relations, Eigen, RelationKind, RelationSpec, VerifyOptions};

/// `Λ_{k,R}` from the squared product formula.
pub fn lambda_const(k: u32, r: f64) -> f64 {
    let r2 = r * r;
    let l = (k / 2) as i64;
    if k.is_multiple_of(2) {
        (1..=l).map(|j| ((j * (j - 1)) as f64 + 0.25 + r2).powi(2)).product()
    } else {
        -r2 * (1..=l).map(|j| ((j * j) as f64 + r2).powi(2)).product::<f64>()
    }
}

/// `Λ_{k,R}` from the unsquared product over the lowering chain.
pub fn lambda_const_alt(k: u32, r: f64) -> f64 {
    let k = i64::from(k);
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    sign * (0..k).map(|j| (((k - 2 * j) * (k - 2 - 2 * j) + 1) as f64) / 4.0 + r * r).product::<f64>()
}

/// Which operator family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OperatorKind {
    T,
    TBar,
    Theta,
    That,
}

/// Congruence branch of `T<m>`: `km = k` keeps the multiplier, `km = -k` conjugates it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

/// A concrete operator at weight `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OperatorDescriptor {
    pub kind: OperatorKind,
    pub k: u32,
    /// index; 1 for `Theta`
    pub m: u64,
    pub branch: Branch,
}

fn inadmissible(op: &'static str, k: u32, m: u64, reason: String) -> Error {
    Error::InadmissibleIndex { op, k, m, reason }
}

impl OperatorDescriptor {
    /// Operator of the given kind, choosing the `Plus` branch of `T` when both exist.
    pub fn new(kind: OperatorKind, k: u32, m: u64) -> Result<Self> {
        let branch = match kind {
            OperatorKind::T if index_class(k, m).admits_plus() => Branch::Plus,
            OperatorKind::Theta => Branch::Plus,
            _ => Branch::Minus,
        };
        Self::with_branch(kind, k, m, branch)
    }

    /// Operator with an explicit branch (only `T` has a choice, and only at `k = 6`).
    pub fn with_branch(kind: OperatorKind, k: u32, m: u64, branch: Branch) -> Result<Self> {
        crate::arith::check_weight(i64::from(k))?;
        let m = if kind == OperatorKind::Theta { 1 } else { m };
        if m == 0 {
            return Err(inadmissible(kind_name(kind), k, m, "index must be positive".into()));
        }
        let class = index_class(k, m);
        let congruence = |sign: &str| format!("k*m = {} is not {sign}{k} mod 12", (u64::from(k) * m) % 12);
        match (kind, branch) {
            (OperatorKind::Theta, _) => {}
            (OperatorKind::T, _) if class == crate::arith::CongruenceClass::None => {
                return Err(inadmissible("T", k, m, congruence("+") + &format!(" or -{k} mod 12")));
            }
            (OperatorKind::T, Branch::Plus) if !class.admits_plus() => {
                return Err(inadmissible("T", k, m, congruence("+")));
            }
            (OperatorKind::T, Branch::Minus) | (OperatorKind::TBar, _) | (OperatorKind::That, _) if !class.admits_minus() => {
                return Err(inadmissible(kind_name(kind), k, m, congruence("-")));
            }
            (OperatorKind::TBar | OperatorKind::That, Branch::Plus) => {
                return Err(inadmissible(kind_name(kind), k, m, "only the minus branch exists".into()));
            }
            _ => {}
        }
        Ok(OperatorDescriptor { kind, k, m, branch })
    }

    pub fn t(k: u32, m: u64) -> Result<Self> {
        Self::new(OperatorKind::T, k, m)
    }

    pub fn t_minus(k: u32, m: u64) -> Result<Self> {
        Self::with_branch(OperatorKind::T, k, m, Branch::Minus)
    }

    pub fn t_bar(k: u32, m: u64) -> Result<Self> {
        Self::new(OperatorKind::TBar, k, m)
    }

    pub fn theta(k: u32) -> Result<Self> {
        Self::new(OperatorKind::Theta, k, 1)
    }

    pub fn that(k: u32, m: u64) -> Result<Self> {
        Self::new(OperatorKind::That, k, m)
    }

    /// Required input orientation (`None`: either).
    pub fn domain(&self) -> Option<Orientation> {
        match self.kind {
            OperatorKind::T | OperatorKind::That => Some(Orientation::V),
            OperatorKind::TBar => Some(Orientation::VBar),
            OperatorKind::Theta => None,
        }
    }

    /// Output orientation for a given input orientation.
    pub fn codomain(&self, input: Orientation) -> Orientation {
        match (self.kind, self.branch) {
            (OperatorKind::T, Branch::Plus) | (OperatorKind::TBar, _) | (OperatorKind::That, _) => Orientation::V,
            (OperatorKind::T, Branch::Minus) => Orientation::VBar,
            (OperatorKind::Theta, _) => input.flipped(),
        }
    }

    fn check_input(&self, input: Orientation) -> Result<()> {
        match self.domain() {
            Some(expected) if expected != input => {
                Err(Error::WrongOrientation { op: kind_name(self.kind), expected: expected.as_str(), found: input.as_str() })
            }
            _ => Ok(()),
        }
    }

    /// `(source index, weight)` pairs read by output index `n`; `lambda` is `Λ_{k,R}`.
    pub fn row(&self, n: i64, input: Orientation, lambda: f64) -> Vec<(i64, Complex64)> {
        let k = i64::from(self.k);
        let m = self.m as i64;
        let mut row = Vec::new();
        match (self.kind, self.branch) {
            (OperatorKind::Theta, _) => {
                let reflected = match input {
                    Orientation::V => n <= 0,
                    Orientation::VBar => n <= -1,
                };
                row.push((-n, Complex64::new(if reflected { lambda } else { 1.0 }, 0.0)));
            }
            (OperatorKind::T, Branch::Plus) => {
                let shift = k * (m - 1) / 12;
                for d in divisors(self.m).into_iter().map(|d| d as i64) {
                    if (n - shift) % d == 0 {
                        if let Some(src) = exact(12 * n * m + k * (m - d * d), 12 * d * d) {
                            row.push((src, chi_k(self.k, d).to_complex()));
                        }
                    }
                }
            }
            (OperatorKind::T, Branch::Minus) => {
                let shift = k * (m + 1) / 12;
                for d in divisors(self.m).into_iter().map(|d| d as i64) {
                    if (n - shift) % d == 0 {
                        if let Some(src) = exact(12 * n * m - k * (m + d * d), 12 * d * d) {
                            row.push((src, chi_k(self.k, d).to_complex()));
                        }
                    }
                }
            }
            (OperatorKind::TBar | OperatorKind::That, _) => {
                let shift = k * (m + 1) / 12;
                for d in divisors(self.m).into_iter().map(|d| d as i64) {
                    if (n + shift) % d == 0 {
                        if let Some(src) = exact(12 * n * m + k * (m + d * d), 12 * d * d) {
                            let chi = chi_k(self.k, d).to_complex();
                            if self.kind == OperatorKind::TBar {
                                row.push((src, chi));
                            } else {
                                let delta = if src >= 1 { 1.0 } else { lambda };
                                row.push((-src, chi * delta));
                            }
                        }
                    }
                }
            }
        }
        row
    }
}

fn kind_name(kind: OperatorKind) -> &'static str {
    match kind {
        OperatorKind::T => "T",
        OperatorKind::TBar => "TBar",
        OperatorKind::Theta => "Theta",
        OperatorKind::That => "That",
    }
}

fn exact(num: i64, den: i64) -> Option<i64> {
    crate::arith::exact_div(num, den)
}

impl fmt::Display for OperatorDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.kind, self.branch) {
            (OperatorKind::Theta, _) => f.write_str("Theta"),
            (OperatorKind::T, Branch::Minus) if index_class(self.k, self.m).admits_plus() => write!(f, "T-<{}>", self.m),
            (kind, _) => write!(f, "{}<{}>", kind_name(kind), self.m),
        }
    }
}

/// Apply an operator to a truncated series.
///
/// The output block is the longest run of indices whose sources all lie in
/// the input block.
pub fn apply(op: &OperatorDescriptor, f: &CoefficientSeries) -> Result<CoefficientSeries> {
    if op.k != f.k() {
        return Err(Error::InvalidConfig(format!("operator is at weight {} but the series has weight {}", op.k, f.k())));
    }
    op.check_input(f.orientation())?;
    let lambda = lambda_const(op.k, f.r());
    let out = op.codomain(f.orientation());
    let bound = f.n_min().abs().max(f.n_max().abs()) + 2;
    let values: Vec<Option<Complex64>> = (-bound..=bound)
        .map(|n| {
            op.row(n, f.orientation(), lambda)
                .into_iter()
                .try_fold(Complex64::new(0.0, 0.0), |acc, (src, w)| f.get(src).map(|c| acc + w * c))
        })
        .collect();
    let (start, len) = longest_known_run(&values);
    let coeffs = values[start..start + len].iter().map(|v| v.expect("inside known run")).collect();
    Ok(f.with_coeffs(out, start as i64 - bound, coeffs))
}

fn longest_known_run(values: &[Option<Complex64>]) -> (usize, usize) {
    let (mut best, mut cur_start, mut cur_len) = ((0, 0), 0, 0);
    for (j, v) in values.iter().enumerate() {
        if v.is_some() {
            if cur_len == 0 {
                cur_start = j;
            }
            cur_len += 1;
            if cur_len > best.1 {
                best = (cur_start, cur_len);
            }
        } else {
            cur_len = 0;
        }
    }
    best
}

/// `T<m>` on a `V` series; the `Plus` branch when it exists, otherwise `Minus` (output `VBar`).
pub fn apply_t(m: u64, f: &CoefficientSeries) -> Result<CoefficientSeries> {
    apply(&OperatorDescriptor::t(f.k(), m)?, f)
}

/// The `Minus` branch of `T<m>` (`V -> VBar`).
pub fn apply_t_minus(m: u64, f: &CoefficientSeries) -> Result<CoefficientSeries> {
    apply(&OperatorDescriptor::t_minus(f.k(), m)?, f)
}

/// `T^{v-bar}<m>` (`VBar -> V`).
pub fn apply_tbar(m: u64, g: &CoefficientSeries) -> Result<CoefficientSeries> {
    apply(&OperatorDescriptor::t_bar(g.k(), m)?, g)
}

/// `Θ`, swapping orientation.
pub fn apply_theta(f: &CoefficientSeries) -> Result<CoefficientSeries> {
    apply(&OperatorDescriptor::theta(f.k())?, f)
}

/// `T̂<m> = T^{v-bar}<m> Θ` (`V -> V`).
pub fn apply_that(m: u64, f: &CoefficientSeries) -> Result<CoefficientSeries> {
    apply(&OperatorDescriptor::that(f.k(), m)?, f)
}

/// Direction of a Maass ladder step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ladder {
    Raise,
    Lower,
}

/// Coefficient action of the raising or lowering operator at the series' current weight.
///
/// The result is expanded in the basis of weight `weight ± 2` with the
/// same frequencies.
pub fn apply_raise_lower(sign: Ladder, f: &CoefficientSeries) -> CoefficientSeries {
    let w = f64::from(f.weight());
    let base = 0.25 + f.r() * f.r();
    let star = f.orientation().is_star();
    let coeffs = f
        .iter()
        .map(|(n, c)| {
            let positive = crate::whittaker::frequency(n, f.k(), star) > 0.0;
            let factor = match (sign, positive) {
                (Ladder::Lower, true) => -(w * (w - 2.0) / 4.0 + base),
                (Ladder::Lower, false) => 1.0,
                (Ladder::Raise, true) => -1.0,
                (Ladder::Raise, false) => w * (w + 2.0) / 4.0 + base,
            };
            c * factor
        })
        .collect();
    let step = if sign == Ladder::Raise { 2 } else { -2 };
    f.with_coeffs(f.orientation(), f.n_min(), coeffs).with_weight(f.weight() + step)
}

/// Reflection `f(z) -> f(-z̄)`: `c(n) -> c(-n)`, weight negated, orientation swapped.
pub fn apply_j(f: &CoefficientSeries) -> CoefficientSeries {
    let coeffs = f.coeffs().iter().rev().copied().collect();
    f.with_coeffs(f.orientation().flipped(), -f.n_max(), coeffs).with_weight(-f.weight())
}

/// `Θ` built from its definition: `k` lowering steps followed by the reflection.
pub fn apply_theta_via_ladder(f: &CoefficientSeries) -> CoefficientSeries {
    let mut g = f.clone();
    for _ in 0..f.weight().max(0) {
        g = apply_raise_lower(Ladder::Lower, &g);
    }
    apply_j(&g)
}

fn nonzero_c0(f: &CoefficientSeries) -> Result<Complex64> {
    let c0 = f.require(0)?;
    if c0 == Complex64::new(0.0, 0.0) {
        return Err(Error::ZeroConstantCoefficient);
    }
    Ok(c0)
}

/// `c(x)` for rational `x = num/den`; zero when `x` is not an integer.
fn coeff_at(f: &CoefficientSeries, num: i64, den: i64) -> Result<Complex64> {
    match exact(num, den) {
        Some(n) => f.require(n),
        None => Ok(Complex64::new(0.0, 0.0)),
    }
}

/// Eigenvalue of `T<m>` (plus branch) read off from the coefficients of an eigenform.
pub fn eigenvalue_lambda(m: u64, f: &CoefficientSeries) -> Result<Complex64> {
    let k = f.k();
    if !index_class(k, m).admits_plus() {
        return Err(inadmissible("T", k, m, "eigenvalues need k*m = k mod 12".into()));
    }
    let c0 = nonzero_c0(f)?;
    let (ki, mi, d) = (i64::from(k), m as i64, i64::from(big_d(k)));
    let mut sum = coeff_at(f, ki * (mi - 1), 12)?;
    if gcd0(mi, d) > 1 {
        sum += chi_k(k, d) * coeff_at(f, ki * (mi - d * d), 12 * d * d)?;
    }
    Ok(sum / c0)
}

/// Eigenvalue of `T̂<m>` read off from the coefficients of an eigenform.
pub fn eigenvalue_mu(m: u64, f: &CoefficientSeries) -> Result<Complex64> {
    let k = f.k();
    if !index_class(k, m).admits_minus() {
        return Err(inadmissible("That", k, m, "eigenvalues need k*m = -k mod 12".into()));
    }
    let c0 = nonzero_c0(f)?;
    let (ki, mi, d) = (i64::from(k), m as i64, i64::from(big_d(k)));
    let mut sum = coeff_at(f, -ki * (1 + mi), 12)?;
    if gcd0(mi, d) > 1 {
        sum += chi_k(k, d) * coeff_at(f, -ki * (mi + d * d), 12 * d * d)?;
    }
    Ok(sum / c0)
}

/// Smallest admissible indices `m > 1` for the plus (or minus) branch.
pub fn admissible_indices(k: u32, branch: Branch, count: usize) -> Vec<u64> {
    (2u64..)
        .filter(|&m| match branch {
            Branch::Plus => index_class(k, m).admits_plus(),
            Branch::Minus => index_class(k, m).admits_minus(),
        })
        .take(count)
        .collect()
}
