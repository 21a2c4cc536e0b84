//! Fourier coefficients of a Maass waveform from implicit automorphy.
//!
//! Sample points `z_j = x_j + iY` below the fundamental domain are pulled
//! back to `z*_j = A_j z_j`. Automorphy gives `f(z_j) = conj(v(A_j) j_{A_j}(z_j)) f(z*_j)`,
//! and a discrete Fourier transform over the samples turns this into a
//! linear system for `c(-M..=M)`. The system is solved in least squares
//! after fixing one coefficient to 1.
//!
//! At height `Y` the coefficient `c(n)` enters the system multiplied by
//! `W_n(Y) ~ exp(-2π|n|Y)`, so in double precision only the first few
//! coefficients come out accurately. A second stage recomputes every
//! other `c(n)` from a transform at a lower height where its own
//! Whittaker factor is near its turning point, evaluating `f` at the
//! pulled-back points from the current coefficients.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::arith::{chi_k, divisors};
use crate::hecke::{Branch, OperatorDescriptor, OperatorKind};
use crate::modular::{j_factor, EtaMultiplier, GL2Int, RootOfUnity};
use crate::series::{CoefficientSeries, Normalization, Orientation};
use crate::whittaker::{basis_w, frequency, radial};
use crate::{Error, Result};

/// `√3/2`, the lowest height in the standard fundamental domain.
pub const FUNDAMENTAL_FLOOR: f64 = 0.866_025_403_784_438_6;

/// Conditioning beyond which the least-squares system is rejected.
pub const MAX_CONDITION: f64 = 1e13;

/// Parameters of one solve.
#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    pub k: u32,
    pub r: f64,
    /// coefficients `c(-M..=M)` are computed
    pub m: usize,
    /// sampling height, `0 < Y < √3/2`
    pub y: f64,
    /// samples per period, at least `2M + 16`
    pub q: usize,
    pub normalization: Normalization,
    /// run the second stage
    pub refine: bool,
}

impl SolverConfig {
    /// Defaults: `M = 25`, `Q = 2M + 30`, `Y = 0.4`, `c(1) = 1`, second stage on.
    pub fn new(k: u32, r: f64) -> Self {
        SolverConfig { k, r, m: 25, y: 0.4, q: 80, normalization: Normalization::C1, refine: true }
    }

    pub fn with_m(mut self, m: usize) -> Self {
        self.m = m;
        self.q = 2 * m + 30;
        self
    }

    pub fn with_y(mut self, y: f64) -> Self {
        self.y = y;
        self
    }

    pub fn with_q(mut self, q: usize) -> Self {
        self.q = q;
        self
    }

    pub fn with_normalization(mut self, normalization: Normalization) -> Self {
        self.normalization = normalization;
        self
    }

    pub fn with_refine(mut self, refine: bool) -> Self {
        self.refine = refine;
        self
    }

    pub fn validate(&self) -> Result<()> {
        crate::arith::check_weight(i64::from(self.k))?;
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(self.r.is_finite() && self.r > 0.0) {
            return bad(format!("R must be positive, got {}", self.r));
        }
        if self.m < 1 {
            return bad("M must be at least 1".into());
        }
        if !(self.y > 0.0 && self.y < FUNDAMENTAL_FLOOR) {
            return bad(format!("Y must lie in (0, √3/2), got {}", self.y));
        }
        if self.q < 2 * self.m + 16 {
            return bad(format!("Q = {} is below 2M + 16 = {}", self.q, 2 * self.m + 16));
        }
        if self.normalization == Normalization::None {
            return bad("normalization must be C0 or C1".into());
        }
        Ok(())
    }
}

/// Result of [`solve`].
#[derive(Clone, Debug)]
pub struct Solution {
    pub series: CoefficientSeries,
    /// `max |r_ii| / min |r_ii|` of the triangular factor
    pub condition: f64,
    /// relative residual `|Ax - b| / |b|` of the least-squares stage
    pub residual: f64,
    /// number of coefficients recomputed by the second stage
    pub refined: usize,
}

/// Reduce `z` into the standard fundamental domain.
///
/// Returns `(A z, A)` with `|Re Az| <= 1/2` and `|Az| >= 1`.
pub fn pullback(z: Complex64) -> Result<(Complex64, GL2Int)> {
    if z.im.is_nan() || z.im <= 0.0 {
        return Err(Error::NotInUpperHalfPlane(z.im));
    }
    let mut w = z;
    let mut a = GL2Int::IDENTITY;
    for _ in 0..10_000 {
        let shift = w.re.round();
        if shift != 0.0 {
            w.re -= shift;
            a = GL2Int::t_pow(-(shift as i64)) * a;
        }
        if w.norm_sqr() < 1.0 - 1e-13 {
            w = -1.0 / w;
            a = GL2Int::S * a;
        } else {
            break;
        }
    }
    Ok((w, a))
}

/// Multiplier of a series' space at `A`: `v(A)` for `V`, `conj v(A)` for `VBar`.
fn multiplier(orientation: Orientation, eta: &EtaMultiplier, a: &GL2Int) -> Result<RootOfUnity> {
    let v = eta.eval(a)?;
    Ok(match orientation {
        Orientation::V => v,
        Orientation::VBar => v.conj(),
    })
}

/// `conj(v(A) j_A(z; k))`, the factor taking `f(Az)` back to `f(z)`.
fn return_factor(k: u32, orientation: Orientation, eta: &EtaMultiplier, a: &GL2Int, z: Complex64) -> Result<Complex64> {
    let v = multiplier(orientation, eta, a)?;
    Ok((v.to_complex() * j_factor(a, z, k as i32)?).conj())
}

/// Evaluate a waveform anywhere by pulling back into the fundamental domain
/// and applying the automorphy relation `f(Az) = v(A) j_A(z; k) f(z)`.
pub fn evaluate_automorphic(f: &CoefficientSeries, z: Complex64) -> Result<Complex64> {
    if f.weight() != f.k() as i32 {
        return Err(Error::InvalidConfig("automorphic evaluation needs weight = k".into()));
    }
    let (zs, a) = pullback(z)?;
    let eta = EtaMultiplier::new(f.k());
    Ok(return_factor(f.k(), f.orientation(), &eta, &a, z)? * f.evaluate(zs)?)
}

/// Hecke operator evaluated from its matrix sum,
/// `(1/√m) Σ_{ad=m} χ_k(d) Σ_{b mod d} ξ^{∓bd} f((az+b)/d)`,
/// with `ξ^{-bd}` for `T` and `ξ^{+bd}` for `TBar`.
pub fn apply_hecke_pointwise(op: &OperatorDescriptor, f: &CoefficientSeries, z: Complex64) -> Result<Complex64> {
    let sign = match op.kind {
        OperatorKind::T => -1,
        OperatorKind::TBar => 1,
        _ => {
            return Err(Error::InvalidConfig(format!("{op} has no matrix-sum form here")));
        }
    };
    let expected = if op.kind == OperatorKind::TBar { Orientation::VBar } else { Orientation::V };
    if f.orientation() != expected {
        return Err(Error::WrongOrientation {
            op: "pointwise Hecke",
            expected: expected.as_str(),
            found: f.orientation().as_str(),
        });
    }
    let m = op.m as i64;
    let xi = RootOfUnity::from_24ths(2 * i64::from(op.k));
    let mut acc = Complex64::new(0.0, 0.0);
    for d in divisors(op.m).into_iter().map(|d| d as i64) {
        let a = m / d;
        let chi = chi_k(op.k, d);
        for b in 0..d {
            let w = (z * a as f64 + b as f64) / d as f64;
            acc += (chi * xi.pow(sign * b * d)) * evaluate_automorphic(f, w)?;
        }
    }
    Ok(acc / (m as f64).sqrt())
}

/// `T<m>f(z)` from the matrix sum (plus branch when it exists).
pub fn apply_t_pointwise(m: u64, f: &CoefficientSeries, z: Complex64) -> Result<Complex64> {
    apply_hecke_pointwise(&OperatorDescriptor::t(f.k(), m)?, f, z)
}

/// Pulled-back sample: `conj(v j)` times every basis function at `z*`.
fn sample_row(k: u32, r: f64, m: i64, eta: &EtaMultiplier, z: Complex64) -> Result<Vec<Complex64>> {
    let (zs, a) = pullback(z)?;
    let back = return_factor(k, Orientation::V, eta, &a, z)?;
    (-m..=m).map(|l| Ok(back * basis_w(l, k, r, zs, false)?)).collect()
}

fn sample_points(q: usize, y: f64) -> Vec<Complex64> {
    (0..q).map(|j| Complex64::new((j as f64 + 0.5) / q as f64 - 0.5, y)).collect()
}

fn radial_value(n: i64, k: u32, r: f64, y: f64) -> Result<f64> {
    Ok(radial(n, k, k as i32, r, y, false)?.value)
}

/// Turning point of the Whittaker equation for `W_{κ,iR}`.
fn turning_point(kappa: f64, r: f64) -> f64 {
    2.0 * kappa + (4.0 * kappa * kappa + 4.0 * r * r + 1.0).sqrt()
}

/// Least-squares stage at the configured height.
fn least_squares(config: &SolverConfig) -> Result<(Vec<Complex64>, f64, f64)> {
    let (k, r, m) = (config.k, config.r, config.m as i64);
    let size = (2 * m + 1) as usize;
    let eta = EtaMultiplier::new(k);
    let points = sample_points(config.q, config.y);
    let rows: Vec<Vec<Complex64>> = points.par_iter().map(|&z| sample_row(k, r, m, &eta, z)).collect::<Result<_>>()?;

    let scale: Vec<f64> = (-m..=m).map(|l| radial_value(l, k, r, config.y)).collect::<Result<_>>()?;
    if let Some(j) = scale.iter().position(|&s| s == 0.0) {
        return Err(Error::InvalidConfig(format!("W(Y) underflows at n = {}; raise Y or lower M", j as i64 - m)));
    }

    // V[n][l] = (1/Q) Σ_j row_j[l] e(-(n+α) x_j), scaled by 1/W_l(Y)
    let alpha = f64::from(k) / 12.0;
    let mut a = DMatrix::<Complex64>::zeros(size, size);
    for (pt, row) in points.iter().zip(&rows) {
        for (i, n) in (-m..=m).enumerate() {
            let e = Complex64::cis(-2.0 * PI * (n as f64 + alpha) * pt.re) / config.q as f64;
            for (col, w) in row.iter().enumerate() {
                a[(i, col)] -= e * w / scale[col];
            }
        }
    }
    for i in 0..size {
        a[(i, i)] += Complex64::new(1.0, 0.0);
    }

    // unknowns b_l = c(l) W_l(Y); eliminate the normalized one
    let fixed = (config.normalization.index().expect("validated") + m) as usize;
    let b_fixed = scale[fixed];
    let rhs = DVector::from_iterator(size, (0..size).map(|i| -a[(i, fixed)] * b_fixed));
    let reduced = a.remove_column(fixed);
    let qr = reduced.clone().qr();
    let (q, rt) = (qr.q(), qr.r());
    let diag: Vec<f64> = rt.diagonal().iter().map(|d| d.norm()).collect();
    let (dmax, dmin) = diag.iter().fold((0.0f64, f64::INFINITY), |(hi, lo), &d| (hi.max(d), lo.min(d)));
    let condition = if dmin > 0.0 { dmax / dmin } else { f64::INFINITY };
    if condition.is_nan() || condition >= MAX_CONDITION {
        return Err(Error::IllConditioned { condition });
    }
    let qtb = q.adjoint() * &rhs;
    let x = rt.solve_upper_triangular(&qtb).ok_or(Error::IllConditioned { condition })?;
    let lsq_residual = (&reduced * &x - &rhs).norm() / rhs.norm().max(f64::MIN_POSITIVE);

    let mut coeffs = Vec::with_capacity(size);
    let mut it = x.iter();
    for (j, s) in scale.iter().enumerate() {
        let b = if j == fixed { Complex64::new(b_fixed, 0.0) } else { *it.next().expect("one unknown per column") };
        coeffs.push(b / s);
    }
    coeffs[fixed] = Complex64::new(1.0, 0.0);
    Ok((coeffs, condition, lsq_residual))
}

/// Second stage: recompute `c(n)` from a transform at a height where its
/// Whittaker factor sits just past the turning point.
fn refine(config: &SolverConfig, coeffs: &mut [Complex64]) -> Result<usize> {
    let (k, r, m) = (config.k, config.r, config.m as i64);
    let fixed = config.normalization.index().expect("validated");
    let eta = EtaMultiplier::new(k);
    let alpha = f64::from(k) / 12.0;

    // heights Y 2^{-j/2}; n goes to the lowest one still at or above its ideal height
    let mut levels: std::collections::BTreeMap<u32, Vec<i64>> = Default::default();
    for n in -m..=m {
        if n == fixed {
            continue;
        }
        let freq = frequency(n, k, false);
        let ideal = turning_point(0.5 * f64::from(k) * freq.signum(), r) / (4.0 * PI * freq.abs());
        if ideal >= config.y {
            continue;
        }
        let j = (2.0 * (config.y / ideal).log2()).floor() as u32;
        levels.entry(j).or_default().push(n);
    }
    let refined = levels.values().map(Vec::len).sum();

    for _pass in 0..2 {
        let snapshot = coeffs.to_vec();
        for (&j, indices) in &levels {
            let y = config.y * 2f64.powf(-0.5 * f64::from(j));
            let q = config.q.max((8.0 / y).ceil() as usize + config.m + 16);
            let points = sample_points(q, y);
            let values: Vec<Complex64> = points
                .par_iter()
                .map(|&z| {
                    let row = sample_row(k, r, m, &eta, z)?;
                    Ok(row.iter().zip(&snapshot).map(|(w, c)| w * c).sum())
                })
                .collect::<Result<_>>()?;
            for &n in indices {
                let freq = n as f64 + alpha;
                let dft: Complex64 =
                    points.iter().zip(&values).map(|(z, v)| v * Complex64::cis(-2.0 * PI * freq * z.re)).sum::<Complex64>()
                        / q as f64;
                coeffs[(n + m) as usize] = dft / radial_value(n, k, r, y)?;
            }
        }
    }
    Ok(refined)
}

/// Solve for `c(-M..=M)` at the configured spectral parameter.
pub fn solve(config: &SolverConfig) -> Result<Solution> {
    config.validate()?;
    let (mut coeffs, condition, residual) = least_squares(config)?;
    let refined = if config.refine { refine(config, &mut coeffs)? } else { 0 };
    let m = config.m as i64;
    let series = CoefficientSeries::new(config.k, config.r, Orientation::V, -m, coeffs)?.with_normalization(config.normalization);
    Ok(Solution { series, condition, residual, refined })
}

/// Largest automorphy defect `|f(Az) - v(A) j_A(z) f(z)| / max|f|` over the
/// given points and group elements, with both sides summed directly from
/// the series (no pullback).
pub fn automorphy_defect(f: &CoefficientSeries, checks: &[(Complex64, GL2Int)]) -> Result<f64> {
    let eta = EtaMultiplier::new(f.k());
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for (z, a) in checks {
        let lhs = f.evaluate(a.act(*z))?;
        let rhs = multiplier(f.orientation(), &eta, a)?.to_complex() * j_factor(a, *z, f.k() as i32)? * f.evaluate(*z)?;
        worst = worst.max((lhs - rhs).norm());
        scale = scale.max(lhs.norm()).max(rhs.norm());
    }
    Ok(if scale > 0.0 { worst / scale } else { worst })
}

/// Secant search for a spectral parameter near `r0`, `r1`.
///
/// The functional is the real part of `c(n)` computed at two heights
/// minus each other, for the first index `n` outside the normalization;
/// it vanishes at true eigenvalues.
pub fn refine_r(config: &SolverConfig, r0: f64, r1: f64, tol: f64, max_iter: usize) -> Result<f64> {
    let probe = if config.normalization == Normalization::C1 { 2 } else { 1 };
    let functional = |r: f64| -> Result<f64> {
        let mut a = config.clone();
        a.r = r;
        a.refine = false;
        let mut b = a.clone();
        b.y = 0.85 * a.y;
        let ca = solve(&a)?.series.require(probe)?;
        let cb = solve(&b)?.series.require(probe)?;
        Ok((ca - cb).re)
    };
    let (mut x0, mut x1) = (r0, r1);
    let (mut f0, mut f1) = (functional(x0)?, functional(x1)?);
    for _ in 0..max_iter {
        if (x1 - x0).abs() < tol || f1 == f0 {
            break;
        }
        let x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        (x0, f0) = (x1, f1);
        x1 = x2;
        f1 = functional(x1)?;
    }
    Ok(x1)
}

/// Minus-branch operator used when `T<m>` changes the multiplier.
pub fn minus_branch(k: u32, m: u64) -> Result<OperatorDescriptor> {
    OperatorDescriptor::with_branch(OperatorKind::T, k, m, Branch::Minus)
}
