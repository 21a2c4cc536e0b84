//! The Whittaker function `W_{kappa, iR}(y)` for real `kappa`, real `R` and
//! `y > 0`, and the Fourier basis functions built from it.
//!
//! For `y >= Y0` the divergent asymptotic series is summed up to its
//! smallest term. `Y0` starts at `max(2 kappa^2 + R^2, 30)` and is raised
//! until that smallest term is below `1e-16` of the sum; for negative
//! `kappa` the smallest term behaves like `y^{-2 kappa} e^{-y}`, so the
//! starting value alone is not enough. Below `Y0` the Whittaker equation
//!
//! ```text
//! W'' = (1/4 - kappa/y - (R^2 + 1/4)/y^2) W
//! ```
//!
//! is integrated inward from `Y0`, seeded with the series value and
//! derivative. `W` is the recessive solution at infinity, so it dominates
//! any contamination when moving toward the origin. Each step expands the
//! solution in a Taylor series about the current node; the coefficients
//! follow from a three-term recurrence, so the order is limited only by the
//! requested precision. The node sequence depends on `(kappa, R)` only,
//! which keeps nearby evaluations consistent with each other.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::{Error, Result};

/// Values below this magnitude are returned as an exact zero.
pub const UNDERFLOW_THRESHOLD: f64 = 1e-300;

const MAX_STEP: f64 = 8.0;
const MAX_TAYLOR_TERMS: usize = 400;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WhittakerParams {
    pub kappa: f64,
    pub r: f64,
    pub y: f64,
}

impl WhittakerParams {
    pub fn new(kappa: f64, r: f64, y: f64) -> Self {
        WhittakerParams { kappa, r, y }
    }
}

/// Result of a Whittaker evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WhittakerValue {
    pub value: f64,
    /// The true value is below [`UNDERFLOW_THRESHOLD`] and `value` is exactly 0.
    pub underflow: bool,
}

/// Value and derivative scaled by `exp(log_scale)`.
#[derive(Clone, Copy, Debug)]
struct Scaled {
    w: f64,
    dw: f64,
    log_scale: f64,
}

impl Scaled {
    fn renormalize(mut self) -> Self {
        let s = self.w.abs().max(self.dw.abs());
        if s > 0.0 && s.is_finite() {
            self.w /= s;
            self.dw /= s;
            self.log_scale += s.ln();
        }
        self
    }

    fn finish(self) -> WhittakerValue {
        if self.w == 0.0 {
            return WhittakerValue { value: 0.0, underflow: false };
        }
        let log_mag = self.log_scale + self.w.abs().ln();
        if log_mag < UNDERFLOW_THRESHOLD.ln() {
            WhittakerValue { value: 0.0, underflow: true }
        } else {
            WhittakerValue { value: self.w * self.log_scale.exp(), underflow: false }
        }
    }
}

/// Height above which the asymptotic series is used directly.
pub fn seed_height(kappa: f64, r: f64) -> f64 {
    let mut y = (2.0 * kappa * kappa + r * r).max(30.0);
    while smallest_term(kappa, r, y) > 1e-16 {
        y *= 1.1;
    }
    y
}

/// Smallest term of the asymptotic series relative to its leading term.
fn smallest_term(kappa: f64, r: f64, y: f64) -> f64 {
    let mut term = 1.0f64;
    let mut s = 0.0f64;
    loop {
        let factor = ((s + 0.5 - kappa).powi(2) + r * r) / ((s + 1.0) * y);
        if factor >= 1.0 || term < 1e-17 {
            return term;
        }
        term *= factor;
        s += 1.0;
    }
}

/// `q(y)` in `W'' = q W`.
fn potential(kappa: f64, r: f64, y: f64) -> f64 {
    0.25 - kappa / y - (r * r + 0.25) / (y * y)
}

/// Asymptotic expansion `W ~ e^{-y/2} y^kappa sum_s a_s y^{-s}` with its derivative.
fn asymptotic(kappa: f64, r: f64, y: f64) -> Scaled {
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    // d/dy of the sum
    let mut dsum = 0.0f64;
    let mut s = 0.0f64;
    loop {
        let factor = -((s + 0.5 - kappa).powi(2) + r * r) / ((s + 1.0) * y);
        let next = term * factor;
        if next.abs() >= term.abs() && s > 0.0 {
            // smallest term reached
            break;
        }
        s += 1.0;
        term = next;
        sum += term;
        dsum += -s / y * term;
        if term.abs() < 1e-17 * sum.abs() || s > 500.0 {
            break;
        }
    }
    let log_scale = -0.5 * y + kappa * y.ln();
    Scaled { w: sum, dw: (-0.5 + kappa / y) * sum + dsum, log_scale }.renormalize()
}

/// One Taylor step of length `t` (signed) from `y0`.
fn taylor_step(kappa: f64, r: f64, y0: f64, st: Scaled, t: f64) -> Scaled {
    if t == 0.0 {
        return st;
    }
    let p0 = 0.25 * y0 * y0 - kappa * y0 - (r * r + 0.25);
    let p1 = 0.5 * y0 - kappa;
    let p2 = 0.25;
    let (t2, t3, t4) = (t * t, t * t * t, t * t * t * t);
    let y02 = y0 * y0;

    // s_n = a_n t^n
    let mut s_m2 = 0.0;
    let mut s_m1 = 0.0;
    let mut s_n = st.w;
    let mut s_n1 = st.dw * t;
    let mut w = s_n + s_n1;
    let mut tdw = s_n1;
    let mut small_run = 0;
    for n in 0..MAX_TAYLOR_TERMS {
        let nf = n as f64;
        let num =
            p0 * t2 * s_n + p1 * t3 * s_m1 + p2 * t4 * s_m2 - 2.0 * y0 * nf * (nf + 1.0) * t * s_n1 - nf * (nf - 1.0) * t2 * s_n;
        let s_n2 = num / (y02 * (nf + 1.0) * (nf + 2.0));
        w += s_n2;
        tdw += (nf + 2.0) * s_n2;
        let scale = w.abs() + tdw.abs();
        if s_n2.abs() * (nf + 2.0) <= 1e-18 * scale {
            small_run += 1;
            if small_run >= 3 {
                break;
            }
        } else {
            small_run = 0;
        }
        s_m2 = s_m1;
        s_m1 = s_n;
        s_n = s_n1;
        s_n1 = s_n2;
    }
    Scaled { w, dw: tdw / t, log_scale: st.log_scale }.renormalize()
}

/// Next inward step length from node `y0`.
fn step_length(kappa: f64, r: f64, y0: f64) -> f64 {
    let mut h = (0.5 * y0).min(MAX_STEP);
    // keep the oscillation phase per step bounded so the Taylor sum does not cancel
    loop {
        let q = potential(kappa, r, y0 - h);
        if h * (-q).max(0.0).sqrt() <= 2.0 {
            return h;
        }
        h *= 0.75;
    }
}

fn evaluate_scaled(kappa: f64, r: f64, y: f64) -> Scaled {
    let y_seed = seed_height(kappa, r);
    if y >= y_seed {
        return asymptotic(kappa, r, y);
    }
    let mut y0 = y_seed;
    let mut st = asymptotic(kappa, r, y0);
    loop {
        let h = step_length(kappa, r, y0);
        if y0 - h <= y {
            return taylor_step(kappa, r, y0, st, y - y0);
        }
        st = taylor_step(kappa, r, y0, st, -h);
        y0 -= h;
    }
}

/// `W_{kappa, iR}(y)`.
pub fn whittaker_w(p: WhittakerParams) -> Result<WhittakerValue> {
    if p.y.is_nan() || p.y <= 0.0 {
        return Err(Error::NonPositiveArgument(p.y));
    }
    Ok(evaluate_scaled(p.kappa, p.r, p.y).finish())
}

/// `W_{kappa, iR}(y)` and its derivative in `y`, with underflow mapped to `(0, 0)`.
pub fn whittaker_w_and_derivative(p: WhittakerParams) -> Result<(f64, f64)> {
    if p.y.is_nan() || p.y <= 0.0 {
        return Err(Error::NonPositiveArgument(p.y));
    }
    let st = evaluate_scaled(p.kappa, p.r, p.y);
    let v = st.finish();
    if v.underflow || v.value == 0.0 {
        return Ok((0.0, 0.0));
    }
    Ok((v.value, st.dw * st.log_scale.exp()))
}

/// Leading asymptotic partial sums, exposed for checks against the
/// truncated series: returns `e^{-y/2} y^kappa sum_{s<terms} a_s y^{-s}` and the first
/// omitted term on the same scale.
pub fn asymptotic_partial_sum(kappa: f64, r: f64, y: f64, terms: usize) -> (f64, f64) {
    let pref = (-0.5 * y + kappa * y.ln()).exp();
    let mut term = 1.0;
    let mut sum = 0.0;
    for s in 0..terms {
        sum += term;
        let sf = s as f64;
        term *= -((sf + 0.5 - kappa).powi(2) + r * r) / ((sf + 1.0) * y);
    }
    (pref * sum, pref * term)
}

/// Frequency `n + alpha` (or `n - alpha` for the starred basis), `alpha = k/12`.
pub fn frequency(n: i64, k: u32, star: bool) -> f64 {
    let alpha = f64::from(k) / 12.0;
    if star {
        n as f64 - alpha
    } else {
        n as f64 + alpha
    }
}

/// Radial part `|n +- alpha|^{-1/2} W_{(w/2) sgn, iR}(4 pi |n +- alpha| y)` of a basis
/// function, where `weight` is the Laplacian weight (equal to `k` except inside
/// the raising/lowering chain).
pub fn radial(n: i64, k: u32, weight: i32, r: f64, y: f64, star: bool) -> Result<WhittakerValue> {
    let freq = frequency(n, k, star);
    let kappa = 0.5 * f64::from(weight) * freq.signum();
    let w = whittaker_w(WhittakerParams::new(kappa, r, 4.0 * PI * freq.abs() * y))?;
    Ok(WhittakerValue { value: w.value / freq.abs().sqrt(), underflow: w.underflow })
}

/// `W_{n,k,R}(z)`, or `W*_{n,k,R}(z)` when `star` is set.
pub fn basis_w(n: i64, k: u32, r: f64, z: Complex64, star: bool) -> Result<Complex64> {
    basis_w_weighted(n, k, k as i32, r, z, star)
}

/// Basis function at an arbitrary Laplacian weight with the frequencies of weight `k`.
pub fn basis_w_weighted(n: i64, k: u32, weight: i32, r: f64, z: Complex64, star: bool) -> Result<Complex64> {
    if z.im.is_nan() || z.im <= 0.0 {
        return Err(Error::NotInUpperHalfPlane(z.im));
    }
    let rad = radial(n, k, weight, r, z.im, star)?;
    if rad.value == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let phase = Complex64::cis(2.0 * PI * frequency(n, k, star) * z.re);
    Ok(phase * rad.value)
}
