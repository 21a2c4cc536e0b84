//! Oracles shared by the integration and acceptance suites. Everything here is
//! independent of the library code paths it is used to check.
#![allow(dead_code)]

use std::collections::HashMap;

/// `K_{iR}(x) = int_0^inf exp(-x cosh t) cos(R t) dt` by the trapezoid rule.
///
/// The integrand is even and analytic in a strip, so the trapezoid rule on the
/// whole line converges geometrically in the step size.
pub fn bessel_k_imag_order(r: f64, x: f64) -> f64 {
    let h = 1.0 / 256.0;
    // exp(-x cosh t) < 1e-300 beyond this point
    let t_max = (700.0 / x).acosh().max(1.0);
    let n = (t_max / h).ceil() as usize;
    let mut sum = 0.5 * (-x).exp();
    for j in 1..=n {
        let t = j as f64 * h;
        sum += (-x * t.cosh()).exp() * (r * t).cos();
    }
    sum * h
}

/// Sixth-order central second difference of `f` at `y` with step `h`.
pub fn second_derivative(f: impl Fn(f64) -> f64, y: f64, h: f64) -> f64 {
    let c = [-49.0 / 18.0, 3.0 / 2.0, -3.0 / 20.0, 1.0 / 90.0];
    let mut acc = c[0] * f(y);
    for (j, cj) in c.iter().enumerate().skip(1) {
        let s = j as f64 * h;
        acc += cj * (f(y + s) + f(y - s));
    }
    acc / (h * h)
}

/// Relative residual of `W'' = (1/4 - kappa/y - (R^2 + 1/4)/y^2) W` at `y`,
/// measured against the size of the individual terms on the right.
pub fn whittaker_ode_residual(w: impl Fn(f64) -> f64, kappa: f64, r: f64, y: f64) -> f64 {
    let q = 0.25 - kappa / y - (r * r + 0.25) / (y * y);
    // balance truncation h^6 against rounding eps / h^2 on the local scale
    let scale = q.abs().sqrt().max(1.0 / y).max(0.5);
    let h = 0.02 / scale;
    let h = h.min(0.25 * y);
    let d2 = second_derivative(&w, y, h);
    let w0 = w(y);
    let qw = q * w0;
    // local magnitude of W over the stencil, so zeros of W do not blow up the ratio
    let mag = (0..=3).flat_map(|j| [w(y + j as f64 * h), w(y - j as f64 * h)]).fold(0.0f64, |m, v| m.max(v.abs()));
    let terms = 0.25 + kappa.abs() / y + (r * r + 0.25) / (y * y);
    (d2 - qw).abs() / (terms * mag).max(f64::MIN_POSITIVE)
}

/// Index-keyed store used by oracles that need coefficient lookups.
pub type CoeffMap = HashMap<i64, (f64, f64)>;
