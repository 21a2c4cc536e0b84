mod common;

use common::{bessel_k_imag_order, whittaker_ode_residual};
use maass_hecke::whittaker::{basis_w, radial, whittaker_w, WhittakerParams};
use num_complex::Complex64;
use proptest::prelude::*;

const FIXTURE_R: [f64; 4] = [2.95645894117486, 3.31105967012734, 3.6624068669081, 3.70330780105981];

fn w(kappa: f64, r: f64, y: f64) -> f64 {
    whittaker_w(WhittakerParams::new(kappa, r, y)).unwrap().value
}

/// Leading asymptotic series `e^{-y/2} y^κ Σ_n Π_{j<n}((j + 1/2 - κ)² + R²) / (n! (-y)^n)`,
/// summed to its smallest term. Returns the sum and that term as an error bound.
fn asymptotic_oracle(kappa: f64, r: f64, y: f64) -> (f64, f64) {
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    for n in 0..200 {
        let j = n as f64;
        let next = term * ((j + 0.5 - kappa).powi(2) + r * r) / ((j + 1.0) * -y);
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum += term;
    }
    let prefactor = (-0.5 * y + kappa * y.ln()).exp();
    (prefactor * sum, prefactor * term.abs())
}

#[test]
fn ode_residual_on_validation_grid() {
    let mut worst = (0.0f64, 0.0, 0.0, 0.0);
    for &r in &FIXTURE_R {
        for twice_kappa in (-11..=11).filter(|t| *t != 0) {
            let kappa = f64::from(twice_kappa) / 2.0;
            for j in 1..=1200 {
                let y = 0.05 * f64::from(j);
                let res = whittaker_ode_residual(|t| w(kappa, r, t), kappa, r, y);
                if res > worst.0 {
                    worst = (res, kappa, r, y);
                }
            }
        }
    }
    assert!(worst.0 < 1e-8, "worst residual {:?}", worst);
}

#[test]
fn zero_kappa_is_bessel_k() {
    let oracle = |r: f64, x: f64| (2.0 * x / std::f64::consts::PI).sqrt() * bessel_k_imag_order(r, x);
    for &r in &FIXTURE_R {
        for j in 0..=290 {
            let x = 0.1 + 0.1 * f64::from(j);
            let expected = oracle(r, x);
            let got = w(0.0, r, 2.0 * x);
            // K_{iR} has zeros below x ≈ R; measure against the local envelope there
            let envelope = (-2..=2).map(|d| oracle(r, x + 0.02 * f64::from(d)).abs()).fold(0.0, f64::max);
            assert!((got - expected).abs() < 1e-9 * envelope, "R={r} x={x}: {got} vs {expected}");
        }
    }
}

#[test]
fn large_argument_matches_asymptotic_series() {
    let (oracle, bound) = asymptotic_oracle(5.5, 0.5, 80.0);
    let got = w(5.5, 0.5, 80.0);
    assert!((got - oracle).abs() <= bound.max(1e-14 * oracle.abs()), "{got} vs {oracle} (bound {bound})");
    for &(kappa, r, y) in &[(0.5, 3.7, 60.0), (-3.0, 2.9, 70.0), (5.0, 1.0, 90.0)] {
        let (oracle, bound) = asymptotic_oracle(kappa, r, y);
        let got = w(kappa, r, y);
        assert!((got - oracle).abs() <= bound.max(1e-13 * oracle.abs()), "κ={kappa}: {got} vs {oracle}");
    }
}

#[test]
fn basis_function_at_k6() {
    let r = FIXTURE_R[3];
    for y in [0.5, 0.9, 1.7] {
        let z = Complex64::new(0.0, y);
        let got = basis_w(0, 6, r, z, false).unwrap();
        let expected = w(3.0, r, 2.0 * std::f64::consts::PI * y) / 0.5f64.sqrt();
        assert!(got.im.abs() < 1e-15 * got.norm());
        assert!((got.re - expected).abs() < 1e-14 * expected.abs());
        let negative = radial(-1, 6, 6, r, y, false).unwrap().value;
        assert!((negative - w(-3.0, r, 2.0 * std::f64::consts::PI * y) / 0.5f64.sqrt()).abs() < 1e-14 * negative.abs());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reflection_conjugates(n in -30i64..30, k in 1u32..12, x in -0.5f64..0.5, y in 0.2f64..3.0, star: bool) {
        let a = basis_w(n, k, 3.0, Complex64::new(x, y), star).unwrap();
        let b = basis_w(n, k, 3.0, Complex64::new(-x, y), star).unwrap();
        prop_assert!((a - b.conj()).norm() <= 1e-14 * a.norm().max(1e-300));
    }

    #[test]
    fn ode_holds_at_random_points(twice_kappa in -11i32..=11, r in 0.5f64..8.0, y in 0.05f64..60.0) {
        let kappa = f64::from(twice_kappa) / 2.0;
        prop_assert!(whittaker_ode_residual(|t| w(kappa, r, t), kappa, r, y) < 1e-8);
    }
}
