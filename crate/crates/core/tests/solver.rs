use maass_hecke::arith::chi_k;
use maass_hecke::fixtures;
use maass_hecke::hecke::{admissible_indices, apply_t, apply_t_minus, eigenvalue_lambda, Branch, OperatorDescriptor};
use maass_hecke::modular::{j_factor, EtaMultiplier, GL2Int};
use maass_hecke::series::{CoefficientSeries, Normalization};
use maass_hecke::solver::{apply_hecke_pointwise, apply_t_pointwise, evaluate_automorphic, pullback, solve, SolverConfig};
use maass_hecke::Error;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;

const R2: f64 = 2.95645894117486;
const R6: f64 = 3.70330780105981;

fn k6() -> &'static CoefficientSeries {
    static CELL: OnceLock<CoefficientSeries> = OnceLock::new();
    CELL.get_or_init(|| solve(&SolverConfig::new(6, R6).with_normalization(Normalization::C0)).unwrap().series)
}

fn k2() -> &'static CoefficientSeries {
    static CELL: OnceLock<CoefficientSeries> = OnceLock::new();
    CELL.get_or_init(|| solve(&SolverConfig::new(2, R2).with_y(0.45)).unwrap().series)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

#[test]
fn reproduces_table_values() {
    assert!(rel(k6().get(1).unwrap(), Complex64::new(0.5384467700193, 0.0)) < 1e-8);
    assert!(rel(k6().get(-1).unwrap(), Complex64::new(4450.801589309, 0.0)) < 1e-7);
    assert!(rel(k2().get(2).unwrap(), Complex64::new(-1.471655144989, 0.0)) < 1e-8);
    for (solved, name) in [(k6(), "k6"), (k2(), "k2")] {
        let table = fixtures::load(name).unwrap();
        for n in -10..=10 {
            assert!(rel(solved.get(n).unwrap(), table.get(n).unwrap()) < 1e-6, "{name} c({n})");
        }
    }
}

/// Random word in S and T^e whose action keeps `z` above height `floor`.
fn short_word(rng: &mut impl Rng, z: Complex64, floor: f64) -> GL2Int {
    loop {
        let mut g = GL2Int::IDENTITY;
        for _ in 0..rng.random_range(1..=4) {
            g = if rng.random_bool(0.5) { GL2Int::S * g } else { GL2Int::t_pow(rng.random_range(-2..=2)) * g };
        }
        if g != GL2Int::IDENTITY && g.act(z).im >= floor {
            return g;
        }
    }
}

#[test]
fn automorphy_at_held_out_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for f in [k6(), k2()] {
        let eta = EtaMultiplier::new(f.k());
        let mut worst = 0.0f64;
        let mut scale = 0.0f64;
        for _ in 0..20 {
            let z = Complex64::new(rng.random_range(-0.5..0.5), rng.random_range(0.35..1.2));
            let a = short_word(&mut rng, z, 0.35);
            let factor = eta.eval(&a).unwrap().to_complex() * j_factor(&a, z, f.k() as i32).unwrap();
            let fz = f.evaluate(z).unwrap();
            worst = worst.max((f.evaluate(a.act(z)).unwrap() / factor - fz).norm());
            scale = scale.max(fz.norm());
        }
        assert!(worst < 1e-5 * scale, "k={}: {worst} vs {scale}", f.k());
    }
}

#[test]
fn independent_of_sampling_height() {
    for (k, r, norm) in [(6, R6, Normalization::C0), (2, R2, Normalization::C1)] {
        let a = solve(&SolverConfig::new(k, r).with_y(0.35).with_normalization(norm)).unwrap().series;
        let b = solve(&SolverConfig::new(k, r).with_y(0.45).with_normalization(norm)).unwrap().series;
        for n in -15..=15 {
            assert!(rel(a.get(n).unwrap(), b.get(n).unwrap()) < 1e-5, "k={k} c({n})");
        }
    }
}

#[test]
fn stable_under_doubling_truncation() {
    let wide = solve(&SolverConfig::new(6, R6).with_m(50).with_normalization(Normalization::C0)).unwrap().series;
    for n in -12..=12 {
        assert!(rel(k6().get(n).unwrap(), wide.get(n).unwrap()) < 1e-6, "c({n})");
    }
}

#[test]
fn near_eigenform() {
    for f in [k6(), k2()] {
        let pivot = f.normalization().index().unwrap();
        for m in admissible_indices(f.k(), Branch::Plus, 3) {
            let g = apply_t(m, f).unwrap();
            let lambda = g.get(pivot).unwrap() / f.get(pivot).unwrap();
            assert!(rel(lambda, eigenvalue_lambda(m, f).unwrap()) < 1e-8);
            for (n, c) in g.iter() {
                let expected = lambda * f.get(n).unwrap();
                assert!((c - expected).norm() < 1e-4 * expected.norm(), "k={} m={m} n={n}", f.k());
            }
        }
    }
}

#[test]
fn coefficients_are_real() {
    for f in [k6(), k2()] {
        for (n, c) in f.iter() {
            assert!(c.im.abs() < 1e-6 * c.norm(), "k={} c({n}) = {c}", f.k());
        }
    }
}

#[test]
fn pointwise_operator_matches_coefficients() {
    let f = k6();
    let z = Complex64::new(0.07, 0.8);
    let coefficient = apply_t(3, f).unwrap().evaluate(z).unwrap();
    let pointwise = apply_t_pointwise(3, f, z).unwrap();
    assert!(rel(pointwise, coefficient) < 1e-4, "{pointwise} vs {coefficient}");
}

/// `TBar<5> T-<5> = T<25> + χ(5) T<1>` on an eigenform, with `TBar` taken pointwise.
#[test]
fn pointwise_bar_operator_matches_eigenvalue() {
    let f = solve(&SolverConfig::new(2, R2).with_m(40).with_y(0.45)).unwrap().series;
    let g = apply_t_minus(5, &f).unwrap();
    let op = OperatorDescriptor::t_bar(2, 5).unwrap();
    let scalar = eigenvalue_lambda(25, &f).unwrap() + chi_k(2, 5).to_complex();
    for z in [Complex64::new(0.1, 0.9), Complex64::new(-0.3, 1.2)] {
        let pointwise = apply_hecke_pointwise(&op, &g, z).unwrap();
        let expected = scalar * f.evaluate(z).unwrap();
        assert!(rel(pointwise, expected) < 1e-4, "{pointwise} vs {expected}");
    }
}

#[test]
fn pointwise_operator_is_linear() {
    let f = k2();
    let g = fixtures::load("k2").unwrap();
    let z = Complex64::new(0.2, 0.7);
    let s = Complex64::new(0.3, -1.1);
    let combined =
        CoefficientSeries::from_fn(2, R2, f.orientation(), -25, 25, |n| f.get(n).unwrap() + s * g.get(n).unwrap()).unwrap();
    let lhs = apply_t_pointwise(7, &combined, z).unwrap();
    let rhs = apply_t_pointwise(7, f, z).unwrap() + s * apply_t_pointwise(7, &g, z).unwrap();
    assert!((lhs - rhs).norm() < 1e-10 * lhs.norm());
}

#[test]
fn automorphic_evaluation_agrees_inside_domain() {
    let f = k6();
    for z in [Complex64::new(0.3, 1.1), Complex64::new(-0.2, 2.0)] {
        assert!(rel(evaluate_automorphic(f, z).unwrap(), f.evaluate(z).unwrap()) < 1e-14);
    }
    let z = Complex64::new(0.13, 0.3);
    let (_, a) = pullback(z).unwrap();
    assert_ne!(a, GL2Int::IDENTITY);
    assert!(rel(evaluate_automorphic(f, z).unwrap(), f.evaluate(z).unwrap()) < 1e-6);
}

#[test]
fn deterministic() {
    let cfg = SolverConfig::new(5, 3.6624068669081);
    let (a, b) = (solve(&cfg).unwrap(), solve(&cfg).unwrap());
    assert_eq!(a.series.to_csv_string(), b.series.to_csv_string());
}

#[test]
fn rejects_bad_configurations() {
    for cfg in [
        SolverConfig::new(6, R6).with_y(0.9),
        SolverConfig::new(6, R6).with_q(50),
        SolverConfig::new(0, R6),
        SolverConfig::new(6, -1.0),
    ] {
        assert!(matches!(solve(&cfg), Err(Error::InvalidConfig(_) | Error::InvalidWeight(_))), "{cfg:?}");
    }
}
