//! f_n(y) = ∫₀^∞ xⁿ/(x² + 1) · 1/(e^{yx} − 1) dx against oracles that do
//! not share code with the library.

use nefluct::dynamics::{dimensionless_drive, DriveKind};
use nefluct::kernels::{f_n, f_n_diff, f_n_prime};
use nefluct::ThermalPair;
use proptest::prelude::*;

fn gamma_int(n: u32) -> f64 {
    (1..n).map(|k| k as f64).product()
}

/// ζ(s) for s ≥ 2 by Euler–Maclaurin after 100 terms.
fn zeta(s: f64) -> f64 {
    let n = 100.0f64;
    let head: f64 = (1..100).map(|k| (k as f64).powf(-s)).sum();
    head + n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s) + s * n.powf(-s - 1.0) / 12.0
        - s * (s + 1.0) * (s + 2.0) * n.powf(-s - 3.0) / 720.0
}

/// ∫₀^∞ x^k/(e^{yx} − 1) dx = Γ(k+1)ζ(k+1)/y^{k+1}.
fn bose_moment(k: u32, y: f64) -> f64 {
    gamma_int(k + 1) * zeta(k as f64 + 1.0) / y.powi(k as i32 + 1)
}

#[test]
fn recurrence_holds_to_1e8() {
    for n in 2..=9 {
        for y in [0.1, 1.0, 10.0] {
            let lhs = f_n(n + 2, y).unwrap() + f_n(n, y).unwrap();
            let rhs = bose_moment(n, y);
            assert!(((lhs - rhs) / rhs).abs() < 1e-8, "n={n} y={y}: {lhs} vs {rhs}");
        }
    }
}

/// 1/(x² + 1) = Σ (−1)ᵏ x^{2k} turned into a series in 1/y, truncated at
/// its smallest term.
fn large_y_series(n: u32, y: f64) -> f64 {
    let mut sum = 0.0;
    let mut last = f64::INFINITY;
    for k in 0..40 {
        let t = bose_moment(n + 2 * k, y);
        if t > last {
            break;
        }
        sum += if k % 2 == 0 { t } else { -t };
        last = t;
    }
    sum
}

#[test]
fn large_y_asymptote() {
    for n in 2..=12 {
        let got = f_n(n, 50.0).unwrap();
        let expect = large_y_series(n, 50.0);
        let rel = ((got - expect) / expect).abs();
        assert!(rel < 1e-3, "n={n}: {rel:e}");
        assert!(rel < 1e-9, "n={n}: {rel:e}");
    }
}

/// Romberg on [0, 60] with the removable point x = 0 set to zero.
fn romberg_f3_at_1() -> f64 {
    let f = |x: f64| if x == 0.0 { 0.0 } else { x.powi(3) / (x * x + 1.0) / x.exp_m1() };
    let (a, b) = (0.0, 60.0);
    let mut table: Vec<Vec<f64>> = Vec::new();
    let mut trap = 0.5 * (b - a) * (f(a) + f(b));
    for level in 0..18 {
        if level > 0 {
            let n = 1usize << (level - 1);
            let h = (b - a) / (2 * n) as f64;
            let mid: f64 = (0..n).map(|i| f(a + (2 * i + 1) as f64 * h)).sum();
            trap = 0.5 * trap + h * mid;
        }
        let mut row = vec![trap];
        for j in 1..=level.min(6) {
            let p = 4f64.powi(j as i32);
            let prev = &table[level - 1];
            row.push((p * row[j - 1] - prev[j - 1]) / (p - 1.0));
        }
        table.push(row);
    }
    *table.last().unwrap().last().unwrap()
}

#[test]
fn brute_force_f3_at_one() {
    let reference = romberg_f3_at_1();
    let got = f_n(3, 1.0).unwrap();
    assert!(((got - reference) / reference).abs() < 1e-10, "{got} vs {reference}");
}

#[test]
fn derivative_matches_central_difference() {
    for (n, y) in [(3, 0.1), (7, 0.5), (9, 2.0)] {
        let h = 1e-5 * y;
        let fd = (f_n(n, y + h).unwrap() - f_n(n, y - h).unwrap()) / (2.0 * h);
        let d = f_n_prime(n, y).unwrap();
        assert!(((fd - d) / d).abs() < 1e-6, "n={n} y={y}");
    }
}

#[test]
fn domain_is_enforced() {
    assert!(f_n(1, 1.0).is_err());
    assert!(f_n(13, 1.0).is_err());
    assert!(f_n(3, 0.0).is_err());
    assert!(f_n(3, -1.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decreasing_in_y(n in 2u32..=12, y in 0.01f64..20.0, dy in 0.01f64..5.0) {
        prop_assert!(f_n(n, y).unwrap() > f_n(n, y + dy).unwrap());
    }

    #[test]
    fn difference_matches_separate_evaluations(n in 2u32..=12, y1 in 0.05f64..10.0, y2 in 0.05f64..10.0) {
        let d = f_n_diff(n, y1, y2).unwrap();
        let sep = f_n(n, y1).unwrap() - f_n(n, y2).unwrap();
        let scale = f_n(n, y1.min(y2)).unwrap();
        prop_assert!((d - sep).abs() <= 1e-9 * scale);
    }

    #[test]
    fn drive_sign_follows_temperature_order(t in 50.0f64..2000.0, r in 0.2f64..5.0) {
        let th = ThermalPair::new(t, t * r).unwrap();
        for kind in [DriveKind::Force, DriveKind::Torque, DriveKind::Power] {
            let d = dimensionless_drive(kind, 0.035, &th).unwrap();
            let expect = (th.env - th.body).signum();
            if th.env == th.body {
                prop_assert_eq!(d, 0.0);
            } else {
                prop_assert_eq!(d.signum(), expect);
            }
        }
    }
}
