//! φ kernel against an independent 256-bit evaluation of its closed form
//! and an exact rational Taylor expansion.

use astro_float::{BigFloat, Consts, RoundingMode};
use nefluct::kernels::{phi, phi_closed, phi_hat, phi_hat_shifted, PhiEvalPolicy, PHI_SERIES};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

const P: usize = 256;
const RM: RoundingMode = RoundingMode::ToEven;

struct Big {
    cc: Consts,
}

impl Big {
    fn new() -> Self {
        Big { cc: Consts::new().unwrap() }
    }

    fn f(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, P)
    }

    fn int(&self, i: i64) -> BigFloat {
        BigFloat::from_i64(i, P)
    }

    fn to_f64(v: &BigFloat) -> f64 {
        format!("{v}").parse().unwrap()
    }

    /// φ(x) from the closed form in 256-bit arithmetic.
    fn phi(&mut self, x: &BigFloat) -> BigFloat {
        let two_x = x.mul(&self.int(2), P, RM);
        let s = two_x.sin(P, RM, &mut self.cc);
        let c = two_x.cos(P, RM, &mut self.cc);
        let x2 = x.mul(x, P, RM);
        let x4 = x2.mul(&x2, P, RM);
        let poly = |a: i64, b: i64, d: i64| -> BigFloat {
            self.int(a)
                .add(&self.int(b).mul(&x2, P, RM), P, RM)
                .add(&self.int(d).mul(&x4, P, RM), P, RM)
        };
        let p0 = poly(-9, -2, -1);
        let pc = poly(9, -16, 3).mul(&c, P, RM);
        let ps = x.mul(&poly(18, -8, 1), P, RM).mul(&s, P, RM);
        p0.add(&pc, P, RM).add(&ps, P, RM)
    }

    fn phi_hat(&mut self, x: &BigFloat) -> BigFloat {
        let x2 = x.mul(x, P, RM);
        let x4 = x2.mul(&x2, P, RM);
        let x8 = x4.mul(&x4, P, RM);
        self.phi(x).div(&x8, P, RM)
    }
}

#[test]
fn series_matches_extended_closed_form_across_switch_band() {
    let mut big = Big::new();
    let default = PhiEvalPolicy::default();
    let series_only = PhiEvalPolicy { switch_threshold: 1.5, ..default };
    let mut worst: f64 = 0.0;
    for k in 0..1000 {
        let x = 0.25 + 0.5 * (k as f64 + 0.5) / 1000.0;
        let reference = Big::to_f64(&big.phi_hat(&big.f(x)));
        for policy in [&default, &series_only] {
            let rel = ((phi_hat(x, policy) - reference) / reference).abs();
            worst = worst.max(rel);
        }
        let r8 = Big::to_f64(&big.phi(&big.f(x)));
        assert!(((phi(x, &default) - r8) / r8).abs() < 1e-10, "φ({x})");
    }
    assert!(worst < 1e-10, "worst relative error {worst:e}");
}

#[test]
fn closed_form_in_binary64_is_accurate_past_the_switch() {
    let mut big = Big::new();
    for k in 0..200 {
        let x = 0.5 + 20.0 * k as f64 / 200.0;
        let reference = Big::to_f64(&big.phi(&big.f(x)));
        let rel = ((phi_closed(x) - reference) / reference).abs();
        assert!(rel < 1e-9, "x = {x}: {rel:e}");
    }
}

#[test]
fn leading_coefficients_by_finite_differences() {
    let mut big = Big::new();
    let h = 1e-3;
    let g = |big: &mut Big, x: f64| Big::to_f64(&big.phi_hat(&big.f(x)));
    let (g1, g2) = (g(&mut big, h), g(&mut big, 2.0 * h));
    // φ̂(x) = c₀ + c₁x² + c₂x⁴ + …; eliminate c₁ and c₂ respectively
    let c0 = (4.0 * g1 - g2) / 3.0;
    let g3 = g(&mut big, 3.0 * h);
    // three-point fit of c₁ free of c₀ and c₂
    let (u1, u2, u3) = (h * h, 4.0 * h * h, 9.0 * h * h);
    let d21 = (g2 - g1) / (u2 - u1);
    let d31 = (g3 - g1) / (u3 - u1);
    // dᵢ₁ = c₁ + c₂(uᵢ + u₁)
    let c2 = (d31 - d21) / (u3 - u2);
    let c1 = d21 - c2 * (u2 + u1);
    assert!((c0 / (-4.0 / 9.0) - 1.0).abs() < 1e-6, "c0 = {c0}");
    assert!((c1 / (28.0 / 225.0) - 1.0).abs() < 1e-6, "c1 = {c1}");
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Coefficient of x^m in the Taylor expansion of the closed form.
fn closed_form_coefficient(m: u32) -> BigRational {
    let r = |n: i64| BigRational::from_integer(BigInt::from(n));
    // cos 2x = Σ (−1)^k 2^{2k} x^{2k}/(2k)!, sin 2x likewise with odd powers
    let trig = |p: i64| -> BigRational {
        if p < 0 {
            return BigRational::zero();
        }
        let p = p as u32;
        let sign = if (p / 2) % 2 == 0 { 1 } else { -1 };
        BigRational::new(BigInt::from(sign) * BigInt::from(2).pow(p), factorial(p))
    };
    let cos_c = |p: i64| if p >= 0 && p % 2 == 0 { trig(p) } else { BigRational::zero() };
    let sin_c = |p: i64| if p >= 0 && p % 2 == 1 { trig(p) } else { BigRational::zero() };
    let m = m as i64;
    let mut c = BigRational::zero();
    for (k, a) in [(0, -9), (2, -2), (4, -1)] {
        if m == k {
            c += r(a);
        }
    }
    for (k, a) in [(0, 9), (2, -16), (4, 3)] {
        c += r(a) * cos_c(m - k);
    }
    for (k, a) in [(1, 18), (3, -8), (5, 1)] {
        c += r(a) * sin_c(m - k);
    }
    c
}

#[test]
fn series_coefficients_regenerate_exactly() {
    for m in 0..8 {
        assert!(closed_form_coefficient(m).is_zero(), "x^{m} must vanish");
    }
    for (k, &(n, d)) in PHI_SERIES.iter().enumerate() {
        let expect = BigRational::new(BigInt::from(n), BigInt::from(d));
        assert_eq!(closed_form_coefficient(8 + 2 * k as u32), expect, "term {k}");
        assert!(closed_form_coefficient(9 + 2 * k as u32).is_zero());
    }
}

#[test]
fn shifted_kernel_keeps_relative_accuracy_near_the_origin() {
    let p = PhiEvalPolicy::default();
    for x in [1e-8, 1e-5, 1e-3, 0.1, 0.49, 0.51, 2.0] {
        let expect = if x < 0.4 {
            let u = x * x;
            u * (28.0 / 225.0 - 22.0 / 1575.0 * u + 256.0 / 297_675.0 * u * u)
        } else {
            phi_hat(x, &p) + 4.0 / 9.0
        };
        let got = phi_hat_shifted(x, &p);
        assert!(((got - expect) / expect).abs() < 1e-9, "x = {x}");
    }
}
