//! Riemann zeta, factorials and Bose–Einstein occupations.

/// n! as a float; exact through 22!.
pub fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

// B_2j / (2j)! for j = 1..=7
const BERNOULLI_OVER_FACT: [f64; 7] = [
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40_320.0,
    5.0 / 66.0 / 3_628_800.0,
    -691.0 / 2730.0 / 479_001_600.0,
    7.0 / 6.0 / 87_178_291_200.0,
];

/// Riemann ζ(s) for real s > 1, by Euler–Maclaurin summation.
///
/// Twelve explicit terms and seven Bernoulli corrections put the truncation
/// error below 10⁻¹⁶ relative for every s ≥ 1.5.
pub fn zeta(s: f64) -> f64 {
    assert!(s > 1.0, "zeta: s must exceed 1, got {s}");
    const N: usize = 12;
    let n = N as f64;
    let mut sum = 0.0;
    for k in (1..N).rev() {
        sum += (k as f64).powf(-s);
    }
    sum += n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s);
    // s (s+1) ... (s+2j-2) N^{-s-2j+1}
    let mut rising = s;
    let mut power = n.powf(-s - 1.0);
    for (j, c) in BERNOULLI_OVER_FACT.iter().enumerate() {
        sum += c * rising * power;
        let m = 2.0 * j as f64;
        rising *= (s + m + 1.0) * (s + m + 2.0);
        power /= n * n;
    }
    sum
}

/// Γ(n+1) ζ(n+1) = ∫₀^∞ xⁿ/(eˣ − 1) dx, the Bose moment.
pub fn bose_moment(n: u32) -> f64 {
    factorial(n) * zeta(n as f64 + 1.0)
}

/// Upper incomplete gamma Γ(m+1, z) for integer m ≥ 0.
pub fn upper_gamma_int(m: u32, z: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..=m {
        term *= z / k as f64;
        sum += term;
    }
    factorial(m) * (-z).exp() * sum
}

/// Bose occupation 1/(eˣ − 1) for x > 0; +∞ maps to 0.
#[inline]
pub fn bose(x: f64) -> f64 {
    if x.is_infinite() {
        0.0
    } else {
        1.0 / x.exp_m1()
    }
}

/// n(a) − n(b), accurate when a and b are close and free of overflow when
/// either is large.
pub fn bose_diff(a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    if !a.is_finite() || !b.is_finite() || (a - b).abs() > 0.5 * a.min(b).max(1.0) {
        return bose(a) - bose(b);
    }
    // e^{-a} - e^{-b} = -e^{-a} expm1(a - b); (1 - e^{-a})(1 - e^{-b}) = expm1(-a) expm1(-b)
    -(-a).exp() * (a - b).exp_m1() / ((-a).exp_m1() * (-b).exp_m1())
}

/// 1/(4 sinh²(x/2)) = eˣ/(eˣ − 1)² = −dn/dx, overflow-safe.
#[inline]
pub fn bose_slope(x: f64) -> f64 {
    if x > 1400.0 {
        return 0.0;
    }
    let e = (-x).exp();
    let d = (-x).exp_m1();
    e / (d * d)
}
