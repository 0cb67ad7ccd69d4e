//! Scalar kernels shared by every force and torque integral.
//!
//! * Bose occupation differences between the environment (T) and the body (T′).
//! * f_n(y) = ∫₀^∞ xⁿ/(x² + 1) · 1/(e^{yx} − 1) dx, which turns Drude spectral
//!   integrals into one-parameter functions of βν.
//! * The pair kernel φ(R̃), whose closed form loses every significant digit
//!   near the origin; below the switch point it is summed from its Taylor
//!   series instead.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quad::{self, Estimate, Tolerance};
use crate::special::{bose, bose_diff, bose_slope, upper_gamma_int};
use crate::units::SI;

/// Environment temperature T and body temperature T′, both in kelvin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalPair {
    pub env: f64,
    pub body: f64,
}

impl ThermalPair {
    pub fn new(env: f64, body: f64) -> Result<Self> {
        for (name, t) in [("environment", env), ("body", body)] {
            if !(t >= 0.0) || !t.is_finite() {
                return Err(Error::domain(
                    "ThermalPair",
                    format!("{name} temperature must be finite and non-negative, got {t}"),
                ));
            }
        }
        Ok(ThermalPair { env, body })
    }

    /// Body at `ratio` times the environment temperature.
    pub fn with_ratio(env: f64, ratio: f64) -> Result<Self> {
        Self::new(env, env * ratio)
    }

    pub fn equilibrium(&self) -> bool {
        self.env == self.body
    }

    /// k_B T in eV.
    pub fn env_ev(&self) -> f64 {
        SI.temperature_to_natural(self.env)
    }

    /// k_B T′ in eV.
    pub fn body_ev(&self) -> f64 {
        SI.temperature_to_natural(self.body)
    }

    /// The hotter of the two, in eV.
    pub fn hot_ev(&self) -> f64 {
        self.env_ev().max(self.body_ev())
    }

    pub fn swapped(&self) -> Self {
        ThermalPair {
            env: self.body,
            body: self.env,
        }
    }

    /// n(ω, T) − n(ω, T′) without argument checks.
    #[inline]
    pub fn occupation_difference(&self, omega: f64) -> f64 {
        if self.env == self.body {
            return 0.0;
        }
        bose_diff(scaled(omega, self.env_ev()), scaled(omega, self.body_ev()))
    }
}

#[inline]
fn scaled(omega: f64, t: f64) -> f64 {
    if t == 0.0 {
        f64::INFINITY
    } else {
        omega / t
    }
}

fn check_frequency(op: &'static str, omega: f64) -> Result<()> {
    if omega > 0.0 && omega.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(op, format!("frequency must be positive, got {omega}")))
    }
}

/// n(ω, T) − n(ω, T′); positive exactly when T > T′.
pub fn planck_diff(omega: f64, th: &ThermalPair) -> Result<f64> {
    check_frequency("planck_diff", omega)?;
    Ok(th.occupation_difference(omega))
}

/// coth(β′ω/2) − coth(βω/2), evaluated as 2[n(ω,T′) − n(ω,T)] so that it
/// stays accurate when both cotangents are close to one.
pub fn coth_diff(omega: f64, th: &ThermalPair) -> Result<f64> {
    check_frequency("coth_diff", omega)?;
    if th.equilibrium() {
        return Ok(0.0);
    }
    Ok(2.0 * bose_diff(scaled(omega, th.body_ev()), scaled(omega, th.env_ev())))
}

/// Default tolerance for f_n.
pub const FN_REL_TOL: f64 = 1e-11;

fn check_fn_args(n: u32, y: f64) -> Result<()> {
    if !(2..=12).contains(&n) {
        return Err(Error::domain("f_n", format!("order n = {n} outside the supported 2..=12")));
    }
    if !(y > 0.0) || !y.is_finite() {
        return Err(Error::domain("f_n", format!("y must be positive, got {y} (the integral diverges)")));
    }
    Ok(())
}

/// Truncation point X with an explicit bound on the discarded tail
/// ∫_X^∞ x^{n−2} e^{−yx}/(1 − e^{−yX}) dx ≥ ∫_X^∞ xⁿ/(x²+1) n(yx) dx.
fn fn_cutoff(n: u32, y: f64) -> (f64, f64) {
    let mut z = n as f64 + 60.0;
    loop {
        let bound = upper_gamma_int(n - 2, z) / y.powi(n as i32 - 1) / (-(-z).exp_m1());
        // relative to the small-x size of the integral, which is at least of
        // order (n−2)!/yⁿ⁻¹ · e^{-...}; 10⁻³⁰ of the leading moment is ample
        let scale = crate::special::factorial(n - 2) / y.powi(n as i32 - 1);
        if bound <= 1e-30 * scale || z > 2000.0 {
            return (z / y, bound);
        }
        z *= 1.5;
    }
}

/// Integrate g(x) over [0, X] through x = t/(1 − t), with breakpoints at
/// x = 1 and at the Bose peak.
fn integrate_fn_family<G: Fn(f64) -> f64>(g: G, n: u32, y: f64, tol: Tolerance) -> Result<Estimate> {
    let (x_max, tail) = fn_cutoff(n, y);
    let t_of = |x: f64| x / (1.0 + x);
    let mut breaks = vec![0.0, t_of(1.0), t_of((n as f64 / y).max(1e-3)), t_of(x_max)];
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let h = |t: f64| {
        let s = 1.0 - t;
        let x = t / s;
        g(x) / (s * s)
    };
    let r = quad::integrate_with_breaks(h, &breaks, tol)?;
    Ok(Estimate::new(r.value, r.error + tail))
}

/// f_n(y) at the default tolerance.
pub fn f_n(n: u32, y: f64) -> Result<f64> {
    Ok(f_n_with(n, y, Tolerance::rel(FN_REL_TOL))?.value)
}

/// f_n(y) with an explicit tolerance and error estimate.
pub fn f_n_with(n: u32, y: f64, tol: Tolerance) -> Result<Estimate> {
    check_fn_args(n, y)?;
    let p = n as i32;
    integrate_fn_family(|x| x.powi(p) / (x * x + 1.0) * bose(y * x), n, y, tol)
}

/// f_n(y₁) − f_n(y₂) as a single integral of the occupation difference, so
/// that nearly equal arguments do not cancel.
pub fn f_n_diff(n: u32, y1: f64, y2: f64) -> Result<f64> {
    check_fn_args(n, y1)?;
    check_fn_args(n, y2)?;
    if y1 == y2 {
        return Ok(0.0);
    }
    let p = n as i32;
    let y = y1.min(y2);
    let r = integrate_fn_family(
        |x| x.powi(p) / (x * x + 1.0) * bose_diff(y1 * x, y2 * x),
        n,
        y,
        Tolerance::rel(FN_REL_TOL),
    )?;
    Ok(r.value)
}

/// f_n′(y) = −∫ x^{n+1}/(x² + 1) · e^{yx}/(e^{yx} − 1)² dx.
pub fn f_n_prime(n: u32, y: f64) -> Result<f64> {
    check_fn_args(n, y)?;
    let p = n as i32 + 1;
    let r = integrate_fn_family(
        |x| x.powi(p) / (x * x + 1.0) * bose_slope(y * x),
        n + 1,
        y,
        Tolerance::rel(FN_REL_TOL),
    )?;
    Ok(-r.value)
}

/// How φ(R̃) is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiEvalPolicy {
    /// Below this R̃ the Taylor series is used.
    pub switch_threshold: f64,
    /// Number of series terms, 2..=12.
    pub series_terms: usize,
    /// Working precision of the closed form; only binary64 is implemented.
    pub working_precision_bits: u32,
}

impl Default for PhiEvalPolicy {
    fn default() -> Self {
        PhiEvalPolicy {
            switch_threshold: 0.5,
            series_terms: 12,
            working_precision_bits: 53,
        }
    }
}

impl PhiEvalPolicy {
    pub fn validate(&self) -> Result<()> {
        if !(self.switch_threshold > 0.0 && self.switch_threshold <= 1.5) {
            return Err(Error::Settings(format!(
                "phi switch threshold {} outside (0, 1.5]",
                self.switch_threshold
            )));
        }
        if !(2..=PHI_SERIES.len()).contains(&self.series_terms) {
            return Err(Error::Settings(format!(
                "phi series terms {} outside 2..={}",
                self.series_terms,
                PHI_SERIES.len()
            )));
        }
        if self.working_precision_bits != 53 {
            return Err(Error::Settings(format!(
                "phi working precision {} bits unsupported (binary64 only)",
                self.working_precision_bits
            )));
        }
        Ok(())
    }
}

/// Taylor coefficients of φ(x)/x⁸ in powers of x², as exact rationals
/// (numerator, denominator): φ(x) = Σₖ cₖ x^{8+2k}.
pub const PHI_SERIES: [(i128, i128); 12] = [
    (-4, 9),
    (28, 225),
    (-22, 1575),
    (256, 297_675),
    (-2, 59_535),
    (116, 127_702_575),
    (-74, 4_104_725_625),
    (1472, 5_373_085_843_125),
    (-16, 4_861_363_381_875),
    (536, 16_722_117_760_973_625),
    (-316, 1_223_754_981_598_524_375),
    (128, 73_159_265_204_259_609_375),
];

#[inline]
fn series_coeff(k: usize) -> f64 {
    let (n, d) = PHI_SERIES[k];
    n as f64 / d as f64
}

/// Closed form of φ, exact in exact arithmetic but cancelling badly for small x.
#[inline]
pub fn phi_closed(x: f64) -> f64 {
    let (s, c) = (2.0 * x).sin_cos();
    let x2 = x * x;
    let x4 = x2 * x2;
    -9.0 - 2.0 * x2 - x4 + (9.0 - 16.0 * x2 + 3.0 * x4) * c + x * (18.0 - 8.0 * x2 + x4) * s
}

#[inline]
fn phi_hat_series(x: f64, terms: usize) -> f64 {
    let u = x * x;
    let mut acc = 0.0;
    for k in (0..terms).rev() {
        acc = acc * u + series_coeff(k);
    }
    acc
}

/// φ(R̃) under `policy`.
pub fn phi(x: f64, policy: &PhiEvalPolicy) -> f64 {
    let x = x.abs();
    if x < policy.switch_threshold {
        let x2 = x * x;
        let x8 = x2 * x2 * x2 * x2;
        x8 * phi_hat_series(x, policy.series_terms)
    } else {
        phi_closed(x)
    }
}

/// φ(R̃)/R̃⁸, finite at the origin (→ −4/9).
#[inline]
pub fn phi_hat(x: f64, policy: &PhiEvalPolicy) -> f64 {
    let x = x.abs();
    if x < policy.switch_threshold {
        phi_hat_series(x, policy.series_terms)
    } else {
        let x2 = x * x;
        let x4 = x2 * x2;
        phi_closed(x) / (x4 * x4)
    }
}

/// φ̂(R̃) + 4/9, without the cancellation of forming it from φ̂.
#[inline]
pub fn phi_hat_shifted(x: f64, policy: &PhiEvalPolicy) -> f64 {
    let x = x.abs();
    if x < policy.switch_threshold {
        let u = x * x;
        let mut acc = 0.0;
        for k in (1..policy.series_terms).rev() {
            acc = acc * u + series_coeff(k);
        }
        acc * u
    } else {
        phi_hat(x, policy) + 4.0 / 9.0
    }
}

/// The coincident limit of the (rotationally averaged) vacuum Green's dyadic.
///
/// Its real part ω²/(6πR) diverges as R → 0 and is dropped; only the
/// imaginary part ω³/6π enters dissipative quantities.
#[derive(Debug, Clone, Copy, Default)]
pub struct VacuumGreensCoincident;

impl VacuumGreensCoincident {
    pub fn im(&self, omega: f64) -> f64 {
        im_gamma_coincident(omega)
    }

    /// The discarded divergent real part at separation `r`.
    pub fn re_divergent(&self, omega: f64, r: f64) -> f64 {
        omega * omega / (6.0 * PI * r)
    }
}

/// Im Γ(ω) at coincident points: ω³/6π.
#[inline]
pub fn im_gamma_coincident(omega: f64) -> f64 {
    omega * omega * omega / (6.0 * PI)
}

/// Radiation-reaction dissipation Im α(ω) = (ω³/6π) α₀².
#[inline]
pub fn radiation_reaction_imalpha(omega: f64, alpha0: f64) -> f64 {
    im_gamma_coincident(omega) * alpha0 * alpha0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::bose_moment;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn planck_diff_equilibrium_and_sign() {
        let eq = ThermalPair::new(300.0, 300.0).unwrap();
        assert_eq!(planck_diff(0.01, &eq).unwrap(), 0.0);
        let th = ThermalPair::new(600.0, 300.0).unwrap();
        for w in [1e-4, 0.01, 0.1, 1.0, 10.0] {
            assert!(planck_diff(w, &th).unwrap() > 0.0 || w > 5.0);
            assert!(planck_diff(w, &th.swapped()).unwrap() <= 0.0);
        }
        assert!(planck_diff(0.0, &th).is_err());
    }

    #[test]
    fn bose_factor_near_zero_matches_laurent_series() {
        // βω = 1e-6: n ≈ 1/x − 1/2 + x/12
        let t = 300.0;
        let w = 1e-6 * SI.temperature_to_natural(t);
        let th = ThermalPair::new(t, 0.0).unwrap();
        let x = w / SI.temperature_to_natural(t);
        let laurent = 1.0 / x - 0.5 + x / 12.0;
        assert!(rel(planck_diff(w, &th).unwrap(), laurent) < 1e-9);
    }

    #[test]
    fn coth_diff_is_minus_twice_planck_diff() {
        let th = ThermalPair::new(250.0, 700.0).unwrap();
        for w in [1e-3, 0.02, 0.3, 2.0] {
            let c = coth_diff(w, &th).unwrap();
            let p = planck_diff(w, &th).unwrap();
            assert!((c + 2.0 * p).abs() <= 4.0 * f64::EPSILON * c.abs());
            // direct cotangent evaluation where it does not cancel
            let (b, bp) = (1.0 / th.env_ev(), 1.0 / th.body_ev());
            let direct = 1.0 / (bp * w / 2.0).tanh() - 1.0 / (b * w / 2.0).tanh();
            if w < 0.5 {
                assert!(rel(c, direct) < 1e-10, "w={w}: {c} vs {direct}");
            }
        }
    }

    #[test]
    fn coth_diff_decays_exponentially_for_cold_body() {
        // T′ → 0: coth(β′ω/2) → 1, difference → −2/(e^{βω} − 1) ≈ −2e^{−βω}.
        let th = ThermalPair::new(300.0, 0.0).unwrap();
        let w = 40.0 * th.env_ev();
        let c = coth_diff(w, &th).unwrap();
        let want = -2.0 * (-40.0f64).exp();
        assert!(rel(c, want) < 1e-15);
    }

    #[test]
    fn f_n_rejects_bad_arguments() {
        assert!(f_n(3, 0.0).is_err());
        assert!(f_n(3, -1.0).is_err());
        assert!(f_n(1, 1.0).is_err());
        assert!(f_n(13, 1.0).is_err());
    }

    #[test]
    fn f_n_recurrence() {
        for n in 2..=9 {
            for y in [0.1, 1.0, 10.0] {
                let lhs = f_n(n + 2, y).unwrap() + f_n(n, y).unwrap();
                let rhs = bose_moment(n) / y.powi(n as i32 + 1);
                assert!(rel(lhs, rhs) < 1e-9, "n={n} y={y}: {lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn f_n_diff_agrees_with_separate_evaluations() {
        let d = f_n_diff(7, 1.35, 0.675).unwrap();
        let s = f_n(7, 1.35).unwrap() - f_n(7, 0.675).unwrap();
        assert!(rel(d, s) < 1e-9);
    }

    #[test]
    fn f_n_prime_matches_central_difference() {
        for n in [3, 7, 9] {
            let y = 1.3;
            let h = 1e-4;
            let fd = (f_n(n, y + h).unwrap() - f_n(n, y - h).unwrap()) / (2.0 * h);
            assert!(rel(f_n_prime(n, y).unwrap(), fd) < 1e-6);
        }
    }

    #[test]
    fn phi_vanishes_at_origin() {
        let p = PhiEvalPolicy::default();
        assert_eq!(phi(0.0, &p), 0.0);
        assert_eq!(phi_closed(0.0), 0.0);
        assert!((phi_hat(0.0, &p) + 4.0 / 9.0).abs() < 1e-16);
    }

    #[test]
    fn phi_leading_behaviour() {
        let p = PhiEvalPolicy::default();
        let r = phi(1e-2, &p) / 1e-16;
        assert!((r + 4.0 / 9.0).abs() < 1e-3);
    }

    #[test]
    fn phi_is_even() {
        let p = PhiEvalPolicy::default();
        for x in [0.1, 0.7, 3.0] {
            assert_eq!(phi(x, &p), phi(-x, &p));
        }
    }

    #[test]
    fn naive_closed_form_loses_digits_near_origin() {
        let p = PhiEvalPolicy::default();
        let naive = phi_closed(1e-2);
        let good = phi(1e-2, &p);
        // at least ten significant digits lost
        assert!(rel(naive, good) > 1e-6, "naive {naive} good {good}");
    }

    #[test]
    fn policy_validation() {
        assert!(PhiEvalPolicy::default().validate().is_ok());
        let bad = PhiEvalPolicy {
            series_terms: 40,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = PhiEvalPolicy {
            working_precision_bits: 113,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn green_coincident_parity_and_values() {
        assert_eq!(im_gamma_coincident(0.0), 0.0);
        assert_eq!(im_gamma_coincident(-1.7), -im_gamma_coincident(1.7));
        assert!((im_gamma_coincident(1.0) - 1.0 / (6.0 * PI)).abs() < 1e-17);
        assert_eq!(radiation_reaction_imalpha(2.0, 0.0), 0.0);
        let a = radiation_reaction_imalpha(0.3, 1.5);
        assert!(rel(radiation_reaction_imalpha(0.3, 3.0), 4.0 * a) < 1e-15);
        assert!(rel(a, im_gamma_coincident(0.3) * 2.25) < 1e-15);
    }
}
