//! Quantum friction: surface formulas, the Einstein–Hopf drag in blackbody
//! radiation, slow-down times, and the steady-state temperature of a moving
//! particle.
//!
//! Polarizabilities are natural-unit volumes (eV⁻³) in the convention where
//! the induced dipole is d = α E with ε₀ = 1, i.e. no 4π is absorbed.

use std::cell::RefCell;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::kernels::radiation_reaction_imalpha;
use crate::material::Material;
use crate::quad::{self, Estimate, Tolerance};
use crate::special::{bose_diff, bose_slope};
use crate::units::{BOHR_RADIUS, SI};

/// Dissipation channel of a particle near a plate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrictionMechanism {
    ImageLag,
    RadiationReaction,
    IntrinsicDissipation,
}

impl FrictionMechanism {
    pub const ALL: [FrictionMechanism; 3] = [
        FrictionMechanism::ImageLag,
        FrictionMechanism::RadiationReaction,
        FrictionMechanism::IntrinsicDissipation,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            FrictionMechanism::ImageLag => "image_lag",
            FrictionMechanism::RadiationReaction => "radiation_reaction",
            FrictionMechanism::IntrinsicDissipation => "intrinsic_dissipation",
        }
    }
}

/// A polarizable particle moving parallel to a conducting plate at zero temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceScenario {
    /// Static polarizability [eV⁻³].
    pub alpha0: f64,
    /// Plate conductivity [eV].
    pub sigma_plate: f64,
    /// Particle conductivity [eV], needed for intrinsic dissipation.
    pub sigma_particle: Option<f64>,
    /// Height above the plate [m].
    pub separation: f64,
    /// Speed as a fraction of c.
    pub velocity: f64,
    pub mechanism: FrictionMechanism,
}

impl SurfaceScenario {
    pub fn validate(&self) -> Result<()> {
        let op = "surface_friction";
        if !(self.separation > 0.0 && self.separation.is_finite()) {
            return Err(Error::domain(op, format!("separation must be positive, got {}", self.separation)));
        }
        if !(0.0..1.0).contains(&self.velocity) {
            return Err(Error::domain(op, format!("velocity must lie in [0, 1), got {}", self.velocity)));
        }
        if !(self.sigma_plate > 0.0) {
            return Err(Error::domain(op, format!("plate conductivity must be positive, got {}", self.sigma_plate)));
        }
        if !self.alpha0.is_finite() {
            return Err(Error::domain(op, "polarizability must be finite"));
        }
        if self.mechanism == FrictionMechanism::IntrinsicDissipation {
            match self.sigma_particle {
                Some(s) if s > 0.0 => {}
                _ => return Err(Error::domain(op, "intrinsic dissipation needs a positive particle conductivity")),
            }
        }
        Ok(())
    }
}

/// Frictional force [N] on the particle; negative (retarding) for v > 0.
pub fn surface_friction(s: &SurfaceScenario) -> Result<f64> {
    s.validate()?;
    let a = SI.length_to_natural(s.separation);
    let v = s.velocity;
    let al = s.alpha0;
    let sg = s.sigma_plate;
    let f = match s.mechanism {
        FrictionMechanism::ImageLag => -135.0 * al * al * v.powi(3) / (2.0 * PI.powi(3) * sg * sg * (2.0 * a).powi(10)),
        FrictionMechanism::RadiationReaction => -105.0 / (128.0 * PI.powi(3)) * al * al * v.powi(5) / (sg * a.powi(9)),
        FrictionMechanism::IntrinsicDissipation => {
            let sp = s.sigma_particle.expect("validated");
            -135.0 / (64.0 * PI * PI) * al / (sg * sp) * v.powi(3) / a.powi(7)
        }
    };
    Ok(SI.force_to_si(f))
}

/// Speed [m/s] at which image-lag and radiation-reaction friction are equal.
pub fn image_radiation_crossover(sigma_plate: f64, separation: f64) -> Result<f64> {
    if !(sigma_plate > 0.0 && separation > 0.0) {
        return Err(Error::domain("image_radiation_crossover", "conductivity and separation must be positive"));
    }
    // 135/(2·2¹⁰ σ² a¹⁰) v³ = 105/(128 σ a⁹) v⁵
    let a = SI.length_to_natural(separation);
    let v2 = 135.0 * 128.0 / (2.0 * 1024.0 * 105.0 * sigma_plate * a);
    Ok(SI.velocity_to_si(v2.sqrt()))
}

/// Static polarizability in atomic units (multiples of a₀³) as eV⁻³.
pub fn polarizability_from_au(au: f64) -> f64 {
    SI.volume_to_natural(au * BOHR_RADIUS.powi(3))
}

/// Im α(ω) of a particle, ω > 0.
#[derive(Debug, Clone, PartialEq)]
pub enum AbsorptionModel {
    /// Radiation-reaction damping of a real static polarizability α₀.
    RadiationReaction { alpha0: f64 },
    /// Im α = A ωⁿ.
    Monomial { exponent: i32, amplitude: f64 },
    /// Weak-coupling particle of `volume` [eV⁻³]: Im α = V Im χ.
    Body { material: Material, volume: f64 },
}

impl AbsorptionModel {
    pub fn im_alpha(&self, omega: f64) -> Result<f64> {
        Ok(match self {
            AbsorptionModel::RadiationReaction { alpha0 } => radiation_reaction_imalpha(omega, *alpha0),
            AbsorptionModel::Monomial { exponent, amplitude } => amplitude * omega.powi(*exponent),
            AbsorptionModel::Body { material, volume } => volume * material.chi(omega)?.im,
        })
    }

    /// Power-law index n of Im α ∝ ωⁿ, when there is one.
    pub fn power(&self) -> Option<i32> {
        match self {
            AbsorptionModel::RadiationReaction { .. } => Some(3),
            AbsorptionModel::Monomial { exponent, .. } => Some(*exponent),
            AbsorptionModel::Body { .. } => None,
        }
    }
}

/// x_max for Bose-weighted spectral integrals with integrand growth xᵖ.
pub(crate) fn spectral_cutoff(power: f64) -> f64 {
    40.0 + 3.0 * power.max(0.0)
}

pub(crate) fn spectral_breaks(x_max: f64) -> Vec<f64> {
    let mut b: Vec<f64> = [0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0]
        .into_iter()
        .filter(|&x| x < x_max)
        .collect();
    b.push(x_max);
    b
}

/// Einstein–Hopf drag [N] on a particle moving slowly at `v` (fraction of c)
/// through blackbody radiation at `temperature` [K]:
/// F = −(vβ/12π²) ∫₀^∞ ω⁵ Im α(ω) / sinh²(βω/2) dω.
pub fn einstein_hopf_force(model: &AbsorptionModel, temperature: f64, v: f64, tol: Tolerance) -> Result<Estimate> {
    if !(0.0..1.0).contains(&v.abs()) {
        return Err(Error::domain("einstein_hopf_force", format!("velocity must satisfy |v| < 1, got {v}")));
    }
    if !(temperature >= 0.0) {
        return Err(Error::domain("einstein_hopf_force", format!("temperature must be non-negative, got {temperature}")));
    }
    if temperature == 0.0 || v == 0.0 {
        return Ok(Estimate::exact(0.0));
    }
    let t = SI.temperature_to_natural(temperature);
    let p = model.power().unwrap_or(3) as f64 + 5.0;
    let x_max = spectral_cutoff(p);
    let fail = RefCell::new(None);
    // 1/sinh²(x/2) = 4 eˣ/(eˣ − 1)²
    let f = |x: f64| {
        let w = x * t;
        match model.im_alpha(w) {
            Ok(ia) => w.powi(5) * ia * 4.0 * bose_slope(x),
            Err(e) => {
                fail.borrow_mut().get_or_insert(e);
                0.0
            }
        }
    };
    let r = quad::integrate_with_breaks(f, &spectral_breaks(x_max), tol)?;
    if let Some(e) = fail.into_inner() {
        return Err(e);
    }
    // dω = T dx and β = 1/T cancel
    let scale = -v / (12.0 * PI * PI);
    Ok(r.scale(scale).scale(SI.force_to_si(1.0)))
}

/// Closed form of the radiation-reaction Einstein–Hopf force [N]:
/// −(32π⁵/135) α₀² T⁸ v.
pub fn einstein_hopf_closed(alpha0: f64, temperature: f64, v: f64) -> f64 {
    let t = SI.temperature_to_natural(temperature);
    SI.force_to_si(-32.0 * PI.powi(5) / 135.0 * alpha0 * alpha0 * t.powi(8) * v)
}

/// t₀ = 135 m β⁸ / (32π⁵ α₀²) in seconds, for mass [kg] and α₀ [eV⁻³].
pub fn slowdown_t0(mass: f64, alpha0: f64, temperature: f64) -> Result<f64> {
    if !(mass > 0.0 && temperature > 0.0 && alpha0 != 0.0) {
        return Err(Error::domain("slowdown_t0", "mass, temperature and polarizability must be nonzero and positive"));
    }
    let m = SI.mass_to_natural(mass);
    let beta = 1.0 / SI.temperature_to_natural(temperature);
    Ok(SI.time_to_si(135.0 * m * beta.powi(8) / (32.0 * PI.powi(5) * alpha0 * alpha0)))
}

/// Time [s] for Einstein–Hopf drag to slow a particle from v_i to v_f.
pub fn slowdown_time(mass: f64, alpha0: f64, temperature: f64, v_i: f64, v_f: f64) -> Result<f64> {
    if !(v_f > 0.0 && v_f <= v_i && v_i < 1.0) {
        return Err(Error::domain("slowdown_time", format!("need 0 < v_f ≤ v_i < 1, got v_i = {v_i}, v_f = {v_f}")));
    }
    Ok(slowdown_t0(mass, alpha0, temperature)? * (v_i / v_f).ln())
}

/// Steady-state query: Im α ∝ ωⁿ, speed v as a fraction of c.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NessQuery {
    pub exponent: i32,
    pub velocity: f64,
}

/// Bracket and tolerance for the steady-state root.
pub const NESS_BRACKET: (f64, f64) = (1e-3, 1e3);

/// Root of a continuous monotone `g` on [lo, hi]: the bracket is checked,
/// monotonicity is sampled, then a safeguarded secant iteration runs.
pub fn solve_monotone<G: Fn(f64) -> f64>(g: G, lo: f64, hi: f64, xtol: f64) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (g(a), g(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return Err(Error::NotBracketed {
            lo,
            hi,
            reason: format!("balance has the same sign at both ends ({fa:e}, {fb:e})"),
        });
    }
    // monotonicity on a geometric grid
    let n = 32;
    let mut prev = fa;
    let increasing = fb > fa;
    for k in 1..=n {
        let x = lo * (hi / lo).powf(k as f64 / n as f64);
        let y = g(x);
        if (increasing && y < prev) || (!increasing && y > prev) {
            return Err(Error::NotBracketed {
                lo,
                hi,
                reason: format!("balance is not monotone near {x:e}"),
            });
        }
        prev = y;
    }
    for _ in 0..200 {
        let mut x = b - fb * (b - a) / (fb - fa);
        let width = (b - a).abs();
        if !(x > a.min(b) && x < a.max(b)) || width < 0.0 {
            x = 0.5 * (a + b);
        }
        let fx = g(x);
        if fx == 0.0 || width <= xtol * x.abs() {
            return Ok(x);
        }
        // keep the bracket; bisect if the secant stalls on one side
        if fx.signum() == fa.signum() {
            let shrink = (x - a).abs() < 0.5 * width;
            a = x;
            fa = fx;
            if shrink {
                let m = 0.5 * (a + b);
                let fm = g(m);
                if fm.signum() == fa.signum() {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                    fb = fm;
                }
            }
        } else {
            let shrink = (b - x).abs() < 0.5 * width;
            b = x;
            fb = fx;
            if shrink {
                let m = 0.5 * (a + b);
                let fm = g(m);
                if fm.signum() == fb.signum() {
                    b = m;
                    fb = fm;
                } else {
                    a = m;
                    fa = fm;
                }
            }
        }
        if (b - a).abs() <= xtol * a.abs().max(b.abs()) {
            return Ok(0.5 * (a + b));
        }
    }
    Err(Error::NotConverged {
        what: "steady-state root".into(),
        estimate: 0.5 * (a + b),
        error: (b - a).abs(),
        at: None,
    })
}

/// Direction-averaged Doppler factor ⟨(γ(1 − vμ))^{−k}⟩ over μ ∈ [−1, 1];
/// for k = 0 the logarithmic mean ⟨ln γ(1 − vμ)⟩ is returned instead.
fn doppler_mean(k: i32, v: f64) -> Result<f64> {
    let gamma = 1.0 / (1.0 - v * v).sqrt();
    let f = |mu: f64| {
        let d = gamma * (1.0 - v * mu);
        if k == 0 {
            d.ln()
        } else {
            d.powi(-k)
        }
    };
    Ok(0.5 * quad::integrate(f, -1.0, 1.0, Tolerance::rel(1e-14))?.value)
}

/// T̃/T for a particle with Im α ∝ ωⁿ moving at v through radiation at T.
///
/// In the rest frame the radiation arriving from direction μ is Planckian
/// at T/(γ(1 − vμ)). Absorbed and emitted powers scale as temperature^k with
/// k = n + 5, so the balance is ⟨(γ(1 − vμ))^{−k}⟩ = r̃^k. For n ≤ −4 the
/// spectral integrals diverge at ω → 0 and the balance is understood as the
/// analytic continuation in n of this relation.
pub fn ness_ratio(q: NessQuery) -> Result<f64> {
    let v = q.velocity;
    if !(0.0..1.0).contains(&v) {
        return Err(Error::domain("ness_ratio", format!("velocity must lie in [0, 1), got {v}")));
    }
    if v == 0.0 {
        return Ok(1.0);
    }
    let k = q.exponent + 5;
    let m = doppler_mean(k, v)?;
    let (lo, hi) = NESS_BRACKET;
    if k == 0 {
        // −⟨ln γ(1 − vμ)⟩ − ln r̃ = 0
        return solve_monotone(|r| -m - r.ln(), lo, hi, 1e-14);
    }
    let kf = k as f64;
    let g = |r: f64| kf.signum() * (m - r.powf(kf));
    solve_monotone(g, lo, hi, 1e-14)
}

/// Rest-frame net absorbed power (up to a positive constant) for a
/// particle at body temperature `t_body` [eV], by direct double quadrature
/// over direction and frequency. Requires a spectral integral that
/// converges at ω → 0.
pub fn ness_spectral_balance(model: &AbsorptionModel, t_env: f64, t_body: f64, v: f64, tol: Tolerance) -> Result<f64> {
    let gamma = 1.0 / (1.0 - v * v).sqrt();
    let t_max = t_env * ((1.0 + v) / (1.0 - v)).sqrt();
    let scale = t_max.max(t_body);
    let x_max = spectral_cutoff(model.power().unwrap_or(3) as f64 + 4.0);
    let inner = |mu: f64| {
        let t_mu = t_env / (gamma * (1.0 - v * mu));
        let f = |x: f64| {
            let w = x * scale;
            let ia = model.im_alpha(w).unwrap_or(f64::NAN);
            w.powi(4) * ia * bose_diff(w / t_mu, w / t_body)
        };
        match quad::integrate_with_breaks(f, &spectral_breaks(x_max), tol) {
            Ok(e) => e.value,
            Err(e) => e.best_estimate().unwrap_or(f64::NAN),
        }
    };
    Ok(0.5 * quad::integrate(inner, -1.0, 1.0, tol)?.value * scale)
}
