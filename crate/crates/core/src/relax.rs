//! Radiative cooling and the drift it leaves behind.
//!
//! A metal body at T′ = uT in an environment at T relaxes as
//! du/dt = p(u, T)/t_c with p = f₃(βν) − f₃(βν/u) and
//! t_c = 3π² n T/(ν³ ωp²) (Dulong–Petit heat capacity). If the temperature
//! changes slowly, the momentum picked up on the way is
//!
//!   v_T = (t_c/m) ∫_{u₀}^1 F(u)/p(u) du,   ω_T = (t_c/I) ∫_{u₀}^1 τ(u)/p(u) du.

use std::cell::RefCell;
use std::f64::consts::PI;

use crate::dynamics::{
    chiral_torque, dimensionless_drive, janus_force_closed, propulsion_force, small_wrench_torque, thermal_integral,
    DriveKind, TensorPolarizability,
};
use crate::error::{Error, Result};
use crate::geometry::{BodyGeometry, QuadratureSpec, TwoPartBody};
use crate::kernels::{f_n_prime, ThermalPair};
use crate::material::{DrudeParams, Material};
use crate::quad::{self, Estimate, Tolerance};
use crate::units::SI;

/// Heat capacity and emission model of the metal part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoolingModel {
    pub metal: DrudeParams,
    /// Debye temperature [K]; Dulong–Petit needs T well above it.
    pub debye_temperature: f64,
}

impl CoolingModel {
    pub fn gold() -> Self {
        CoolingModel { metal: DrudeParams::GOLD, debye_temperature: 165.0 }
    }

    /// Dulong–Petit heat capacity 3n k_B per volume [J/(K·m³)].
    pub fn heat_capacity(&self) -> f64 {
        3.0 * self.metal.atom_density * SI.k_b * SI.joule_per_ev
    }

    pub fn dulong_petit_valid(&self, temperature: f64) -> bool {
        temperature > self.debye_temperature
    }

    /// t_c = 3π² n T/(ν³ ωp²) [s].
    pub fn cooling_constant(&self, temperature: f64) -> Result<f64> {
        check_temperature(temperature)?;
        let n = SI.number_density_to_natural(self.metal.atom_density);
        let t = SI.temperature_to_natural(temperature);
        let d = &self.metal;
        Ok(SI.time_to_si(3.0 * PI * PI * n * t / (d.damping.powi(3) * d.plasma_freq.powi(2))))
    }

    /// p(u, T) = f₃(βν) − f₃(βν/u).
    pub fn power_drive(&self, u: f64, temperature: f64) -> Result<f64> {
        check_temperature(temperature)?;
        check_ratio(u)?;
        dimensionless_drive(DriveKind::Power, self.metal.damping, &ThermalPair::new(temperature, u * temperature)?)
    }
}

fn check_temperature(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("relaxation", format!("environment temperature must be positive, got {t}")))
    }
}

fn check_ratio(u: f64) -> Result<()> {
    if u > 0.0 && u.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("relaxation", format!("temperature ratio must be positive, got {u}")))
    }
}

/// Net power [W] absorbed from the environment:
/// P = (1/3π²) ∫ ω⁴ Im tr α [n(ω,T) − n(ω,T′)] dω.
pub fn net_power(alpha: &dyn TensorPolarizability, th: &ThermalPair, q: &QuadratureSpec) -> Result<Estimate> {
    q.validate()?;
    let g = |w: f64| {
        let a = alpha.alpha(w)?;
        Ok(w.powi(4) * (a[0][0].im + a[1][1].im + a[2][2].im))
    };
    let r = thermal_integral(g, th, 4.0, 0.0, q.tolerance())?;
    Ok(r.scale(SI.power_to_si(1.0) / (3.0 * PI * PI)))
}

/// A cooling (or heating) duration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoolingTime {
    /// t_c [s].
    pub t_c: f64,
    /// t₁/t_c.
    pub scaled: Estimate,
    /// t₁ [s].
    pub seconds: f64,
}

fn same_side(u0: f64, u1: f64) -> Result<()> {
    check_ratio(u0)?;
    check_ratio(u1)?;
    if (u0 - 1.0) * (u1 - 1.0) < 0.0 || (u1 == 1.0 && u0 != 1.0) {
        return Err(Error::domain(
            "cooling_time",
            format!("u = 1 is reached only asymptotically; [{u0}, {u1}] touches or crosses it"),
        ));
    }
    Ok(())
}

/// Time to go from u₀ to u₁ (both on the same side of 1).
pub fn cooling_time(u0: f64, u1: f64, temperature: f64, cm: &CoolingModel) -> Result<CoolingTime> {
    same_side(u0, u1)?;
    let t_c = cm.cooling_constant(temperature)?;
    if u0 == u1 {
        return Ok(CoolingTime { t_c, scaled: Estimate::exact(0.0), seconds: 0.0 });
    }
    let scaled = integrate_over_u(|u| Ok(1.0 / cm.power_drive(u, temperature)?), u0, u1, Tolerance::rel(1e-10))?;
    Ok(CoolingTime { t_c, scaled, seconds: t_c * scaled.value })
}

/// Points (t [s], u) of the trajectory from u₀ toward u_end, with `n`
/// equal steps in u.
pub fn cooling_curve(u0: f64, u_end: f64, n: usize, temperature: f64, cm: &CoolingModel) -> Result<Vec<(f64, f64)>> {
    same_side(u0, u_end)?;
    if n == 0 {
        return Err(Error::domain("cooling_curve", "need at least one step"));
    }
    let t_c = cm.cooling_constant(temperature)?;
    let mut out = vec![(0.0, u0)];
    let mut t = 0.0;
    for k in 1..=n {
        let (a, b) = (out[k - 1].1, u0 + (u_end - u0) * k as f64 / n as f64);
        t += t_c * cooling_time(a, b, temperature, cm)?.scaled.value;
        out.push((t, b));
    }
    Ok(out)
}

/// ∫_{u0}^{u1} f du with Gauss–Kronrod (never samples the endpoints).
fn integrate_over_u<F: Fn(f64) -> Result<f64>>(f: F, u0: f64, u1: f64, tol: Tolerance) -> Result<Estimate> {
    let fail = RefCell::new(None);
    let g = |u: f64| match f(u) {
        Ok(v) => v,
        Err(e) => {
            fail.borrow_mut().get_or_insert(e);
            0.0
        }
    };
    let (lo, hi, sign) = if u0 <= u1 { (u0, u1, 1.0) } else { (u1, u0, -1.0) };
    let r = quad::integrate(g, lo, hi, tol)?;
    if let Some(e) = fail.into_inner() {
        return Err(e);
    }
    Ok(r.scale(sign))
}

/// I = ρ_A S_A (2/3)a³ + ρ_B S_B 2b(a² + b²/3) [kg·m²] about the wrench axis.
pub fn moment_of_inertia(geometry: &BodyGeometry, rho_a: f64, rho_b: f64) -> Result<f64> {
    match *geometry {
        BodyGeometry::DualWrench { a, b, s_a, s_b } => {
            if !(rho_a >= 0.0 && rho_b >= 0.0) {
                return Err(Error::domain("moment_of_inertia", "densities must be non-negative"));
            }
            Ok(rho_a * s_a * 2.0 / 3.0 * a.powi(3) + rho_b * s_b * 2.0 * b * (a * a + b * b / 3.0))
        }
        _ => Err(Error::Geometry("moment of inertia formula needs a dual wrench".into())),
    }
}

/// How F(u) or τ(u) is computed along the cooling path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Drive {
    /// Small-body closed forms in f₇ (force) or f₉ (torque).
    ClosedForm,
    /// Full spectral and geometric quadrature at every u.
    Spectral,
}

/// A body cooling (or heating) in an environment at `temperature` [K].
#[derive(Debug, Clone, PartialEq)]
pub struct RelaxationProblem {
    pub body: TwoPartBody,
    pub temperature: f64,
    /// Initial ratio T′₀/T.
    pub u0: f64,
    /// Mass [kg] for drift, moment of inertia [kg·m²] for spin.
    pub inertia: f64,
    pub drive: Drive,
    pub cooling: CoolingModel,
}

/// Terminal value = prefactor · integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TerminalResult {
    /// t_c X₀ / inertia [1/s for spin, m/s for drift], with X₀ the
    /// closed-form force or torque scale.
    pub prefactor: f64,
    /// ∫_{u₀}^1 (X(u)/X₀)/p(u) du, e.g. ω̂_T.
    pub integral: Estimate,
    pub value: f64,
    pub t_c: f64,
}

/// Dielectric susceptibility, metal parameters and sign (+1 when A is the
/// dielectric in the closed-form convention, −1 otherwise).
fn metal_dielectric(body: &TwoPartBody) -> Result<(f64, DrudeParams, f64)> {
    let orient = if body.exchanged { -1.0 } else { 1.0 };
    match (body.material_a, body.material_b) {
        (Material::Dielectric { chi0 }, Material::DrudeMetal(m)) => Ok((chi0, m, orient)),
        (Material::DrudeMetal(m), Material::Dielectric { chi0 }) => Ok((chi0, m, -orient)),
        _ => Err(Error::Settings("relaxation needs one Drude metal and one dielectric part".into())),
    }
}

impl RelaxationProblem {
    fn validate(&self) -> Result<()> {
        check_temperature(self.temperature)?;
        check_ratio(self.u0)?;
        if !(self.inertia > 0.0 && self.inertia.is_finite()) {
            return Err(Error::domain("relaxation", format!("inertia must be positive, got {}", self.inertia)));
        }
        Ok(())
    }

    /// ∫_{u₀}^1 (X(u)/X₀)/p du, where `closed(th)` is the closed-form
    /// drive and `full(th)` the full value in units of X₀.
    fn drift_integral<C, S>(&self, slope_ratio: f64, closed: C, full: S) -> Result<Estimate>
    where
        C: Fn(&ThermalPair) -> Result<f64>,
        S: Fn(&ThermalPair) -> Result<f64>,
    {
        let t = self.temperature;
        let cm = &self.cooling;
        let ratio = |u: f64| -> Result<f64> {
            let th = ThermalPair::new(t, u * t)?;
            let x = match self.drive {
                Drive::ClosedForm => closed(&th)?,
                Drive::Spectral => full(&th)?,
            };
            let p = cm.power_drive(u, t)?;
            if p == 0.0 {
                // removable 0/0 at u = 1
                return Ok(slope_ratio);
            }
            Ok(x / p)
        };
        if self.u0 == 1.0 {
            return Ok(Estimate::exact(0.0));
        }
        integrate_over_u(ratio, self.u0, 1.0, Tolerance::rel(1e-7))
    }
}

/// Terminal drift velocity [m/s] of a Janus ball (z component).
pub fn terminal_velocity(p: &RelaxationProblem, q: &QuadratureSpec) -> Result<TerminalResult> {
    p.validate()?;
    let radius = match p.body.geometry {
        BodyGeometry::JanusBall { radius } => radius,
        _ => return Err(Error::Settings("terminal velocity needs a Janus ball".into())),
    };
    let (chi, metal, sign) = metal_dielectric(&p.body)?;
    let t_c = p.cooling.cooling_constant(p.temperature)?;
    let f0 = janus_force_closed(chi, &metal, radius, &ThermalPair::new(p.temperature, p.temperature)?)?.prefactor;
    let y = metal.damping / SI.temperature_to_natural(p.temperature);
    let slope = sign * f_n_prime(7, y)? / f_n_prime(3, y)?;
    let integral = p.drift_integral(
        slope,
        |th| Ok(sign * janus_force_closed(chi, &metal, radius, th)?.drive),
        |th| Ok(propulsion_force(&p.body, th, q)?.value / f0),
    )?;
    let prefactor = t_c * f0 / p.inertia;
    Ok(TerminalResult { prefactor, integral, value: prefactor * integral.value, t_c })
}

/// Terminal angular velocity [1/s] of a dual wrench about its axis.
pub fn terminal_angular_velocity(p: &RelaxationProblem, q: &QuadratureSpec) -> Result<TerminalResult> {
    p.validate()?;
    let (a, b, s_a, s_b) = match p.body.geometry {
        BodyGeometry::DualWrench { a, b, s_a, s_b } => (a, b, s_a, s_b),
        _ => return Err(Error::Settings("terminal angular velocity needs a dual wrench".into())),
    };
    // the closed form has the metal as the wire (A)
    let (chi, metal, sign) = metal_dielectric(&p.body)?;
    let sign = -sign;
    let t_c = p.cooling.cooling_constant(p.temperature)?;
    let eq = ThermalPair::new(p.temperature, p.temperature)?;
    let tau0 = small_wrench_torque(chi, &metal, a, b, s_a, s_b, &eq)?.prefactor;
    let y = metal.damping / SI.temperature_to_natural(p.temperature);
    let slope = sign * f_n_prime(9, y)? / f_n_prime(3, y)?;
    let integral = p.drift_integral(
        slope,
        |th| Ok(sign * small_wrench_torque(chi, &metal, a, b, s_a, s_b, th)?.drive),
        |th| Ok(chiral_torque(&p.body, th, q)?[2].value / tau0),
    )?;
    let prefactor = t_c * tau0 / p.inertia;
    Ok(TerminalResult { prefactor, integral, value: prefactor * integral.value, t_c })
}
