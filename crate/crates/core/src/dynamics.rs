//! Net force and torques on bodies out of equilibrium with their
//! environment.
//!
//! With Δn(ω) = n(ω, T) − n(ω, T′) and X_AB = Im χ_A Re χ_B − Re χ_A Im χ_B,
//!
//!   F = 8 ∫ dω/2π · X_AB I_AB Δn,
//!   τ = (1/2π²) ∫ dω/2π · X_AB J_AB Δn  (two-part bodies),
//!   τᵢ = (1/3π²) ∫ dω · ω³ Δn εᵢⱼₖ Re αⱼₖ  (a single nonreciprocal particle).
//!
//! Spectral integrals run over x = ω/T_hot. Every function returns exact
//! zeros in equilibrium.

use std::cell::RefCell;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::friction::{spectral_breaks, spectral_cutoff};
use crate::geometry::{
    mc_pair_integral, pair_integral_iab, pair_integral_jab, BodyGeometry, PairKind, QuadratureSpec, Region,
    TwoPartBody,
};
use crate::kernels::{f_n, f_n_diff, phi_hat, ThermalPair};
use crate::material::{susceptibility_product, DrudeParams, Material, Tensor3};
use crate::quad::{self, Chebyshev, Estimate, Tolerance};
use crate::units::SI;

/// A polarizability tensor α(ω) in natural units (eV⁻³).
pub trait TensorPolarizability: Sync {
    fn alpha(&self, omega: f64) -> Result<Tensor3>;
}

impl<F> TensorPolarizability for F
where
    F: Fn(f64) -> Result<Tensor3> + Sync,
{
    fn alpha(&self, omega: f64) -> Result<Tensor3> {
        self(omega)
    }
}

/// How a small homogeneous body turns χ into α.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolarizabilityModel {
    /// α = Vχ, first order in χ.
    FirstOrder,
    /// Sphere: α = 3Vχ(χ + 3)⁻¹.
    ClausiusMossotti,
}

/// Polarizability of a small homogeneous body.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BodyPolarizability {
    pub material: Material,
    /// Volume [m³].
    pub volume: f64,
    pub model: PolarizabilityModel,
}

impl BodyPolarizability {
    /// First-order ball of radius `radius` [m].
    pub fn ball(material: Material, radius: f64) -> Self {
        BodyPolarizability {
            material,
            volume: 4.0 / 3.0 * PI * radius.powi(3),
            model: PolarizabilityModel::FirstOrder,
        }
    }

    pub fn with_model(self, model: PolarizabilityModel) -> Self {
        BodyPolarizability { model, ..self }
    }
}

impl TensorPolarizability for BodyPolarizability {
    fn alpha(&self, omega: f64) -> Result<Tensor3> {
        let v = SI.volume_to_natural(self.volume);
        let chi = self.material.chi_tensor(omega)?;
        let t = match self.model {
            PolarizabilityModel::FirstOrder => chi,
            PolarizabilityModel::ClausiusMossotti => {
                let mut m = chi;
                for (i, row) in m.iter_mut().enumerate() {
                    row[i] += 3.0;
                }
                let inv = invert3(&m).ok_or_else(|| {
                    Error::domain("clausius_mossotti", format!("χ + 3 is singular at ω = {omega}"))
                })?;
                let mut out = mat_mul(&chi, &inv);
                for row in out.iter_mut() {
                    for c in row.iter_mut() {
                        *c *= 3.0;
                    }
                }
                out
            }
        };
        Ok(t.map(|row| row.map(|c| c * v)))
    }
}

fn mat_mul(a: &Tensor3, b: &Tensor3) -> Tensor3 {
    let mut out = crate::material::ZERO_TENSOR;
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

fn invert3(m: &Tensor3) -> Option<Tensor3> {
    let c = |i: usize, j: usize| {
        let (i1, i2) = ((i + 1) % 3, (i + 2) % 3);
        let (j1, j2) = ((j + 1) % 3, (j + 2) % 3);
        m[i1][j1] * m[i2][j2] - m[i1][j2] * m[i2][j1]
    };
    let det = (0..3).map(|j| m[0][j] * c(0, j)).sum::<num_complex::Complex64>();
    if det.norm() == 0.0 || !det.norm().is_finite() {
        return None;
    }
    let mut out = crate::material::ZERO_TENSOR;
    for i in 0..3 {
        for j in 0..3 {
            out[j][i] = c(i, j) / det;
        }
    }
    Some(out)
}

/// Which closed-form Drude drive f_n(βν) − f_n(β′ν) is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DriveKind {
    /// Janus force, n = 7.
    Force,
    /// Small-wrench torque, n = 9.
    Torque,
    /// Radiated power during relaxation, n = 3.
    Power,
}

impl DriveKind {
    pub fn order(self) -> u32 {
        match self {
            DriveKind::Force => 7,
            DriveKind::Torque => 9,
            DriveKind::Power => 3,
        }
    }
}

/// f_n(βν) − f_n(β′ν) for a Drude damping `damping` [eV]; a zero
/// temperature contributes f_n(∞) = 0.
pub fn dimensionless_drive(kind: DriveKind, damping: f64, th: &ThermalPair) -> Result<f64> {
    if !(damping > 0.0 && damping.is_finite()) {
        return Err(Error::domain("dimensionless_drive", format!("damping must be positive, got {damping}")));
    }
    if th.equilibrium() {
        return Ok(0.0);
    }
    let n = kind.order();
    let (t, tp) = (th.env_ev(), th.body_ev());
    match (t > 0.0, tp > 0.0) {
        (true, true) => f_n_diff(n, damping / t, damping / tp),
        (true, false) => f_n(n, damping / t),
        (false, true) => Ok(-f_n(n, damping / tp)?),
        (false, false) => Ok(0.0),
    }
}

/// A closed-form result: `value = prefactor · drive`, SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedForm {
    pub prefactor: f64,
    pub drive: f64,
    pub value: f64,
}

/// Small-radius Janus force [N] for a dielectric upper half (χ_A) on a
/// Drude lower half, radius `radius` [m]:
/// F = χ_A ωp² (νa)⁷ / 27π · [f₇(βν) − f₇(β′ν)].
pub fn janus_force_closed(chi_a: f64, metal: &DrudeParams, radius: f64, th: &ThermalPair) -> Result<ClosedForm> {
    if !(radius > 0.0) {
        return Err(Error::Geometry(format!("radius must be positive, got {radius}")));
    }
    let a = SI.length_to_natural(radius);
    let nu = metal.damping;
    let pre = chi_a * metal.plasma_freq.powi(2) * (nu * a).powi(7) / (27.0 * PI);
    let prefactor = SI.force_to_si(pre);
    let drive = dimensionless_drive(DriveKind::Force, nu, th)?;
    Ok(ClosedForm { prefactor, drive, value: prefactor * drive })
}

/// Small-size torque [N·m] on a wrench with a Drude wire and dielectric (χ_B)
/// tags: τ = 28/(675π³) χ_B ν⁹ ωp² S_A S_B a⁴ b² · [f₉(βν) − f₉(β′ν)].
/// Lengths in m, cross sections in m².
pub fn small_wrench_torque(
    chi_b: f64,
    metal: &DrudeParams,
    a: f64,
    b: f64,
    s_a: f64,
    s_b: f64,
    th: &ThermalPair,
) -> Result<ClosedForm> {
    if !(a > 0.0 && b > 0.0 && s_a > 0.0 && s_b > 0.0) {
        return Err(Error::Geometry("wrench dimensions must be positive".into()));
    }
    let (an, bn) = (SI.length_to_natural(a), SI.length_to_natural(b));
    let (sa, sb) = (SI.area_to_natural(s_a), SI.area_to_natural(s_b));
    let nu = metal.damping;
    let pre = 28.0 / (675.0 * PI.powi(3))
        * chi_b
        * nu.powi(9)
        * metal.plasma_freq.powi(2)
        * sa
        * sb
        * an.powi(4)
        * bn
        * bn;
    let prefactor = SI.torque_to_si(pre);
    let drive = dimensionless_drive(DriveKind::Torque, nu, th)?;
    Ok(ClosedForm { prefactor, drive, value: prefactor * drive })
}

/// ∫₀^∞ g(ω) Δn(ω) dω for g growing at most like ωᵖ. `length` (eV⁻¹) adds
/// one panel per half period of oscillations like sin 2ωℓ.
pub(crate) fn thermal_integral<G>(g: G, th: &ThermalPair, power: f64, length: f64, tol: Tolerance) -> Result<Estimate>
where
    G: Fn(f64) -> Result<f64>,
{
    if th.equilibrium() {
        return Ok(Estimate::exact(0.0));
    }
    let t = th.hot_ev();
    let x_max = spectral_cutoff(power);
    let mut breaks = spectral_breaks(x_max);
    if length > 0.0 {
        let step = PI / (2.0 * length * t);
        let n = ((x_max / step) as usize).min(2000);
        breaks.extend((1..=n).map(|k| k as f64 * step));
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
    }
    let fail = RefCell::new(None);
    let f = |x: f64| {
        let w = x * t;
        match g(w) {
            Ok(v) => v * th.occupation_difference(w),
            Err(e) => {
                fail.borrow_mut().get_or_insert(e);
                0.0
            }
        }
    };
    let tol = Tolerance::new(tol.rel, tol.abs / t, tol.max_subdivisions.max(4 * breaks.len()));
    let r = quad::integrate_with_breaks(f, &breaks, tol)?;
    if let Some(e) = fail.into_inner() {
        return Err(e);
    }
    Ok(r.scale(t))
}

fn inner_spec(q: &QuadratureSpec) -> QuadratureSpec {
    QuadratureSpec { rel_tol: (q.rel_tol * 1e-2).max(1e-13), ..*q }
}

/// Net force [N] along z on a two-part body.
///
/// Bodies symmetric under r → −r feel no net force and return exact zeros.
/// Janus balls are deterministic; other shapes need `q.allow_mc`.
pub fn propulsion_force(body: &TwoPartBody, th: &ThermalPair, q: &QuadratureSpec) -> Result<Estimate> {
    q.validate()?;
    if th.equilibrium() || body.geometry.is_inversion_symmetric() {
        return Ok(Estimate::exact(0.0));
    }
    let (ma, mb) = (body.material_a, body.material_b);
    let value = match body.geometry {
        BodyGeometry::JanusBall { .. } => {
            let inner = inner_spec(q);
            let g = |w: f64| Ok(susceptibility_product(w, &ma, &mb)? * pair_integral_iab(body, w, &inner)?.value);
            thermal_integral(g, th, 8.0, 0.0, q.tolerance())?.scale(8.0 / (2.0 * PI))
        }
        _ if q.allow_mc => kernel_mc(body, th, q, PairKind::Force, 8.0 / (2.0 * PI) / (16.0 * PI * PI))?[2],
        _ => {
            return Err(Error::Settings(
                "no deterministic force reduction for this geometry; enable Monte Carlo".into(),
            ))
        }
    };
    Ok(value.scale(SI.force_to_si(1.0)))
}

/// Vacuum torque [N·m] on a two-part body from the A–B cross term.
///
/// Wrenches are deterministic; Janus balls are axially symmetric and give
/// zero; other shapes need `q.allow_mc`.
pub fn chiral_torque(body: &TwoPartBody, th: &ThermalPair, q: &QuadratureSpec) -> Result<[Estimate; 3]> {
    q.validate()?;
    let zero = [Estimate::exact(0.0); 3];
    if th.equilibrium() {
        return Ok(zero);
    }
    let (ma, mb) = (body.material_a, body.material_b);
    let pre = 1.0 / (4.0 * PI.powi(3));
    let out = match body.geometry {
        BodyGeometry::JanusBall { .. } => return Ok(zero),
        BodyGeometry::DualWrench { a, b, .. } => {
            let inner = inner_spec(q);
            let g = |w: f64| Ok(susceptibility_product(w, &ma, &mb)? * pair_integral_jab(body, w, &inner)?[2].value);
            let len = SI.length_to_natural(a.max(b));
            let z = thermal_integral(g, th, 10.0, len, q.tolerance())?.scale(pre);
            [Estimate::exact(0.0), Estimate::exact(0.0), z]
        }
        _ if q.allow_mc => kernel_mc(body, th, q, PairKind::Torque, pre)?,
        _ => {
            return Err(Error::Settings(
                "no deterministic torque reduction for this geometry; enable Monte Carlo".into(),
            ))
        }
    };
    Ok(out.map(|e| e.scale(SI.torque_to_si(1.0))))
}

/// Torque [N·m] on a single particle whose polarizability is not symmetric.
pub fn nonreciprocal_torque(alpha: &dyn TensorPolarizability, th: &ThermalPair, q: &QuadratureSpec) -> Result<[Estimate; 3]> {
    q.validate()?;
    let tol = q.tolerance();
    let mut out = [Estimate::exact(0.0); 3];
    if th.equilibrium() {
        return Ok(out);
    }
    for (i, o) in out.iter_mut().enumerate() {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let g = |w: f64| {
            let a = alpha.alpha(w)?;
            Ok(w.powi(3) * (a[j][k].re - a[k][j].re))
        };
        *o = thermal_integral(g, th, 3.0, 0.0, tol)?
            .scale(1.0 / (3.0 * PI * PI))
            .scale(SI.torque_to_si(1.0));
    }
    Ok(out)
}

fn natural_moment(r: &Region) -> [f64; 3] {
    r.first_moment().map(|m| m * SI.length_to_natural(1.0).powi(4))
}

/// Frequency-integrated pair kernel K(R) = pre ∫ X Δn ω⁸ φ̂(ωR) dω, fitted
/// on [0, R_max] and fed to the Monte Carlo pair integral. The constant K(0)
/// is integrated exactly from the regions' first moments.
fn kernel_mc(body: &TwoPartBody, th: &ThermalPair, q: &QuadratureSpec, kind: PairKind, pre: f64) -> Result<[Estimate; 3]> {
    let (ra, rb) = body.regions();
    let (la, ha) = ra.bounds();
    let (lb, hb) = rb.bounds();
    let diag: f64 = (0..3)
        .map(|i| (ha[i].max(hb[i]) - la[i].min(lb[i])).powi(2))
        .sum::<f64>()
        .sqrt();
    let r_max = SI.length_to_natural(diag);
    let (ma, mb) = (body.material_a, body.material_b);
    let policy = q.phi_policy;
    let rel = q.rel_tol.max(1e-11);
    let raw = |r: f64, tol: Tolerance| {
        let g = |w: f64| Ok(susceptibility_product(w, &ma, &mb)? * w.powi(8) * phi_hat(w * r, &policy));
        thermal_integral(g, th, 9.0, r, tol)
    };
    // K changes sign at large R, so the tolerance is anchored to K(0)
    let scale = raw(0.0, Tolerance::rel(rel))?.value.abs();
    let tol = Tolerance::new(rel, rel * scale, 4000);
    let cheb = Chebyshev::fit(|r| Ok(raw(r, tol)?.value * pre), 0.0, r_max, 1e-7, 0.0, 1024)?;
    let k0 = cheb.eval(0.0);
    let mc = mc_pair_integral(body, kind, q, &|r| cheb.eval(r.min(r_max)) - k0)?;
    let (m_a, m_b) = (natural_moment(&ra), natural_moment(&rb));
    let vol = |r: &Region| SI.volume_to_natural(r.measure());
    let exact = match kind {
        PairKind::Force => [0, 1, 2].map(|i| k0 * (vol(&rb) * m_a[i] - vol(&ra) * m_b[i])),
        PairKind::Torque => [
            -k0 * (m_a[1] * m_b[2] - m_a[2] * m_b[1]),
            -k0 * (m_a[2] * m_b[0] - m_a[0] * m_b[2]),
            -k0 * (m_a[0] * m_b[1] - m_a[1] * m_b[0]),
        ],
    };
    Ok([0, 1, 2].map(|i| mc.components[i] + Estimate::exact(exact[i])))
}
