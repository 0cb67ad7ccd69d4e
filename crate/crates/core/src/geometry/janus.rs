//! I_AB for a ball split into hemispheres.
//!
//! With both points in the same ball of radius a, substitute the relative
//! vector s = (r − r′)/a and integrate the positions out. Azimuthal symmetry
//! leaves
//!
//!   8πa · I_AB = ∫₀² φ(ωa s) Ĝ(s) / s⁵ ds = (ωa)⁸ ∫₀² s³ φ̂(ωa s) Ĝ(s) ds,
//!
//! where Ĝ(s) = ∫₀¹ μ V(s, μ) dμ and V(s, μ) is the volume (in units of a³)
//! of lower-hemisphere points whose partner, displaced by s along a
//! direction with polar cosine μ, lies in the upper hemisphere. Ĝ is a
//! piecewise rational function with a seam at s = 1.

use std::f64::consts::PI;

use super::QuadratureSpec;
use crate::error::{Error, Result};
use crate::kernels::phi_hat;
use crate::quad::{self, Estimate, Tolerance};

/// Ĝ(s); zero outside (0, 2).
pub fn janus_overlap_moment(s: f64) -> f64 {
    if !(s > 0.0 && s < 2.0) {
        return 0.0;
    }
    let poly = s / 3.0 - s * s / 8.0;
    let v = if s <= 1.0 {
        poly - s * s * s / 15.0
    } else {
        2.0 / 3.0 - 2.0 / (15.0 * s * s) - 2.0 * s / 3.0 + poly + s * s * s / 15.0
    };
    PI * v
}

/// 8πa · I_AB as a function of ωa alone.
pub fn janus_scaled_iab(omega_a: f64, q: &QuadratureSpec) -> Result<Estimate> {
    if !(omega_a > 0.0 && omega_a.is_finite()) {
        return Err(Error::domain("janus_iab", format!("ωa must be positive, got {omega_a}")));
    }
    let w8 = omega_a.powi(8);
    let f = |s: f64| w8 * s * s * s * phi_hat(omega_a * s, &q.phi_policy) * janus_overlap_moment(s);
    // one panel per oscillation of sin 2ωa s, plus the seam at s = 1
    let n = ((2.0 * omega_a / PI).ceil() as usize).max(1);
    let mut breaks: Vec<f64> = (0..=n).map(|k| 2.0 * k as f64 / n as f64).collect();
    breaks.push(1.0);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let tol = Tolerance::new(q.rel_tol, q.abs_tol, q.max_subdivisions.max(2 * breaks.len()));
    quad::integrate_with_breaks(f, &breaks, tol).map_err(|e| e.at("omega*a", omega_a))
}

/// I_AB(ω) [eV] for a Janus ball of radius `a` [eV⁻¹], A the upper half.
pub fn janus_iab(omega: f64, a: f64, q: &QuadratureSpec) -> Result<Estimate> {
    if !(a > 0.0) {
        return Err(Error::Geometry(format!("radius must be positive, got {a}")));
    }
    Ok(janus_scaled_iab(omega * a, q)?.scale(1.0 / (8.0 * PI * a)))
}
