//! Torque factor of the thin-wire dual wrench.
//!
//! In scaled coordinates X = ωx, Y = ωy, with ã = ωa and b̃ = ωb,
//!
//!   J_AB = 2ω⁴ S_A S_B Ĵ,   Ĵ = ∫₀^b̃ dX ∫₋ã^ã dY · X Y φ̂(√(X² + (ã + Y)²)).
//!
//! Polar coordinates about the wire–tag junction turn Ĵ into a single
//! radial integral whose angular part is elementary.

use std::f64::consts::PI;

use super::QuadratureSpec;
use crate::error::{Error, Result};
use crate::kernels::{phi_hat, phi_hat_shifted, PhiEvalPolicy};
use crate::quad::{self, Estimate, Tolerance};
use crate::units::SI;

/// Below this radius the −4/9 constant of φ̂ is subtracted; it integrates to
/// zero against XY over the rectangle.
const SHIFT_RADIUS: f64 = 1.0;

/// Ĵ(ã, b̃) by the radial reduction.
pub fn wrench_jhat(a: f64, b: f64, policy: &PhiEvalPolicy, tol: Tolerance) -> Result<Estimate> {
    if !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Geometry(format!("wrench needs positive ã, b̃, got {a}, {b}")));
    }
    let rho_max = (b * b + 4.0 * a * a).sqrt();
    let shifted = rho_max < SHIFT_RADIUS;
    let f = |rho: f64| {
        let s_hi = (2.0 * a / rho).min(1.0);
        let c = (b / rho).min(1.0);
        let s_lo = (1.0 - c * c).max(0.0).sqrt();
        if s_lo >= s_hi {
            return 0.0;
        }
        let ang = 0.5 * rho * (s_hi * s_hi - s_lo * s_lo) - a * (s_hi - s_lo);
        let k = if shifted { phi_hat_shifted(rho, policy) } else { phi_hat(rho, policy) };
        rho * rho * k * ang
    };
    let mut breaks = vec![0.0, b.min(rho_max), (2.0 * a).min(rho_max), rho_max];
    // one panel per oscillation of sin 2ρ
    let n_osc = (rho_max / PI).ceil() as usize;
    if n_osc > 2 {
        breaks.extend((1..n_osc).map(|k| k as f64 * rho_max / n_osc as f64));
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let tol = Tolerance::new(tol.rel, tol.abs, tol.max_subdivisions.max(2 * breaks.len()));
    quad::integrate_with_breaks(f, &breaks, tol).map_err(|e| e.at("omega*a", a))
}

/// Ĵ(ã, b̃) from the straight double integral over the wire and both tags,
/// −∫∫ (r × r′)_z φ̂(|r − r′|), halved. Independent of the radial reduction.
pub fn wrench_jhat_segments(a: f64, b: f64, policy: &PhiEvalPolicy, tol: Tolerance) -> Result<Estimate> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Geometry(format!("wrench needs positive ã, b̃, got {a}, {b}")));
    }
    let inner_tol = Tolerance::new(tol.rel * 0.1, tol.abs * 0.1, tol.max_subdivisions);
    // tag k: r′ = start_k + x·dir_k, x ∈ [0, b]
    let tags = [([0.0, -a], [1.0, 0.0]), ([0.0, a], [-1.0, 0.0])];
    let mut total = Estimate::exact(0.0);
    for (start, dir) in tags {
        let outer = |y: f64| {
            // wire point (0, y)
            let g = |x: f64| {
                let rx = start[0] + x * dir[0];
                let ry = start[1] + x * dir[1];
                let cross = -y * rx; // (0, y) × (rx, ry), z component
                let d = (rx * rx + (y - ry) * (y - ry)).sqrt();
                -cross * phi_hat(d, policy)
            };
            match quad::integrate(g, 0.0, b, inner_tol) {
                Ok(e) => e.value,
                Err(e) => e.best_estimate().unwrap_or(f64::NAN),
            }
        };
        let part = quad::integrate(outer, -a, a, tol)?;
        total = total + part;
    }
    Ok(total.scale(0.5))
}

/// J_AB(ω) (z component, dimensionless) for a wrench with half-length `a`,
/// tag length `b` [m] and cross sections `s_a`, `s_b` [m²].
pub fn wrench_jab_reduced(a: f64, b: f64, s_a: f64, s_b: f64, omega: f64, q: &QuadratureSpec) -> Result<Estimate> {
    let at = omega * SI.length_to_natural(a);
    let bt = omega * SI.length_to_natural(b);
    let sa = SI.area_to_natural(s_a);
    let sb = SI.area_to_natural(s_b);
    let jhat = wrench_jhat(at, bt, &q.phi_policy, q.tolerance())?;
    Ok(jhat.scale(2.0 * omega.powi(4) * sa * sb))
}
