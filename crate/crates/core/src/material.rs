//! Spectral susceptibility models.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::units::SI;

/// A 3×3 complex tensor, row-major.
pub type Tensor3 = [[Complex64; 3]; 3];

pub const ZERO_TENSOR: Tensor3 = [[Complex64::new(0.0, 0.0); 3]; 3];

/// Drude metal parameters. Frequencies are in eV, densities in SI.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrudeParams {
    /// Plasma frequency ωp [eV].
    pub plasma_freq: f64,
    /// Damping ν [eV].
    pub damping: f64,
    /// Atom number density [m⁻³].
    pub atom_density: f64,
    /// Mass density [kg/m³].
    pub mass_density: f64,
}

impl DrudeParams {
    /// Gold: ωp = 9.0 eV, ν = 0.035 eV, n = 5.90×10²⁸ m⁻³, ρ = 19300 kg/m³.
    pub const GOLD: DrudeParams = DrudeParams {
        plasma_freq: 9.0,
        damping: 0.035,
        atom_density: 5.90e28,
        mass_density: 19_300.0,
    };

    pub fn gold() -> Self {
        Self::GOLD
    }

    /// χ(ω) = −ωp²/(ω(ω + iν)).
    pub fn chi(&self, omega: f64) -> Result<Complex64> {
        if omega == 0.0 || !omega.is_finite() {
            return Err(Error::domain("drude_chi", "the Drude susceptibility has a pole at ω = 0"));
        }
        Ok(self.chi_unchecked(omega))
    }

    #[inline]
    pub(crate) fn chi_unchecked(&self, omega: f64) -> Complex64 {
        let (wp2, nu) = (self.plasma_freq * self.plasma_freq, self.damping);
        let denom = omega * (omega * omega + nu * nu);
        Complex64::new(-wp2 * omega / denom, wp2 * nu / denom)
    }

    /// Im χ(ω) = ωp²ν/(ω(ω² + ν²)).
    #[inline]
    pub fn im_chi(&self, omega: f64) -> f64 {
        let nu = self.damping;
        self.plasma_freq * self.plasma_freq * nu / (omega * (omega * omega + nu * nu))
    }

    /// DC conductivity σ = ωp²/ν in natural units [eV].
    pub fn conductivity(&self) -> f64 {
        self.plasma_freq * self.plasma_freq / self.damping
    }

    /// Skin depth δ = √(2(ω² + ν²)/(ω ωp² ν)), returned in nm.
    pub fn skin_depth(&self, omega: f64) -> Result<f64> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::domain("skin_depth", format!("frequency must be positive, got {omega}")));
        }
        let nu = self.damping;
        let delta = (2.0 * (omega * omega + nu * nu)
            / (omega * self.plasma_freq * self.plasma_freq * nu))
            .sqrt();
        Ok(SI.length_to_nm(delta))
    }
}

/// Spectral material model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Material {
    DrudeMetal(DrudeParams),
    /// Real, frequency-independent susceptibility.
    Dielectric { chi0: f64 },
    /// A model dissipation law Im α(ω) = A ωⁿ (odd continuation to ω < 0).
    /// The real part is not modelled.
    MonomialAbsorber { exponent: i32, amplitude: f64 },
    /// Drude ball magnetized along z: ωp, ν, cyclotron ωc in eV, radius in m.
    GyrotropicSphere {
        plasma_freq: f64,
        damping: f64,
        cyclotron_freq: f64,
        radius: f64,
    },
}

impl Material {
    pub fn gold() -> Self {
        Material::DrudeMetal(DrudeParams::GOLD)
    }

    pub fn dielectric(chi0: f64) -> Self {
        Material::Dielectric { chi0 }
    }

    /// Gold ball of `radius` metres in a `tesla` field along z.
    pub fn magnetized_gold(radius: f64, tesla: f64) -> Self {
        Material::GyrotropicSphere {
            plasma_freq: DrudeParams::GOLD.plasma_freq,
            damping: DrudeParams::GOLD.damping,
            cyclotron_freq: SI.cyclotron_energy(tesla),
            radius,
        }
    }

    /// Parse a named preset: `gold` or `dielectric:<chi0>`.
    pub fn preset(name: &str) -> Result<Self> {
        let name = name.trim();
        if name.eq_ignore_ascii_case("gold") {
            return Ok(Material::gold());
        }
        if let Some(rest) = name.strip_prefix("dielectric:") {
            let chi0: f64 = rest
                .trim()
                .parse()
                .map_err(|_| Error::domain("material preset", format!("bad chi0 `{rest}`")))?;
            if !chi0.is_finite() {
                return Err(Error::domain("material preset", "chi0 must be finite"));
            }
            return Ok(Material::Dielectric { chi0 });
        }
        Err(Error::domain(
            "material preset",
            format!("unknown preset `{name}` (expected `gold` or `dielectric:<chi0>`)"),
        ))
    }

    pub fn is_dissipative(&self) -> bool {
        !matches!(self, Material::Dielectric { .. })
    }

    pub fn drude(&self) -> Option<&DrudeParams> {
        match self {
            Material::DrudeMetal(p) => Some(p),
            _ => None,
        }
    }

    /// Scalar susceptibility; for the gyrotropic model this is a third of the
    /// trace.
    pub fn chi(&self, omega: f64) -> Result<Complex64> {
        match self {
            Material::DrudeMetal(p) => p.chi(omega),
            Material::Dielectric { chi0 } => Ok(Complex64::new(*chi0, 0.0)),
            Material::MonomialAbsorber { exponent, amplitude } => {
                if omega == 0.0 && *exponent < 0 {
                    return Err(Error::domain("chi", "monomial absorber diverges at ω = 0"));
                }
                let im = amplitude * omega.signum() * omega.abs().powi(*exponent);
                Ok(Complex64::new(0.0, if omega == 0.0 { 0.0 } else { im }))
            }
            Material::GyrotropicSphere { .. } => {
                let t = self.chi_tensor(omega)?;
                Ok((t[0][0] + t[1][1] + t[2][2]) / 3.0)
            }
        }
    }

    /// Susceptibility tensor. Isotropic models are diagonal.
    pub fn chi_tensor(&self, omega: f64) -> Result<Tensor3> {
        match *self {
            Material::GyrotropicSphere {
                plasma_freq,
                damping,
                cyclotron_freq,
                ..
            } => {
                if omega == 0.0 || !omega.is_finite() {
                    return Err(Error::domain("chi_tensor", "magnetized Drude tensor has a pole at ω = 0"));
                }
                let wp2 = plasma_freq * plasma_freq;
                let w = Complex64::new(omega, damping);
                let d = w * w - cyclotron_freq * cyclotron_freq;
                let xx = -wp2 * w / (omega * d);
                let xy = Complex64::new(0.0, -wp2 * cyclotron_freq) / (omega * d);
                let zz = -wp2 / (omega * w);
                let z = Complex64::new(0.0, 0.0);
                Ok([[xx, xy, z], [-xy, xx, z], [z, z, zz]])
            }
            _ => {
                let c = self.chi(omega)?;
                let mut t = ZERO_TENSOR;
                for (i, row) in t.iter_mut().enumerate() {
                    row[i] = c;
                }
                Ok(t)
            }
        }
    }

    /// Mass density if the model carries one.
    pub fn mass_density(&self) -> Option<f64> {
        match self {
            Material::DrudeMetal(p) => Some(p.mass_density),
            _ => None,
        }
    }
}

impl fmt::Display for Material {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Material::DrudeMetal(p) => write!(
                f,
                "drude(wp={} eV, nu={} eV, n={} m^-3, rho={} kg/m^3)",
                p.plasma_freq, p.damping, p.atom_density, p.mass_density
            ),
            Material::Dielectric { chi0 } => write!(f, "dielectric(chi0={chi0})"),
            Material::MonomialAbsorber { exponent, amplitude } => {
                write!(f, "monomial(n={exponent}, A={amplitude})")
            }
            Material::GyrotropicSphere {
                plasma_freq,
                damping,
                cyclotron_freq,
                radius,
            } => write!(
                f,
                "gyrotropic(wp={plasma_freq} eV, nu={damping} eV, wc={cyclotron_freq} eV, a={radius} m)"
            ),
        }
    }
}

/// X_AB(ω) = Im χ_A Re χ_B − Re χ_A Im χ_B.
pub fn susceptibility_product(omega: f64, a: &Material, b: &Material) -> Result<f64> {
    let ca = a.chi(omega)?;
    let cb = b.chi(omega)?;
    Ok(ca.im * cb.re - ca.re * cb.im)
}

/// Anti-Hermitian part χᴬ = (χ − χ†)/(2i).
pub fn antihermitian_part(chi: &Tensor3) -> Tensor3 {
    let mut out = ZERO_TENSOR;
    let two_i = Complex64::new(0.0, 2.0);
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (chi[i][j] - chi[j][i].conj()) / two_i;
        }
    }
    out
}
