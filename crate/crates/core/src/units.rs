//! Natural units (ħ = c = ε₀ = k_B = 1, energies in eV) and their SI images.
//!
//! With energies in eV a length is measured in eV⁻¹ (1 eV⁻¹ = ħc/eV ≈ 197 nm),
//! a time in eV⁻¹ (ħ/eV ≈ 0.66 fs), a force in eV² and a torque in eV.

/// Conversion constants between natural units and SI.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitContext {
    /// ħ in eV·s.
    pub hbar: f64,
    /// ħc in eV·nm.
    pub hbar_c: f64,
    /// Boltzmann constant in eV/K.
    pub k_b: f64,
    /// Joules per eV (the elementary charge in C).
    pub joule_per_ev: f64,
    /// Vacuum permittivity in F/m, for conductivities given in S/m.
    pub epsilon0: f64,
    /// Speed of light in m/s.
    pub c: f64,
    /// Electron mass in kg, for cyclotron frequencies.
    pub electron_mass: f64,
    /// Atomic mass unit in kg.
    pub dalton: f64,
}

/// CODATA 2018 values.
pub const SI: UnitContext = UnitContext {
    hbar: 6.582_119_569e-16,
    hbar_c: 197.326_980_4,
    k_b: 8.617_333_262e-5,
    joule_per_ev: 1.602_176_634e-19,
    epsilon0: 8.854_187_812_8e-12,
    c: 299_792_458.0,
    electron_mass: 9.109_383_701_5e-31,
    dalton: 1.660_539_066_60e-27,
};

/// Bohr radius in m; `au` polarizability volumes are multiples of a₀³.
pub const BOHR_RADIUS: f64 = 5.291_772_109_03e-11;

/// Seconds in a Julian year.
pub const JULIAN_YEAR: f64 = 365.25 * 86_400.0;

impl Default for UnitContext {
    fn default() -> Self {
        SI
    }
}

impl UnitContext {
    /// ħc in eV·m.
    #[inline]
    fn hbar_c_m(&self) -> f64 {
        self.hbar_c * 1e-9
    }

    pub fn length_to_natural(&self, metres: f64) -> f64 {
        metres / self.hbar_c_m()
    }
    pub fn length_to_si(&self, inv_ev: f64) -> f64 {
        inv_ev * self.hbar_c_m()
    }
    pub fn length_to_nm(&self, inv_ev: f64) -> f64 {
        inv_ev * self.hbar_c
    }

    pub fn time_to_natural(&self, seconds: f64) -> f64 {
        seconds / self.hbar
    }
    pub fn time_to_si(&self, inv_ev: f64) -> f64 {
        inv_ev * self.hbar
    }

    pub fn temperature_to_natural(&self, kelvin: f64) -> f64 {
        kelvin * self.k_b
    }
    pub fn temperature_to_si(&self, ev: f64) -> f64 {
        ev / self.k_b
    }

    /// Force: eV² → N.
    pub fn force_to_si(&self, ev2: f64) -> f64 {
        ev2 * self.joule_per_ev / self.hbar_c_m()
    }
    pub fn force_to_natural(&self, newton: f64) -> f64 {
        newton * self.hbar_c_m() / self.joule_per_ev
    }

    /// Torque (an energy): eV → N·m.
    pub fn torque_to_si(&self, ev: f64) -> f64 {
        ev * self.joule_per_ev
    }
    pub fn torque_to_natural(&self, newton_metre: f64) -> f64 {
        newton_metre / self.joule_per_ev
    }

    /// Power: eV² (energy per natural time) → W.
    pub fn power_to_si(&self, ev2: f64) -> f64 {
        ev2 * self.joule_per_ev / self.hbar
    }

    /// Rest energy of a mass, kg → eV.
    pub fn mass_to_natural(&self, kg: f64) -> f64 {
        kg * self.c * self.c / self.joule_per_ev
    }
    pub fn mass_to_si(&self, ev: f64) -> f64 {
        ev * self.joule_per_ev / (self.c * self.c)
    }

    pub fn area_to_natural(&self, m2: f64) -> f64 {
        m2 / (self.hbar_c_m() * self.hbar_c_m())
    }
    pub fn volume_to_natural(&self, m3: f64) -> f64 {
        m3 / self.hbar_c_m().powi(3)
    }
    pub fn volume_to_si(&self, inv_ev3: f64) -> f64 {
        inv_ev3 * self.hbar_c_m().powi(3)
    }
    /// Number density, m⁻³ → eV³.
    pub fn number_density_to_natural(&self, per_m3: f64) -> f64 {
        per_m3 * self.hbar_c_m().powi(3)
    }

    /// Velocity as a fraction of c.
    pub fn velocity_to_natural(&self, m_per_s: f64) -> f64 {
        m_per_s / self.c
    }
    pub fn velocity_to_si(&self, v: f64) -> f64 {
        v * self.c
    }

    /// Angular velocity: eV (natural inverse time) → s⁻¹.
    pub fn rate_to_si(&self, ev: f64) -> f64 {
        ev / self.hbar
    }

    /// Conductivity, S/m → eV (σ/ε₀ as a rate, times ħ).
    pub fn conductivity_to_natural(&self, siemens_per_m: f64) -> f64 {
        siemens_per_m / self.epsilon0 * self.hbar
    }

    /// Cyclotron energy ħeB/mₑ for a field in tesla.
    pub fn cyclotron_energy(&self, tesla: f64) -> f64 {
        self.hbar * self.joule_per_ev * tesla / self.electron_mass
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn thermal_energy_at_room_temperature() {
        let t = SI.temperature_to_natural(300.0);
        assert!(rel(t, 0.025_852) < 1e-4);
    }

    #[test]
    fn one_inverse_ev_is_197_nm() {
        assert!(rel(SI.length_to_nm(1.0), 197.327) < 1e-5);
        assert!(rel(SI.time_to_si(1.0), 6.582e-16) < 1e-3);
    }

    #[test]
    fn cyclotron_energy_of_one_tesla() {
        assert!(rel(SI.cyclotron_energy(1.0), 1.157_676e-4) < 1e-5);
    }

    #[test]
    fn round_trips_keep_twelve_digits() {
        let u = SI;
        for &x in &[1e-12, 3.7e-7, 1.0, 42.0, 9.1e9] {
            assert!(rel(u.length_to_si(u.length_to_natural(x)), x) < 1e-12);
            assert!(rel(u.time_to_si(u.time_to_natural(x)), x) < 1e-12);
            assert!(rel(u.temperature_to_si(u.temperature_to_natural(x)), x) < 1e-12);
            assert!(rel(u.force_to_si(u.force_to_natural(x)), x) < 1e-12);
            assert!(rel(u.torque_to_si(u.torque_to_natural(x)), x) < 1e-12);
            assert!(rel(u.mass_to_si(u.mass_to_natural(x)), x) < 1e-12);
            assert!(rel(u.volume_to_si(u.volume_to_natural(x)), x) < 1e-12);
        }
    }
}
