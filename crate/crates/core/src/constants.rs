//! Physical constants, material data for YIG and the bare couplings derived
//! from them.
//!
//! Everything here works in SI units with angular frequencies in rad/s.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Reduced Planck constant (J s).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant (J/K).
pub const K_B: f64 = 1.380_649e-23;

/// Constants entering the coupling and Kerr formulas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub k_b: f64,
    /// Gyromagnetic ratio, rad/(s T).
    pub gamma0: f64,
    /// Vacuum permeability, N/A².
    pub mu0: f64,
    /// Spin density, 1/m³.
    pub rho_s: f64,
    /// Mass density, kg/m³.
    pub rho_m: f64,
    /// Ground-state spin number per site.
    pub s_spin: f64,
    /// First-order magnetocrystalline anisotropy constant, J/m³.
    pub k_an: f64,
}

impl PhysicalConstants {
    /// Values for YIG.
    pub const YIG: PhysicalConstants = PhysicalConstants {
        hbar: HBAR,
        k_b: K_B,
        gamma0: 2.0 * PI * 28e9,
        mu0: 4.0 * PI * 1e-7,
        rho_s: 4.22e27,
        rho_m: 5170.0,
        s_spin: 2.5,
        k_an: -610.0,
    };

    /// Saturation magnetization M = ħ γ₀ ρ_s s.
    pub fn saturation_magnetization(&self) -> f64 {
        self.hbar * self.gamma0 * self.rho_s * self.s_spin
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::YIG
    }
}

/// Mode frequencies, decay rates, bare couplings and bath temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub omega_a: f64,
    pub omega_b: f64,
    pub omega_c: f64,
    pub kappa_a: f64,
    pub kappa_b: f64,
    pub kappa_c: f64,
    /// Bare tripartite coupling, rad/s.
    pub g: f64,
    /// Self-Kerr coefficient, rad/s. Negative for YIG.
    pub k_kerr: f64,
    /// Kelvin.
    pub temperature: f64,
}

impl SystemParams {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("omega_a", self.omega_a),
            ("omega_b", self.omega_b),
            ("omega_c", self.omega_c),
            ("kappa_a", self.kappa_a),
            ("kappa_b", self.kappa_b),
            ("kappa_c", self.kappa_c),
            ("g", self.g),
            ("k_kerr", self.k_kerr),
            ("temperature", self.temperature),
        ];
        for (name, v) in finite {
            if !v.is_finite() {
                return Err(Error::invalid(name, "must be finite"));
            }
        }
        if self.omega_c <= 0.0 {
            return Err(Error::invalid("omega_c", "must be positive"));
        }
        if self.kappa_b <= 0.0 {
            return Err(Error::invalid("kappa_b", "must be positive"));
        }
        if self.kappa_c < 0.0 {
            return Err(Error::invalid("kappa_c", "must be non-negative"));
        }
        if self.kappa_a < 0.0 {
            return Err(Error::invalid("kappa_a", "must be non-negative"));
        }
        if self.temperature < 0.0 {
            return Err(Error::invalid("temperature", "must be non-negative"));
        }
        Ok(())
    }

    /// Thermal magnon occupation n̄_b at ω_b and T.
    pub fn n_bar_b(&self) -> Result<f64> {
        thermal_occupation(self.omega_b, self.temperature)
    }

    /// Thermal phonon occupation n̄_c at ω_c and T.
    pub fn n_bar_c(&self) -> Result<f64> {
        thermal_occupation(self.omega_c, self.temperature)
    }
}

/// Cavity-mode volume and YIG sphere radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryParams {
    /// m³
    pub cavity_volume: f64,
    /// m
    pub sphere_radius: f64,
}

impl GeometryParams {
    pub fn sphere_volume(&self) -> f64 {
        sphere_volume(self.sphere_radius)
    }
}

fn sphere_volume(radius: f64) -> f64 {
    4.0 / 3.0 * PI * radius.powi(3)
}

/// Bose-Einstein occupation of a mode at angular frequency `omega` (rad/s)
/// and temperature `temperature` (K). Exactly zero at T = 0.
pub fn thermal_occupation(omega: f64, temperature: f64) -> Result<f64> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::invalid("omega", format!("must be positive, got {omega}")));
    }
    if !(temperature >= 0.0) || !temperature.is_finite() {
        return Err(Error::invalid(
            "temperature",
            format!("must be non-negative, got {temperature}"),
        ));
    }
    if temperature == 0.0 {
        return Ok(0.0);
    }
    let x = HBAR * omega / (K_B * temperature);
    Ok(1.0 / x.exp_m1())
}

/// Bare magnon-photon-phonon coupling
/// g = (γ₀/2) √(ħω_a μ₀/V_a) √(2ρ_s V_s s) √(ħ/(2ρ_m V_s ω_c)).
///
/// The sphere volume cancels; it is still carried through the product so
/// that the cancellation is a property of the evaluated expression.
pub fn tripartite_coupling(
    consts: &PhysicalConstants,
    geometry: &GeometryParams,
    omega_a: f64,
    omega_c: f64,
) -> Result<f64> {
    if !(geometry.cavity_volume > 0.0) {
        return Err(Error::invalid("cavity_volume", "must be positive"));
    }
    if !(geometry.sphere_radius > 0.0) {
        return Err(Error::invalid("sphere_radius", "must be positive"));
    }
    if !(omega_a > 0.0) {
        return Err(Error::invalid("omega_a", "must be positive"));
    }
    if !(omega_c > 0.0) {
        return Err(Error::invalid("omega_c", "must be positive"));
    }
    let v_s = geometry.sphere_volume();
    let field = (consts.hbar * omega_a * consts.mu0 / geometry.cavity_volume).sqrt();
    let spins = (2.0 * consts.rho_s * v_s * consts.s_spin).sqrt();
    let x_zpf = (consts.hbar / (2.0 * consts.rho_m * v_s * omega_c)).sqrt();
    Ok(consts.gamma0 / 2.0 * field * spins * x_zpf)
}

/// Magnon self-Kerr coefficient k = 13 ħ K_an γ₀² / (4 M² V_s).
pub fn kerr_coefficient(consts: &PhysicalConstants, sphere_radius: f64) -> Result<f64> {
    if !(sphere_radius > 0.0) || !sphere_radius.is_finite() {
        return Err(Error::invalid("sphere_radius", "must be positive"));
    }
    let m = consts.saturation_magnetization();
    let v_s = sphere_volume(sphere_radius);
    Ok(13.0 * consts.hbar * consts.k_an * consts.gamma0.powi(2) / (4.0 * m * m * v_s))
}
