//! Weak-coupling closed forms for the steady phonon occupancy.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::bogoliubov::{wrap_angle, BogoliubovFrame};
use crate::constants::SystemParams;
use crate::error::{Error, Result};

/// Magnon response at the mechanical sidebands and at line center.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Susceptibilities {
    /// [κ_b/2 + i(Δ_B + ω_c)]⁻¹
    pub chi_plus: Complex64,
    /// [κ_b/2 + i(Δ_B − ω_c)]⁻¹
    pub chi_minus: Complex64,
    /// (κ_b/2 + iΔ_B)⁻¹
    pub chi_b: Complex64,
}

impl Susceptibilities {
    pub fn new(delta_big_b: f64, omega_c: f64, kappa_b: f64) -> Self {
        let h = kappa_b / 2.0;
        Susceptibilities {
            chi_plus: Complex64::new(h, delta_big_b + omega_c).inv(),
            chi_minus: Complex64::new(h, delta_big_b - omega_c).inv(),
            chi_b: Complex64::new(h, delta_big_b).inv(),
        }
    }

    /// χ₊ + χ₊* (heating rate per 𝒢²).
    pub fn x_plus(&self) -> f64 {
        2.0 * self.chi_plus.re
    }

    /// χ₋ + χ₋* (cooling rate per 𝒢²).
    pub fn x_minus(&self) -> f64 {
        2.0 * self.chi_minus.re
    }
}

/// The three-term split: κ_c n̄_c/(𝒢²X), the squeezing-sensitive n_c⁽⁰⁾,
/// and the 𝒢²F₄/2 correction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeTerm {
    pub thermal: f64,
    pub n_c0: f64,
    pub correction: f64,
}

impl ThreeTerm {
    pub fn total(&self) -> f64 {
        self.thermal + self.n_c0 + self.correction
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxOccupancy {
    /// Full weak-coupling expression with κ_c kept in the denominator.
    pub full: f64,
    pub three_term: ThreeTerm,
    pub f4: f64,
    /// κ_c + 𝒢²(X₋ − X₊), the net damping of the mechanics.
    pub denominator: f64,
    /// False when the value is not finite, negative, or the net damping is
    /// not positive; the raw number is still reported.
    pub valid: bool,
}

/// F₄, the coefficient of the 𝒢⁴ term in the numerator.
pub fn f4(chi: &Susceptibilities, kappa_b: f64, omega_c: f64, n_beta: f64, m: Complex64) -> f64 {
    let xm = chi.x_minus();
    let xp = chi.x_plus();
    let w2 = omega_c * omega_c;
    let bracket = kappa_b * chi.chi_b.conj()
        - Complex64::i() * omega_c * (chi.chi_minus.conj() - chi.chi_plus.conj())
        - 1.0;
    (2.0 * n_beta + 1.0) * (1.0 / w2 - (xm + xp) / kappa_b) + (xm - xp) / kappa_b + 2.0 * (m * bracket).re / w2
}

/// Weak-coupling occupancy in the Bogoliubov frame.
pub fn n_c_full_approx(frame: &BogoliubovFrame, params: &SystemParams, n_bar_c: f64) -> Result<ApproxOccupancy> {
    let kb = params.kappa_b;
    let kc = params.kappa_c;
    let wc = params.omega_c;
    if !(frame.delta_big_b > 0.0) {
        return Err(Error::invalid("delta_big_b", "must be positive"));
    }
    let chi = Susceptibilities::new(frame.delta_big_b, wc, kb);
    let xm = chi.x_minus();
    let xp = chi.x_plus();
    let net = xm - xp;
    if net == 0.0 {
        return Err(Error::invalid("omega_c", "cooling and heating rates coincide"));
    }
    let g2 = frame.g_cal * frame.g_cal;
    let nb = frame.n_beta;
    let m = frame.m_sq;

    let source = nb * xm + (nb + 1.0) * xp + kb * (m * chi.chi_b.conj() * (chi.chi_plus.conj() + chi.chi_minus.conj())).re;
    let f4 = f4(&chi, kb, wc, nb, m);

    let denominator = kc + g2 * net;
    let full = (kc * n_bar_c + g2 * source + 0.5 * g2 * g2 * net * f4) / denominator;
    let three_term = ThreeTerm {
        thermal: kc * n_bar_c / (g2 * net),
        n_c0: source / net,
        correction: 0.5 * g2 * f4,
    };
    let valid = full.is_finite() && full >= 0.0 && denominator > 0.0;
    Ok(ApproxOccupancy {
        full,
        three_term,
        f4,
        denominator,
        valid,
    })
}

/// n_c⁽⁰⁾ without squeezing at effective detuning Δ'_b.
pub fn n_c0_no_squeeze(delta_b_prime: f64, omega_c: f64, kappa_b: f64, n_bar_b: f64) -> Result<f64> {
    if !(delta_b_prime > 0.0) {
        return Err(Error::invalid("delta_b_prime", "must be positive"));
    }
    let d = delta_b_prime;
    Ok((2.0 * n_bar_b + 1.0) * (4.0 * d * d + 4.0 * omega_c * omega_c + kappa_b * kappa_b) / (16.0 * d * omega_c) - 0.5)
}

/// Detuning minimizing [`n_c0_no_squeeze`].
pub fn no_squeeze_optimal_detuning(omega_c: f64, kappa_b: f64) -> f64 {
    0.5 * (kappa_b * kappa_b + 4.0 * omega_c * omega_c).sqrt()
}

/// n_c⁽⁰⁾ with optimal squeezing phase and strength at Bogoliubov detuning Δ_B.
pub fn n_c0_optimized(delta_big_b: f64, omega_c: f64, kappa_b: f64, n_bar_b: f64) -> Result<f64> {
    if !(delta_big_b > 0.0) {
        return Err(Error::invalid("delta_big_b", "must be positive"));
    }
    let u = kappa_b * kappa_b + 4.0 * delta_big_b * delta_big_b;
    Ok((2.0 * n_bar_b + 1.0) * (u + 4.0 * omega_c * omega_c) / (8.0 * omega_c * u.sqrt()) - 0.5)
}

/// n_c⁽⁰⁾ as a function of squeezing strength λ and total phase
/// ψ = θ + 2φ, before either is optimized.
pub fn n_c0_pre_optimization(
    delta_big_b: f64,
    omega_c: f64,
    kappa_b: f64,
    n_bar_b: f64,
    lambda: f64,
    psi: f64,
) -> f64 {
    let chi = Susceptibilities::new(delta_big_b, omega_c, kappa_b);
    let s = chi.chi_plus + chi.chi_minus;
    let inner = 2.0 * (delta_big_b * delta_big_b + lambda * lambda).sqrt()
        + lambda * kappa_b * chi.chi_b * Complex64::from_polar(1.0, psi);
    (2.0 * n_bar_b + 1.0) / (4.0 * delta_big_b * (chi.x_minus() - chi.x_plus())) * 2.0 * (s * inner).re - 0.5
}

/// Phase condition θ + 2φ = π − arg χ_b, wrapped into (−π, π].
pub fn optimal_total_phase(delta_big_b: f64, kappa_b: f64) -> f64 {
    let chi_b = Complex64::new(kappa_b / 2.0, delta_big_b).inv();
    wrap_angle(PI - chi_b.arg())
}

/// Grid over ψ ∈ [0, 2π) and λ ∈ (0, λ_max].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalityGrid {
    pub phase_points: usize,
    pub lambda_points: usize,
    pub lambda_max: f64,
}

impl OptimalityGrid {
    pub fn new(phase_points: usize, lambda_points: usize, lambda_max: f64) -> Self {
        OptimalityGrid {
            phase_points,
            lambda_points,
            lambda_max,
        }
    }

    pub fn phase_step(&self) -> f64 {
        2.0 * PI / self.phase_points as f64
    }

    pub fn lambda_step(&self) -> f64 {
        self.lambda_max / self.lambda_points as f64
    }

    pub fn phase(&self, i: usize) -> f64 {
        i as f64 * self.phase_step()
    }

    pub fn lambda(&self, j: usize) -> f64 {
        (j + 1) as f64 * self.lambda_step()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalityReport {
    pub grid_psi: f64,
    pub grid_lambda: f64,
    pub grid_value: f64,
    /// π − arg χ_b.
    pub closed_form_psi: f64,
    /// κ_b/2.
    pub closed_form_lambda: f64,
    pub closed_form_value: f64,
    /// Distance of the grid minimizer from the closed-form conditions, in
    /// grid steps.
    pub psi_steps_off: f64,
    pub lambda_steps_off: f64,
    /// Joint minimizer of the pre-optimization expression.
    pub exact_psi: f64,
    pub exact_lambda: f64,
    pub exact_value: f64,
}

impl OptimalityReport {
    /// Grid minimizer within one step of both closed-form conditions.
    pub fn conditions_confirmed(&self) -> bool {
        self.psi_steps_off <= 1.0 && self.lambda_steps_off <= 1.0
    }
}

/// Brute-force minimization of the pre-optimization n_c⁽⁰⁾ compared with
/// the closed-form phase and strength conditions and with the exact
/// minimizer.
///
/// The exact phase is π − arg χ_b − arg(χ₊ + χ₋); the exact strength solves
/// λ/√(Δ_B² + λ²) = κ_b|χ_b||χ₊ + χ₋| / (2 Re(χ₊ + χ₋)).
pub fn verify_optimality(
    delta_big_b: f64,
    omega_c: f64,
    kappa_b: f64,
    n_bar_b: f64,
    grid: &OptimalityGrid,
) -> Result<OptimalityReport> {
    if !(delta_big_b > 0.0 && kappa_b > 0.0 && omega_c > 0.0) {
        return Err(Error::invalid("delta_big_b", "detuning and rates must be positive"));
    }
    if grid.phase_points < 2 || grid.lambda_points < 2 || !(grid.lambda_max > 0.0) {
        return Err(Error::invalid("grid", "needs at least two points per axis and positive lambda_max"));
    }
    let f = |lambda: f64, psi: f64| n_c0_pre_optimization(delta_big_b, omega_c, kappa_b, n_bar_b, lambda, psi);

    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..grid.phase_points {
        let psi = grid.phase(i);
        for j in 0..grid.lambda_points {
            let lambda = grid.lambda(j);
            let v = f(lambda, psi);
            if v < best.0 {
                best = (v, psi, lambda);
            }
        }
    }
    let (grid_value, grid_psi, grid_lambda) = best;

    let closed_form_psi = optimal_total_phase(delta_big_b, kappa_b);
    let closed_form_lambda = kappa_b / 2.0;
    let psi_steps_off = wrap_angle(grid_psi - closed_form_psi).abs() / grid.phase_step();
    let lambda_steps_off = (grid_lambda - closed_form_lambda).abs() / grid.lambda_step();

    let chi = Susceptibilities::new(delta_big_b, omega_c, kappa_b);
    let s = chi.chi_plus + chi.chi_minus;
    let exact_psi = wrap_angle(PI - chi.chi_b.arg() - s.arg());
    let c = kappa_b * chi.chi_b.norm() * s.norm() / (2.0 * s.re);
    let exact_lambda = if c < 1.0 {
        c * delta_big_b / (1.0 - c * c).sqrt()
    } else {
        f64::INFINITY
    };

    Ok(OptimalityReport {
        grid_psi,
        grid_lambda,
        grid_value,
        closed_form_psi,
        closed_form_lambda,
        closed_form_value: f(closed_form_lambda, closed_form_psi),
        psi_steps_off,
        lambda_steps_off,
        exact_psi,
        exact_lambda,
        exact_value: f(exact_lambda, exact_psi),
    })
}
