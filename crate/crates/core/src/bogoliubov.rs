//! Squeezed (Bogoliubov) frame of the magnon mode.
//!
//! The map β = e^{iφ}(b cosh r + e^{iθ} b† sinh r) removes the degenerate
//! squeezing term of the linearized Hamiltonian, leaving a beam-splitter
//! coupling 𝒢 = μG between β and the mechanics and a squeezed thermal bath
//! (n̄_β, m) for β.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::design::LinearizedParams;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BogoliubovFrame {
    /// Squeeze parameter r ≥ 0.
    pub r: f64,
    pub phi: f64,
    /// Real positive coupling renormalization.
    pub mu: f64,
    /// Δ_B = √(Δ'_b² − λ²).
    pub delta_big_b: f64,
    /// 𝒢 = μG.
    pub g_cal: f64,
    /// Occupation of the squeezed bath.
    pub n_beta: f64,
    /// Anomalous bath correlation.
    pub m_sq: Complex64,
}

impl BogoliubovFrame {
    /// Bogoliubov frame with no squeezing: the identity map.
    pub fn identity(delta_b_prime: f64, big_g: f64, n_bar_b: f64) -> Self {
        BogoliubovFrame {
            r: 0.0,
            phi: 0.0,
            mu: 1.0,
            delta_big_b: delta_b_prime,
            g_cal: big_g,
            n_beta: n_bar_b,
            m_sq: Complex64::new(0.0, 0.0),
        }
    }

    /// |m|² ≤ n̄_β(n̄_β + 1), required for a physical squeezed bath.
    pub fn bath_is_physical(&self) -> bool {
        let bound = self.n_beta * (self.n_beta + 1.0);
        self.m_sq.norm_sqr() <= bound * (1.0 + 1e-12) + 1e-300
    }
}

/// Build the squeezed frame from the linearized parameters.
pub fn build_frame(lin: &LinearizedParams, n_bar_b: f64) -> Result<BogoliubovFrame> {
    let lambda = lin.lambda;
    let dbp = lin.delta_b_prime;
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::invalid("lambda", "must be non-negative"));
    }
    if !(n_bar_b >= 0.0) {
        return Err(Error::invalid("n_bar_b", "must be non-negative"));
    }
    if !(lambda < dbp) {
        return Err(Error::FrameUndefined {
            lambda,
            delta_b_prime: dbp,
        });
    }
    let delta_big_b = ((dbp - lambda) * (dbp + lambda)).sqrt();
    // sinh 2r = λ/Δ_B
    let r = 0.5 * (lambda / delta_big_b).asinh();
    let (sh, ch) = (r.sinh(), r.cosh());

    let z = Complex64::new(ch, 0.0) - Complex64::from_polar(sh, -lin.theta);
    let phi = z.arg();
    let mu = z.norm();

    let n_beta = n_bar_b * (2.0 * r).cosh() + sh * sh;
    let m_sq = Complex64::from_polar(
        (2.0 * n_bar_b + 1.0) * sh * ch,
        -(lin.theta + 2.0 * phi),
    );

    Ok(BogoliubovFrame {
        r,
        phi,
        mu,
        delta_big_b,
        g_cal: mu * lin.big_g,
        n_beta,
        m_sq,
    })
}

/// Closed-form phases that optimize the squeezing-assisted cooling term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalPhases {
    pub theta: f64,
    pub phi: f64,
    pub mu: f64,
}

/// θ = −π/2, 2φ = atan2(−κ_b, 2Δ_B), μ = (√(4Δ_B² + κ_b²)/(2Δ_B))^{1/2}.
///
/// These go with λ = κ_b/2, i.e. Δ'_b = √(Δ_B² + κ_b²/4).
pub fn optimal_phases(delta_big_b: f64, kappa_b: f64) -> OptimalPhases {
    let norm = (4.0 * delta_big_b * delta_big_b + kappa_b * kappa_b).sqrt();
    OptimalPhases {
        theta: -PI / 2.0,
        phi: 0.5 * (-kappa_b).atan2(2.0 * delta_big_b),
        mu: (norm / (2.0 * delta_big_b)).sqrt(),
    }
}

/// Wrap an angle into (−π, π].
pub fn wrap_angle(x: f64) -> f64 {
    let mut y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y -= 2.0 * PI;
    }
    y
}
