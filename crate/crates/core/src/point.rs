//! One operating point evaluated end to end: squeezed frame, exact and
//! approximate occupancy, and the unsqueezed baseline.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::analytic::{n_c_full_approx, no_squeeze_optimal_detuning, ApproxOccupancy};
use crate::bogoliubov::{build_frame, BogoliubovFrame};
use crate::constants::SystemParams;
use crate::design::LinearizedParams;
use crate::error::{Error, Result};
use crate::moments::{build_system, original_frame_system, steady_state, LinearSystem, MomentState, Physicality};

/// Which coupling is held fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coupling {
    /// Squeezed-frame coupling 𝒢; the bare enhanced coupling is 𝒢/μ.
    Cal(f64),
    /// Enhanced coupling G = g|A₀|.
    Bare(f64),
}

impl Coupling {
    pub fn value(&self) -> f64 {
        match *self {
            Coupling::Cal(v) | Coupling::Bare(v) => v,
        }
    }
}

/// Which magnon detuning is held fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Detuning {
    /// Δ_B; the effective detuning is √(Δ_B² + λ²).
    Bogoliubov(f64),
    /// Δ'_b.
    Effective(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Squeezing {
    /// λ = κ_b/2 and θ = −π/2.
    Optimal,
    Explicit { lambda: f64, theta: f64 },
}

/// Detuning used for the unsqueezed comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NoSqueezeDetuning {
    /// Same detuning as the squeezed frame: Δ'_b = Δ_B.
    #[default]
    Matched,
    /// Δ'_b = √(κ_b² + 4ω_c²)/2, best for the unsqueezed system.
    Optimal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatingPoint {
    pub params: SystemParams,
    pub coupling: Coupling,
    pub detuning: Detuning,
    pub squeezing: Squeezing,
    pub no_squeeze_detuning: NoSqueezeDetuning,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactSolve {
    pub state: MomentState,
    pub physicality: Physicality,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointReport {
    pub linearized: LinearizedParams,
    pub frame: BogoliubovFrame,
    pub n_bar_b: f64,
    pub n_bar_c: f64,
    /// Eigenvalues of the squeezed-frame drift.
    pub eigenvalues: Vec<Complex64>,
    /// Squeezed exact solve, or the reason it failed.
    pub squeezed: std::result::Result<ExactSolve, Error>,
    pub approx: ApproxOccupancy,
    /// Unsqueezed baseline: its parameters and exact solve.
    pub no_squeeze: LinearizedParams,
    pub no_squeeze_exact: std::result::Result<ExactSolve, Error>,
}

impl PointReport {
    pub fn n_c_exact(&self) -> f64 {
        self.squeezed.as_ref().map_or(f64::NAN, |s| s.state.n_c())
    }

    pub fn n_c_no_squeeze(&self) -> f64 {
        self.no_squeeze_exact.as_ref().map_or(f64::NAN, |s| s.state.n_c())
    }

    pub fn n_c_approx(&self) -> f64 {
        self.approx.full
    }

    pub fn stable(&self) -> bool {
        self.squeezed.is_ok() && self.no_squeeze_exact.is_ok()
    }
}

fn exact(system: &LinearSystem) -> std::result::Result<ExactSolve, Error> {
    let state = steady_state(system)?;
    Ok(ExactSolve {
        physicality: state.physicality(),
        state,
    })
}

impl OperatingPoint {
    /// Linearized parameters of the squeezed configuration.
    pub fn linearized(&self) -> Result<LinearizedParams> {
        let p = &self.params;
        let (lambda, theta) = match self.squeezing {
            Squeezing::Optimal => (p.kappa_b / 2.0, -FRAC_PI_2),
            Squeezing::Explicit { lambda, theta } => (lambda, theta),
        };
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::invalid("lambda", "must be non-negative"));
        }
        let delta_b_prime = match self.detuning {
            Detuning::Bogoliubov(d) => {
                if !(d > 0.0) {
                    return Err(Error::invalid("delta_big_b", "must be positive"));
                }
                d.hypot(lambda)
            }
            Detuning::Effective(d) => d,
        };
        let mut lin = LinearizedParams {
            big_g: 0.0,
            lambda,
            theta,
            delta_b_prime,
        };
        lin.big_g = match self.coupling {
            Coupling::Bare(g) => g,
            Coupling::Cal(gc) => gc / build_frame(&lin, 0.0)?.mu,
        };
        Ok(lin)
    }

    pub fn evaluate(&self) -> Result<PointReport> {
        let p = &self.params;
        p.validate()?;
        let n_bar_b = p.n_bar_b()?;
        let n_bar_c = p.n_bar_c()?;
        let linearized = self.linearized()?;
        let frame = build_frame(&linearized, n_bar_b)?;
        let system = build_system(&frame, p, n_bar_c);
        let eigenvalues = system.eigenvalues();
        let squeezed = exact(&system);
        let approx = n_c_full_approx(&frame, p, n_bar_c)?;

        let ns_detuning = match self.no_squeeze_detuning {
            NoSqueezeDetuning::Matched => frame.delta_big_b,
            NoSqueezeDetuning::Optimal => no_squeeze_optimal_detuning(p.omega_c, p.kappa_b),
        };
        let no_squeeze = LinearizedParams {
            big_g: self.coupling.value(),
            lambda: 0.0,
            theta: 0.0,
            delta_b_prime: ns_detuning,
        };
        let ns_frame = BogoliubovFrame::identity(ns_detuning, no_squeeze.big_g, n_bar_b);
        let no_squeeze_exact = exact(&build_system(&ns_frame, p, n_bar_c));

        Ok(PointReport {
            linearized,
            frame,
            n_bar_b,
            n_bar_c,
            eigenvalues,
            squeezed,
            approx,
            no_squeeze,
            no_squeeze_exact,
        })
    }

    /// Relative difference between the squeezed-frame steady n_c and the
    /// same quantity computed without the Bogoliubov transformation.
    pub fn frame_equivalence_residual(&self, report: &PointReport) -> Result<f64> {
        let bogo = report.squeezed.as_ref().map_err(Clone::clone)?.state.n_c();
        let orig = steady_state(&original_frame_system(
            &report.linearized,
            &self.params,
            report.n_bar_b,
            report.n_bar_c,
        ))?
        .n_c();
        Ok((bogo - orig).abs() / orig.abs())
    }
}
