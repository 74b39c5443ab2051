//! Classical steady-state amplitudes of the driven cavity–magnon–phonon
//! system, in both directions.
//!
//! The displacement ansatz puts the cavity at a static amplitude A₀ and the
//! magnon and mechanics at the two pump sidebands e^{∓iΔ_d t}, giving five
//! complex equations in (A₀, B₊, B₋, C₊, C₋). [`inverse_design`] fixes the
//! amplitudes from a target (G, λ, θ) and reads off the drives by
//! substitution; [`forward_solve`] goes the other way with a damped Newton
//! iteration.

use nalgebra::{SMatrix, SVector};
use num_complex::Complex64;

use crate::bogoliubov::wrap_angle;
use crate::constants::{SystemParams, HBAR};
use crate::error::{Error, Result};

type Mat10 = SMatrix<f64, 10, 10>;
type Vec10 = SVector<f64, 10>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Relative per-equation residual accepted from the closed-form design.
pub const DESIGN_RESIDUAL_TOL: f64 = 1e-10;

/// Pump amplitudes (rad/s) and detunings (rad/s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveConfig {
    pub eps_a: Complex64,
    pub eps_plus: Complex64,
    pub eps_minus: Complex64,
    pub delta_a: f64,
    pub delta_b: f64,
    /// Half the splitting of the two magnon pump tones.
    pub delta_d: f64,
}

impl DriveConfig {
    fn is_finite(&self) -> bool {
        [self.eps_a, self.eps_plus, self.eps_minus]
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
            && self.delta_a.is_finite()
            && self.delta_b.is_finite()
            && self.delta_d.is_finite()
    }
}

/// Classical amplitudes: cavity A₀, magnon sidebands B±, phonon sidebands C±.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyAmplitudes {
    pub a0: Complex64,
    pub b_plus: Complex64,
    pub b_minus: Complex64,
    pub c_plus: Complex64,
    pub c_minus: Complex64,
}

impl SteadyAmplitudes {
    pub fn zeros() -> Self {
        SteadyAmplitudes {
            a0: ZERO,
            b_plus: ZERO,
            b_minus: ZERO,
            c_plus: ZERO,
            c_minus: ZERO,
        }
    }

    fn to_array(self) -> [Complex64; 5] {
        [self.a0, self.b_plus, self.b_minus, self.c_plus, self.c_minus]
    }

    fn from_array(z: [Complex64; 5]) -> Self {
        SteadyAmplitudes {
            a0: z[0],
            b_plus: z[1],
            b_minus: z[2],
            c_plus: z[3],
            c_minus: z[4],
        }
    }

    /// Largest componentwise difference, relative to the magnitude of the
    /// matching component of `other` (absolute where that component is 0).
    pub fn max_relative_difference(&self, other: &SteadyAmplitudes) -> f64 {
        self.to_array()
            .iter()
            .zip(other.to_array())
            .map(|(a, b)| {
                let d = (a - b).norm();
                if b.norm() > 0.0 {
                    d / b.norm()
                } else {
                    d
                }
            })
            .fold(0.0, f64::max)
    }
}

/// Linearized-fluctuation parameters: enhanced coupling G, squeezing
/// strength λ and phase θ, effective magnon detuning Δ'_b.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearizedParams {
    pub big_g: f64,
    pub lambda: f64,
    pub theta: f64,
    pub delta_b_prime: f64,
}

/// Drive powers in watts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrivePowers {
    pub p_a: f64,
    pub p_plus: f64,
    pub p_minus: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveDesign {
    pub amplitudes: DriveConfig,
    pub powers: DrivePowers,
    /// Largest relative residual of the five amplitude equations.
    pub residual: f64,
}

/// Residuals and per-equation term magnitudes of the steady equations for
/// a given bare coupling and Kerr coefficient.
struct Equations<'a> {
    params: &'a SystemParams,
    drives: &'a DriveConfig,
    g: f64,
    k: f64,
}

impl Equations<'_> {
    fn alpha_a(&self) -> Complex64 {
        Complex64::new(self.params.kappa_a / 2.0, self.drives.delta_a)
    }

    fn alpha_b(&self) -> Complex64 {
        Complex64::new(self.params.kappa_b / 2.0, self.drives.delta_b)
    }

    fn alpha_c(&self) -> Complex64 {
        Complex64::new(self.params.kappa_c / 2.0, self.params.omega_c)
    }

    /// Residuals (time derivatives) and the sum of absolute term sizes of
    /// each equation.
    fn evaluate(&self, z: &[Complex64; 5]) -> ([Complex64; 5], [f64; 5]) {
        let [a0, bp, bm, cp, cm] = *z;
        let d = self.drives;
        let (g, k) = (self.g, self.k);
        let id = I * d.delta_d;

        let mut r = [ZERO; 5];
        let mut s = [0.0; 5];

        let cross = bm * (cp + cm.conj()) + bp * (cm + cp.conj());
        r[0] = d.eps_a - self.alpha_a() * a0 - I * g * cross;
        s[0] = d.eps_a.norm()
            + (self.alpha_a() * a0).norm()
            + g.abs() * (bm.norm() * (cp.norm() + cm.norm()) + bp.norm() * (cm.norm() + cp.norm()));

        let b_eq = |sigma: f64, b: Complex64, bo: Complex64, c: Complex64, co: Complex64, eps: Complex64| {
            let kerr = 0.5 * I * k * b * (b.norm_sqr() + 2.0 * bo.norm_sqr());
            let coup = I * g * a0 * (c + co.conj());
            let lin = (sigma * id - self.alpha_b()) * b;
            let res = lin - coup - kerr + eps;
            let size = lin.norm() + coup.norm() + kerr.norm() + eps.norm();
            (res, size)
        };
        (r[1], s[1]) = b_eq(1.0, bp, bm, cp, cm, d.eps_plus);
        (r[2], s[2]) = b_eq(-1.0, bm, bp, cm, cp, d.eps_minus);

        let c_eq = |sigma: f64, c: Complex64, b: Complex64, bo: Complex64| {
            let lin = (sigma * id - self.alpha_c()) * c;
            let src = I * g * (a0.conj() * b + a0 * bo.conj());
            (lin - src, lin.norm() + src.norm())
        };
        (r[3], s[3]) = c_eq(1.0, cp, bp, bm);
        (r[4], s[4]) = c_eq(-1.0, cm, bm, bp);
        (r, s)
    }

    /// Holomorphic and antiholomorphic parts of the Jacobian: ∂r_i/∂z_j and
    /// ∂r_i/∂z̄_j.
    fn wirtinger(&self, z: &[Complex64; 5]) -> ([[Complex64; 5]; 5], [[Complex64; 5]; 5]) {
        let [a0, bp, bm, cp, cm] = *z;
        let (g, k) = (self.g, self.k);
        let id = I * self.drives.delta_d;
        let ig = I * g;
        let mut jz = [[ZERO; 5]; 5];
        let mut jb = [[ZERO; 5]; 5];

        // Cavity.
        jz[0][0] = -self.alpha_a();
        jz[0][1] = -ig * (cm + cp.conj());
        jz[0][2] = -ig * (cp + cm.conj());
        jz[0][3] = -ig * bm;
        jb[0][3] = -ig * bp;
        jz[0][4] = -ig * bp;
        jb[0][4] = -ig * bm;

        // Magnon sidebands: rows 1 (+) and 2 (−).
        for (row, sigma, bi, oi, ci, coi) in [(1, 1.0, 1, 2, 3, 4), (2, -1.0, 2, 1, 4, 3)] {
            let b = z[bi];
            let bo = z[oi];
            let hk = 0.5 * I * k;
            jz[row][bi] = sigma * id - self.alpha_b() - hk * 2.0 * (b.norm_sqr() + bo.norm_sqr());
            jb[row][bi] = -hk * b * b;
            jz[row][oi] = -hk * 2.0 * b * bo.conj();
            jb[row][oi] = -hk * 2.0 * b * bo;
            jz[row][0] = -ig * (z[ci] + z[coi].conj());
            jz[row][ci] = -ig * a0;
            jb[row][coi] = -ig * a0;
        }

        // Phonon sidebands: rows 3 (+) and 4 (−).
        for (row, sigma, bi, oi) in [(3, 1.0, 1, 2), (4, -1.0, 2, 1)] {
            jz[row][row] = sigma * id - self.alpha_c();
            jb[row][0] = -ig * z[bi];
            jz[row][0] = -ig * z[oi].conj();
            jz[row][bi] = -ig * a0.conj();
            jb[row][oi] = -ig * a0;
        }
        (jz, jb)
    }

    /// Real 10×10 Jacobian in (Re, Im) pairs.
    fn real_jacobian(&self, z: &[Complex64; 5]) -> Mat10 {
        let (jz, jb) = self.wirtinger(z);
        let mut j = Mat10::zeros();
        for r in 0..5 {
            for c in 0..5 {
                let dx = jz[r][c] + jb[r][c];
                let dy = I * (jz[r][c] - jb[r][c]);
                j[(2 * r, 2 * c)] = dx.re;
                j[(2 * r + 1, 2 * c)] = dx.im;
                j[(2 * r, 2 * c + 1)] = dy.re;
                j[(2 * r + 1, 2 * c + 1)] = dy.im;
            }
        }
        j
    }
}

fn scaled_residual(r: &[Complex64; 5], s: &[f64; 5]) -> f64 {
    r.iter()
        .zip(s)
        .map(|(ri, si)| if *si > 0.0 { ri.norm() / si } else { ri.norm() })
        .fold(0.0, f64::max)
}

/// Options for [`forward_solve_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForwardOptions {
    /// Newton iteration cap per solve.
    pub max_iterations: usize,
    /// Convergence threshold on max_i |r_i| / (term magnitude of equation i).
    pub tolerance: f64,
    /// Start Newton here instead of continuing from the decoupled solution.
    pub initial_guess: Option<SteadyAmplitudes>,
}

impl Default for ForwardOptions {
    fn default() -> Self {
        ForwardOptions {
            max_iterations: 200,
            tolerance: 1e-12,
            initial_guess: None,
        }
    }
}

struct NewtonOutcome {
    z: [Complex64; 5],
    iterations: usize,
    residual: f64,
    converged: bool,
}

fn newton(eqs: &Equations<'_>, start: [Complex64; 5], max_iterations: usize, tol: f64) -> NewtonOutcome {
    let mut z = start;
    let (mut r, mut s) = eqs.evaluate(&z);
    let mut res = scaled_residual(&r, &s);
    for it in 0..max_iterations {
        if res <= tol {
            return NewtonOutcome {
                z,
                iterations: it,
                residual: res,
                converged: true,
            };
        }
        // Row scaling by term magnitude, column scaling by equilibration.
        let mut jac = eqs.real_jacobian(&z);
        let mut rhs = Vec10::zeros();
        for i in 0..5 {
            let w = if s[i] > 0.0 { 1.0 / s[i] } else { 1.0 };
            rhs[2 * i] = -r[i].re * w;
            rhs[2 * i + 1] = -r[i].im * w;
            for c in 0..10 {
                jac[(2 * i, c)] *= w;
                jac[(2 * i + 1, c)] *= w;
            }
        }
        let mut col = [1.0; 10];
        for (c, cs) in col.iter_mut().enumerate() {
            let m = jac.column(c).amax();
            if m > 0.0 {
                *cs = 1.0 / m;
            }
            for rr in 0..10 {
                jac[(rr, c)] *= *cs;
            }
        }
        let Some(du) = jac.lu().solve(&rhs) else {
            break;
        };
        let mut dz = [ZERO; 5];
        for j in 0..5 {
            dz[j] = Complex64::new(du[2 * j] * col[2 * j], du[2 * j + 1] * col[2 * j + 1]);
        }

        let merit = |r: &[Complex64; 5], s: &[f64; 5]| -> f64 {
            r.iter()
                .zip(s)
                .map(|(ri, si)| ri.norm_sqr() / if *si > 0.0 { si * si } else { 1.0 })
                .sum()
        };
        // Merit uses the scales frozen at the current iterate.
        let f0 = merit(&r, &s);
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let mut trial = z;
            for j in 0..5 {
                trial[j] += dz[j] * t;
            }
            let (rt, st) = eqs.evaluate(&trial);
            if merit(&rt, &s) <= (1.0 - 1e-4 * t) * f0 || scaled_residual(&rt, &st) <= tol {
                z = trial;
                r = rt;
                s = st;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        res = scaled_residual(&r, &s);
        if !accepted {
            return NewtonOutcome {
                z,
                iterations: it + 1,
                residual: res,
                converged: res <= tol,
            };
        }
    }
    NewtonOutcome {
        z,
        iterations: max_iterations,
        residual: res,
        converged: res <= tol,
    }
}

/// Solve the steady amplitude equations for given drives.
///
/// Starts from the decoupled solution (g = k = 0) and follows the branch as
/// both nonlinear couplings are ramped to their physical values. A fold on
/// that path is reported as [`Error::NoConvergence`].
pub fn forward_solve(params: &SystemParams, drives: &DriveConfig) -> Result<SteadyAmplitudes> {
    forward_solve_with(params, drives, &ForwardOptions::default())
}

pub fn forward_solve_with(
    params: &SystemParams,
    drives: &DriveConfig,
    options: &ForwardOptions,
) -> Result<SteadyAmplitudes> {
    params.validate()?;
    if !drives.is_finite() {
        return Err(Error::invalid("drives", "must be finite"));
    }
    if drives.eps_a == ZERO && drives.eps_plus == ZERO && drives.eps_minus == ZERO {
        return Ok(SteadyAmplitudes::zeros());
    }
    let tol = options.tolerance;
    let cap = options.max_iterations;
    let eqs_at = |s: f64| Equations {
        params,
        drives,
        g: s * params.g,
        k: s * params.k_kerr,
    };

    if let Some(guess) = options.initial_guess {
        let out = newton(&eqs_at(1.0), guess.to_array(), cap, tol);
        return if out.converged {
            Ok(SteadyAmplitudes::from_array(out.z))
        } else {
            Err(Error::NoConvergence {
                iterations: out.iterations,
                residual: out.residual,
            })
        };
    }

    // Decoupled start, exact up to rounding.
    let base = eqs_at(0.0);
    let id = I * drives.delta_d;
    let decoupled = [
        drives.eps_a / base.alpha_a(),
        drives.eps_plus / (base.alpha_b() - id),
        drives.eps_minus / (base.alpha_b() + id),
        ZERO,
        ZERO,
    ];
    let first = newton(&base, decoupled, cap, tol);
    if !first.converged {
        return Err(Error::NoConvergence {
            iterations: first.iterations,
            residual: first.residual,
        });
    }

    // Continuation in s with a secant predictor. Steps that need many Newton
    // iterations are refused so the path cannot hop to a distant branch.
    const STEP_ITERATIONS: usize = 25;
    let mut s: f64 = 0.0;
    let mut z = first.z;
    let mut prev: Option<(f64, [Complex64; 5])> = None;
    let mut ds: f64 = 0.05;
    let mut total = first.iterations;
    while s < 1.0 {
        let s_next = (s + ds).min(1.0);
        let mut guess = z;
        if let Some((sp, zp)) = prev {
            let f = (s_next - s) / (s - sp);
            for j in 0..5 {
                guess[j] = z[j] + (z[j] - zp[j]) * f;
            }
        }
        let out = newton(&eqs_at(s_next), guess, STEP_ITERATIONS.min(cap), tol);
        total += out.iterations;
        if out.converged {
            prev = Some((s, z));
            s = s_next;
            z = out.z;
            if out.iterations <= 6 {
                ds = (ds * 2.0).min(0.5);
            }
        } else {
            ds *= 0.25;
            if ds < 1e-9 || total > 50 * cap {
                return Err(Error::NoConvergence {
                    iterations: total,
                    residual: out.residual,
                });
            }
        }
    }
    Ok(SteadyAmplitudes::from_array(z))
}

/// Residuals of the five amplitude equations, each divided by its own term
/// magnitude; returns the largest.
pub fn relative_residual(params: &SystemParams, drives: &DriveConfig, amps: &SteadyAmplitudes) -> f64 {
    let eqs = Equations {
        params,
        drives,
        g: params.g,
        k: params.k_kerr,
    };
    let (r, s) = eqs.evaluate(&amps.to_array());
    scaled_residual(&r, &s)
}

/// Raw residuals (rad/s · amplitude) of the five amplitude equations in the
/// order cavity, B₊, B₋, C₊, C₋.
pub fn residuals(params: &SystemParams, drives: &DriveConfig, amps: &SteadyAmplitudes) -> [Complex64; 5] {
    let eqs = Equations {
        params,
        drives,
        g: params.g,
        k: params.k_kerr,
    };
    eqs.evaluate(&amps.to_array()).0
}

/// Fluctuation parameters generated by a set of amplitudes.
///
/// A phase α on A₀ is absorbed by rotating δb → δb e^{iα}, which shifts the
/// squeezing phase to θ − 2α; the returned G is g|A₀|.
pub fn linearized_params(amps: &SteadyAmplitudes, params: &SystemParams, delta_b: f64) -> LinearizedParams {
    let alpha = if amps.a0 == ZERO { 0.0 } else { amps.a0.arg() };
    let sq = params.k_kerr * amps.b_plus * amps.b_minus;
    let theta = if sq == ZERO { 0.0 } else { wrap_angle(sq.arg() - 2.0 * alpha) };
    LinearizedParams {
        big_g: params.g * amps.a0.norm(),
        lambda: sq.norm(),
        theta,
        delta_b_prime: delta_b + params.k_kerr * (amps.b_plus.norm_sqr() + amps.b_minus.norm_sqr()),
    }
}

/// Powers needed for given drive amplitudes: P = |ℰ|² ħω/κ.
pub fn drive_powers(params: &SystemParams, drives: &DriveConfig) -> Result<DrivePowers> {
    if !(params.kappa_a > 0.0) {
        return Err(Error::invalid("kappa_a", "must be positive to convert a cavity drive to power"));
    }
    Ok(DrivePowers {
        p_a: drives.eps_a.norm_sqr() * HBAR * params.omega_a / params.kappa_a,
        p_plus: drives.eps_plus.norm_sqr() * HBAR * params.omega_b / params.kappa_b,
        p_minus: drives.eps_minus.norm_sqr() * HBAR * params.omega_b / params.kappa_b,
    })
}

/// Amplitudes and drives that realize a target (G, λ, θ, Δ'_b).
///
/// B₋ = √(λ/|k|) real and B₊ = λe^{iθ}/(k B₋), which for θ = −π/2 and k < 0
/// is B₊ = i√(λ/|k|). A₀ = G/g is real. Each C± then follows from its own
/// equation, and the drives by substitution.
pub fn inverse_design(
    params: &SystemParams,
    target: &LinearizedParams,
    delta_d: f64,
    delta_a: f64,
) -> Result<(SteadyAmplitudes, DriveDesign)> {
    params.validate()?;
    if params.k_kerr == 0.0 {
        return Err(Error::NoSqueezing);
    }
    if params.g == 0.0 {
        return Err(Error::NoCoupling);
    }
    let t = target;
    for (name, v) in [
        ("big_g", t.big_g),
        ("lambda", t.lambda),
        ("theta", t.theta),
        ("delta_b_prime", t.delta_b_prime),
        ("delta_d", delta_d),
        ("delta_a", delta_a),
    ] {
        if !v.is_finite() {
            return Err(Error::invalid(name, "must be finite"));
        }
    }
    if t.lambda < 0.0 {
        return Err(Error::invalid("lambda", "must be non-negative"));
    }
    if t.big_g < 0.0 {
        return Err(Error::invalid("big_g", "must be non-negative"));
    }

    let k = params.k_kerr;
    let g = params.g;
    let (b_minus, b_plus) = if t.lambda > 0.0 {
        let bm = Complex64::new((t.lambda / k.abs()).sqrt(), 0.0);
        (bm, Complex64::from_polar(t.lambda, t.theta) / (k * bm))
    } else {
        (ZERO, ZERO)
    };
    let a0 = Complex64::new(t.big_g / g, 0.0);
    let delta_b = t.delta_b_prime - k * (b_plus.norm_sqr() + b_minus.norm_sqr());

    let kc2 = params.kappa_c / 2.0;
    let wc = params.omega_c;
    let c_amp = |sigma: f64, b: Complex64, bo: Complex64, name: &'static str| -> Result<Complex64> {
        let den = Complex64::new(kc2, wc - sigma * delta_d);
        if den.norm() <= 1e-14 * (wc + delta_d.abs()) {
            return Err(Error::SingularResponse { component: name });
        }
        Ok(-I * g * (a0.conj() * b + a0 * bo.conj()) / den)
    };
    let c_plus = c_amp(1.0, b_plus, b_minus, "C+")?;
    let c_minus = c_amp(-1.0, b_minus, b_plus, "C-")?;

    let amps = SteadyAmplitudes {
        a0,
        b_plus,
        b_minus,
        c_plus,
        c_minus,
    };

    let alpha_a = Complex64::new(params.kappa_a / 2.0, delta_a);
    let alpha_b = Complex64::new(params.kappa_b / 2.0, delta_b);
    let id = I * delta_d;
    let eps_b = |sigma: f64, b: Complex64, bo: Complex64, c: Complex64, co: Complex64| {
        (alpha_b - sigma * id) * b
            + I * g * a0 * (c + co.conj())
            + 0.5 * I * k * b * (b.norm_sqr() + 2.0 * bo.norm_sqr())
    };
    let drives = DriveConfig {
        eps_a: alpha_a * a0
            + I * g * (b_minus * (c_plus + c_minus.conj()) + b_plus * (c_minus + c_plus.conj())),
        eps_plus: eps_b(1.0, b_plus, b_minus, c_plus, c_minus),
        eps_minus: eps_b(-1.0, b_minus, b_plus, c_minus, c_plus),
        delta_a,
        delta_b,
        delta_d,
    };

    let residual = relative_residual(params, &drives, &amps);
    if !(residual <= DESIGN_RESIDUAL_TOL) {
        return Err(Error::NoConvergence {
            iterations: 0,
            residual,
        });
    }
    let powers = drive_powers(params, &drives)?;
    Ok((
        amps,
        DriveDesign {
            amplitudes: drives,
            powers,
            residual,
        },
    ))
}
