//! Second-moment dynamics of the coupled magnon (Bogoliubov) and mechanical
//! modes.
//!
//! The ten real slots of [`MomentState`] are, in order:
//!
//! | slot | moment        |
//! |------|---------------|
//! | 0    | ⟨β†β⟩         |
//! | 1    | ⟨c†c⟩         |
//! | 2, 3 | Re, Im ⟨βc⟩   |
//! | 4, 5 | Re, Im ⟨βc†⟩  |
//! | 6, 7 | Re, Im ⟨ββ⟩   |
//! | 8, 9 | Re, Im ⟨cc⟩   |
//!
//! The same layout is used for the original frame with β replaced by b.

use nalgebra::{SMatrix, SVector};
use num_complex::Complex64;

use crate::bogoliubov::BogoliubovFrame;
use crate::constants::SystemParams;
use crate::design::LinearizedParams;
use crate::error::{Error, Result};

pub type Mat10 = SMatrix<f64, 10, 10>;
pub type Vec10 = SVector<f64, 10>;

/// RK4 is stable for spectral radius · dt below ~2.78 on the real axis and
/// 2√2 on the imaginary axis.
pub const RK4_STABILITY_LIMIT: f64 = 2.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentState(pub [f64; 10]);

impl MomentState {
    pub fn zeros() -> Self {
        MomentState([0.0; 10])
    }

    pub fn from_vector(v: &Vec10) -> Self {
        let mut s = [0.0; 10];
        s.copy_from_slice(v.as_slice());
        MomentState(s)
    }

    pub fn to_vector(&self) -> Vec10 {
        Vec10::from_column_slice(&self.0)
    }

    /// ⟨β†β⟩
    pub fn n_beta(&self) -> f64 {
        self.0[0]
    }

    /// ⟨c†c⟩, the mean phonon number.
    pub fn n_c(&self) -> f64 {
        self.0[1]
    }

    pub fn beta_c(&self) -> Complex64 {
        Complex64::new(self.0[2], self.0[3])
    }

    pub fn beta_cdag(&self) -> Complex64 {
        Complex64::new(self.0[4], self.0[5])
    }

    pub fn beta_beta(&self) -> Complex64 {
        Complex64::new(self.0[6], self.0[7])
    }

    pub fn cc(&self) -> Complex64 {
        Complex64::new(self.0[8], self.0[9])
    }

    pub fn from_moments(
        n_beta: f64,
        n_c: f64,
        beta_c: Complex64,
        beta_cdag: Complex64,
        beta_beta: Complex64,
        cc: Complex64,
    ) -> Self {
        MomentState([
            n_beta,
            n_c,
            beta_c.re,
            beta_c.im,
            beta_cdag.re,
            beta_cdag.im,
            beta_beta.re,
            beta_beta.im,
            cc.re,
            cc.im,
        ])
    }

    /// Ordered second moments M_ij = ⟨x_i x_j⟩ for x = (β, β†, c, c†).
    pub fn ordered_moments(&self) -> [[Complex64; 4]; 4] {
        let one = Complex64::new(1.0, 0.0);
        let n = Complex64::new(self.n_beta(), 0.0);
        let nc = Complex64::new(self.n_c(), 0.0);
        let (x, y, p, q) = (self.beta_c(), self.beta_cdag(), self.beta_beta(), self.cc());
        [
            [p, n + one, x, y],
            [n, p.conj(), y.conj(), x.conj()],
            [x, y.conj(), q, nc + one],
            [y, x.conj(), nc, q.conj()],
        ]
    }

    /// Normal-ordered correlation matrix K_ij = ⟨x_i† x_j⟩ for
    /// x = (β, β†, c, c†). It is Hermitian and must be positive
    /// semidefinite for any physical state.
    pub fn correlation_matrix(&self) -> [[Complex64; 4]; 4] {
        let one = Complex64::new(1.0, 0.0);
        let n = Complex64::new(self.n_beta(), 0.0);
        let nc = Complex64::new(self.n_c(), 0.0);
        let (x, y, p, q) = (self.beta_c(), self.beta_cdag(), self.beta_beta(), self.cc());
        [
            [n, p.conj(), y.conj(), x.conj()],
            [p, n + one, x, y],
            [y, x.conj(), nc, q.conj()],
            [x, y.conj(), q, nc + one],
        ]
    }

    /// Smallest eigenvalue of the correlation matrix together with the
    /// verdict. Tolerance is relative to the matrix trace.
    pub fn physicality(&self) -> Physicality {
        let k = self.correlation_matrix();
        // Real symmetric embedding [[Re, −Im], [Im, Re]] has the same
        // spectrum, each eigenvalue twice.
        let mut emb = SMatrix::<f64, 8, 8>::zeros();
        for i in 0..4 {
            for j in 0..4 {
                emb[(i, j)] = k[i][j].re;
                emb[(i + 4, j + 4)] = k[i][j].re;
                emb[(i, j + 4)] = -k[i][j].im;
                emb[(i + 4, j)] = k[i][j].im;
            }
        }
        let min_eigenvalue = emb.symmetric_eigenvalues().min();
        let trace: f64 = (0..4).map(|i| k[i][i].re.abs()).sum();
        let physical = min_eigenvalue.is_finite() && min_eigenvalue >= -1e-9 * trace.max(1.0);
        Physicality {
            min_eigenvalue,
            physical,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Physicality {
    pub min_eigenvalue: f64,
    pub physical: bool,
}

/// Affine moment dynamics ẋ = D x + p.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    pub drift: Mat10,
    pub pump: Vec10,
}

impl LinearSystem {
    pub fn rhs(&self, x: &Vec10) -> Vec10 {
        self.drift * x + self.pump
    }

    pub fn eigenvalues(&self) -> Vec<Complex64> {
        self.drift.complex_eigenvalues().iter().copied().collect()
    }

    /// Eigenvalue with the largest real part.
    pub fn slowest_eigenvalue(&self) -> Complex64 {
        self.eigenvalues()
            .into_iter()
            .max_by(|a, b| a.re.total_cmp(&b.re))
            .expect("10x10 matrix has eigenvalues")
    }

    pub fn is_stable(&self) -> bool {
        self.slowest_eigenvalue().re < 0.0
    }
}

/// Linear quantum Langevin model for two bosonic modes in the basis
/// (a₁, a₁†, a₂, a₂†): ẋ = A x + noise, with the noise correlation rates
/// N_ij entering d⟨x_i x_j⟩/dt.
#[derive(Debug, Clone, PartialEq)]
pub struct LangevinModel {
    pub drift: [[Complex64; 4]; 4],
    pub noise: [[Complex64; 4]; 4],
}

impl LangevinModel {
    /// Two modes with frequencies, decay rates, bath occupations, a
    /// position-position coupling and an optional squeezing term on mode 1
    /// (ȧ₁ ∋ −i s a₁†) and squeezed-bath correlation (⟨a₁,in a₁,in⟩ = m_in).
    #[allow(clippy::too_many_arguments)]
    pub fn two_mode(
        omega1: f64,
        kappa1: f64,
        n1: f64,
        omega2: f64,
        kappa2: f64,
        n2: f64,
        coupling: f64,
        squeeze: Complex64,
        bath_m: Complex64,
    ) -> Self {
        let i = Complex64::i();
        let z = Complex64::new(0.0, 0.0);
        let row1 = [
            -(i * omega1 + kappa1 / 2.0),
            -i * squeeze,
            -i * coupling,
            -i * coupling,
        ];
        let row3 = [-i * coupling, -i * coupling, -(i * omega2 + kappa2 / 2.0), z];
        let swap = [1, 0, 3, 2];
        let conj_row = |row: &[Complex64; 4]| {
            let mut out = [z; 4];
            for k in 0..4 {
                out[k] = row[swap[k]].conj();
            }
            out
        };
        let drift = [row1, conj_row(&row1), row3, conj_row(&row3)];

        let mut noise = [[z; 4]; 4];
        noise[0][1] = Complex64::new(kappa1 * (n1 + 1.0), 0.0);
        noise[1][0] = Complex64::new(kappa1 * n1, 0.0);
        noise[0][0] = kappa1 * bath_m;
        noise[1][1] = kappa1 * bath_m.conj();
        noise[2][3] = Complex64::new(kappa2 * (n2 + 1.0), 0.0);
        noise[3][2] = Complex64::new(kappa2 * n2, 0.0);
        LangevinModel { drift, noise }
    }

    /// dM/dt = A M + M Aᵀ + N, restricted to the ten independent real slots.
    pub fn moment_derivative(&self, state: &MomentState) -> Vec10 {
        let m = state.ordered_moments();
        let a = &self.drift;
        let mut d = self.noise;
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    d[i][j] += a[i][k] * m[k][j] + a[j][k] * m[i][k];
                }
            }
        }
        Vec10::from_column_slice(&[
            d[1][0].re,
            d[3][2].re,
            d[0][2].re,
            d[0][2].im,
            d[0][3].re,
            d[0][3].im,
            d[0][0].re,
            d[0][0].im,
            d[2][2].re,
            d[2][2].im,
        ])
    }

    /// Assemble the affine system column by column; the moment derivative
    /// is affine in the state so this is exact.
    pub fn to_linear_system(&self) -> LinearSystem {
        let pump = self.moment_derivative(&MomentState::zeros());
        let mut drift = Mat10::zeros();
        for k in 0..10 {
            let mut e = MomentState::zeros();
            e.0[k] = 1.0;
            let col = self.moment_derivative(&e) - pump;
            drift.set_column(k, &col);
        }
        LinearSystem { drift, pump }
    }
}

/// Moment equations of the Bogoliubov-frame master equation, encoded slot
/// by slot.
pub fn build_system(frame: &BogoliubovFrame, params: &SystemParams, n_bar_c: f64) -> LinearSystem {
    let kb = params.kappa_b;
    let kc = params.kappa_c;
    let wc = params.omega_c;
    let db = frame.delta_big_b;
    let g = frame.g_cal;
    let m = frame.m_sq;
    let gamma = 0.5 * (kb + kc);
    let sum = db + wc;
    let diff = db - wc;

    const N: usize = 0;
    const NC: usize = 1;
    const XR: usize = 2;
    const XI: usize = 3;
    const YR: usize = 4;
    const YI: usize = 5;
    const PR: usize = 6;
    const PI: usize = 7;
    const QR: usize = 8;
    const QI: usize = 9;

    let mut d = Mat10::zeros();
    let mut p = Vec10::zeros();

    // ⟨β†β⟩
    d[(N, N)] = -kb;
    d[(N, XI)] = -2.0 * g;
    d[(N, YI)] = -2.0 * g;
    p[N] = kb * frame.n_beta;

    // ⟨c†c⟩
    d[(NC, NC)] = -kc;
    d[(NC, XI)] = -2.0 * g;
    d[(NC, YI)] = 2.0 * g;
    p[NC] = kc * n_bar_c;

    // ⟨βc⟩
    d[(XR, XR)] = -gamma;
    d[(XR, XI)] = sum;
    d[(XR, PI)] = g;
    d[(XR, QI)] = g;
    d[(XI, XR)] = -sum;
    d[(XI, XI)] = -gamma;
    d[(XI, PR)] = -g;
    d[(XI, N)] = -g;
    d[(XI, QR)] = -g;
    d[(XI, NC)] = -g;
    p[XI] = -g;

    // ⟨βc†⟩
    d[(YR, YR)] = -gamma;
    d[(YR, YI)] = diff;
    d[(YR, PI)] = -g;
    d[(YR, QI)] = -g;
    d[(YI, YR)] = -diff;
    d[(YI, YI)] = -gamma;
    d[(YI, PR)] = g;
    d[(YI, N)] = g;
    d[(YI, NC)] = -g;
    d[(YI, QR)] = -g;

    // ⟨ββ⟩
    d[(PR, PR)] = -kb;
    d[(PR, PI)] = 2.0 * db;
    d[(PR, XI)] = 2.0 * g;
    d[(PR, YI)] = 2.0 * g;
    d[(PI, PR)] = -2.0 * db;
    d[(PI, PI)] = -kb;
    d[(PI, XR)] = -2.0 * g;
    d[(PI, YR)] = -2.0 * g;
    p[PR] = kb * m.re;
    p[PI] = -kb * m.im;

    // ⟨cc⟩
    d[(QR, QR)] = -kc;
    d[(QR, QI)] = 2.0 * wc;
    d[(QR, XI)] = 2.0 * g;
    d[(QR, YI)] = -2.0 * g;
    d[(QI, QR)] = -2.0 * wc;
    d[(QI, QI)] = -kc;
    d[(QI, XR)] = -2.0 * g;
    d[(QI, YR)] = -2.0 * g;

    LinearSystem { drift: d, pump: p }
}

/// Steady state x* = −D⁻¹p after an explicit Hurwitz check.
pub fn steady_state(system: &LinearSystem) -> Result<MomentState> {
    let slowest = system.slowest_eigenvalue();
    if !(slowest.re < 0.0) {
        return Err(Error::Unstable { eigenvalue: slowest });
    }
    let lu = system.drift.lu();
    let rhs = -system.pump;
    let mut x = lu.solve(&rhs).ok_or(Error::NoSteadyState)?;
    let pump_norm = system.pump.norm();
    let tol = 1e-10 * pump_norm;
    // One step of refinement if elimination left a visible residual.
    let residual = system.rhs(&x);
    if residual.norm() > tol {
        if let Some(dx) = lu.solve(&(-residual)) {
            x += dx;
        }
    }
    if !x.iter().all(|v| v.is_finite()) {
        return Err(Error::NoSteadyState);
    }
    Ok(MomentState::from_vector(&x))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<MomentState>,
}

impl Trajectory {
    pub fn last(&self) -> &MomentState {
        self.states.last().expect("trajectory holds the initial state")
    }
}

/// Fixed-step RK4 from `x0` to `t_end`. The final step is shortened to land
/// on `t_end` exactly.
pub fn integrate(system: &LinearSystem, x0: &MomentState, t_end: f64, dt: f64) -> Result<Trajectory> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::invalid("dt", "must be positive"));
    }
    if !(t_end > 0.0) || !t_end.is_finite() {
        return Err(Error::invalid("t_end", "must be positive"));
    }
    let radius = system
        .eigenvalues()
        .iter()
        .map(|e| e.norm())
        .fold(0.0, f64::max);
    let product = radius * dt;
    if product > RK4_STABILITY_LIMIT {
        return Err(Error::StepSize {
            dt,
            product,
            limit: RK4_STABILITY_LIMIT,
        });
    }

    let steps = (t_end / dt).ceil() as usize;
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    let mut x = x0.to_vector();
    let mut t = 0.0;
    times.push(t);
    states.push(*x0);
    for n in 0..steps {
        let h = if n + 1 == steps { t_end - t } else { dt };
        let k1 = system.rhs(&x);
        let k2 = system.rhs(&(x + k1 * (h / 2.0)));
        let k3 = system.rhs(&(x + k2 * (h / 2.0)));
        let k4 = system.rhs(&(x + k3 * h));
        x += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        t = if n + 1 == steps { t_end } else { t + h };
        times.push(t);
        states.push(MomentState::from_vector(&x));
    }
    Ok(Trajectory { times, states })
}

/// Moment system built straight from the linearized Hamiltonian with plain
/// thermal dissipators on b and c, without the Bogoliubov transformation.
pub fn original_frame_system(
    lin: &LinearizedParams,
    params: &SystemParams,
    n_bar_b: f64,
    n_bar_c: f64,
) -> LinearSystem {
    LangevinModel::two_mode(
        lin.delta_b_prime,
        params.kappa_b,
        n_bar_b,
        params.omega_c,
        params.kappa_c,
        n_bar_c,
        lin.big_g,
        Complex64::from_polar(lin.lambda, lin.theta),
        Complex64::new(0.0, 0.0),
    )
    .to_linear_system()
}

/// Steady mean phonon number computed in the original frame.
pub fn original_frame_steady(
    lin: &LinearizedParams,
    params: &SystemParams,
    n_bar_b: f64,
    n_bar_c: f64,
) -> Result<f64> {
    let system = original_frame_system(lin, params, n_bar_b, n_bar_c);
    Ok(steady_state(&system)?.n_c())
}
