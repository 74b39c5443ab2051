use std::fmt::Write as _;
use std::path::Path;

use kerr_cooling::design::{
    forward_solve, forward_solve_with, inverse_design, linearized_params, relative_residual, ForwardOptions,
};
use kerr_cooling::point::{Coupling, Detuning, OperatingPoint, PointReport};
use kerr_cooling::{Error, SteadyAmplitudes};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::json;
use thiserror::Error;

use crate::config::{ConfigError, ConfigFile, Mode, SweepGrid, SweepVariable};

pub const CSV_HEADER: &str = "x, nc_squeezed_approx, nc_squeezed_exact, nc_no_squeeze_exact, stable, valid";

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("solver error: {0}")]
    Solver(#[from] Error),
    #[error("cannot write {path}: {source}")]
    Output {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Solver(Error::InvalidParameter { .. }) => 1,
            CliError::Solver(_) => 2,
            _ => 1,
        }
    }
}

fn signed(v: f64) -> String {
    let s = format_value(v);
    if s.starts_with('-') {
        s
    } else {
        format!("+{s}")
    }
}

/// Twelve significant digits; `nan` for missing values.
pub fn format_value(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v:.11e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub x: f64,
    pub approx: f64,
    pub exact: f64,
    pub no_squeeze: f64,
    pub stable: bool,
    pub valid: bool,
}

impl ResultRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{}, {}, {}, {}, {}, {}",
            format_value(self.x),
            format_value(self.approx),
            format_value(self.exact),
            format_value(self.no_squeeze),
            self.stable,
            self.valid
        )
    }
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Output {
            path: path.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn point_at(template: &OperatingPoint, variable: SweepVariable, x: f64) -> OperatingPoint {
    let mut pt = *template;
    match variable {
        SweepVariable::KappaB => pt.params.kappa_b = x,
        SweepVariable::GCal => {
            pt.coupling = match pt.coupling {
                Coupling::Cal(_) => Coupling::Cal(x),
                Coupling::Bare(_) => Coupling::Bare(x),
            }
        }
        SweepVariable::DeltaBigB => pt.detuning = Detuning::Bogoliubov(x),
        SweepVariable::Temperature => pt.params.temperature = x,
    }
    pt
}

/// Swept value as written to the CSV: rates in units of ω_c, temperature in K.
fn display_x(variable: SweepVariable, x: f64, omega_c: f64) -> f64 {
    match variable {
        SweepVariable::Temperature => x,
        _ => x / omega_c,
    }
}

pub fn row_for(template: &OperatingPoint, grid: &SweepGrid, x: f64) -> ResultRow {
    let pt = point_at(template, grid.variable, x);
    let shown = display_x(grid.variable, x, template.params.omega_c);
    let wants = |m: Mode| grid.modes.contains(&m);
    match pt.evaluate() {
        Ok(rep) => {
            let exact_ok = !wants(Mode::SqueezedExact) || rep.squeezed.is_ok();
            let ns_ok = !wants(Mode::NoSqueezeExact) || rep.no_squeeze_exact.is_ok();
            ResultRow {
                x: shown,
                approx: if wants(Mode::SqueezedApprox) { rep.n_c_approx() } else { f64::NAN },
                exact: if wants(Mode::SqueezedExact) { rep.n_c_exact() } else { f64::NAN },
                no_squeeze: if wants(Mode::NoSqueezeExact) { rep.n_c_no_squeeze() } else { f64::NAN },
                stable: exact_ok && ns_ok,
                valid: rep.approx.valid,
            }
        }
        Err(_) => ResultRow {
            x: shown,
            approx: f64::NAN,
            exact: f64::NAN,
            no_squeeze: f64::NAN,
            stable: false,
            valid: false,
        },
    }
}

pub fn sweep_rows(config: &ConfigFile, workers: usize) -> Result<Vec<ResultRow>, CliError> {
    let system = config.system.resolve()?;
    let drive = config.drive.as_ref().ok_or(ConfigError::MissingSection("drive"))?;
    let sweep = config.sweep.as_ref().ok_or(ConfigError::MissingSection("sweep"))?;
    let template = drive.operating_point(&system.params)?;
    let grid = sweep.grid(system.params.omega_c)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Runtime(format!("cannot start worker pool: {e}")))?;
    // Indexed parallel iteration keeps grid order.
    Ok(pool.install(|| grid.values.par_iter().map(|&x| row_for(&template, &grid, x)).collect()))
}

pub fn cmd_sweep(config: &ConfigFile, out: Option<&Path>, workers: usize) -> Result<(), CliError> {
    let rows = sweep_rows(config, workers)?;
    let mut text = String::from(CSV_HEADER);
    text.push('\n');
    for row in &rows {
        text.push_str(&row.to_csv());
        text.push('\n');
    }
    write_output(out, &text)
}

fn solve_report(pt: &OperatingPoint, rep: &PointReport) -> String {
    let wc = pt.params.omega_c;
    let f = &rep.frame;
    let mut s = String::new();
    let _ = writeln!(s, "# operating point (rates in units of omega_c = {} rad/s)", format_value(wc));
    let _ = writeln!(s, "kappa_b = {}", format_value(pt.params.kappa_b / wc));
    let _ = writeln!(s, "G = {}", format_value(rep.linearized.big_g / wc));
    let _ = writeln!(s, "lambda = {}", format_value(rep.linearized.lambda / wc));
    let _ = writeln!(s, "theta = {}", format_value(rep.linearized.theta));
    let _ = writeln!(s, "delta_b_prime = {}", format_value(rep.linearized.delta_b_prime / wc));
    let _ = writeln!(s, "n_bar_b = {}", format_value(rep.n_bar_b));
    let _ = writeln!(s, "n_bar_c = {}", format_value(rep.n_bar_c));
    let _ = writeln!(s, "# Bogoliubov frame");
    let _ = writeln!(s, "r = {}", format_value(f.r));
    let _ = writeln!(s, "phi = {}", format_value(f.phi));
    let _ = writeln!(s, "mu = {}", format_value(f.mu));
    let _ = writeln!(s, "delta_big_b = {}", format_value(f.delta_big_b / wc));
    let _ = writeln!(s, "g_cal = {}", format_value(f.g_cal / wc));
    let _ = writeln!(s, "n_beta = {}", format_value(f.n_beta));
    let _ = writeln!(s, "abs_m = {}", format_value(f.m_sq.norm()));
    let _ = writeln!(s, "# occupancy");
    let _ = writeln!(s, "nc_squeezed_exact = {}", format_value(rep.n_c_exact()));
    let _ = writeln!(s, "nc_squeezed_approx = {}", format_value(rep.n_c_approx()));
    let t = &rep.approx.three_term;
    let _ = writeln!(s, "nc_three_term = {}", format_value(t.total()));
    let _ = writeln!(s, "nc_three_term_thermal = {}", format_value(t.thermal));
    let _ = writeln!(s, "nc_three_term_nc0 = {}", format_value(t.n_c0));
    let _ = writeln!(s, "nc_three_term_correction = {}", format_value(t.correction));
    let _ = writeln!(s, "nc_no_squeeze_exact = {}", format_value(rep.n_c_no_squeeze()));
    let _ = writeln!(s, "approx_valid = {}", rep.approx.valid);
    let _ = writeln!(s, "stable = {}", rep.stable());
    if let Err(e) = &rep.squeezed {
        let _ = writeln!(s, "squeezed_error = {e}");
    }
    if let Err(e) = &rep.no_squeeze_exact {
        let _ = writeln!(s, "no_squeeze_error = {e}");
    }
    if let Ok(sol) = &rep.squeezed {
        let _ = writeln!(s, "physical = {}", sol.physicality.physical);
        let _ = writeln!(s, "physicality_min_eigenvalue = {}", format_value(sol.physicality.min_eigenvalue));
    }
    match pt.frame_equivalence_residual(rep) {
        Ok(r) => {
            let _ = writeln!(s, "frame_equivalence_residual = {}", format_value(r));
        }
        Err(e) => {
            let _ = writeln!(s, "frame_equivalence_residual = nan ({e})");
        }
    }
    let _ = writeln!(s, "# drift eigenvalues (units of omega_c)");
    let mut eig = rep.eigenvalues.clone();
    eig.sort_by(|a, b| b.re.total_cmp(&a.re).then(a.im.total_cmp(&b.im)));
    for e in eig {
        let _ = writeln!(s, "eigenvalue = {} {}i", format_value(e.re / wc), signed(e.im / wc));
    }
    s
}

pub fn cmd_solve(config: &ConfigFile, out: Option<&Path>) -> Result<(), CliError> {
    let system = config.system.resolve()?;
    let drive = config.drive.as_ref().ok_or(ConfigError::MissingSection("drive"))?;
    let pt = drive.operating_point(&system.params)?;
    let rep = pt.evaluate()?;
    let text = solve_report(&pt, &rep);
    if out.is_some() {
        print!("{text}");
    }
    write_output(out, &text)
}

fn pair(z: Complex64) -> serde_json::Value {
    json!([z.re, z.im])
}

fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        (a - b).abs() / b.abs()
    }
}

pub fn cmd_design(config: &ConfigFile, out: Option<&Path>) -> Result<(), CliError> {
    let system = config.system.resolve()?;
    let p = system.params;
    let drive = config.drive.as_ref().ok_or(ConfigError::MissingSection("drive"))?;
    let pt = drive.operating_point(&p)?;
    let target = pt.linearized()?;
    let delta_d = drive.delta_d(p.omega_c)?;
    let delta_a = drive.delta_a(p.omega_c)?;
    let (amps, design) = inverse_design(&p, &target, delta_d, delta_a)?;

    // Forward check: continue from the decoupled solution first; the design
    // may sit on a different Kerr branch, in which case seed at the design.
    let reproduces = |s: &SteadyAmplitudes| s.max_relative_difference(&amps) <= 1e-8;
    let (solved, branch) = match forward_solve(&p, &design.amplitudes) {
        Ok(s) if reproduces(&s) => (s, "continued from decoupled solution"),
        _ => {
            let opts = ForwardOptions {
                initial_guess: Some(amps),
                ..ForwardOptions::default()
            };
            (forward_solve_with(&p, &design.amplitudes, &opts)?, "seeded at design (continued branch differs)")
        }
    };
    let lin = linearized_params(&solved, &p, design.amplitudes.delta_b);
    let round_trip = rel(lin.big_g, target.big_g)
        .max(rel(lin.lambda, target.lambda))
        .max(if target.lambda > 0.0 { rel(lin.theta, target.theta) } else { 0.0 });
    let forward_residual = relative_residual(&p, &design.amplitudes, &solved);
    let two_pi = 2.0 * std::f64::consts::PI;
    let pw = design.powers;
    let d = design.amplitudes;

    let record = json!({
        "amplitudes": {
            "A0": pair(amps.a0),
            "B_plus": pair(amps.b_plus),
            "B_minus": pair(amps.b_minus),
            "C_plus": pair(amps.c_plus),
            "C_minus": pair(amps.c_minus),
        },
        "residual": design.residual,
        "powers_W": { "P_a": pw.p_a, "P_plus": pw.p_plus, "P_minus": pw.p_minus },
        "drives_rad_per_s": {
            "eps_a": pair(d.eps_a),
            "eps_plus": pair(d.eps_plus),
            "eps_minus": pair(d.eps_minus),
            "delta_a": d.delta_a,
            "delta_b": d.delta_b,
            "delta_d": d.delta_d,
        },
        "target_rad_per_s": {
            "G": target.big_g,
            "lambda": target.lambda,
            "theta": target.theta,
            "delta_b_prime": target.delta_b_prime,
        },
        "verification": {
            "forward_residual": forward_residual,
            "round_trip_relative_error": round_trip,
            "branch": branch,
        },
        "couplings": {
            "g_over_2pi_Hz": p.g / two_pi,
            "k_over_2pi_Hz": p.k_kerr / two_pi,
            "from_geometry": system.couplings_from_geometry,
        },
        "assumptions_rad_per_s": {
            "omega_a": p.omega_a,
            "omega_b": p.omega_b,
            "omega_c": p.omega_c,
            "kappa_a": p.kappa_a,
            "kappa_b": p.kappa_b,
            "kappa_c": p.kappa_c,
        },
    });

    let wc = p.omega_c;
    let mut s = String::new();
    let _ = writeln!(s, "# couplings");
    let _ = writeln!(s, "g/2pi = {} Hz", format_value(p.g / two_pi));
    let _ = writeln!(s, "k/2pi = {} Hz", format_value(p.k_kerr / two_pi));
    let _ = writeln!(s, "# assumed rates (units of omega_c)");
    let _ = writeln!(s, "kappa_a = {}", format_value(p.kappa_a / wc));
    let _ = writeln!(s, "kappa_b = {}", format_value(p.kappa_b / wc));
    let _ = writeln!(s, "kappa_c = {}", format_value(p.kappa_c / wc));
    let _ = writeln!(s, "delta_d = {}", format_value(delta_d / wc));
    let _ = writeln!(s, "delta_a = {}", format_value(delta_a / wc));
    let _ = writeln!(s, "# target (units of omega_c)");
    let _ = writeln!(s, "G = {}", format_value(target.big_g / wc));
    let _ = writeln!(s, "lambda = {}", format_value(target.lambda / wc));
    let _ = writeln!(s, "theta = {}", format_value(target.theta));
    let _ = writeln!(s, "delta_b_prime = {}", format_value(target.delta_b_prime / wc));
    let _ = writeln!(s, "# amplitudes");
    for (name, z) in [
        ("A0", amps.a0),
        ("B_plus", amps.b_plus),
        ("B_minus", amps.b_minus),
        ("C_plus", amps.c_plus),
        ("C_minus", amps.c_minus),
    ] {
        let _ = writeln!(s, "{name} = {} {}i", format_value(z.re), signed(z.im));
    }
    let _ = writeln!(s, "delta_b = {}", format_value(d.delta_b / wc));
    let _ = writeln!(s, "# residuals");
    let _ = writeln!(s, "design_residual = {}", format_value(design.residual));
    let _ = writeln!(s, "forward_residual = {}", format_value(forward_residual));
    let _ = writeln!(s, "round_trip_relative_error = {}", format_value(round_trip));
    let _ = writeln!(s, "forward_branch = {branch}");
    let _ = writeln!(s, "# powers");
    let _ = writeln!(s, "P_a = {} W", format_value(pw.p_a));
    let _ = writeln!(s, "P_plus = {} W", format_value(pw.p_plus));
    let _ = writeln!(s, "P_minus = {} W", format_value(pw.p_minus));
    print!("{s}");

    let json_text = serde_json::to_string_pretty(&record).expect("json values are finite or null") + "\n";
    match out {
        Some(path) => write_output(Some(path), &json_text),
        None => Ok(()),
    }
}
