//! Parameter files.
//!
//! Frequencies and rates accept a number (ordinary frequency in Hz), a
//! string with a unit (`"50 kHz"`, `"30 GHz"`, `"1.2e5 rad/s"`), or a multiple
//! of the mechanical frequency (`"2 wc"`, `"1e-9 wc"`). Hz values are
//! multiplied by 2π on load.

use std::f64::consts::PI;
use std::path::Path;

use kerr_cooling::constants::{kerr_coefficient, tripartite_coupling};
use kerr_cooling::point::{Coupling, Detuning, NoSqueezeDetuning, OperatingPoint, Squeezing};
use kerr_cooling::{GeometryParams, PhysicalConstants, SystemParams};
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: String,
        source: toml::de::Error,
    },
    #[error("field `{field}`: {reason}")]
    Field { field: String, reason: String },
    #[error("missing section [{0}]")]
    MissingSection(&'static str),
}

fn field_error(field: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Field {
        field: field.to_string(),
        reason: reason.into(),
    }
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Quantity {
    Number(f64),
    Text(String),
}

impl Quantity {
    /// Angular frequency in rad/s.
    pub fn angular(&self, field: &str, omega_c: Option<f64>) -> Result<f64, ConfigError> {
        let value = match self {
            Quantity::Number(hz) => 2.0 * PI * hz,
            Quantity::Text(text) => {
                let mut parts = text.split_whitespace();
                let number = parts
                    .next()
                    .ok_or_else(|| field_error(field, "empty value"))?
                    .parse::<f64>()
                    .map_err(|e| field_error(field, format!("`{text}`: {e}")))?;
                let unit = parts.next().unwrap_or("Hz");
                if parts.next().is_some() {
                    return Err(field_error(field, format!("`{text}`: expected `<number> <unit>`")));
                }
                match unit {
                    "Hz" => 2.0 * PI * number,
                    "kHz" => 2.0 * PI * number * 1e3,
                    "MHz" => 2.0 * PI * number * 1e6,
                    "GHz" => 2.0 * PI * number * 1e9,
                    "rad/s" => number,
                    "wc" => {
                        let wc = omega_c.ok_or_else(|| {
                            field_error(field, "`wc` unit is not available for omega_c itself")
                        })?;
                        number * wc
                    }
                    other => {
                        return Err(field_error(
                            field,
                            format!("unknown unit `{other}` (use Hz, kHz, MHz, GHz, rad/s or wc)"),
                        ))
                    }
                }
            }
        };
        if !value.is_finite() {
            return Err(field_error(field, "must be finite"));
        }
        Ok(value)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSection {
    pub omega_a: Option<Quantity>,
    pub omega_b: Quantity,
    pub omega_c: Quantity,
    pub kappa_a: Option<Quantity>,
    pub kappa_b: Quantity,
    pub kappa_c: Quantity,
    /// Kelvin.
    pub temperature: f64,
    pub g: Option<Quantity>,
    pub k_kerr: Option<Quantity>,
    /// m³
    pub cavity_volume: Option<f64>,
    /// m
    pub sphere_radius: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveSection {
    /// Squeezed-frame coupling 𝒢 (or G when `coupling_kind = "bare"`).
    pub coupling: Quantity,
    #[serde(default)]
    pub coupling_kind: CouplingKind,
    pub delta_big_b: Option<Quantity>,
    pub delta_b_prime: Option<Quantity>,
    /// `"optimal"` for κ_b/2, or a rate.
    #[serde(default)]
    pub lambda: Option<Quantity>,
    /// Radians; defaults to −π/2.
    pub theta: Option<f64>,
    #[serde(default)]
    pub no_squeeze_detuning: BaselineKind,
    pub delta_d: Option<Quantity>,
    pub delta_a: Option<Quantity>,
}

#[derive(Debug, Clone, Copy, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum CouplingKind {
    #[default]
    Cal,
    Bare,
}

#[derive(Debug, Clone, Copy, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum BaselineKind {
    #[default]
    Matched,
    Optimal,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    KappaB,
    GCal,
    DeltaBigB,
    Temperature,
}

#[derive(Debug, Clone, Copy, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    SqueezedApprox,
    SqueezedExact,
    NoSqueezeExact,
}

fn all_modes() -> Vec<Mode> {
    vec![Mode::SqueezedApprox, Mode::SqueezedExact, Mode::NoSqueezeExact]
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub variable: SweepVariable,
    /// Rates as quantities; temperature in kelvin as a plain number.
    pub start: Quantity,
    pub stop: Quantity,
    pub points: usize,
    #[serde(default)]
    pub scale: Scale,
    #[serde(default = "all_modes")]
    pub modes: Vec<Mode>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub system: SystemSection,
    pub drive: Option<DriveSection>,
    pub sweep: Option<SweepSection>,
}

pub fn load(path: &Path) -> Result<ConfigFile, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse(&text).map_err(|e| match e {
        ConfigError::Parse { source, .. } => ConfigError::Parse {
            path: path.display().to_string(),
            source,
        },
        other => other,
    })
}

pub fn parse(text: &str) -> Result<ConfigFile, ConfigError> {
    toml::from_str(text).map_err(|source| ConfigError::Parse {
        path: "<config>".into(),
        source,
    })
}

/// Physical inputs resolved to SI and rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolvedSystem {
    pub params: SystemParams,
    pub geometry: Option<GeometryParams>,
    /// Where g and k came from.
    pub couplings_from_geometry: bool,
}

impl SystemSection {
    pub fn resolve(&self) -> Result<ResolvedSystem, ConfigError> {
        let omega_c = self.omega_c.angular("system.omega_c", None)?;
        if !(omega_c > 0.0) {
            return Err(field_error("system.omega_c", "must be positive"));
        }
        let wc = Some(omega_c);
        let omega_b = self.omega_b.angular("system.omega_b", wc)?;
        let omega_a = match &self.omega_a {
            Some(q) => q.angular("system.omega_a", wc)?,
            None => omega_b,
        };
        let kappa_b = self.kappa_b.angular("system.kappa_b", wc)?;
        let kappa_a = match &self.kappa_a {
            Some(q) => q.angular("system.kappa_a", wc)?,
            None => kappa_b,
        };
        let kappa_c = self.kappa_c.angular("system.kappa_c", wc)?;

        let geometry = match (self.cavity_volume, self.sphere_radius) {
            (Some(cavity_volume), Some(sphere_radius)) => Some(GeometryParams {
                cavity_volume,
                sphere_radius,
            }),
            (None, None) => None,
            _ => {
                return Err(field_error(
                    "system.cavity_volume",
                    "cavity_volume and sphere_radius must be given together",
                ))
            }
        };
        let consts = PhysicalConstants::YIG;
        let g = match (&self.g, geometry) {
            (Some(q), _) => q.angular("system.g", wc)?,
            (None, Some(geo)) => tripartite_coupling(&consts, &geo, omega_a, omega_c)
                .map_err(|e| field_error("system.cavity_volume", e.to_string()))?,
            (None, None) => 0.0,
        };
        let k_kerr = match (&self.k_kerr, geometry) {
            (Some(q), _) => q.angular("system.k_kerr", wc)?,
            (None, Some(geo)) => kerr_coefficient(&consts, geo.sphere_radius)
                .map_err(|e| field_error("system.sphere_radius", e.to_string()))?,
            (None, None) => 0.0,
        };
        let params = SystemParams {
            omega_a,
            omega_b,
            omega_c,
            kappa_a,
            kappa_b,
            kappa_c,
            g,
            k_kerr,
            temperature: self.temperature,
        };
        params
            .validate()
            .map_err(|e| field_error("system", e.to_string()))?;
        Ok(ResolvedSystem {
            params,
            geometry,
            couplings_from_geometry: geometry.is_some() && self.g.is_none() && self.k_kerr.is_none(),
        })
    }
}

/// Squeezing strength: a rate or the literal `"optimal"` (κ_b/2).
fn parse_lambda(q: &Option<Quantity>, omega_c: f64) -> Result<Option<f64>, ConfigError> {
    match q {
        None => Ok(None),
        Some(Quantity::Text(t)) if t.trim() == "optimal" => Ok(None),
        Some(q) => q.angular("drive.lambda", Some(omega_c)).map(Some),
    }
}

impl DriveSection {
    pub fn operating_point(&self, params: &SystemParams) -> Result<OperatingPoint, ConfigError> {
        let wc = Some(params.omega_c);
        let value = self.coupling.angular("drive.coupling", wc)?;
        let coupling = match self.coupling_kind {
            CouplingKind::Cal => Coupling::Cal(value),
            CouplingKind::Bare => Coupling::Bare(value),
        };
        let detuning = match (&self.delta_big_b, &self.delta_b_prime) {
            (Some(q), None) => Detuning::Bogoliubov(q.angular("drive.delta_big_b", wc)?),
            (None, Some(q)) => Detuning::Effective(q.angular("drive.delta_b_prime", wc)?),
            _ => {
                return Err(field_error(
                    "drive.delta_big_b",
                    "give exactly one of delta_big_b or delta_b_prime",
                ))
            }
        };
        let squeezing = match (parse_lambda(&self.lambda, params.omega_c)?, self.theta) {
            (None, None) => Squeezing::Optimal,
            (lambda, theta) => Squeezing::Explicit {
                lambda: lambda.unwrap_or(params.kappa_b / 2.0),
                theta: theta.unwrap_or(-PI / 2.0),
            },
        };
        let no_squeeze_detuning = match self.no_squeeze_detuning {
            BaselineKind::Matched => NoSqueezeDetuning::Matched,
            BaselineKind::Optimal => NoSqueezeDetuning::Optimal,
        };
        Ok(OperatingPoint {
            params: *params,
            coupling,
            detuning,
            squeezing,
            no_squeeze_detuning,
        })
    }

    pub fn delta_d(&self, omega_c: f64) -> Result<f64, ConfigError> {
        self.delta_d
            .as_ref()
            .ok_or_else(|| field_error("drive.delta_d", "required for drive design"))?
            .angular("drive.delta_d", Some(omega_c))
    }

    pub fn delta_a(&self, omega_c: f64) -> Result<f64, ConfigError> {
        match &self.delta_a {
            Some(q) => q.angular("drive.delta_a", Some(omega_c)),
            None => Ok(0.0),
        }
    }
}

/// Grid of swept values, in the variable's internal unit.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub variable: SweepVariable,
    pub values: Vec<f64>,
    pub modes: Vec<Mode>,
}

impl SweepSection {
    pub fn grid(&self, omega_c: f64) -> Result<SweepGrid, ConfigError> {
        if self.points < 2 {
            return Err(field_error("sweep.points", "need at least 2 points"));
        }
        let resolve = |q: &Quantity, field: &str| -> Result<f64, ConfigError> {
            match self.variable {
                SweepVariable::Temperature => match q {
                    Quantity::Number(t) => Ok(*t),
                    Quantity::Text(_) => Err(field_error(field, "temperature is a plain number in kelvin")),
                },
                _ => q.angular(field, Some(omega_c)),
            }
        };
        let start = resolve(&self.start, "sweep.start")?;
        let stop = resolve(&self.stop, "sweep.stop")?;
        if start > stop {
            return Err(field_error("sweep.start", "start must not exceed stop"));
        }
        if self.modes.is_empty() {
            return Err(field_error("sweep.modes", "request at least one mode"));
        }
        let n = self.points;
        let values = match self.scale {
            Scale::Linear => (0..n)
                .map(|i| start + (stop - start) * i as f64 / (n - 1) as f64)
                .collect(),
            Scale::Log => {
                if !(start > 0.0) {
                    return Err(field_error("sweep.start", "log scale needs a positive start"));
                }
                let (a, b) = (start.ln(), stop.ln());
                (0..n)
                    .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
                    .collect()
            }
        };
        Ok(SweepGrid {
            variable: self.variable,
            values,
            modes: self.modes.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_PI: f64 = 2.0 * PI;

    #[test]
    fn quantities_convert_to_rad_per_second() {
        let wc = Some(TWO_PI * 50e3);
        let cases = [
            (Quantity::Number(50e3), TWO_PI * 50e3),
            (Quantity::Text("50 kHz".into()), TWO_PI * 50e3),
            (Quantity::Text("30 GHz".into()), TWO_PI * 30e9),
            (Quantity::Text("2 wc".into()), 2.0 * TWO_PI * 50e3),
            (Quantity::Text("1e-9 wc".into()), 1e-9 * TWO_PI * 50e3),
            (Quantity::Text("3 rad/s".into()), 3.0),
            (Quantity::Text("7".into()), TWO_PI * 7.0),
        ];
        for (q, want) in cases {
            let got = q.angular("x", wc).unwrap();
            assert!((got - want).abs() <= 1e-12 * want.abs(), "{q:?}");
        }
    }

    #[test]
    fn bad_units_name_the_field() {
        let err = Quantity::Text("3 parsecs".into()).angular("system.kappa_b", None).unwrap_err();
        assert!(err.to_string().contains("system.kappa_b"));
        assert!(err.to_string().contains("parsecs"));
        let err = Quantity::Text("2 wc".into()).angular("system.omega_c", None).unwrap_err();
        assert!(err.to_string().contains("omega_c"));
    }

    #[test]
    fn unknown_keys_are_rejected_with_location() {
        let text = "[system]\nomega_b = \"30 GHz\"\nomega_c = \"50 kHz\"\nkappa_b = \"2 wc\"\nkappa_c = \"1e-9 wc\"\ntemperature = 0.5\nbogus = 1\n";
        let err = parse(text).unwrap_err().to_string();
        assert!(err.contains("bogus"), "{err}");
        assert!(err.contains("line 7"), "{err}");
    }

    #[test]
    fn log_grid_endpoints() {
        let s = SweepSection {
            variable: SweepVariable::GCal,
            start: Quantity::Text("0.01 wc".into()),
            stop: Quantity::Text("1 wc".into()),
            points: 3,
            scale: Scale::Log,
            modes: all_modes(),
        };
        let g = s.grid(1.0).unwrap();
        assert!((g.values[0] - 0.01).abs() < 1e-15);
        assert!((g.values[1] - 0.1).abs() < 1e-15);
        assert!((g.values[2] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn equal_endpoints_allowed() {
        let s = SweepSection {
            variable: SweepVariable::KappaB,
            start: Quantity::Text("2 wc".into()),
            stop: Quantity::Text("2 wc".into()),
            points: 2,
            scale: Scale::Linear,
            modes: all_modes(),
        };
        assert_eq!(s.grid(1.0).unwrap().values, vec![2.0, 2.0]);
    }
}
