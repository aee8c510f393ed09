//! Job files: one TOML document per job, with a table named after the command.
//!
//! Exact quantities (points, times, matrix entries) are strings such as `"1/2 - 3/4 i"` or
//! `"(z^2 - 1)/z"`; decimal literals are rejected there. Unknown keys are rejected everywhere.

use std::collections::BTreeMap;

use monopair::exact::{parse_point, parse_rational, parse_rf, MeroMatrix, Point, RF};
use num_rational::BigRational;
use serde::Deserialize;

#[derive(Debug, thiserror::Error)]
pub enum UsageError {
    #[error("{path}: {msg}")]
    At { path: String, msg: String },
    #[error("{0}")]
    Plain(String),
}

pub fn at(path: impl Into<String>, msg: impl std::fmt::Display) -> UsageError {
    UsageError::At {
        path: path.into(),
        msg: msg.to_string(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Validate,
    Factorize,
    Stability,
    Dims,
    Spectral,
    Abelian,
    Dirac,
    Report,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Factorize => "factorize",
            Command::Stability => "stability",
            Command::Dims => "dims",
            Command::Spectral => "spectral",
            Command::Abelian => "abelian",
            Command::Dirac => "dirac",
            Command::Report => "report",
        }
    }

    pub fn all() -> [Command; 8] {
        use Command::*;
        [
            Validate, Factorize, Stability, Dims, Spectral, Abelian, Dirac, Report,
        ]
    }

    /// Default numeric tolerances; exact checks carry none.
    pub fn default_tolerances(self) -> &'static [(&'static str, f64)] {
        match self {
            Command::Abelian => &[
                ("staircase", 1e-3),
                ("jump", 1e-3),
                ("near_field", 5.0),
                ("laplacian_order", 1.8),
            ],
            Command::Dirac => &[
                ("chern", 1e-8),
                ("closed_form", 1e-12),
                ("fd_order", 1.8),
                ("scattering", 1e-6),
                ("hopf", 1e-9),
                ("lambda", 1e-12),
            ],
            _ => &[],
        }
    }
}

/// Tolerances that are lower bounds (orders) rather than error bounds; not scaled.
pub const LOWER_BOUNDS: [&str; 2] = ["laplacian_order", "fd_order"];

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Header {
    pub command: Option<String>,
    pub seed: Option<u64>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SingJob {
    pub z: String,
    pub t: String,
    pub weight: Vec<i64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidateJob {
    pub period: String,
    pub k0: i64,
    #[serde(default = "one")]
    pub rank: usize,
    pub c1: Option<i64>,
    #[serde(default)]
    pub singularities: Vec<SingJob>,
}

fn one() -> usize {
    1
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorizeJob {
    pub matrix: Vec<Vec<String>>,
    pub center: String,
    pub expect: Option<Vec<i64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeJob {
    pub z: String,
    pub t: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CyclicJob {
    pub l_degree: i64,
    pub perms: Vec<Vec<usize>>,
    pub singularities: Vec<SingJob>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StabilityJob {
    pub period: String,
    pub degrees: Option<Vec<i64>>,
    pub rho: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub times: Vec<TimeJob>,
    pub cyclic: Option<CyclicJob>,
    pub expect: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolarJob {
    pub z: String,
    pub m: i64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DimsExpect {
    pub complex: Option<i64>,
    pub real: Option<i64>,
    pub index: Option<i64>,
    pub su2_total: Option<i64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DimsJob {
    #[serde(default)]
    pub genus: u32,
    pub rank: usize,
    #[serde(default)]
    pub weights: Vec<Vec<i64>>,
    #[serde(default)]
    pub simple: bool,
    #[serde(default)]
    pub generic: bool,
    pub su2_polar: Option<Vec<PolarJob>>,
    pub expect: Option<DimsExpect>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectralJob {
    pub rho: Option<Vec<Vec<String>>>,
    pub trace: Option<String>,
    pub polar: Option<Vec<PolarJob>>,
    #[serde(default)]
    pub genus: u32,
    pub expect_genus: Option<i64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChargeJob {
    pub t: String,
    pub x: String,
    pub y: String,
    pub k: i64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbelianJob {
    pub period: String,
    pub l1: String,
    pub l2: String,
    pub grid: usize,
    pub modes: usize,
    pub k0: i64,
    pub charges: Vec<ChargeJob>,
    /// `"from-locations"` (default) or `"forced-zero"`.
    pub constant: Option<String>,
    pub times: Option<Vec<String>>,
    #[serde(default = "yes")]
    pub near_field: bool,
    #[serde(default = "yes")]
    pub laplacian: bool,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiracJob {
    pub charges: Vec<i64>,
    #[serde(default)]
    pub radii: Vec<f64>,
    #[serde(default = "psi_nodes")]
    pub psi_nodes: usize,
    #[serde(default = "fd_step")]
    pub fd_step: f64,
    #[serde(default)]
    pub scattering_points: usize,
    #[serde(default)]
    pub hopf_points: usize,
}

fn psi_nodes() -> usize {
    64
}

fn fd_step() -> f64 {
    0.02
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportJob {
    pub jobs: Vec<String>,
}

pub fn rational(path: &str, s: &str) -> Result<BigRational, UsageError> {
    parse_rational(s).map_err(|e| at(path, e))
}

pub fn point(path: &str, s: &str) -> Result<Point, UsageError> {
    parse_point(s).map_err(|e| at(path, e))
}

pub fn rf(path: &str, s: &str) -> Result<RF, UsageError> {
    parse_rf(s).map_err(|e| at(path, e))
}

pub fn matrix(path: &str, rows: &[Vec<String>]) -> Result<MeroMatrix, UsageError> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(at(path, "expected a nonempty square array of expressions"));
    }
    let parsed = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            r.iter()
                .enumerate()
                .map(|(j, s)| rf(&format!("{path}[{i}][{j}]"), s))
                .collect()
        })
        .collect::<Result<Vec<Vec<RF>>, _>>()?;
    MeroMatrix::from_rows(parsed).map_err(|e| at(path, e))
}

/// Deserialize `value` as `T`, reporting the failing path under `prefix`.
pub fn typed<T: serde::de::DeserializeOwned>(
    prefix: &str,
    value: toml::Value,
) -> Result<T, UsageError> {
    T::deserialize(value).map_err(|e| at(prefix, e.message()))
}

/// Header keys plus the one command table; anything else is a schema violation.
pub fn split(doc: toml::Table, command: Command) -> Result<(Header, toml::Value), UsageError> {
    let mut header = toml::Table::new();
    let mut body = None;
    for (k, v) in doc {
        match k.as_str() {
            "command" | "seed" | "tolerances" => {
                header.insert(k, v);
            }
            name if name == command.name() => body = Some(v),
            other => {
                let known = Command::all().iter().any(|c| c.name() == other);
                let msg = if known {
                    format!("table for another command in a {} job", command.name())
                } else {
                    "unknown field".into()
                };
                return Err(at(other, msg));
            }
        }
    }
    let header: Header = typed("header", toml::Value::Table(header))?;
    if let Some(c) = &header.command {
        if c != command.name() {
            return Err(at(
                "command",
                format!("job is for {c:?} but {:?} was requested", command.name()),
            ));
        }
    }
    for key in header.tolerances.keys() {
        if !command.default_tolerances().iter().any(|(n, _)| n == key) {
            return Err(at(
                format!("tolerances.{key}"),
                "unknown tolerance for this command",
            ));
        }
    }
    let body = body.ok_or_else(|| at(command.name(), "missing table"))?;
    Ok((header, body))
}

/// Effective tolerances: defaults, then job overrides, then the global scale on error bounds.
pub fn tolerances(command: Command, header: &Header, scale: f64) -> BTreeMap<&'static str, f64> {
    command
        .default_tolerances()
        .iter()
        .map(|(name, d)| {
            let v = header.tolerances.get(*name).copied().unwrap_or(*d);
            (
                *name,
                if LOWER_BOUNDS.contains(name) {
                    v
                } else {
                    v * scale
                },
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals_are_rejected_in_exact_fields() {
        assert!(rational("t", "0.5").is_err());
        assert_eq!(
            rational("t", "1/2").unwrap(),
            BigRational::new(1.into(), 2.into())
        );
        let e = point("validate.singularities[0].z", "1.5").unwrap_err();
        assert!(e.to_string().starts_with("validate.singularities[0].z: "));
    }

    #[test]
    fn strict_tables() {
        let doc: toml::Table = toml::from_str("seed = 3\n[dims]\nrank = 2\nbogus = 1\n").unwrap();
        let (h, body) = split(doc, Command::Dims).unwrap();
        assert_eq!(h.seed, Some(3));
        assert!(typed::<DimsJob>("dims", body)
            .unwrap_err()
            .to_string()
            .contains("bogus"));
        let doc: toml::Table = toml::from_str("[dims]\nrank = 2\n[abelian]\n").unwrap();
        assert!(split(doc, Command::Dims).is_err());
        let doc: toml::Table =
            toml::from_str("[tolerances]\nchern = 1.0\n[dims]\nrank = 2\n").unwrap();
        assert!(split(doc, Command::Dims).is_err());
    }
}
