//! Experiment drivers behind the `wicklab` binary.
//!
//! Each command reads an optional TOML or JSON config, applies flag overrides,
//! runs its checks and writes plot-ready files. Every file carries the tool
//! version, the effective config, the conventions block and the seed, and
//! nothing time-dependent, so identical configs give byte-identical output.

mod chaos;
mod cosmo;
mod format;
mod oracle;
mod quantize;
mod transform;

pub use chaos::{cmd_chaos, ChaosConfig};
pub use cosmo::{cmd_cosmo, CosmoConfig, LambdaGrid, Preset};
pub use format::format_poly;
pub use oracle::{cmd_oracle, OracleConfig};
pub use quantize::{cmd_quantize_check, QuantizeConfig};
pub use transform::{cmd_transform_check, NullShift, TransformConfig};

use crate::cosmo::WEIGHT_CONVENTION;
use crate::error::{Error, Result};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Flag values that override config entries.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub cutoff: Option<usize>,
    pub seed: Option<u64>,
    pub exact: bool,
    pub workers: Option<usize>,
    pub mc: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Conventions {
    /// `E[φ_a φ_b] = C_ab` for the covariance `C` given in a config.
    pub covariance_scale: String,
    pub delta_weight: String,
    pub ccr: String,
}

impl Default for Conventions {
    fn default() -> Self {
        Conventions {
            covariance_scale: "one: E[phi_a phi_b] = C_ab".into(),
            delta_weight: WEIGHT_CONVENTION.into(),
            ccr: "[phi, pi] = -i".into(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Meta {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: Option<u64>,
    pub config: serde_json::Value,
    pub conventions: Conventions,
}

impl Meta {
    pub fn new<C: Serialize>(command: &str, seed: Option<u64>, config: &C) -> Result<Self> {
        Ok(Meta {
            tool: "wicklab".into(),
            version: VERSION.into(),
            command: command.into(),
            seed,
            config: serde_json::to_value(config)?,
            conventions: Conventions::default(),
        })
    }

    /// `(key, value)` pairs for `#`-prefixed CSV headers.
    pub fn header_lines(&self) -> Vec<(String, String)> {
        vec![
            ("tool".into(), format!("{} {}", self.tool, self.version)),
            ("command".into(), self.command.clone()),
            ("seed".into(), self.seed.map_or("none".into(), |s| s.to_string())),
            ("config".into(), self.config.to_string()),
            ("covariance-scale".into(), self.conventions.covariance_scale.clone()),
            ("ccr".into(), self.conventions.ccr.clone()),
        ]
    }
}

#[derive(Serialize)]
struct Document<'a, T: Serialize> {
    meta: &'a Meta,
    result: &'a T,
}

/// Result of one command: files written and whether every check passed.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub pass: bool,
    pub summary: Vec<String>,
}

impl Outcome {
    /// `0` success, `1` numerical-acceptance failure.
    pub fn exit_code(&self) -> u8 {
        if self.pass {
            0
        } else {
            1
        }
    }
}

/// `2` for configuration problems, `1` for everything that failed numerically.
pub fn error_exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::Constraint(_) | Error::OracleScope(_) | Error::Unsupported(_) => 2,
        _ => 1,
    }
}

/// Parses a config file, TOML unless the extension is `.json`. A missing path
/// gives the command's defaults.
pub fn load_config<C: DeserializeOwned + Default>(path: Option<&Path>) -> Result<C> {
    let Some(path) = path else {
        return Ok(C::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text, path.extension().is_some_and(|e| e == "json"))
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

pub fn parse_config<C: DeserializeOwned>(text: &str, json: bool) -> std::result::Result<C, String> {
    if json {
        serde_json::from_str(text).map_err(|e| e.to_string())
    } else {
        toml::from_str(text).map_err(|e| e.to_string())
    }
}

pub(crate) struct OutDir(PathBuf);

impl OutDir {
    pub(crate) fn create(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(OutDir(dir.to_path_buf()))
    }

    pub(crate) fn path(&self, name: &str) -> PathBuf {
        self.0.join(name)
    }

    pub(crate) fn write_json<T: Serialize>(&self, name: &str, meta: &Meta, result: &T) -> Result<PathBuf> {
        let path = self.path(name);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)?;
        }
        let mut text = serde_json::to_string_pretty(&Document { meta, result })?;
        text.push('\n');
        std::fs::write(&path, text)?;
        Ok(path)
    }
}

pub(crate) fn matrix_from_rows(name: &str, rows: &[Vec<f64>]) -> Result<nalgebra::DMatrix<f64>> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Config(format!("`{name}` must be a non-empty square matrix")));
    }
    Ok(nalgebra::DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

pub(crate) fn check_line(label: &str, value: f64, tol: f64) -> (bool, String) {
    let ok = value < tol;
    (ok, format!("{} {label}: {value:.3e} (tol {tol:.0e})", if ok { "pass" } else { "FAIL" }))
}
