use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use plateau_core::solver::{DomainSpec, EpsSchedule};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

fn default_true() -> bool {
    true
}

/// Input of `solve` and `residual`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveConfig {
    pub schema: u32,
    pub domain: DomainSpec,
    pub potential: String,
    pub eps_schedule: EpsSchedule,
    pub h: f64,
    /// Defaults to `1e-8 · area`.
    #[serde(default)]
    pub tol: Option<f64>,
    /// Random initial field when set; zero initial field otherwise.
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default = "default_true")]
    pub deterministic: bool,
}

/// Input of `convergence-study`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub schema: u32,
    pub domain: DomainSpec,
    pub potential: String,
    pub eps_schedule: EpsSchedule,
    pub hs: Vec<f64>,
    #[serde(default)]
    pub tol: Option<f64>,
    #[serde(default)]
    pub delta: Option<f64>,
    #[serde(default = "default_true")]
    pub deterministic: bool,
}

pub trait Versioned {
    fn schema(&self) -> u32;
    fn check(&self) -> Result<(), CliError>;
}

fn check_h(h: f64) -> Result<(), CliError> {
    if h > 0.0 && h.is_finite() {
        Ok(())
    } else {
        Err(CliError::Config(format!("h must be positive, got {h}")))
    }
}

impl Versioned for SolveConfig {
    fn schema(&self) -> u32 {
        self.schema
    }
    fn check(&self) -> Result<(), CliError> {
        check_h(self.h)?;
        self.eps_schedule.validate()?;
        self.domain.validate()?;
        Ok(())
    }
}

impl Versioned for SweepConfig {
    fn schema(&self) -> u32 {
        self.schema
    }
    fn check(&self) -> Result<(), CliError> {
        if self.hs.is_empty() {
            return Err(CliError::Config("hs must list at least one mesh size".to_string()));
        }
        for &h in &self.hs {
            check_h(h)?;
        }
        self.eps_schedule.validate()?;
        self.domain.validate()?;
        Ok(())
    }
}

/// A parsed config together with the bytes it was read from.
pub struct Loaded<T> {
    pub config: T,
    pub path: PathBuf,
    pub bytes: Vec<u8>,
}

impl<T> Loaded<T> {
    /// `run-<16 hex digits of sha256(config bytes)>` next to the config.
    pub fn run_dir(&self) -> PathBuf {
        let digest = Sha256::digest(&self.bytes);
        let hex: String = digest.iter().take(8).map(|b| format!("{b:02x}")).collect();
        let parent = self.path.parent().unwrap_or_else(|| Path::new("."));
        parent.join(format!("run-{hex}"))
    }
}

pub fn load<T: DeserializeOwned + Versioned>(path: &Path) -> Result<Loaded<T>, CliError> {
    let bytes = fs::read(path)
        .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
    let config: T = serde_json::from_slice(&bytes)
        .map_err(|e| CliError::Config(format!("malformed config {}: {e}", path.display())))?;
    if config.schema() != SCHEMA_VERSION {
        return Err(CliError::Config(format!(
            "unsupported schema {} in {} (expected {SCHEMA_VERSION})",
            config.schema(),
            path.display()
        )));
    }
    config.check()?;
    Ok(Loaded {
        config,
        path: path.to_path_buf(),
        bytes,
    })
}
