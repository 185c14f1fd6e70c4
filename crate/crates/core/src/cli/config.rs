//! JSON run configurations, one shape per command.
//!
//! Every config carries `schema_version` (currently 1) and rejects unknown
//! fields. Relative paths inside a config resolve against its directory.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::analysis::{BoundsMethod, Grid, PhaseConvention};
use crate::error::{Error, Result};
use crate::funcmodel::Domain;
use crate::systems::{GeneratorDescriptor, IndexRange, SystemSpecJson};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorsConfig {
    pub schema_version: u32,
    pub system: SystemSpecJson,
    pub grid: Grid,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    pub schema_version: u32,
    pub system: SystemSpecJson,
    pub grid_realline: Grid,
    #[serde(default)]
    pub grid_halfline: Option<Grid>,
    #[serde(default = "default_tol_pointwise")]
    pub tol_pointwise: f64,
    #[serde(default = "default_tol_gram")]
    pub tol_gram: f64,
    /// `dropped` reproduces the uncorrected comparison, for negative checks.
    #[serde(default = "default_convention")]
    pub phase_convention: PhaseConvention,
}

fn default_convention() -> PhaseConvention {
    PhaseConvention::Unimodular
}

fn default_tol_pointwise() -> f64 {
    1e-9
}

fn default_tol_gram() -> f64 {
    1e-8
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameBoundsConfig {
    pub schema_version: u32,
    pub system: SystemSpecJson,
    pub grid: Grid,
    pub test_margin: f64,
    #[serde(default = "default_method")]
    pub method: BoundsMethod,
}

fn default_method() -> BoundsMethod {
    BoundsMethod::FrameOperatorEigs
}

/// A function given on either side of the warp.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SidedFunction {
    pub domain: Domain,
    pub generator: GeneratorDescriptor,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityScanConfig {
    pub schema_version: u32,
    pub b: f64,
    pub pairs: Vec<(u32, u32)>,
    pub generators: Vec<GeneratorDescriptor>,
    pub j_range: IndexRange,
    pub m_range: IndexRange,
    pub grid: Grid,
    pub test_margin: f64,
    pub probe: SidedFunction,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UncertaintyFunction {
    pub label: String,
    pub domain: Domain,
    pub generator: GeneratorDescriptor,
    /// Warp base for half-line functions.
    #[serde(default)]
    pub b: Option<f64>,
    #[serde(default)]
    pub u: f64,
    #[serde(default)]
    pub eta: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UncertaintyConfig {
    pub schema_version: u32,
    pub lo: f64,
    pub hi: f64,
    pub sizes: Vec<usize>,
    pub functions: Vec<UncertaintyFunction>,
}

/// A parsed config and the directory its relative paths resolve against.
pub struct Loaded<T> {
    pub config: T,
    pub base_dir: PathBuf,
}

pub trait Versioned {
    fn schema_version(&self) -> u32;
}

macro_rules! versioned {
    ($($t:ty),*) => {
        $(impl Versioned for $t {
            fn schema_version(&self) -> u32 {
                self.schema_version
            }
        })*
    };
}

versioned!(
    GeneratorsConfig,
    VerifyConfig,
    FrameBoundsConfig,
    DensityScanConfig,
    UncertaintyConfig
);

pub fn load<T: DeserializeOwned + Versioned>(path: &Path) -> Result<Loaded<T>> {
    let text = fs::read_to_string(path)?;
    let config: T = serde_json::from_str(&text)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    if config.schema_version() != SCHEMA_VERSION {
        return Err(Error::Config(format!(
            "{}: schema_version {} is not supported (expected {SCHEMA_VERSION})",
            path.display(),
            config.schema_version()
        )));
    }
    let base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok(Loaded { config, base_dir })
}
