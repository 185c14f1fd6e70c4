//! JSON form of system specifications.
//!
//! ```json
//! {"kind": "md", "b": 2.0, "p": 1, "q": 2,
//!  "generators": [{"type": "char_interval", "lo": 1.0, "hi": 2.0}],
//!  "j_range": [-4, 4], "m_range": [-4, 4]}
//! ```
//!
//! Gabor systems use `alpha`, `beta` and `k_range` instead of `b`, `p`, `q`
//! and `j_range`. Generators are primitive descriptors or CSV table paths
//! (resolved against the directory of the config file).

use std::fs::File;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{GaborSystemSpec, IndexRange, MdSystemSpec, System};
use crate::error::{Error, Result};
use crate::funcmodel::{Domain, FuncExpr, SampledTable};
use crate::params::make_params;

fn one() -> f64 {
    1.0
}

fn is_one(v: &f64) -> bool {
    *v == 1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeneratorDescriptor {
    Gaussian {
        center: f64,
        width: f64,
        #[serde(default = "one", skip_serializing_if = "is_one")]
        scale: f64,
    },
    CharInterval {
        lo: f64,
        hi: f64,
        #[serde(default = "one", skip_serializing_if = "is_one")]
        scale: f64,
    },
    OneSidedExp {
        rate: f64,
        #[serde(default = "one", skip_serializing_if = "is_one")]
        scale: f64,
    },
    Hat {
        center: f64,
        halfwidth: f64,
        #[serde(default = "one", skip_serializing_if = "is_one")]
        scale: f64,
    },
    Table {
        path: PathBuf,
    },
}

impl GeneratorDescriptor {
    pub fn build(&self, domain: Domain, base_dir: &Path) -> Result<FuncExpr> {
        let (expr, scale) = match *self {
            GeneratorDescriptor::Gaussian {
                center,
                width,
                scale,
            } => (FuncExpr::gaussian(domain, center, width)?, scale),
            GeneratorDescriptor::CharInterval { lo, hi, scale } => {
                (FuncExpr::char_interval(domain, lo, hi)?, scale)
            }
            GeneratorDescriptor::OneSidedExp { rate, scale } => {
                (FuncExpr::one_sided_exp(domain, rate)?, scale)
            }
            GeneratorDescriptor::Hat {
                center,
                halfwidth,
                scale,
            } => (FuncExpr::hat(domain, center, halfwidth)?, scale),
            GeneratorDescriptor::Table { ref path } => {
                let full = base_dir.join(path);
                let table = SampledTable::read_csv(File::open(&full)?)?;
                return Ok(FuncExpr::table(domain, table));
            }
        };
        if scale == 1.0 {
            Ok(expr)
        } else {
            expr.scale(Complex64::new(scale, 0.0))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemKind {
    Md,
    Gabor,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpecJson {
    pub kind: SystemKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    pub generators: Vec<GeneratorDescriptor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j_range: Option<IndexRange>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_range: Option<IndexRange>,
    pub m_range: IndexRange,
}

fn require<T>(v: Option<T>, field: &'static str, kind: &str) -> Result<T> {
    v.ok_or_else(|| Error::ParamMismatch(format!("`{field}` is required for kind `{kind}`")))
}

fn forbid<T>(v: &Option<T>, field: &'static str, kind: &str) -> Result<()> {
    match v {
        Some(_) => Err(Error::ParamMismatch(format!(
            "`{field}` is not allowed for kind `{kind}`"
        ))),
        None => Ok(()),
    }
}

impl SystemSpecJson {
    pub fn build(&self, base_dir: &Path) -> Result<System> {
        match self.kind {
            SystemKind::Md => {
                forbid(&self.alpha, "alpha", "md")?;
                forbid(&self.beta, "beta", "md")?;
                forbid(&self.k_range, "k_range", "md")?;
                let params = make_params(
                    require(self.b, "b", "md")?,
                    require(self.p, "p", "md")?,
                    require(self.q, "q", "md")?,
                )?;
                let gens = self
                    .generators
                    .iter()
                    .map(|g| g.build(Domain::PositiveHalfLine, base_dir))
                    .collect::<Result<_>>()?;
                Ok(System::Md(MdSystemSpec::new(
                    gens,
                    params,
                    require(self.j_range, "j_range", "md")?,
                    self.m_range,
                )?))
            }
            SystemKind::Gabor => {
                forbid(&self.b, "b", "gabor")?;
                forbid(&self.p, "p", "gabor")?;
                forbid(&self.q, "q", "gabor")?;
                forbid(&self.j_range, "j_range", "gabor")?;
                let gens = self
                    .generators
                    .iter()
                    .map(|g| g.build(Domain::RealLine, base_dir))
                    .collect::<Result<_>>()?;
                Ok(System::Gabor(GaborSystemSpec::new(
                    gens,
                    require(self.alpha, "alpha", "gabor")?,
                    require(self.beta, "beta", "gabor")?,
                    require(self.k_range, "k_range", "gabor")?,
                    self.m_range,
                )?))
            }
        }
    }
}
