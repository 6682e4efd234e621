//! Run configuration, loadable from TOML.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fd::FdConfig;
use crate::helicoid::CertifyConfig;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Svg,
}

/// Diagram window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub r: u32,
    pub l_range: (f64, f64),
    pub m_range: (f64, f64),
    pub resolution: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { r: 3, l_range: (0.0, 3.0), m_range: (-1.0, 3.0), resolution: 120 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    /// Written to stdout when absent.
    pub path: Option<PathBuf>,
    pub format: OutputFormat,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Finite-difference step and the first/second-order tolerances.
    pub fd: FdConfig,
    pub grid: GridConfig,
    pub output: OutputConfig,
    pub certify: CertifyConfig,
    /// Random sample points per check in the verification suites.
    pub samples: usize,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            fd: FdConfig::default(),
            grid: GridConfig::default(),
            output: OutputConfig::default(),
            certify: CertifyConfig::default(),
            samples: 100,
            seed: 2024,
        }
    }
}

impl RunConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(s).map_err(|e| Error::InvalidArgument(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        for (name, v) in [("fd.step", self.fd.step), ("fd.tol_first", self.fd.tol_first), ("fd.tol_second", self.fd.tol_second)] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("{name} must be a positive number, got {v}"));
            }
        }
        if self.grid.resolution < 2 {
            return bad(format!("grid.resolution must be at least 2, got {}", self.grid.resolution));
        }
        if self.certify.resolution < 2 {
            return bad(format!("certify.resolution must be at least 2, got {}", self.certify.resolution));
        }
        if self.grid.r < 2 {
            return bad(format!("grid.r must be at least 2, got {}", self.grid.r));
        }
        for (name, (lo, hi)) in [("grid.l_range", self.grid.l_range), ("grid.m_range", self.grid.m_range)] {
            if !(lo < hi) {
                return bad(format!("{name} must be increasing, got ({lo}, {hi})"));
            }
        }
        if self.samples == 0 {
            return bad("samples must be positive".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_toml_keeps_defaults() {
        let cfg = RunConfig::from_toml_str("samples = 5\n[grid]\nresolution = 7\n[output]\nformat = \"csv\"\n").unwrap();
        assert_eq!(cfg.samples, 5);
        assert_eq!(cfg.grid.resolution, 7);
        assert_eq!(cfg.grid.r, 3);
        assert_eq!(cfg.output.format, OutputFormat::Csv);
        assert_eq!(cfg.fd, FdConfig::default());
    }

    #[test]
    fn rejects_bad_values() {
        assert!(RunConfig::from_toml_str("[fd]\ntol_first = 0.0\n").is_err());
        assert!(RunConfig::from_toml_str("[grid]\nresolution = 1\n").is_err());
        assert!(RunConfig::from_toml_str("bogus = 1\n").is_err());
    }
}
