//! Run configuration, read from a TOML file.
//!
//! ```toml
//! [grid]
//! max_shell = 14
//! base_angular = 64
//!
//! [thresholds]
//! divergence = 1e3
//! compact_tol = 1e-2
//!
//! [quadrature]
//! tol = 1e-12
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::criteria::Thresholds;
use crate::diskgeom::{DiskGrid, DEFAULT_BASE_ANGULAR, DEFAULT_MAX_SHELL};
use crate::quadrature::QuadratureConfig;
use crate::{Error, Result};

/// Environment variable consulted when no `--config` path is given.
pub const CONFIG_ENV: &str = "BLOCHLAB_CONFIG";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub max_shell: usize,
    pub base_angular: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            max_shell: DEFAULT_MAX_SHELL,
            base_angular: DEFAULT_BASE_ANGULAR,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub grid: GridConfig,
    pub thresholds: Thresholds,
    pub quadrature: QuadratureConfig,
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// `path` if given, else the file named by `BLOCHLAB_CONFIG`, else defaults.
    pub fn load(path: Option<&Path>) -> Result<Self> {
        match path {
            Some(p) => Self::from_file(p),
            None => match std::env::var_os(CONFIG_ENV) {
                Some(p) if !p.is_empty() => Self::from_file(Path::new(&p)),
                _ => Ok(Self::default()),
            },
        }
    }

    pub fn grid(&self) -> Result<DiskGrid> {
        DiskGrid::new(self.grid.max_shell, self.grid.base_angular)
    }
}
