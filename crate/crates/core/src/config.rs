use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::DEFAULT_WEYL_CAP;
use crate::par::ExecMode;

pub const CONFIG_ENV: &str = "WEYLGROWTH_CONFIG";

/// Solver and enumeration settings. Every field has a default, so a config
/// file may list only what it overrides.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub tolerance: f64,
    pub max_iter: usize,
    pub seed: u64,
    pub multistarts: usize,
    pub weyl_cap: u64,
    pub dd_rank_cap: usize,
    pub orbit_cap: usize,
    /// Rays per unit of angle when maximising on the sphere (δ′ ≤ 0 case).
    pub sphere_grid: usize,
    pub exec: ExecMode,
    pub consistency: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            tolerance: 1e-9,
            max_iter: 10_000,
            seed: 0,
            multistarts: 32,
            weyl_cap: DEFAULT_WEYL_CAP as u64,
            dd_rank_cap: 4,
            orbit_cap: 1_000_000,
            sphere_grid: 20_000,
            exec: ExecMode::Parallel,
            consistency: false,
        }
    }
}

impl Config {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Input(format!("cannot read config {}: {e}", path.display())))?;
        let cfg: Config = serde_json::from_str(&text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads the file named by `WEYLGROWTH_CONFIG`, or returns defaults.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os(CONFIG_ENV) {
            Some(p) if !p.is_empty() => Self::from_path(Path::new(&p)),
            _ => Ok(Config::default()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance < 1e-2) {
            return Err(Error::Input(format!("tolerance {} outside (0, 1e-2)", self.tolerance)));
        }
        if self.max_iter == 0 || self.multistarts == 0 || self.sphere_grid < 8 {
            return Err(Error::Input("iteration counts must be positive".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_file() {
        let cfg: Config = serde_json::from_str(r#"{"seed": 7, "exec": "sequential"}"#).unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.exec, ExecMode::Sequential);
        assert_eq!(cfg.multistarts, 32);
        assert!(serde_json::from_str::<Config>(r#"{"sed": 7}"#).is_err());
    }
}
