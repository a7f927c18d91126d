//! Flat `key = value` configuration files.
//!
//! Blank lines and lines starting with `#` are ignored. Keys are the model
//! parameter names (`omega_ab`, `gamma_b`, ...) plus `delta_min`,
//! `delta_max`, `points` and `mode`.

use std::collections::BTreeMap;
use std::path::Path;

use molfluor::{Error, Result};

pub const PARAM_KEYS: [&str; 12] = [
    "omega_ab", "omega_bc", "q", "omega12", "delta_2ph", "delta_1ph", "gamma_u", "gamma_v",
    "gamma_b", "gamma_d", "p_u", "p_v",
];
pub const GRID_KEYS: [&str; 4] = ["delta_min", "delta_max", "points", "mode"];

#[derive(Debug, Default, Clone, PartialEq)]
pub struct ConfigFile {
    pub values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::param("config", format!("line {}: expected key = value", n + 1))
            })?;
            let key = key.trim();
            if !PARAM_KEYS.contains(&key) && !GRID_KEYS.contains(&key) {
                return Err(Error::param("config", format!("line {}: unknown key `{key}`", n + 1)));
            }
            values.insert(key.to_string(), value.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| Error::Io { path: path.into(), source })?;
        Self::parse(&text)
    }

    pub fn get<V: std::str::FromStr>(&self, key: &'static str) -> Result<Option<V>> {
        self.values
            .get(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| Error::param(key, format!("cannot parse `{v}` from config file")))
            })
            .transpose()
    }
}
