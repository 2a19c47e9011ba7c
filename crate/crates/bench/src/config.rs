//! `key=value` run configuration. Recognized keys: `w`, `epsilon`,
//! `max_iter`, `rho`, `seed`, `psf_size_gaussian`. Blank lines and lines
//! starting with `#` are ignored.

use std::path::Path;

use crate::error::{BenchError, Result};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    pub w: Option<usize>,
    pub epsilon: Option<f64>,
    pub max_iter: Option<usize>,
    pub rho: Option<f64>,
    pub seed: Option<u64>,
    pub psf_size_gaussian: Option<usize>,
}

fn parse_value<V: std::str::FromStr>(line: usize, key: &str, raw: &str) -> Result<V> {
    raw.parse().map_err(|_| BenchError::Config {
        line,
        message: format!("invalid value {raw:?} for {key}"),
    })
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.trim();
            if content.is_empty() || content.starts_with('#') {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| BenchError::Config {
                line,
                message: format!("expected key=value, got {content:?}"),
            })?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "w" => cfg.w = Some(parse_value(line, key, value)?),
                "epsilon" => cfg.epsilon = Some(parse_value(line, key, value)?),
                "max_iter" => cfg.max_iter = Some(parse_value(line, key, value)?),
                "rho" => cfg.rho = Some(parse_value(line, key, value)?),
                "seed" => cfg.seed = Some(parse_value(line, key, value)?),
                "psf_size_gaussian" => cfg.psf_size_gaussian = Some(parse_value(line, key, value)?),
                other => {
                    return Err(BenchError::Config {
                        line,
                        message: format!("unknown key {other:?}"),
                    })
                }
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| BenchError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    /// Fields set in `overrides` win.
    pub fn overridden_by(&self, overrides: &RunConfig) -> RunConfig {
        RunConfig {
            w: overrides.w.or(self.w),
            epsilon: overrides.epsilon.or(self.epsilon),
            max_iter: overrides.max_iter.or(self.max_iter),
            rho: overrides.rho.or(self.rho),
            seed: overrides.seed.or(self.seed),
            psf_size_gaussian: overrides.psf_size_gaussian.or(self.psf_size_gaussian),
        }
    }
}
