//! Instance configuration from flat `key = value` text or JSON, with command
//! line flags layered on top.

use anyhow::{bail, Context, Result};
use qwalk_core::{BipartiteInstance, WalkKind};
use serde::Deserialize;

/// Every setting is optional; missing set sizes fall back to the canonical instance.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    pub n1: Option<usize>,
    pub n2: Option<usize>,
    pub k1: Option<usize>,
    pub k2: Option<usize>,
    pub gamma: Option<f64>,
    pub walk: Option<WalkKind>,
    #[serde(alias = "tmax")]
    pub t_max: Option<f64>,
    pub points: Option<usize>,
}

impl Settings {
    /// JSON when the text opens with `{`, key=value lines otherwise.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            return serde_json::from_str(text).context("invalid JSON configuration");
        }
        let mut map = serde_json::Map::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("line {}: expected key = value, got `{}`", lineno + 1, raw.trim());
            };
            let key = key.trim().replace('-', "_");
            let value = value.trim();
            let json = if let Ok(u) = value.parse::<u64>() {
                serde_json::Value::from(u)
            } else if let Ok(x) = value.parse::<f64>() {
                serde_json::Value::from(x)
            } else {
                serde_json::Value::from(value.to_ascii_lowercase())
            };
            if map.insert(key.clone(), json).is_some() {
                bail!("line {}: `{key}` set twice", lineno + 1);
            }
        }
        serde_json::from_value(serde_json::Value::Object(map)).context("invalid configuration")
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    /// Values set in `other` win.
    pub fn overlay(self, other: Settings) -> Settings {
        Settings {
            n1: other.n1.or(self.n1),
            n2: other.n2.or(self.n2),
            k1: other.k1.or(self.k1),
            k2: other.k2.or(self.k2),
            gamma: other.gamma.or(self.gamma),
            walk: other.walk.or(self.walk),
            t_max: other.t_max.or(self.t_max),
            points: other.points.or(self.points),
        }
    }

    pub fn resolve(self) -> Result<InstanceConfig> {
        let c = BipartiteInstance::canonical();
        let instance = BipartiteInstance::new(
            self.n1.unwrap_or(c.n1()),
            self.n2.unwrap_or(c.n2()),
            self.k1.unwrap_or(c.k1()),
            self.k2.unwrap_or(c.k2()),
        )?;
        if let Some(g) = self.gamma {
            if !(g.is_finite() && g > 0.0) {
                bail!("gamma must be positive, got {g}");
            }
        }
        if let Some(t) = self.t_max {
            if !(t.is_finite() && t > 0.0) {
                bail!("t_max must be positive, got {t}");
            }
        }
        if let Some(p) = self.points {
            if p < 2 {
                bail!("points must be at least 2, got {p}");
            }
        }
        Ok(InstanceConfig {
            instance,
            gamma: self.gamma,
            walk: self.walk.unwrap_or(WalkKind::Laplacian),
            t_max: self.t_max,
            points: self.points,
        })
    }
}

/// Validated settings for one command.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceConfig {
    pub instance: BipartiteInstance,
    pub gamma: Option<f64>,
    pub walk: WalkKind,
    pub t_max: Option<f64>,
    pub points: Option<usize>,
}

impl Default for InstanceConfig {
    fn default() -> Self {
        Settings::default().resolve().expect("canonical settings are valid")
    }
}
