//! Experiment configuration files and typed parameter access.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use serde_json::Value;

use crate::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Must match the subcommand when present.
    #[serde(default)]
    pub experiment: Option<String>,
    #[serde(default)]
    pub params: BTreeMap<String, Value>,
    #[serde(default)]
    pub sweep: Option<Sweep>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub param: String,
    pub values: Vec<Value>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| CliError::Config(format!("config: {e}")))?;
        if let Some(sweep) = &cfg.sweep {
            if sweep.values.is_empty() {
                return Err(CliError::Config(format!("sweep over {} has no values", sweep.param)));
            }
        }
        for (k, v) in &cfg.params {
            if !(v.is_number() || v.is_string() || v.is_boolean()) {
                return Err(CliError::Config(format!("parameter {k} must be a number or a string")));
            }
        }
        Ok(cfg)
    }

    /// Parameter sets in sweep order.
    pub fn points(&self) -> Vec<BTreeMap<String, Value>> {
        match &self.sweep {
            None => vec![self.params.clone()],
            Some(s) => s
                .values
                .iter()
                .map(|v| {
                    let mut p = self.params.clone();
                    p.insert(s.param.clone(), v.clone());
                    p
                })
                .collect(),
        }
    }
}

/// Parameters of one run. Every lookup records the value used so rows can
/// echo the full resolved parameter set.
#[derive(Debug)]
pub struct Params {
    raw: BTreeMap<String, Value>,
    resolved: RefCell<BTreeMap<String, Value>>,
}

impl Params {
    pub fn new(raw: BTreeMap<String, Value>) -> Self {
        Self { raw, resolved: RefCell::new(BTreeMap::new()) }
    }

    /// Rejects keys the experiment does not know.
    pub fn check_keys(&self, known: &[&str]) -> Result<(), CliError> {
        for k in self.raw.keys() {
            if !known.contains(&k.as_str()) {
                return Err(CliError::Config(format!("unknown parameter {k}; expected one of {}", known.join(", "))));
            }
        }
        Ok(())
    }

    fn record(&self, key: &str, v: Value) {
        self.resolved.borrow_mut().insert(key.to_string(), v);
    }

    pub fn opt_f64(&self, key: &str) -> Result<Option<f64>, CliError> {
        match self.raw.get(key) {
            None => Ok(None),
            Some(v) => {
                let x = v.as_f64().filter(|x| x.is_finite()).ok_or_else(|| CliError::Config(format!("{key} must be a finite number")))?;
                self.record(key, v.clone());
                Ok(Some(x))
            }
        }
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64, CliError> {
        let x = self.opt_f64(key)?.unwrap_or(default);
        self.record(key, Value::from(x));
        Ok(x)
    }

    pub fn opt_usize(&self, key: &str) -> Result<Option<usize>, CliError> {
        match self.raw.get(key) {
            None => Ok(None),
            Some(v) => {
                let x = v
                    .as_u64()
                    .or_else(|| v.as_f64().filter(|f| f.fract() == 0.0 && *f >= 0.0).map(|f| f as u64))
                    .ok_or_else(|| CliError::Config(format!("{key} must be a nonnegative integer")))?;
                self.record(key, Value::from(x));
                Ok(Some(x as usize))
            }
        }
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize, CliError> {
        let x = self.opt_usize(key)?.unwrap_or(default);
        self.record(key, Value::from(x));
        Ok(x)
    }

    pub fn opt_str(&self, key: &str) -> Result<Option<String>, CliError> {
        match self.raw.get(key) {
            None => Ok(None),
            Some(Value::String(s)) => {
                self.record(key, Value::from(s.clone()));
                Ok(Some(s.clone()))
            }
            Some(_) => Err(CliError::Config(format!("{key} must be a string"))),
        }
    }

    pub fn str_or(&self, key: &str, default: &str) -> Result<String, CliError> {
        let s = self.opt_str(key)?.unwrap_or_else(|| default.to_string());
        self.record(key, Value::from(s.clone()));
        Ok(s)
    }

    /// Records a derived default (for example a time computed from `N`).
    pub fn note(&self, key: &str, v: impl Into<Value>) {
        self.record(key, v.into());
    }

    pub fn resolved(&self) -> BTreeMap<String, Value> {
        self.resolved.borrow().clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_points_override_params() {
        let cfg = ExperimentConfig::parse(r#"{"params":{"t":1,"eps":0.01},"sweep":{"param":"t","values":[10,20]}}"#).unwrap();
        let pts = cfg.points();
        assert_eq!(pts.len(), 2);
        assert_eq!(pts[1]["t"], Value::from(20));
        assert_eq!(pts[1]["eps"], Value::from(0.01));
    }

    #[test]
    fn rejects_empty_sweep_and_nested_values() {
        assert!(ExperimentConfig::parse(r#"{"sweep":{"param":"t","values":[]}}"#).is_err());
        assert!(ExperimentConfig::parse(r#"{"params":{"t":[1]}}"#).is_err());
        assert!(ExperimentConfig::parse(r#"{"bogus":1}"#).is_err());
    }

    #[test]
    fn typed_access_records_defaults() {
        let p = Params::new(BTreeMap::from([("N".to_string(), Value::from(16))]));
        assert_eq!(p.usize_or("N", 4).unwrap(), 16);
        assert_eq!(p.f64_or("eps", 1e-3).unwrap(), 1e-3);
        let r = p.resolved();
        assert_eq!(r["eps"], Value::from(1e-3));
        assert!(p.check_keys(&["N"]).is_ok());
        assert!(p.check_keys(&["eps"]).is_err());
    }
}
