//! Flat `key = value` scenario files.
//!
//! One entry per line, `#` starts a comment, keys are dotted
//! (`network.lambda_b`). Every diagnostic carries the line it came from.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },

    #[error("line {line}: duplicate key `{key}`, first set on line {first}")]
    Duplicate { line: usize, key: String, first: usize },

    #[error("line {line}: `{key}`: {message}")]
    Value { line: usize, key: String, message: String },

    #[error("{0}")]
    Invariant(String),
}

/// Every problem found in one scenario file.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Diagnostics(pub Vec<ConfigError>);

impl Diagnostics {
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, e: ConfigError) {
        self.0.push(e);
    }

    pub fn invariant(&mut self, msg: impl Into<String>) {
        self.0.push(ConfigError::Invariant(msg.into()));
    }
}

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for Diagnostics {}

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub line: usize,
    pub value: String,
}

/// Parsed but untyped entries, keyed by their dotted name.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RawConfig {
    entries: BTreeMap<String, Entry>,
}

fn valid_key(k: &str) -> bool {
    !k.is_empty()
        && k.split('.').all(|p| {
            !p.is_empty() && p.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
        })
}

impl RawConfig {
    pub fn parse(text: &str, diags: &mut Diagnostics) -> Self {
        let mut entries: BTreeMap<String, Entry> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let Some((k, v)) = body.split_once('=') else {
                diags.push(ConfigError::Syntax {
                    line,
                    message: format!("expected `key = value`, found `{body}`"),
                });
                continue;
            };
            let key = k.trim();
            let value = v.trim();
            if !valid_key(key) {
                diags.push(ConfigError::Syntax {
                    line,
                    message: format!("malformed key `{key}`"),
                });
                continue;
            }
            if value.is_empty() {
                diags.push(ConfigError::Value {
                    line,
                    key: key.to_string(),
                    message: "missing value".into(),
                });
                continue;
            }
            if let Some(prev) = entries.get(key) {
                diags.push(ConfigError::Duplicate {
                    line,
                    key: key.to_string(),
                    first: prev.line,
                });
                continue;
            }
            entries.insert(
                key.to_string(),
                Entry {
                    line,
                    value: value.to_string(),
                },
            );
        }
        Self { entries }
    }

    pub fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.get(key)
    }

    pub fn has_section(&self, section: &str) -> bool {
        let prefix = format!("{section}.");
        self.entries.keys().any(|k| k.starts_with(&prefix))
    }

    pub fn keys(&self) -> impl Iterator<Item = (&String, &Entry)> {
        self.entries.iter()
    }

    /// Reports keys outside `known`.
    pub fn check_known(&self, known: &[&str], diags: &mut Diagnostics) {
        for (k, e) in &self.entries {
            if !known.contains(&k.as_str()) {
                diags.push(ConfigError::UnknownKey {
                    line: e.line,
                    key: k.clone(),
                });
            }
        }
    }

    /// Reads a number, recording a diagnostic on failure.
    pub fn number(&self, key: &str, diags: &mut Diagnostics) -> Option<f64> {
        let e = self.get(key)?;
        match e.value.parse::<f64>() {
            Ok(v) if v.is_finite() => Some(v),
            _ => {
                diags.push(ConfigError::Value {
                    line: e.line,
                    key: key.to_string(),
                    message: format!("expected a finite number, found `{}`", e.value),
                });
                None
            }
        }
    }

    pub fn integer(&self, key: &str, diags: &mut Diagnostics) -> Option<u64> {
        let e = self.get(key)?;
        match e.value.parse::<u64>() {
            Ok(v) => Some(v),
            Err(_) => {
                diags.push(ConfigError::Value {
                    line: e.line,
                    key: key.to_string(),
                    message: format!("expected a non-negative integer, found `{}`", e.value),
                });
                None
            }
        }
    }

    /// A comma-separated list of numbers, or `start:step:stop` inclusive.
    pub fn grid(&self, key: &str, diags: &mut Diagnostics) -> Option<Vec<f64>> {
        let e = self.get(key)?;
        let fail = |diags: &mut Diagnostics, message: String| {
            diags.push(ConfigError::Value {
                line: e.line,
                key: key.to_string(),
                message,
            });
            None
        };
        if e.value.contains(':') {
            let parts: Vec<&str> = e.value.split(':').map(str::trim).collect();
            let nums: Option<Vec<f64>> = parts.iter().map(|p| p.parse::<f64>().ok().filter(|v| v.is_finite())).collect();
            let Some(nums) = nums.filter(|n| n.len() == 3) else {
                return fail(diags, format!("expected `start:step:stop`, found `{}`", e.value));
            };
            let (start, step, stop) = (nums[0], nums[1], nums[2]);
            if !(step > 0.0) || stop < start {
                return fail(diags, "range needs a positive step and stop >= start".into());
            }
            let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
            if n > 100_000 {
                return fail(diags, format!("range expands to {n} points"));
            }
            return Some((0..n).map(|i| start + i as f64 * step).collect());
        }
        let mut out = Vec::new();
        for p in e.value.split(',') {
            match p.trim().parse::<f64>() {
                Ok(v) if v.is_finite() => out.push(v),
                _ => return fail(diags, format!("`{}` is not a finite number", p.trim())),
            }
        }
        Some(out)
    }
}
