//! Flat key-value config files with `[section]` headers.
//!
//! No nesting, no interpolation: every run is described by lines of
//! `key = value`, which keeps manifests hashable and diffs readable. The
//! canonical form (sections and keys sorted, single-space normalized) is
//! what gets hashed into the run manifest.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

type Section = BTreeMap<String, String>;

/// A parsed config: ordered sections of ordered key-value pairs.
#[derive(Clone, Debug, Default)]
pub struct Config {
    sections: BTreeMap<String, Section>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Config, ConfigError> {
        let mut sections: BTreeMap<String, Section> = BTreeMap::new();
        let mut current: Option<String> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let name = name.strip_suffix(']').ok_or_else(|| {
                    ConfigError(format!("line {}: unterminated section header", lineno + 1))
                })?;
                let name = name.trim().to_string();
                if name.is_empty() {
                    return Err(ConfigError(format!("line {}: empty section name", lineno + 1)));
                }
                sections.entry(name.clone()).or_default();
                current = Some(name);
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                ConfigError(format!("line {}: expected `key = value`, got `{line}`", lineno + 1))
            })?;
            let section = current.as_ref().ok_or_else(|| {
                ConfigError(format!("line {}: key outside any [section]", lineno + 1))
            })?;
            sections
                .get_mut(section)
                .unwrap()
                .insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Config { sections })
    }

    pub fn load(path: &Path) -> Result<Config, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn set(&mut self, section: &str, key: &str, value: String) {
        self.sections
            .entry(section.to_string())
            .or_default()
            .insert(key.to_string(), value);
    }

    pub fn get(&self, section: &str, key: &str) -> Option<&str> {
        self.sections.get(section)?.get(key).map(|s| s.as_str())
    }

    pub fn require(&self, section: &str, key: &str) -> Result<&str, ConfigError> {
        self.get(section, key)
            .ok_or_else(|| ConfigError(format!("missing `{key}` in [{section}]")))
    }

    pub fn f64(&self, section: &str, key: &str) -> Result<f64, ConfigError> {
        let raw = self.require(section, key)?;
        raw.parse()
            .map_err(|_| ConfigError(format!("[{section}] {key}: `{raw}` is not a number")))
    }

    pub fn f64_or(&self, section: &str, key: &str, default: f64) -> Result<f64, ConfigError> {
        match self.get(section, key) {
            Some(raw) => raw
                .parse()
                .map_err(|_| ConfigError(format!("[{section}] {key}: `{raw}` is not a number"))),
            None => Ok(default),
        }
    }

    pub fn usize(&self, section: &str, key: &str) -> Result<usize, ConfigError> {
        let raw = self.require(section, key)?;
        raw.parse()
            .map_err(|_| ConfigError(format!("[{section}] {key}: `{raw}` is not an integer")))
    }

    pub fn usize_or(&self, section: &str, key: &str, default: usize) -> Result<usize, ConfigError> {
        match self.get(section, key) {
            Some(raw) => raw
                .parse()
                .map_err(|_| ConfigError(format!("[{section}] {key}: `{raw}` is not an integer"))),
            None => Ok(default),
        }
    }

    pub fn u64_or(&self, section: &str, key: &str, default: u64) -> Result<u64, ConfigError> {
        match self.get(section, key) {
            Some(raw) => raw
                .parse()
                .map_err(|_| ConfigError(format!("[{section}] {key}: `{raw}` is not an integer"))),
            None => Ok(default),
        }
    }

    pub fn f64_list(&self, section: &str, key: &str) -> Result<Vec<f64>, ConfigError> {
        let raw = self.require(section, key)?;
        let mut out = Vec::new();
        for part in raw.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            out.push(part.parse().map_err(|_| {
                ConfigError(format!("[{section}] {key}: `{part}` is not a number"))
            })?);
        }
        if out.is_empty() {
            return Err(ConfigError(format!("[{section}] {key}: empty list")));
        }
        Ok(out)
    }

    pub fn usize_list(&self, section: &str, key: &str) -> Result<Vec<usize>, ConfigError> {
        let raw = self.require(section, key)?;
        let mut out = Vec::new();
        for part in raw.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            out.push(part.parse().map_err(|_| {
                ConfigError(format!("[{section}] {key}: `{part}` is not an integer"))
            })?);
        }
        if out.is_empty() {
            return Err(ConfigError(format!("[{section}] {key}: empty list")));
        }
        Ok(out)
    }

    /// Canonical text: sections and keys sorted, `key = value` normalized.
    /// This is the hashing surface for manifests and the results cache.
    pub fn canonical(&self) -> String {
        let mut out = String::new();
        for (name, section) in &self.sections {
            out.push_str(&format!("[{name}]\n"));
            for (key, value) in section {
                out.push_str(&format!("{key} = {value}\n"));
            }
        }
        out
    }
}
