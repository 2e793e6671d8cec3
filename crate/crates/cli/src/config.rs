//! Plain `key=value` configuration files.

use std::collections::HashMap;
use std::path::Path;

use crate::error::{usage, CliResult};

/// Parsed configuration; keys use the long-flag spelling (`gamma-bar`,
/// `p-i`, `L`, ...), with underscores accepted for dashes.
#[derive(Debug, Clone, Default)]
pub struct Config {
    values: HashMap<String, String>,
}

impl Config {
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut values = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| usage(format!("config line {}: expected key=value", lineno + 1)))?;
            values.insert(k.trim().replace('_', "-"), v.trim().to_string());
        }
        Ok(Config { values })
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn get<T: std::str::FromStr>(&self, key: &str) -> CliResult<Option<T>> {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| usage(format!("config value for {key} is invalid: {v}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys_and_comments() {
        let c = Config::parse("# channel\ngamma_bar = 2.5\nm=3 # integer\n\nL=2\n").unwrap();
        assert_eq!(c.get::<f64>("gamma-bar").unwrap(), Some(2.5));
        assert_eq!(c.get::<f64>("m").unwrap(), Some(3.0));
        assert_eq!(c.get::<u32>("L").unwrap(), Some(2));
        assert_eq!(c.get::<f64>("k").unwrap(), None);
        assert!(Config::parse("oops").is_err());
        assert!(c.get::<u32>("gamma-bar").is_err());
    }
}
