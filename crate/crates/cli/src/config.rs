//! Optional key-value config file. Precedence: CLI flags > config file >
//! built-in defaults. Format: one `key = value` per line, `#` comments.

use std::collections::HashMap;
use std::path::Path;
use std::str::FromStr;

#[derive(Debug, Default, Clone)]
pub struct Config {
    values: HashMap<String, String>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let mut values = HashMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| format!("config line {}: expected key = value", lineno + 1))?;
            values.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn get_raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|s| s.as_str())
    }

    /// flag value if given, else config value, else default.
    pub fn resolve<T: FromStr + Clone>(
        &self,
        flag: Option<T>,
        key: &str,
        default: T,
    ) -> Result<T, String> {
        self.resolve_required(flag, key)
            .map(|o| o.unwrap_or(default))
    }

    /// flag value if given, else config value, else None.
    pub fn resolve_required<T: FromStr>(
        &self,
        flag: Option<T>,
        key: &str,
    ) -> Result<Option<T>, String> {
        if let Some(v) = flag {
            return Ok(Some(v));
        }
        match self.values.get(key) {
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|_| format!("config key '{key}': cannot parse '{raw}'")),
            None => Ok(None),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_resolves() {
        let dir = std::env::temp_dir().join("pppm-config-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("cfg.txt");
        std::fs::write(&path, "# comment\ntrials = 500\nseed=9 # inline\n").unwrap();
        let cfg = Config::load(&path).unwrap();
        assert_eq!(cfg.resolve(None, "trials", 1u64).unwrap(), 500);
        assert_eq!(cfg.resolve(Some(7u64), "seed", 1).unwrap(), 7);
        assert_eq!(cfg.resolve(None, "seed", 1u64).unwrap(), 9);
        assert_eq!(cfg.resolve(None, "missing", 3u32).unwrap(), 3);
        assert!(cfg
            .resolve_required::<u64>(None, "missing")
            .unwrap()
            .is_none());
    }

    #[test]
    fn rejects_bad_lines() {
        let dir = std::env::temp_dir().join("pppm-config-test2");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.txt");
        std::fs::write(&path, "just words\n").unwrap();
        assert!(Config::load(&path).is_err());
    }
}
