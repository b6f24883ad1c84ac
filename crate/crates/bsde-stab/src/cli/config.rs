//! Key-value configuration: a plain-text file with one `key = value` per
//! line and `#` comments, overridden by `--key value` flags. Keys are
//! normalized to lowercase with `-` mapped to `_`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use crate::scheme::Theta;

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Default, Clone)]
pub struct Settings {
    map: BTreeMap<String, String>,
}

fn normalize(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('-', "_")
}

impl Settings {
    pub fn set(&mut self, key: &str, value: &str) {
        self.map.insert(normalize(key), value.trim().to_string());
    }

    pub fn load_file(&mut self, path: &str) -> Result<(), ConfigError> {
        let text = std::fs::read_to_string(Path::new(path))
            .map_err(|e| ConfigError(format!("cannot read config file `{path}`: {e}")))?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError(format!(
                    "{path}:{}: expected `key = value`, got `{line}`",
                    lineno + 1
                )));
            };
            self.set(key, value);
        }
        Ok(())
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.map.keys().map(String::as_str)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.map.get(&normalize(key)).map(String::as_str)
    }

    pub fn get_string(&self, key: &str, default: &str) -> String {
        self.get(key).map(str::to_string).unwrap_or_else(|| default.to_string())
    }

    pub fn get_f64(&self, key: &str, default: f64) -> Result<f64, ConfigError> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| ConfigError(format!("`{key}` expects a number, got `{v}`"))),
        }
    }

    pub fn get_usize(&self, key: &str, default: usize) -> Result<usize, ConfigError> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| ConfigError(format!("`{key}` expects an integer, got `{v}`"))),
        }
    }

    pub fn get_bool(&self, key: &str, default: bool) -> Result<bool, ConfigError> {
        match self.get(key) {
            None => Ok(default),
            Some("true") | Some("1") | Some("yes") => Ok(true),
            Some("false") | Some("0") | Some("no") => Ok(false),
            Some(v) => Err(ConfigError(format!("`{key}` expects true/false, got `{v}`"))),
        }
    }

    pub fn get_theta(&self, key: &str, default: Theta) -> Result<Theta, ConfigError> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse::<u64>()
                .ok()
                .and_then(Theta::from_int)
                .ok_or_else(|| ConfigError(format!("`{key}` expects 0 or 1, got `{v}`"))),
        }
    }

    /// Comma-separated list of integers, e.g. `n_list = 64,128,256`.
    pub fn get_usize_list(&self, key: &str, default: &[usize]) -> Result<Vec<usize>, ConfigError> {
        match self.get(key) {
            None => Ok(default.to_vec()),
            Some(v) => v
                .split(',')
                .map(|part| {
                    part.trim()
                        .parse()
                        .map_err(|_| ConfigError(format!("`{key}` has a bad integer `{part}`")))
                })
                .collect(),
        }
    }

    /// Comma-separated list of numbers, e.g. `b = 3,-4`.
    pub fn get_f64_list(&self, key: &str, default: &[f64]) -> Result<Vec<f64>, ConfigError> {
        match self.get(key) {
            None => Ok(default.to_vec()),
            Some(v) => v
                .split(',')
                .map(|part| {
                    part.trim()
                        .parse()
                        .map_err(|_| ConfigError(format!("`{key}` has a bad number `{part}`")))
                })
                .collect(),
        }
    }

    /// Rejects keys outside `allowed` (after normalization).
    pub fn check_known_keys(&self, allowed: &[&str]) -> Result<(), ConfigError> {
        for key in self.map.keys() {
            if !allowed.contains(&key.as_str()) {
                return Err(ConfigError(format!(
                    "unknown key `{key}`; expected one of: {}",
                    allowed.join(", ")
                )));
            }
        }
        Ok(())
    }
}

/// Splits argv into the subcommand and `--key value` / `--key=value` pairs.
/// A flag followed by another flag (or nothing) is treated as boolean true.
pub fn parse_args(args: &[String]) -> Result<(Option<String>, Vec<(String, String)>), ConfigError> {
    let mut subcommand = None;
    let mut pairs = Vec::new();
    let mut i = 0;
    while i < args.len() {
        let arg = &args[i];
        if let Some(flag) = arg.strip_prefix("--") {
            if let Some((key, value)) = flag.split_once('=') {
                pairs.push((key.to_string(), value.to_string()));
            } else if i + 1 < args.len() && !args[i + 1].starts_with("--") {
                pairs.push((flag.to_string(), args[i + 1].clone()));
                i += 1;
            } else {
                pairs.push((flag.to_string(), "true".to_string()));
            }
        } else if subcommand.is_none() {
            subcommand = Some(arg.clone());
        } else {
            return Err(ConfigError(format!("unexpected positional argument `{arg}`")));
        }
        i += 1;
    }
    Ok((subcommand, pairs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_args_basic() {
        let args: Vec<String> = ["check", "--theta", "1", "--b=5", "--plot"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let (sub, pairs) = parse_args(&args).unwrap();
        assert_eq!(sub.as_deref(), Some("check"));
        assert_eq!(
            pairs,
            vec![
                ("theta".to_string(), "1".to_string()),
                ("b".to_string(), "5".to_string()),
                ("plot".to_string(), "true".to_string()),
            ]
        );
    }

    #[test]
    fn parse_args_negative_number_value() {
        let args: Vec<String> = ["check", "--a", "-1.5"].iter().map(|s| s.to_string()).collect();
        let (_, pairs) = parse_args(&args).unwrap();
        assert_eq!(pairs[0], ("a".to_string(), "-1.5".to_string()));
    }

    #[test]
    fn settings_typed_getters() {
        let mut s = Settings::default();
        s.set("Theta", "1");
        s.set("n-list", " 64, 128 ");
        s.set("b", "3,-4");
        assert_eq!(s.get_theta("theta", Theta::PseudoExplicit).unwrap(), Theta::Implicit);
        assert_eq!(s.get_usize_list("n_list", &[]).unwrap(), vec![64, 128]);
        assert_eq!(s.get_f64_list("b", &[]).unwrap(), vec![3.0, -4.0]);
        assert_eq!(s.get_f64("missing", 2.5).unwrap(), 2.5);
        assert!(s.get_f64("theta", 0.0).is_ok());
        assert!(s.check_known_keys(&["theta", "n_list", "b"]).is_ok());
        assert!(s.check_known_keys(&["theta"]).is_err());
    }

    #[test]
    fn config_file_round_trip() {
        let dir = std::env::temp_dir().join("bsde_stab_cfg_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("cfg.txt");
        std::fs::write(&path, "# comment\n theta = 1 \n\nalpha=2.5\n").unwrap();
        let mut s = Settings::default();
        s.load_file(path.to_str().unwrap()).unwrap();
        assert_eq!(s.get("theta"), Some("1"));
        assert_eq!(s.get_f64("alpha", 0.0).unwrap(), 2.5);

        std::fs::write(&path, "no equals sign\n").unwrap();
        let mut s = Settings::default();
        assert!(s.load_file(path.to_str().unwrap()).is_err());
    }
}
