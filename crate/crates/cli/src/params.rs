//! Effective run configuration: defaults, then a key=value file, then flags.

use std::collections::BTreeMap;
use std::path::Path;

use gapscope_core::dirichlet::PolyFactor;
use gapscope_core::identity::CoefficientClass;
use gapscope_core::report::{parse_rational, parse_u64, rational_to_f64};
use gapscope_core::{Error, Result};
use num_rational::BigRational;

/// Keys shared by every command.
pub const COMMON_KEYS: [&str; 2] = ["out", "threads"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Params {
    pub command: String,
    pub values: BTreeMap<String, String>,
}

impl Params {
    pub fn new(command: &str, defaults: &[(&str, &str)]) -> Self {
        let values = defaults.iter().map(|&(k, v)| (k.to_string(), v.to_string())).collect();
        Params { command: command.into(), values }
    }

    fn accepts(&self, key: &str) -> bool {
        self.values.contains_key(key) || COMMON_KEYS.contains(&key)
    }

    /// Merge a key=value file; `#` starts a comment, blank lines are skipped.
    pub fn merge_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("cannot read config {}: {e}", path.display())))?;
        for (n, line) in text.lines().enumerate() {
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let (k, v) = t
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("{}:{}: expected key=value", path.display(), n + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            if k == "command" {
                if v != self.command {
                    return Err(Error::InvalidArgument(format!(
                        "config is for command {v:?}, not {:?}",
                        self.command
                    )));
                }
                continue;
            }
            if !self.accepts(k) {
                return Err(Error::InvalidArgument(format!(
                    "{}:{}: unknown key {k:?} for {}",
                    path.display(),
                    n + 1,
                    self.command
                )));
            }
            self.values.insert(k.into(), v.into());
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: Option<impl ToString>) {
        if let Some(v) = value {
            self.values.insert(key.into(), v.to_string());
        }
    }

    pub fn get(&self, key: &str) -> Result<&str> {
        self.values
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| Error::InvalidArgument(format!("missing parameter {key}")))
    }

    pub fn u64(&self, key: &str) -> Result<u64> {
        parse_u64(self.get(key)?).map_err(|e| key_err(key, e))
    }

    pub fn rational(&self, key: &str) -> Result<BigRational> {
        parse_rational(self.get(key)?).map_err(|e| key_err(key, e))
    }

    pub fn f64(&self, key: &str) -> Result<f64> {
        Ok(rational_to_f64(&self.rational(key)?))
    }

    pub fn bool(&self, key: &str) -> Result<bool> {
        match self.get(key)? {
            "true" | "1" | "yes" => Ok(true),
            "false" | "0" | "no" => Ok(false),
            other => Err(Error::Parse(format!("{key}: expected true or false, got {other:?}"))),
        }
    }

    pub fn u64_list(&self, key: &str) -> Result<Vec<u64>> {
        list(self.get(key)?).map(|s| parse_u64(s).map_err(|e| key_err(key, e))).collect()
    }

    pub fn f64_list(&self, key: &str) -> Result<Vec<f64>> {
        list(self.get(key)?).map(|s| parse_rational(s).map(|q| rational_to_f64(&q)).map_err(|e| key_err(key, e))).collect()
    }

    pub fn factors(&self, key: &str) -> Result<Vec<PolyFactor>> {
        list(self.get(key)?).map(parse_factor).collect()
    }

    /// Manifest text; it is itself a valid config file for the same command.
    pub fn manifest(&self, outputs: &[String]) -> String {
        let mut s = format!("# gapscope {}\ncommand={}\n", env!("CARGO_PKG_VERSION"), self.command);
        for (k, v) in &self.values {
            s.push_str(&format!("{k}={v}\n"));
        }
        for o in outputs {
            s.push_str(&format!("# output: {o}\n"));
        }
        s
    }
}

fn list(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty())
}

fn key_err(key: &str, e: Error) -> Error {
    Error::Parse(format!("{key}: {e}"))
}

/// `unit:3`, `log:2`, `mobius:4` or `mobius:4@20` (Möbius cutoff), `singleton`.
pub fn parse_factor(s: &str) -> Result<PolyFactor> {
    let (name, rest) = s.split_once(':').unwrap_or((s, ""));
    let class = match name.to_ascii_lowercase().as_str() {
        "unit" => CoefficientClass::Unit,
        "log" => CoefficientClass::Log,
        "mobius" => CoefficientClass::Mobius,
        "singleton" => return Ok(PolyFactor::singleton()),
        _ => return Err(Error::Parse(format!("unknown factor class in {s:?}"))),
    };
    let (exp, cutoff) = rest.split_once('@').map_or((rest, None), |(e, c)| (e, Some(c)));
    let exp: i32 = exp.trim().parse().map_err(|_| Error::Parse(format!("bad factor exponent in {s:?}")))?;
    if exp < -1 {
        return Err(Error::Parse(format!("factor exponent must be >= -1 in {s:?}")));
    }
    let f = PolyFactor::new(class, exp);
    Ok(match cutoff {
        Some(c) => f.with_cutoff(parse_u64(c)?),
        None => f,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literals() {
        let mut p = Params::new("gaps", &[("limits", "1e6,10"), ("res", "9/5")]);
        assert_eq!(p.u64_list("limits").unwrap(), vec![1_000_000, 10]);
        assert_eq!(p.f64("res").unwrap(), 1.8);
        p.set("res", Some("1.5e-1"));
        assert_eq!(p.rational("res").unwrap(), BigRational::new(3.into(), 20.into()));
        p.set("limits", Some("2.5"));
        assert!(p.u64_list("limits").is_err());
    }

    #[test]
    fn factors() {
        let f = parse_factor("mobius:4@20").unwrap();
        assert_eq!((f.class, f.exp, f.cutoff), (CoefficientClass::Mobius, 4, Some(20)));
        assert_eq!(parse_factor("singleton").unwrap(), PolyFactor::singleton());
        assert!(parse_factor("zeta:3").is_err());
        assert!(parse_factor("unit:-2").is_err());
    }
}
