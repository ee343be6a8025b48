//! Flat key-value configuration files and flag/file/default resolution.

use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use pullback_core::algebra::parse_rational;
use pullback_core::Rational;

/// Keys accepted in a configuration file. Dashes and underscores are
/// interchangeable.
const KNOWN_KEYS: &[&str] = &[
    "format",
    "output",
    "n",
    "k",
    "r",
    "r_min",
    "r_max",
    "q",
    "s",
    "alphas",
    "chi",
    "lambda",
    "weight",
    "modulus",
    "images",
    "level",
    "depth",
    "prime_bound",
    "terms",
    "method",
    "omit",
    "seed",
    "tolerance",
    "suite",
    "mc_budget",
    "siegel_volume",
    "table",
    "trivial_table",
    "primitive_only",
];

fn normalize(key: &str) -> String {
    key.replace('-', "_")
}

/// Values from an optional configuration file.
#[derive(Debug, Default)]
pub struct Settings {
    table: toml::Table,
}

impl Settings {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Settings::default());
        };
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in config {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let raw: toml::Table = text.parse()?;
        let mut table = toml::Table::new();
        for (k, v) in raw {
            let key = normalize(&k);
            if !KNOWN_KEYS.contains(&key.as_str()) {
                bail!("unknown configuration key '{k}'");
            }
            if matches!(v, toml::Value::Table(_)) {
                bail!("configuration must be flat, but '{k}' is a table");
            }
            table.insert(key, v);
        }
        Ok(Settings { table })
    }

    /// The file value for `key` rendered in the same syntax the flags use.
    fn raw(&self, key: &str) -> Option<String> {
        fn scalar(v: &toml::Value) -> String {
            match v {
                toml::Value::String(s) => s.clone(),
                toml::Value::Array(items) => items.iter().map(scalar).collect::<Vec<_>>().join(","),
                other => other.to_string(),
            }
        }
        self.table.get(&normalize(key)).map(scalar)
    }

    /// Flag if given, else the file value, else `None`.
    pub fn pick<T>(&self, flag: Option<T>, key: &str) -> Result<Option<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.raw(key) {
            None => Ok(None),
            Some(s) => s
                .parse::<T>()
                .map(Some)
                .map_err(|e| anyhow::anyhow!("config key '{key}': {e}")),
        }
    }

    pub fn get<T>(&self, flag: Option<T>, key: &str, default: T) -> Result<T>
    where
        T: FromStr,
        T::Err: Display,
    {
        Ok(self.pick(flag, key)?.unwrap_or(default))
    }

    pub fn require<T>(&self, flag: Option<T>, key: &str) -> Result<T>
    where
        T: FromStr,
        T::Err: Display,
    {
        self.pick(flag, key)?
            .ok_or_else(|| anyhow::anyhow!("missing required parameter --{}", key.replace('_', "-")))
    }

    pub fn flag(&self, flag: bool, key: &str) -> Result<bool> {
        Ok(flag || self.pick::<bool>(None, key)?.unwrap_or(false))
    }
}

/// Comma-separated integers, e.g. `10,10`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntList(pub Vec<i64>);

impl FromStr for IntList {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s.trim().is_empty() {
            return Ok(IntList(Vec::new()));
        }
        s.split(',')
            .map(|t| t.trim().parse::<i64>().map_err(|_| format!("not an integer: {t:?}")))
            .collect::<std::result::Result<_, _>>()
            .map(IntList)
    }
}

/// A rational such as `3/2` or `-4`.
#[derive(Clone, Debug, PartialEq)]
pub struct Rat(pub Rational);

impl FromStr for Rat {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        parse_rational(s).map(Rat).map_err(|e| e.to_string())
    }
}

/// Comma-separated rationals.
#[derive(Clone, Debug, PartialEq)]
pub struct RatList(pub Vec<Rational>);

impl FromStr for RatList {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s.trim().is_empty() {
            return Ok(RatList(Vec::new()));
        }
        s.split(',')
            .map(|t| parse_rational(t).map_err(|e| e.to_string()))
            .collect::<std::result::Result<_, _>>()
            .map(RatList)
    }
}
