//! `key = value` configuration files.
//!
//! ```text
//! # comments start with '#'
//! field = fp:101
//! window = 16
//! universe = monomials(x, y; Q)
//! bornology = wo
//! bornology.lines = finite(Z)
//! derivation.dy = euler:y
//! ```

use std::collections::BTreeMap;
use std::str::FromStr;

use sigma_core::{Error, Field, Result, Universe};

pub const DEFAULT_WINDOW: usize = sigma_core::series::DEFAULT_WINDOW;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Format> {
        match s.trim() {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            other => Err(Error::Parse(format!("unknown format `{other}` (text or json)"))),
        }
    }
}

/// `euler:VAR` or `ddx:VAR`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationSpec {
    pub kind: String,
    pub var: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub field: Field,
    pub window: usize,
    pub seed: u64,
    pub format: Format,
    pub universe: Universe,
    /// Kind of the default bornology.
    pub bornology: String,
    /// Named bornologies, each `KIND` or `KIND(UNIVERSE)`.
    pub bornologies: BTreeMap<String, String>,
    pub derivations: BTreeMap<String, DerivationSpec>,
}

impl Default for Config {
    fn default() -> Config {
        Config {
            field: Field::Rational,
            window: DEFAULT_WINDOW,
            seed: 0,
            format: Format::Text,
            universe: Universe::monomials(&["x"], sigma_core::bornology::Domain::Rat),
            bornology: "wo".into(),
            bornologies: BTreeMap::new(),
            derivations: BTreeMap::new(),
        }
    }
}

fn valid_name(s: &str) -> bool {
    let mut cs = s.chars();
    cs.next().is_some_and(|c| c.is_alphabetic() || c == '_') && cs.all(|c| c.is_alphanumeric() || c == '_')
}

impl Config {
    /// Applies the lines of a config file on top of `self`.
    pub fn load(mut self, text: &str) -> Result<Config> {
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = |msg: String| Error::Parse(format!("config line {}: {msg}", no + 1));
            let (key, value) = line.split_once('=').ok_or_else(|| at(format!("expected `key = value`, found `{line}`")))?;
            self.set(key.trim(), value.trim()).map_err(|e| at(e.to_string()))?;
        }
        Ok(self)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |what: &str| Error::Parse(format!("bad {what} `{value}`"));
        match key {
            "field" => self.field = value.parse()?,
            "window" => {
                self.window = value.parse().map_err(|_| bad("window"))?;
                if self.window == 0 {
                    return Err(bad("window"));
                }
            }
            "seed" => self.seed = value.parse().map_err(|_| bad("seed"))?,
            "format" => self.format = value.parse()?,
            "universe" => self.universe = value.parse()?,
            "bornology" => self.bornology = value.to_string(),
            _ => {
                if let Some(name) = key.strip_prefix("bornology.") {
                    if !valid_name(name) {
                        return Err(Error::Parse(format!("bad bornology name `{name}`")));
                    }
                    self.bornologies.insert(name.to_string(), value.to_string());
                } else if let Some(name) = key.strip_prefix("derivation.") {
                    if !valid_name(name) {
                        return Err(Error::Parse(format!("bad derivation name `{name}`")));
                    }
                    let (kind, var) = value.split_once(':').ok_or_else(|| bad("derivation (KIND:VAR)"))?;
                    self.derivations
                        .insert(name.to_string(), DerivationSpec { kind: kind.trim().into(), var: var.trim().into() });
                } else {
                    return Err(Error::Parse(format!("unknown key `{key}`")));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_keys() {
        let c = Config::default()
            .load("field = fp:7 # small\nwindow=8\n\nuniverse = monomials(x, y; Z)\nbornology.z = finite(Z)\nderivation.dy = euler:y\n")
            .unwrap();
        assert_eq!(c.field, Field::Prime(7));
        assert_eq!(c.window, 8);
        assert_eq!(c.universe.arity(), 2);
        assert_eq!(c.bornologies["z"], "finite(Z)");
        assert_eq!(c.derivations["dy"], DerivationSpec { kind: "euler".into(), var: "y".into() });
    }

    #[test]
    fn rejects_garbage() {
        assert!(Config::default().load("colour = red").is_err());
        assert!(Config::default().load("window = 0").is_err());
        assert!(Config::default().load("just words").is_err());
        assert!(Config::default().load("derivation.d = euler").is_err());
    }
}
