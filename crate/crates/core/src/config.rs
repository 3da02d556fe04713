//! Flat `key = value` model configuration.
//!
//! One assignment per line; `#` starts a comment. Required keys: `alpha`,
//! `sigma`, `r`, `pi_low`, `pi_high`, `xi`, `inv_cost`, `theta`. Optional:
//! `p_high` (default 0.5) and the simulation keys `n_paths`, `dt`,
//! `horizon`, `seed`.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mc::SimConfig;
use crate::params::{EconParams, MarketParams};

const MODEL_KEYS: [&str; 8] = ["alpha", "sigma", "r", "pi_low", "pi_high", "xi", "inv_cost", "theta"];
const OPTIONAL_KEYS: [&str; 5] = ["p_high", "n_paths", "dt", "horizon", "seed"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelConfig {
    pub market: MarketParams,
    pub econ: EconParams,
    pub sim: SimConfig,
}

fn value<T: FromStr>(map: &BTreeMap<String, String>, key: &str) -> Result<Option<T>> {
    map.get(key)
        .map(|raw| {
            raw.parse::<T>()
                .map_err(|_| Error::Config(format!("key `{key}`: cannot parse `{raw}`")))
        })
        .transpose()
}

fn required(map: &BTreeMap<String, String>, key: &str) -> Result<f64> {
    value(map, key)?.ok_or_else(|| Error::Config(format!("missing required key `{key}`")))
}

impl ModelConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(Error::Config(format!(
                    "line {}: expected `key = value`, got `{line}`",
                    n + 1
                )));
            };
            let key = k.trim();
            if !MODEL_KEYS.contains(&key) && !OPTIONAL_KEYS.contains(&key) {
                return Err(Error::Config(format!("line {}: unknown key `{key}`", n + 1)));
            }
            if map.insert(key.to_string(), v.trim().to_string()).is_some() {
                return Err(Error::Config(format!("line {}: duplicate key `{key}`", n + 1)));
            }
        }
        let market = MarketParams::new(required(&map, "alpha")?, required(&map, "sigma")?, required(&map, "r")?)
            .map_err(as_config)?;
        let mut econ = EconParams::new(
            required(&map, "pi_low")?,
            required(&map, "pi_high")?,
            required(&map, "xi")?,
            required(&map, "inv_cost")?,
            required(&map, "theta")?,
        )
        .map_err(as_config)?;
        if let Some(p) = value(&map, "p_high")? {
            econ = econ.with_p_high(p).map_err(as_config)?;
        }
        let d = SimConfig::default();
        let sim = SimConfig {
            n_paths: value(&map, "n_paths")?.unwrap_or(d.n_paths),
            dt: value(&map, "dt")?.unwrap_or(d.dt),
            horizon: value(&map, "horizon")?.unwrap_or(d.horizon),
            seed: value(&map, "seed")?.unwrap_or(d.seed),
        };
        sim.validate().map_err(as_config)?;
        Ok(Self { market, econ, sim })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

fn as_config(e: Error) -> Error {
    match e {
        Error::Config(_) => e,
        other => Error::Config(other.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const REFERENCE: &str = "\
# reference
alpha = 0.1
sigma = 1.2
r = 1
pi_low = 1
pi_high = 1.8
xi = 30   # monopoly benefit
inv_cost = 10
theta = 0.6
seed = 7
";

    #[test]
    fn parses_reference() {
        let c = ModelConfig::parse(REFERENCE).unwrap();
        assert_eq!(c.market.sigma, 1.2);
        assert_eq!(c.econ.xi, 30.0);
        assert_eq!(c.econ.p_high, 0.5);
        assert_eq!(c.sim.seed, 7);
        assert_eq!(c.sim.n_paths, SimConfig::default().n_paths);
    }

    #[test]
    fn errors_name_the_key() {
        let bad = REFERENCE.replace("sigma = 1.2", "sigma = abc");
        assert!(ModelConfig::parse(&bad).unwrap_err().to_string().contains("sigma"));
        let neg = REFERENCE.replace("theta = 0.6", "theta = 1.5");
        assert!(ModelConfig::parse(&neg).unwrap_err().to_string().contains("theta"));
        let missing = REFERENCE.replace("inv_cost = 10", "");
        assert!(ModelConfig::parse(&missing)
            .unwrap_err()
            .to_string()
            .contains("inv_cost"));
        let unknown = format!("{REFERENCE}\nfoo = 1\n");
        assert!(ModelConfig::parse(&unknown).unwrap_err().to_string().contains("foo"));
        let paths = format!("{REFERENCE}\nn_paths = -3\n");
        assert!(ModelConfig::parse(&paths).unwrap_err().to_string().contains("n_paths"));
    }
}
