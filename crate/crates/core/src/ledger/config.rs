use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::LedgerError;
use crate::expr::parse_ratfunc;
use crate::scalar::{Domain, Rat, RatFuncD};

pub const BUILTIN_NAME: &str = "enp-secant-resolution";
const BUILTIN_TOML: &str = include_str!("enp_secant_resolution.toml");

/// One blow-up along a smooth center.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlowupStep {
    pub center: String,
    pub exceptional: String,
    /// Added to the canonical coefficient of the new exceptional divisor.
    pub discrepancy_increment: RatFuncD,
    /// Order of contact of the incident divisors along the center, when they
    /// meet tangentially there. Recorded for downstream restriction checks;
    /// it does not enter the replay.
    pub contact_multiplicity: Option<u32>,
    /// Prime divisors containing the center, with their multiplicity along it.
    pub incident: BTreeMap<String, RatFuncD>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LedgerConfig {
    pub name: String,
    pub domain_min: Rat,
    pub primes: Vec<String>,
    pub canonical: BTreeMap<String, RatFuncD>,
    pub tracked: BTreeMap<String, BTreeMap<String, RatFuncD>>,
    pub steps: Vec<BlowupStep>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    name: String,
    #[serde(default = "default_min")]
    domain_min: i64,
    primes: Vec<String>,
    #[serde(default)]
    canonical: BTreeMap<String, String>,
    #[serde(default)]
    tracked: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default)]
    steps: Vec<RawStep>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStep {
    center: String,
    exceptional: String,
    #[serde(default = "default_increment")]
    discrepancy_increment: String,
    contact_multiplicity: Option<u32>,
    incident: BTreeMap<String, String>,
}

fn default_min() -> i64 {
    4
}

fn default_increment() -> String {
    "1".to_string()
}

fn parse_row(row: BTreeMap<String, String>) -> Result<BTreeMap<String, RatFuncD>, LedgerError> {
    row.into_iter().map(|(k, v)| Ok((k, parse_ratfunc(&v)?))).collect()
}

impl LedgerConfig {
    pub fn from_toml_str(src: &str) -> Result<Self, LedgerError> {
        let raw: RawConfig = toml::from_str(src).map_err(|e| LedgerError::Config(e.to_string()))?;
        let steps = raw
            .steps
            .into_iter()
            .map(|s| {
                Ok(BlowupStep {
                    center: s.center,
                    exceptional: s.exceptional,
                    discrepancy_increment: parse_ratfunc(&s.discrepancy_increment)?,
                    contact_multiplicity: s.contact_multiplicity,
                    incident: parse_row(s.incident)?,
                })
            })
            .collect::<Result<_, LedgerError>>()?;
        let cfg = LedgerConfig {
            name: raw.name,
            domain_min: Rat::from(raw.domain_min),
            primes: raw.primes,
            canonical: parse_row(raw.canonical)?,
            tracked: raw
                .tracked
                .into_iter()
                .map(|(k, row)| Ok((k, parse_row(row)?)))
                .collect::<Result<_, LedgerError>>()?,
            steps,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn domain(&self) -> Domain {
        Domain::from_lower(self.domain_min.clone())
    }

    /// Every coefficient must refer to a prime divisor that exists on the
    /// model it lives on, and exceptional names must be fresh.
    pub fn validate(&self) -> Result<(), LedgerError> {
        let mut primes = BTreeSet::new();
        for p in &self.primes {
            if !primes.insert(p.clone()) {
                return Err(LedgerError::DuplicateName(p.clone()));
            }
        }
        let known = |primes: &BTreeSet<String>, name: &String| {
            if primes.contains(name) {
                Ok(())
            } else {
                Err(LedgerError::UnknownDivisor(name.clone()))
            }
        };
        for name in self.canonical.keys() {
            known(&primes, name)?;
        }
        for row in self.tracked.values() {
            for name in row.keys() {
                known(&primes, name)?;
            }
        }
        for step in &self.steps {
            for name in step.incident.keys() {
                known(&primes, name)?;
            }
            if !primes.insert(step.exceptional.clone()) {
                return Err(LedgerError::DuplicateName(step.exceptional.clone()));
            }
        }
        Ok(())
    }

    /// Step that creates `exceptional`, if any.
    pub fn step_creating(&self, exceptional: &str) -> Option<&BlowupStep> {
        self.steps.iter().find(|s| s.exceptional == exceptional)
    }
}

/// The resolution chain of the secant variety and its tangent surface.
pub fn builtin_config() -> LedgerConfig {
    LedgerConfig::from_toml_str(BUILTIN_TOML).expect("built-in ledger config parses")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_parses() {
        let cfg = builtin_config();
        assert_eq!(cfg.name, BUILTIN_NAME);
        assert_eq!(cfg.steps.len(), 2);
        assert_eq!(cfg.steps[0].contact_multiplicity, Some(2));
        assert_eq!(cfg.steps[1].incident.len(), 3);
    }

    #[test]
    fn rejects_malformed() {
        assert!(matches!(LedgerConfig::from_toml_str("name = 1"), Err(LedgerError::Config(_))));
        let bad_expr = "name='x'\nprimes=['A']\n[canonical]\nA='1/'";
        assert!(matches!(LedgerConfig::from_toml_str(bad_expr), Err(LedgerError::Expr(_))));
        let unknown = "name='x'\nprimes=['A']\n[[steps]]\ncenter='c'\nexceptional='E'\nincident={B='1'}";
        assert_eq!(
            LedgerConfig::from_toml_str(unknown),
            Err(LedgerError::UnknownDivisor("B".into()))
        );
        let extra = "name='x'\nprimes=['A']\nbogus=1";
        assert!(matches!(LedgerConfig::from_toml_str(extra), Err(LedgerError::Config(_))));
    }
}
