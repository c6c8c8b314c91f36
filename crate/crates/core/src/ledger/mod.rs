//! Blow-up ledgers: total transforms of named divisors and of the relative
//! canonical class through a chain of blow-ups of a threefold along smooth
//! curves, and the log canonical thresholds read off from them.
//!
//! At each step with center `C` and new exceptional divisor `E`,
//!
//! ```text
//! ord_E(pullback of W) = sum over V containing C of coeff_V(W) * mult_C(V)
//! coeff_E(K_top - f^*K)  = sum over V of coeff_V(K_top - f^*K) * mult_C(V) + increment
//! ```
//!
//! where the increment is the codimension of the center minus one (so `1`
//! for a curve in a threefold).

mod bounds;
mod config;

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::chow::ChowError;
use crate::expr::ExprError;
use crate::scalar::{eval_ratfunc_at, Domain, DomainSign, RatFuncD, Scalar, ScalarError};

pub use bounds::{
    minimax_ord_bound, ord_fd_case_checks, ord_fd_case_checks_with, Affine, MinimaxBound,
};
pub use config::{builtin_config, BlowupStep, LedgerConfig, BUILTIN_NAME};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LedgerError {
    #[error("unknown divisor {0:?}")]
    UnknownDivisor(String),
    #[error("exceptional divisor name {0:?} is already in use")]
    DuplicateName(String),
    #[error("multiplicity of {divisor} along {center} is negative: {value}")]
    NegativeMultiplicity { divisor: String, center: String, value: String },
    #[error("malformed ledger config: {0}")]
    Config(String),
    #[error("boundary {0:?} has zero order along every divisor")]
    NoFiniteRatio(String),
    #[error("cannot compare {0} and {1} uniformly on the domain")]
    NoUniformMinimum(String, String),
    #[error("order of {boundary} along {divisor} has no fixed sign: {value}")]
    IndefiniteOrder { boundary: String, divisor: String, value: String },
    #[error("d = {0} is outside the validity domain")]
    Domain(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Chow(#[from] ChowError),
}

/// Divisor on one model, as prime-divisor name -> coefficient.
pub type Coeffs<F> = BTreeMap<String, F>;

/// State of the ledger on one model of the chain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Stage<F> {
    /// Exceptional divisor created to reach this model (`None` for the start).
    pub exceptional: Option<String>,
    /// Prime divisors present, in creation order.
    pub primes: Vec<String>,
    /// Pullback of each tracked divisor.
    pub tracked: BTreeMap<String, Coeffs<F>>,
    /// `K_model - f^*K_base`.
    pub canonical: Coeffs<F>,
}

impl<F: Scalar> Stage<F> {
    pub fn coefficient(&self, tracked: &str, prime: &str) -> Result<F, LedgerError> {
        let row = self
            .tracked
            .get(tracked)
            .ok_or_else(|| LedgerError::UnknownDivisor(tracked.to_string()))?;
        if !self.primes.iter().any(|p| p == prime) {
            return Err(LedgerError::UnknownDivisor(prime.to_string()));
        }
        Ok(row.get(prime).cloned().unwrap_or_else(F::zero))
    }

    pub fn canonical_coefficient(&self, prime: &str) -> Result<F, LedgerError> {
        if !self.primes.iter().any(|p| p == prime) {
            return Err(LedgerError::UnknownDivisor(prime.to_string()));
        }
        Ok(self.canonical.get(prime).cloned().unwrap_or_else(F::zero))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlowupLedger<F> {
    pub name: String,
    pub d: F,
    pub steps: Vec<BlowupStep>,
    pub stages: Vec<Stage<F>>,
    #[serde(skip)]
    domain: Domain,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LctTerm<F> {
    pub divisor: String,
    pub log_discrepancy: F,
    pub order: F,
    pub ratio: F,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LctResult<F> {
    pub boundary: String,
    pub value: F,
    pub argmin: String,
    pub terms: Vec<LctTerm<F>>,
}

fn lift<F: Scalar>(f: &RatFuncD, d: &F) -> Result<F, LedgerError> {
    Ok(eval_ratfunc_at(f, d)?)
}

fn lift_row<F: Scalar>(row: &BTreeMap<String, RatFuncD>, d: &F) -> Result<Coeffs<F>, LedgerError> {
    row.iter()
        .map(|(k, v)| Ok((k.clone(), lift(v, d)?)))
        .filter(|r: &Result<(String, F), LedgerError>| r.as_ref().map_or(true, |(_, v)| !v.is_zero()))
        .collect()
}

impl<F: Scalar> BlowupLedger<F> {
    /// Replay `config` at degree `d` (a concrete rational or the symbol `d`).
    pub fn replay(config: &LedgerConfig, d: &F) -> Result<Self, LedgerError> {
        let domain = config.domain();
        if !(d.clone() - F::from_rat(domain.lower.clone())).sign_on(&domain).is_nonnegative() {
            return Err(LedgerError::Domain(d.to_string()));
        }
        config.validate()?;

        let mut stage = Stage {
            exceptional: None,
            primes: config.primes.clone(),
            tracked: config
                .tracked
                .iter()
                .map(|(name, row)| Ok((name.clone(), lift_row(row, d)?)))
                .collect::<Result<_, LedgerError>>()?,
            canonical: lift_row(&config.canonical, d)?,
        };
        let mut stages = vec![stage.clone()];

        for step in &config.steps {
            let mut mults = Vec::new();
            for (divisor, m) in &step.incident {
                let m = lift(m, d)?;
                if !m.sign_on(&domain).is_nonnegative() {
                    return Err(LedgerError::NegativeMultiplicity {
                        divisor: divisor.clone(),
                        center: step.center.clone(),
                        value: m.to_string(),
                    });
                }
                mults.push((divisor.clone(), m));
            }
            let order_along = |row: &Coeffs<F>| {
                mults.iter().fold(F::zero(), |acc, (v, m)| {
                    acc + row.get(v).cloned().unwrap_or_else(F::zero) * m.clone()
                })
            };
            for row in stage.tracked.values_mut() {
                let ord = order_along(row);
                if !ord.is_zero() {
                    row.insert(step.exceptional.clone(), ord);
                }
            }
            let k = order_along(&stage.canonical) + lift(&step.discrepancy_increment, d)?;
            if !k.is_zero() {
                stage.canonical.insert(step.exceptional.clone(), k);
            }
            stage.primes.push(step.exceptional.clone());
            stage.exceptional = Some(step.exceptional.clone());
            stages.push(stage.clone());
        }

        Ok(BlowupLedger {
            name: config.name.clone(),
            d: d.clone(),
            steps: config.steps.clone(),
            stages,
            domain,
        })
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn last(&self) -> &Stage<F> {
        self.stages.last().expect("at least the initial stage")
    }

    /// Coefficient of the relative canonical class along each exceptional
    /// divisor, in creation order.
    pub fn discrepancies(&self) -> Vec<(String, F)> {
        let last = self.last();
        self.steps
            .iter()
            .map(|s| (s.exceptional.clone(), last.canonical_coefficient(&s.exceptional).unwrap()))
            .collect()
    }

    /// `A(E) = 1 + ord_E(K_top - f^*K_base)`.
    pub fn log_discrepancy(&self, prime: &str) -> Result<F, LedgerError> {
        Ok(F::one() + self.last().canonical_coefficient(prime)?)
    }

    /// `lct = min over prime divisors E with ord_E(boundary) > 0 of A(E)/ord_E(boundary)`.
    ///
    /// Symbolic values are compared by exact sign analysis on the domain; a
    /// pair whose difference changes sign there is an error.
    pub fn lct(&self, boundary: &str) -> Result<LctResult<F>, LedgerError> {
        let last = self.last();
        if !last.tracked.contains_key(boundary) {
            return Err(LedgerError::UnknownDivisor(boundary.to_string()));
        }
        let mut terms = Vec::new();
        for prime in &last.primes {
            let order = last.coefficient(boundary, prime)?;
            match order.sign_on(&self.domain) {
                DomainSign::Zero => continue,
                DomainSign::Positive => {}
                _ => {
                    return Err(LedgerError::IndefiniteOrder {
                        boundary: boundary.to_string(),
                        divisor: prime.clone(),
                        value: order.to_string(),
                    })
                }
            }
            let a = self.log_discrepancy(prime)?;
            let ratio = a.try_div(&order)?;
            terms.push(LctTerm { divisor: prime.clone(), log_discrepancy: a, order, ratio });
        }
        let mut best: Option<&LctTerm<F>> = None;
        for term in &terms {
            best = match best {
                None => Some(term),
                Some(b) => {
                    let diff = (term.ratio.clone() - b.ratio.clone()).sign_on(&self.domain);
                    if diff.is_nonnegative() {
                        Some(b)
                    } else if diff.is_nonpositive() {
                        Some(term)
                    } else {
                        return Err(LedgerError::NoUniformMinimum(
                            b.ratio.to_string(),
                            term.ratio.to_string(),
                        ));
                    }
                }
            };
        }
        let best = best.ok_or_else(|| LedgerError::NoFiniteRatio(boundary.to_string()))?;
        Ok(LctResult {
            boundary: boundary.to_string(),
            value: best.ratio.clone(),
            argmin: best.divisor.clone(),
            terms: terms.clone(),
        })
    }
}

/// Replay of the built-in resolution of the pair (secant variety, tangent surface).
pub fn secant_resolution<F: Scalar>(d: &F) -> Result<BlowupLedger<F>, LedgerError> {
    BlowupLedger::replay(&builtin_config(), d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_ratfunc;
    use crate::scalar::Rat;

    fn rf(s: &str) -> RatFuncD {
        parse_ratfunc(s).unwrap()
    }

    fn sym() -> BlowupLedger<RatFuncD> {
        secant_resolution(&RatFuncD::d()).unwrap()
    }

    #[test]
    fn resolution_table() {
        let l = sym();
        let s1 = &l.stages[1];
        assert_eq!(s1.coefficient("T", "E1").unwrap(), rf("d/(d-2)"));
        assert_eq!(s1.canonical_coefficient("E1").unwrap(), rf("2/(d-2)"));
        let s2 = l.last();
        assert_eq!(s2.coefficient("T", "E2").unwrap(), rf("2*d/(d-2)"));
        assert_eq!(s2.coefficient("T", "E1").unwrap(), rf("d/(d-2)"));
        assert_eq!(s2.coefficient("T", "Z").unwrap(), rf("2/(d-2)"));
        assert_eq!(s2.canonical_coefficient("E2").unwrap(), rf("4/(d-2)"));
        assert_eq!(s2.canonical_coefficient("Z").unwrap(), rf("-(d-4)/(d-2)"));
    }

    #[test]
    fn log_discrepancies() {
        let l = sym();
        assert_eq!(l.log_discrepancy("Z").unwrap(), rf("2/(d-2)"));
        assert_eq!(l.log_discrepancy("E2").unwrap(), rf("(d+2)/(d-2)"));
        assert_eq!(l.log_discrepancy("T").unwrap(), RatFuncD::one());
        assert!(matches!(l.log_discrepancy("E9"), Err(LedgerError::UnknownDivisor(_))));
    }

    #[test]
    fn lct_of_tangent_surface() {
        let r = sym().lct("T").unwrap();
        assert_eq!(r.value, rf("(d+2)/(2*d)"));
        assert_eq!(r.argmin, "E2");
        let r4 = secant_resolution(&Rat::from(4)).unwrap().lct("T").unwrap();
        assert_eq!(r4.value, Rat::frac(3, 4));
    }

    #[test]
    fn lct_of_exceptional_boundary() {
        let r = sym().lct("Z").unwrap();
        let orders: Vec<_> = r.terms.iter().map(|t| (t.divisor.as_str(), t.order.clone())).collect();
        assert_eq!(
            orders,
            vec![("Z", RatFuncD::one()), ("E1", RatFuncD::one()), ("E2", RatFuncD::from_int(2))]
        );
        assert_eq!(r.value, rf("2/(d-2)"));
        assert_eq!(r.argmin, "Z");
    }

    #[test]
    fn empty_chain_is_seeds() {
        let mut cfg = builtin_config();
        cfg.steps.clear();
        let l = BlowupLedger::replay(&cfg, &RatFuncD::d()).unwrap();
        assert_eq!(l.stages.len(), 1);
        assert_eq!(l.last().coefficient("T", "Z").unwrap(), rf("2/(d-2)"));
        assert_eq!(l.last().coefficient("T", "T").unwrap(), RatFuncD::one());
    }

    #[test]
    fn rejects_bad_configs() {
        let mut cfg = builtin_config();
        cfg.steps[1].incident.insert("Q".into(), RatFuncD::one());
        assert!(matches!(secant_resolution_with(&cfg), Err(LedgerError::UnknownDivisor(_))));

        let mut cfg = builtin_config();
        cfg.steps[1].exceptional = "Z".into();
        assert!(matches!(secant_resolution_with(&cfg), Err(LedgerError::DuplicateName(_))));

        let mut cfg = builtin_config();
        cfg.steps[0].incident.insert("T".into(), RatFuncD::from_int(-1));
        assert!(matches!(secant_resolution_with(&cfg), Err(LedgerError::NegativeMultiplicity { .. })));

        assert!(matches!(
            secant_resolution(&Rat::from(3)),
            Err(LedgerError::Domain(_))
        ));
    }

    fn secant_resolution_with(cfg: &LedgerConfig) -> Result<BlowupLedger<RatFuncD>, LedgerError> {
        BlowupLedger::replay(cfg, &RatFuncD::d())
    }

    #[test]
    fn no_positive_order() {
        let mut cfg = builtin_config();
        cfg.tracked.insert("N".into(), BTreeMap::new());
        let l = secant_resolution_with(&cfg).unwrap();
        assert_eq!(l.lct("N"), Err(LedgerError::NoFiniteRatio("N".into())));
    }
}
