//! K-stability invariants: `S` from volume profiles, the Fujita-type upper
//! bound on `S`, alpha invariants from the resolution ledger, and the
//! aggregation of Zhuang's equivariant criterion.

use serde::Serialize;
use thiserror::Error;

use crate::chow::{anticanonical_volume, cylinder_divisor_check, ChowError, NamedDivisors};
use crate::ledger::{ord_fd_case_checks, secant_resolution, LedgerError};
use crate::report::TreeNode;
use crate::scalar::{Domain, DomainSign, PiecewiseError, PiecewisePoly, Rat, Scalar, ScalarError};

/// Dimension of the secant variety.
pub const DIM: u32 = 3;

/// Orbits of `PGL(2)` acting on the secant variety: the curve, the tangent
/// surface minus the curve, and the open orbit.
pub const AUT_ORBITS: [&str; 3] = ["C", "T \\ C", "Sigma \\ T"];

/// The only invariant prime divisor, the closure of the middle orbit.
pub const INVARIANT_PRIME: &str = "T";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KstabError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Piecewise(#[from] PiecewiseError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Ledger(#[from] LedgerError),
    #[error(transparent)]
    Chow(#[from] ChowError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum SValue<F> {
    Exact(F),
    UpperBound(F),
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivisorInvariants<F> {
    pub name: String,
    #[serde(rename = "A")]
    pub a: F,
    pub tau: Option<F>,
    #[serde(rename = "S")]
    pub s: SValue<F>,
    pub ord_on_boundary: F,
}

impl<F: Scalar> DivisorInvariants<F> {
    /// `S <= (n/(n+1)) tau` when both are known exactly.
    pub fn satisfies_tau_bound(&self, n: u32, domain: &Domain) -> Option<bool> {
        match (&self.s, &self.tau) {
            (SValue::Exact(s), Some(tau)) => {
                let bound = tau.clone() * F::frac(n as i64, n as i64 + 1);
                Some((bound - s.clone()).sign_on(domain).is_nonnegative())
            }
            _ => None,
        }
    }
}

/// `S(F) = (1/V) * integral_0^oo vol(-K - xF) dx`.
pub fn s_invariant<F: Scalar>(
    volume: &PiecewisePoly<F>,
    anticanonical_volume: &F,
) -> Result<F, KstabError> {
    if anticanonical_volume.is_zero() {
        return Err(KstabError::InvalidInput("anticanonical volume is zero".into()));
    }
    if !volume.start().is_zero() {
        return Err(KstabError::InvalidInput(format!("volume starts at {}, not 0", volume.start())));
    }
    volume.vanishing_threshold()?;
    let at_zero = volume.eval(&Rat::zero())?;
    if at_zero != *anticanonical_volume {
        return Err(KstabError::InvalidInput(format!(
            "vol(0) = {at_zero} differs from {anticanonical_volume}"
        )));
    }
    Ok(volume.integrate_all().try_div(anticanonical_volume)?)
}

/// Volume profile of a divisor linearly equivalent to `-K`.
pub fn anticanonical_profile<F: Scalar>(volume: F) -> PiecewisePoly<F> {
    PiecewisePoly::power_falloff(volume, Rat::one(), DIM, Rat::from(2)).expect("valid profile")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FujitaBoundInput<F> {
    pub n: u32,
    /// Lower bound for the lct of the general member at the generic point.
    pub t: F,
    /// `ord_F D <= A(F)/s` for every relevant `D`.
    pub s: F,
    #[serde(rename = "A")]
    pub a: F,
}

/// `(A/(n+1)) * ((n-1)/s + 1/t)`, requiring `0 < t <= s` on `domain`.
pub fn fujita_bound<F: Scalar>(input: &FujitaBoundInput<F>, domain: &Domain) -> Result<F, KstabError> {
    if !input.t.sign_on(domain).is_positive() {
        return Err(KstabError::InvalidInput(format!("t = {} must be positive", input.t)));
    }
    if !(input.s.clone() - input.t.clone()).sign_on(domain).is_nonnegative() {
        return Err(KstabError::InvalidInput(format!("need t <= s, got t = {}, s = {}", input.t, input.s)));
    }
    let n = input.n as i64;
    let inner = F::from_int(n - 1).try_div(&input.s)? + input.t.recip()?;
    Ok(input.a.clone() * inner.try_div(&F::from_int(n + 1))?)
}

/// Checks `vol(x) = ((ord - x)/(ord - A/s))^3 * vol(A/s)` for a cubic volume
/// profile at one point `A/s <= x <= ord`.
pub fn volume_scaling_identity_check(
    ord_d0: &Rat,
    s_inv_a: &Rat,
    x: &Rat,
    base_volume: &PiecewisePoly<Rat>,
) -> Result<bool, KstabError> {
    if !(s_inv_a <= x && x <= ord_d0) || s_inv_a == ord_d0 {
        return Err(KstabError::InvalidInput(format!(
            "x = {x} must lie in [{s_inv_a}, {ord_d0}] with a nonempty interval"
        )));
    }
    let ratio = (ord_d0.clone() - x.clone()).checked_div(&(ord_d0.clone() - s_inv_a.clone()))?;
    let rhs = ratio.pow(DIM) * base_volume.eval(s_inv_a)?;
    Ok(base_volume.eval(x)? == rhs)
}

/// Alpha invariant for the automorphism group: the lct of the invariant
/// prime divisor, read off the resolution ledger.
pub fn equivariant_alpha<F: Scalar>(d: &F) -> Result<F, KstabError> {
    Ok(secant_resolution(d)?.lct(INVARIANT_PRIME)?.value)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaWitness<F> {
    pub divisor_description: String,
    pub multiplicity: F,
    pub log_discrepancy: F,
    pub lct_upper_bound: F,
    pub class_check: bool,
}

/// `D = 2 * beta(pi^-1 l)` is anticanonical and has multiplicity 2 along a
/// prime divisor, so `lct(D) <= 1/2`.
pub fn alpha_upper_bound_witness<F: Scalar>(d: &F) -> Result<AlphaWitness<F>, KstabError> {
    let divs = NamedDivisors::new(d.clone())?;
    let report = cylinder_divisor_check(&divs)?;
    let class_check = report.item("beta(pi^-1 l) ~ -(1/2)K").is_some_and(|i| i.passed);
    let multiplicity = F::from_int(2);
    let log_discrepancy = F::one();
    Ok(AlphaWitness {
        divisor_description: "2*beta(pi^-1(l)) for a line l in P^2".into(),
        lct_upper_bound: log_discrepancy.try_div(&multiplicity)?,
        multiplicity,
        log_discrepancy,
        class_check,
    })
}

/// Invariants recorded for the invariant divisor and for `Z`.
pub fn divisor_invariants<F: Scalar>(d: &F) -> Result<Vec<DivisorInvariants<F>>, KstabError> {
    let ledger = secant_resolution(d)?;
    let volume = anticanonical_volume(d)?;
    let s_t = s_invariant(&anticanonical_profile(volume.clone()), &volume)?;
    Ok(vec![
        DivisorInvariants {
            name: "T".into(),
            a: ledger.log_discrepancy("T")?,
            tau: Some(F::one()),
            s: SValue::Exact(s_t),
            ord_on_boundary: ledger.last().coefficient("T", "T")?,
        },
        DivisorInvariants {
            name: "Z".into(),
            a: ledger.log_discrepancy("Z")?,
            tau: None,
            s: SValue::Unknown,
            ord_on_boundary: ledger.last().coefficient("T", "Z")?,
        },
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Conclusion {
    KPolystable,
    Inconclusive,
}

/// One family of invariant divisors with `A - S` bounded below.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseMargin<F> {
    pub case: String,
    /// `None` when `A` is arbitrary; `S_or_bound` and `margin` are then
    /// coefficients of `A`.
    #[serde(rename = "A")]
    pub a: Option<F>,
    #[serde(rename = "S_or_bound")]
    pub s_or_bound: F,
    pub margin: F,
    pub margin_sign: DomainSign,
    pub citation: String,
}

impl<F: Scalar> CaseMargin<F> {
    fn show(&self, v: &F) -> String {
        match self.a {
            Some(_) => v.to_string(),
            None => format!("A*({v})"),
        }
    }

    pub fn to_tree(&self) -> TreeNode {
        TreeNode::branch(
            "case",
            vec![
                TreeNode::leaf("A", self.a.as_ref().map_or("A".to_string(), |a| a.to_string())),
                TreeNode::leaf("S_or_bound", self.show(&self.s_or_bound)),
                TreeNode::leaf("margin", self.show(&self.margin)),
                TreeNode::leaf("margin_sign", format!("{:?}", self.margin_sign)),
                TreeNode::leaf("citation", &self.citation),
            ],
        )
        .with_value(&self.case)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Claim {
    pub claim: String,
    pub citation: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZhuangVerdict<F> {
    pub d: F,
    pub conclusion: Conclusion,
    pub cases: Vec<CaseMargin<F>>,
    /// Supporting arithmetic for `s = 1` in the curve-centered case.
    pub supporting_checks_passed: bool,
    pub assumptions: Vec<String>,
    pub derived: Vec<Claim>,
}

impl<F: Scalar> ZhuangVerdict<F> {
    pub fn to_tree(&self) -> TreeNode {
        let mut children = vec![
            TreeNode::leaf("d", &self.d),
            TreeNode::leaf(
                "conclusion",
                match self.conclusion {
                    Conclusion::KPolystable => "K-polystable by the equivariant criterion",
                    Conclusion::Inconclusive => "inconclusive",
                },
            ),
        ];
        children.extend(self.cases.iter().map(CaseMargin::to_tree));
        children.push(TreeNode::leaf("supporting_checks", if self.supporting_checks_passed { "pass" } else { "fail" }));
        children.push(TreeNode::branch(
            "assumptions",
            self.assumptions.iter().map(|a| TreeNode::leaf("assumption", a)).collect(),
        ));
        children.push(TreeNode::branch(
            "derived",
            self.derived
                .iter()
                .map(|c| {
                    TreeNode::branch("claim", vec![TreeNode::leaf("citation", &c.citation)]).with_value(&c.claim)
                })
                .collect(),
        ));
        TreeNode::branch("zhuang_check", children)
    }
}

/// Zhuang's criterion with the equivariant lct as `t`.
pub fn zhuang_check<F: Scalar>(d: &F) -> Result<ZhuangVerdict<F>, KstabError> {
    let t = equivariant_alpha(d)?;
    zhuang_check_with(d, &t)
}

/// Zhuang's criterion with an arbitrary lct floor `t` in the curve-centered
/// case.
pub fn zhuang_check_with<F: Scalar>(d: &F, t: &F) -> Result<ZhuangVerdict<F>, KstabError> {
    let ledger = secant_resolution(d)?;
    let domain = ledger.domain().clone();
    let supporting = ord_fd_case_checks(&ledger)?.passed;

    let inv = divisor_invariants(d)?;
    let t_inv = &inv[0];
    let s_t = match &t_inv.s {
        SValue::Exact(s) => s.clone(),
        _ => unreachable!("S(T) is computed exactly"),
    };
    let margin_t = t_inv.a.clone() - s_t.clone();
    let case_t = CaseMargin {
        case: "invariant divisor T".into(),
        a: Some(t_inv.a.clone()),
        s_or_bound: s_t,
        margin_sign: margin_t.sign_on(&domain),
        margin: margin_t,
        citation: "S from the cubic volume profile of T ~ -K; A(T) = 1 as a prime divisor".into(),
    };

    let factor = fujita_bound(
        &FujitaBoundInput { n: DIM, t: t.clone(), s: F::one(), a: F::one() },
        &domain,
    )?;
    let margin_c = F::one() - factor.clone();
    let case_c = CaseMargin {
        case: "divisors over X centered on C".into(),
        a: None,
        s_or_bound: factor,
        margin_sign: margin_c.sign_on(&domain),
        margin: margin_c,
        citation: format!(
            "Fujita-type bound with t = {t} (lct floor) and s = 1 (order bound ord_F D <= A(F))"
        ),
    };

    let conclusive = supporting && case_t.margin_sign.is_positive() && case_c.margin_sign.is_positive();
    let derived = if conclusive {
        vec![Claim {
            claim: "delta(Sigma) = 1".into(),
            citation: "K-polystable and not K-stable (nontrivial automorphisms) forces delta = 1; not computed"
                .into(),
        }]
    } else {
        Vec::new()
    };
    Ok(ZhuangVerdict {
        d: d.clone(),
        conclusion: if conclusive { Conclusion::KPolystable } else { Conclusion::Inconclusive },
        cases: vec![case_t, case_c],
        supporting_checks_passed: supporting,
        assumptions: vec!["Aut(Sigma) = PGL(2) is reductive".into()],
        derived,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_ratfunc;
    use crate::scalar::RatFuncD;

    fn rf(s: &str) -> RatFuncD {
        parse_ratfunc(s).unwrap()
    }

    #[test]
    fn s_of_cubic_profile() {
        let v = RatFuncD::d();
        assert_eq!(s_invariant(&anticanonical_profile(v.clone()), &v).unwrap(), rf("1/4"));
        let rect = PiecewisePoly::new(
            vec![Rat::zero(), Rat::one(), Rat::from(2)],
            vec![crate::scalar::Poly::constant(Rat::from(7)), crate::scalar::Poly::zero()],
        )
        .unwrap();
        assert_eq!(s_invariant(&rect, &Rat::from(7)).unwrap(), Rat::one());
        assert!(s_invariant(&rect, &Rat::from(6)).is_err());
        assert!(s_invariant(&rect.scale(&Rat::zero()), &Rat::zero()).is_err());
    }

    #[test]
    fn fujita_examples() {
        let dom = Domain::secant();
        let input = FujitaBoundInput { n: 3, t: rf("(d+2)/(2*d)"), s: RatFuncD::one(), a: RatFuncD::one() };
        assert_eq!(fujita_bound(&input, &dom).unwrap(), rf("(d+1)/(d+2)"));
        let unit = FujitaBoundInput { n: 3, t: Rat::one(), s: Rat::one(), a: Rat::one() };
        assert_eq!(fujita_bound(&unit, &dom).unwrap(), Rat::frac(3, 4));
        let bad = FujitaBoundInput { n: 3, t: Rat::from(2), s: Rat::one(), a: Rat::one() };
        assert!(fujita_bound(&bad, &dom).is_err());
        let zero = FujitaBoundInput { n: 3, t: Rat::zero(), s: Rat::one(), a: Rat::one() };
        assert!(fujita_bound(&zero, &dom).is_err());
    }

    #[test]
    fn volume_scaling() {
        let v = Rat::from(24);
        let base = PiecewisePoly::power_falloff(v.clone(), Rat::one(), 3, Rat::from(2)).unwrap();
        let half = Rat::frac(1, 2);
        assert!(volume_scaling_identity_check(&Rat::one(), &half, &Rat::frac(3, 4), &base).unwrap());
        assert!(volume_scaling_identity_check(&Rat::one(), &half, &half, &base).unwrap());
        let off = PiecewisePoly::power_falloff(v, Rat::frac(3, 2), 3, Rat::from(2)).unwrap();
        assert!(!volume_scaling_identity_check(&Rat::one(), &half, &Rat::frac(3, 4), &off).unwrap());
        assert!(volume_scaling_identity_check(&Rat::one(), &half, &Rat::frac(1, 4), &base).is_err());
    }

    #[test]
    fn alpha() {
        assert_eq!(equivariant_alpha(&RatFuncD::d()).unwrap(), rf("(d+2)/(2*d)"));
        assert_eq!(equivariant_alpha(&Rat::from(4)).unwrap(), Rat::frac(3, 4));
        assert!(equivariant_alpha(&Rat::from(3)).is_err());
        let w = alpha_upper_bound_witness(&RatFuncD::d()).unwrap();
        assert!(w.class_check);
        assert_eq!(w.lct_upper_bound, rf("1/2"));
    }

    #[test]
    fn verdicts() {
        let v = zhuang_check(&RatFuncD::d()).unwrap();
        assert_eq!(v.conclusion, Conclusion::KPolystable);
        assert_eq!(v.cases[0].margin, rf("3/4"));
        assert_eq!(v.cases[1].margin, rf("1/(d+2)"));
        assert_eq!(v.derived.len(), 1);

        let v4 = zhuang_check(&Rat::from(4)).unwrap();
        assert_eq!(v4.cases[1].margin, Rat::frac(1, 6));

        let adv = zhuang_check_with(&RatFuncD::d(), &rf("1/2")).unwrap();
        assert_eq!(adv.cases[1].margin, RatFuncD::zero());
        assert_eq!(adv.conclusion, Conclusion::Inconclusive);
        assert!(adv.derived.is_empty());

        let text = v.to_tree().render();
        assert!(text.contains("  case: invariant divisor T\n    A: 1\n    S_or_bound: 1/4\n    margin: 3/4\n"));
        assert!(text.contains("margin: A*(1/(d + 2))"));
    }
}
