//! Chow ring of the projective bundle `B = P(E) -> P^2` resolving the secant
//! variety, with `E` of rank two, `c1(E) = d - 1` and `c2(E) = d(d-1)/2`.
//!
//! Generators: `h`, the pullback of a line `A` on `P^2`, and `xi`, the
//! tautological class `H`. Relations: `h^3 = 0` and the Grothendieck relation
//! `xi^2 = c1 h xi - c2 h^2`. Classes are always stored reduced in the basis
//! `{1, h, xi, h^2, h xi, h^2 xi}` with `h^2 xi` the class of a point.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::expr::{Algebra, Expr, ExprError};
use crate::report::CheckReport;
use crate::scalar::{Domain, Rat, Scalar, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChowError {
    #[error("expected a divisor class, got {0}")]
    NotADivisor(String),
    #[error("singular linear system (determinant vanishes)")]
    Singular,
    #[error("inconsistent linear system: {0}")]
    Inconsistent(String),
    #[error("divisor relation violated: {0}")]
    RelationViolated(String),
    #[error("d = {d} is outside the range d >= {min}")]
    Domain { d: String, min: String },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

const BASIS: [(u32, u32); 6] = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (2, 1)];
const LABELS: [&str; 6] = ["1", "A", "H", "A^2", "A*H", "A^2*H"];
const POINT: usize = 5;

/// Reduced element of the Chow ring; index `i` is the coefficient of
/// `h^a xi^b` with `(a, b) = BASIS[i]`.
#[derive(Clone, PartialEq, Eq)]
pub struct ChowClass<F> {
    coeffs: [F; 6],
}

impl<F: Scalar> ChowClass<F> {
    pub fn zero() -> Self {
        ChowClass { coeffs: std::array::from_fn(|_| F::zero()) }
    }

    pub fn scalar(c: F) -> Self {
        let mut out = Self::zero();
        out.coeffs[0] = c;
        out
    }

    /// The divisor class `xi_coeff * H + h_coeff * A`.
    pub fn divisor(xi_coeff: F, h_coeff: F) -> Self {
        let mut out = Self::zero();
        out.coeffs[1] = h_coeff;
        out.coeffs[2] = xi_coeff;
        out
    }

    pub fn point() -> Self {
        let mut out = Self::zero();
        out.coeffs[POINT] = F::one();
        out
    }

    pub fn coeffs(&self) -> &[F; 6] {
        &self.coeffs
    }

    /// Coefficient of `H` (that is, `xi`).
    pub fn xi(&self) -> &F {
        &self.coeffs[2]
    }

    /// Coefficient of `A` (that is, `h`).
    pub fn h(&self) -> &F {
        &self.coeffs[1]
    }

    pub fn is_divisor(&self) -> bool {
        [0, 3, 4, 5].iter().all(|&i| self.coeffs[i].is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The degree-zero part, if the class is a pure scalar.
    pub fn as_scalar(&self) -> Option<F> {
        self.coeffs[1..].iter().all(|c| c.is_zero()).then(|| self.coeffs[0].clone())
    }

    pub fn scale(&self, c: &F) -> Self {
        ChowClass { coeffs: std::array::from_fn(|i| self.coeffs[i].clone() * c.clone()) }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        ChowClass { coeffs: std::array::from_fn(|i| self.coeffs[i].clone() + rhs.coeffs[i].clone()) }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        ChowClass { coeffs: std::array::from_fn(|i| self.coeffs[i].clone() - rhs.coeffs[i].clone()) }
    }

    pub fn neg(&self) -> Self {
        ChowClass { coeffs: std::array::from_fn(|i| -self.coeffs[i].clone()) }
    }
}

impl<F: Scalar> fmt::Display for ChowClass<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, label) in self.coeffs.iter().zip(LABELS).rev() {
            if c.is_zero() {
                continue;
            }
            let mut text = c.to_string();
            let negative = text.starts_with('-') && !text.contains(' ');
            if negative {
                text.remove(0);
            }
            if !first {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            } else if negative {
                write!(f, "-")?;
            }
            first = false;
            match (label, text.as_str()) {
                ("1", _) => write!(f, "{text}")?,
                (_, "1") => write!(f, "{label}")?,
                _ if text.contains(' ') || text.contains('/') => write!(f, "({text})*{label}")?,
                _ => write!(f, "{text}*{label}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl<F: Scalar> fmt::Debug for ChowClass<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Multiplication context: the Chern classes of `E` at a given degree `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChowRing<F> {
    d: F,
    c1: F,
    c2: F,
}

impl<F: Scalar> ChowRing<F> {
    pub fn new(d: F) -> Self {
        let c1 = d.clone() - F::one();
        let c2 = d.clone() * c1.clone() * F::frac(1, 2);
        ChowRing { d, c1, c2 }
    }

    pub fn with_chern(d: F, c1: F, c2: F) -> Self {
        ChowRing { d, c1, c2 }
    }

    /// `c2` solved from `xi^3 = c1^2 - c2` and `H^3 = deg = (d-1)(d-2)/2`.
    pub fn c2_from_degree(d: &F) -> F {
        let c1 = d.clone() - F::one();
        let degree = c1.clone() * (d.clone() - F::from_int(2)) * F::frac(1, 2);
        c1.clone() * c1 - degree
    }

    pub fn d(&self) -> &F {
        &self.d
    }

    pub fn c1(&self) -> &F {
        &self.c1
    }

    pub fn c2(&self) -> &F {
        &self.c2
    }

    /// Reduced form of the monomial `h^a xi^b`.
    fn monomial(&self, a: u32, b: u32) -> ChowClass<F> {
        if a + b > 3 || a >= 3 {
            return ChowClass::zero();
        }
        if b >= 2 {
            // xi^b = xi^(b-2) (c1 h xi - c2 h^2)
            let left = self.monomial(a + 1, b - 1).scale(&self.c1);
            let right = self.monomial(a + 2, b - 2).scale(&self.c2);
            return left.sub(&right);
        }
        let idx = BASIS.iter().position(|&m| m == (a, b)).expect("reduced monomial");
        let mut out = ChowClass::zero();
        out.coeffs[idx] = F::one();
        out
    }

    pub fn mul(&self, x: &ChowClass<F>, y: &ChowClass<F>) -> ChowClass<F> {
        let mut out = ChowClass::zero();
        for (i, ci) in x.coeffs.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            for (j, cj) in y.coeffs.iter().enumerate() {
                if cj.is_zero() {
                    continue;
                }
                let (a1, b1) = BASIS[i];
                let (a2, b2) = BASIS[j];
                let term = self.monomial(a1 + a2, b1 + b2).scale(&(ci.clone() * cj.clone()));
                out = out.add(&term);
            }
        }
        out
    }

    pub fn pow(&self, x: &ChowClass<F>, exp: u32) -> ChowClass<F> {
        (0..exp).fold(ChowClass::scalar(F::one()), |acc, _| self.mul(&acc, x))
    }

    /// Degree of the top-dimensional part (coefficient of the point class).
    pub fn degree(&self, x: &ChowClass<F>) -> F {
        x.coeffs[POINT].clone()
    }

    pub fn triple_intersection(
        &self,
        a: &ChowClass<F>,
        b: &ChowClass<F>,
        c: &ChowClass<F>,
    ) -> Result<F, ChowError> {
        for x in [a, b, c] {
            if !x.is_divisor() {
                return Err(ChowError::NotADivisor(x.to_string()));
            }
        }
        Ok(self.degree(&self.mul(&self.mul(a, b), c)))
    }

    pub fn h(&self) -> ChowClass<F> {
        ChowClass::divisor(F::zero(), F::one())
    }

    pub fn xi(&self) -> ChowClass<F> {
        ChowClass::divisor(F::one(), F::zero())
    }
}

/// The named divisor classes on `B`.
#[derive(Debug, Clone)]
pub struct NamedDivisors<F: Scalar> {
    ring: ChowRing<F>,
    classes: BTreeMap<&'static str, ChowClass<F>>,
}

impl<F: Scalar> NamedDivisors<F> {
    pub const NAMES: [&'static str; 7] = ["H", "A", "Z", "K_B", "T_tilde", "ell_fiber", "H0"];

    pub fn new(d: F) -> Result<Self, ChowError> {
        let ring = ChowRing::new(d.clone());
        let two = F::from_int(2);
        let h = ring.h();
        let xi = ring.xi();
        let mut classes = BTreeMap::new();
        classes.insert("H", xi.clone());
        classes.insert("A", h.clone());
        // exceptional divisor over the curve: Z ~ 2H - (d-2)A
        classes.insert("Z", ChowClass::divisor(two.clone(), -(d.clone() - two.clone())));
        classes.insert("K_B", ChowClass::divisor(-two.clone(), d.clone() - F::from_int(4)));
        // strict transform of the tangent surface: preimage of the conic Q
        classes.insert("T_tilde", h.scale(&two));
        classes.insert("ell_fiber", h.clone());
        classes.insert("H0", xi);
        let cat = NamedDivisors { ring, classes };
        cat.validate()?;
        Ok(cat)
    }

    fn validate(&self) -> Result<(), ChowError> {
        let k = self.get("K_B");
        let z = self.get("Z");
        let t = self.get("T_tilde");
        let two_a = self.get("A").scale(&F::from_int(2));
        if !k.add(z).add(&two_a).is_zero() {
            return Err(ChowError::RelationViolated("K_B + Z + 2A != 0".into()));
        }
        if !k.add(z).add(t).is_zero() {
            return Err(ChowError::RelationViolated("K_B + Z + T_tilde != 0".into()));
        }
        if self.get("H0") != self.get("H") {
            return Err(ChowError::RelationViolated("H0 !~ H".into()));
        }
        Ok(())
    }

    pub fn ring(&self) -> &ChowRing<F> {
        &self.ring
    }

    pub fn d(&self) -> &F {
        self.ring.d()
    }

    pub fn get(&self, name: &str) -> &ChowClass<F> {
        self.lookup(name).unwrap_or_else(|| panic!("unknown divisor {name}"))
    }

    pub fn lookup(&self, name: &str) -> Option<&ChowClass<F>> {
        self.classes.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'static str, &ChowClass<F>)> {
        self.classes.iter().map(|(k, v)| (*k, v))
    }

    /// Evaluate an expression over the named classes, `d` and rational literals,
    /// e.g. `"H*H*H"` or `"(4/(d-2))*H"`.
    pub fn eval_expr(&self, src: &str) -> Result<ChowClass<F>, ExprError> {
        Expr::parse(src)?.eval(self)
    }
}

impl<F: Scalar> Algebra for NamedDivisors<F> {
    type Value = ChowClass<F>;

    fn number(&self, n: Rat) -> Result<ChowClass<F>, ExprError> {
        Ok(ChowClass::scalar(F::from_rat(n)))
    }

    fn ident(&self, name: &str) -> Result<ChowClass<F>, ExprError> {
        match name {
            "d" => Ok(ChowClass::scalar(self.d().clone())),
            "pt" => Ok(ChowClass::point()),
            _ => self.lookup(name).cloned().ok_or_else(|| ExprError::UnknownIdent(name.into())),
        }
    }

    fn add(&self, a: ChowClass<F>, b: ChowClass<F>) -> Result<ChowClass<F>, ExprError> {
        Ok(a.add(&b))
    }

    fn sub(&self, a: ChowClass<F>, b: ChowClass<F>) -> Result<ChowClass<F>, ExprError> {
        Ok(a.sub(&b))
    }

    fn mul(&self, a: ChowClass<F>, b: ChowClass<F>) -> Result<ChowClass<F>, ExprError> {
        Ok(self.ring.mul(&a, &b))
    }

    fn div(&self, a: ChowClass<F>, b: ChowClass<F>) -> Result<ChowClass<F>, ExprError> {
        let s = b
            .as_scalar()
            .ok_or_else(|| ExprError::Eval(format!("cannot divide by the class {b}")))?;
        let inv = s.recip().map_err(|e| ExprError::Eval(e.to_string()))?;
        Ok(a.scale(&inv))
    }

    fn neg(&self, a: ChowClass<F>) -> Result<ChowClass<F>, ExprError> {
        Ok(a.neg())
    }
}

/// `(a, b)` with `-K_Sigma ~ a H` and `K_B = beta^* K_Sigma - b Z`.
///
/// Writes `K_B = -a H - b Z` and solves the 2x2 system in the `(H, A)`
/// coordinates by Cramer's rule.
pub fn solve_anticanonical_coeffs<F: Scalar>(divs: &NamedDivisors<F>) -> Result<(F, F), ChowError> {
    let k = divs.get("K_B");
    let col_a = divs.get("H").neg();
    let col_b = divs.get("Z").neg();
    let det = col_a.xi().clone() * col_b.h().clone() - col_b.xi().clone() * col_a.h().clone();
    if det.is_zero() {
        return Err(ChowError::Singular);
    }
    let det_a = k.xi().clone() * col_b.h().clone() - col_b.xi().clone() * k.h().clone();
    let det_b = col_a.xi().clone() * k.h().clone() - k.xi().clone() * col_a.h().clone();
    Ok((det_a.try_div(&det)?, det_b.try_div(&det)?))
}

/// `c` with `beta^* T = T_tilde + c Z`, given `T ~ -K_Sigma ~ a H`.
pub fn solve_pullback_coeff<F: Scalar>(divs: &NamedDivisors<F>) -> Result<F, ChowError> {
    let (a, _) = solve_anticanonical_coeffs(divs)?;
    let target = divs.get("H").scale(&a).sub(divs.get("T_tilde"));
    let z = divs.get("Z");
    let c = target.xi().try_div(z.xi())?;
    if z.scale(&c) != target {
        return Err(ChowError::Inconsistent(format!("{target} is not a multiple of Z")));
    }
    Ok(c)
}

/// Pullback of the tangent surface, `T_tilde + c Z`.
pub fn pullback_of_t<F: Scalar>(divs: &NamedDivisors<F>) -> Result<ChowClass<F>, ChowError> {
    let c = solve_pullback_coeff(divs)?;
    Ok(divs.get("T_tilde").add(&divs.get("Z").scale(&c)))
}

/// Multiple `lambda` with `class = lambda * (-K_Sigma)` pulled back, i.e.
/// `class = lambda * a * H`; `None` if the class is not proportional to `H`.
pub fn anticanonical_multiple<F: Scalar>(
    divs: &NamedDivisors<F>,
    class: &ChowClass<F>,
) -> Result<Option<F>, ChowError> {
    let (a, _) = solve_anticanonical_coeffs(divs)?;
    let minus_k = divs.get("H").scale(&a);
    let lambda = class.xi().try_div(minus_k.xi())?;
    Ok((minus_k.scale(&lambda) == *class).then_some(lambda))
}

/// Class-level check that `D = coeff * (beta(pi^-1 l) + beta(H0))` is
/// anticanonical. The cylinder divisor uses `coeff = 4/d`.
pub fn cylinder_divisor_check_with<F: Scalar>(
    divs: &NamedDivisors<F>,
    coeff: &F,
) -> Result<CheckReport, ChowError> {
    let d = divs.d().clone();
    let two = F::from_int(2);
    let mut report = CheckReport::new("cylinder divisor class");

    // beta^* beta(pi^-1 l) = pi^-1 l + (1/(d-2)) Z
    let inv = (d.clone() - two.clone()).recip()?;
    let fiber_pullback = divs.get("ell_fiber").add(&divs.get("Z").scale(&inv));
    let expected = divs.get("H").scale(&two.try_div(&(d.clone() - two.clone()))?);
    report.push_eq("fiber pullback equals (2/(d-2))H", &fiber_pullback, &expected);
    let lambda_fiber = anticanonical_multiple(divs, &fiber_pullback)?;
    let half = F::frac(1, 2);
    report.push(
        "beta(pi^-1 l) ~ -(1/2)K",
        lambda_fiber.as_ref() == Some(&half),
        format!("multiple of -K: {}", show_opt(&lambda_fiber)),
    );

    let lambda_h0 = anticanonical_multiple(divs, divs.get("H0"))?;
    let expected_h0 = (d.clone() - two.clone()).try_div(&F::from_int(4))?;
    report.push(
        "beta(H0) ~ H ~ -((d-2)/4)K",
        divs.get("H0") == divs.get("H") && lambda_h0.as_ref() == Some(&expected_h0),
        format!("multiple of -K: {}", show_opt(&lambda_h0)),
    );

    let total = match (lambda_fiber, lambda_h0) {
        (Some(x), Some(y)) => Some(coeff.clone() * (x + y)),
        _ => None,
    };
    report.push(
        format!("({coeff})*(1/2 + (d-2)/4) = 1"),
        total.as_ref() == Some(&F::one()),
        format!("total multiple of -K: {}", show_opt(&total)),
    );
    Ok(report)
}

pub fn cylinder_divisor_check<F: Scalar>(divs: &NamedDivisors<F>) -> Result<CheckReport, ChowError> {
    let coeff = F::from_int(4).try_div(divs.d())?;
    cylinder_divisor_check_with(divs, &coeff)
}

fn show_opt<F: fmt::Display>(x: &Option<F>) -> String {
    match x {
        Some(v) => v.to_string(),
        None => "not proportional to H".into(),
    }
}

/// `(-K_Sigma)^3 = a^3 H^3`, computed on `B` where `beta` is birational.
pub fn anticanonical_volume<F: Scalar>(d: &F) -> Result<F, ChowError> {
    let divs = NamedDivisors::new(d.clone())?;
    let (a, _) = solve_anticanonical_coeffs(&divs)?;
    let h = divs.get("H");
    Ok(a.pow(3) * divs.ring().triple_intersection(h, h, h)?)
}

/// Closed-form invariants of the `k`-th secant variety `Sigma_k` of the degree
/// `d` rational normal curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HigherSecant<F> {
    pub k: u32,
    pub d: F,
    /// `c` with `-K ~ c H_k`
    pub anticanonical_coeff: F,
    /// `H_k^(2k+1) = binom(d-k, k+1)`
    pub degree: F,
    /// `(-K)^(2k+1)`
    pub anticanonical_volume: F,
    /// `b` with `K_(B_k) = beta_k^* K - b Z_(k-1)`
    pub discrepancy_coeff: F,
}

pub fn higher_secant_invariants<F: Scalar>(k: u32, d: F) -> Result<HigherSecant<F>, ChowError> {
    let min = F::from_int(2 * k as i64 + 1);
    let domain = Domain::from_lower(2 * k as i64 + 1);
    if k == 0 || !(d.clone() - min.clone()).sign_on(&domain).is_nonnegative() {
        return Err(ChowError::Domain { d: d.to_string(), min: format!("2k+1 = {min} with k >= 1") });
    }
    let kk = F::from_int(k as i64);
    let gap = d.clone() - F::from_int(2 * k as i64);
    let coeff = F::from_int(2 * (k as i64 + 1)).try_div(&gap)?;
    // binom(d-k, k+1) = prod_{i=0..k} (d-k-i) / (k+1)!
    let mut degree = F::one();
    for i in 0..=k {
        let factor = d.clone() - kk.clone() - F::from_int(i as i64);
        degree = degree * factor.try_div(&F::from_int(i as i64 + 1))?;
    }
    let volume = coeff.pow(2 * k + 1) * degree.clone();
    let disc = (gap.clone() - F::from_int(2)).try_div(&gap)?;
    Ok(HigherSecant {
        k,
        d,
        anticanonical_coeff: coeff,
        degree,
        anticanonical_volume: volume,
        discrepancy_coeff: disc,
    })
}
