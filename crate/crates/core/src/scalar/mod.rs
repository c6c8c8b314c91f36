//! Exact scalars: big rationals, rational functions in the degree `d`, and
//! piecewise polynomials in an auxiliary variable `x`.
//!
//! Every computation in the crate is written once against [`Scalar`] and can
//! then be run either at a concrete degree (`Rat`) or symbolically in `d`
//! (`RatFuncD`).

mod piecewise;
mod poly;
mod rat;
mod ratfunc;
mod sign;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

pub use piecewise::{PiecewiseError, PiecewisePoly};
pub use poly::Poly;
pub use rat::Rat;
pub use ratfunc::{eval_ratfunc_at, RatFuncD};
pub use sign::{count_roots_in, sign_profile};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole: denominator vanishes at d = {0}")]
    Pole(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Real half-line `[lower, ∞)` on which symbolic inequalities in `d` are decided.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Domain {
    pub lower: Rat,
}

impl Domain {
    pub fn from_lower(lower: impl Into<Rat>) -> Self {
        Domain { lower: lower.into() }
    }

    /// `d >= 4`, where the secant variety is a singular threefold.
    pub fn secant() -> Self {
        Domain::from_lower(4i64)
    }
}

impl Default for Domain {
    fn default() -> Self {
        Domain::secant()
    }
}

/// The set of signs a scalar takes over a [`Domain`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DomainSign {
    Positive,
    Negative,
    Zero,
    NonNegative,
    NonPositive,
    /// Takes both signs, or has a pole in the domain.
    Indefinite,
}

impl DomainSign {
    pub fn from_flags(pos: bool, neg: bool, zero: bool) -> Self {
        match (pos, neg, zero) {
            (true, true, _) => DomainSign::Indefinite,
            (true, false, false) => DomainSign::Positive,
            (true, false, true) => DomainSign::NonNegative,
            (false, true, false) => DomainSign::Negative,
            (false, true, true) => DomainSign::NonPositive,
            (false, false, _) => DomainSign::Zero,
        }
    }

    pub fn is_positive(self) -> bool {
        self == DomainSign::Positive
    }

    pub fn is_nonnegative(self) -> bool {
        matches!(self, DomainSign::Positive | DomainSign::NonNegative | DomainSign::Zero)
    }

    pub fn is_nonpositive(self) -> bool {
        matches!(self, DomainSign::Negative | DomainSign::NonPositive | DomainSign::Zero)
    }

    pub fn negate(self) -> Self {
        match self {
            DomainSign::Positive => DomainSign::Negative,
            DomainSign::Negative => DomainSign::Positive,
            DomainSign::NonNegative => DomainSign::NonPositive,
            DomainSign::NonPositive => DomainSign::NonNegative,
            other => other,
        }
    }
}

/// Field of coefficients for every degree-dependent computation.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_rat(r: Rat) -> Self;
    fn try_div(&self, rhs: &Self) -> Result<Self, ScalarError>;
    /// Sign behaviour over `domain`. Constants ignore the domain.
    fn sign_on(&self, domain: &Domain) -> DomainSign;
    /// Numerator and denominator as printable strings.
    fn parts(&self) -> (String, String);

    fn from_int(n: i64) -> Self {
        Self::from_rat(Rat::from(n))
    }

    fn frac(n: i64, d: i64) -> Self {
        Self::from_rat(Rat::frac(n, d))
    }

    fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc * self.clone();
        }
        acc
    }

    fn recip(&self) -> Result<Self, ScalarError> {
        Self::one().try_div(self)
    }
}

impl Scalar for Rat {
    fn zero() -> Self {
        Rat::zero()
    }

    fn one() -> Self {
        Rat::one()
    }

    fn is_zero(&self) -> bool {
        Rat::is_zero(self)
    }

    fn from_rat(r: Rat) -> Self {
        r
    }

    fn try_div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        self.checked_div(rhs)
    }

    fn sign_on(&self, _domain: &Domain) -> DomainSign {
        DomainSign::from_flags(self.is_positive(), self.is_negative(), self.is_zero())
    }

    fn parts(&self) -> (String, String) {
        (self.numer().to_string(), self.denom().to_string())
    }
}

/// `a <= b` for every point of the domain.
pub fn le_on<F: Scalar>(a: &F, b: &F, domain: &Domain) -> bool {
    (b.clone() - a.clone()).sign_on(domain).is_nonnegative()
}

/// `a < b` for every point of the domain.
pub fn lt_on<F: Scalar>(a: &F, b: &F, domain: &Domain) -> bool {
    (b.clone() - a.clone()).sign_on(domain).is_positive()
}
