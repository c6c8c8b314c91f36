use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::sign::sign_profile;
use super::{Domain, DomainSign, Poly, Rat, Scalar, ScalarError};

/// Rational function in the indeterminate `d` over the rationals.
///
/// Always reduced (numerator and denominator coprime) with a monic
/// denominator, so two values are equal exactly when their fields are.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFuncD {
    num: Poly<Rat>,
    den: Poly<Rat>,
}

impl RatFuncD {
    pub fn new(num: Poly<Rat>, den: Poly<Rat>) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFuncD { num, den: Poly::one() });
        }
        let g = Poly::gcd(&num, &den);
        let num = num.div_rem(&g)?.0;
        let den = den.div_rem(&g)?.0;
        let lead = den.leading().recip()?;
        Ok(RatFuncD { num: num.scale(&lead), den: den.scale(&lead) })
    }

    /// The indeterminate `d`.
    pub fn d() -> Self {
        RatFuncD { num: Poly::var(), den: Poly::one() }
    }

    pub fn constant(c: Rat) -> Self {
        RatFuncD { num: Poly::constant(c), den: Poly::one() }
    }

    pub fn from_poly(p: Poly<Rat>) -> Self {
        RatFuncD { num: p, den: Poly::one() }
    }

    pub fn numer(&self) -> &Poly<Rat> {
        &self.num
    }

    pub fn denom(&self) -> &Poly<Rat> {
        &self.den
    }

    pub fn as_constant(&self) -> Option<Rat> {
        match (self.num.degree(), self.den.degree()) {
            (None, _) => Some(Rat::zero()),
            (Some(0), Some(0)) => Some(self.num.leading()),
            _ => None,
        }
    }

    /// Exact substitution of a rational value for `d`.
    pub fn eval(&self, at: &Rat) -> Result<Rat, ScalarError> {
        let den = self.den.eval(at);
        if den.is_zero() {
            return Err(ScalarError::Pole(at.to_string()));
        }
        self.num.eval(at).checked_div(&den)
    }

    pub fn eval_int(&self, n: i64) -> Result<Rat, ScalarError> {
        self.eval(&Rat::from(n))
    }

    /// Numerator and denominator scaled to coprime integer polynomials,
    /// denominator with positive leading coefficient.
    /// Limit as `d -> oo`; `None` when it diverges.
    pub fn limit_at_infinity(&self) -> Option<Rat> {
        match (self.num.degree(), self.den.degree()) {
            (None, _) => Some(Rat::zero()),
            (Some(n), Some(m)) if n < m => Some(Rat::zero()),
            (Some(n), Some(m)) if n == m => self.num.leading().checked_div(&self.den.leading()).ok(),
            _ => None,
        }
    }

    pub fn integer_parts(&self) -> (Poly<Rat>, Poly<Rat>) {
        let coeffs = self.num.coeffs().iter().chain(self.den.coeffs());
        let lcm = coeffs.clone().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let scale = Rat::from_big(lcm);
        let num = self.num.scale(&scale);
        let den = self.den.scale(&scale);
        let content = num
            .coeffs()
            .iter()
            .chain(den.coeffs())
            .fold(BigInt::zero(), |acc, c| acc.gcd(c.numer()));
        let inv = Rat::from_big(content).recip().expect("nonzero content");
        (num.scale(&inv), den.scale(&inv))
    }
}

/// Substitute a scalar of any kind for `d`.
pub fn eval_ratfunc_at<F: Scalar>(f: &RatFuncD, at: &F) -> Result<F, ScalarError> {
    let lift = |c: &Rat| F::from_rat(c.clone());
    let num = f.num.eval_lifted(at, lift);
    let den = f.den.eval_lifted(at, lift);
    if den.is_zero() {
        return Err(ScalarError::Pole(at.to_string()));
    }
    num.try_div(&den)
}

struct PolyInD<'a>(&'a Poly<Rat>);

impl fmt::Display for PolyInD<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt_with("d", f)
    }
}

impl fmt::Display for RatFuncD {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (num, den) = self.integer_parts();
        let num_text = PolyInD(&num).to_string();
        if den == Poly::one() {
            return write!(f, "{num_text}");
        }
        let den_text = PolyInD(&den).to_string();
        if num_text.contains(' ') {
            write!(f, "({num_text})")?;
        } else {
            write!(f, "{num_text}")?;
        }
        if den_text.contains(' ') || den_text.contains('*') {
            write!(f, "/({den_text})")
        } else {
            write!(f, "/{den_text}")
        }
    }
}

impl fmt::Debug for RatFuncD {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for RatFuncD {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl Add for RatFuncD {
    type Output = RatFuncD;
    fn add(self, rhs: RatFuncD) -> RatFuncD {
        if self.den == rhs.den {
            return RatFuncD::new(&self.num + &rhs.num, self.den).expect("nonzero denominator");
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFuncD::new(num, &self.den * &rhs.den).expect("nonzero denominator")
    }
}

impl Sub for RatFuncD {
    type Output = RatFuncD;
    fn sub(self, rhs: RatFuncD) -> RatFuncD {
        self + (-rhs)
    }
}

impl Mul for RatFuncD {
    type Output = RatFuncD;
    fn mul(self, rhs: RatFuncD) -> RatFuncD {
        RatFuncD::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero denominator")
    }
}

impl Neg for RatFuncD {
    type Output = RatFuncD;
    fn neg(self) -> RatFuncD {
        RatFuncD { num: -self.num, den: self.den }
    }
}

impl From<Rat> for RatFuncD {
    fn from(c: Rat) -> Self {
        RatFuncD::constant(c)
    }
}

impl Scalar for RatFuncD {
    fn zero() -> Self {
        RatFuncD::constant(Rat::zero())
    }

    fn one() -> Self {
        RatFuncD::constant(Rat::one())
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn from_rat(r: Rat) -> Self {
        RatFuncD::constant(r)
    }

    fn try_div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        if rhs.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        RatFuncD::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    fn sign_on(&self, domain: &Domain) -> DomainSign {
        let (dp, dn, dz) = sign_profile(&self.den, &domain.lower);
        if dz || (dp && dn) {
            return DomainSign::Indefinite;
        }
        let (p, n, z) = sign_profile(&self.num, &domain.lower);
        let sign = DomainSign::from_flags(p, n, z);
        if dn {
            sign.negate()
        } else {
            sign
        }
    }

    fn parts(&self) -> (String, String) {
        let (num, den) = self.integer_parts();
        (PolyInD(&num).to_string(), PolyInD(&den).to_string())
    }
}
