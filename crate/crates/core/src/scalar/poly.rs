use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{Scalar, ScalarError};

/// Dense univariate polynomial, coefficients stored lowest degree first with
/// no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<F> {
    coeffs: Vec<F>,
}

impl<F: Scalar> Poly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        Poly::new(vec![c])
    }

    /// The variable itself.
    pub fn var() -> Self {
        Poly::new(vec![F::zero(), F::one()])
    }

    pub fn monomial(c: F, exp: usize) -> Self {
        let mut coeffs = vec![F::zero(); exp];
        coeffs.push(c);
        Poly::new(coeffs)
    }

    /// `c0 + c1*x` from integer literals.
    pub fn linear(c0: i64, c1: i64) -> Self {
        Poly::new(vec![F::from_int(c0), F::from_int(c1)])
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| F::from_int(c)).collect())
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> F {
        self.coeffs.get(i).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> F {
        self.coeffs.last().cloned().unwrap_or_else(F::zero)
    }

    pub fn scale(&self, c: &F) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn eval(&self, at: &F) -> F {
        self.coeffs
            .iter()
            .rev()
            .fold(F::zero(), |acc, c| acc * at.clone() + c.clone())
    }

    /// Horner evaluation after lifting each coefficient into another scalar.
    pub fn eval_lifted<G: Scalar>(&self, at: &G, lift: impl Fn(&F) -> G) -> G {
        self.coeffs
            .iter()
            .rev()
            .fold(G::zero(), |acc, c| acc * at.clone() + lift(c))
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Poly::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * F::from_int(i as i64))
                .collect(),
        )
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Self {
        let mut out = vec![F::zero()];
        for (i, c) in self.coeffs.iter().enumerate() {
            let k = F::from_int(i as i64 + 1);
            out.push(c.try_div(&k).expect("nonzero integer"));
        }
        Poly::new(out)
    }

    /// Substitute another polynomial for the variable.
    pub fn compose(&self, inner: &Poly<F>) -> Poly<F> {
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, c| &(&acc * inner) + &Poly::constant(c.clone()))
    }

    pub fn div_rem(&self, divisor: &Poly<F>) -> Result<(Poly<F>, Poly<F>), ScalarError> {
        let Some(dd) = divisor.degree() else {
            return Err(ScalarError::DivisionByZero);
        };
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![F::zero(); self.coeffs.len().saturating_sub(dd).max(1)];
        while rem.len() > dd && !rem.is_empty() {
            let shift = rem.len() - 1 - dd;
            let factor = rem.last().unwrap().try_div(&lead)?;
            for (i, c) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] = rem[shift + i].clone() - factor.clone() * c.clone();
            }
            quot[shift] = factor;
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.leading().recip().expect("nonzero leading coefficient");
        self.scale(&inv)
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(a: &Poly<F>, b: &Poly<F>) -> Poly<F> {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let (_, r) = x.div_rem(&y).expect("nonzero divisor");
            x = y;
            y = r;
        }
        x.monic()
    }

    pub fn fmt_with(&self, var: &str, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exp, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mut text = c.to_string();
            let negative = text.starts_with('-');
            if negative {
                text.remove(0);
            }
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            first = false;
            let unit = text == "1";
            let needs_parens = text.contains(' ') || text.contains('/');
            let coeff_text = if needs_parens && exp > 0 { format!("({text})") } else { text };
            match exp {
                0 => write!(f, "{coeff_text}")?,
                _ => {
                    if !unit {
                        write!(f, "{coeff_text}*")?;
                    }
                    if exp == 1 {
                        write!(f, "{var}")?;
                    } else {
                        write!(f, "{var}^{exp}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl<F: Scalar> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with("x", f)
    }
}

impl<F: Scalar> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with("x", f)
    }
}

impl<F: Scalar> Add for &Poly<F> {
    type Output = Poly<F>;
    fn add(self, rhs: &Poly<F>) -> Poly<F> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<F: Scalar> Sub for &Poly<F> {
    type Output = Poly<F>;
    fn sub(self, rhs: &Poly<F>) -> Poly<F> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<F: Scalar> Mul for &Poly<F> {
    type Output = Poly<F>;
    fn mul(self, rhs: &Poly<F>) -> Poly<F> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<F: Scalar> Neg for &Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<F: Scalar> Add for Poly<F> {
    type Output = Poly<F>;
    fn add(self, rhs: Poly<F>) -> Poly<F> {
        &self + &rhs
    }
}

impl<F: Scalar> Sub for Poly<F> {
    type Output = Poly<F>;
    fn sub(self, rhs: Poly<F>) -> Poly<F> {
        &self - &rhs
    }
}

impl<F: Scalar> Mul for Poly<F> {
    type Output = Poly<F>;
    fn mul(self, rhs: Poly<F>) -> Poly<F> {
        &self * &rhs
    }
}

impl<F: Scalar> Neg for Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rat;

    type P = Poly<Rat>;

    #[test]
    fn div_rem_reconstructs() {
        let a = P::from_ints(&[-1, 0, 0, 1]); // x^3 - 1
        let b = P::from_ints(&[-1, 1]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert!(r.is_zero());
        assert_eq!(q, P::from_ints(&[1, 1, 1]));
        let (q, r) = P::from_ints(&[1, 2]).div_rem(&P::from_ints(&[0, 0, 1])).unwrap();
        assert!(q.is_zero());
        assert_eq!(r, P::from_ints(&[1, 2]));
    }

    #[test]
    fn gcd_is_monic() {
        let a = P::from_ints(&[-4, 0, 2]); // 2(x-√2)(x+√2)
        let b = P::from_ints(&[-2, 1]).pow(1) * P::from_ints(&[3, 3]); // 3(x-2)(x+1)
        assert_eq!(P::gcd(&a, &b), P::one());
        let c = P::from_ints(&[2, 2]) * P::from_ints(&[0, 5]);
        assert_eq!(P::gcd(&c, &P::from_ints(&[7, 7])), P::from_ints(&[1, 1]));
    }

    #[test]
    fn calculus() {
        let p = P::from_ints(&[1, -3, 3, -1]); // (1-x)^3
        assert_eq!(p, P::from_ints(&[1, -1]).pow(3));
        let anti = p.antiderivative();
        assert_eq!(anti.eval(&Rat::one()) - anti.eval(&Rat::zero()), Rat::frac(1, 4));
        assert_eq!(anti.derivative(), p);
    }

    #[test]
    fn display() {
        assert_eq!(P::from_ints(&[-32, 32]).to_string(), "32*x - 32");
        assert_eq!(P::from_ints(&[0, -1, 0, 1]).to_string(), "x^3 - x");
        assert_eq!(P::zero().to_string(), "0");
    }
}
