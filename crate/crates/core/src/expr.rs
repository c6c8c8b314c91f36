//! Tiny infix expression language shared by config files, the CLI and tests.
//!
//! Grammar: `+ - * / ^` with the usual precedence, unary minus, parentheses,
//! non-negative integer literals and identifiers (`[A-Za-z_][A-Za-z0-9_']*`).
//! Exponents must be non-negative integer literals.

use thiserror::Error;

use crate::scalar::{Rat, RatFuncD, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown identifier {0:?}")]
    UnknownIdent(String),
    #[error("cannot evaluate: {0}")]
    Eval(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Num(Rat),
    Ident(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

/// Interpretation of expression nodes into some value type.
pub trait Algebra {
    type Value;

    fn number(&self, n: Rat) -> Result<Self::Value, ExprError>;
    fn ident(&self, name: &str) -> Result<Self::Value, ExprError>;
    fn add(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value, ExprError>;
    fn sub(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value, ExprError>;
    fn mul(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value, ExprError>;
    fn div(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value, ExprError>;
    fn neg(&self, a: Self::Value) -> Result<Self::Value, ExprError>;

    fn pow(&self, a: Self::Value, exp: u32) -> Result<Self::Value, ExprError>
    where
        Self::Value: Clone,
    {
        let mut acc = self.number(Rat::one())?;
        for _ in 0..exp {
            acc = self.mul(acc, a.clone())?;
        }
        Ok(acc)
    }
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr, ExprError> {
        let mut p = Parser { src: src.as_bytes(), pos: 0 };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(e)
    }

    pub fn eval<A: Algebra>(&self, alg: &A) -> Result<A::Value, ExprError>
    where
        A::Value: Clone,
    {
        match self {
            Expr::Num(n) => alg.number(n.clone()),
            Expr::Ident(name) => alg.ident(name),
            Expr::Neg(a) => alg.neg(a.eval(alg)?),
            Expr::Add(a, b) => alg.add(a.eval(alg)?, b.eval(alg)?),
            Expr::Sub(a, b) => alg.sub(a.eval(alg)?, b.eval(alg)?),
            Expr::Mul(a, b) => alg.mul(a.eval(alg)?, b.eval(alg)?),
            Expr::Div(a, b) => alg.div(a.eval(alg)?, b.eval(alg)?),
            Expr::Pow(a, e) => alg.pow(a.eval(alg)?, *e),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> ExprError {
        ExprError::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(b'/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            self.skip_ws();
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.error("exponent must be a non-negative integer"));
            }
            let exp = digits.parse().map_err(|_| self.error("exponent too large"))?;
            return Ok(Expr::Pow(Box::new(base), exp));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.digits();
                Ok(Expr::Num(digits.parse().map_err(|_| self.error("bad number"))?))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len() {
                    let c = self.src[self.pos];
                    if c.is_ascii_alphanumeric() || c == b'_' || c == b'\'' {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                Ok(Expr::Ident(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()))
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// Evaluates expressions in a [`Scalar`] with the single identifier `d`
/// bound to a given value.
pub struct ScalarAlgebra<F> {
    pub d: F,
}

impl<F: Scalar> Algebra for ScalarAlgebra<F> {
    type Value = F;

    fn number(&self, n: Rat) -> Result<F, ExprError> {
        Ok(F::from_rat(n))
    }

    fn ident(&self, name: &str) -> Result<F, ExprError> {
        match name {
            "d" => Ok(self.d.clone()),
            _ => Err(ExprError::UnknownIdent(name.to_string())),
        }
    }

    fn add(&self, a: F, b: F) -> Result<F, ExprError> {
        Ok(a + b)
    }

    fn sub(&self, a: F, b: F) -> Result<F, ExprError> {
        Ok(a - b)
    }

    fn mul(&self, a: F, b: F) -> Result<F, ExprError> {
        Ok(a * b)
    }

    fn div(&self, a: F, b: F) -> Result<F, ExprError> {
        a.try_div(&b).map_err(|e| ExprError::Eval(e.to_string()))
    }

    fn neg(&self, a: F) -> Result<F, ExprError> {
        Ok(-a)
    }
}

/// Parse a rational function of `d`, e.g. `"(d+2)/(2*d)"`.
pub fn parse_ratfunc(src: &str) -> Result<RatFuncD, ExprError> {
    Expr::parse(src)?.eval(&ScalarAlgebra { d: RatFuncD::d() })
}
