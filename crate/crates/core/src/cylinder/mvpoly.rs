use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::expr::{Algebra, Expr, ExprError};
use crate::scalar::Rat;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable lists differ: {0:?} vs {1:?}")]
    VariableMismatch(Vec<String>, Vec<String>),
    #[error("expected {expected} components, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// Sparse polynomial with rational coefficients over an ordered variable
/// list. Monomials are exponent vectors; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct MVPoly {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl MVPoly {
    pub fn zero(vars: &[&str]) -> Self {
        MVPoly { vars: vars.iter().map(|v| v.to_string()).collect(), terms: BTreeMap::new() }
    }

    fn empty_like(&self) -> Self {
        MVPoly { vars: self.vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &[&str], c: Rat) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(vec![0; vars.len()], c);
        p
    }

    fn constant_like(&self, c: Rat) -> Self {
        let mut p = self.empty_like();
        p.add_term(vec![0; self.vars.len()], c);
        p
    }

    /// The variable `name`; panics if it is not in `vars`.
    pub fn var(vars: &[&str], name: &str) -> Self {
        let i = vars.iter().position(|v| *v == name).unwrap_or_else(|| panic!("no variable {name}"));
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        let mut p = Self::zero(vars);
        p.add_term(e, Rat::one());
        p
    }

    /// Parse an expression in `vars`; division only by nonzero constants.
    pub fn parse(vars: &[&str], src: &str) -> Result<Self, PolyError> {
        let alg = PolyAlgebra { vars };
        Ok(Expr::parse(src)?.eval(&alg)?)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Rat> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    fn add_term(&mut self, exp: Vec<u32>, c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp.clone()).or_insert_with(Rat::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    fn check_vars(&self, o: &Self) -> Result<(), PolyError> {
        if self.vars == o.vars {
            Ok(())
        } else {
            Err(PolyError::VariableMismatch(self.vars.clone(), o.vars.clone()))
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self, PolyError> {
        self.check_vars(o)?;
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone());
        }
        Ok(r)
    }

    pub fn sub(&self, o: &Self) -> Result<Self, PolyError> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&Rat::from(-1))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let mut r = self.empty_like();
        for (e, v) in &self.terms {
            r.add_term(e.clone(), v.clone() * c.clone());
        }
        r
    }

    pub fn mul(&self, o: &Self) -> Result<Self, PolyError> {
        self.check_vars(o)?;
        let mut r = self.empty_like();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                r.add_term(e, c1.clone() * c2.clone());
            }
        }
        Ok(r)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut r = self.constant_like(Rat::one());
        for _ in 0..n {
            r = r.mul(self).expect("same variables");
        }
        r
    }

    /// Substitute `values[i]` for the `i`-th variable; all values must share
    /// one variable list, which becomes that of the result.
    pub fn substitute(&self, values: &[MVPoly]) -> Result<Self, PolyError> {
        if values.len() != self.vars.len() {
            return Err(PolyError::Arity { expected: self.vars.len(), got: values.len() });
        }
        let target: Vec<&str> = match values.first() {
            Some(v) => v.vars.iter().map(String::as_str).collect(),
            None => Vec::new(),
        };
        for v in values {
            if v.vars.iter().map(String::as_str).ne(target.iter().copied()) {
                return Err(PolyError::VariableMismatch(v.vars.clone(), values[0].vars.clone()));
            }
        }
        let mut r = Self::zero(&target);
        for (e, c) in &self.terms {
            let mut term = Self::constant(&target, c.clone());
            for (v, k) in values.iter().zip(e) {
                term = term.mul(&v.pow(*k))?;
            }
            r = r.add(&term)?;
        }
        Ok(r)
    }

    pub fn eval(&self, point: &[Rat]) -> Result<Rat, PolyError> {
        if point.len() != self.vars.len() {
            return Err(PolyError::Arity { expected: self.vars.len(), got: point.len() });
        }
        Ok(self.terms.iter().fold(Rat::zero(), |acc, (e, c)| {
            let m = e.iter().zip(point).fold(c.clone(), |m, (k, x)| m * x.pow(*k));
            acc + m
        }))
    }

    /// Partial derivative in the variable `name`.
    pub fn derivative(&self, name: &str) -> Self {
        let i = self.vars.iter().position(|v| v == name).unwrap_or_else(|| panic!("no variable {name}"));
        let mut r = self.empty_like();
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                r.add_term(e2, c.clone() * Rat::from(e[i]));
            }
        }
        r
    }

    fn leading(&self) -> Option<(&Vec<u32>, &Rat)> {
        self.terms.iter().next_back()
    }

    /// Multivariate division by one polynomial in lex order. A zero
    /// remainder certifies divisibility.
    pub fn div_rem(&self, g: &Self) -> Result<(Self, Self), PolyError> {
        self.check_vars(g)?;
        let (ge, gc) = g.leading().ok_or(PolyError::DivisionByZero)?;
        let mut p = self.clone();
        let mut q = self.empty_like();
        let mut r = self.empty_like();
        while let Some((pe, pc)) = p.leading().map(|(e, c)| (e.clone(), c.clone())) {
            if pe.iter().zip(ge).all(|(a, b)| a >= b) {
                let e: Vec<u32> = pe.iter().zip(ge).map(|(a, b)| a - b).collect();
                let c = pc.checked_div(gc).expect("leading coefficient is nonzero");
                let mut t = self.empty_like();
                t.add_term(e, c);
                q = q.add(&t)?;
                p = p.sub(&t.mul(g)?)?;
            } else {
                let mut t = self.empty_like();
                t.add_term(pe, pc);
                r = r.add(&t)?;
                p = p.sub(&t)?;
            }
        }
        Ok((q, r))
    }
}

impl fmt::Display for MVPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mono: Vec<String> = e
                .iter()
                .zip(&self.vars)
                .filter(|(k, _)| **k > 0)
                .map(|(k, v)| if *k == 1 { v.clone() } else { format!("{v}^{k}") })
                .collect();
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs == Rat::one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{abs}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MVPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} in {:?}", self.vars)
    }
}

impl Serialize for MVPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

struct PolyAlgebra<'a> {
    vars: &'a [&'a str],
}

impl Algebra for PolyAlgebra<'_> {
    type Value = MVPoly;

    fn number(&self, n: Rat) -> Result<MVPoly, ExprError> {
        Ok(MVPoly::constant(self.vars, n))
    }

    fn ident(&self, name: &str) -> Result<MVPoly, ExprError> {
        if self.vars.contains(&name) {
            Ok(MVPoly::var(self.vars, name))
        } else {
            Err(ExprError::UnknownIdent(name.to_string()))
        }
    }

    fn add(&self, a: MVPoly, b: MVPoly) -> Result<MVPoly, ExprError> {
        a.add(&b).map_err(|e| ExprError::Eval(e.to_string()))
    }

    fn sub(&self, a: MVPoly, b: MVPoly) -> Result<MVPoly, ExprError> {
        a.sub(&b).map_err(|e| ExprError::Eval(e.to_string()))
    }

    fn mul(&self, a: MVPoly, b: MVPoly) -> Result<MVPoly, ExprError> {
        a.mul(&b).map_err(|e| ExprError::Eval(e.to_string()))
    }

    fn div(&self, a: MVPoly, b: MVPoly) -> Result<MVPoly, ExprError> {
        let c = match (b.total_degree(), b.terms.values().next()) {
            (Some(0), Some(c)) => c.clone(),
            _ => return Err(ExprError::Eval(format!("cannot divide by {b}"))),
        };
        Ok(a.scale(&c.recip().expect("nonzero")))
    }

    fn neg(&self, a: MVPoly) -> Result<MVPoly, ExprError> {
        Ok(a.neg())
    }
}

/// Polynomial map given by one component per target variable, each a
/// polynomial in the source variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolyMap {
    pub name: String,
    pub source: Vec<String>,
    pub target: Vec<String>,
    pub components: Vec<MVPoly>,
}

impl PolyMap {
    pub fn new(name: &str, source: &[&str], target: &[&str], components: &[&str]) -> Result<Self, PolyError> {
        if components.len() != target.len() {
            return Err(PolyError::Arity { expected: target.len(), got: components.len() });
        }
        Ok(PolyMap {
            name: name.to_string(),
            source: source.iter().map(|s| s.to_string()).collect(),
            target: target.iter().map(|s| s.to_string()).collect(),
            components: components.iter().map(|c| MVPoly::parse(source, c)).collect::<Result<_, _>>()?,
        })
    }

    pub fn identity(vars: &[&str]) -> Self {
        PolyMap {
            name: "id".into(),
            source: vars.iter().map(|s| s.to_string()).collect(),
            target: vars.iter().map(|s| s.to_string()).collect(),
            components: vars.iter().map(|v| MVPoly::var(vars, v)).collect(),
        }
    }

    /// `self ∘ inner`: first `inner`, then `self`.
    pub fn compose(&self, inner: &PolyMap) -> Result<PolyMap, PolyError> {
        if inner.target != self.source {
            return Err(PolyError::VariableMismatch(inner.target.clone(), self.source.clone()));
        }
        Ok(PolyMap {
            name: format!("{} o {}", self.name, inner.name),
            source: inner.source.clone(),
            target: self.target.clone(),
            components: self
                .components
                .iter()
                .map(|c| c.substitute(&inner.components))
                .collect::<Result<_, _>>()?,
        })
    }

    /// Pullback of a polynomial in the target variables.
    pub fn pullback(&self, p: &MVPoly) -> Result<MVPoly, PolyError> {
        if p.vars() != self.target.as_slice() {
            return Err(PolyError::VariableMismatch(p.vars().to_vec(), self.target.clone()));
        }
        p.substitute(&self.components)
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target
            && self.components.iter().zip(&self.source).all(|(c, v)| {
                let vars: Vec<&str> = self.source.iter().map(String::as_str).collect();
                *c == MVPoly::var(&vars, v)
            })
    }

    pub fn eval(&self, point: &[Rat]) -> Result<Vec<Rat>, PolyError> {
        self.components.iter().map(|c| c.eval(point)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const V: [&str; 3] = ["x", "y", "z"];

    fn p(s: &str) -> MVPoly {
        MVPoly::parse(&V, s).unwrap()
    }

    #[test]
    fn arithmetic_and_display() {
        let a = p("(x + y)^2 - x*x - 2*x*y");
        assert_eq!(a, p("y^2"));
        assert_eq!(p("x/2 - 3*y*z + 1").to_string(), "1/2*x - 3*y*z + 1");
        assert_eq!(p("-x^2").to_string(), "-x^2");
        assert!(p("x - x").is_zero());
        assert!(MVPoly::parse(&V, "x/y").is_err());
        assert!(MVPoly::parse(&V, "w").is_err());
    }

    #[test]
    fn division() {
        let g = p("x*y - z");
        let f = p("(x*y - z)^2 * (x + 3)");
        let (q, r) = f.div_rem(&g).unwrap();
        assert!(r.is_zero());
        assert_eq!(q, p("(x*y - z)*(x + 3)"));
        let (_, r) = p("x*y + 1").div_rem(&g).unwrap();
        assert!(!r.is_zero());
    }

    #[test]
    fn maps() {
        let swap = PolyMap::new("swap", &V, &V, &["y", "x", "z"]).unwrap();
        assert!(swap.compose(&swap).unwrap().is_identity());
        let f = PolyMap::new("f", &V, &V, &["x*y", "z", "x + 1"]).unwrap();
        assert_eq!(f.compose(&PolyMap::identity(&V)).unwrap().components, f.components);
        assert_eq!(f.eval(&[Rat::from(2), Rat::from(3), Rat::from(5)]).unwrap(), vec![
            Rat::from(6),
            Rat::from(5),
            Rat::from(3)
        ]);
        let other = PolyMap::identity(&["a"]);
        assert!(f.compose(&other).is_err());
        assert_eq!(p("x*y^2").derivative("y"), p("2*x*y"));
    }
}
