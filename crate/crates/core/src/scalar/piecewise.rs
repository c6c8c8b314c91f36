use thiserror::Error;

use super::{Poly, Rat, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PiecewiseError {
    #[error("malformed piecewise polynomial: {0}")]
    Malformed(String),
    #[error("[{from}, {to}] is outside the domain [{lo}, {hi}]")]
    OutOfDomain { from: Rat, to: Rat, lo: Rat, hi: Rat },
    #[error("function does not vanish at the end of its domain")]
    NeverVanishes,
}

/// Piecewise polynomial in `x` on `[x_0, x_m]`; piece `i` is valid on the
/// closed-open interval `[x_i, x_{i+1})`, and the last piece also at `x_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewisePoly<F: Scalar> {
    breakpoints: Vec<Rat>,
    pieces: Vec<Poly<F>>,
}

impl<F: Scalar> PiecewisePoly<F> {
    pub fn new(breakpoints: Vec<Rat>, pieces: Vec<Poly<F>>) -> Result<Self, PiecewiseError> {
        if breakpoints.len() < 2 {
            return Err(PiecewiseError::Malformed("need at least two breakpoints".into()));
        }
        if pieces.len() + 1 != breakpoints.len() {
            return Err(PiecewiseError::Malformed(format!(
                "{} pieces for {} breakpoints",
                pieces.len(),
                breakpoints.len()
            )));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(PiecewiseError::Malformed("breakpoints must strictly increase".into()));
        }
        Ok(PiecewisePoly { breakpoints, pieces })
    }

    pub fn single(piece: Poly<F>, from: Rat, to: Rat) -> Result<Self, PiecewiseError> {
        Self::new(vec![from, to], vec![piece])
    }

    /// `scale * (1 - x/tau)^n` on `[0, tau)`, zero on `[tau, end)`.
    ///
    /// This is the volume profile `vol(-K - xF)` of a divisor `F` proportional
    /// to `-K`, with pseudoeffective threshold `tau`.
    pub fn power_falloff(scale: F, tau: Rat, n: u32, end: Rat) -> Result<Self, PiecewiseError> {
        let inv_tau = tau.recip().map_err(|_| PiecewiseError::Malformed("tau = 0".into()))?;
        let base = Poly::new(vec![F::one(), -F::from_rat(inv_tau)]);
        let piece = base.pow(n).scale(&scale);
        if end == tau {
            return Self::single(piece, Rat::zero(), tau);
        }
        Self::new(vec![Rat::zero(), tau, end], vec![piece, Poly::zero()])
    }

    pub fn breakpoints(&self) -> &[Rat] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Poly<F>] {
        &self.pieces
    }

    pub fn start(&self) -> &Rat {
        &self.breakpoints[0]
    }

    pub fn end(&self) -> &Rat {
        self.breakpoints.last().expect("at least two breakpoints")
    }

    pub fn scale(&self, c: &F) -> Self {
        PiecewisePoly {
            breakpoints: self.breakpoints.clone(),
            pieces: self.pieces.iter().map(|p| p.scale(c)).collect(),
        }
    }

    fn piece_index(&self, x: &Rat) -> Option<usize> {
        if x < self.start() || x > self.end() {
            return None;
        }
        let idx = self.breakpoints[1..].iter().position(|b| x < b);
        Some(idx.unwrap_or(self.pieces.len() - 1))
    }

    pub fn eval(&self, x: &Rat) -> Result<F, PiecewiseError> {
        let i = self.piece_index(x).ok_or_else(|| self.out_of_domain(x, x))?;
        Ok(self.pieces[i].eval(&F::from_rat(x.clone())))
    }

    fn out_of_domain(&self, from: &Rat, to: &Rat) -> PiecewiseError {
        PiecewiseError::OutOfDomain {
            from: from.clone(),
            to: to.clone(),
            lo: self.start().clone(),
            hi: self.end().clone(),
        }
    }

    /// Exact integral over `[from, to]`; swapped bounds negate the result.
    pub fn integrate(&self, from: &Rat, to: &Rat) -> Result<F, PiecewiseError> {
        if from > to {
            return self.integrate(to, from).map(|v| -v);
        }
        if from < self.start() || to > self.end() {
            return Err(self.out_of_domain(from, to));
        }
        let mut total = F::zero();
        for (i, piece) in self.pieces.iter().enumerate() {
            let lo = (&self.breakpoints[i]).max(from);
            let hi = (&self.breakpoints[i + 1]).min(to);
            if lo >= hi {
                continue;
            }
            let anti = piece.antiderivative();
            total = total + anti.eval(&F::from_rat(hi.clone())) - anti.eval(&F::from_rat(lo.clone()));
        }
        Ok(total)
    }

    pub fn integrate_all(&self) -> F {
        self.integrate(self.start(), self.end()).expect("full domain")
    }

    /// Infimum of the `x` beyond which the function is identically zero.
    pub fn vanishing_threshold(&self) -> Result<Rat, PiecewiseError> {
        let trailing_zero = self.pieces.iter().rev().take_while(|p| p.is_zero()).count();
        if trailing_zero > 0 {
            return Ok(self.breakpoints[self.pieces.len() - trailing_zero].clone());
        }
        let last = self.pieces.last().expect("at least one piece");
        if last.eval(&F::from_rat(self.end().clone())).is_zero() {
            Ok(self.end().clone())
        } else {
            Err(PiecewiseError::NeverVanishes)
        }
    }
}
