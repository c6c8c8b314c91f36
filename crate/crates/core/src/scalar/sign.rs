//! Exact sign determination of a rational polynomial on a half-line
//! `[lower, ∞)`, via Sturm sequences and rational bisection.

use super::{Poly, Rat};

type P = Poly<Rat>;

fn squarefree(p: &P) -> P {
    let g = P::gcd(p, &p.derivative());
    p.div_rem(&g).expect("nonzero gcd").0
}

fn sturm_chain(p: &P) -> Vec<P> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        let (_, r) = chain[n - 2].div_rem(&chain[n - 1]).expect("nonzero divisor");
        if r.is_zero() {
            break;
        }
        chain.push(-r);
    }
    chain
}

fn variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut count = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn variations_at(chain: &[P], x: &Rat) -> usize {
    variations(chain.iter().map(|q| q.eval(x).signum()))
}

/// Number of distinct real roots of `p` in `(a, b]`. Requires `a < b` and
/// that neither endpoint is a root.
pub fn count_roots_in(p: &P, a: &Rat, b: &Rat) -> usize {
    if p.degree().unwrap_or(0) == 0 {
        return 0;
    }
    let chain = sturm_chain(&squarefree(p));
    variations_at(&chain, a) - variations_at(&chain, b)
}

/// Upper bound strictly greater than every real root (Cauchy).
fn root_bound(p: &P) -> Rat {
    let lead = p.leading().abs();
    let max = p
        .coeffs()
        .iter()
        .take(p.coeffs().len() - 1)
        .map(|c| c.abs().checked_div(&lead).expect("nonzero leading coefficient"))
        .max()
        .unwrap_or_else(Rat::zero);
    max + Rat::one()
}

/// Which signs `p` takes on `[lower, ∞)`, as `(positive, negative, zero)`.
pub fn sign_profile(p: &P, lower: &Rat) -> (bool, bool, bool) {
    if p.is_zero() {
        return (false, false, true);
    }
    // Strip a root at the left endpoint; (x - lower)^k is positive to its right.
    let mut q = p.clone();
    let mut zero = false;
    let shift = P::new(vec![-lower.clone(), Rat::one()]);
    while q.eval(lower).is_zero() {
        zero = true;
        q = q.div_rem(&shift).expect("linear divisor").0;
    }
    if q.degree() == Some(0) {
        let s = q.leading().signum();
        return (s > 0, s < 0, zero);
    }

    let sf = squarefree(&q);
    let chain = sturm_chain(&sf);
    let upper = root_bound(&q).max(lower.clone() + Rat::one());

    let mut samples = vec![lower.clone(), upper.clone()];
    let mut stack = vec![(lower.clone(), upper.clone())];
    while let Some((a, b)) = stack.pop() {
        let roots = variations_at(&chain, &a) - variations_at(&chain, &b);
        if roots > 0 {
            zero = true;
        }
        if roots < 2 {
            continue;
        }
        let mid = non_root_between(&sf, &a, &b);
        samples.push(mid.clone());
        stack.push((a, mid.clone()));
        stack.push((mid, b));
    }

    let mut pos = false;
    let mut neg = false;
    for x in &samples {
        match q.eval(x).signum() {
            1 => pos = true,
            -1 => neg = true,
            _ => unreachable!("sample points avoid roots"),
        }
    }
    (pos, neg, zero)
}

fn non_root_between(p: &P, a: &Rat, b: &Rat) -> Rat {
    let width = b.clone() - a.clone();
    (2i64..)
        .map(|k| a.clone() + width.clone() * Rat::frac(1, k))
        .find(|x| !p.eval(x).is_zero())
        .expect("finitely many roots")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roots(rs: &[i64]) -> P {
        rs.iter().fold(P::one(), |acc, &r| acc * P::linear(-r, 1))
    }

    #[test]
    fn counts_distinct_roots() {
        let p = roots(&[1, 2, 2, 5]);
        assert_eq!(count_roots_in(&p, &Rat::zero(), &Rat::from(10)), 3);
        assert_eq!(count_roots_in(&p, &Rat::frac(3, 2), &Rat::from(3)), 1);
        let irreducible = P::from_ints(&[1, 0, 1]);
        assert_eq!(count_roots_in(&irreducible, &Rat::from(-10), &Rat::from(10)), 0);
    }

    #[test]
    fn profile_on_half_line() {
        // (d-2) > 0 on [4, ∞)
        assert_eq!(sign_profile(&P::linear(-2, 1), &Rat::from(4)), (true, false, false));
        // (d-4) vanishes at the endpoint only
        assert_eq!(sign_profile(&P::linear(-4, 1), &Rat::from(4)), (true, false, true));
        // (d-6)^2 touches zero inside
        assert_eq!(sign_profile(&roots(&[6, 6]), &Rat::from(4)), (true, false, true));
        // (d-5)(d-7) changes sign twice
        assert_eq!(sign_profile(&roots(&[5, 7]), &Rat::from(4)), (true, true, true));
        // -(d^2 + 1)
        assert_eq!(sign_profile(&P::from_ints(&[-1, 0, -1]), &Rat::from(4)), (false, true, false));
    }

    #[test]
    fn close_roots_are_separated() {
        // roots 100 and 100 + 1/1000
        let p = P::linear(-100, 1) * P::new(vec![Rat::frac(-100001, 1000), Rat::one()]);
        assert_eq!(sign_profile(&p, &Rat::from(4)), (true, true, true));
    }
}
