//! Order bounds for a divisor `D ~ -K` with `ord_Z(pullback of D) = a`,
//! obtained by restricting its strict transform to the two P^1 x P^1
//! surfaces `Z` and `T~` that meet along the diagonal.
//!
//! On P^1 x P^1 an effective divisor of bidegree `(p, q)` has order at most
//! `min(p, q)` along the diagonal, which has bidegree `(1, 1)`.

use serde::Serialize;

use super::{BlowupLedger, LedgerError};
use crate::chow::{solve_anticanonical_coeffs, ChowClass, NamedDivisors};
use crate::report::CheckReport;
use crate::scalar::{Domain, Scalar};

/// `constant + slope * a`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Affine<F> {
    pub constant: F,
    pub slope: F,
}

impl<F: Scalar> Affine<F> {
    pub fn new(constant: F, slope: F) -> Self {
        Affine { constant, slope }
    }

    pub fn constant(c: F) -> Self {
        Affine { constant: c, slope: F::zero() }
    }

    pub fn eval(&self, a: &F) -> F {
        self.constant.clone() + self.slope.clone() * a.clone()
    }

    pub fn add(&self, o: &Self) -> Self {
        Affine::new(self.constant.clone() + o.constant.clone(), self.slope.clone() + o.slope.clone())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-F::one()))
    }

    pub fn scale(&self, c: &F) -> Self {
        Affine::new(self.constant.clone() * c.clone(), self.slope.clone() * c.clone())
    }

    /// Nonnegative at both ends of `[0, a_max]`, hence on all of it.
    fn nonnegative_on(&self, a_max: &F, domain: &Domain) -> bool {
        self.constant.sign_on(domain).is_nonnegative()
            && self.eval(a_max).sign_on(domain).is_nonnegative()
    }
}

impl<F: Scalar> std::fmt::Display for Affine<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} + ({})*a", self.constant, self.slope)
    }
}

type Bidegree<F> = (F, F);
type AffineBidegree<F> = (Affine<F>, Affine<F>);

/// Restriction of `H` and `A` to one of the two surfaces.
#[derive(Debug, Clone)]
struct Surface<F> {
    name: &'static str,
    h_big: Bidegree<F>,
    a: Bidegree<F>,
}

impl<F: Scalar> Surface<F> {
    fn restrict(&self, xi: &F, h: &F) -> Bidegree<F> {
        (
            xi.clone() * self.h_big.0.clone() + h.clone() * self.a.0.clone(),
            xi.clone() * self.h_big.1.clone() + h.clone() * self.a.1.clone(),
        )
    }

    fn restrict_affine(&self, xi: &Affine<F>, h: &Affine<F>) -> AffineBidegree<F> {
        let (c0, c1) = self.restrict(&xi.constant, &h.constant);
        let (s0, s1) = self.restrict(&xi.slope, &h.slope);
        (Affine::new(c0, s0), Affine::new(c1, s1))
    }
}

fn surfaces<F: Scalar>(d: &F) -> (Surface<F>, Surface<F>) {
    let z = Surface { name: "Z", h_big: (F::zero(), d.clone()), a: (F::one(), F::one()) };
    let t = Surface { name: "T~", h_big: (F::one(), d.clone() - F::one()), a: (F::zero(), F::from_int(2)) };
    (z, t)
}

fn pairing<F: Scalar>(x: &Bidegree<F>, y: &Bidegree<F>) -> F {
    x.0.clone() * y.1.clone() + x.1.clone() * y.0.clone()
}

/// Smaller coordinate of an affine bidegree over `[0, a_max]`.
fn min_coordinate<F: Scalar>(
    b: &AffineBidegree<F>,
    a_max: &F,
    domain: &Domain,
) -> Result<Affine<F>, LedgerError> {
    if b.1.sub(&b.0).nonnegative_on(a_max, domain) {
        Ok(b.0.clone())
    } else if b.0.sub(&b.1).nonnegative_on(a_max, domain) {
        Ok(b.1.clone())
    } else {
        Err(LedgerError::NoUniformMinimum(b.0.to_string(), b.1.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimaxBound<F> {
    /// Upper end of the admissible range of `a`, namely `A(Z)`.
    pub a_max: F,
    /// Bound on `ord_Delta` coming from the restriction to `Z`.
    pub on_z: Affine<F>,
    /// Bound coming from the restriction to `T~`.
    pub on_t: Affine<F>,
    pub argmax: F,
    pub value: F,
}

struct Setup<F: Scalar> {
    divs: NamedDivisors<F>,
    z: Surface<F>,
    t: Surface<F>,
    /// Class of the strict transform of `D`, affine in `a`, as (xi, h) parts.
    strict: (Affine<F>, Affine<F>),
    a_max: F,
}

fn setup<F: Scalar>(ledger: &BlowupLedger<F>) -> Result<Setup<F>, LedgerError> {
    let d = ledger.d.clone();
    let divs = NamedDivisors::new(d.clone())?;
    let (a_k, _) = solve_anticanonical_coeffs(&divs)?;
    let zc = divs.get("Z");
    // pullback of D is a_k*H; subtract a*Z for the strict transform
    let strict = (
        Affine::new(a_k, -zc.xi().clone()),
        Affine::new(F::zero(), -zc.h().clone()),
    );
    let (z, t) = surfaces(&d);
    Ok(Setup { divs, z, t, strict, a_max: ledger.log_discrepancy("Z")? })
}

fn minimax_from<F: Scalar>(s: &Setup<F>, domain: &Domain) -> Result<MinimaxBound<F>, LedgerError> {
    let on_z = min_coordinate(&s.z.restrict_affine(&s.strict.0, &s.strict.1), &s.a_max, domain)?;
    let on_t = min_coordinate(&s.t.restrict_affine(&s.strict.0, &s.strict.1), &s.a_max, domain)?;
    for b in [&on_z, &on_t] {
        if !b.nonnegative_on(&s.a_max, domain) {
            return Err(LedgerError::Config(format!("bound {b} is negative on the range of a")));
        }
    }
    // increasing against decreasing: the minimum of the two peaks at the crossing
    if !on_z.slope.sign_on(domain).is_positive() || !(-on_t.slope.clone()).sign_on(domain).is_positive() {
        return Err(LedgerError::NoUniformMinimum(on_z.to_string(), on_t.to_string()));
    }
    let argmax = (on_t.constant.clone() - on_z.constant.clone())
        .try_div(&(on_z.slope.clone() - on_t.slope.clone()))?;
    if !argmax.sign_on(domain).is_nonnegative()
        || !(s.a_max.clone() - argmax.clone()).sign_on(domain).is_nonnegative()
    {
        return Err(LedgerError::Config(format!("crossing {argmax} lies outside [0, {}]", s.a_max)));
    }
    let value = on_z.eval(&argmax);
    Ok(MinimaxBound { a_max: s.a_max.clone(), on_z, on_t, argmax, value })
}

/// `max over a in [0, A(Z)] of min(bound on Z, bound on T~)`.
pub fn minimax_ord_bound<F: Scalar>(ledger: &BlowupLedger<F>) -> Result<MinimaxBound<F>, LedgerError> {
    minimax_from(&setup(ledger)?, ledger.domain())
}

/// Checks of the case analysis bounding `ord_F D` for every divisor `F`
/// over the diagonal, using the coefficient `4/d` on the first exceptional
/// divisor.
pub fn ord_fd_case_checks<F: Scalar>(ledger: &BlowupLedger<F>) -> Result<CheckReport, LedgerError> {
    let e1 = F::from_int(4).try_div(&ledger.d)?;
    ord_fd_case_checks_with(ledger, &e1)
}

pub fn ord_fd_case_checks_with<F: Scalar>(
    ledger: &BlowupLedger<F>,
    e1_coeff: &F,
) -> Result<CheckReport, LedgerError> {
    let domain = ledger.domain();
    let s = setup(ledger)?;
    let mut r = CheckReport::new("ord-bounds over the diagonal");

    // restriction data against the Chow ring
    let ring = s.divs.ring();
    for (surface, class) in [(&s.z, s.divs.get("Z")), (&s.t, s.divs.get("T_tilde"))] {
        let ok = [
            (ring.xi(), ring.xi(), &surface.h_big, &surface.h_big),
            (ring.xi(), ring.h(), &surface.h_big, &surface.a),
            (ring.h(), ring.h(), &surface.a, &surface.a),
        ]
        .iter()
        .all(|(x, y, bx, by)| ring.triple_intersection(x, y, class).is_ok_and(|v| v == pairing(bx, by)));
        r.push(
            format!("restriction degrees on {}", surface.name),
            ok,
            format!("H|={:?} A|={:?}", surface.h_big, surface.a),
        );
    }

    let contact = ledger
        .steps
        .first()
        .and_then(|st| st.contact_multiplicity)
        .ok_or_else(|| LedgerError::Config("first step has no contact multiplicity".into()))?;
    let c = F::from_int(contact.into());
    let diag = (c.clone(), c.clone());
    let zc = s.divs.get("Z");
    let tc = s.divs.get("T_tilde");
    let z_on_t = s.t.restrict(zc.xi(), zc.h());
    let t_on_z = s.z.restrict(tc.xi(), tc.h());
    r.push(
        "tangency along the diagonal",
        z_on_t == diag && t_on_z == diag,
        format!("Z|T~ = {:?}, T~|Z = {:?}, contact {contact}", z_on_t, t_on_z),
    );

    r.push(
        "range of a",
        s.a_max.sign_on(domain).is_nonnegative(),
        format!("0 <= a <= A(Z) = {}", s.a_max),
    );

    let m = minimax_from(&s, domain)?;
    r.push("bound from Z", true, m.on_z.to_string());
    r.push("bound from T~", true, m.on_t.to_string());
    r.push_eq("minimax of the bounds equals the E1 coefficient", &m.value, e1_coeff);

    // second case: halved T~ bound plus the Z and canonical contributions
    let b = -ledger.last().canonical_coefficient("Z")?;
    let halved = m
        .on_t
        .scale(&F::one().try_div(&c)?)
        .add(&Affine::new(b.clone(), F::one()));
    r.push(
        "tangency-halved bound along the next center",
        halved == Affine::constant(F::one()),
        halved.to_string(),
    );

    // canonical class on the first blow-up with boundary e1*E1 + Z1
    let st1 = &ledger.stages[1];
    let e1_total = st1.canonical_coefficient("E1")? + e1_coeff.clone();
    let z_total = st1.canonical_coefficient("Z")? + F::one();
    r.push_eq("E1 coefficient of K + e1*E1 + Z1", &e1_total, &(m.value.clone() + m.a_max.clone()));
    r.push_eq("Z1 coefficient of K + e1*E1 + Z1", &z_total, &m.a_max);
    r.push(
        "boundary coefficients at most one",
        (F::one() - e1_coeff.clone()).sign_on(domain).is_nonnegative(),
        format!("{e1_coeff} <= 1"),
    );

    // K_B + strict(D) + (a + b)Z is numerically the pullback of K + D
    let kb = s.divs.get("K_B");
    let total_xi = Affine::constant(kb.xi().clone())
        .add(&s.strict.0)
        .add(&Affine::new(b.clone() * zc.xi().clone(), zc.xi().clone()));
    let total_h = Affine::constant(kb.h().clone())
        .add(&s.strict.1)
        .add(&Affine::new(b * zc.h().clone(), zc.h().clone()));
    let vanishes = [total_xi.constant, total_xi.slope, total_h.constant, total_h.slope]
        .iter()
        .all(Scalar::is_zero);
    r.push(
        "K_B + strict(D) + (a + b)Z ~ 0",
        vanishes,
        ChowClass::divisor(kb.xi().clone(), kb.h().clone()).to_string(),
    );
    Ok(r)
}
