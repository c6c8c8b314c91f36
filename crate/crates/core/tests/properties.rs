use proptest::prelude::*;

use secant_core::chow::{ChowClass, ChowRing};
use secant_core::expr::parse_ratfunc;
use secant_core::kstab::{anticanonical_profile, fujita_bound, s_invariant, FujitaBoundInput};
use secant_core::ledger::{builtin_config, BlowupLedger};
use secant_core::scalar::{Domain, Rat, RatFuncD, Scalar};

fn rat() -> impl Strategy<Value = Rat> {
    (-40i64..40, 1i64..12).prop_map(|(n, d)| Rat::frac(n, d))
}

fn pos_rat() -> impl Strategy<Value = Rat> {
    (1i64..60, 1i64..12).prop_map(|(n, d)| Rat::frac(n, d))
}

fn class() -> impl Strategy<Value = ChowClass<Rat>> {
    (rat(), rat(), rat(), rat()).prop_map(|(a, b, c, e)| {
        ChowClass::scalar(a).add(&ChowClass::divisor(b, c)).add(&ChowClass::point().scale(&e))
    })
}

const SYMBOLIC: [&str; 6] = [
    "(d+2)/(2*d)",
    "32*(d-1)/(d-2)^2",
    "(d-1)*(d-2)/2",
    "4/(d*(d-2))",
    "-(d-4)/(d-2)",
    "(d^3 - 5*d + 1)/(d^2 + 3)",
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn symbolic_and_numeric_agree(n in 4i64..10_000, i in 0usize..6, j in 0usize..6) {
        let d = Rat::from(n);
        let f = parse_ratfunc(SYMBOLIC[i]).unwrap();
        let g = parse_ratfunc(SYMBOLIC[j]).unwrap();
        let (fv, gv) = (f.eval(&d).unwrap(), g.eval(&d).unwrap());
        prop_assert_eq!((f.clone() + g.clone()).eval(&d).unwrap(), fv.clone() + gv.clone());
        prop_assert_eq!((f.clone() * g.clone()).eval(&d).unwrap(), fv.clone() * gv.clone());
        prop_assert_eq!((f.clone() - g.clone()).eval(&d).unwrap(), fv.clone() - gv.clone());
        prop_assert_eq!(f.try_div(&g).unwrap().eval(&d).unwrap(), fv.checked_div(&gv).unwrap());
    }

    #[test]
    fn ledger_symbolic_evaluates_to_concrete(n in 4i64..2_000) {
        let cfg = builtin_config();
        let sym = BlowupLedger::replay(&cfg, &RatFuncD::d()).unwrap();
        let num = BlowupLedger::replay(&cfg, &Rat::from(n)).unwrap();
        for (s, c) in sym.stages.iter().zip(&num.stages) {
            for (name, row) in &s.tracked {
                for (p, v) in row {
                    prop_assert_eq!(&v.eval_int(n).unwrap(), &c.tracked[name][p]);
                }
            }
        }
        prop_assert_eq!(sym.lct("T").unwrap().value.eval_int(n).unwrap(), num.lct("T").unwrap().value);
    }

    #[test]
    fn chow_ring_axioms(n in 4i64..200, x in class(), y in class(), z in class()) {
        let ring = ChowRing::new(Rat::from(n));
        prop_assert_eq!(ring.mul(&x, &y), ring.mul(&y, &x));
        prop_assert_eq!(ring.mul(&ring.mul(&x, &y), &z), ring.mul(&x, &ring.mul(&y, &z)));
        prop_assert_eq!(ring.mul(&x, &y.add(&z)), ring.mul(&x, &y).add(&ring.mul(&x, &z)));
        prop_assert_eq!(ring.mul(&x, &ChowClass::scalar(Rat::one())), x.clone());
        let h = ring.h();
        prop_assert!(ring.pow(&h, 3).is_zero());
    }

    #[test]
    fn ledger_is_linear_in_seeds(n in 4i64..500, c in pos_rat(), k in pos_rat()) {
        let mut cfg = builtin_config();
        let (t, z) = (&cfg.tracked["T"], &cfg.tracked["Z"]);
        let (cc, kk) = (RatFuncD::constant(c.clone()), RatFuncD::constant(k.clone()));
        let combo = t
            .keys()
            .chain(z.keys())
            .map(|p| {
                let get = |row: &std::collections::BTreeMap<String, RatFuncD>| row.get(p).cloned().unwrap_or_else(RatFuncD::zero);
                (p.clone(), get(t) * cc.clone() + get(z) * kk.clone())
            })
            .collect();
        cfg.tracked.insert("combo".into(), combo);
        let l = BlowupLedger::replay(&cfg, &Rat::from(n)).unwrap();
        for p in &l.last().primes {
            let lhs = l.last().coefficient("combo", p).unwrap();
            let rhs = c.clone() * l.last().coefficient("T", p).unwrap() + k.clone() * l.last().coefficient("Z", p).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn lct_scales_inversely(n in 4i64..500, c in pos_rat()) {
        let mut cfg = builtin_config();
        let scaled = cfg.tracked["T"]
            .iter()
            .map(|(p, v)| (p.clone(), v.clone() * RatFuncD::constant(c.clone())))
            .collect();
        cfg.tracked.insert("cT".into(), scaled);
        let l = BlowupLedger::replay(&cfg, &Rat::from(n)).unwrap();
        let base = l.lct("T").unwrap();
        let sc = l.lct("cT").unwrap();
        prop_assert_eq!(sc.value, base.value.checked_div(&c).unwrap());
        prop_assert_eq!(sc.argmin, base.argmin);
    }

    #[test]
    fn s_invariant_is_scale_invariant(v in pos_rat(), c in pos_rat(), tau in pos_rat()) {
        let prof = anticanonical_profile(v.clone());
        let s1 = s_invariant(&prof, &v).unwrap();
        let s2 = s_invariant(&prof.scale(&c), &(v.clone() * c.clone())).unwrap();
        prop_assert_eq!(s1, s2);
        let general = secant_core::scalar::PiecewisePoly::power_falloff(v.clone(), tau.clone(), 3, tau.clone() + Rat::one()).unwrap();
        prop_assert_eq!(s_invariant(&general.scale(&c), &(v * c)).unwrap(), tau * Rat::frac(1, 4));
    }

    #[test]
    fn fujita_bound_is_monotone(t in pos_rat(), dt in pos_rat(), s_extra in pos_rat(), ds in pos_rat(), a in pos_rat()) {
        let dom = Domain::secant();
        let s = t.clone() + dt.clone() + s_extra;
        let b = |t: &Rat, s: &Rat| fujita_bound(&FujitaBoundInput { n: 3, t: t.clone(), s: s.clone(), a: a.clone() }, &dom).unwrap();
        let base = b(&t, &s);
        prop_assert!(b(&(t.clone() + dt.clone()), &s) <= base);
        prop_assert!(b(&t, &(s.clone() + ds)) <= base);
    }
}

#[test]
fn fujita_bound_monotone_symbolically() {
    let dom = Domain::secant();
    let t = parse_ratfunc("(d+2)/(2*d)").unwrap();
    let one = RatFuncD::one();
    let b = |t: &RatFuncD, s: &RatFuncD| {
        fujita_bound(&FujitaBoundInput { n: 3, t: t.clone(), s: s.clone(), a: one.clone() }, &dom).unwrap()
    };
    let base = b(&t, &one);
    let bigger_t = t.clone() + parse_ratfunc("1/(4*d)").unwrap();
    let bigger_s = one.clone() + parse_ratfunc("1/d").unwrap();
    assert!((base.clone() - b(&bigger_t, &one)).sign_on(&dom).is_nonnegative());
    assert!((base.clone() - b(&t, &bigger_s)).sign_on(&dom).is_nonnegative());
    assert!((one - base).sign_on(&dom).is_positive());
}

