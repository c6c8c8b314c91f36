//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the lines are always printed.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use secant_core::chow::{
    anticanonical_volume, cylinder_divisor_check_with, higher_secant_invariants, solve_anticanonical_coeffs,
    solve_pullback_coeff, ChowClass, ChowRing, NamedDivisors,
};
use secant_core::cylinder::{
    cylinder_full_verify, cylinder_full_verify_with, gamma, gamma_inverse, gamma_plane_check_with,
    ideal_membership_check_with, preimage_line_decomposition_check_with, MVPoly, PolyMap, C3, C3_SHEARED, CHART,
    P1P1, P2,
};
use secant_core::expr::parse_ratfunc;
use secant_core::kstab::{
    anticanonical_profile, equivariant_alpha, s_invariant, volume_scaling_identity_check, zhuang_check,
    zhuang_check_with, Conclusion,
};
use secant_core::ledger::{
    builtin_config, minimax_ord_bound, ord_fd_case_checks_with, secant_resolution, BlowupLedger,
};
use secant_core::scalar::{DomainSign, PiecewisePoly, Rat, RatFuncD, Scalar};

type Outcome = Result<String, String>;

fn rf(s: &str) -> RatFuncD {
    parse_ratfunc(s).expect("valid expression")
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn eq<T: PartialEq + std::fmt::Display>(what: &str, got: &T, want: &T) -> Result<(), String> {
    ensure(got == want, format!("{what}: got {got}, want {want}"))
}

fn c1_degree_and_volume() -> Outcome {
    for d in 4..=40i64 {
        let divs = NamedDivisors::new(Rat::from(d)).map_err(|e| e.to_string())?;
        let h = divs.get("H");
        let h3 = divs.ring().triple_intersection(h, h, h).map_err(|e| e.to_string())?;
        eq("H^3", &h3, &Rat::frac((d - 1) * (d - 2), 2))?;
        let vol = anticanonical_volume(&Rat::from(d)).map_err(|e| e.to_string())?;
        eq("(-K)^3", &vol, &Rat::frac(32 * (d - 1), (d - 2) * (d - 2)))?;
    }
    let divs = NamedDivisors::new(RatFuncD::d()).map_err(|e| e.to_string())?;
    let h = divs.get("H");
    eq("symbolic H^3", &divs.ring().triple_intersection(h, h, h).unwrap(), &rf("(d-1)*(d-2)/2"))?;
    eq("symbolic (-K)^3", &anticanonical_volume(&RatFuncD::d()).unwrap(), &rf("32*(d-1)/(d-2)^2"))?;
    let d4 = NamedDivisors::new(Rat::from(4)).unwrap();
    let h4 = d4.get("H");
    eq("H^3 at 4", &d4.ring().triple_intersection(h4, h4, h4).unwrap(), &Rat::from(3))?;
    eq("(-K)^3 at 4", &anticanonical_volume(&Rat::from(4)).unwrap(), &Rat::from(24))?;
    Ok("d = 4..40 and symbolic; d = 4 gives 3 and 24".into())
}

fn c2_anticanonical_solve() -> Outcome {
    let divs = NamedDivisors::new(RatFuncD::d()).map_err(|e| e.to_string())?;
    let (a, b) = solve_anticanonical_coeffs(&divs).map_err(|e| e.to_string())?;
    eq("a", &a, &rf("4/(d-2)"))?;
    eq("b", &b, &rf("(d-4)/(d-2)"))?;
    let c = solve_pullback_coeff(&divs).map_err(|e| e.to_string())?;
    eq("c", &c, &rf("2/(d-2)"))?;
    Ok(format!("a = {a}, b = {b}, c = {c}"))
}

fn c3_resolution_ledger() -> Outcome {
    let l = secant_resolution(&RatFuncD::d()).map_err(|e| e.to_string())?;
    let s1 = &l.stages[1];
    let s2 = l.last();
    let get = |st: &secant_core::ledger::Stage<RatFuncD>, p: &str| st.coefficient("T", p).unwrap();
    let kc = |st: &secant_core::ledger::Stage<RatFuncD>, p: &str| st.canonical_coefficient(p).unwrap();
    eq("ord_Z T", &get(&l.stages[0], "Z"), &rf("2/(d-2)"))?;
    eq("K coefficient of Z", &kc(&l.stages[0], "Z"), &rf("-(d-4)/(d-2)"))?;
    eq("ord_E1 T", &get(s1, "E1"), &rf("d/(d-2)"))?;
    eq("K coefficient of E1", &kc(s1, "E1"), &rf("2/(d-2)"))?;
    eq("ord_E2 T", &get(s2, "E2"), &rf("2*d/(d-2)"))?;
    eq("K coefficient of E2", &kc(s2, "E2"), &rf("4/(d-2)"))?;
    let lct = l.lct("T").map_err(|e| e.to_string())?;
    eq("lct", &lct.value, &rf("(d+2)/(2*d)"))?;
    eq("argmin", &lct.argmin.as_str(), &"E2")?;
    Ok(format!("six table entries reproduced; lct = {} at {}", lct.value, lct.argmin))
}

fn c4_s_and_a_for_t() -> Outcome {
    let v = anticanonical_volume(&RatFuncD::d()).map_err(|e| e.to_string())?;
    let s = s_invariant(&anticanonical_profile(v.clone()), &v).map_err(|e| e.to_string())?;
    eq("S(T)", &s, &rf("1/4"))?;
    let a = secant_resolution(&RatFuncD::d()).unwrap().log_discrepancy("T").map_err(|e| e.to_string())?;
    eq("A(T)", &a, &RatFuncD::one())?;
    Ok(format!("S(T) = {s}, A(T) = {a}"))
}

fn c5_minimax() -> Outcome {
    let m = minimax_ord_bound(&secant_resolution(&RatFuncD::d()).unwrap()).map_err(|e| e.to_string())?;
    eq("max", &m.value, &rf("4/d"))?;
    eq("argmax", &m.argmax, &rf("4/(d*(d-2))"))?;
    for d in 4..=12i64 {
        let a_max = Rat::frac(2, d - 2);
        let mut best = (Rat::from(-1), Rat::zero());
        for q in 1..=120i64 {
            for k in 0..=q {
                let a = Rat::frac(k, q);
                if a > a_max {
                    break;
                }
                let f = a.clone() * Rat::from(d - 2);
                let g = Rat::frac(4, d - 2) - Rat::from(2) * a.clone();
                let lo = if f < g { f } else { g };
                if lo > best.0 {
                    best = (lo, a);
                }
            }
        }
        let lib = minimax_ord_bound(&secant_resolution(&Rat::from(d)).unwrap()).unwrap();
        eq(&format!("grid max at d = {d}"), &lib.value, &best.0)?;
        eq(&format!("grid argmax at d = {d}"), &lib.argmax, &best.1)?;
    }
    Ok(format!("max {} at a = {}; grid oracle agrees for d = 4..12", m.value, m.argmax))
}

fn c6_zhuang() -> Outcome {
    let v = zhuang_check(&RatFuncD::d()).map_err(|e| e.to_string())?;
    ensure(v.conclusion == Conclusion::KPolystable, "verdict is not K-polystable")?;
    eq("T margin", &v.cases[0].margin, &rf("3/4"))?;
    eq("C-centered bound", &v.cases[1].s_or_bound, &rf("(d+1)/(d+2)"))?;
    eq("C-centered margin", &v.cases[1].margin, &rf("1/(d+2)"))?;
    for c in &v.cases {
        ensure(c.margin_sign == DomainSign::Positive, format!("margin of {} not positive on d >= 4", c.case))?;
    }
    let adv = zhuang_check_with(&RatFuncD::d(), &rf("1/2")).map_err(|e| e.to_string())?;
    eq("adversarial margin", &adv.cases[1].margin, &RatFuncD::zero())?;
    ensure(adv.conclusion == Conclusion::Inconclusive, "adversarial run should be inconclusive")?;
    Ok(format!(
        "margins {} and A*({}) positive for d >= 4; t = 1/2 gives margin 0",
        v.cases[0].margin, v.cases[1].margin
    ))
}

fn c7_equivariant_alpha() -> Outcome {
    let sym = equivariant_alpha(&RatFuncD::d()).map_err(|e| e.to_string())?;
    eq("alpha_G", &sym, &rf("(d+2)/(2*d)"))?;
    eq("alpha_G at 4", &equivariant_alpha(&Rat::from(4)).unwrap(), &Rat::frac(3, 4))?;
    Ok(format!("{sym}, 3/4 at d = 4"))
}

fn c8_cylinder() -> Outcome {
    let v = cylinder_full_verify(&RatFuncD::d()).map_err(|e| e.to_string())?;
    ensure(v.passed && v.steps.len() == 5, "not all five steps passed")?;
    let all_items: Vec<_> = v.steps.iter().flat_map(|s| s.certificate.items.iter()).collect();
    for needle in [
        "sigma^*(z)",
        "F(iota(s, u)) = 0",
        "gamma o gamma^-1 = id",
        "chart equation o gamma^-1",
        "(4/d)*(1/2 + (d-2)/4) = 1",
        "sigma^*(Q) = (1/4)(tu - sv)^2",
    ] {
        let item = all_items.iter().find(|i| i.name == needle).ok_or(format!("missing item {needle}"))?;
        ensure(item.passed, format!("{needle} failed"))?;
    }
    Ok("five steps pass symbolically".into())
}

fn binom(n: i64, k: i64) -> i64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn c9_higher_secant() -> Outcome {
    let hs = higher_secant_invariants(2, Rat::from(7)).map_err(|e| e.to_string())?;
    eq("coefficient", &hs.anticanonical_coeff, &Rat::from(2))?;
    eq("degree", &hs.degree, &Rat::from(10))?;
    eq("volume", &hs.anticanonical_volume, &Rat::from(320))?;
    eq("discrepancy", &hs.discrepancy_coeff, &Rat::frac(1, 3))?;
    eq("binomial oracle", &hs.degree, &Rat::from(binom(5, 3)))?;
    eq("volume oracle", &hs.anticanonical_volume, &(Rat::from(2).pow(5) * Rat::from(binom(5, 3))))?;
    Ok("(k, d) = (2, 7) gives (2, 10, 320, 1/3)".into())
}

fn c10_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5ec);
    let sym = secant_resolution(&RatFuncD::d()).unwrap();
    let sym_lct = sym.lct("T").unwrap().value;
    for _ in 0..50 {
        let d = rng.gen_range(4..100_000i64);
        let num = secant_resolution(&Rat::from(d)).unwrap();
        for (s, c) in sym.stages.iter().zip(&num.stages) {
            for (p, v) in &s.tracked["T"] {
                eq("ledger coherence", &v.eval_int(d).unwrap(), &c.tracked["T"][p])?;
            }
        }
        eq("lct coherence", &sym_lct.eval_int(d).unwrap(), &num.lct("T").unwrap().value)?;
        eq(
            "volume coherence",
            &anticanonical_volume(&RatFuncD::d()).unwrap().eval_int(d).unwrap(),
            &anticanonical_volume(&Rat::from(d)).unwrap(),
        )?;
    }

    let ring = ChowRing::new(Rat::from(9));
    let mut rr = || Rat::frac(rng.gen_range(-20..20), rng.gen_range(1..9));
    for _ in 0..20 {
        let x = ChowClass::divisor(rr(), rr()).add(&ChowClass::scalar(rr()));
        let y = ChowClass::divisor(rr(), rr()).add(&ChowClass::point().scale(&rr()));
        let z = ChowClass::divisor(rr(), rr());
        ensure(ring.mul(&x, &y) == ring.mul(&y, &x), "commutativity")?;
        ensure(ring.mul(&ring.mul(&x, &y), &z) == ring.mul(&x, &ring.mul(&y, &z)), "associativity")?;
        ensure(ring.mul(&x, &y.add(&z)) == ring.mul(&x, &y).add(&ring.mul(&x, &z)), "distributivity")?;
    }

    let mut cfg = builtin_config();
    let three_t = cfg.tracked["T"].iter().map(|(k, v)| (k.clone(), v.clone() * RatFuncD::from_int(3))).collect();
    cfg.tracked.insert("3T".into(), three_t);
    let l = BlowupLedger::replay(&cfg, &RatFuncD::d()).unwrap();
    for p in &l.last().primes {
        eq(
            "ledger linearity",
            &l.last().coefficient("3T", p).unwrap(),
            &(l.last().coefficient("T", p).unwrap() * RatFuncD::from_int(3)),
        )?;
    }

    let prof = anticanonical_profile(Rat::from(24));
    eq(
        "S scale invariance",
        &s_invariant(&prof.scale(&Rat::frac(7, 3)), &Rat::from(56)).unwrap(),
        &s_invariant(&prof, &Rat::from(24)).unwrap(),
    )?;

    // mutations: every verification operation must reject a perturbed input
    let mut mutations = 0;
    let ledger = secant_resolution(&RatFuncD::d()).unwrap();
    ensure(!ord_fd_case_checks_with(&ledger, &rf("4/(d-1)")).unwrap().passed, "ord case checks accepted 4/(d-1)")?;
    mutations += 1;
    let divs = NamedDivisors::new(RatFuncD::d()).unwrap();
    ensure(!cylinder_divisor_check_with(&divs, &rf("4/(d-1)")).unwrap().passed, "divisor check accepted 4/(d-1)")?;
    mutations += 1;
    let bad_f = MVPoly::parse(&CHART, "w0^2 + 2*y*w0*w1 + x*w1^2").unwrap();
    ensure(!ideal_membership_check_with(&bad_f).unwrap().passed, "ideal check accepted sign flip")?;
    mutations += 1;
    let bad_gamma = PolyMap::new("gamma", &C3, &C3_SHEARED, &["w0", "y", "w0^2 - y*w0 + x"]).unwrap();
    ensure(!gamma_plane_check_with(&bad_gamma, &gamma_inverse()).unwrap().passed, "gamma check accepted mutation")?;
    ensure(gamma_plane_check_with(&gamma(), &gamma_inverse()).unwrap().passed, "gamma check rejects the original")?;
    mutations += 1;
    let bad_sigma = PolyMap::new("sigma", &P1P1, &P2, &["s*u", "(t*u + s*v)/2", "t*u"]).unwrap();
    ensure(!preimage_line_decomposition_check_with(&bad_sigma).unwrap().passed, "preimage check accepted mutation")?;
    mutations += 1;
    ensure(cylinder_full_verify_with(&RatFuncD::d(), &rf("4/(d-1)")).is_err(), "full verify accepted mutation")?;
    mutations += 1;
    let off = PiecewisePoly::power_falloff(Rat::from(24), Rat::frac(3, 2), 3, Rat::from(2)).unwrap();
    ensure(
        !volume_scaling_identity_check(&Rat::one(), &Rat::frac(1, 2), &Rat::frac(3, 4), &off).unwrap(),
        "volume scaling accepted mismatched tau",
    )?;
    mutations += 1;
    let adv = zhuang_check_with(&Rat::from(4), &Rat::frac(1, 2)).unwrap();
    ensure(adv.conclusion == Conclusion::Inconclusive, "zhuang check concluded with t = 1/2")?;
    mutations += 1;
    let mut bad_cfg = builtin_config();
    bad_cfg.steps[0].incident.insert("T".into(), RatFuncD::from_int(2));
    let bad_l = BlowupLedger::replay(&bad_cfg, &RatFuncD::d()).unwrap();
    ensure(bad_l.lct("T").unwrap().value != sym_lct, "ledger insensitive to multiplicity")?;
    mutations += 1;

    Ok(format!("50 random d coherent, ring axioms, linearity, scale invariance, {mutations} mutations rejected"))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("degree and anticanonical volume", c1_degree_and_volume),
        ("anticanonical solve", c2_anticanonical_solve),
        ("resolution ledger and lct", c3_resolution_ledger),
        ("S and A of T", c4_s_and_a_for_t),
        ("minimax order bound", c5_minimax),
        ("equivariant criterion verdict", c6_zhuang),
        ("equivariant alpha", c7_equivariant_alpha),
        ("polar cylinder", c8_cylinder),
        ("higher secant evaluator", c9_higher_secant),
        ("property suites and mutations", c10_properties),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {:2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    let elapsed = start.elapsed();
    println!("{} of {} criteria passed in {:.2?}", criteria.len() - failed, criteria.len(), elapsed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
