use serde::Serialize;
use serde_json::Value;

use secant_core::chow::{
    anticanonical_volume, higher_secant_invariants, solve_anticanonical_coeffs, solve_pullback_coeff,
    NamedDivisors,
};
use secant_core::cylinder::{cylinder_full_verify, CylinderError};
use secant_core::kstab::{
    alpha_upper_bound_witness, anticanonical_profile, equivariant_alpha, s_invariant, zhuang_check_with, Conclusion,
};
use secant_core::ledger::{secant_resolution, BlowupLedger, LedgerConfig};
use secant_core::scalar::{eval_ratfunc_at, RatFuncD, Scalar};

use crate::CliError;

/// Scalars the CLI can run over.
pub trait Num: Scalar + Serialize + Send + Sync {
    fn label(&self) -> String {
        self.to_string()
    }

    /// Extra remark for symbolic runs.
    fn limit_note(_name: &str, _v: &Self) -> Option<String> {
        None
    }
}

impl Num for secant_core::scalar::Rat {}

impl Num for RatFuncD {
    fn label(&self) -> String {
        "symbolic".into()
    }

    fn limit_note(name: &str, v: &Self) -> Option<String> {
        v.limit_at_infinity().map(|l| format!("{name} -> {l} as d -> oo"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub name: String,
    pub value: String,
    /// Numerator and denominator for exact scalar values.
    pub parts: Option<(String, String)>,
}

impl Entry {
    fn scalar<F: Scalar>(name: &str, v: &F) -> Self {
        Entry { name: name.into(), value: v.to_string(), parts: Some(v.parts()) }
    }

    fn text(name: &str, value: impl ToString) -> Self {
        Entry { name: name.into(), value: value.to_string(), parts: None }
    }
}

/// Result of one command at one value of `d`.
#[derive(Debug, Clone)]
pub struct Section {
    pub d: String,
    pub passed: bool,
    pub entries: Vec<Entry>,
    pub notes: Vec<String>,
    /// Structured record for JSON output.
    pub detail: Option<Value>,
    /// Pre-rendered tree for table output.
    pub tree: Option<String>,
}

impl Section {
    fn new<F: Num>(d: &F) -> Self {
        Section { d: d.label(), passed: true, entries: Vec::new(), notes: Vec::new(), detail: None, tree: None }
    }
}

fn core_err(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn to_json<T: Serialize>(v: &T) -> Result<Value, CliError> {
    serde_json::to_value(v).map_err(|e| CliError::Usage(e.to_string()))
}

pub fn invariants<F: Num>(d: &F) -> Result<Section, CliError> {
    let mut s = Section::new(d);
    let divs = NamedDivisors::new(d.clone()).map_err(core_err)?;
    let h = divs.get("H");
    let (a, b) = solve_anticanonical_coeffs(&divs).map_err(core_err)?;
    let c = solve_pullback_coeff(&divs).map_err(core_err)?;
    let vol = anticanonical_volume(d).map_err(core_err)?;
    let ledger = secant_resolution(d).map_err(core_err)?;
    let lct = ledger.lct("T").map_err(core_err)?;
    let alpha_g = equivariant_alpha(d).map_err(core_err)?;
    let s_t = s_invariant(&anticanonical_profile(vol.clone()), &vol).map_err(core_err)?;
    let witness = alpha_upper_bound_witness(d).map_err(core_err)?;

    s.entries = vec![
        Entry::scalar("H^3", &divs.ring().triple_intersection(h, h, h).map_err(core_err)?),
        Entry::scalar("(-K)^3", &vol),
        Entry::scalar("a", &a),
        Entry::scalar("b", &b),
        Entry::scalar("c", &c),
        Entry::scalar("lct(T)", &lct.value),
        Entry::scalar("alpha_G", &alpha_g),
        Entry::scalar("alpha_upper_bound", &witness.lct_upper_bound),
        Entry::scalar("S(T)", &s_t),
        Entry::scalar("A(T)", &ledger.log_discrepancy("T").map_err(core_err)?),
    ];
    s.notes.extend(F::limit_note("alpha_G", &alpha_g));
    s.passed = witness.class_check;
    Ok(s)
}

pub fn lct<F: Num>(d: &F, boundary: &str) -> Result<Section, CliError> {
    let mut s = Section::new(d);
    let ledger = secant_resolution(d).map_err(core_err)?;
    let r = ledger.lct(boundary).map_err(core_err)?;
    s.entries.push(Entry::scalar(&format!("lct({boundary})"), &r.value));
    s.entries.push(Entry::text("argmin", &r.argmin));
    for t in &r.terms {
        s.entries.push(Entry::scalar(&format!("A({})", t.divisor), &t.log_discrepancy));
        s.entries.push(Entry::scalar(&format!("ord_{}({boundary})", t.divisor), &t.order));
    }
    s.detail = Some(to_json(&r)?);
    Ok(s)
}

pub fn zhuang<F: Num>(d: &F, t: Option<&RatFuncD>) -> Result<Section, CliError> {
    let mut s = Section::new(d);
    let t = match t {
        Some(t) => eval_ratfunc_at(t, d).map_err(core_err)?,
        None => equivariant_alpha(d).map_err(core_err)?,
    };
    let v = zhuang_check_with(d, &t).map_err(core_err)?;
    s.entries.push(Entry::scalar("t", &t));
    for (i, c) in v.cases.iter().enumerate() {
        let suffix = if c.a.is_some() { "" } else { "/A" };
        s.entries.push(Entry::scalar(&format!("S_or_bound[{i}]{suffix}"), &c.s_or_bound));
        s.entries.push(Entry::scalar(&format!("margin[{i}]{suffix}"), &c.margin));
    }
    s.passed = v.conclusion == Conclusion::KPolystable;
    s.tree = Some(v.to_tree().render());
    s.detail = Some(to_json(&v)?);
    Ok(s)
}

pub fn cylinder<F: Num>(d: &F) -> Result<Section, CliError> {
    let mut s = Section::new(d);
    match cylinder_full_verify(d) {
        Ok(v) => {
            s.entries.push(Entry::text("steps_passed", v.steps.len()));
            s.tree = Some(v.to_tree().render());
            s.detail = Some(to_json(&v)?);
        }
        Err(CylinderError::StepFailed { step, certificate }) => {
            s.passed = false;
            s.entries.push(Entry::text("failed_step", &step));
            s.tree = Some(certificate.to_string());
            s.detail = Some(to_json(&certificate)?);
        }
        Err(e) => return Err(core_err(e)),
    }
    Ok(s)
}

pub fn chow_eval<F: Num>(d: &F, expr: &str) -> Result<Section, CliError> {
    let mut s = Section::new(d);
    let divs = NamedDivisors::new(d.clone()).map_err(core_err)?;
    let class = divs.eval_expr(expr).map_err(core_err)?;
    s.entries.push(Entry::text("class", &class));
    s.entries.push(Entry::scalar("degree", &divs.ring().degree(&class)));
    Ok(s)
}

pub fn higher_secant<F: Num>(k: u32, d: &F) -> Result<Section, CliError> {
    let mut s = Section::new(d);
    let hs = higher_secant_invariants(k, d.clone()).map_err(core_err)?;
    s.entries = vec![
        Entry::text("k", k),
        Entry::scalar("anticanonical_coeff", &hs.anticanonical_coeff),
        Entry::scalar("degree", &hs.degree),
        Entry::scalar("anticanonical_volume", &hs.anticanonical_volume),
        Entry::scalar("discrepancy_coeff", &hs.discrepancy_coeff),
    ];
    Ok(s)
}

pub fn ledger_replay<F: Num>(cfg: &LedgerConfig, d: &F) -> Result<Section, CliError> {
    let mut s = Section::new(d);
    let l = BlowupLedger::replay(cfg, d).map_err(core_err)?;
    for (i, st) in l.stages.iter().enumerate() {
        for (w, row) in &st.tracked {
            for (p, v) in row {
                s.entries.push(Entry::scalar(&format!("stage{i}.{w}.{p}"), v));
            }
        }
        for (p, v) in &st.canonical {
            s.entries.push(Entry::scalar(&format!("stage{i}.K.{p}"), v));
        }
    }
    for p in &l.last().primes {
        s.entries.push(Entry::scalar(&format!("A({p})"), &l.log_discrepancy(p).map_err(core_err)?));
    }
    for w in l.last().tracked.keys() {
        match l.lct(w) {
            Ok(r) => {
                s.entries.push(Entry::scalar(&format!("lct({w})"), &r.value));
                s.entries.push(Entry::text(&format!("argmin({w})"), &r.argmin));
            }
            Err(e) => s.notes.push(format!("lct({w}) unavailable: {e}")),
        }
    }
    s.detail = Some(to_json(&l)?);
    Ok(s)
}
