//! Browser bindings: each export returns a JSON string for `www/index.html`.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use secant_core::chow::{anticanonical_volume, solve_anticanonical_coeffs, NamedDivisors};
use secant_core::kstab::{equivariant_alpha, zhuang_check};
use secant_core::ledger::{minimax_ord_bound, secant_resolution};
use secant_core::scalar::Rat;

fn degree(d: i32) -> Result<Rat, String> {
    if d < 4 {
        return Err(format!("d = {d} is out of range: need d >= 4"));
    }
    Ok(Rat::from(d))
}

fn exact(v: &Rat) -> Value {
    json!({ "exact": v.to_string(), "approx": v.to_f64() })
}

pub fn invariants_value(d: i32) -> Result<Value, String> {
    let d = degree(d)?;
    let divs = NamedDivisors::new(d.clone()).map_err(|e| e.to_string())?;
    let h = divs.get("H");
    let h3 = divs.ring().triple_intersection(h, h, h).map_err(|e| e.to_string())?;
    let (a, b) = solve_anticanonical_coeffs(&divs).map_err(|e| e.to_string())?;
    let vol = anticanonical_volume(&d).map_err(|e| e.to_string())?;
    let lct = secant_resolution(&d).and_then(|l| l.lct("T")).map_err(|e| e.to_string())?;
    let alpha = equivariant_alpha(&d).map_err(|e| e.to_string())?;
    let verdict = zhuang_check(&d).map_err(|e| e.to_string())?;
    Ok(json!({
        "d": d.to_string(),
        "degree": exact(&h3),
        "volume": exact(&vol),
        "anticanonical": { "a": a.to_string(), "b": b.to_string() },
        "lct_T": exact(&lct.value),
        "lct_argmin": lct.argmin,
        "alpha_G": exact(&alpha),
        "conclusion": verdict.conclusion,
        "margins": verdict.cases.iter().map(|c| exact(&c.margin)).collect::<Vec<_>>(),
    }))
}

/// The two affine bounds on `ord` over `a in [0, A(Z)]`, sampled.
pub fn minimax_value(d: i32, samples: u32) -> Result<Value, String> {
    let d = degree(d)?;
    let ledger = secant_resolution(&d).map_err(|e| e.to_string())?;
    let m = minimax_ord_bound(&ledger).map_err(|e| e.to_string())?;
    let n = samples.clamp(2, 2000);
    let points: Vec<Value> = (0..n)
        .map(|i| {
            let a = m.a_max.clone() * Rat::frac(i64::from(i), i64::from(n - 1));
            let (z, t) = (m.on_z.eval(&a), m.on_t.eval(&a));
            json!([a.to_f64(), z.to_f64(), t.to_f64()])
        })
        .collect();
    Ok(json!({
        "d": d.to_string(),
        "a_max": exact(&m.a_max),
        "on_z": format!("{} + ({})*a", m.on_z.constant, m.on_z.slope),
        "on_t": format!("{} + ({})*a", m.on_t.constant, m.on_t.slope),
        "argmax": exact(&m.argmax),
        "value": exact(&m.value),
        "points": points,
    }))
}

/// lct, alpha and the curve-centered margin for each `d` in `lo..=hi`.
pub fn series_value(lo: i32, hi: i32) -> Result<Value, String> {
    degree(lo)?;
    if hi < lo || hi - lo > 400 {
        return Err(format!("range {lo}..{hi} must be nonempty and at most 400 long"));
    }
    let rows = (lo..=hi)
        .map(|n| {
            let v = invariants_value(n)?;
            Ok(json!([n, v["lct_T"]["approx"], v["alpha_G"]["approx"], v["margins"][1]["approx"]]))
        })
        .collect::<Result<Vec<_>, String>>()?;
    Ok(json!({ "columns": ["d", "lct_T", "alpha_G", "margin_over_A"], "rows": rows }))
}

pub fn chow_value(d: i32, expr: &str) -> Result<Value, String> {
    let d = degree(d)?;
    let divs = NamedDivisors::new(d.clone()).map_err(|e| e.to_string())?;
    let class = divs.eval_expr(expr).map_err(|e| e.to_string())?;
    Ok(json!({ "class": class.to_string(), "degree": divs.ring().degree(&class).to_string() }))
}

fn export(v: Result<Value, String>) -> Result<String, JsError> {
    v.map(|v| v.to_string()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn invariants(d: i32) -> Result<String, JsError> {
    export(invariants_value(d))
}

#[wasm_bindgen]
pub fn minimax(d: i32, samples: u32) -> Result<String, JsError> {
    export(minimax_value(d, samples))
}

#[wasm_bindgen]
pub fn series(lo: i32, hi: i32) -> Result<String, JsError> {
    export(series_value(lo, hi))
}

#[wasm_bindgen]
pub fn chow(d: i32, expr: &str) -> Result<String, JsError> {
    export(chow_value(d, expr))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_at_four() {
        let v = invariants_value(4).unwrap();
        assert_eq!(v["degree"]["exact"], "3");
        assert_eq!(v["lct_T"]["exact"], "3/4");
        assert_eq!(v["volume"]["exact"], "24");
    }

    #[test]
    fn minimax_peak() {
        let v = minimax_value(6, 5).unwrap();
        assert_eq!(v["value"]["exact"], "2/3");
        assert_eq!(v["argmax"]["exact"], "1/6");
        assert_eq!(v["points"].as_array().unwrap().len(), 5);
    }

    #[test]
    fn series_and_errors() {
        let v = series_value(4, 8).unwrap();
        assert_eq!(v["rows"].as_array().unwrap().len(), 5);
        assert!(series_value(3, 8).is_err());
        assert!(chow_value(5, "H*(").is_err());
        assert_eq!(chow_value(5, "H*H*H").unwrap()["degree"], "6");
    }
}
