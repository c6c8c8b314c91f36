use serde_json::{json, Map, Value};

use crate::commands::Section;

pub fn table(sections: &[Section]) -> String {
    let mut out = String::new();
    for (i, s) in sections.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&format!("d = {}{}\n", s.d, if s.passed { "" } else { "  [FAILED]" }));
        let width = s.entries.iter().map(|e| e.name.len()).max().unwrap_or(0);
        for e in &s.entries {
            out.push_str(&format!("  {:width$}  {}\n", e.name, e.value));
        }
        for n in &s.notes {
            out.push_str(&format!("  note: {n}\n"));
        }
        if let Some(tree) = &s.tree {
            for line in tree.lines() {
                out.push_str(&format!("  {line}\n"));
            }
        }
    }
    out
}

pub fn json(command: &str, mode: &str, sections: &[Section]) -> String {
    let results: Vec<Value> = sections
        .iter()
        .map(|s| {
            let values: Map<String, Value> =
                s.entries.iter().map(|e| (e.name.clone(), Value::String(e.value.clone()))).collect();
            let mut obj = Map::new();
            obj.insert("d".into(), Value::String(s.d.clone()));
            obj.insert("passed".into(), Value::Bool(s.passed));
            obj.insert("values".into(), Value::Object(values));
            if !s.notes.is_empty() {
                obj.insert("notes".into(), json!(s.notes));
            }
            if let Some(detail) = &s.detail {
                obj.insert("detail".into(), detail.clone());
            }
            Value::Object(obj)
        })
        .collect();
    let doc = json!({
        "command": command,
        "d": mode,
        "passed": sections.iter().all(|s| s.passed),
        "results": results,
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("serializable");
    text.push('\n');
    text
}

pub fn csv(sections: &[Section]) -> String {
    let mut w = ::csv::Writer::from_writer(Vec::new());
    w.write_record(["d", "name", "numerator", "denominator"]).expect("in-memory write");
    for s in sections {
        for e in &s.entries {
            if let Some((num, den)) = &e.parts {
                w.write_record([s.d.as_str(), e.name.as_str(), num, den]).expect("in-memory write");
            }
        }
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}
