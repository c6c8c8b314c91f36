use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckItem {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Named list of pass/fail items produced by a verification routine.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    pub items: Vec<CheckItem>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>) -> Self {
        CheckReport { name: name.into(), passed: true, items: Vec::new() }
    }

    pub fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.passed &= passed;
        self.items.push(CheckItem { name: name.into(), passed, detail: detail.into() });
    }

    /// Record `lhs == rhs` with both sides in the detail line.
    pub fn push_eq<T: PartialEq + fmt::Display>(&mut self, name: impl Into<String>, lhs: &T, rhs: &T) {
        let ok = lhs == rhs;
        let rel = if ok { "==" } else { "!=" };
        self.push(name, ok, format!("{lhs} {rel} {rhs}"));
    }

    pub fn first_failure(&self) -> Option<&CheckItem> {
        self.items.iter().find(|i| !i.passed)
    }

    pub fn item(&self, name: &str) -> Option<&CheckItem> {
        self.items.iter().find(|i| i.name == name)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} [{}]", self.name, if self.passed { "PASS" } else { "FAIL" })?;
        for item in &self.items {
            writeln!(f, "  {} {}: {}", if item.passed { "ok  " } else { "FAIL" }, item.name, item.detail)?;
        }
        Ok(())
    }
}

/// Node of the indented `key: value` text format used for verdicts and
/// certificates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeNode {
    pub key: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<TreeNode>,
}

impl TreeNode {
    pub fn leaf(key: impl Into<String>, value: impl fmt::Display) -> Self {
        TreeNode { key: key.into(), value: Some(value.to_string()), children: Vec::new() }
    }

    pub fn branch(key: impl Into<String>, children: Vec<TreeNode>) -> Self {
        TreeNode { key: key.into(), value: None, children }
    }

    pub fn with_value(mut self, value: impl fmt::Display) -> Self {
        self.value = Some(value.to_string());
        self
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out, 0);
        out
    }

    fn render_into(&self, out: &mut String, depth: usize) {
        out.push_str(&"  ".repeat(depth));
        out.push_str(&self.key);
        out.push(':');
        if let Some(v) = &self.value {
            out.push(' ');
            out.push_str(v);
        }
        out.push('\n');
        for c in &self.children {
            c.render_into(out, depth + 1);
        }
    }
}

impl From<&CheckReport> for TreeNode {
    fn from(r: &CheckReport) -> Self {
        TreeNode::branch(
            r.name.clone(),
            r.items
                .iter()
                .map(|i| TreeNode::leaf(i.name.clone(), format!("{} ({})", pass_word(i.passed), i.detail)))
                .collect(),
        )
        .with_value(pass_word(r.passed))
    }
}

fn pass_word(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}
