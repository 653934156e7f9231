use std::fmt::Write as _;

use clap::ValueEnum;
use g2t_core::suite::Check;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

enum Line {
    Section(String),
    Value(String, String),
    Check(Check),
}

/// An ordered report. Passing is decided by the checks alone.
#[derive(Default)]
pub struct Report {
    lines: Vec<Line>,
}

fn slug(s: &str) -> String {
    let mut out = String::new();
    for ch in s.chars() {
        if ch.is_ascii_alphanumeric() {
            out.push(ch.to_ascii_lowercase());
        } else if !out.ends_with('_') && !out.is_empty() {
            out.push('_');
        }
    }
    out.trim_end_matches('_').to_string()
}

impl Report {
    pub fn section(&mut self, name: &str) {
        self.lines.push(Line::Section(name.to_string()));
    }

    pub fn value(&mut self, key: &str, value: impl ToString) {
        self.lines.push(Line::Value(key.to_string(), value.to_string()));
    }

    pub fn check(&mut self, c: Check) {
        self.lines.push(Line::Check(c));
    }

    pub fn checks(&mut self, cs: impl IntoIterator<Item = Check>) {
        for c in cs {
            self.check(c);
        }
    }

    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| !matches!(l, Line::Check(c) if !c.pass))
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        let mut section = String::new();
        for l in &self.lines {
            match (format, l) {
                (Format::Text, Line::Section(s)) => {
                    let _ = writeln!(out, "== {s}");
                }
                (Format::Text, Line::Value(k, v)) => {
                    let _ = writeln!(out, "  {k}: {v}");
                }
                (Format::Text, Line::Check(c)) => {
                    let tag = if c.pass { "ok  " } else { "FAIL" };
                    if c.detail.is_empty() {
                        let _ = writeln!(out, "  [{tag}] {}", c.name);
                    } else {
                        let _ = writeln!(out, "  [{tag}] {} ({})", c.name, c.detail);
                    }
                }
                (Format::Structured, Line::Section(s)) => section = slug(s),
                (Format::Structured, Line::Value(k, v)) => {
                    let _ = writeln!(out, "{section}.{} = {v}", slug(k));
                }
                (Format::Structured, Line::Check(c)) => {
                    let key = format!("{section}.check.{}", slug(&c.name));
                    let _ = writeln!(out, "{key} = {}", if c.pass { "pass" } else { "fail" });
                    if !c.detail.is_empty() {
                        let _ = writeln!(out, "{key}.detail = {}", c.detail);
                    }
                }
            }
        }
        match format {
            Format::Text => {
                let _ = writeln!(out, "result: {}", if self.passed() { "pass" } else { "fail" });
            }
            Format::Structured => {
                let _ = writeln!(out, "result = {}", if self.passed() { "pass" } else { "fail" });
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slugs() {
        assert_eq!(slug("H(phi) = h/sqrt6"), "h_phi_h_sqrt6");
        assert_eq!(slug("g2 d∘d = 0"), "g2_d_d_0");
    }

    #[test]
    fn failing_check_fails_report() {
        let mut r = Report::default();
        r.section("a");
        r.value("dim", 3);
        r.check(Check::new("x", true, ""));
        assert!(r.passed());
        r.check(Check::new("y", false, "why"));
        assert!(!r.passed());
        let s = r.render(Format::Structured);
        assert!(s.contains("a.dim = 3\n") && s.contains("a.check.y = fail\n") && s.ends_with("result = fail\n"));
    }
}
