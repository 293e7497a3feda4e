//! Line-oriented sessions shared by `eval -f` and the REPL, so that both
//! print exactly the same thing for the same input.

use crate::ast::Span;
use crate::config::{Config, Format};
use crate::diag::Diagnostic;
use crate::eval::{error_json, render, to_json, Env};
use crate::parser::parse_stmt;

pub struct Session {
    pub env: Env,
}

/// Result of one input line.
#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    /// Blank or comment-only line.
    Empty,
    Bound(String),
    Value(String),
    Error(String),
}

impl Outcome {
    pub fn is_error(&self) -> bool {
        matches!(self, Outcome::Error(_))
    }

    /// The printed form, if the line prints anything.
    pub fn text(&self) -> Option<&str> {
        match self {
            Outcome::Value(s) | Outcome::Error(s) => Some(s),
            Outcome::Empty | Outcome::Bound(_) => None,
        }
    }
}

fn blank(line: &str) -> bool {
    let t = line.trim();
    t.is_empty() || t.starts_with('#')
}

impl Session {
    pub fn new(cfg: &Config) -> sigma_core::Result<Session> {
        Ok(Session { env: Env::new(cfg)? })
    }

    /// Runs one line; `line_no` shifts diagnostic positions.
    pub fn line(&mut self, src: &str, line_no: usize) -> Outcome {
        if blank(src) {
            return Outcome::Empty;
        }
        let shift = |mut d: Diagnostic| {
            d.span = Span { line: d.span.line + line_no - 1, col: d.span.col };
            d
        };
        let result = parse_stmt(src).and_then(|stmt| {
            let name = match &stmt {
                crate::ast::Stmt::Let(n, _) => Some(n.clone()),
                crate::ast::Stmt::Expr(_) => None,
            };
            self.env.run(&stmt).map(|v| (name, v))
        });
        let w = self.env.window;
        match (self.env.format, result) {
            (_, Ok((Some(name), _))) => Outcome::Bound(name),
            (Format::Text, Ok((None, v))) => Outcome::Value(render(&v.expect("expression value"), w)),
            (Format::Json, Ok((None, v))) => {
                let mut rec = to_json(&v.expect("expression value"), w);
                rec["input"] = src.trim().into();
                Outcome::Value(rec.to_string())
            }
            (Format::Text, Err(d)) => Outcome::Error(format!("error: {}", shift(d))),
            (Format::Json, Err(d)) => {
                let mut rec = error_json(&shift(d));
                rec["input"] = src.trim().into();
                Outcome::Error(rec.to_string())
            }
        }
    }

    /// Runs every line of `src`. Returns the printed output and whether
    /// every line succeeded.
    pub fn run_source(&mut self, src: &str) -> (String, bool) {
        let mut out = String::new();
        let mut ok = true;
        for (i, line) in src.lines().enumerate() {
            let o = self.line(line, i + 1);
            ok &= !o.is_error();
            if let Some(t) = o.text() {
                out.push_str(t);
                out.push('\n');
            }
        }
        (out, ok)
    }
}

/// Evaluates `src` in a fresh session.
pub fn evaluate(src: &str, cfg: &Config) -> (String, bool) {
    match Session::new(cfg) {
        Ok(mut s) => s.run_source(src),
        Err(e) => (format!("error: {e}\n"), false),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn batch_lines_and_positions() {
        let (out, ok) = evaluate("# fib\nlet f = 1 - x - x^2\ntruncate(f^-1, x^3)\n\n1 +\n", &Config::default());
        assert!(!ok);
        assert_eq!(out, "1 + x + 2x^2 + 3x^3\nerror: 5:4: unexpected end of input (expected number, identifier, string, `(`, `[`, `-`)\n");
    }

    #[test]
    fn json_records_are_versioned() {
        let cfg = Config { format: Format::Json, ..Config::default() };
        let (out, ok) = evaluate("pair(e0, e0)\n", &cfg);
        assert!(ok);
        let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
        assert_eq!(v["schema"], crate::SCHEMA);
        assert_eq!(v["text"], "1");
        assert_eq!(v["type"], "scalar");
    }
}
