//! Seeded invariant suites. Each case checks a library result against an
//! independent dense computation or a definitional brute force.

use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use sigma_core::{Error, Result};

mod basis;
mod bornology;
mod derivation;
mod duality;
mod hahn;
mod language;
pub mod oracle;
mod summability;
mod tensor;

pub type Rng = ChaCha8Rng;

pub const SUITES: &[&str] = &[
    "bornology-galois",
    "duality",
    "functional-roundtrip",
    "hahn-ring",
    "neumann",
    "summability",
    "basis",
    "idempotence",
    "tensor-hom",
    "derivation",
    "parser",
    "golden",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Case {
    pub name: String,
    pub pass: bool,
    /// Counterexample dump for failures, empty otherwise.
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub window: usize,
    pub cases: Vec<Case>,
}

impl Report {
    pub fn passed(&self) -> bool {
        !self.cases.is_empty() && self.cases.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Case> {
        self.cases.iter().filter(|c| !c.pass)
    }

    pub fn to_text(&self) -> String {
        let ok = self.cases.iter().filter(|c| c.pass).count();
        let mut s = format!(
            "suite {} seed {} window {}: {} ({}/{})\n",
            self.suite,
            self.seed,
            self.window,
            if self.passed() { "PASS" } else { "FAIL" },
            ok,
            self.cases.len()
        );
        for c in self.failures() {
            let _ = writeln!(s, "  FAIL {}: {}", c.name, c.detail);
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "schema": crate::SCHEMA,
            "type": "report",
            "suite": self.suite,
            "seed": self.seed,
            "window": self.window,
            "verdict": if self.passed() { "PASS" } else { "FAIL" },
            "passed": self.cases.iter().filter(|c| c.pass).count(),
            "total": self.cases.len(),
            "failures": self.failures().map(|c| json!({"case": c.name, "witness": c.detail})).collect::<Vec<_>>(),
        })
    }
}

/// Collects cases. A case that errors counts as a failure with the error
/// as its witness.
pub struct Cases {
    pub rng: Rng,
    pub window: usize,
    pub seed: u64,
    out: Vec<Case>,
}

impl Cases {
    pub fn check(&mut self, name: impl Into<String>, r: Result<Option<String>>) {
        let (pass, detail) = match r {
            Ok(None) => (true, String::new()),
            Ok(Some(w)) => (false, w),
            Err(e) => (false, format!("error: {e}")),
        };
        self.out.push(Case { name: name.into(), pass, detail });
    }

    /// `Ok(None)` when `a == b`, otherwise a dump of both sides.
    pub fn expect_eq<T: PartialEq + std::fmt::Debug>(a: T, b: T) -> Option<String> {
        (a != b).then(|| format!("got {a:?}, expected {b:?}"))
    }
}

pub fn run_suite(name: &str, seed: u64, window: usize) -> Result<Report> {
    let mut c = Cases { rng: Rng::seed_from_u64(seed), window, seed, out: Vec::new() };
    match name {
        "bornology-galois" => bornology::galois(&mut c)?,
        "duality" => duality::duality(&mut c)?,
        "functional-roundtrip" => duality::roundtrip(&mut c)?,
        "hahn-ring" => hahn::ring(&mut c)?,
        "neumann" => hahn::neumann(&mut c)?,
        "summability" => summability::axioms(&mut c)?,
        "basis" => basis::construction(&mut c)?,
        "idempotence" => basis::idempotence(&mut c)?,
        "tensor-hom" => tensor::tensor_hom(&mut c)?,
        "derivation" => derivation::derivation(&mut c)?,
        "parser" => language::parser(&mut c)?,
        "golden" => language::golden(&mut c)?,
        _ => return Err(Error::Parse(format!("unknown suite `{name}` (known: {})", SUITES.join(", ")))),
    }
    Ok(Report { suite: name.to_string(), seed, window, cases: c.out })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_an_error() {
        assert!(run_suite("nonexistent", 0, 16).is_err());
    }

    #[test]
    fn report_text_lists_failures() {
        let r = Report {
            suite: "x".into(),
            seed: 1,
            window: 4,
            cases: vec![
                Case { name: "a".into(), pass: true, detail: String::new() },
                Case { name: "b".into(), pass: false, detail: "w".into() },
            ],
        };
        assert_eq!(r.to_text(), "suite x seed 1 window 4: FAIL (1/2)\n  FAIL b: w\n");
        assert_eq!(r.to_json()["failures"][0]["witness"], "w");
    }
}
