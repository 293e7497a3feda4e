//! The eleven acceptance criteria, each with its window, case count and
//! time limit. Prints one PASS/FAIL line per criterion.

use std::time::{Duration, Instant};

use sigma_cli::suites::run_suite;

const SEED: u64 = 0;

struct Criterion {
    n: usize,
    title: &'static str,
    /// `(suite, window, number of cases)`.
    suites: &'static [(&'static str, usize, usize)],
    limit: Duration,
}

const fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

const CRITERIA: &[Criterion] = &[
    Criterion { n: 1, title: "bornology Galois suite on Z", suites: &[("bornology-galois", 16, 1196)], limit: secs(1) },
    Criterion { n: 2, title: "duality, 200 maps", suites: &[("duality", 16, 200)], limit: secs(5) },
    Criterion { n: 3, title: "functional round trip, 100 duals", suites: &[("functional-roundtrip", 16, 100)], limit: secs(1) },
    Criterion { n: 4, title: "Hahn ring, 300 + 100 valuations", suites: &[("hahn-ring", 16, 400)], limit: secs(5) },
    Criterion { n: 5, title: "Neumann, 50 + 50 inverses + Fibonacci", suites: &[("neumann", 24, 101)], limit: secs(10) },
    Criterion { n: 6, title: "summation axioms, 100 seeds", suites: &[("summability", 16, 100)], limit: secs(10) },
    Criterion { n: 7, title: "dual basis construction, 20 families", suites: &[("basis", 16, 20)], limit: secs(5) },
    Criterion { n: 8, title: "idempotence on the pattern battery", suites: &[("idempotence", 16, 15)], limit: secs(10) },
    Criterion { n: 9, title: "tensor and hom bornologies, interchange", suites: &[("tensor-hom", 12, 830)], limit: secs(10) },
    Criterion { n: 10, title: "Euler derivation, Leibniz and strong linearity", suites: &[("derivation", 16, 130)], limit: secs(5) },
    Criterion { n: 11, title: "parser round trip and golden runs", suites: &[("parser", 16, 200), ("golden", 16, 20)], limit: secs(5) },
];

/// Runs one criterion; `Err` carries the reason for a FAIL.
fn run(c: &Criterion) -> (Duration, Result<(), String>) {
    let start = Instant::now();
    let mut problems = Vec::new();
    for &(suite, window, cases) in c.suites {
        match run_suite(suite, SEED, window) {
            Ok(report) => {
                if report.cases.len() != cases {
                    problems.push(format!("{suite}: {} cases, expected {cases}", report.cases.len()));
                }
                for f in report.failures().take(3) {
                    problems.push(format!("{suite}: {}: {}", f.name, f.detail));
                }
            }
            Err(e) => problems.push(format!("{suite}: {e}")),
        }
    }
    let took = start.elapsed();
    if took > c.limit {
        problems.push(format!("took {took:?}, limit {:?}", c.limit));
    }
    (took, if problems.is_empty() { Ok(()) } else { Err(problems.join("; ")) })
}

#[test]
fn acceptance() {
    let mut failed = Vec::new();
    for c in CRITERIA {
        let (took, r) = run(c);
        match r {
            Ok(()) => println!("PASS criterion {:>2}: {} ({:.3} s)", c.n, c.title, took.as_secs_f64()),
            Err(why) => {
                println!("FAIL criterion {:>2}: {} ({:.3} s): {why}", c.n, c.title, took.as_secs_f64());
                failed.push(c.n);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
fn criteria_are_numbered_in_order() {
    let ns: Vec<usize> = CRITERIA.iter().map(|c| c.n).collect();
    assert_eq!(ns, (1..=11).collect::<Vec<_>>());
}
