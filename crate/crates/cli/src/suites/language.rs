//! Printer/parser round trips on a fixed corpus plus seeded random trees,
//! and end-to-end evaluations against frozen output.

use rand::Rng as _;
use sigma_core::{Error, Result};

use crate::ast::{Exponent, Expr, Kind, Op, Span};
use crate::config::Config;
use crate::parser::parse;
use crate::session::evaluate;

use super::{Cases, Rng};

const CORPUS: &[&str] = &[
    "1",
    "007",
    "x",
    "-x",
    "--x",
    "1 + 2 * 3",
    "(1 + 2) * 3",
    "a - (b - c)",
    "(a - b) - c",
    "a / b / c",
    "a / (b * c)",
    "2x^2",
    "x^(2/4)",
    "x^(-3/6)",
    "(1 - x)^-1",
    "(1 - x - x^2)^-1",
    "-x^2",
    "(-x)^2",
    "(x^2)^3",
    "a ⊗ b + c",
    "(a ⊗ b) * c",
    "a ⊗ (b ⊗ c)",
    "e0 ⊗ e1 ⊗ e2",
    "sum(grid(x; x), n -> 1)",
    "sum(grid(x^(1/2); x^(1/3), x^(1/2)), n -> n * n)",
    "pair(e0 - 2*e3, ones)",
    "truncate(f^-1, x^3)",
    "coeff((1 - x)^-2, x^7)",
    "derive(euler, (1 - x)^-1)",
    "bounded(perp(wo_omega(\"Z\")), \"prog(0; -1)\")",
    "hom(finite(\"N\"), all(\"N\"))",
    "basis([e0 + e1, e1 - e2], 4)",
    "sigmaspan([pattern(e0 + e1, \"prog(0; 2)\")], ones)",
    "[]",
    "[1, [2, 3], []]",
    "f()",
    "\"a \\\"quoted\\\" \\\\ string\"",
    "n -> m -> n * m",
    "(n -> n) + 1",
    "x · y",
    "1 − x",
    "a * -b",
    "a - -b",
    "# comment\n1 +\n  2",
];

const IDENTS: &[&str] = &["x", "y", "e0", "e12", "ones", "f", "_g", "x1", "δ", "lets"];
const FUNCS: &[&str] = &["sum", "grid", "pair", "truncate", "f", "g2"];
const OPS: [Op; 5] = [Op::Add, Op::Sub, Op::Mul, Op::Div, Op::Tensor];

fn node(kind: Kind) -> Expr {
    Expr::new(kind, Span::default())
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn random_expr(rng: &mut Rng, depth: u32) -> Expr {
    let leaf = depth == 0 || rng.gen_bool(0.25);
    if leaf {
        return node(match rng.gen_range(0..3) {
            0 => Kind::Num(rng.gen_range(0..1000u32).to_string()),
            1 => Kind::Ident(IDENTS[rng.gen_range(0..IDENTS.len())].into()),
            _ => {
                let pool = ["", "prog(0; 1)", "a\"b", "back\\slash", "[0, inf)"];
                Kind::Str(pool[rng.gen_range(0..pool.len())].into())
            }
        });
    }
    let d = depth - 1;
    node(match rng.gen_range(0..7) {
        0 | 1 => Kind::Bin(OPS[rng.gen_range(0..OPS.len())], Box::new(random_expr(rng, d)), Box::new(random_expr(rng, d))),
        2 => Kind::Neg(Box::new(random_expr(rng, d))),
        3 => {
            let (num, den) = (rng.gen_range(-7..=7i64), rng.gen_range(1..=4i64));
            let g = gcd(num, den).max(1);
            Kind::Pow(Box::new(random_expr(rng, d)), Exponent { num: num / g, den: den / g })
        }
        4 => {
            let groups = (0..rng.gen_range(0..=2))
                .map(|_| (0..rng.gen_range(1..=3)).map(|_| random_expr(rng, d)).collect())
                .collect();
            Kind::Call(FUNCS[rng.gen_range(0..FUNCS.len())].into(), groups)
        }
        5 => Kind::List((0..rng.gen_range(0..=3)).map(|_| random_expr(rng, d)).collect()),
        _ => Kind::Lambda(IDENTS[rng.gen_range(0..IDENTS.len())].into(), Box::new(random_expr(rng, d))),
    })
}

/// `print ∘ parse` fixes printed text, and `parse ∘ print` fixes trees.
fn round_trip(printed: &str, tree: Option<&Expr>) -> Option<String> {
    let reparsed = match parse(printed) {
        Ok(e) => e,
        Err(d) => return Some(format!("printed form does not parse: {d}")),
    };
    if let Some(t) = tree {
        if &reparsed != t {
            return Some(format!("tree changed: {reparsed:?}"));
        }
    }
    let again = reparsed.to_string();
    (again != printed).then(|| format!("printed again as `{again}`"))
}

pub fn parser(c: &mut Cases) -> Result<()> {
    for src in CORPUS {
        let r = parse(src)
            .map_err(|d| Error::Parse(format!("{src}: {d}")))
            .map(|e| round_trip(&e.to_string(), Some(&e)));
        c.check(format!("corpus `{}`", src.replace('\n', "⏎")), r);
    }
    for i in CORPUS.len()..200 {
        let e = random_expr(&mut c.rng, 4);
        let printed = e.to_string();
        c.check(format!("random #{i} `{printed}`"), Ok(round_trip(&printed, Some(&e))));
    }
    Ok(())
}

/// Blocks separated by `===`; `> ` lines are the program, the rest is
/// the expected output.
fn golden_cases() -> Vec<(String, String)> {
    include_str!("golden.txt")
        .split("\n===\n")
        .map(|block| {
            let (mut src, mut out) = (String::new(), String::new());
            for line in block.lines() {
                match line.strip_prefix("> ") {
                    Some(s) => {
                        src.push_str(s);
                        src.push('\n');
                    }
                    None => {
                        out.push_str(line);
                        out.push('\n');
                    }
                }
            }
            (src, out)
        })
        .collect()
}

pub fn golden(c: &mut Cases) -> Result<()> {
    let cfg = Config { window: 8, ..Config::default() };
    for (i, (src, want)) in golden_cases().into_iter().enumerate() {
        let (first, _) = evaluate(&src, &cfg);
        let (second, _) = evaluate(&src, &cfg);
        let r = if first != second {
            Some(format!("runs differ: {first:?} then {second:?}"))
        } else if first != want {
            Some(format!("got {first:?}, frozen {want:?}"))
        } else {
            None
        };
        c.check(format!("golden #{i} {:?}", src.trim_end()), Ok(r));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twenty_golden_programs() {
        assert_eq!(golden_cases().len(), 20);
    }

    #[test]
    fn corpus_fits_the_budget() {
        assert!(CORPUS.len() < 200);
    }
}
