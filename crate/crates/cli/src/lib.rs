//! Expression language, evaluator and check suites over `sigma-core`.

pub mod ast;
pub mod config;
pub mod diag;
pub mod eval;
pub mod lexer;
pub mod parser;
pub mod repl;
pub mod session;
pub mod suites;
pub mod types;

/// Version tag of every JSON record.
pub const SCHEMA: &str = "sigma/1";
