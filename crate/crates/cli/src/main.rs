use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sigma_cli::config::{Config, Format};
use sigma_cli::{repl, session, suites};

#[derive(Parser)]
#[command(name = "sigma", version, about = "Exact series spaces, summable families and strongly linear maps")]
struct Cli {
    /// Coefficient field: `rational` or `fp:<p>`.
    #[arg(long, global = true)]
    field: Option<String>,
    /// Number of terms shown for lazy results and checked by suites.
    #[arg(long, global = true)]
    window: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// `text` or `json`.
    #[arg(long, global = true)]
    format: Option<String>,
    /// A `key = value` file declaring universes, bornologies and derivations.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluates an expression or a file of statements, one per line.
    Eval {
        #[arg(short = 'e', long = "expr", conflicts_with = "file", required_unless_present = "file")]
        expr: Option<String>,
        #[arg(short = 'f', long = "file")]
        file: Option<PathBuf>,
    },
    /// Runs a seeded invariant suite.
    Check {
        #[arg(long)]
        suite: String,
    },
    /// Reads statements from standard input.
    Repl,
}

fn config(cli: &Cli) -> Result<Config, String> {
    let mut cfg = Config::default();
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        cfg = cfg.load(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    let flags = [
        ("field", cli.field.clone()),
        ("window", cli.window.map(|w| w.to_string())),
        ("seed", cli.seed.map(|s| s.to_string())),
        ("format", cli.format.clone()),
    ];
    for (k, v) in flags {
        if let Some(v) = v {
            cfg.set(k, &v).map_err(|e| format!("--{k}: {e}"))?;
        }
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<bool, String> {
    let cfg = config(&cli)?;
    match cli.command {
        Command::Eval { expr, file } => {
            let src = match (expr, file) {
                (Some(e), _) => e,
                (None, Some(p)) => std::fs::read_to_string(&p).map_err(|e| format!("{}: {e}", p.display()))?,
                (None, None) => unreachable!("clap requires one of -e and -f"),
            };
            let (out, ok) = session::evaluate(&src, &cfg);
            print!("{out}");
            Ok(ok)
        }
        Command::Check { suite } => {
            // suites pick their own default window when none is given
            let window = cli.window.unwrap_or(16);
            let report = suites::run_suite(&suite, cfg.seed, window).map_err(|e| e.to_string())?;
            match cfg.format {
                Format::Text => print!("{}", report.to_text()),
                Format::Json => println!("{}", report.to_json()),
            }
            Ok(report.passed())
        }
        Command::Repl => repl::stdio(&cfg).map_err(|e| e.to_string()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
