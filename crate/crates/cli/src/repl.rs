//! Interactive loop. Each input line is one statement; bindings persist.

use std::io::{BufRead, IsTerminal, Write};

use crate::config::Config;
use crate::session::Session;

/// Reads statements from `input` until end of file. Prompts only when
/// `prompt` is set. Returns whether every line succeeded.
pub fn run<R: BufRead, W: Write>(cfg: &Config, input: R, mut out: W, prompt: bool) -> std::io::Result<bool> {
    let mut session = match Session::new(cfg) {
        Ok(s) => s,
        Err(e) => {
            writeln!(out, "error: {e}")?;
            return Ok(false);
        }
    };
    let mut ok = true;
    let mut lines = input.lines();
    loop {
        if prompt {
            write!(out, "σ> ")?;
            out.flush()?;
        }
        let Some(line) = lines.next() else { break };
        let line = line?;
        if matches!(line.trim(), ":q" | ":quit") {
            break;
        }
        // diagnostics always refer to line 1 of the current input
        let o = session.line(&line, 1);
        ok &= !o.is_error();
        if let Some(t) = o.text() {
            writeln!(out, "{t}")?;
        }
    }
    if prompt {
        writeln!(out)?;
    }
    Ok(ok)
}

/// Runs on the process's stdin and stdout.
pub fn stdio(cfg: &Config) -> std::io::Result<bool> {
    let stdin = std::io::stdin();
    let tty = stdin.is_terminal();
    run(cfg, stdin.lock(), std::io::stdout().lock(), tty)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bindings_persist_without_prompt() {
        let mut out = Vec::new();
        let ok = run(&Config::default(), "let a = 1 + x\na * a\n".as_bytes(), &mut out, false).unwrap();
        assert!(ok);
        assert_eq!(String::from_utf8(out).unwrap(), "1 + 2x + x^2\n");
    }
}
