use std::io::Write;
use std::process::{Command, Output, Stdio};

fn sigma(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_sigma"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    let mut pipe = child.stdin.take().expect("stdin");
    if let Some(s) = stdin {
        pipe.write_all(s.as_bytes()).expect("write stdin");
    }
    drop(pipe);
    child.wait_with_output().expect("binary exits")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

#[test]
fn eval_expression() {
    let o = sigma(&["eval", "-e", "truncate((1 - x - x^2)^-1, x^7)"], None);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "1 + x + 2x^2 + 3x^3 + 5x^4 + 8x^5 + 13x^6 + 21x^7\n");
}

#[test]
fn eval_window_flag() {
    let o = sigma(&["--window", "4", "eval", "-e", "(1 - 2x)^-1"], None);
    assert_eq!(stdout(&o), "1 + 2x + 4x^2 + 8x^3 + O(>x^3)\n");
}

#[test]
fn eval_file_with_an_error_exits_nonzero() {
    let dir = std::env::temp_dir().join(format!("sigma-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("prog.sg");
    std::fs::write(&path, "let f = 1 - x\ncoeff(f^-1, x^9)\n1/0\n").unwrap();
    let o = sigma(&["eval", "-f", path.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "1\nerror: 3:2: not invertible: division by zero\n");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn json_output() {
    let o = sigma(&["--format", "json", "eval", "-e", "coeff((1 - x - x^2)^-1, x^10)"], None);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["schema"], "sigma/1");
    assert_eq!(v["text"], "89");
}

#[test]
fn check_suite_reports() {
    let o = sigma(&["check", "--suite", "hahn-ring", "--seed", "3"], None);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().next(), Some("suite hahn-ring seed 3 window 16: PASS (400/400)"));
    let o = sigma(&["--format", "json", "check", "--suite", "golden"], None);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["verdict"], "PASS");
    assert_eq!(v["total"], 20);
}

#[test]
fn unknown_suite_is_an_error() {
    let o = sigma(&["check", "--suite", "nonsense"], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown suite"));
}

#[test]
fn repl_reads_piped_input() {
    let o = sigma(&["repl"], Some("let g = (1 - x)^-2\ncoeff(g, x^5)\n:q\n"));
    assert!(o.status.success());
    assert_eq!(stdout(&o), "6\n");
}

#[test]
fn runs_are_byte_identical() {
    let args = ["--window", "6", "eval", "-e", "sum(grid(x^(1/3); x^(1/2), x^(1/3)), n -> n)"];
    let (a, b) = (sigma(&args, None), sigma(&args, None));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}
