use std::io::Write;
use std::process::{Command, Output, Stdio};

use iitk::dist::JointDist;

fn iitk(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_iitk"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn family_output_feeds_eval() {
    let built = iitk(&["family", "build", "zy-b", "--eps", "0"], "");
    assert_eq!(built.status.code(), Some(0));
    let text = stdout(&built);
    assert_eq!(JointDist::parse(&text).unwrap().to_text(), text);
    let eval = iitk(&["eval", "I(C:D)", "-"], &text);
    assert_eq!(eval.status.code(), Some(0));
    assert_eq!(stdout(&eval), "1.000000000000\n");
}

#[test]
fn check_reports_certificates_and_witnesses() {
    let ok = iitk(&["check", "I(A:B|C) >= 0"], "");
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(stdout(&ok).lines().next(), Some("SHANNON-DERIVABLE"));

    let cond = iitk(&["check", "H(A) = 0 => H(A,B) <= H(B)"], "");
    assert_eq!(cond.status.code(), Some(0));
    assert!(stdout(&cond).contains("mu[0] = "));

    let no = iitk(
        &["check", "I(A:B)=0, I(A:B|C)=0 => I(C:D) <= I(C:D|A)+I(C:D|B)"],
        "",
    );
    assert_eq!(no.status.code(), Some(1));
    let out = stdout(&no);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("NOT-SHANNON-DERIVABLE"));
    assert_eq!(lines.next(), Some("witness:"));
    assert_eq!(lines.count(), 15);
    for line in out.lines().skip(2) {
        let (lhs, rhs) = line.split_once(" = ").unwrap();
        assert!(lhs.starts_with("h(") && lhs.ends_with(')'));
        rhs.parse::<i64>().unwrap();
    }
}

#[test]
fn refute_exit_codes() {
    let found = iitk(&["refute", "zy-a", "--kappa", "100"], "");
    assert_eq!(found.status.code(), Some(1));
    assert!(stdout(&found).starts_with("VIOLATION zy-a"));

    let none = iitk(&["refute", "zy-c", "--kappa", "1000", "--points", "8"], "");
    assert_eq!(none.status.code(), Some(0));
    assert!(stdout(&none).starts_with("NO VIOLATION"));

    let deep = iitk(&["refute", "zy-c", "--kappa", "1000", "--eps-min", "2^-2100"], "");
    assert_eq!(deep.status.code(), Some(1));
}

#[test]
fn scan_emits_csv() {
    let o = iitk(&["scan", "zy-c", "--kappa", "1", "--points", "5"], "");
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let mut reader = csv::Reader::from_reader(out.as_bytes());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, ["eps", "lhs", "rhs", "gap", "I(A:B|C)", "I(B:D|C)"]);
    let rows: Vec<_> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 5);
    for row in &rows {
        for field in row.iter() {
            let mantissa = field.split('e').next().unwrap().trim_start_matches('-');
            assert_eq!(mantissa.replace('.', "").len(), 12, "{field}");
        }
    }
}

#[test]
fn adhesion_round_trips() {
    let input = "vars A B C\n0 0 0 1/2\n1 1 0 1/4\n1 0 1 1/4\n";
    let o = iitk(
        &[
            "transform",
            "adhesion",
            "-",
            "--left",
            "A",
            "--right",
            "B",
            "--over",
            "C",
        ],
        input,
    );
    assert_eq!(o.status.code(), Some(0));
    let d = JointDist::parse(&stdout(&o)).unwrap();
    assert_eq!(d.to_text(), stdout(&o));
    assert_eq!(d.support_size(), 5);
}

#[test]
fn input_errors_exit_two_with_one_line() {
    for (args, stdin) in [
        (vec!["eval", "H(A)", "-"], "vars A\n0 1/2\n"),
        (vec!["eval", "H(Z)", "-"], "vars A\n0 1\n"),
        (vec!["family", "build", "zy-c", "--eps", "1/2"], ""),
        (vec!["scan", "zy-a", "--kappa", "1"], ""),
        (vec!["check", "H(A,) >= 0"], ""),
        (vec!["refute", "zy-a", "--kappa", "-1"], ""),
    ] {
        let o = iitk(&args, stdin);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err = stderr(&o);
        assert_eq!(err.lines().count(), 1, "{args:?}: {err}");
        assert!(err.starts_with("iitk: error: "), "{err}");
        assert!(!err.contains("panicked"));
    }
}

#[test]
fn tolerance_override() {
    let bits = "vars A B\n0 0 1/2\n1 1 1/2\n";
    let stmt = "I(A:B) = 0 => H(A) <= 0";
    let strict = iitk(&["eval", stmt, "-"], bits);
    assert_eq!(strict.status.code(), Some(0));
    assert!(stdout(&strict).contains("fails"));
    let mut loose = Command::new(env!("CARGO_BIN_EXE_iitk"))
        .args(["eval", stmt, "/dev/stdin"])
        .env("IITK_TOL", "2")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    loose.stdin.take().unwrap().write_all(bits.as_bytes()).unwrap();
    let out = loose.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("holds"));
}
