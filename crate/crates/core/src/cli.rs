//! Command-line front end.
//!
//! Exit codes are shared by every command: 0 when the statement holds, is
//! derivable, or no violation was found; 1 for a refutation, witness or
//! violation; 2 for any input error, reported as a single line on stderr.

use std::ffi::OsString;
use std::io::{Read, Write};

use clap::{Parser, Subcommand};
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::cone::{decide, elementals, Derivability};
use crate::dist::JointDist;
use crate::expr::{canonicalize_affine, parse_expr, parse_stmt};
use crate::families::{build_family, gap_minima, refute, scan, FamilyId, GapReport, Refutation};
use crate::number::{self, format_fraction, format_real, parse_rational};
use crate::precise::WideReal;
use crate::profile::{entropy_profile, eval_form, subset_count, subset_label};
use crate::transform::{adhesion, check_hypotheses, kl_report, SplitSpec, DEFAULT_TOLERANCE};

/// Environment variable overriding the hypothesis tolerance.
pub const TOLERANCE_ENV: &str = "IITK_TOL";

#[derive(Debug, Parser)]
#[command(
    name = "iitk",
    version,
    about = "Entropy profiles, Shannon-cone checks and conditional-inequality counterexamples"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the entropy of every nonempty subset of variables, in bits
    Profile {
        /// Distribution file, or - for standard input
        file: String,
    },
    /// Evaluate an expression, or check a statement, on a distribution
    Eval {
        /// Expression such as "I(A:B|C)" or statement such as "I(A:B) = 0 => H(A) <= H(A|B)"
        text: String,
        /// Distribution file, or - for standard input
        file: String,
    },
    /// Decide whether a (conditional) inequality is Shannon-type
    Check {
        /// Statement such as "I(A:B)=0, I(A:B|C)=0 => I(C:D) <= I(C:D|A)+I(C:D|B)"
        statement: String,
    },
    /// Transform a distribution
    #[command(subcommand)]
    Transform(TransformCommand),
    /// Build a member of a parametric family
    #[command(subcommand)]
    Family(FamilyCommand),
    /// Search for a member of a family violating its κ-extended inequality
    Refute {
        /// zy-a, zy-b or zy-c
        family: String,
        #[arg(long)]
        kappa: String,
        #[arg(long, default_value = "1e-9")]
        eps_min: String,
        #[arg(long, default_value_t = 60)]
        points: usize,
    },
    /// Evaluate a family's κ-extended inequality on a logarithmic grid (CSV)
    Scan {
        /// zy-a, zy-b or zy-c
        family: String,
        #[arg(long)]
        kappa: String,
        #[arg(long)]
        points: usize,
        #[arg(long, default_value = "1e-9")]
        eps_min: String,
    },
}

#[derive(Debug, Subcommand)]
enum TransformCommand {
    /// Make LEFT and RIGHT independent given OVER, keeping both marginals
    Adhesion {
        /// Distribution file, or - for standard input
        file: String,
        /// Comma-separated variables
        #[arg(long, value_delimiter = ',')]
        left: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        right: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "")]
        over: Vec<String>,
    },
    /// Compare the KL divergence of the adhesion from the hat transform
    /// with I(C:D|A) + I(C:D|B) + I(A:B) - I(C:D) (4 variables)
    Kl {
        /// Distribution file, or - for standard input
        file: String,
    },
}

#[derive(Debug, Subcommand)]
enum FamilyCommand {
    /// Print the family member as a distribution file
    Build {
        /// zy-a, zy-b or zy-c
        family: String,
        #[arg(long)]
        eps: String,
    },
}

type Outcome = Result<i32, String>;

struct Io<'a> {
    stdin: &'a mut dyn Read,
    out: &'a mut dyn Write,
}

impl Io<'_> {
    fn read(&mut self, path: &str) -> Result<String, String> {
        if path == "-" {
            let mut text = String::new();
            self.stdin
                .read_to_string(&mut text)
                .map_err(|e| format!("cannot read standard input: {e}"))?;
            Ok(text)
        } else {
            std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))
        }
    }

    fn dist(&mut self, path: &str) -> Result<JointDist, String> {
        let text = self.read(path)?;
        JointDist::parse(&text).map_err(|e| format!("{path}: {e}"))
    }

    fn emit(&mut self, text: &str) -> Result<(), String> {
        self.out
            .write_all(text.as_bytes())
            .map_err(|e| format!("cannot write output: {e}"))
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = write!(out, "{e}");
            return 0;
        }
        Err(e) => {
            let rendered = e.to_string();
            let line = rendered.lines().next().unwrap_or("invalid arguments");
            let _ = writeln!(err, "iitk: error: {}", line.trim_start_matches("error: ").trim());
            return 2;
        }
    };
    let mut io = Io { stdin, out };
    match dispatch(cli.command, &mut io) {
        Ok(code) => code,
        Err(message) => {
            let first = message.lines().next().unwrap_or_default();
            let _ = writeln!(err, "iitk: error: {first}");
            2
        }
    }
}

fn tolerance() -> Result<f64, String> {
    match std::env::var(TOLERANCE_ENV) {
        Err(_) => Ok(DEFAULT_TOLERANCE),
        Ok(text) => match text.trim().parse::<f64>() {
            Ok(t) if t >= 0.0 && t.is_finite() => Ok(t),
            _ => Err(format!("{TOLERANCE_ENV}: `{text}` is not a nonnegative number")),
        },
    }
}

fn dispatch(command: Command, io: &mut Io<'_>) -> Outcome {
    match command {
        Command::Profile { file } => profile(io, &file),
        Command::Eval { text, file } => eval(io, &text, &file),
        Command::Check { statement } => check(io, &statement),
        Command::Transform(TransformCommand::Adhesion {
            file,
            left,
            right,
            over,
        }) => {
            let d = io.dist(&file)?;
            let over: Vec<String> = over.into_iter().filter(|v| !v.is_empty()).collect();
            let t = adhesion(&d, &SplitSpec::new(left, right, over)).map_err(|e| e.to_string())?;
            io.emit(&t.to_text())?;
            Ok(0)
        }
        Command::Transform(TransformCommand::Kl { file }) => kl(io, &file),
        Command::Family(FamilyCommand::Build { family, eps }) => {
            let id = family_id(&family)?;
            let eps = rational("--eps", &eps)?;
            let d = build_family(id, eps).map_err(|e| e.to_string())?;
            io.emit(&d.to_text())?;
            Ok(0)
        }
        Command::Refute {
            family,
            kappa,
            eps_min,
            points,
        } => {
            let id = family_id(&family)?;
            let kappa = nonnegative("--kappa", &kappa)?;
            let eps_min = rational("--eps-min", &eps_min)?;
            refute_command(io, id, &kappa, &eps_min, points)
        }
        Command::Scan {
            family,
            kappa,
            points,
            eps_min,
        } => {
            let id = family_id(&family)?;
            let kappa = nonnegative("--kappa", &kappa)?;
            let eps_min = rational("--eps-min", &eps_min)?;
            scan_command(io, id, &kappa, &eps_min, points)
        }
    }
}

fn family_id(text: &str) -> Result<FamilyId, String> {
    text.parse()
        .map_err(|e: crate::families::FamilyError| e.to_string())
}

fn rational(flag: &str, text: &str) -> Result<BigRational, String> {
    parse_rational(text).map_err(|e| format!("{flag}: {e}"))
}

fn nonnegative(flag: &str, text: &str) -> Result<BigRational, String> {
    let v = rational(flag, text)?;
    if v.is_negative() {
        return Err(format!("{flag} must be nonnegative"));
    }
    Ok(v)
}

fn profile(io: &mut Io<'_>, file: &str) -> Outcome {
    let d = io.dist(file)?;
    let v = entropy_profile(&d);
    let mut text = String::new();
    for mask in 1..=subset_count(d.num_vars()) as u32 {
        text += &format!(
            "H({}) = {}\n",
            subset_label(mask, d.vars()),
            format_real(v.get(mask))
        );
    }
    io.emit(&text)?;
    Ok(0)
}

fn looks_like_statement(text: &str) -> bool {
    text.contains('<') || text.contains('>') || text.contains('=')
}

fn eval(io: &mut Io<'_>, text: &str, file: &str) -> Outcome {
    if !looks_like_statement(text) {
        let e = parse_expr(text).map_err(|e| e.to_string())?;
        let d = io.dist(file)?;
        let (form, constant) = canonicalize_affine(&e, d.vars()).map_err(|e| e.to_string())?;
        let value = eval_form(&entropy_profile(&d), &form).map_err(|e| e.to_string())?
            + number::rational_to_f64(&constant);
        io.emit(&format!("{}\n", format_real(value)))?;
        return Ok(0);
    }
    let stmt = parse_stmt(text).map_err(|e| e.to_string())?;
    let d = io.dist(file)?;
    let report = check_hypotheses(&d, &stmt, tolerance()?).map_err(|e| e.to_string())?;
    let mut out = String::new();
    for c in &report.constraints {
        let status = if c.holds { "holds" } else { "fails" };
        out += &format!("constraint {} = {} {status}\n", c.expr, format_real(c.value));
    }
    let status = if report.goal.holds { "holds" } else { "fails" };
    out += &format!(
        "goal {} >= 0: {} {status}\n",
        report.goal.expr,
        format_real(report.goal.value)
    );
    io.emit(&out)?;
    let violated = report.hypotheses_hold() && !report.goal.holds;
    Ok(i32::from(violated))
}

fn check(io: &mut Io<'_>, text: &str) -> Outcome {
    let stmt = parse_stmt(text).map_err(|e| e.to_string())?;
    let canon = stmt.canonical().map_err(|e| e.to_string())?;
    let result = decide(&canon.goal, &canon.constraints).map_err(|e| e.to_string())?;
    let names = &canon.vars;
    let mut out = String::new();
    let code = match result {
        Derivability::Derivable(cert) => {
            out += "SHANNON-DERIVABLE\n";
            let labels = elementals(names.len()).map_err(|e| e.to_string())?;
            for (e, l) in labels.iter().zip(&cert.lambda) {
                if !l.is_zero() {
                    out += &format!("lambda[{}] = {}\n", e.label(names), format_fraction(l));
                }
            }
            for (i, m) in cert.mu.iter().enumerate() {
                out += &format!("mu[{i}] = {}\n", format_fraction(m));
            }
            0
        }
        Derivability::NotDerivable(w) => {
            out += "NOT-SHANNON-DERIVABLE\nwitness:\n";
            for (k, h) in w.point.iter().enumerate() {
                out += &format!("h({}) = {h}\n", subset_label(k as u32 + 1, names));
            }
            1
        }
    };
    io.emit(&out)?;
    Ok(code)
}

fn kl(io: &mut Io<'_>, file: &str) -> Outcome {
    let d = io.dist(file)?;
    let r = kl_report(&d).map_err(|e| e.to_string())?;
    io.emit(&format!(
        "divergence = {}\nslack = {}\nhat_total = {}\nhat_subnormalized = {}\n",
        format_real(r.divergence),
        format_real(r.slack),
        format_fraction(&r.hat_total),
        r.hat_subnormalized
    ))?;
    Ok(0)
}

fn gap_lines(g: &GapReport) -> String {
    let mut s = format!(
        "eps = {}\nlhs = {}\nrhs = {}\ngap = {}\n",
        WideReal::from_rational(&g.eps),
        g.lhs,
        g.rhs,
        g.gap
    );
    for (name, v) in &g.residuals {
        s += &format!("{name} = {v}\n");
    }
    s
}

fn refute_command(
    io: &mut Io<'_>,
    id: FamilyId,
    kappa: &BigRational,
    eps_min: &BigRational,
    points: usize,
) -> Outcome {
    let result = refute(id, kappa, eps_min, points).map_err(|e| e.to_string())?;
    let header = format!("{id} kappa = {}", format_fraction(kappa));
    match result {
        Refutation::Violation { witness, threshold } => {
            let mut s = format!("VIOLATION {header}\n{}", gap_lines(&witness));
            if let Some(t) = threshold {
                s += &format!(
                    "largest violating eps found = {}\n",
                    WideReal::from_rational(&t.eps)
                );
                s += &format!("gap there = {}\n", t.gap);
            }
            io.emit(&s)?;
            Ok(1)
        }
        Refutation::NoViolation { grid } => {
            let mut s = format!(
                "NO VIOLATION {header} on {} points down to eps = {}\n",
                grid.len(),
                WideReal::from_rational(eps_min)
            );
            for m in gap_minima(&grid) {
                s += &format!(
                    "local minimum: eps = {} gap = {}\n",
                    WideReal::from_rational(&m.eps),
                    m.gap
                );
            }
            s += "hint: the violation may only appear below --eps-min\n";
            io.emit(&s)?;
            Ok(0)
        }
    }
}

fn scan_command(
    io: &mut Io<'_>,
    id: FamilyId,
    kappa: &BigRational,
    eps_min: &BigRational,
    points: usize,
) -> Outcome {
    let rows = scan(id, kappa, eps_min, points).map_err(|e| e.to_string())?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["eps".to_string(), "lhs".into(), "rhs".into(), "gap".into()];
    header.extend(id.extension().residual_names().into_iter().map(String::from));
    w.write_record(&header).map_err(|e| e.to_string())?;
    for g in &rows {
        let mut record = vec![
            WideReal::from_rational(&g.eps).to_scientific(),
            g.lhs.to_scientific(),
            g.rhs.to_scientific(),
            g.gap.to_scientific(),
        ];
        record.extend(g.residuals.iter().map(|(_, v)| v.to_scientific()));
        w.write_record(&record).map_err(|e| e.to_string())?;
    }
    let bytes = w.into_inner().map_err(|e| e.to_string())?;
    io.emit(&String::from_utf8(bytes).expect("csv output is UTF-8"))?;
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str], stdin: &str) -> (i32, String, String) {
        let mut input = stdin.as_bytes();
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let argv = std::iter::once("iitk").chain(args.iter().copied());
        let code = run(argv, &mut input, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn check_trivial() {
        let (code, out, _) = run_str(&["check", "I(A:B|C) >= 0"], "");
        assert_eq!(code, 0);
        assert_eq!(out, "SHANNON-DERIVABLE\nlambda[I(A:B|C)] = 1/1\n");
    }

    #[test]
    fn eval_from_stdin() {
        let (code, out, _) = run_str(&["eval", "I(A:B)", "-"], "vars A B\n0 0 1/2\n1 1 1/2\n");
        assert_eq!((code, out.as_str()), (0, "1.000000000000\n"));
    }

    #[test]
    fn errors_are_one_line() {
        for args in [
            vec!["check", "I(A:B) >="],
            vec!["eval", "H(A)", "/nonexistent"],
            vec!["refute", "zy-q", "--kappa", "1"],
            vec!["refute", "zy-a"],
            vec!["bogus"],
        ] {
            let (code, out, err) = run_str(&args, "");
            assert_eq!(code, 2, "{args:?}");
            assert!(out.is_empty());
            assert_eq!(err.lines().count(), 1, "{args:?}: {err}");
            assert!(err.starts_with("iitk: "), "{err}");
        }
    }

    #[test]
    fn help_goes_to_stdout() {
        let (code, out, _) = run_str(&["refute", "--help"], "");
        assert_eq!(code, 0);
        assert!(out.contains("--kappa"));
    }
}
