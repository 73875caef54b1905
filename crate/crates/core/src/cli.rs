//! `strprod` command line.
//!
//! Exit codes: 0 success or verified, 1 refuted, 2 usage or parse error.

use std::ffi::OsString;
use std::fmt::Write as _;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::engine::{
    collapse, decompose, enumerate_family, solve_rational_weights, verify_identity, FamilyQuery,
    Identity, Verdict,
};
use crate::exact::{ExactExponent, Rational};
use crate::model::{SequenceSpec, Signature, StringProduct};
use crate::oracle::{numeric_check, NumericReport, NumericVerdict, OracleConfig};
use crate::parser::{parse_identity, parse_product, render, render_identity, ParseError, RenderStyle};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Latex,
}

#[derive(Debug, Parser)]
#[command(name = "strprod", version, about = "Identities for products of geometric-sequence terms")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: OutputFormat,

    /// Suppress result output; only the exit code is meaningful.
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether an identity holds for every geometric sequence.
    Check {
        identity: String,
        /// Also run this many random numeric trials.
        #[arg(long)]
        trials: Option<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Canonical form and signature (T, S) of a product.
    Canon { product: String },
    /// All t-term products with a given subscript sum.
    Family {
        #[arg(long = "t")]
        t: u64,
        #[arg(long)]
        sum: u64,
        #[arg(long)]
        max_index: u64,
        #[arg(long)]
        repetition: bool,
    },
    /// Write a subscript sum as t1*b1 + ... + tn*bn with n distinct indices.
    Decompose {
        #[arg(long = "t")]
        t: u64,
        #[arg(long)]
        sum: u64,
        #[arg(long)]
        parts: u64,
        #[arg(long)]
        max_index: u64,
    },
    /// Collapse a product to a single power a_k^T, if possible.
    Collapse { product: String },
    /// Weights w1, w2 with a_i^w1 * a_j^w2 = a_k^t.
    Solve {
        /// Two indices `I,J`.
        #[arg(long, value_parser = parse_index_pair)]
        indices: (u64, u64),
        #[arg(long)]
        target: u64,
        #[arg(long, allow_hyphen_values = true)]
        total: Rational,
    },
    /// Evaluate a product on a concrete sequence.
    Eval {
        product: String,
        #[arg(long)]
        a1: f64,
        #[arg(long)]
        r: f64,
        /// Defaults to the largest index in the product.
        #[arg(long)]
        max_index: Option<u64>,
    },
}

fn parse_index_pair(s: &str) -> Result<(u64, u64), String> {
    let (i, j) = s.split_once(',').ok_or_else(|| "expected two indices `I,J`".to_string())?;
    let idx = |x: &str| x.trim().parse::<u64>().map_err(|e| format!("bad index `{x}`: {e}"));
    Ok((idx(i)?, idx(j)?))
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    kind: &'static str,
    message: String,
    detail: Option<String>,
    position: Option<usize>,
}

impl Failure {
    fn new(kind: &'static str, message: impl ToString) -> Self {
        Failure { kind, message: message.to_string(), detail: None, position: None }
    }

    fn parse(input: &str, err: ParseError) -> Self {
        let caret = format!("  {input}\n  {}^", " ".repeat(err.position));
        Failure {
            kind: "parse",
            message: err.to_string(),
            detail: Some(caret),
            position: Some(err.position),
        }
    }
}

/// Whether `--format json` appears anywhere in argv, so that even argument
/// errors can be reported as JSON.
fn wants_json(args: &[OsString]) -> bool {
    args.iter().enumerate().any(|(i, a)| {
        let a = a.to_string_lossy();
        a == "--format=json"
            || (a == "--format" && args.get(i + 1).is_some_and(|n| n.to_string_lossy() == "json"))
    })
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let json = wants_json(&args);
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome { code: EXIT_OK, stdout: e.to_string(), stderr: String::new() };
            }
            let failure = Failure::new("usage", e.render().to_string().trim_end());
            return report_failure(failure, json, false);
        }
    };
    let format = cli.format;
    match execute(&cli.command, format) {
        Ok((code, stdout)) => Outcome {
            code,
            stdout: if cli.quiet { String::new() } else { stdout },
            stderr: String::new(),
        },
        Err(failure) => report_failure(failure, format == OutputFormat::Json, cli.quiet),
    }
}

fn report_failure(f: Failure, json: bool, quiet: bool) -> Outcome {
    if json {
        let body = json!({
            "error": { "kind": f.kind, "message": f.message, "position": f.position }
        });
        Outcome {
            code: EXIT_USAGE,
            stdout: if quiet { String::new() } else { format!("{body}\n") },
            stderr: String::new(),
        }
    } else {
        let mut stderr = format!("error: {}\n", f.message);
        if let Some(d) = f.detail {
            stderr.push_str(&d);
            stderr.push('\n');
        }
        Outcome { code: EXIT_USAGE, stdout: String::new(), stderr }
    }
}

fn product_arg(input: &str) -> Result<StringProduct, Failure> {
    parse_product(input).map_err(|e| Failure::parse(input, e))
}

fn style(format: OutputFormat) -> RenderStyle {
    match format {
        OutputFormat::Latex => RenderStyle::Latex,
        _ => RenderStyle::Text,
    }
}

fn signature_json(sig: &Signature) -> Value {
    json!({ "T": sig.total.to_string(), "S": sig.weighted_sum.to_string() })
}

fn lines<I: IntoIterator<Item = String>>(items: I) -> String {
    items.into_iter().fold(String::new(), |mut acc, l| {
        acc.push_str(&l);
        acc.push('\n');
        acc
    })
}

fn execute(cmd: &Command, format: OutputFormat) -> Result<(i32, String), Failure> {
    match cmd {
        Command::Check { identity, trials, seed } => check(identity, *trials, *seed, format),
        Command::Canon { product } => {
            let p = product_arg(product)?;
            let sig = p.signature();
            Ok((EXIT_OK, match format {
                OutputFormat::Json => format!(
                    "{}\n",
                    json!({
                        "canonical": p.to_string(),
                        "latex": render(&p, RenderStyle::Latex),
                        "signature": signature_json(&sig),
                        "product": p,
                    })
                ),
                _ => format!("{}\n{}\n", render(&p, style(format)), sig),
            }))
        }
        Command::Family { t, sum, max_index, repetition } => {
            let q = FamilyQuery::new(*t, *sum, *max_index, *repetition)
                .map_err(|e| Failure::new("usage", e))?;
            let family = enumerate_family(&q);
            Ok((EXIT_OK, match format {
                OutputFormat::Json => format!("{}\n", json!(family)),
                OutputFormat::Text => lines(family.iter().map(|set| set.iter().join_plus())),
                OutputFormat::Latex => lines(family.iter().map(|set| {
                    let p = StringProduct::from_indices(set).expect("indices >= 1");
                    render(&p, RenderStyle::Latex)
                })),
            }))
        }
        Command::Decompose { t, sum, parts, max_index } => {
            if *t == 0 || *parts == 0 || *max_index == 0 {
                return Err(Failure::new("usage", "--t, --parts and --max-index must be at least 1"));
            }
            let found = decompose(*t, *sum, *parts, *max_index);
            Ok((EXIT_OK, match format {
                OutputFormat::Json => format!("{}\n", json!(found)),
                _ => lines(found.iter().map(|d| render(&d.to_product(), style(format)))),
            }))
        }
        Command::Collapse { product } => {
            let p = product_arg(product)?;
            let result = collapse(&p);
            Ok((EXIT_OK, match (format, result) {
                (OutputFormat::Json, None) => "null\n".to_string(),
                (OutputFormat::Json, Some((k, t))) => {
                    format!("{}\n", json!({ "index": k, "exponent": t.to_string() }))
                }
                (_, None) => "none\n".to_string(),
                (_, Some((k, t))) => {
                    let single = StringProduct::power_of(k, t).expect("k >= 1");
                    format!("{}\n", render(&single, style(format)))
                }
            }))
        }
        Command::Solve { indices: (i, j), target, total } => {
            let (w1, w2) = solve_rational_weights(*i, *j, *target, total)
                .map_err(|e| Failure::new("no_solution", e))?;
            let id = Identity::new(
                StringProduct::normalize([
                    (*i, ExactExponent::rational(w1.clone())),
                    (*j, ExactExponent::rational(w2.clone())),
                ])
                .expect("indices >= 1"),
                StringProduct::power_of(*target, ExactExponent::rational(total.clone()))
                    .expect("index >= 1"),
            );
            let verified = verify_identity(&id).is_verified();
            let text = solved_identity(*i, &w1, *j, &w2, *target, total, format);
            Ok((EXIT_OK, match format {
                OutputFormat::Json => format!(
                    "{}\n",
                    json!({
                        "w1": w1.to_string(),
                        "w2": w2.to_string(),
                        "identity": solved_identity(*i, &w1, *j, &w2, *target, total, OutputFormat::Text),
                        "verified": verified,
                    })
                ),
                _ => format!("{text}\n"),
            }))
        }
        Command::Eval { product, a1, r, max_index } => {
            let p = product_arg(product)?;
            let l = max_index.unwrap_or_else(|| p.max_index().unwrap_or(1));
            let seq = SequenceSpec::new(*a1, *r, l).map_err(|e| Failure::new("usage", e))?;
            let value = p.evaluate(&seq).map_err(|e| Failure::new("evaluation", e))?;
            Ok((EXIT_OK, match format {
                OutputFormat::Json => format!("{}\n", json!({ "value": value })),
                _ => format!("{value}\n"),
            }))
        }
    }
}

/// `a5^1 * a2^(1/2) = a4^(3/2)`: source order, every exponent shown.
fn solved_identity(
    i: u64,
    w1: &Rational,
    j: u64,
    w2: &Rational,
    k: u64,
    t: &Rational,
    format: OutputFormat,
) -> String {
    let term = |idx: u64, w: &Rational| match format {
        OutputFormat::Latex => format!("a_{{{idx}}}^{{{w}}}"),
        _ if w.is_integer() => format!("a{idx}^{w}"),
        _ => format!("a{idx}^({w})"),
    };
    let times = if format == OutputFormat::Latex { " \\cdot " } else { " * " };
    format!("{}{}{} = {}", term(i, w1), times, term(j, w2), term(k, t))
}

trait JoinPlus {
    fn join_plus(self) -> String;
}

impl<'a, I: Iterator<Item = &'a u64>> JoinPlus for I {
    fn join_plus(self) -> String {
        let mut s = String::new();
        for (n, v) in self.enumerate() {
            if n > 0 {
                s.push('+');
            }
            let _ = write!(s, "{v}");
        }
        s
    }
}

fn check(input: &str, trials: Option<u32>, seed: u64, format: OutputFormat) -> Result<(i32, String), Failure> {
    let id = parse_identity(input).map_err(|e| Failure::parse(input, e))?;
    let verdict = verify_identity(&id);
    let numeric: Option<NumericReport> = match trials {
        None => None,
        Some(n) => {
            let cfg = OracleConfig::new(n, seed).map_err(|e| Failure::new("usage", e))?;
            Some(numeric_check(&id, &cfg).map_err(|e| Failure::new("usage", e))?)
        }
    };
    let numeric_failed = numeric.as_ref().is_some_and(|r| r.verdict == NumericVerdict::Fail);
    let code = if verdict.is_verified() && !numeric_failed { EXIT_OK } else { EXIT_REFUTED };

    let (lhs, rhs) = (id.lhs.signature(), id.rhs.signature());
    if format == OutputFormat::Json {
        let body = json!({
            "verdict": if verdict.is_verified() { "verified" } else { "refuted" },
            "identity": id.to_string(),
            "lhs": signature_json(&lhs),
            "rhs": signature_json(&rhs),
            "numeric": numeric,
        });
        return Ok((code, format!("{body}\n")));
    }

    let mut out = String::new();
    if format == OutputFormat::Latex {
        let _ = writeln!(out, "{}", render_identity(&id, RenderStyle::Latex));
    }
    match &verdict {
        Verdict::VerifiedSymbolic => {
            let _ = writeln!(out, "verified: {lhs} on both sides");
        }
        Verdict::Refuted { lhs, rhs } => {
            let _ = writeln!(out, "refuted: lhs {lhs}; rhs {rhs}");
        }
    }
    if let Some(rep) = numeric {
        let verdict = match rep.verdict {
            NumericVerdict::Pass => "pass",
            NumericVerdict::Fail => "fail",
            NumericVerdict::Unstable => "unstable",
        };
        let _ = writeln!(
            out,
            "numeric: {verdict}, {} trials, max_rel_error={:e}, skipped={}",
            rep.trials, rep.max_rel_error, rep.skipped
        );
    }
    Ok((code, out))
}
