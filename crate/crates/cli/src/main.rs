//! `sunalg`: SU(N) structure constants, identity checks and color algebra.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use sunalg::numfmt::format_f64;
use sunalg::oracle::{self, Assignment, ORACLE_TOL};
use sunalg::rewrite::{simplify_logged, LogEntry};
use sunalg::verify::{self, IdentityReport};
use sunalg::{parse, Algebra, SimplifyOptions, TensorSet};

#[derive(Parser, Debug)]
#[command(name = "sunalg", version, about = "SU(N) generators, invariant tensors and color algebra")]
struct Cli {
    /// Rank N, or an inclusive range such as 2..5 for `verify`.
    #[arg(long, global = true, default_value = "3")]
    n: NSpec,
    /// Tolerance on normalized residuals.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Random index quadruples per sampled check.
    #[arg(long, global = true, default_value_t = verify::DEFAULT_BUDGET)]
    budget: usize,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Write the main output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit the f and d tensors as a sun-tensors v1 file.
    Tensors,
    /// Run the identity suite.
    Verify,
    /// Rewrite an expression to normal form.
    Simplify {
        expr: String,
        /// Cross-check the result numerically at these N (comma separated).
        #[arg(long, value_delimiter = ',')]
        check: Vec<usize>,
        /// Print every rule application.
        #[arg(long)]
        trace: bool,
        /// Also use identities that hold only for N = 3.
        #[arg(long)]
        n3: bool,
    },
    /// Evaluate an expression numerically.
    Eval {
        expr: String,
        /// Values of free indices, e.g. a=1 b=2 (1-based).
        assignments: Vec<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct NSpec {
    lo: usize,
    hi: usize,
}

impl FromStr for NSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("invalid N '{t}'"));
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
            None => (num(s)?, num(s)?),
        };
        if lo < 2 {
            return Err(format!("N must be at least 2, got {lo}"));
        }
        if hi < lo {
            return Err(format!("empty range {s}"));
        }
        Ok(NSpec { lo, hi })
    }
}

impl NSpec {
    fn single(self) -> Result<usize> {
        if self.lo != self.hi {
            bail!("this command takes a single N, got a range");
        }
        Ok(self.lo)
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => io::stdout().write_all(text.as_bytes()).context("writing to stdout"),
    }
}

fn cmd_tensors(cli: &Cli) -> Result<ExitCode> {
    let n = cli.n.single()?;
    let alg = Algebra::new(n)?;
    let set = TensorSet::new(alg.f, alg.d)?;
    let text = if cli.json {
        serde_json::to_string_pretty(&set.to_json())? + "\n"
    } else {
        set.to_text()
    };
    emit(&cli.out, &text)?;
    eprintln!("N={n}: {} f entries, {} d entries", set.f.nnz(), set.d.nnz());
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(cli: &Cli) -> Result<ExitCode> {
    let mut reports: Vec<IdentityReport> = Vec::new();
    for n in cli.n.lo..=cli.n.hi {
        reports.push(verify::run_suite(n, cli.tol, cli.budget, cli.seed)?);
    }
    let text = if cli.json {
        let docs: Vec<String> = reports.iter().map(IdentityReport::to_json).collect();
        if docs.len() == 1 {
            docs[0].clone() + "\n"
        } else {
            format!("[\n{}\n]\n", docs.join(",\n"))
        }
    } else {
        reports.iter().map(IdentityReport::to_text).collect()
    };
    emit(&cli.out, &text)?;
    let failed: usize = reports.iter().map(|r| r.count(verify::Status::Fail)).sum();
    if failed > 0 {
        eprintln!("{failed} identity check(s) failed");
        return Ok(ExitCode::FAILURE);
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_simplify(cli: &Cli, text: &str, check: &[usize], trace: bool, n3: bool) -> Result<ExitCode> {
    let input = parse(text).with_context(|| format!("parsing '{text}'"))?;
    let opts = SimplifyOptions {
        n3_rules: n3,
        record: trace,
        ..SimplifyOptions::default()
    };
    let result = simplify_logged(&input, &opts);
    let mut out = String::new();
    if trace {
        for entry in result.log.iter().filter(|e| matches!(e, LogEntry::Rule(_))) {
            out += &format!("{entry}\n");
        }
    }
    out += &format!("{}\n", result.expr);
    let mut agree = true;
    if !check.is_empty() {
        let v = oracle::global().equal_by_sampling(&input, &result.expr, check, 50, ORACLE_TOL, cli.seed)?;
        agree = v.equal;
        let ns: Vec<String> = check.iter().map(usize::to_string).collect();
        out += &format!(
            "oracle N={{{}}}: {} ({} samples, worst residual {:.3e})\n",
            ns.join(","),
            if v.equal { "agree" } else { "DISAGREE" },
            v.samples,
            v.worst_residual()
        );
        if let (false, Some(w)) = (v.equal, &v.worst) {
            eprintln!("counterexample at N={}: {:?}", w.n, w.assignment);
        }
    }
    emit(&cli.out, &out)?;
    Ok(if agree { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn cmd_eval(cli: &Cli, text: &str, assignments: &[String]) -> Result<ExitCode> {
    let n = cli.n.single()?;
    let e = parse(text).with_context(|| format!("parsing '{text}'"))?;
    let mut asg = Assignment::new();
    for a in assignments {
        let Some((k, v)) = a.split_once('=') else {
            bail!("assignment '{a}' is not of the form label=value");
        };
        let v: usize = v.trim().parse().with_context(|| format!("value in '{a}'"))?;
        asg.insert(k.trim().to_string(), v);
    }
    let z = oracle::eval(&e, n, &asg)?;
    let line = if cli.json {
        serde_json::json!({ "re": z.re, "im": z.im }).to_string()
    } else {
        format!("{} {}", format_f64(z.re), format_f64(z.im))
    };
    emit(&cli.out, &(line + "\n"))?;
    Ok(ExitCode::SUCCESS)
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Tensors => cmd_tensors(cli),
        Command::Verify => cmd_verify(cli),
        Command::Simplify { expr, check, trace, n3 } => cmd_simplify(cli, expr, check, *trace, *n3),
        Command::Eval { expr, assignments } => cmd_eval(cli, expr, assignments),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
