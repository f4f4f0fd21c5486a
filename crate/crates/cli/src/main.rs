use std::cmp::Ordering;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use bracket_core::calculus::CertificateFormatError;
use bracket_core::fundseq::{step_iter_with, Snapshot, Window};
use bracket_core::{
    check_derivation, f_witness, fs_veblen, g_witness, o_star, parse_formula, parse_ordinal,
    parse_worm, print_formula, prove_le, prove_lt, to_nf, CalculusError, Certificate, CheckResult,
    ParseError, Witness,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

/// Bracket worms, ordinals below Γ₀ and the Bracket Calculus.
#[derive(Parser, Debug)]
#[command(name = "brackets", version)]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Step budget for `step` and `growth`.
    #[arg(long, global = true, default_value_t = 10_000)]
    budget: u64,
    /// Worms kept at each end of a long trace.
    #[arg(long, global = true, default_value_t = 64)]
    window: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a worm or formula in canonical form.
    Fmt { text: String },
    /// Print the ordinal o*(a) of a worm.
    Ord { worm: String },
    /// Compare two worms by value: LT, EQ or GT.
    Cmp { a: String, b: String },
    /// Print the normal form of a worm.
    Nf { worm: String },
    /// Emit a certificate for a ⊢ ()b (lt) or a ⊴ b (le).
    Prove { mode: Mode, a: String, b: String },
    /// Check a certificate file, or stdin with `-`.
    Check { file: String },
    /// Run a⟦0⟧, a⟦1⟧, … until ⊤ or the budget.
    Step { worm: String },
    /// One step ξ[x] of the Veblen fundamental sequence.
    Fs { ordinal: String, x: u64 },
    /// Compute F(m) or G(m) within the budget.
    Growth { function: Growth, m: usize },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Mode {
    Lt,
    Le,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Growth {
    #[value(name = "F")]
    F,
    #[value(name = "G")]
    G,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{input}: {source}")]
    Parse { input: String, source: ParseError },
    #[error(transparent)]
    Certificate(#[from] CertificateFormatError),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error(transparent)]
    Calculus(#[from] CalculusError),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Calculus(_) => 1,
            _ => 2,
        }
    }
}

/// How a successful run ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Ok,
    False,
    Exhausted,
}

impl Status {
    fn code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::False => 1,
            Status::Exhausted => 3,
        }
    }
}

fn parse_with<T>(text: &str, f: fn(&str) -> Result<T, ParseError>) -> Result<T, CliError> {
    f(text).map_err(|source| CliError::Parse {
        input: text.to_string(),
        source,
    })
}

fn emit(json: bool, value: Value, text: String) -> String {
    if json {
        serde_json::to_string_pretty(&value).expect("values serialize")
    } else {
        text
    }
}

fn read_input(path: &str) -> Result<String, CliError> {
    let mut buf = String::new();
    let read = if path == "-" {
        io::stdin().read_to_string(&mut buf).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|s| buf = s)
    };
    read.map_err(|source| CliError::Io {
        path: path.to_string(),
        source,
    })?;
    Ok(buf)
}

fn render_window(w: &Window<Snapshot>) -> Vec<String> {
    let lines = |xs: &[Snapshot]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    match w.all() {
        Some(all) => lines(&all),
        None => {
            let mut out = lines(w.head());
            out.push("...".to_string());
            out.extend(lines(&w.tail()));
            out
        }
    }
}

fn run(cli: &Cli) -> Result<(String, Status), CliError> {
    let json = cli.json;
    let done = |out: String| Ok((out, Status::Ok));
    match &cli.command {
        Command::Fmt { text } => {
            let canonical = print_formula(&parse_with(text, parse_formula)?);
            done(emit(
                json,
                json!({ "input": text, "canonical": canonical }),
                canonical,
            ))
        }
        Command::Ord { worm } => {
            let x = o_star(&parse_with(worm, parse_worm)?).to_string();
            done(emit(json, json!({ "worm": worm, "ordinal": x }), x))
        }
        Command::Cmp { a, b } => {
            let (x, y) = (
                o_star(&parse_with(a, parse_worm)?),
                o_star(&parse_with(b, parse_worm)?),
            );
            let order = match x.cmp(&y) {
                Ordering::Less => "LT",
                Ordering::Equal => "EQ",
                Ordering::Greater => "GT",
            };
            let value = json!({ "a": a, "b": b, "order": order });
            done(emit(json, value, order.to_string()))
        }
        Command::Nf { worm } => {
            let nf = to_nf(&parse_with(worm, parse_worm)?).to_string();
            done(emit(json, json!({ "worm": worm, "nf": nf }), nf))
        }
        Command::Prove { mode, a, b } => {
            let (a, b) = (parse_with(a, parse_worm)?, parse_with(b, parse_worm)?);
            let cert = match mode {
                Mode::Lt => prove_lt(&a, &b)?,
                Mode::Le => prove_le(&a, &b)?,
            };
            done(cert.to_json())
        }
        Command::Check { file } => {
            let cert = Certificate::from_json(&read_input(file)?)?;
            Ok(match check_derivation(&cert) {
                CheckResult::Valid => (
                    emit(json, json!({ "valid": true }), "VALID".into()),
                    Status::Ok,
                ),
                CheckResult::Invalid { path, reason } => {
                    let value =
                        json!({ "valid": false, "path": path.to_string(), "reason": reason });
                    (
                        emit(json, value, format!("INVALID {path} {reason}")),
                        Status::False,
                    )
                }
            })
        }
        Command::Step { worm } => {
            let trace = step_iter_with(&parse_with(worm, parse_worm)?, cli.budget, cli.window);
            let mut lines = render_window(&trace.steps);
            lines.push(if trace.terminated {
                format!("terminated after {} steps", trace.steps_used)
            } else {
                format!("budget exhausted after {} steps", trace.steps_used)
            });
            let status = if trace.terminated {
                Status::Ok
            } else {
                Status::Exhausted
            };
            Ok((emit(json, trace.to_json(), lines.join("\n")), status))
        }
        Command::Fs { ordinal, x } => {
            let xi = parse_with(ordinal, parse_ordinal)?;
            let out = fs_veblen(&xi, *x).to_string();
            done(emit(
                json,
                json!({ "ordinal": xi.to_string(), "x": x, "result": out }),
                out,
            ))
        }
        Command::Growth { function, m } => {
            let (name, witness) = match function {
                Growth::F => ("F", f_witness(*m, cli.budget)),
                Growth::G => ("G", g_witness(*m, cli.budget)),
            };
            let (tag, n, status) = match witness {
                Witness::Found(n) => ("Found", n, Status::Ok),
                Witness::BudgetExhausted(n) => ("BudgetExhausted", n, Status::Exhausted),
            };
            let value = json!({
                "function": name,
                "m": m,
                "budget": cli.budget,
                "result": tag,
                "value": n,
            });
            Ok((emit(json, value, format!("{tag} {n}")), status))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    // deeply nested worms recurse deeply, so commands run on a roomy stack
    let worker = std::thread::Builder::new()
        .stack_size(512 << 20)
        .spawn(move || run(&cli))
        .expect("spawn worker thread");
    match worker.join().expect("worker thread panicked") {
        Ok((out, status)) => {
            let mut stdout = io::stdout().lock();
            // a closed pipe is not an error for a command-line filter
            let _ = writeln!(stdout, "{out}");
            ExitCode::from(status.code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
