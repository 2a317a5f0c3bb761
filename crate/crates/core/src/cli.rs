//! Command-line front end. [`run`] does all the work and returns the exit
//! status, so it can be driven from tests.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::factorize;
use crate::decide::{bigint_string, ispossible, table_generate, DecisionReport, Hypothesis, TableEntry, TableMode};
use crate::hilbert::Place;
use crate::invariants::{
    check_abthm, check_jagy_obstruction, check_strong_approx_failure, invariant_set, InvariantSet,
};
use crate::oracle::{witness_search, Witness};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_REPRESENTABLE: i32 = 0;
pub const EXIT_NOT_REPRESENTABLE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "obstruction", version, about = "Integral solutions of x^2 + y^2 + z^k = m")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether m = x^2 + y^2 + z^k has an integral solution.
    #[command(allow_negative_numbers = true)]
    Decide {
        #[arg(short)]
        k: u64,
        #[arg(short)]
        m: BigInt,
        /// Show the local classes found at each prime and their combination.
        #[arg(long)]
        trace: bool,
        /// Also search for an explicit solution.
        #[arg(long)]
        witness: bool,
        /// Largest |z| tried by --witness.
        #[arg(long, default_value_t = 1000)]
        z_bound: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// List all 1 <= m <= max without integral solution.
    Table {
        #[arg(short)]
        k: u64,
        #[arg(long)]
        max: u64,
        /// Print the integers instead of n^a.
        #[arg(long)]
        raw: bool,
        #[arg(long, value_enum, default_value_t = ModeArg::Fast)]
        mode: ModeArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Local invariant sets I_v(a, b, n) at the relevant places.
    #[command(allow_negative_numbers = true)]
    Invariants {
        #[arg(short)]
        a: u64,
        #[arg(short)]
        b: u64,
        #[arg(short)]
        n: BigInt,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Search for x, y, z with x^2 + y^2 + z^k = m and |z| <= bound.
    #[command(allow_negative_numbers = true)]
    Witness {
        #[arg(short)]
        k: u64,
        #[arg(short)]
        m: BigInt,
        #[arg(long, default_value_t = 1000)]
        z_bound: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Closed-form obstruction criteria.
    Check {
        #[command(subcommand)]
        kind: CheckKind,
    },
}

#[derive(Debug, Subcommand)]
enum CheckKind {
    /// Local solutions everywhere but none in Z: a, b >= 3 odd, n = 6 mod 8, ...
    #[command(allow_negative_numbers = true)]
    Jagy {
        #[arg(short)]
        a: u64,
        #[arg(short)]
        b: u64,
        #[arg(short)]
        n: BigInt,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Failure of strong approximation for x^2 + y^2 + z^(ab) = n^a.
    #[command(allow_negative_numbers = true)]
    StrongApprox {
        #[arg(short)]
        a: u64,
        #[arg(short)]
        b: u64,
        #[arg(short)]
        n: BigInt,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Solvability for k = ab with primes a, b = 1 mod 4.
    #[command(allow_negative_numbers = true)]
    Abthm {
        #[arg(short)]
        a: u64,
        #[arg(short)]
        b: u64,
        #[arg(short)]
        m: BigInt,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Fast,
    Full,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Emit JSON.
    #[arg(long)]
    json: bool,
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// JSON emitted by `decide`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecideOutput {
    pub schema_version: u32,
    pub k: u64,
    #[serde(with = "bigint_string")]
    pub m: BigInt,
    pub verdict: bool,
    pub hypothesis: Hypothesis,
    pub summary: String,
    /// Absent for `m = 0`, which is decided without the algorithm.
    pub report: Option<DecisionReport>,
    pub witness: Option<Witness>,
}

/// JSON emitted by `table`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableOutput {
    pub schema_version: u32,
    pub k: u64,
    pub max: u64,
    pub entries: Vec<TableEntry>,
}

/// JSON emitted by `invariants`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantsOutput {
    pub schema_version: u32,
    pub a: u64,
    pub b: u64,
    #[serde(with = "bigint_string")]
    pub n: BigInt,
    pub places: Vec<InvariantSet>,
}

/// JSON emitted by `witness`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessOutput {
    pub schema_version: u32,
    pub k: u64,
    #[serde(with = "bigint_string")]
    pub m: BigInt,
    pub z_bound: u64,
    pub witness: Option<Witness>,
}

/// JSON emitted by `check`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutput {
    pub schema_version: u32,
    pub kind: String,
    pub a: u64,
    pub b: u64,
    /// `n` for jagy and strong-approx, `m` for abthm.
    #[serde(with = "bigint_string")]
    pub value: BigInt,
    pub result: bool,
    pub message: String,
}

struct Usage(String);

type Outcome = std::result::Result<(String, i32), Usage>;

/// Parses `args` (including the program name), runs the command, writes its
/// output and returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let (output, result) = match cli.command {
        Command::Decide { k, m, trace, witness, z_bound, output } => {
            let json = output.json;
            (output, decide(k, &m, trace, witness.then_some(z_bound), json))
        }
        Command::Table { k, max, raw, mode, output } => {
            let json = output.json;
            (output, table(k, max, raw, mode, json))
        }
        Command::Invariants { a, b, n, output } => {
            let json = output.json;
            (output, invariants(a, b, &n, json))
        }
        Command::Witness { k, m, z_bound, output } => {
            let json = output.json;
            (output, witness(k, &m, z_bound, json))
        }
        Command::Check { kind } => match kind {
            CheckKind::Jagy { a, b, n, output } => {
                let json = output.json;
                (output, check_jagy(a, b, n, json))
            }
            CheckKind::StrongApprox { a, b, n, output } => {
                let json = output.json;
                (output, check_strong(a, b, n, json))
            }
            CheckKind::Abthm { a, b, m, output } => {
                let json = output.json;
                (output, check_ab(a, b, m, json))
            }
        },
    };
    match result {
        Err(Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Ok((text, code)) => match output.out {
            Some(path) => match std::fs::write(&path, text) {
                Ok(()) => code,
                Err(e) => {
                    let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                    EXIT_USAGE
                }
            },
            None => match stdout.write_all(text.as_bytes()) {
                Ok(()) => code,
                Err(_) => EXIT_USAGE,
            },
        },
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output types serialize");
    s.push('\n');
    s
}

fn usage<T>(msg: impl Into<String>) -> std::result::Result<T, Usage> {
    Err(Usage(msg.into()))
}

fn require_odd_k(k: u64) -> std::result::Result<(), Usage> {
    if k == 0 {
        return usage("k must be a positive odd integer");
    }
    if k % 2 == 0 {
        return usage(format!(
            "k = {k} is even; only odd k are supported (for even k local conditions do not suffice, e.g. k = 4, m = 22)"
        ));
    }
    Ok(())
}

fn decide(k: u64, m: &BigInt, trace: bool, z_bound: Option<u64>, json: bool) -> Outcome {
    require_odd_k(k)?;
    let report = if m.is_zero() {
        None
    } else {
        Some(ispossible(k, m).or_else(|e| usage(e.to_string()))?)
    };
    let (verdict, hypothesis, summary) = match &report {
        Some(r) => (r.verdict, r.hypothesis, r.summary()),
        None => (true, Hypothesis::Unconditional, format!("representable: 0 = 0^2 + 0^2 + 0^{k}")),
    };
    let found = z_bound.and_then(|bound| witness_search(k, m, bound));
    let code = if verdict { EXIT_REPRESENTABLE } else { EXIT_NOT_REPRESENTABLE };

    if json {
        let out = DecideOutput {
            schema_version: SCHEMA_VERSION,
            k,
            m: m.clone(),
            verdict,
            hypothesis,
            summary,
            report,
            witness: found,
        };
        return Ok((to_json(&out), code));
    }

    let mut text = format!("{summary}\n");
    if let (true, Some(r)) = (trace, &report) {
        text += &trace_text(r);
    }
    if let Some(bound) = z_bound {
        text += &match &found {
            Some(w) => format!("witness: x = {}, y = {}, z = {}\n", w.x, w.y, w.z),
            None => format!("witness: none with |z| <= {bound}\n"),
        };
    }
    Ok((text, code))
}

fn trace_text(r: &DecisionReport) -> String {
    if r.shortcut.is_some() {
        return format!("m = {}^{}; no local computation needed\n", r.n, r.k);
    }
    let show = |subsets: &mut dyn Iterator<Item = &crate::combi::DivisorSubset>| {
        subsets
            .map(|s| s.display(&r.divisors).to_string())
            .collect::<Vec<_>>()
            .join(", ")
    };
    let mut text = format!("a = {}, b = {}, n = {}, divisors of a: {:?}\n", r.a, r.b, r.n, r.divisors);
    for (p, c) in &r.per_prime {
        text += &format!(
            "p = {p}: W = {{{}}} ({} nodes evaluated, depth {})\n",
            show(&mut c.subsets.iter()),
            c.stats.nodes_evaluated,
            c.stats.max_depth
        );
    }
    text += &format!("T = {{{}}}\n", show(&mut r.aggregate_t.iter()));
    text
}

fn table(k: u64, max: u64, raw: bool, mode: ModeArg, json: bool) -> Outcome {
    require_odd_k(k)?;
    if k < 3 {
        return usage("table needs k >= 3");
    }
    if max == 0 {
        return usage("max must be positive");
    }
    let mode = match mode {
        ModeArg::Fast => TableMode::Fast,
        ModeArg::Full => TableMode::Full,
    };
    let entries = table_generate(k, max, mode).or_else(|e| usage(e.to_string()))?;
    if json {
        let out = TableOutput {
            schema_version: SCHEMA_VERSION,
            k,
            max,
            entries,
        };
        return Ok((to_json(&out), 0));
    }
    let items: Vec<String> = entries
        .iter()
        .map(|e| if raw { e.m.to_string() } else { e.to_string() })
        .collect();
    let sep = if raw { " " } else { ", " };
    Ok((format!("{}\n", items.join(sep)), 0))
}

fn invariants(a: u64, b: u64, n: &BigInt, json: bool) -> Outcome {
    if a == 0 || b == 0 || n.is_zero() {
        return usage("a and b must be positive and n nonzero");
    }
    let two_abn = n * BigInt::from(a) * BigInt::from(b) * 2;
    let primes = factorize(&two_abn).or_else(|e| usage(e.to_string()))?;
    let mut places = vec![Place::Real];
    for p in primes.primes() {
        let p = u64::try_from(p).or_else(|_| usage(format!("prime {p} exceeds 64 bits")))?;
        places.push(Place::prime(p).expect("factor is prime"));
    }
    let sets = places
        .into_iter()
        .map(|v| invariant_set(a, b, n, v))
        .collect::<crate::Result<Vec<_>>>()
        .or_else(|e| usage(e.to_string()))?;
    if json {
        let out = InvariantsOutput {
            schema_version: SCHEMA_VERSION,
            a,
            b,
            n: n.clone(),
            places: sets,
        };
        return Ok((to_json(&out), 0));
    }
    let lines: String = sets
        .iter()
        .map(|s| {
            let place = match s.place {
                Place::Real => "∞".to_string(),
                Place::Prime(p) => p.to_string(),
            };
            let vals: Vec<String> = s.values.iter().map(|v| v.to_string()).collect();
            format!("{place}:{{{}}} {}\n", vals.join(","), s.status)
        })
        .collect();
    Ok((lines, 0))
}

fn witness(k: u64, m: &BigInt, z_bound: u64, json: bool) -> Outcome {
    if k == 0 {
        return usage("k must be positive");
    }
    let found = witness_search(k, m, z_bound);
    if json {
        let out = WitnessOutput {
            schema_version: SCHEMA_VERSION,
            k,
            m: m.clone(),
            z_bound,
            witness: found,
        };
        return Ok((to_json(&out), 0));
    }
    Ok((
        match found {
            Some(w) => format!("x = {}, y = {}, z = {}\n", w.x, w.y, w.z),
            None => format!("none with |z| <= {z_bound}\n"),
        },
        0,
    ))
}

fn check_output(kind: &str, a: u64, b: u64, value: BigInt, result: bool, message: &str, json: bool) -> Outcome {
    if json {
        let out = CheckOutput {
            schema_version: SCHEMA_VERSION,
            kind: kind.to_string(),
            a,
            b,
            value,
            result,
            message: message.to_string(),
        };
        return Ok((to_json(&out), 0));
    }
    Ok((format!("{message}\n"), 0))
}

fn check_jagy(a: u64, b: u64, n: BigInt, json: bool) -> Outcome {
    if a < 3 || b < 3 || a % 2 == 0 || b % 2 == 0 {
        return usage("jagy needs odd a, b >= 3");
    }
    if n.is_zero() {
        return usage("n must be nonzero");
    }
    let result = check_jagy_obstruction(a, b, &n);
    let message = if result { "obstructed" } else { "not obstructed by this criterion" };
    check_output("jagy", a, b, n, result, message, json)
}

fn check_strong(a: u64, b: u64, n: BigInt, json: bool) -> Outcome {
    if a == 0 || b == 0 || n.is_zero() {
        return usage("a and b must be positive and n nonzero");
    }
    if n < BigInt::zero() && (a * b) % 2 == 0 {
        return usage("need n > 0 or ab odd");
    }
    let result = check_strong_approx_failure(a, b, &n);
    let message = if result { "fails" } else { "not shown to fail" };
    check_output("strong-approx", a, b, n, result, message, json)
}

fn check_ab(a: u64, b: u64, m: BigInt, json: bool) -> Outcome {
    let result = check_abthm(a, b, &m).or_else(|e| usage(e.to_string()))?;
    let message = if result {
        "solvable (assuming Schinzel (H))"
    } else {
        "not solvable (unconditional)"
    };
    check_output("abthm", a, b, m, result, message, json)
}
