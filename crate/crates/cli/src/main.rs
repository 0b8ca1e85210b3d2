//! Command-line surface for the Euler-product toolkit.
//!
//! Exit codes are a stable contract: 0 success, 1 a verified property was
//! violated, 2 input/validation error, 3 evaluation plan infeasible.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::{Integer, Rational};
use serde::Serialize;

use eulerprod::congruence::{verify_trace_congruence, IntMatrix};
use eulerprod::evaluate::{evaluate_constant, EvalError, DEFAULT_GUARD_DIGITS};
use eulerprod::expand::{product_exponents, rewrite_nonnegative, SignChoice};
use eulerprod::funcs::{builtin, builtin_names, parse, ConstantSpec};
use eulerprod::mpreal::{partial_zeta, precision_for_digits};
use eulerprod::qseries::log_deriv_series;

#[derive(Parser)]
#[command(
    name = "eulerprod",
    version,
    about = "Certified evaluation of prime Euler products and exact product expansions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the exponents of the product expansion of a function
    Expand(ExpandArgs),
    /// Evaluate prefactor · ∏_p f(1/p) to a certified number of digits
    Eval(EvalArgs),
    /// Verify trace congruences tr A^{p^m} ≡ tr A^{p^{m-1}} (mod p^m)
    Arnold(ArnoldArgs),
    /// Print a partial zeta value ζ_m(n)
    Zeta(ZetaArgs),
}

#[derive(Args)]
struct ExpandArgs {
    /// Expression for f (grammar: z, pi, rationals, + - * / ^, ln, exp, sqrt)
    #[arg(long, conflicts_with = "builtin")]
    function: Option<String>,
    /// Name of a built-in constant's integrand
    #[arg(long)]
    builtin: Option<String>,
    /// Number of exponents to compute
    #[arg(long)]
    order: usize,
    /// Sign convention for the expansion factors
    #[arg(long, value_enum, default_value_t = SignMode::Minus)]
    signs: SignMode,
    #[arg(long)]
    json: bool,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum SignMode {
    Minus,
    Plus,
    Adaptive,
}

impl SignMode {
    fn as_str(self) -> &'static str {
        match self {
            SignMode::Minus => "minus",
            SignMode::Plus => "plus",
            SignMode::Adaptive => "adaptive",
        }
    }
}

#[derive(Args)]
struct EvalArgs {
    /// Built-in constant name (see `--list`)
    #[arg(long)]
    builtin: Option<String>,
    /// Custom integrand f with f(0) = 1 and f'(0) = 0
    #[arg(long, conflicts_with = "builtin")]
    function: Option<String>,
    /// Constant prefactor expression (default 1)
    #[arg(long)]
    prefactor: Option<String>,
    /// Radius R in (0, 1] on which the |f'/f| bound holds (rational, e.g. 9/10)
    #[arg(long = "R")]
    radius: Option<String>,
    /// Upper bound B for |f'/f| on |z| = R (rational)
    #[arg(long = "B")]
    bound: Option<String>,
    /// Decimal digits to certify
    #[arg(long)]
    digits: Option<u32>,
    /// Index of the first prime folded into the zeta tail
    #[arg(long)]
    m: Option<usize>,
    /// Optional key=value config file (keys: digits, m, guard_digits)
    #[arg(long)]
    config: Option<PathBuf>,
    /// List built-in constants and exit
    #[arg(long)]
    list: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ArnoldArgs {
    /// Matrix file: dimension k on the first line, then k rows of k integers
    #[arg(long)]
    matrix: PathBuf,
    /// Prime base of the congruence moduli
    #[arg(long)]
    p: u64,
    /// Check exponents m = 1..=kmax
    #[arg(long)]
    kmax: u32,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ZetaArgs {
    /// Start index of the partial Euler product (m = 1 gives ζ itself)
    #[arg(long)]
    m: usize,
    /// Integer argument, at least 2
    #[arg(long)]
    n: u32,
    /// Decimal digits to print
    #[arg(long)]
    digits: u32,
    #[arg(long)]
    json: bool,
}

enum CmdError {
    /// Bad input or validation failure: exit 2.
    Input(String),
    /// Evaluation plan infeasible: exit 3.
    Plan(String),
    /// A checked property failed (already reported on stdout): exit 1.
    PropertyViolated,
}

impl From<EvalError> for CmdError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Plan(msg) => CmdError::Plan(format!("plan error: {msg}")),
            other => CmdError::Input(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Expand(args) => cmd_expand(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Arnold(args) => cmd_arnold(args),
        Command::Zeta(args) => cmd_zeta(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CmdError::PropertyViolated) => ExitCode::from(1),
        Err(CmdError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CmdError::Plan(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

// ---------------------------------------------------------------- expand

#[derive(Serialize)]
struct ExpandRecord {
    command: &'static str,
    inputs: ExpandInputs,
    exponents: Vec<ExponentRow>,
}

#[derive(Serialize)]
struct ExpandInputs {
    function: String,
    order: usize,
    signs: &'static str,
}

#[derive(Serialize)]
struct ExponentRow {
    n: usize,
    sign: i32,
    alpha: String,
}

fn cmd_expand(args: ExpandArgs) -> Result<(), CmdError> {
    if args.order < 1 {
        return Err(CmdError::Input("--order must be at least 1".into()));
    }
    let f = match (&args.function, &args.builtin) {
        (Some(text), None) => parse(text).map_err(|e| CmdError::Input(e.to_string()))?,
        (None, Some(name)) => builtin(name).map_err(|e| CmdError::Input(e.to_string()))?.f,
        _ => {
            return Err(CmdError::Input(
                "exactly one of --function or --builtin is required".into(),
            ))
        }
    };
    let b = eulerprod::funcs::taylor(&f, args.order).map_err(|e| CmdError::Input(e.to_string()))?;
    if *b.coeff(0) != 1 {
        return Err(CmdError::Input(format!(
            "f(0) must be 1 for a product expansion, got {}",
            b.coeff(0)
        )));
    }
    let g = log_deriv_series(&b).map_err(|e| CmdError::Input(e.to_string()))?;
    let seq = match args.signs {
        SignMode::Minus => product_exponents(&g, &SignChoice::AllMinus, args.order),
        SignMode::Plus => product_exponents(&g, &SignChoice::AllPlus, args.order),
        SignMode::Adaptive => {
            rewrite_nonnegative(&product_exponents(&g, &SignChoice::AllMinus, args.order))
        }
    };
    let rows: Vec<ExponentRow> = seq
        .iter()
        .map(|(n, sign, alpha)| ExponentRow {
            n,
            sign: sign.value(),
            alpha: alpha.to_string(),
        })
        .collect();
    if args.json {
        let record = ExpandRecord {
            command: "expand",
            inputs: ExpandInputs {
                function: f.to_string(),
                order: args.order,
                signs: args.signs.as_str(),
            },
            exponents: rows,
        };
        println!(
            "{}",
            serde_json::to_string_pretty(&record).expect("serializable")
        );
    } else {
        println!("f = {f}");
        println!("{:>5}  {:>4}  alpha", "n", "eps");
        for row in rows {
            println!("{:>5}  {:>4}  {}", row.n, format_sign(row.sign), row.alpha);
        }
    }
    Ok(())
}

fn format_sign(sign: i32) -> String {
    if sign >= 0 {
        format!("+{sign}")
    } else {
        sign.to_string()
    }
}

// ------------------------------------------------------------------ eval

#[derive(Default)]
struct FileConfig {
    digits: Option<u32>,
    start_index: Option<usize>,
    guard_digits: Option<u32>,
}

fn read_config(path: &PathBuf) -> Result<FileConfig, CmdError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CmdError::Input(format!("cannot read config {}: {e}", path.display())))?;
    let mut config = FileConfig::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CmdError::Input(format!("config line {} is not key=value", lineno + 1))
        })?;
        let key = key.trim();
        let value = value.trim();
        let parse_err =
            |e: std::num::ParseIntError| CmdError::Input(format!("config key {key}: {e}"));
        match key {
            "digits" => config.digits = Some(value.parse().map_err(parse_err)?),
            "m" => config.start_index = Some(value.parse().map_err(parse_err)?),
            "guard_digits" => config.guard_digits = Some(value.parse().map_err(parse_err)?),
            other => {
                return Err(CmdError::Input(format!("unknown config key '{other}'")));
            }
        }
    }
    Ok(config)
}

fn parse_rational_arg(name: &str, text: &str) -> Result<Rational, CmdError> {
    let value: Rational = text.trim().parse().map_err(|_| {
        CmdError::Input(format!("{name} must be a rational like 9/10, got '{text}'"))
    })?;
    Ok(value)
}

#[derive(Serialize)]
struct EvalRecord {
    command: &'static str,
    inputs: EvalInputs,
    value: String,
    certified_digits: u32,
    plan: PlanRecord,
}

#[derive(Serialize)]
struct EvalInputs {
    name: String,
    function: String,
    prefactor: String,
    #[serde(rename = "R")]
    radius: String,
    #[serde(rename = "B")]
    bound: String,
    digits: u32,
    m: usize,
    guard_digits: u32,
}

#[derive(Serialize)]
struct PlanRecord {
    #[serde(rename = "R")]
    radius: String,
    #[serde(rename = "B")]
    bound: String,
    m: usize,
    #[serde(rename = "M")]
    truncation_order: usize,
    #[serde(rename = "C")]
    truncation_bound: String,
    working_precision_bits: u32,
}

fn cmd_eval(args: EvalArgs) -> Result<(), CmdError> {
    if args.list {
        for name in builtin_names() {
            println!("{name}");
        }
        return Ok(());
    }
    let config = match &args.config {
        Some(path) => read_config(path)?,
        None => FileConfig::default(),
    };
    let digits = args
        .digits
        .or(config.digits)
        .ok_or_else(|| CmdError::Input("--digits is required (flag or config)".into()))?;
    if digits < 1 {
        return Err(CmdError::Input("--digits must be at least 1".into()));
    }
    let guard = config.guard_digits.unwrap_or(DEFAULT_GUARD_DIGITS);
    let spec: ConstantSpec = match (&args.builtin, &args.function) {
        (Some(name), None) => {
            if args.radius.is_some() || args.bound.is_some() || args.prefactor.is_some() {
                return Err(CmdError::Input(
                    "--prefactor/--R/--B apply only to --function evaluations".into(),
                ));
            }
            builtin(name).map_err(|e| CmdError::Input(e.to_string()))?
        }
        (None, Some(text)) => {
            let f = parse(text).map_err(|e| CmdError::Input(e.to_string()))?;
            let prefactor = match &args.prefactor {
                Some(p) => parse(p).map_err(|e| CmdError::Input(e.to_string()))?,
                None => parse("1").expect("constant parses"),
            };
            let radius_text = args
                .radius
                .as_deref()
                .ok_or_else(|| CmdError::Input("--R is required with --function".into()))?;
            let bound_text = args
                .bound
                .as_deref()
                .ok_or_else(|| CmdError::Input("--B is required with --function".into()))?;
            ConstantSpec {
                name: "custom".into(),
                f,
                prefactor,
                radius: parse_rational_arg("--R", radius_text)?,
                log_deriv_bound: parse_rational_arg("--B", bound_text)?,
                start_index: 7,
            }
        }
        _ => {
            return Err(CmdError::Input(
                "exactly one of --builtin or --function is required".into(),
            ))
        }
    };
    let start_override = args.m.or(config.start_index);
    let started = Instant::now();
    let out = evaluate_constant(&spec, digits, start_override, guard)?;
    let elapsed = started.elapsed();
    let record = EvalRecord {
        command: "eval",
        inputs: EvalInputs {
            name: spec.name.clone(),
            function: spec.f.to_string(),
            prefactor: spec.prefactor.to_string(),
            radius: spec.radius.to_string(),
            bound: spec.log_deriv_bound.to_string(),
            digits,
            m: out.plan.start_index,
            guard_digits: guard,
        },
        value: out.decimal_string(),
        certified_digits: out.certified_digits,
        plan: PlanRecord {
            radius: out.plan.radius.to_string(),
            bound: out.plan.log_deriv_bound.to_string(),
            m: out.plan.start_index,
            truncation_order: out.plan.truncation_order,
            truncation_bound: rational_upper_sci(&out.plan.truncation_bound, 3),
            working_precision_bits: out.plan.working_precision,
        },
    };
    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&record).expect("serializable")
        );
    } else {
        println!("constant    {}", record.inputs.name);
        println!("value       {}", record.value);
        let prefix = certified_prefix(&record.value, out.certified_digits as usize);
        println!(
            "certified   {} significant digits: {}",
            out.certified_digits, prefix
        );
        println!(
            "plan        R = {}, B = {}, m = {}, M = {}, C <= {}",
            record.plan.radius,
            record.plan.bound,
            record.plan.m,
            record.plan.truncation_order,
            record.plan.truncation_bound,
        );
        println!(
            "precision   {} bits working",
            record.plan.working_precision_bits
        );
        println!("elapsed     {:.3} s", elapsed.as_secs_f64());
    }
    Ok(())
}

/// The prefix of a plain decimal string holding its first `digits`
/// significant digits.
fn certified_prefix(decimal: &str, digits: usize) -> String {
    let mut seen = 0usize;
    let mut out = String::new();
    for c in decimal.chars() {
        out.push(c);
        if c.is_ascii_digit() && !(seen == 0 && c == '0') {
            seen += 1;
            if seen == digits {
                break;
            }
        }
    }
    out
}

/// Upper-bound scientific rendering of a positive rational: `d.dd e-E`
/// with the mantissa rounded up, so the printed value still dominates.
fn rational_upper_sci(q: &Rational, sig_digits: usize) -> String {
    use rug::ops::Pow;
    if *q == 0 {
        return "0".into();
    }
    assert!(*q > 0, "sci rendering expects a bound > 0");
    let digits = |i: &Integer| i.to_string().len() as i64;
    let mut exponent = digits(q.numer()) - digits(q.denom());
    loop {
        let shift = sig_digits as i64 - 1 - exponent;
        let mut num = q.numer().clone();
        let mut den = q.denom().clone();
        if shift >= 0 {
            num *= Integer::from(10).pow(shift as u32);
        } else {
            den *= Integer::from(10).pow((-shift) as u32);
        }
        // ceiling division keeps this an upper bound
        let mut mantissa = Integer::from(&num + &den);
        mantissa -= 1;
        mantissa /= den;
        let text = mantissa.to_string();
        if text.len() > sig_digits {
            exponent += 1;
            continue;
        }
        if text.len() < sig_digits {
            exponent -= 1;
            continue;
        }
        return format!("{}.{}e{}", &text[..1], &text[1..], exponent);
    }
}

// ---------------------------------------------------------------- arnold

#[derive(Serialize)]
struct ArnoldRecord {
    command: &'static str,
    inputs: ArnoldInputs,
    checks: Vec<CheckRow>,
    all_pass: bool,
}

#[derive(Serialize)]
struct ArnoldInputs {
    matrix: String,
    dim: usize,
    p: u64,
    kmax: u32,
}

#[derive(Serialize)]
struct CheckRow {
    m: u32,
    modulus: String,
    trace_high: String,
    trace_low: String,
    pass: bool,
}

fn cmd_arnold(args: ArnoldArgs) -> Result<(), CmdError> {
    if args.kmax < 1 {
        return Err(CmdError::Input("--kmax must be at least 1".into()));
    }
    let text = std::fs::read_to_string(&args.matrix)
        .map_err(|e| CmdError::Input(format!("cannot read {}: {e}", args.matrix.display())))?;
    let matrix = IntMatrix::parse(&text).map_err(|e| CmdError::Input(e.to_string()))?;
    let report = verify_trace_congruence(&matrix, args.p, args.kmax)
        .map_err(|e| CmdError::Input(e.to_string()))?;
    let record = ArnoldRecord {
        command: "arnold",
        inputs: ArnoldInputs {
            matrix: args.matrix.display().to_string(),
            dim: report.dim,
            p: args.p,
            kmax: args.kmax,
        },
        checks: report
            .checks
            .iter()
            .map(|c| CheckRow {
                m: c.exponent,
                modulus: c.modulus.to_string(),
                trace_high: c.lhs.to_string(),
                trace_low: c.rhs.to_string(),
                pass: c.pass,
            })
            .collect(),
        all_pass: report.all_pass(),
    };
    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&record).expect("serializable")
        );
    } else {
        for c in &record.checks {
            println!(
                "m={}: tr A^({}^{}) = {}, tr A^({}^{}) = {} (mod {}) {}",
                c.m,
                args.p,
                c.m,
                c.trace_high,
                args.p,
                c.m - 1,
                c.trace_low,
                c.modulus,
                if c.pass { "PASS" } else { "FAIL" }
            );
        }
        println!(
            "{}",
            if record.all_pass {
                "all congruences hold"
            } else {
                "CONGRUENCE VIOLATED"
            }
        );
    }
    if record.all_pass {
        Ok(())
    } else {
        Err(CmdError::PropertyViolated)
    }
}

// ------------------------------------------------------------------ zeta

#[derive(Serialize)]
struct ZetaRecord {
    command: &'static str,
    inputs: ZetaInputs,
    value: String,
}

#[derive(Serialize)]
struct ZetaInputs {
    m: usize,
    n: u32,
    digits: u32,
}

fn cmd_zeta(args: ZetaArgs) -> Result<(), CmdError> {
    if args.n < 2 {
        return Err(CmdError::Input("--n must be at least 2".into()));
    }
    if args.m < 1 {
        return Err(CmdError::Input("--m must be at least 1".into()));
    }
    if args.digits < 1 {
        return Err(CmdError::Input("--digits must be at least 1".into()));
    }
    let prec = precision_for_digits(args.digits + 10);
    let primes = eulerprod::arith::sieve_covering(args.m + 1);
    let value =
        partial_zeta(args.m, args.n, prec, &primes).map_err(|e| CmdError::Input(e.to_string()))?;
    let record = ZetaRecord {
        command: "zeta",
        inputs: ZetaInputs {
            m: args.m,
            n: args.n,
            digits: args.digits,
        },
        value: value.to_decimal(args.digits as usize),
    };
    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&record).expect("serializable")
        );
    } else {
        println!("{}", record.value);
    }
    Ok(())
}
