use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use charsum::bench::bench;
use charsum::parse::{parse_int_list, parse_query};
use charsum::verify::{run_sweep, BPolicy, Suite, SweepConfig};
use charsum::{
    gauss_eval, jacobi_eval, Character, EvalOptions, GaussMethod, JacobiMethod, SumResult,
    UnitGroupContext,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

mod exit;

use exit::{CliError, EXIT_FAILURES};

#[derive(Parser)]
#[command(name = "charsum", version, about = "Gauss and Jacobi sums modulo prime powers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate G(chi, p^m).
    Gauss(GaussArgs),
    /// Evaluate J_B(chi_1, ..., chi_k, p^m).
    Jacobi(JacobiArgs),
    /// Run the property sweeps and report every comparison.
    Verify(VerifyArgs),
    /// Time closed forms against direct summation.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum GaussMethodArg {
    Auto,
    Brute,
    Closed,
}

#[derive(Clone, Copy, ValueEnum)]
enum JacobiMethodArg {
    Auto,
    Brute,
    Closed,
    Quotient,
    Direct,
}

#[derive(Args)]
struct GaussArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    m: u32,
    /// Character exponent: chi(a) = e(c / phi(p^m)), or chi(5) = e(c / 2^(m-2)) for p = 2.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    c: i64,
    /// chi(-1) = (-1)^sign, p = 2 only.
    #[arg(long, default_value_t = 0)]
    sign: u8,
    #[arg(long, value_enum, default_value = "auto")]
    method: GaussMethodArg,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct JacobiArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    m: u32,
    /// Comma-separated exponents c_1,...,c_k.
    #[arg(long, allow_hyphen_values = true)]
    chars: String,
    /// Comma-separated sign bits, p = 2 only.
    #[arg(long)]
    signs: Option<String>,
    #[arg(long = "B", default_value_t = 1, allow_hyphen_values = true)]
    b: i64,
    #[arg(long, value_enum, default_value = "auto")]
    method: JacobiMethodArg,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    /// Comma-separated primes.
    #[arg(long, default_value = "2,3,5,7")]
    primes: String,
    #[arg(long, default_value_t = 1)]
    m_min: u32,
    #[arg(long, default_value_t = 7)]
    m_max: u32,
    /// Largest modulus in the Jacobi suites.
    #[arg(long, default_value_t = 128)]
    max_modulus: u64,
    /// Largest modulus in the Gauss suites.
    #[arg(long, default_value_t = 2048)]
    max_gauss_modulus: u64,
    #[arg(long, default_value_t = 2)]
    k_min: usize,
    #[arg(long, default_value_t = 3)]
    k_max: usize,
    /// Random B values per tuple on top of the powers of p.
    #[arg(long)]
    b_samples: Option<usize>,
    /// Tuples per (modulus, k) beyond which tuples are sampled.
    #[arg(long, default_value_t = 200)]
    cap: usize,
    #[arg(long, default_value_t = 1e-6)]
    tolerance: f64,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated suite names; all suites when omitted.
    #[arg(long)]
    suites: Option<String>,
    #[arg(long, value_enum, default_value = "csv")]
    format: ReportFormat,
    /// Report destination; standard output when omitted.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    m: u32,
    /// 1 times the Gauss sum, k >= 2 the Jacobi sum with B = 1.
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = 20)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = EvalOptions::from_env();
    let outcome = match cli.command {
        Command::Gauss(a) => cmd_gauss(a, &opts),
        Command::Jacobi(a) => cmd_jacobi(a, &opts),
        Command::Verify(a) => cmd_verify(a, &opts),
        Command::Bench(a) => cmd_bench(a, &opts),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("charsum: {e}");
            e.exit_code()
        }
    }
}

fn print_result(r: &SumResult, ctx: &UnitGroupContext, format: Format) -> Result<(), CliError> {
    let p = ctx.modulus().p();
    let mut out = io::stdout().lock();
    match format {
        Format::Json => {
            let mut rec = r.to_record(p);
            rec.generator = Some(ctx.generator());
            let line = serde_json::to_string(&rec).map_err(|e| CliError::Io(e.into()))?;
            writeln!(out, "{line}")?;
        }
        Format::Text => {
            let z = r.to_complex();
            let value = match r.as_exact() {
                Some(e) => e.to_string(),
                None => "numeric".to_string(),
            };
            writeln!(out, "modulus   {} (generator {})", ctx.modulus().q(), ctx.generator())?;
            writeln!(out, "method    {}", r.method)?;
            writeln!(out, "value     {value}")?;
            writeln!(out, "complex   {:.12} {:+.12}i", z.re, z.im)?;
            if !r.notes.is_empty() {
                writeln!(out, "notes     {}", r.notes)?;
            }
        }
    }
    Ok(())
}

fn cmd_gauss(a: GaussArgs, opts: &EvalOptions) -> Result<ExitCode, CliError> {
    let ctx = UnitGroupContext::new(a.p, a.m)?;
    let chi = Character::new(&ctx, a.c, a.sign)?;
    let method = match a.method {
        GaussMethodArg::Auto => GaussMethod::Auto,
        GaussMethodArg::Brute => GaussMethod::Brute,
        GaussMethodArg::Closed => GaussMethod::Closed,
    };
    let r = gauss_eval(&chi, method, opts)?;
    print_result(&r, &ctx, a.format)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_jacobi(a: JacobiArgs, opts: &EvalOptions) -> Result<ExitCode, CliError> {
    let query = parse_query(a.p, a.m, &a.chars, a.signs.as_deref(), a.b)?;
    let method = match a.method {
        JacobiMethodArg::Auto => JacobiMethod::Auto,
        JacobiMethodArg::Brute => JacobiMethod::Brute,
        JacobiMethodArg::Closed => JacobiMethod::Closed,
        JacobiMethodArg::Quotient => JacobiMethod::Quotient,
        JacobiMethodArg::Direct => JacobiMethod::Direct,
    };
    let r = jacobi_eval(&query, method, opts)?;
    print_result(&r, query.context(), a.format)?;
    Ok(ExitCode::SUCCESS)
}

fn sweep_config(a: &VerifyArgs, opts: &EvalOptions) -> Result<SweepConfig, CliError> {
    let primes = if a.primes.trim().is_empty() {
        Vec::new()
    } else {
        parse_int_list(&a.primes)?
            .into_iter()
            .map(|p| u64::try_from(p).map_err(|_| charsum::Error::InvalidArgument(format!("bad prime {p}"))))
            .collect::<Result<Vec<_>, _>>()?
    };
    let suites = match &a.suites {
        None => Suite::ALL.to_vec(),
        Some(s) => s
            .split(',')
            .map(|t| t.trim().parse::<Suite>())
            .collect::<Result<Vec<_>, _>>()?,
    };
    let defaults = SweepConfig::default();
    Ok(SweepConfig {
        primes,
        m_range: (a.m_min, a.m_max),
        max_modulus: a.max_modulus,
        max_gauss_modulus: a.max_gauss_modulus,
        k_range: (a.k_min, a.k_max),
        b_policy: a.b_samples.map_or(BPolicy::AllPowers, BPolicy::Sample),
        sample_cap: a.cap,
        tolerance: a.tolerance,
        jobs: a.jobs.unwrap_or(defaults.jobs),
        term_guard: opts.jacobi_term_guard,
        seed: a.seed,
        suites,
    })
}

fn cmd_verify(a: VerifyArgs, opts: &EvalOptions) -> Result<ExitCode, CliError> {
    let cfg = sweep_config(&a, opts)?;
    let report = run_sweep(&cfg)?;
    let sink: Box<dyn Write> = match &a.output {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    let mut sink = BufWriter::new(sink);
    match a.format {
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(&mut sink);
            for r in &report.records {
                w.serialize(r).map_err(|e| CliError::Io(e.into()))?;
            }
            w.flush()?;
        }
        ReportFormat::Json => {
            for r in &report.records {
                serde_json::to_writer(&mut sink, r).map_err(|e| CliError::Io(e.into()))?;
                writeln!(sink)?;
            }
        }
    }
    sink.flush()?;
    drop(sink);

    for s in &cfg.suites {
        eprintln!("{:<20} {}", s.as_str(), report.suite_summary(*s));
    }
    let summary = report.summary();
    eprintln!("summary: {summary}");
    Ok(if summary.fail == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAILURES)
    })
}

fn cmd_bench(a: BenchArgs, opts: &EvalOptions) -> Result<ExitCode, CliError> {
    let row = bench(a.p, a.m, a.k, a.reps, a.seed, opts)?;
    let mut w = csv::Writer::from_writer(io::stdout().lock());
    w.serialize(&row).map_err(|e| CliError::Io(e.into()))?;
    w.flush()?;
    Ok(ExitCode::SUCCESS)
}
